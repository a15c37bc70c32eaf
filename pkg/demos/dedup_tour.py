"""A tour of the redundancy filter that runs after logs are generated.

A model asked about each block in isolation tends to log the same event
twice: once where an exception is thrown and again where it is caught, say,
or in both arms of an if/else.  `deduplicate` takes the positions of the
predicted logs, looks at control flow, data flow and message similarity, and
removes the weaker log of each redundant pair.  Logs the developer wrote are
never touched.

    python3 demos/dedup_tour.py
"""
from logsmith.codemodel import parse_sources
from logsmith.refinement import deduplicate, jaccard, message_tokens

HEADER = """package d;
import org.slf4j.Logger;
import org.slf4j.LoggerFactory;
public class T {
    private static final Logger LOG = LoggerFactory.getLogger(T.class);
"""

EXAMPLES = {
    "a throw whose caller already prints the message": """
    void check(int x) {
        if (x < 0) {
            LOG.error("invalid state x"); // predicted
            throw new IllegalStateException("invalid state x");
        }
    }
    void run(int x) {
        try {
            check(x);
        } catch (IllegalStateException e) {
            System.out.println(e.getMessage());
        }
    }
""",
    "the same message in both arms of an if/else": """
    void f(int x) {
        if (x > 0) {
            LOG.info("Connection lost"); // predicted
        } else {
            LOG.warn("Connection lost"); // predicted
        }
    }
""",
    "a start log that always precedes its end log": """
    void sync(int x) {
        LOG.info("Starting sync"); // predicted
        x = x + 1;
        LOG.info("Finished sync"); // predicted
    }
""",
    "two logs of one variable that never changes in between": """
    void f(int x) {
        LOG.info("Processing item {}", x); // predicted
        int y = x * 2;
        LOG.info("Processing item {}", x); // predicted
    }
""",
}

for title, body in EXAMPLES.items():
    src = HEADER + body + "}\n"
    lines = [no for no, text in enumerate(src.splitlines(), 1) if text.endswith("// predicted")]
    result = deduplicate(parse_sources({"d/T.java": src}), [("d/T.java", n) for n in lines])
    print(f"== {title}")
    for removal in result.removed:
        log = removal.site.to_record()
        print(f"   rule {removal.rule!r} removes line {log['line']}: {log['level']} {log['message']!r}")
    kept = [lines[i] for i in result.survivors]
    print(f"   kept lines {kept}\n")

# Message equivalence is a token-set Jaccard score with a configurable cutoff.
a, b = "Failed to connect to {} after retries", "Could not connect to {} after retries"
print(f"jaccard({a!r}, {b!r}) = {jaccard(message_tokens(a), message_tokens(b)):.2f}")
