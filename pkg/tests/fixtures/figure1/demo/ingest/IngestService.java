package demo.ingest;

import java.util.HashMap;
import java.util.Map;
import org.slf4j.Logger;
import org.slf4j.LoggerFactory;

public class IngestService {
    private static final Logger LOG = LoggerFactory.getLogger(IngestService.class);
    public Map<String, String> receive_data(String channel) {
        Map<String, String> packet = new HashMap<>();
        packet.put("channel", channel);
        return packet;
    }

    private final DataProcessor processor = new DataProcessor();

    public String handle(String channel, String payload) {
        Map<String, String> packet = receive_data(channel);
        Map<String, String> metadata = new HashMap<>(packet);
        metadata.put("payload", payload);
        Map<String, String> processed = processor.process_data(metadata);
        int attempts = 0;
        while (attempts < 3) {
            attempts++;
        }
        StringBuilder audit = new StringBuilder();
        audit.append(channel);
        audit.append(attempts);
        String summary = audit.toString();
        if (summary.isEmpty()) {
            return "";
        }
        String result = processed.get("result");
        if (result == null) {
            LOG.error("Failed to process data due to lack of original data info in metadata {}", metadata);
            return null;
        }
        return result;
    }
}
