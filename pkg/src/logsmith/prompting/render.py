"""Loading and filling ``{{placeholder}}`` text templates."""
from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources
from pathlib import Path

_SLOT = re.compile(r"\{\{\s*([a-z_][a-z0-9_]*)\s*\}\}")

POSITION_TEMPLATES = {
    "Branch": "position_branch.txt",
    "TryCatch": "position_trycatch.txt",
    "Loop": "position_loop.txt",
    "MethodDef": "position_methoddef.txt",
}


class TemplateError(KeyError):
    pass


@lru_cache(maxsize=None)
def _packaged(name: str) -> str:
    return resources.files("logsmith.prompting").joinpath("templates", name).read_text("utf-8")


def load_template(name: str, template_dir: str | Path | None = None) -> str:
    """Read a template, preferring an override directory when one is given."""
    if template_dir is not None:
        candidate = Path(template_dir) / name
        if candidate.is_file():
            return candidate.read_text("utf-8")
    return _packaged(name)


def placeholders(template: str) -> list[str]:
    return sorted(set(_SLOT.findall(template)))


def fill(template: str, values: dict[str, object]) -> str:
    """Substitute every slot; unknown or missing names raise TemplateError."""
    missing = [n for n in placeholders(template) if n not in values]
    if missing:
        raise TemplateError(f"missing template values: {', '.join(missing)}")
    return _SLOT.sub(lambda m: str(values[m.group(1)]), template)


def rule_text(kind: str, template_dir: str | Path | None = None) -> str:
    """The heuristic rule sentence embedded in a kind's position template."""
    lines = load_template(POSITION_TEMPLATES[kind], template_dir).splitlines()
    for i, line in enumerate(lines):
        if line.startswith("Heuristic rule for"):
            return lines[i + 1].strip()
    return ""
