"""Five-component prompt assembler with per-component ablation toggles.

Component texts are versioned plain-text assets under ``assets/<version>/``.
Assembly order is fixed: role, chain of thought, complete example,
function usage examples, constraints.  Every bundle carries a fingerprint
hashing the config bits, the included asset bytes and the problem text,
recorded per run for provenance.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

ASSET_ROOT = Path(__file__).parent / "assets"
DEFAULT_ASSET_VERSION = "v1"

# (component key, config attribute, section header)
COMPONENT_ORDER = (
    ("role", "include_role", "### Role specification"),
    ("chain_of_thought", "include_chain_of_thought", "### Chain of thought"),
    ("complete_example", "include_complete_example", "### Complete example"),
    ("function_examples", "include_function_examples", "### Function usage examples"),
    ("constraints", "include_constraints", "### Constraints"),
)

PROPOSED_NAME = "Proposed prompt template"


class MissingAsset(FileNotFoundError):
    """A component asset file is absent for the requested version."""


@dataclass(frozen=True)
class PromptConfig:
    name: str = PROPOSED_NAME
    include_role: bool = True
    include_chain_of_thought: bool = True
    include_complete_example: bool = True
    include_function_examples: bool = True
    include_constraints: bool = True
    asset_version: str = DEFAULT_ASSET_VERSION

    def included_components(self) -> tuple[str, ...]:
        return tuple(key for key, attr, _ in COMPONENT_ORDER if getattr(self, attr))

    def bits(self) -> str:
        return "".join("1" if getattr(self, attr) else "0" for _, attr, _ in COMPONENT_ORDER)


@dataclass(frozen=True)
class PromptBundle:
    system_text: str
    user_text: str
    fingerprint: str
    config_name: str


def load_asset(component: str, version: str = DEFAULT_ASSET_VERSION) -> str:
    path = ASSET_ROOT / version / f"{component}.txt"
    if not path.is_file():
        raise MissingAsset(f"prompt asset not found: {path}")
    return path.read_text(encoding="utf-8")


def assemble(config: PromptConfig, problem_text: str) -> PromptBundle:
    """Build the system prompt from the enabled components, in fixed order."""
    sections: list[str] = []
    hasher = hashlib.sha256()
    hasher.update(config.asset_version.encode())
    hasher.update(b"\x00" + config.bits().encode())
    for key, attr, header in COMPONENT_ORDER:
        if not getattr(config, attr):
            continue
        body = load_asset(key, config.asset_version)
        hasher.update(b"\x00" + body.encode("utf-8"))
        sections.append(f"{header}\n{body.rstrip()}")
    hasher.update(b"\x00" + problem_text.encode("utf-8"))
    return PromptBundle(
        system_text="\n\n".join(sections) + "\n",
        user_text=problem_text,
        fingerprint=hasher.hexdigest(),
        config_name=config.name,
    )


def ablation_grid() -> list[PromptConfig]:
    """The five ablation configurations: proposed plus one component removed.

    Role specification stays in every configuration; the study removes
    only the four reasoning/example/constraint components.
    """
    return [
        PromptConfig(),
        PromptConfig(name="w/o chain of thought", include_chain_of_thought=False),
        PromptConfig(name="w/o complete example", include_complete_example=False),
        PromptConfig(name="w/o function usage examples", include_function_examples=False),
        PromptConfig(name="w/o constraints", include_constraints=False),
    ]


def slug(name: str) -> str:
    out = []
    for ch in name.lower():
        out.append(ch if ch.isalnum() else "_")
    text = "".join(out)
    while "__" in text:
        text = text.replace("__", "_")
    return text.strip("_")
