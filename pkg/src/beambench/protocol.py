"""The machine-readable answer protocol.

A compliant response ends by printing the delimiter line followed by one
single-line JSON payload:

    ===RESULT===
    {"schema": "beam-result/v1", "reactions": [{"position": 0.0, "V": 6.0, "H": 0.0, "M": 0.0}], "model": {...}}

* ``position`` is the support position in meters from the left end,
* ``V`` is the vertical reaction in kN (upward positive),
* ``H`` the horizontal reaction in kN (optional, defaults to 0),
* ``M`` the reaction moment in kN*m, counterclockwise positive
  (required for fixed supports only),
* ``model`` optionally embeds the model-document the answer was computed
  from, enabling structural-fidelity checks.

This block is what the prompt constraints mandate and what the sandbox
runner extracts from executed scripts; responses may additionally carry
a fenced ```model-document``` block holding just the model JSON.
"""

from __future__ import annotations

import json
import re
from typing import Any

from .model import BeamModel, Reaction, ReactionSet, SupportKind

RESULT_DELIMITER = "===RESULT==="
RESULT_SCHEMA = "beam-result/v1"

POSITION_MATCH_TOL_M = 1e-6

_MODEL_DOC_FENCE = re.compile(r"```model-document\s*\n(.*?)```", re.DOTALL)


class PayloadError(ValueError):
    """The payload is missing, malformed, or structurally wrong."""

    def __init__(self, kind: str, detail: str):
        super().__init__(f"{kind}: {detail}")
        self.kind = kind
        self.detail = detail


def render_payload(model: BeamModel, reactions: ReactionSet, include_model: bool = False) -> str:
    entries = []
    for entry in reactions.entries:
        support = model.supports[entry.support_index]
        item: dict[str, Any] = {"position": support.position_m, "V": entry.vertical_kN}
        if entry.horizontal_kN is not None:
            item["H"] = entry.horizontal_kN
        if entry.moment_kNm is not None:
            item["M"] = entry.moment_kNm
        entries.append(item)
    payload: dict[str, Any] = {"schema": RESULT_SCHEMA, "reactions": entries}
    if include_model:
        from .document import model_to_dict

        payload["model"] = model_to_dict(model)
    return json.dumps(payload)


def render_result_block(model: BeamModel, reactions: ReactionSet, include_model: bool = False) -> str:
    return RESULT_DELIMITER + "\n" + render_payload(model, reactions, include_model) + "\n"


def extract_payload(text: str) -> dict[str, Any]:
    """Pull the payload following the LAST delimiter line out of free text."""
    lines = text.splitlines()
    idx = None
    for i, line in enumerate(lines):
        if line.strip() == RESULT_DELIMITER:
            idx = i
    if idx is None:
        raise PayloadError("PayloadMissing", f"no {RESULT_DELIMITER} line in output")
    for line in lines[idx + 1 :]:
        if line.strip():
            try:
                payload = json.loads(line)
            except json.JSONDecodeError as exc:
                raise PayloadError("PayloadMalformed", f"invalid JSON payload: {exc.msg}") from None
            if not isinstance(payload, dict):
                raise PayloadError("PayloadMalformed", "payload must be a JSON object")
            return payload
    raise PayloadError("PayloadMissing", "delimiter present but no payload line follows")


def reactions_from_payload(payload: dict[str, Any], model: BeamModel) -> ReactionSet:
    """Map payload entries onto the model's supports by position.

    Raises PayloadError with kind "extra_support" when an entry matches
    no support, and "missing_component" when a support has no entry or a
    fixed support's moment is absent.
    """
    raw = payload.get("reactions")
    if not isinstance(raw, list):
        raise PayloadError("PayloadMalformed", 'payload has no "reactions" list')

    taken: dict[int, Reaction] = {}
    for item in raw:
        if not isinstance(item, dict) or "position" not in item or "V" not in item:
            raise PayloadError("PayloadMalformed", f"bad reaction entry {item!r}")
        pos = float(item["position"])
        matches = [
            i
            for i, s in enumerate(model.supports)
            if abs(s.position_m - pos) <= POSITION_MATCH_TOL_M
        ]
        if not matches:
            raise PayloadError("extra_support", f"reaction reported at {pos} m where no support exists")
        index = matches[0]
        support = model.supports[index]
        moment = item.get("M")
        if support.kind is SupportKind.FIXED and moment is None:
            raise PayloadError("missing_component", f"fixed support at {pos} m lacks a moment entry")
        taken[index] = Reaction(
            support_index=index,
            vertical_kN=float(item["V"]),
            horizontal_kN=float(item.get("H", 0.0))
            if support.kind in (SupportKind.PINNED, SupportKind.FIXED)
            else None,
            moment_kNm=float(moment) if support.kind is SupportKind.FIXED else None,
        )
    for i in range(len(model.supports)):
        if i not in taken:
            raise PayloadError(
                "missing_component",
                f"no reaction reported for the {model.supports[i].kind.value} support"
                f" at {model.supports[i].position_m} m",
            )
    return ReactionSet(tuple(taken[i] for i in range(len(model.supports))))


def extract_model_document(text: str) -> str | None:
    """Return the last fenced model-document block, or the payload's model."""
    fences = _MODEL_DOC_FENCE.findall(text)
    if fences:
        return fences[-1]
    try:
        payload = extract_payload(text)
    except PayloadError:
        return None
    doc = payload.get("model")
    if isinstance(doc, dict):
        return json.dumps(doc)
    return None
