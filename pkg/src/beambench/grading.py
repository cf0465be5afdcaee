"""Answer normalization, comparison against the oracle, and error taxonomy.

Correctness: every required component must satisfy
``|answer - oracle| <= max(1e-6 kN, 1e-3 * |oracle|)`` and agree in sign
whenever the oracle value exceeds the tolerance (direction is undefined
at zero, so either direction word is accepted there).  Direction is
graded in the problem's stated convention; an answer using a consistent
but opposite convention still grades incorrect.

Classification priority when several things are wrong:
parse/execution > extra_support > load_misapplication > missing_component
> wrong_direction > wrong_magnitude.

Answers that embed the model they were computed from (a model-document)
are first checked for structural fidelity: a support set that differs
from the problem grades extra_support, a load set that differs grades
load_misapplication, regardless of the reported numbers.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum

from . import document, protocol
from .backends.base import BackendResponse
from .model import BeamModel, PointLoad, Reaction, ReactionSet, SupportKind

ABS_TOL_KN = 1e-6
REL_TOL = 1e-3

POSITION_TOL_M = 1e-6


class ErrorClass(str, Enum):
    WRONG_MAGNITUDE = "wrong_magnitude"
    WRONG_DIRECTION = "wrong_direction"
    MISSING_COMPONENT = "missing_component"
    EXTRA_SUPPORT = "extra_support"
    LOAD_MISAPPLICATION = "load_misapplication"
    EXECUTION_FAILURE = "execution_failure"
    PARSE_FAILURE = "parse_failure"
    EQUILIBRIUM_VIOLATION = "equilibrium_violation"


@dataclass(frozen=True)
class ComponentDelta:
    support_index: int
    component: str
    answer: float
    oracle: float
    ok: bool

    @property
    def delta(self) -> float:
        return self.answer - self.oracle


@dataclass(frozen=True)
class Grade:
    correct: bool
    error_class: ErrorClass | None = None
    deltas: tuple[ComponentDelta, ...] = ()
    detail: str = ""

    @property
    def verdict(self) -> str:
        return "correct" if self.correct else "incorrect"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "error_class": self.error_class.value if self.error_class else None,
            "detail": self.detail,
        }


class AnswerParseError(ValueError):
    def __init__(self, error_class: ErrorClass, detail: str):
        super().__init__(detail)
        self.error_class = error_class
        self.detail = detail


def _tolerance(oracle_value: float) -> float:
    return max(ABS_TOL_KN, REL_TOL * abs(oracle_value))


# --- text answer extraction -------------------------------------------------

_FORCE_RE = re.compile(
    r"(?P<num>[-+]?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?)\s*(?P<unit>kN|N)(?![/a-zA-Z*.·])"
    r"[,;]?\s*(?:acting\s+)?(?P<dir>upwards?|downwards?|up|down)?",
    re.IGNORECASE,
)
_MOMENT_RE = re.compile(
    r"(?P<num>[-+]?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?)\s*(?P<unit>k?N)\s*[-*.x·]?\s*m\b"
    r"[,;]?\s*(?:acting\s+)?(?P<dir>counter-?clockwise|anti-?clockwise|clockwise|ccw|cw)?",
    re.IGNORECASE,
)
_KIND_RE = re.compile(r"\b(pinned|pin|roller|fixed|clamped)\b", re.IGNORECASE)
_LABEL_RE = re.compile(r"\bR_?([A-D1-4])\b")
_AT_POS_RE = re.compile(r"at\s*(?:x\s*=\s*)?(?P<pos>\d+(?:\.\d+)?)\s*m\b", re.IGNORECASE)

_KIND_WORDS = {
    "pinned": SupportKind.PINNED,
    "pin": SupportKind.PINNED,
    "roller": SupportKind.ROLLER,
    "fixed": SupportKind.FIXED,
    "clamped": SupportKind.FIXED,
}
_LABEL_INDEX = {"A": 0, "B": 1, "C": 2, "D": 3, "1": 0, "2": 1, "3": 2, "4": 3}


def _force_value(match: re.Match) -> float:
    value = float(match.group("num"))
    if match.group("unit").lower() == "n":
        value /= 1000.0
    direction = (match.group("dir") or "").lower()
    if direction.startswith("down"):
        value = -abs(value)
    elif direction.startswith("up"):
        value = abs(value)
    return value


def _moment_value(match: re.Match) -> float:
    value = float(match.group("num"))
    if match.group("unit").lower() == "n":
        value /= 1000.0
    direction = (match.group("dir") or "").lower()
    if direction in ("clockwise", "cw"):
        value = -abs(value)
    elif direction:
        value = abs(value)
    return value


def _support_for_line(line: str, model: BeamModel) -> int | None:
    kind_match = _KIND_RE.search(line)
    if kind_match:
        kind = _KIND_WORDS[kind_match.group(1).lower()]
        indexes = [i for i, s in enumerate(model.supports) if s.kind is kind]
        if len(indexes) == 1:
            return indexes[0]
    pos_match = _AT_POS_RE.search(line)
    if pos_match:
        pos = float(pos_match.group("pos"))
        for i, s in enumerate(model.supports):
            if abs(s.position_m - pos) <= POSITION_TOL_M:
                return i
    label_match = _LABEL_RE.search(line)
    if label_match:
        index = _LABEL_INDEX[label_match.group(1).upper()]
        if index < len(model.supports):
            return index
    return None


def parse_text_answer(text: str, model: BeamModel) -> ReactionSet:
    """Best-effort extraction of magnitude+direction pairs from prose.

    Anchors each line to a support via kind word, "at <pos> m" phrase, or
    R_A/R_1-style labels; falls back to assigning unanchored values in
    support order when the counts line up exactly.
    """
    verticals: dict[int, float] = {}
    moments: dict[int, float] = {}
    unanchored: list[float] = []
    for line in text.splitlines():
        moment_spans = []
        index = _support_for_line(line, model)
        for m in _MOMENT_RE.finditer(line):
            moment_spans.append(m.span())
            if index is not None and model.supports[index].kind is SupportKind.FIXED:
                moments.setdefault(index, _moment_value(m))
        for m in _FORCE_RE.finditer(line):
            if any(a <= m.start() < b for a, b in moment_spans):
                continue
            if index is not None:
                verticals.setdefault(index, _force_value(m))
            else:
                unanchored.append(_force_value(m))
        # a lone moment line for the single fixed support needs no anchor
        if index is None and len(model.supports) == 1:
            for m in _MOMENT_RE.finditer(line):
                moments.setdefault(0, _moment_value(m))
    if not verticals and len(unanchored) == len(model.supports):
        verticals = dict(enumerate(unanchored))
    missing = [i for i in range(len(model.supports)) if i not in verticals]
    if missing:
        raise AnswerParseError(
            ErrorClass.PARSE_FAILURE,
            f"could not extract reactions for supports {missing} from text",
        )
    entries = []
    for i, support in enumerate(model.supports):
        moment = None
        if support.kind is SupportKind.FIXED:
            if i not in moments:
                raise AnswerParseError(
                    ErrorClass.MISSING_COMPONENT,
                    "fixed-support moment not found in text answer",
                )
            moment = moments[i]
        entries.append(
            Reaction(
                support_index=i,
                vertical_kN=verticals[i],
                horizontal_kN=0.0 if support.kind in (SupportKind.PINNED, SupportKind.FIXED) else None,
                moment_kNm=moment,
            )
        )
    return ReactionSet(tuple(entries))


# --- answer normalization ----------------------------------------------------

_PAYLOAD_CLASS = {
    "PayloadMissing": ErrorClass.PARSE_FAILURE,
    "PayloadMalformed": ErrorClass.PARSE_FAILURE,
    "extra_support": ErrorClass.EXTRA_SUPPORT,
    "missing_component": ErrorClass.MISSING_COMPONENT,
}


def parse_answer(response: BackendResponse, model: BeamModel) -> ReactionSet:
    """Normalize a backend response into a ReactionSet in signed convention.

    Tries, in order: the structured answer, a stored result payload, the
    mandated result block in the raw text, then prose extraction.
    """
    if response.structured_answer is not None:
        return response.structured_answer
    stored = response.artifacts.get("result_payload")
    if stored is not None:
        text = protocol.RESULT_DELIMITER + "\n" + stored
    else:
        text = response.raw_text
    try:
        payload = protocol.extract_payload(text)
    except protocol.PayloadError as exc:
        if exc.kind == "PayloadMissing" and stored is None:
            return parse_text_answer(response.raw_text, model)
        raise AnswerParseError(_PAYLOAD_CLASS[exc.kind], exc.detail) from None
    try:
        return protocol.reactions_from_payload(payload, model)
    except protocol.PayloadError as exc:
        raise AnswerParseError(_PAYLOAD_CLASS[exc.kind], exc.detail) from None


# --- structural fidelity ------------------------------------------------------


def check_structure(problem: BeamModel, claimed: BeamModel) -> tuple[ErrorClass, str] | None:
    """Compare a claimed model against the problem; None when faithful."""
    problem_supports = {(s.kind, round(s.position_m, 6)) for s in problem.supports}
    claimed_supports = {(s.kind, round(s.position_m, 6)) for s in claimed.supports}
    if claimed_supports != problem_supports:
        extra = claimed_supports - problem_supports
        what = f"extra/moved supports {sorted(extra)}" if extra else "missing supports"
        return ErrorClass.EXTRA_SUPPORT, f"support set differs from problem: {what}"
    if abs(claimed.span_m - problem.span_m) > POSITION_TOL_M:
        return (
            ErrorClass.LOAD_MISAPPLICATION,
            f"span differs: {claimed.span_m} vs {problem.span_m}",
        )

    def load_key(load):
        if isinstance(load, PointLoad):
            return ("point", round(load.magnitude_kN, 6), round(load.position_m, 6), load.direction)
        return (
            "udl",
            round(load.intensity_kN_per_m, 6),
            round(load.start_m, 6),
            round(load.end_m, 6),
            load.direction,
        )

    if sorted(map(load_key, claimed.loads)) != sorted(map(load_key, problem.loads)):
        return ErrorClass.LOAD_MISAPPLICATION, "load set differs from problem"
    return None


# --- comparison ---------------------------------------------------------------


def grade(answer: ReactionSet, oracle: ReactionSet, model: BeamModel) -> Grade:
    """Compare a normalized answer against the oracle reactions."""
    n = len(model.supports)
    by_index: dict[int, Reaction] = {}
    for entry in answer.entries:
        if entry.support_index < 0 or entry.support_index >= n:
            return Grade(
                False,
                ErrorClass.EXTRA_SUPPORT,
                detail=f"answer reports a reaction at support index {entry.support_index}",
            )
        by_index[entry.support_index] = entry
    if len(answer.entries) > n:
        return Grade(False, ErrorClass.EXTRA_SUPPORT, detail="more reaction entries than supports")

    deltas: list[ComponentDelta] = []
    missing: list[str] = []
    direction_wrong = False
    magnitude_wrong = False

    for i, oracle_entry in enumerate(oracle.entries):
        answer_entry = by_index.get(i)
        for component, oracle_value in oracle_entry.components().items():
            if answer_entry is None:
                missing.append(f"support {i}")
                continue
            if component == "vertical":
                answer_value = answer_entry.vertical_kN
            elif component == "horizontal":
                # identically zero in scope; an omitted H grades as zero
                answer_value = answer_entry.horizontal_kN or 0.0
            else:
                if answer_entry.moment_kNm is None:
                    missing.append(f"support {i} moment")
                    continue
                answer_value = answer_entry.moment_kNm
            tol = _tolerance(oracle_value)
            ok = abs(answer_value - oracle_value) <= tol
            deltas.append(ComponentDelta(i, component, answer_value, oracle_value, ok))
            if not ok:
                if abs(oracle_value) > tol and answer_value * oracle_value < 0:
                    direction_wrong = True
                else:
                    magnitude_wrong = True

    if missing:
        return Grade(
            False,
            ErrorClass.MISSING_COMPONENT,
            tuple(deltas),
            detail="missing: " + ", ".join(missing),
        )
    if direction_wrong:
        return Grade(False, ErrorClass.WRONG_DIRECTION, tuple(deltas))
    if magnitude_wrong:
        return Grade(False, ErrorClass.WRONG_MAGNITUDE, tuple(deltas))
    return Grade(True, deltas=tuple(deltas))


_FAILURE_CLASS = {
    "CodeExtractionError": ErrorClass.PARSE_FAILURE,
    "ModelDocumentMissing": ErrorClass.PARSE_FAILURE,
    "ModelDocumentInvalid": ErrorClass.EQUILIBRIUM_VIOLATION,
}


def grade_response(response: BackendResponse, model: BeamModel, oracle: ReactionSet) -> Grade:
    """Full grading pipeline for one backend response."""
    if response.failure is not None:
        error_class = _FAILURE_CLASS.get(response.failure.kind, ErrorClass.EXECUTION_FAILURE)
        return Grade(False, error_class, detail=f"{response.failure.kind}: {response.failure.detail}")

    doc_text = response.artifacts.get("model_document") or protocol.extract_model_document(
        response.raw_text
    )
    if doc_text is not None:
        try:
            claimed = document.dict_to_model(_as_dict(doc_text))
        except (document.ParseError, ValueError):
            claimed = None  # unreadable self-report; grade on numbers alone
        if claimed is not None:
            mismatch = check_structure(model, claimed)
            if mismatch is not None:
                return Grade(False, mismatch[0], detail=mismatch[1])

    try:
        answer = parse_answer(response, model)
    except AnswerParseError as exc:
        return Grade(False, exc.error_class, detail=exc.detail)
    return grade(answer, oracle, model)


def _as_dict(doc_text: str) -> dict:
    obj = json.loads(doc_text)
    if not isinstance(obj, dict):
        raise ValueError("model-document must be a JSON object")
    return obj
