"""Claims, reports and the adaptive bisection engine."""
from __future__ import annotations

import fnmatch
from dataclasses import dataclass, field
from typing import Callable

from ..interval import Interval

VERIFIED, FAILED, INCONCLUSIVE = "verified", "failed", "inconclusive"
MAX_DEPTH = 40

_OPS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


@dataclass
class Claim:
    id: str
    claimed: float
    direction: str
    check: Callable[[], "VerificationReport"]
    params: dict = field(default_factory=dict)
    s_interval: tuple | None = None
    group: str = "ledger"
    summary: str = ""
    informational: bool = False

    def __post_init__(self):
        if self.direction not in _OPS:
            raise ValueError(f"bad direction {self.direction!r}")

    def run(self) -> "VerificationReport":
        rep = self.check()
        rep.claim_id = self.id
        rep.claimed = self.claimed
        rep.direction = self.direction
        return rep


@dataclass
class VerificationReport:
    claim_id: str = ""
    verdict: str = INCONCLUSIVE
    computed: tuple = (float("nan"), float("nan"))
    subdivisions: int = 0
    wall_notes: str = ""
    claimed: float = float("nan")
    direction: str = "<="
    witness: dict | None = None
    seconds: float = 0.0

    def to_dict(self) -> dict:
        lo, hi = self.computed
        d = {
            "claim_id": self.claim_id,
            "verdict": self.verdict,
            "computed": [_json_float(lo), _json_float(hi)],
            "claimed": _json_float(self.claimed),
            "direction": self.direction,
            "subdivisions": self.subdivisions,
            "wall_notes": self.wall_notes,
            "seconds": round(self.seconds, 4),
        }
        if self.witness is not None:
            d["witness"] = self.witness
        return d


def _json_float(x):
    if x != x:
        return None
    if x in (float("inf"), float("-inf")):
        return str(x)
    return x


def decide(value: Interval, direction: str, bound: float) -> str:
    """Verdict for a single enclosure against ``value <direction> bound``."""
    b = Interval(bound)
    if direction in ("<", "<="):
        ok = value.certainly_lt(b) if direction == "<" else value.certainly_le(b)
        bad = value.certainly_ge(b) if direction == "<" else value.certainly_gt(b)
    else:
        ok = value.certainly_gt(b) if direction == ">" else value.certainly_ge(b)
        bad = value.certainly_le(b) if direction == ">" else value.certainly_lt(b)
    return VERIFIED if ok else FAILED if bad else INCONCLUSIVE


def scalar_report(value: Interval, direction: str, bound: float, notes: str = "", witness=None):
    v = decide(value, direction, bound)
    return VerificationReport(verdict=v, computed=(value.lo, value.hi), wall_notes=notes,
                              witness=witness if v == FAILED else None)


def certify_on(f: Callable[[Interval], Interval], pieces, direction: str, bound: float,
               max_depth: int = MAX_DEPTH, initial_split: int = 8) -> VerificationReport:
    """Prove ``f(x) <direction> bound`` for every x in the union of intervals.

    Boxes whose enclosure is undecided are bisected. A box is reported as a
    failure only through a point witness (the box midpoint evaluated as a
    degenerate interval lands certainly on the wrong side); running out of
    depth gives ``inconclusive``. ``computed`` encloses the extreme value in
    the claim's direction over all pieces.
    """
    upper = direction in ("<", "<=")
    stack = []
    for lo, hi in pieces:
        w = (hi - lo) / initial_split
        for k in range(initial_split):
            a = lo + k * w
            b = hi if k == initial_split - 1 else lo + (k + 1) * w
            stack.append((Interval(a, b), 0))
    evals = 0
    extreme_outer = -float("inf") if upper else float("inf")
    extreme_inner = -float("inf") if upper else float("inf")
    witness = None
    inconclusive = False
    while stack:
        box, depth = stack.pop()
        val = f(box)
        evals += 1
        verdict = decide(val, direction, bound)
        if verdict == VERIFIED:
            extreme_outer = max(extreme_outer, val.hi) if upper else min(extreme_outer, val.lo)
            continue
        m = box.mid
        pv = f(Interval(m))
        evals += 1
        extreme_inner = max(extreme_inner, pv.lo) if upper else min(extreme_inner, pv.hi)
        if decide(pv, direction, bound) == FAILED:
            witness = {"x": m, "value": [pv.lo, pv.hi]}
            extreme_outer = max(extreme_outer, val.hi) if upper else min(extreme_outer, val.lo)
            break
        if depth >= max_depth or box.width <= 0.0:
            inconclusive = True
            extreme_outer = max(extreme_outer, val.hi) if upper else min(extreme_outer, val.lo)
            continue
        left, right = box.split()
        stack.append((right, depth + 1))
        stack.append((left, depth + 1))
    if witness is not None:
        verdict = FAILED
    elif inconclusive:
        verdict = INCONCLUSIVE
    else:
        verdict = VERIFIED
    if upper:
        computed = (max(extreme_inner, -float("inf")), extreme_outer)
        if witness is not None:
            computed = (witness["value"][0], max(extreme_outer, witness["value"][1]))
    else:
        computed = (extreme_outer, extreme_inner)
        if witness is not None:
            computed = (min(extreme_outer, witness["value"][0]), witness["value"][1])
    return VerificationReport(verdict=verdict, computed=computed, subdivisions=evals, witness=witness)


def sup_search(f: Callable[[Interval], Interval], pieces, tol: float = 1e-3,
               max_depth: int = MAX_DEPTH, initial_split: int = 16) -> Interval:
    """Branch-and-bound enclosure [lo, hi] of sup f over the union of intervals.

    Stops refining a box once its upper end is within ``tol`` (relative) of
    the best certified lower bound.
    """
    boxes = []
    for lo, hi in pieces:
        w = (hi - lo) / initial_split
        for k in range(initial_split):
            a = lo + k * w
            b = hi if k == initial_split - 1 else lo + (k + 1) * w
            boxes.append((Interval(a, b), 0))
    best_lo = -float("inf")
    final_hi = -float("inf")
    while boxes:
        nxt = []
        for box, depth in boxes:
            pv = f(Interval(box.mid))
            best_lo = max(best_lo, pv.lo)
        for box, depth in boxes:
            v = f(box)
            if v.hi <= best_lo:
                continue
            if v.hi - best_lo <= tol * abs(best_lo) or depth >= max_depth:
                final_hi = max(final_hi, v.hi)
                continue
            a, b = box.split()
            nxt.extend([(a, depth + 1), (b, depth + 1)])
        boxes = nxt
    return Interval(best_lo, max(final_hi, best_lo))


def select(ids, pattern: str | None):
    """Ids matching a glob (comma separated globs allowed)."""
    if not pattern:
        return list(ids)
    pats = [p.strip() for p in pattern.split(",") if p.strip()]
    return [i for i in ids if any(fnmatch.fnmatchcase(i, p) for p in pats)]
