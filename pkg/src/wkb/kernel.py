"""Selects the solver kernel and normalises its input.

The compiled kernel is used when it imported and every weight and bound
fits comfortably in 64 bits; ``WKB_KERNEL=python`` forces the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import _pysolver

try:
    from . import _ckernel
except ImportError:  # pragma: no cover - exercised only without a compiler
    _ckernel = None

SAT = _pysolver.SAT
UNSAT = _pysolver.UNSAT
BUDGET = _pysolver.BUDGET

_LIMIT = 1 << 62

Clause = Sequence[int]
PB = tuple[Sequence[tuple[int, int]], int]


def compiled_available() -> bool:
    return _ckernel is not None


def default_backend() -> str:
    forced = os.environ.get("WKB_KERNEL", "").strip().lower()
    if forced in ("python", "py"):
        return "python"
    return "compiled" if _ckernel is not None else "python"


@dataclass
class SolveResult:
    status: str
    model: list[bool] | None
    stats: dict[str, int] = field(default_factory=dict)
    backend: str = "python"


def normalize_clauses(clauses: Sequence[Clause]) -> list[list[int]] | None:
    """Drop tautologies and duplicate literals; ``None`` if an empty clause occurs."""
    out: list[list[int]] = []
    for cl in clauses:
        lits = list(dict.fromkeys(cl))
        s = set(lits)
        if any(-l in s for l in lits):
            continue
        if not lits:
            return None
        out.append(lits)
    return out


def normalize_pb(terms: Sequence[tuple[int, int]], bound: int) -> tuple[list[list[int]], PB | None] | None:
    """Simplify one at-most constraint.

    Returns ``(units, pb)`` where ``units`` are unit clauses implied by the
    constraint and ``pb`` is what remains (``None`` when trivially true), or
    ``None`` when the constraint can never hold.
    """
    merged: dict[int, int] = {}
    for lit, w in terms:
        if w < 0:
            raise ValueError("weights must be non-negative")
        if w:
            merged[lit] = merged.get(lit, 0) + w
    for lit in list(merged):
        if lit > 0 and -lit in merged:
            a, b = merged[lit], merged[-lit]
            m = min(a, b)
            # exactly one of lit, -lit holds, so m is always paid
            bound -= m
            for x, wx in ((lit, a - m), (-lit, b - m)):
                if wx:
                    merged[x] = wx
                else:
                    del merged[x]
    if bound < 0:
        return None
    units = [[-lit] for lit, w in merged.items() if w > bound]
    rest = [(lit, w) for lit, w in merged.items() if w <= bound]
    if sum(w for _, w in rest) <= bound:
        return units, None
    return units, (rest, bound)


def solve(
    num_vars: int,
    clauses: Sequence[Clause],
    pbs: Sequence[PB] = (),
    *,
    max_nodes: int = 0,
    prune: bool = True,
    trace: Callable[[str], None] | None = None,
    backend: str | None = None,
    trusted: Sequence[Clause] = (),
) -> SolveResult:
    """Decide the clauses plus at-most constraints.

    ``trusted`` clauses are passed through without normalisation; the caller
    guarantees they are non-empty, duplicate-free and not tautological.
    ``pbs[0]`` is reported as the running cost in trace lines, which only
    the Python kernel emits.
    """
    cls = normalize_clauses(clauses)
    if cls is None:
        return SolveResult(UNSAT, None, {"nodes": 0})
    if trusted:
        cls = list(trusted) + cls
    norm: list[PB] = []
    for terms, bound in pbs:
        res = normalize_pb(terms, bound)
        if res is None:
            return SolveResult(UNSAT, None, {"nodes": 0})
        units, pb = res
        cls.extend(units)
        if pb is not None:
            norm.append(pb)
    chosen = backend or default_backend()
    if trace is not None:
        chosen = "python"
    if chosen == "compiled":
        if _ckernel is None:
            raise RuntimeError("compiled kernel requested but not built")
        if any(b >= _LIMIT or sum(w for _, w in t) >= _LIMIT for t, b in norm):
            chosen = "python"
    impl = _ckernel if chosen == "compiled" else _pysolver
    if impl is _pysolver:
        status, model, stats = _pysolver.solve(num_vars, cls, norm, max_nodes, prune, trace)
    else:
        status, model, stats = impl.solve(num_vars, cls, norm, max_nodes, prune, None)
    return SolveResult(status, model, stats, chosen)
