"""Cable arrangements: counting, enumeration and workspace-driven search.

An arrangement assigns each cable an (exit point, anchor point) pair. Six
anchors are reserved for the three cable-loops, whose two strands must end
on a fixed anchor pair; the remaining cables are simple cables attached to
anchors drawn from a restricted candidate set. All indices are 1-based, as
in the anchor labels R1..R15.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import CableWrenchError, InvalidArgument
from .workspace import static_workspace_ao

log = logging.getLogger(__name__)

LOOP_ANCHOR_PAIRS = ((3, 4), (8, 9), (13, 14))
SIMPLE_ANCHORS_ALL = (1, 2, 5, 6, 7, 10, 11, 12, 15)
SIMPLE_ANCHORS_RESTRICTED = (1, 6, 11)
INT64_MAX = 2**63 - 1


@dataclass(frozen=True, order=True)
class CableArrangement:
    assignment: tuple  # ((exit, anchor), ...) indexed by cable
    loop_pairs: tuple = ((1, 2), (3, 4), (5, 6))
    simple_cables: tuple = (7, 8)

    def __post_init__(self):
        assignment = tuple((int(e), int(a)) for e, a in self.assignment)
        loops = tuple((int(a), int(b)) for a, b in self.loop_pairs)
        simple = tuple(int(c) for c in self.simple_cables)
        object.__setattr__(self, "assignment", assignment)
        object.__setattr__(self, "loop_pairs", loops)
        object.__setattr__(self, "simple_cables", simple)
        n = len(assignment)
        exits = [e for e, _ in assignment]
        anchors = [a for _, a in assignment]
        if len(set(exits)) != n:
            raise InvalidArgument(f"exit indices must be distinct: {exits}")
        if len(set(anchors)) != n:
            raise InvalidArgument(f"anchor indices must be distinct: {anchors}")
        covered = [c for pair in loops for c in pair] + list(simple)
        if sorted(covered) != list(range(1, n + 1)):
            raise InvalidArgument("loop pairs and simple cables must cover every cable exactly once")

    @property
    def exits(self) -> tuple:
        return tuple(e for e, _ in self.assignment)

    @property
    def anchors(self) -> tuple:
        return tuple(a for _, a in self.assignment)

    def check_anchor_sets(self, loop_anchor_pairs=LOOP_ANCHOR_PAIRS, simple_anchors=SIMPLE_ANCHORS_ALL):
        """Raise unless loops end on a reserved anchor pair and simple cables on allowed anchors."""
        anchor_of = dict(enumerate(self.anchors, start=1))
        pairs = {frozenset(p) for p in loop_anchor_pairs}
        for a, b in self.loop_pairs:
            if frozenset((anchor_of[a], anchor_of[b])) not in pairs:
                raise InvalidArgument(f"cable-loop ({a}, {b}) does not end on a reserved anchor pair")
        for c in self.simple_cables:
            if anchor_of[c] not in simple_anchors:
                raise InvalidArgument(f"simple cable {c} uses anchor R{anchor_of[c]} outside the allowed set")

    def relabel(self, perm: Sequence[int]) -> "CableArrangement":
        """Same physical arrangement with cable ``perm[k-1]`` renamed to ``k``."""
        new_of_old = {old: new for new, old in enumerate(perm, start=1)}
        return CableArrangement(
            tuple(self.assignment[old - 1] for old in perm),
            tuple((new_of_old[a], new_of_old[b]) for a, b in self.loop_pairs),
            tuple(sorted(new_of_old[c] for c in self.simple_cables)),
        )

    def label(self) -> tuple[str, str]:
        return (
            " ".join(f"A{e}" for e in self.exits),
            " ".join(f"R{a}" for a in self.anchors),
        )


@dataclass(frozen=True)
class ArrangementCounts:
    N_e: int
    N_a: int
    N_c: int
    N_CL: int


def _checked(value: int, name: str) -> int:
    if value > INT64_MAX:
        raise OverflowError(f"{name} = {value} exceeds the 64-bit range")
    return value


def count_arrangements(n_e: int, n_c: int, n_sc: int, n_asc: int, n_a: int | None = None) -> ArrangementCounts:
    """Closed-form arrangement counts.

    ``n_a`` defaults to ``n_asc`` plus one reserved anchor per loop strand,
    i.e. ``n_asc + (n_c - n_sc)``.
    """
    if min(n_e, n_c, n_sc, n_asc) < 0:
        raise InvalidArgument("counts must be non-negative")
    if n_c > n_e:
        raise InvalidArgument("cannot use more cables than exit points")
    if n_sc > n_asc or n_sc > n_c:
        raise InvalidArgument("need n_sc <= n_asc and n_sc <= n_c")
    n_a = n_asc + (n_c - n_sc) if n_a is None else n_a
    if n_a < n_c:
        raise InvalidArgument("need n_a >= n_c")
    perms = math.factorial(n_c)
    N_e = _checked(math.comb(n_e, n_c), "N_e")
    N_a = _checked(math.comb(n_a, n_c) * perms, "N_a")
    N_c = _checked(N_a * N_e, "N_c")
    N_CL = _checked(N_e * math.comb(n_asc, n_sc) * perms, "N_CL")
    return ArrangementCounts(N_e, N_a, N_c, N_CL)


def enumerate_arrangements(
    exits: Sequence[int] = tuple(range(1, 9)),
    loop_anchor_pairs: Sequence[tuple] = LOOP_ANCHOR_PAIRS,
    simple_anchors: Iterable[int] = SIMPLE_ANCHORS_RESTRICTED,
    n_simple: int = 2,
) -> Iterator[CableArrangement]:
    """Yield every arrangement in a deterministic order.

    Exit subsets come in combination order; for each subset the anchor
    sequences come in lexicographic order (so with ``n_c == len(exits)`` the
    stream is lexicographic in the assignment tuple).

    ``n_c = 2 * len(loop_anchor_pairs) + n_simple`` exit points are chosen
    from ``exits``; every reserved loop anchor is used, plus ``n_simple``
    anchors from ``simple_anchors``, in every order. Cable ``k`` runs from
    the ``k``-th chosen exit. The stream length equals
    ``count_arrangements(len(exits), n_c, n_simple, len(simple_anchors)).N_CL``.
    """
    exits = sorted(exits)
    simple = sorted(set(simple_anchors))
    loop_anchors = [a for pair in loop_anchor_pairs for a in pair]
    if len(set(loop_anchors)) != len(loop_anchors) or set(loop_anchors) & set(simple):
        raise InvalidArgument("loop anchors must be distinct and disjoint from simple anchors")
    n_c = len(loop_anchors) + n_simple
    if n_simple < 0 or n_c > len(exits) or n_simple > len(simple):
        return
    pool = sorted(loop_anchors + simple)
    loop_set = set(loop_anchors)

    def build(chosen_exits, anchors):
        slot = {a: cable for cable, a in enumerate(anchors, start=1)}
        loops = tuple((slot[a], slot[b]) for a, b in loop_anchor_pairs)
        simple_cables = tuple(sorted(slot[a] for a in anchors if a not in loop_set))
        return CableArrangement(tuple(zip(chosen_exits, anchors)), loops, simple_cables)

    def extend(prefix, used, n_loop_left, n_simple_left, chosen_exits):
        if not n_loop_left and not n_simple_left:
            yield build(chosen_exits, prefix)
            return
        for a in pool:
            if a in used:
                continue
            if a in loop_set:
                nl, ns = n_loop_left - 1, n_simple_left
            elif n_simple_left:
                nl, ns = n_loop_left, n_simple_left - 1
            else:
                continue
            used.add(a)
            prefix.append(a)
            yield from extend(prefix, used, nl, ns, chosen_exits)
            prefix.pop()
            used.discard(a)

    for chosen in combinations(exits, n_c):
        yield from extend([], set(), len(loop_anchors), n_simple, chosen)


@dataclass(frozen=True)
class RankedEntry:
    rank: int
    ratio: float
    arrangement: CableArrangement
    coarse_ratio: float | None = None


@dataclass(frozen=True)
class SearchResult:
    best: CableArrangement
    ratio: float
    report: tuple  # RankedEntry, best first
    n_candidates: int
    n_finalists: int
    n_failed: int

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["rank", "ratio", "exit_assignment", "anchor_assignment"])
        for e in self.report:
            exits, anchors = e.arrangement.label()
            writer.writerow([e.rank, f"{e.ratio:.9g}", exits, anchors])
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [
            {
                "rank": e.rank,
                "ratio": e.ratio,
                "exit_assignment": list(e.arrangement.exits),
                "anchor_assignment": list(e.arrangement.anchors),
                "loop_pairs": [list(p) for p in e.arrangement.loop_pairs],
                "simple_cables": list(e.arrangement.simple_cables),
            }
            for e in self.report
        ]
        return json.dumps(
            {
                "best_ratio": self.ratio,
                "n_candidates": self.n_candidates,
                "n_finalists": self.n_finalists,
                "n_failed": self.n_failed,
                "ranking": rows,
            },
            indent=2,
        )


def _ratios(job):
    geom, box, grid, candidates, kwargs = job
    out = []
    for arr in candidates:
        try:
            out.append(static_workspace_ao(geom, arr, box, grid, **kwargs).ratio)
        except CableWrenchError as exc:
            log.debug("candidate %s failed: %s", arr.assignment, exc)
            out.append(None)
    return out


def _evaluate(geom, box, grid, candidates, workers, chunk_size, kwargs):
    chunks = [candidates[i:i + chunk_size] for i in range(0, len(candidates), chunk_size)]
    jobs = [(geom, box, grid, chunk, kwargs) for chunk in chunks]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_ratios, jobs))
    else:
        parts = [_ratios(job) for job in jobs]
    return [r for part in parts for r in part]


def best_arrangement(
    geom,
    box,
    grid,
    candidates: Iterable[CableArrangement],
    coarse_grid=None,
    slack: float = 0.05,
    top_k: int = 10,
    workers: int = 1,
    chunk_size: int = 64,
    **workspace_kwargs,
) -> SearchResult:
    """Candidate with the largest workspace ratio on ``grid``.

    With ``coarse_grid`` given, every candidate is first scored on the coarse
    grid and only those within ``slack`` of the best coarse score (and with a
    feasible coarse node, when any candidate has one) are scored on ``grid``. Ties go to the lexicographically smallest assignment, so the
    result does not depend on ``workers`` or ``chunk_size``.
    """
    candidates = list(candidates)
    if not candidates:
        raise InvalidArgument("candidate stream is empty")
    coarse = None
    finalists = candidates
    if coarse_grid is not None:
        coarse = _evaluate(geom, box, coarse_grid, candidates, workers, chunk_size, workspace_kwargs)
        scores = [-1.0 if r is None else r for r in coarse]
        top = max(scores)
        # a candidate with no feasible coarse node is dropped once any other has one
        cutoff = max(top - slack, 1e-300) if top > 0 else top - slack
        keep = [i for i, s in enumerate(scores) if s >= cutoff]
        finalists = [candidates[i] for i in keep]
        coarse = [coarse[i] for i in keep]
    fine = _evaluate(geom, box, grid, finalists, workers, chunk_size, workspace_kwargs)
    n_failed = sum(r is None for r in fine)
    ranked = sorted(
        range(len(finalists)),
        key=lambda i: (-(fine[i] or 0.0), finalists[i].assignment),
    )
    report = tuple(
        RankedEntry(rank, fine[i] or 0.0, finalists[i], None if coarse is None else coarse[i])
        for rank, i in enumerate(ranked[:max(top_k, 1)], start=1)
    )
    return SearchResult(report[0].arrangement, report[0].ratio, report, len(candidates), len(finalists), n_failed)
