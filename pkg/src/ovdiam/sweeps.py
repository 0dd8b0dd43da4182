"""Batch verification sweeps over instance families and parameter grids.

A cell is one (instance, params) pair. `verify_cell` builds the gadget
once, computes all-pairs distances once, and runs the diameter dichotomy,
the distance-bound suite, the cut checks, and the size accounting against
that single build. Exhaustive families enumerate every left/right matrix
pair; for shapes where that is astronomically large, representatives up
to per-side row permutation are enumerated instead (relabeling vectors
within a side permutes whole vertex fans, so distances are unaffected).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from . import metrics
from .gadget import GadgetGraph, GadgetParams, build_gadget, cut_partition, exact_size
from .metrics import (
    Classification,
    VerificationReport,
    classify,
    diameter,
    distance_matrix,
)
from .ovcore import BitVector, OVInstance, encoder_dimension, has_orthogonal_pair, random_ov


def param_grid(
    ells: Sequence[int], ps: Sequence[int], qs: Sequence[int]
) -> list[GadgetParams]:
    return [
        GadgetParams(ell, p, q)
        for ell in ells
        for p in ps
        for q in qs
    ]


def random_ov_suite(count: int, max_n: int, seed: int) -> list[OVInstance]:
    """`count` random instances with n cycling over 1..max_n and the
    encoder's dimension for that n; fully determined by `seed`."""
    out = []
    for idx in range(count):
        n = (idx % max_n) + 1
        out.append(random_ov(n, encoder_dimension(n), seed + idx))
    return out


def _all_rows(d: int) -> list[BitVector]:
    return [
        BitVector(tuple((value >> (d - 1 - b)) & 1 for b in range(d)))
        for value in range(2**d)
    ]


def exhaustive_ov_instances(n: int, d: int) -> Iterator[OVInstance]:
    """Every (left, right) pair of n x d bit matrices: (2^(nd))^2 instances."""
    rows = _all_rows(d)
    sides = [tuple(combo) for combo in itertools.product(rows, repeat=n)]
    for left in sides:
        for right in sides:
            yield OVInstance(left, right)


def exhaustive_row_multiset_instances(n: int, d: int) -> Iterator[OVInstance]:
    """One representative per orbit of per-side row permutations.

    Reordering the vectors inside a side renames the u/v fans without
    touching any distance, so these representatives cover every instance
    up to that symmetry.
    """
    rows = _all_rows(d)
    sides = [
        tuple(combo)
        for combo in itertools.combinations_with_replacement(rows, n)
    ]
    for left in sides:
        for right in sides:
            yield OVInstance(left, right)


@dataclass
class CellResult:
    n: int
    d: int
    params: GadgetParams
    diameter: int | None
    classification: Classification
    has_pair: bool
    failures: list[tuple[str, str]] = field(default_factory=list)  # (category, msg)

    @property
    def ok(self) -> bool:
        return not self.failures

    def failed_categories(self) -> set[str]:
        return {category for category, _ in self.failures}


def verify_cell(
    inst: OVInstance,
    params: GadgetParams,
    check_bounds: bool = True,
    check_cut: bool = True,
    check_sizes: bool = True,
) -> CellResult:
    """Verify one (instance, params) cell on a single build."""
    g = build_gadget(inst, params)
    dmat = distance_matrix(g)
    pair = has_orthogonal_pair(inst) is not None
    failures: list[tuple[str, str]] = []

    try:
        result = diameter(g, dmat)
        d_value = result.value
    except metrics.DisconnectedGraphError:
        d_value = None
    expected = params.pair_diameter if pair else params.no_pair_diameter
    verdict = (
        classify(d_value, params) if d_value is not None else Classification.INCONSISTENT
    )
    if d_value != expected:
        failures.append(
            ("dichotomy",
             f"diameter {d_value} != expected {expected} (pair={pair}, {params})")
        )
    want = Classification.HAS_PAIR if pair else Classification.NO_PAIR
    if verdict is not want:
        failures.append(
            ("dichotomy", f"classification {verdict.value} != {want.value}")
        )

    if check_sizes:
        sizes = exact_size(
            inst.n, inst.dimension, inst.ones_left(), inst.ones_right(), params
        )
        if sizes != (g.vertex_count, g.edge_count):
            failures.append(
                ("size",
                 f"size formula {sizes} != built ({g.vertex_count}, {g.edge_count})")
            )
        cap = 8 * (
            inst.n * inst.dimension * params.ell
            + inst.dimension * params.q
            + inst.n
            + inst.dimension
            + 1
        )
        if g.vertex_count > cap or g.edge_count > cap:
            failures.append(
                ("size", f"size ({g.vertex_count}, {g.edge_count}) exceeds cap {cap}")
            )

    if check_cut and params.q >= 1:
        cut = cut_partition(g)
        if cut.size != inst.dimension + 1:
            failures.append(
                ("cut", f"cut size {cut.size} != d+1 = {inst.dimension + 1}")
            )
        if not _cut_separates(g, cut):
            failures.append(("cut", "cut removal does not separate the u anchors"))

    if check_bounds:
        report = VerificationReport()
        metrics.distance_bound_checks(g, dmat, report)
        failures += [
            ("bounds", f"{c.name}: expected {c.expected}, actual {c.actual}")
            for c in report.failures()
        ]

    return CellResult(
        n=inst.n,
        d=inst.dimension,
        params=params,
        diameter=d_value,
        classification=verdict,
        has_pair=pair,
        failures=failures,
    )


def _cut_separates(g: GadgetGraph, cut) -> bool:
    """True iff with the cut edges gone, every left u is reachable from
    u_1^L and no right u is."""
    banned = set()
    for a, b in cut.cut_edges:
        banned.add((a, b))
        banned.add((b, a))
    start = g.vertex_of("uL", 1)
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in g.adjacency[u]:
            if (u, v) in banned or v in seen:
                continue
            seen.add(v)
            stack.append(v)
    left_us = {g.vertex_of("uL", i) for i in range(1, g.n + 1)}
    right_us = {g.vertex_of("uR", j) for j in range(1, g.n + 1)}
    return left_us <= seen and not (right_us & seen)


@dataclass
class SweepReport:
    cells: int
    failures: list[str]
    elapsed_s: float

    @property
    def passed(self) -> bool:
        return not self.failures


def run_sweep(
    params_list: Sequence[GadgetParams],
    random_count: int = 0,
    max_n: int = 4,
    seed: int = 0,
    exhaustive_max_n: int = 0,
    exhaustive_max_d: int = 0,
    check_bounds: bool = True,
    max_failures: int = 50,
) -> SweepReport:
    """Dichotomy + bounds + cut + size verification over a family mix.

    Random instances are checked against every cell of the parameter grid.
    Exhaustive families cover all (n, d) with n <= exhaustive_max_n and
    d <= exhaustive_max_d: full enumeration while (2^(nd))^2 stays at most
    ~65k pairs, row-multiset representatives beyond that; these instances
    round-robin through the grid so every cell keeps being exercised.
    """
    start = time.perf_counter()
    cells = 0
    failures: list[str] = []

    def consume(inst: OVInstance, params: GadgetParams) -> None:
        nonlocal cells
        cells += 1
        result = verify_cell(inst, params, check_bounds=check_bounds)
        if not result.ok and len(failures) < max_failures:
            failures.extend(
                f"n={result.n} d={result.d} {result.params} [{category}]: {msg}"
                for category, msg in result.failures
            )

    for inst in random_ov_suite(random_count, max_n, seed):
        for params in params_list:
            consume(inst, params)

    rr = 0
    for n in range(1, exhaustive_max_n + 1):
        for d in range(1, exhaustive_max_d + 1):
            if 4 ** (n * d) <= 65536:
                family: Iterable[OVInstance] = exhaustive_ov_instances(n, d)
                full_grid = 4 ** (n * d) <= 256
            else:
                family = exhaustive_row_multiset_instances(n, d)
                full_grid = False
            for inst in family:
                if full_grid:
                    for params in params_list:
                        consume(inst, params)
                else:
                    consume(inst, params_list[rr % len(params_list)])
                    rr += 1

    return SweepReport(
        cells=cells,
        failures=failures,
        elapsed_s=time.perf_counter() - start,
    )
