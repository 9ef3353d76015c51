"""Decoders: LP decoding, adaptive separation, cutting planes, guessing
heuristics, branch & bound ML, fractional distance, neighborhood repair,
and message-passing baselines.

Every LP-based decoder certifies ML exactly when its relaxation returns an
integral optimum that is a codeword; all relaxations here contain the
codeword polytope, so such a point minimizes the objective over the code.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, product

import numpy as np

from .channels import hard_decision
from .formulations import (FsInequality, build_formulation,
                           matrix_adaptation_cut_search, most_violated_fs_cut,
                           row_fs_cuts, rpc_cycle_cut_search)
from .gf2 import LinearCode, syndrome
from .simplex import (INTEGRALITY_TOL, LpSolution, LpSolverError,
                      add_rows_resolve, fix_variable_resolve, make_problem,
                      solve)


class DecodeStatus(Enum):
    ML_CERTIFIED = "ml_certified"
    CODEWORD_FOUND = "codeword_found"
    FRACTIONAL_FAILURE = "fractional_failure"
    SOLVER_ERROR = "solver_error"


@dataclass
class DecodeStats:
    lp_solves: int = 0
    cuts_added: int = 0
    iterations: int = 0
    branch_nodes: int = 0
    wall_time: float = 0.0
    final_rows: int = 0


@dataclass
class DecodeResult:
    status: DecodeStatus
    point: np.ndarray | None
    value: float
    stats: DecodeStats = field(default_factory=DecodeStats)

    @property
    def success(self) -> bool:
        return self.status in (DecodeStatus.ML_CERTIFIED, DecodeStatus.CODEWORD_FOUND)

    def codeword(self) -> np.ndarray:
        if self.point is None:
            raise ValueError("no point available")
        return np.round(np.asarray(self.point, dtype=float)).astype(np.uint8)


@dataclass
class DecoderConfig:
    """Knobs shared by the harness; every field has a working default."""

    formulation: str = "fs"
    searchers: tuple[str, ...] = ("adaptation",)
    base: str = "parity_relax"
    max_rounds: int = 100
    max_iterations: int = 50
    max_nodes: int = 100_000
    max_depth: int | None = None
    depth: int = 8
    subset_size: int = 2
    num_faces: int | None = None
    guess_scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        for name in ("max_rounds", "max_iterations", "max_nodes", "depth",
                     "subset_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


def _is_integral(x) -> bool:
    x = np.asarray(x, dtype=float)
    return bool(np.all(np.abs(x - np.round(x)) <= INTEGRALITY_TOL))


def _is_codeword(code: LinearCode, x) -> bool:
    bits = np.round(np.asarray(x, dtype=float)).astype(np.uint8)
    return not syndrome(code.H, bits).any()


def _certified(code: LinearCode, x) -> bool:
    return _is_integral(x) and _is_codeword(code, x)


def _finish_lp_result(code: LinearCode, x, value: float,
                      stats: DecodeStats, t0: float) -> DecodeResult:
    stats.wall_time = time.perf_counter() - t0
    if _certified(code, x):
        point = np.round(np.asarray(x, dtype=float)).astype(np.uint8)
        return DecodeResult(DecodeStatus.ML_CERTIFIED, point, value, stats)
    return DecodeResult(DecodeStatus.FRACTIONAL_FAILURE,
                        np.asarray(x, dtype=float).copy(), value, stats)


def _solver_error(stats: DecodeStats, t0: float) -> DecodeResult:
    stats.wall_time = time.perf_counter() - t0
    return DecodeResult(DecodeStatus.SOLVER_ERROR, None, math.nan, stats)


def lp_decode(code: LinearCode, llr, formulation: str = "fs") -> DecodeResult:
    """Bare LP decoding: solve one relaxation, certify if integral."""
    t0 = time.perf_counter()
    stats = DecodeStats(lp_solves=1)
    try:
        form = build_formulation(code, formulation, np.asarray(llr, dtype=float))
        sol = solve(form.lp)
    except LpSolverError:
        return _solver_error(stats, t0)
    if not sol.optimal:
        return _solver_error(stats, t0)
    stats.final_rows = len(form.lp.rows)
    return _finish_lp_result(code, sol.x[:code.n], sol.value, stats, t0)


def adaptive_lp_decode(code: LinearCode, llr, drop_inactive: bool = False,
                       max_iterations: int | None = None) -> DecodeResult:
    """Separation-based LP decoding starting from the bare box LP.

    Each iteration adds the most violated forbidden-set inequality of every
    check and re-solves; it stops when no check is violated, at which point
    the value equals the full forbidden-set LP optimum.  With
    `drop_inactive`, rows that are not tight are discarded each iteration
    and separation skips checks that already have a tight row, keeping at
    most one row per check in the problem (at the price of more
    iterations).
    """
    t0 = time.perf_counter()
    llr = np.asarray(llr, dtype=float)
    n, h = code.n, code.H
    stats = DecodeStats()
    if max_iterations is None:
        max_iterations = n if not drop_inactive else 10 * n + 20
    supports = [h.row_support(i) for i in range(h.m)]
    try:
        sol = solve(make_problem(n, llr, []))
        stats.lp_solves += 1
        current: list[tuple[int, FsInequality]] = []
        while True:
            x = sol.x[:n]
            if drop_inactive:
                kept: list[tuple[int, FsInequality]] = []
                kept_checks = set()
                for ci, ineq in current:
                    if ci not in kept_checks and abs(ineq.violation(x)) <= 1e-9:
                        kept.append((ci, ineq))
                        kept_checks.add(ci)
                new = []
                for i, support in enumerate(supports):
                    if not support or i in kept_checks:
                        continue
                    cut = most_violated_fs_cut(support, x)
                    if cut is not None:
                        new.append((i, cut))
                if not new:
                    current = kept
                    break
                current = kept + new
                sol = solve(make_problem(
                    n, llr, [ineq.as_lp_row() for _, ineq in current]))
                stats.lp_solves += 1
                stats.cuts_added += len(new)
            else:
                new = []
                for i, support in enumerate(supports):
                    if not support:
                        continue
                    cut = most_violated_fs_cut(support, x)
                    if cut is not None:
                        new.append((i, cut))
                if not new:
                    break
                sol = add_rows_resolve(sol, [ineq.as_lp_row() for _, ineq in new])
                stats.lp_solves += 1
                stats.cuts_added += len(new)
                current.extend(new)
            stats.iterations += 1
            if stats.iterations > max_iterations:
                return _solver_error(stats, t0)
            if not sol.optimal:
                return _solver_error(stats, t0)
    except LpSolverError:
        return _solver_error(stats, t0)
    stats.final_rows = len(current)
    return _finish_lp_result(code, sol.x[:n], sol.value, stats, t0)


_SEARCHERS = {
    "adaptation": lambda h, x, seed: matrix_adaptation_cut_search(h, x),
    "cycle": lambda h, x, seed: rpc_cycle_cut_search(h, x, rng_seed=seed),
}


def cutting_plane_decode(code: LinearCode, llr, searchers=("adaptation",),
                         base: str = "parity_relax", max_rounds: int = 100,
                         rng_seed: int = 0) -> DecodeResult:
    """Generic cutting-plane loop over a base relaxation.

    Every round first separates the original rows, then runs the given
    redundant-parity-check searchers in order until one yields cuts; all
    cuts are valid for the codeword polytope, so an integral codeword
    optimum is the ML word.  Searchers are names ("adaptation", "cycle")
    or callables (H, x, seed) -> [FsInequality].
    """
    t0 = time.perf_counter()
    llr = np.asarray(llr, dtype=float)
    stats = DecodeStats()
    chain = [_SEARCHERS[s] if isinstance(s, str) else s for s in searchers]
    seen: set[tuple] = set()
    try:
        form = build_formulation(code, base, llr)
        sol = solve(form.lp)
        stats.lp_solves += 1
        for _ in range(max_rounds):
            if not sol.optimal:
                return _solver_error(stats, t0)
            x = sol.x[:code.n]
            if _certified(code, x):
                break
            cuts = [c for c in row_fs_cuts(code.H, x)
                    if (c.support, c.odd_subset) not in seen]
            if not cuts:
                for searcher in chain:
                    cuts = [c for c in searcher(code.H, x, rng_seed + stats.iterations)
                            if (c.support, c.odd_subset) not in seen]
                    if cuts:
                        break
            if not cuts:
                break
            for c in cuts:
                seen.add((c.support, c.odd_subset))
            sol = add_rows_resolve(sol, [c.as_lp_row() for c in cuts])
            stats.lp_solves += 1
            stats.cuts_added += len(cuts)
            stats.iterations += 1
    except LpSolverError:
        return _solver_error(stats, t0)
    stats.final_rows = len(form.lp.rows) + stats.cuts_added
    return _finish_lp_result(code, sol.x[:code.n], sol.value, stats, t0)


def fractional_distance(code: LinearCode, formulation: str = "fs") -> float:
    """Minimum weight of a nonzero vertex of the relaxation polytope.

    Minimizes the bit-sum over every face that excludes the origin (rows
    with nonzero right-hand side, plus the upper box faces); the smallest
    optimum over those faces is the fractional distance.  With the
    cascade formulation only full-support degree-3 rows are used.
    """
    ones = np.ones(code.n)
    form = build_formulation(code, formulation, ones)
    base = solve(form.lp)
    if not base.optimal:
        raise LpSolverError("base relaxation not solvable")
    best = math.inf
    for row, tag in zip(form.lp.rows, form.row_tags):
        if tag[0] != "fs" or row.rhs <= 0:
            continue
        if formulation == "cascade" and (len(tag[2]) != 3 or len(tag[3]) != 3):
            continue
        faced = add_rows_resolve(base, [(row.coeffs, ">=", row.rhs)])
        if faced.optimal:
            best = min(best, faced.value)
    if formulation != "cascade":
        for j in range(code.n):
            faced = fix_variable_resolve(base, j, 1.0)
            if faced.optimal:
                best = min(best, faced.value)
    return float(best)


def facet_guessing_decode(code: LinearCode, llr, mode: str = "exhaustive",
                          num_faces: int | None = None,
                          rng_seed: int = 0) -> DecodeResult:
    """Re-optimize on faces not active at a failed LP optimum.

    Candidate faces are the forbidden-set rows and box faces that the
    pseudocodeword does not touch; each face LP that comes back integral
    proposes a codeword, and the cheapest proposal wins (without an ML
    certificate).
    """
    if mode not in ("exhaustive", "random"):
        raise ValueError("mode must be 'exhaustive' or 'random'")
    t0 = time.perf_counter()
    llr = np.asarray(llr, dtype=float)
    stats = DecodeStats(lp_solves=1)
    try:
        form = build_formulation(code, "fs", llr)
        sol = solve(form.lp)
        if not sol.optimal:
            return _solver_error(stats, t0)
        x = sol.x[:code.n]
        if _certified(code, x):
            return _finish_lp_result(code, x, sol.value, stats, t0)
        active = set(sol.active_rows)
        faces: list[tuple] = []
        for ri, row in enumerate(form.lp.rows):
            if ri not in active:
                faces.append(("row", row))
        for j in range(code.n):
            if x[j] > 1e-9:
                faces.append(("fix", j, 0.0))
            if x[j] < 1.0 - 1e-9:
                faces.append(("fix", j, 1.0))
        if mode == "random" and num_faces is not None and num_faces < len(faces):
            rng = np.random.default_rng(rng_seed)
            idx = rng.choice(len(faces), size=num_faces, replace=False)
            faces = [faces[int(i)] for i in sorted(idx)]
        best_val, best_point = math.inf, None
        for face in faces:
            if face[0] == "row":
                cand = add_rows_resolve(sol, [(face[1].coeffs, ">=", face[1].rhs)])
            else:
                cand = fix_variable_resolve(sol, face[1], face[2])
            stats.lp_solves += 1
            if cand.optimal and _certified(code, cand.x[:code.n]):
                if cand.value < best_val - 1e-12:
                    best_val = cand.value
                    best_point = np.round(cand.x[:code.n]).astype(np.uint8)
    except LpSolverError:
        return _solver_error(stats, t0)
    stats.wall_time = time.perf_counter() - t0
    if best_point is None:
        return DecodeResult(DecodeStatus.FRACTIONAL_FAILURE, x.copy(), sol.value, stats)
    return DecodeResult(DecodeStatus.CODEWORD_FOUND, best_point, best_val, stats)


def bit_guessing_decode(code: LinearCode, llr, c: float = 1.0,
                        rng_seed: int = 0) -> DecodeResult:
    """Fix ceil(c log2 n) random bits every possible way and keep the best
    integral re-solve."""
    if c < 1:
        raise ValueError("c must be at least 1")
    t0 = time.perf_counter()
    llr = np.asarray(llr, dtype=float)
    stats = DecodeStats(lp_solves=1)
    try:
        form = build_formulation(code, "fs", llr)
        sol = solve(form.lp)
        if not sol.optimal:
            return _solver_error(stats, t0)
        x = sol.x[:code.n]
        if _certified(code, x):
            return _finish_lp_result(code, x, sol.value, stats, t0)
        k = min(code.n, math.ceil(c * math.log2(max(code.n, 2))))
        rng = np.random.default_rng(rng_seed)
        positions = sorted(int(j) for j in rng.choice(code.n, size=k, replace=False))
        best_val, best_point = math.inf, None
        for bits in product((0.0, 1.0), repeat=k):
            rows = [([(j, 1.0)], "=", b) for j, b in zip(positions, bits)]
            cand = add_rows_resolve(sol, rows)
            stats.lp_solves += 1
            if cand.optimal and _certified(code, cand.x[:code.n]):
                if cand.value < best_val - 1e-12:
                    best_val = cand.value
                    best_point = np.round(cand.x[:code.n]).astype(np.uint8)
    except LpSolverError:
        return _solver_error(stats, t0)
    stats.wall_time = time.perf_counter() - t0
    if best_point is None:
        return DecodeResult(DecodeStatus.FRACTIONAL_FAILURE, x.copy(), sol.value, stats)
    return DecodeResult(DecodeStatus.CODEWORD_FOUND, best_point, best_val, stats)


def _least_certain(x, fixed: set[int]) -> int:
    """Branch variable: fractional coordinate closest to 1/2, lowest index
    first; falls back to the lowest unfixed index when x is integral."""
    x = np.asarray(x, dtype=float)
    best, best_key = -1, (math.inf, math.inf)
    for j in range(len(x)):
        if j in fixed:
            continue
        frac = INTEGRALITY_TOL < x[j] < 1.0 - INTEGRALITY_TOL
        key = (abs(x[j] - 0.5) if frac else 0.5, j)
        if key < best_key:
            best, best_key = j, key
    return best


def branch_and_bound_decode(code: LinearCode, llr, formulation: str = "fs",
                            max_nodes: int = 100_000,
                            max_depth: int | None = None) -> DecodeResult:
    """Depth-first LP branch & bound; exact ML when the tree is exhausted.

    Branches on the least certain variable with the 0-child explored
    first; nodes are pruned at incumbent value minus 1e-9.
    """
    t0 = time.perf_counter()
    llr = np.asarray(llr, dtype=float)
    n = code.n
    stats = DecodeStats(lp_solves=1)
    try:
        form = build_formulation(code, formulation, llr)
        root = solve(form.lp)
    except LpSolverError:
        return _solver_error(stats, t0)
    if not root.optimal:
        return _solver_error(stats, t0)
    inc_val, inc_point = math.inf, None
    exhausted = True
    # stack entries: (parent solution, var, value, depth, fixed set)
    stack: list[tuple] = []

    def consider(sol: LpSolution, depth: int, fixed: set[int]):
        nonlocal inc_val, inc_point, exhausted
        if not sol.optimal:
            return
        x = sol.x[:n]
        if _is_integral(x) and _is_codeword(code, x):
            point = np.round(x).astype(np.uint8)
            # value ties resolve to the lexicographically smallest codeword,
            # matching the enumeration oracle's convention
            if (sol.value < inc_val - 1e-9
                    or (abs(sol.value - inc_val) <= 1e-9 and inc_point is not None
                        and tuple(point) < tuple(inc_point))):
                inc_val = min(inc_val, sol.value)
                inc_point = point
            return
        if sol.value >= inc_val - 1e-9:
            return
        if _is_integral(x) and len(fixed) >= n:
            return
        if max_depth is not None and depth >= max_depth:
            exhausted = False
            return
        j = _least_certain(x, fixed)
        if j < 0:
            return
        child_fixed = fixed | {j}
        stack.append((sol, j, 1.0, depth + 1, child_fixed))
        stack.append((sol, j, 0.0, depth + 1, child_fixed))

    consider(root, 0, set())
    try:
        while stack:
            if stats.branch_nodes >= max_nodes:
                exhausted = False
                break
            parent, j, v, depth, fixed = stack.pop()
            if parent.value >= inc_val - 1e-9:
                continue
            child = fix_variable_resolve(parent, j, v)
            stats.branch_nodes += 1
            stats.lp_solves += 1
            consider(child, depth, fixed)
    except LpSolverError:
        return _solver_error(stats, t0)
    stats.wall_time = time.perf_counter() - t0
    if inc_point is None:
        status = DecodeStatus.FRACTIONAL_FAILURE
        return DecodeResult(status, root.x[:n].copy(), root.value, stats)
    status = DecodeStatus.ML_CERTIFIED if exhausted else DecodeStatus.CODEWORD_FOUND
    return DecodeResult(status, inc_point, inc_val, stats)


def variable_depth_decode(code: LinearCode, llr, depth: int = 8) -> DecodeResult:
    """Breadth-first search of bounded depth over the least certain bits;
    solves at most 2^(depth+1) - 1 LPs."""
    if depth < 1:
        raise ValueError("depth must be positive")
    t0 = time.perf_counter()
    llr = np.asarray(llr, dtype=float)
    n = code.n
    stats = DecodeStats(lp_solves=1)
    try:
        form = build_formulation(code, "fs", llr)
        root = solve(form.lp)
        if not root.optimal:
            return _solver_error(stats, t0)
        x = root.x[:n]
        if _certified(code, x):
            return _finish_lp_result(code, x, root.value, stats, t0)
        frac = [j for j in range(n) if INTEGRALITY_TOL < x[j] < 1 - INTEGRALITY_TOL]
        targets = sorted(frac, key=lambda j: (abs(x[j] - 0.5), j))[:depth]
        inc_val, inc_point = math.inf, None
        level = [root]
        for t in targets:
            nxt = []
            for sol in level:
                if sol.value >= inc_val - 1e-9:
                    continue
                for v in (0.0, 1.0):
                    child = fix_variable_resolve(sol, t, v)
                    stats.lp_solves += 1
                    stats.branch_nodes += 1
                    if not child.optimal or child.value >= inc_val - 1e-9:
                        continue
                    cx = child.x[:n]
                    if _is_integral(cx) and _is_codeword(code, cx):
                        inc_val = child.value
                        inc_point = np.round(cx).astype(np.uint8)
                    else:
                        nxt.append(child)
            level = nxt
    except LpSolverError:
        return _solver_error(stats, t0)
    stats.wall_time = time.perf_counter() - t0
    if inc_point is None:
        return DecodeResult(DecodeStatus.FRACTIONAL_FAILURE, x.copy(), root.value, stats)
    return DecodeResult(DecodeStatus.CODEWORD_FOUND, inc_point, inc_val, stats)


def constant_depth_decode(code: LinearCode, llr, depth: int = 8,
                          subset_size: int = 2) -> DecodeResult:
    """Iterate fixed-size subsets of the least certain bits; for each
    subset all 2^m assignments are solved and the first subset whose best
    solution is integral wins.  Worst case C(depth, m) 2^m + 1 LPs."""
    if not 1 <= subset_size <= depth:
        raise ValueError("need 1 <= subset_size <= depth")
    t0 = time.perf_counter()
    llr = np.asarray(llr, dtype=float)
    n = code.n
    stats = DecodeStats(lp_solves=1)
    try:
        form = build_formulation(code, "fs", llr)
        root = solve(form.lp)
        if not root.optimal:
            return _solver_error(stats, t0)
        x = root.x[:n]
        if _certified(code, x):
            return _finish_lp_result(code, x, root.value, stats, t0)
        frac = [j for j in range(n) if INTEGRALITY_TOL < x[j] < 1 - INTEGRALITY_TOL]
        targets = sorted(frac, key=lambda j: (abs(x[j] - 0.5), j))[:depth]
        m = min(subset_size, len(targets))
        for combo in combinations(range(len(targets)), m):
            positions = [targets[i] for i in combo]
            best_val, best_x = math.inf, None
            for bits in product((0.0, 1.0), repeat=m):
                rows = [([(j, 1.0)], "=", b) for j, b in zip(positions, bits)]
                cand = add_rows_resolve(root, rows)
                stats.lp_solves += 1
                if cand.optimal and cand.value < best_val:
                    best_val, best_x = cand.value, cand.x[:n]
            if best_x is not None and _is_integral(best_x) and _is_codeword(code, best_x):
                stats.wall_time = time.perf_counter() - t0
                return DecodeResult(DecodeStatus.CODEWORD_FOUND,
                                    np.round(best_x).astype(np.uint8),
                                    best_val, stats)
    except LpSolverError:
        return _solver_error(stats, t0)
    stats.wall_time = time.perf_counter() - t0
    return DecodeResult(DecodeStatus.FRACTIONAL_FAILURE, x.copy(), root.value, stats)


def neighborhood_search(code: LinearCode, llr, exchange_depth: int = 1,
                        max_moves: int | None = None) -> np.ndarray:
    """Hard-decision repair: solve the syndrome on the least reliable
    positions, then steepest-descent exchanges of one (or two) error
    positions until locally optimal.  Always returns a codeword;
    `max_moves=0` returns the repair start point itself."""
    if exchange_depth not in (1, 2):
        raise ValueError("exchange_depth must be 1 or 2")
    llr = np.asarray(llr, dtype=float)
    n, h = code.n, code.H
    y = hard_decision(llr)
    s = syndrome(h, y)
    reliab = np.abs(llr)
    order = sorted(range(n), key=lambda j: (reliab[j], j))
    # GF(2) Jordan elimination of [H | s] with columns tried least reliable
    # first; pivot columns become the basic (solved) error positions.
    aug = [h.rows[i] | (int(s[i]) << n) for i in range(h.m)]
    pivot_rows: list[int] = []
    pivot_cols: list[int] = []
    pr = 0
    for col in order:
        sel = -1
        for i in range(pr, len(aug)):
            if (aug[i] >> col) & 1:
                sel = i
                break
        if sel < 0:
            continue
        aug[pr], aug[sel] = aug[sel], aug[pr]
        for i in range(len(aug)):
            if i != pr and (aug[i] >> col) & 1:
                aug[i] ^= aug[pr]
        pivot_rows.append(pr)
        pivot_cols.append(col)
        pr += 1
    for i in range(pr, len(aug)):
        if (aug[i] >> n) & 1:
            raise ValueError("inconsistent syndrome system: rank-deficient input")
    free_cols = [j for j in order if j not in set(pivot_cols)]
    r = len(pivot_cols)
    # basic pattern and per-free-column flip masks over the pivot rows
    basic = np.array([(aug[t] >> n) & 1 for t in range(r)], dtype=bool)
    flip = {f: np.array([(aug[t] >> f) & 1 for t in range(r)], dtype=bool)
            for f in free_cols}
    wb = reliab[pivot_cols] if r else np.zeros(0)
    e_free = {f: 0 for f in free_cols}

    def try_move(cols):
        mask = basic.copy()
        delta = 0.0
        for f in cols:
            mask ^= flip[f]
            delta += reliab[f] * (1 - 2 * e_free[f])
        delta += float(wb @ mask) - float(wb @ basic)
        return delta, mask

    moves_done = 0
    improved = True
    while improved and (max_moves is None or moves_done < max_moves):
        improved = False
        best_delta, best_cols, best_mask = -1e-12, None, None
        singles = [(f,) for f in free_cols]
        moves = singles if exchange_depth == 1 else \
            singles + [c for c in combinations(free_cols, 2)]
        for cols in moves:
            delta, mask = try_move(cols)
            if delta < best_delta:
                best_delta, best_cols, best_mask = delta, cols, mask
        if best_cols is not None:
            for f in best_cols:
                e_free[f] ^= 1
            basic = best_mask
            improved = True
            moves_done += 1
    e = np.zeros(n, dtype=np.uint8)
    for f, b in e_free.items():
        e[f] = b
    for t, col in enumerate(pivot_cols):
        e[col] = int(basic[t])
    return (y ^ e).astype(np.uint8)


def _message_passing(code: LinearCode, llr, max_iterations: int,
                     use_min_sum: bool) -> DecodeResult:
    t0 = time.perf_counter()
    llr = np.asarray(llr, dtype=float)
    n = code.n
    stats = DecodeStats()
    edges_i, edges_j = [], []
    for i in range(code.m):
        for j in code.H.row_support(i):
            edges_i.append(i)
            edges_j.append(j)
    edges_i = np.array(edges_i, dtype=int)
    edges_j = np.array(edges_j, dtype=int)
    check_slices = [np.flatnonzero(edges_i == i) for i in range(code.m)]
    c2v = np.zeros(len(edges_i))
    posterior = llr.copy()
    for it in range(1, max_iterations + 1):
        stats.iterations = it
        totals = llr + np.bincount(edges_j, weights=c2v, minlength=n)
        v2c = np.clip(totals[edges_j] - c2v, -50.0, 50.0)
        for idx in check_slices:
            mu = v2c[idx]
            if use_min_sum:
                if len(mu) == 1:
                    c2v[idx] = 50.0
                    continue
                signs = np.where(mu < 0, -1.0, 1.0)
                sign_all = np.prod(signs)
                mags = np.abs(mu)
                o = np.argsort(mags)
                m1, m2 = mags[o[0]], mags[o[1]]
                out = sign_all * signs * np.where(np.arange(len(mu)) == o[0], m2, m1)
            else:
                t = np.tanh(mu / 2.0)
                d = len(t)
                front = np.ones(d)
                back = np.ones(d)
                for a in range(1, d):
                    front[a] = front[a - 1] * t[a - 1]
                for a in range(d - 2, -1, -1):
                    back[a] = back[a + 1] * t[a + 1]
                prod_excl = np.clip(front * back, -0.9999999999, 0.9999999999)
                out = 2.0 * np.arctanh(prod_excl)
            c2v[idx] = np.clip(out, -50.0, 50.0)
        posterior = llr + np.bincount(edges_j, weights=c2v, minlength=n)
        bits = (posterior < 0).astype(np.uint8)
        if not syndrome(code.H, bits).any():
            stats.wall_time = time.perf_counter() - t0
            return DecodeResult(DecodeStatus.CODEWORD_FOUND, bits,
                                float(llr @ bits), stats)
    stats.wall_time = time.perf_counter() - t0
    probs = 1.0 / (1.0 + np.exp(np.clip(posterior, -50, 50)))
    return DecodeResult(DecodeStatus.FRACTIONAL_FAILURE, probs,
                        float(llr @ probs), stats)


def min_sum_decode(code: LinearCode, llr, max_iterations: int = 50) -> DecodeResult:
    """Min-sum flooding; stops early on a zero-syndrome hard decision.
    The output is never ML-certified."""
    if max_iterations < 1:
        raise ValueError("max_iterations must be positive")
    return _message_passing(code, llr, max_iterations, use_min_sum=True)


def sum_product_decode(code: LinearCode, llr, max_iterations: int = 50) -> DecodeResult:
    """Sum-product flooding with the tanh rule; stops early on a
    zero-syndrome hard decision."""
    if max_iterations < 1:
        raise ValueError("max_iterations must be positive")
    return _message_passing(code, llr, max_iterations, use_min_sum=False)


def make_decoder(name: str, config: DecoderConfig | None = None):
    """Decoder registry for the harness and CLI; returns f(code, llr)."""
    cfg = config or DecoderConfig()
    table = {
        "lp": lambda c, l: lp_decode(c, l, cfg.formulation),
        "adaptive_lp": lambda c, l: adaptive_lp_decode(c, l, drop_inactive=False),
        "adaptive_lp_drop": lambda c, l: adaptive_lp_decode(c, l, drop_inactive=True),
        "cutting_plane": lambda c, l: cutting_plane_decode(
            c, l, cfg.searchers, cfg.base, cfg.max_rounds, cfg.seed),
        "branch_and_bound": lambda c, l: branch_and_bound_decode(
            c, l, cfg.formulation, cfg.max_nodes, cfg.max_depth),
        "variable_depth": lambda c, l: variable_depth_decode(c, l, cfg.depth),
        "constant_depth": lambda c, l: constant_depth_decode(
            c, l, cfg.depth, cfg.subset_size),
        "facet_guessing": lambda c, l: facet_guessing_decode(
            c, l, "exhaustive" if cfg.num_faces is None else "random",
            cfg.num_faces, cfg.seed),
        "bit_guessing": lambda c, l: bit_guessing_decode(c, l, cfg.guess_scale, cfg.seed),
        "min_sum": lambda c, l: min_sum_decode(c, l, cfg.max_iterations),
        "sum_product": lambda c, l: sum_product_decode(c, l, cfg.max_iterations),
    }
    try:
        return table[name]
    except KeyError:
        raise ValueError(f"unknown decoder {name!r}; options: {sorted(table)}")
