"""Per-girth linear programs bounding the edge price of cyclic equilibria.

Fix a shortest cycle ``a_0 .. a_{c-1}`` of an equilibrium and an ownership
pattern of its edges.  Every vertex falls in a group given by its normalized,
capped vector of outer distances to the cycle vertices.  Each simple strategy
change of a cycle player (dropping an owned cycle edge, swapping it for a
chord, buying a chord, or dropping both owned edges for one chord) gives a
linear inequality in the group masses and in ``alpha / n``.  Maximizing
``alpha`` subject to all of them bounds ``alpha / n`` for that ownership
pattern; the maximum over all patterns bounds every equilibrium of girth c.

Edge ``i`` joins ``a_i`` and ``a_{i+1}`` (indices mod c).  Orientation bit
``i`` is 1 when ``a_i`` owns edge ``i`` (a right edge) and 0 when ``a_{i+1}``
owns it (a left edge).
"""

from __future__ import annotations

import itertools
import logging
import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .lp import LPInstance, SolveResult, check_certificate, solve_max

log = logging.getLogger(__name__)

DELETE = "DeleteCycleEdge"
SWAP = "SwapCycleEdge"
BUY = "BuyChord"
DELETE_BOTH = "DeleteBothBuyChord"
KINDS = (DELETE, SWAP, BUY, DELETE_BOTH)

DEFAULT_VECTOR_CEILING = 300_000_000
CHUNK = 1 << 18


class EnumerationTooLarge(ValueError):
    pass


# ---------------------------------------------------------------------------
# cycles, orientations and deviations


@dataclass(frozen=True)
class CycleSpec:
    c: int
    orientation: tuple[int, ...]

    def __post_init__(self):
        if self.c < 3:
            raise ValueError("girth must be at least 3")
        if len(self.orientation) != self.c or any(b not in (0, 1) for b in self.orientation):
            raise ValueError("orientation must be a 0/1 string of length c")

    @classmethod
    def from_bits(cls, bits: str) -> "CycleSpec":
        return cls(len(bits), tuple(int(ch) for ch in bits))

    @property
    def bits(self) -> str:
        return "".join(map(str, self.orientation))

    def owner(self, edge: int) -> int:
        edge %= self.c
        return edge if self.orientation[edge] else (edge + 1) % self.c

    def owned_edges(self, actor: int) -> tuple[int, ...]:
        """Cycle edges bought by ``actor``, as edge indices in ascending order."""
        left, right = (actor - 1) % self.c, actor
        return tuple(sorted({e for e in (left, right) if self.owner(e) == actor}))


@dataclass(frozen=True)
class Deviation:
    kind: str
    actor: int
    deleted: tuple[int, ...] = ()
    chord: int | None = None

    @property
    def edge_change(self) -> int:
        """Net change in the number of edges the actor pays for."""
        return (self.chord is not None) - len(self.deleted)

    def label(self) -> str:
        parts = [self.kind, f"a{self.actor}"]
        if self.deleted:
            parts.append("del=" + ",".join(f"e{e}" for e in self.deleted))
        if self.chord is not None:
            parts.append(f"to=a{self.chord}")
        return " ".join(parts)


def cycle_distance(c: int, i: int, j: int) -> int:
    k = (i - j) % c
    return min(k, c - k)


def chord_targets(c: int, actor: int) -> list[int]:
    """Cycle vertices at cycle distance at least 2 from ``actor``."""
    return [k for k in range(c) if cycle_distance(c, actor, k) >= 2]


def _validate_deviation(spec: CycleSpec, dev: Deviation) -> None:
    c = spec.c
    owned = spec.owned_edges(dev.actor)
    for e in dev.deleted:
        if e % c not in owned:
            raise ValueError(f"{dev.label()}: a{dev.actor} does not own edge e{e}")
    if dev.chord is not None and cycle_distance(c, dev.actor, dev.chord) < 2:
        raise ValueError(f"{dev.label()}: chord target must be non-adjacent to the actor")
    expected = {DELETE: (1, False), SWAP: (1, True), BUY: (0, True), DELETE_BOTH: (2, True)}
    if dev.kind not in expected:
        raise ValueError(f"unknown deviation kind {dev.kind!r}")
    n_del, has_chord = expected[dev.kind]
    if len(dev.deleted) != n_del or (dev.chord is not None) != has_chord:
        raise ValueError(f"{dev.label()}: malformed {dev.kind}")


def deviations(spec: CycleSpec) -> list[Deviation]:
    """All deviations of the four families that ``spec`` permits, in a fixed order."""
    out = []
    c = spec.c
    for a in range(c):
        owned = spec.owned_edges(a)
        targets = chord_targets(c, a)
        out.extend(Deviation(DELETE, a, (e,)) for e in owned)
        out.extend(Deviation(SWAP, a, (e,), k) for e in owned for k in targets)
        out.extend(Deviation(BUY, a, (), k) for k in targets)
        if len(owned) == 2:
            out.extend(Deviation(DELETE_BOTH, a, owned, k) for k in targets)
    return out


def all_possible_deviations(c: int) -> list[Deviation]:
    """Union of :func:`deviations` over every orientation."""
    out = []
    for a in range(c):
        both = tuple(sorted({(a - 1) % c, a}))
        targets = chord_targets(c, a)
        out.extend(Deviation(DELETE, a, (e,)) for e in both)
        out.extend(Deviation(SWAP, a, (e,), k) for e in both for k in targets)
        out.extend(Deviation(BUY, a, (), k) for k in targets)
        out.extend(Deviation(DELETE_BOTH, a, both, k) for k in targets)
    return out


def modified_cycle_distances(spec: CycleSpec, dev: Deviation) -> tuple[int, ...]:
    """Distances from the actor to every cycle vertex after the deviation.

    The graph used is the cycle minus the deleted edges plus the chord.
    """
    _validate_deviation(spec, dev)
    return _aux_distances(spec.c, dev)


def _aux_distances(c: int, dev: Deviation) -> tuple[int, ...]:
    adj = {i: {(i - 1) % c, (i + 1) % c} for i in range(c)}
    for e in dev.deleted:
        u, v = e % c, (e + 1) % c
        adj[u].discard(v)
        adj[v].discard(u)
    if dev.chord is not None:
        adj[dev.actor].add(dev.chord)
        adj[dev.chord].add(dev.actor)
    dist = [-1] * c
    dist[dev.actor] = 0
    q = deque([dev.actor])
    while q:
        u = q.popleft()
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                q.append(w)
    if min(dist) < 0:
        raise ValueError(f"{dev.label()} disconnects the cycle")
    return tuple(dist)


def _old_distances(c: int, actor: int) -> np.ndarray:
    return np.array([cycle_distance(c, actor, j) for j in range(c)], dtype=np.int8)


# ---------------------------------------------------------------------------
# outer-distance groups


def normalize(raw: Sequence[int | float | None], c: int) -> tuple[int, ...]:
    """Shift a raw outer-distance vector so its minimum is 0, then cap at c - 1.

    Unreachable entries may be given as ``None`` or ``math.inf``; they end up
    at the cap.
    """
    if len(raw) != c:
        raise ValueError(f"expected {c} entries, got {len(raw)}")
    finite = [int(x) for x in raw if x is not None and x != float("inf")]
    if not finite:
        raise ValueError("every entry is unreachable")
    lo = min(finite)
    out = []
    for x in raw:
        if x is None or x == float("inf"):
            out.append(c - 1)
        else:
            out.append(min(int(x) - lo, c - 1))
    return tuple(out)


def group_count(c: int) -> int:
    return c**c - (c - 1) ** c


def vector_ceiling() -> int:
    env = os.environ.get("NCG_VECTOR_CEILING")
    return int(env) if env else DEFAULT_VECTOR_CEILING


def _decode(indices: np.ndarray, c: int) -> np.ndarray:
    """Base-c digits of ``indices``; digit 0 is the most significant."""
    out = np.empty((len(indices), c), dtype=np.int8)
    rest = indices.copy()
    for pos in range(c - 1, -1, -1):
        out[:, pos] = rest % c
        rest //= c
    return out


def iter_full_groups(c: int, chunk: int = CHUNK) -> Iterator[np.ndarray]:
    """Yield every vector of {0..c-1}^c containing a 0, in base-c order, in blocks."""
    total = c**c
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        block = _decode(idx, c)
        yield block[(block == 0).any(axis=1)]


def enumerate_groups(
    c: int,
    mode: str = "full",
    seed: int = 0,
    extra_random: int | None = None,
    ceiling: int | None = None,
) -> np.ndarray:
    """Group vectors as an ``(N, c)`` int8 array in base-c order.

    ``mode="full"`` gives all ``c^c - (c-1)^c`` normalized vectors.
    ``mode="sampled"`` gives the ``2^c - 1`` vectors over {0, c-1} plus up to
    ``extra_random`` (default ``2^c``) uniformly drawn valid vectors.
    """
    if c < 3:
        raise ValueError("girth must be at least 3")
    if mode == "full":
        ceiling = vector_ceiling() if ceiling is None else ceiling
        if group_count(c) > ceiling:
            raise EnumerationTooLarge(
                f"full enumeration at c={c} has {group_count(c)} vectors, above the "
                f"ceiling {ceiling}; use sampled mode or raise NCG_VECTOR_CEILING"
            )
        return np.concatenate(list(iter_full_groups(c)))
    if mode != "sampled":
        raise ValueError(f"unknown enumeration mode {mode!r}")

    extra = 2**c if extra_random is None else extra_random
    structured = np.array(list(itertools.product((0, c - 1), repeat=c)), dtype=np.int8)
    structured = structured[(structured == 0).any(axis=1)]
    rng = np.random.default_rng(seed)
    drawn = []
    while len(drawn) < extra:
        v = rng.integers(0, c, size=c)
        if (v == 0).any():
            drawn.append(v)
    parts = [structured]
    if drawn:
        parts.append(np.array(drawn, dtype=np.int8))
    vecs = np.concatenate(parts)
    keys = _base_c_keys(vecs, c)
    _, first = np.unique(keys, return_index=True)
    return vecs[first]


def _base_c_keys(vecs: np.ndarray, c: int) -> np.ndarray:
    keys = np.zeros(len(vecs), dtype=np.int64)
    for pos in range(c):
        keys = keys * c + vecs[:, pos].astype(np.int64)
    return keys


# ---------------------------------------------------------------------------
# coefficients


def coefficient(spec: CycleSpec, dev: Deviation, d: Sequence[int]) -> int:
    """Change in the actor's distance to a vertex with outer vector ``d``."""
    new = modified_cycle_distances(spec, dev)
    c = spec.c
    old = [cycle_distance(c, dev.actor, j) for j in range(c)]
    return min(w + x for w, x in zip(new, d)) - min(w + x for w, x in zip(old, d))


def coefficient_block(c: int, devs: Sequence[Deviation], groups: np.ndarray) -> np.ndarray:
    """Coefficient matrix of shape ``(len(groups), len(devs))`` as int8."""
    out = np.empty((len(groups), len(devs)), dtype=np.int8)
    old_cache: dict[int, np.ndarray] = {}
    for r, dev in enumerate(devs):
        if dev.actor not in old_cache:
            old_cache[dev.actor] = (groups + _old_distances(c, dev.actor)).min(axis=1)
        new = (groups + np.array(_aux_distances(c, dev), dtype=np.int8)).min(axis=1)
        out[:, r] = new - old_cache[dev.actor]
    return out


# ---------------------------------------------------------------------------
# the LP


@dataclass
class CycleLP:
    """An :class:`LPInstance` together with what its rows and columns mean.

    Column ``k < len(groups)`` is the mass of group ``groups[k]``; the last
    column is alpha.  ``multiplicity[k]`` counts how many original groups a
    column stands for after compression.
    """

    spec: CycleSpec
    lp: LPInstance
    groups: np.ndarray
    devs: list[Deviation]
    multiplicity: np.ndarray

    @property
    def unique_columns(self) -> int:
        return len(self.groups)


def _assemble(spec: CycleSpec, devs: list[Deviation], groups: np.ndarray,
              coeffs: np.ndarray, multiplicity: np.ndarray) -> CycleLP:
    """Lay out rows ``sum delta_d x_d + edge_change * alpha >= 0`` and ``sum x_d = 1``."""
    n_groups = len(groups)
    m = len(devs)
    A = np.zeros((m + 1, n_groups + 1), dtype=np.int64)
    A[:m, :n_groups] = coeffs.T
    A[:m, n_groups] = [dev.edge_change for dev in devs]
    A[m, :n_groups] = 1
    objective = np.zeros(n_groups + 1, dtype=np.int64)
    objective[n_groups] = 1
    lp = LPInstance(
        A=A,
        senses=(">=",) * m + ("=",),
        rhs=(Fraction(0),) * m + (Fraction(1),),
        objective=objective,
        row_names=tuple(dev.label() for dev in devs) + ("mass",),
    )
    return CycleLP(spec, lp, groups, devs, multiplicity)


def build_lp(spec: CycleSpec, groups: np.ndarray | Sequence[Sequence[int]]) -> CycleLP:
    groups = np.asarray(groups, dtype=np.int8)
    if len(groups) == 0:
        raise ValueError("no groups given")
    devs = deviations(spec)
    coeffs = coefficient_block(spec.c, devs, groups)
    return _assemble(spec, devs, groups, coeffs, np.ones(len(groups), dtype=np.int64))


def _unique_rows_first(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Exact row dedup of an int8 matrix.

    Returns (first-occurrence indices in ascending order, inverse map onto
    those, counts).  Rows are compared byte for byte via a void view, so
    equal hashes never stand in for equal content.
    """
    mat = np.ascontiguousarray(mat)
    if mat.shape[1] == 0:
        n = len(mat)
        return (np.zeros(min(n, 1), dtype=np.int64), np.zeros(n, dtype=np.int64),
                np.array([n] if n else [], dtype=np.int64))
    view = mat.view(np.dtype((np.void, mat.shape[1] * mat.itemsize))).ravel()
    _, first, inverse, counts = np.unique(view, return_index=True, return_inverse=True,
                                          return_counts=True)
    order = np.argsort(first, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    return first[order], rank[inverse.ravel()], counts[order]


def compress_columns(clp: CycleLP) -> CycleLP:
    """Merge group columns whose coefficients agree in every row.

    The first-seen group keeps the column; masses of its duplicates can be
    shifted onto it without changing any row, so the optimum is unchanged.
    """
    n_groups = len(clp.groups)
    cols = clp.lp.A[:, :n_groups].T.astype(np.int8)
    first, inverse, _ = _unique_rows_first(cols)
    if len(first) == n_groups:
        return clp
    mult = np.zeros(len(first), dtype=np.int64)
    np.add.at(mult, inverse, clp.multiplicity)
    keep = np.append(first, n_groups)
    lp = clp.lp
    new_lp = LPInstance(lp.A[:, keep], lp.senses, lp.rhs, lp.objective[keep],
                        row_names=lp.row_names)
    return CycleLP(clp.spec, new_lp, clp.groups[first], clp.devs, mult)


# ---------------------------------------------------------------------------
# orientation classes


def orbit(bits: tuple[int, ...]) -> set[tuple[int, ...]]:
    """Images of an orientation under rotation and under reversal of the cycle.

    Reversing maps vertex ``a_i`` to ``a_{-i}`` and edge ``i`` to edge
    ``-i-1``; the owner keeps its edge, so right and left swap.
    """
    c = len(bits)
    out = set()
    reflected = [0] * c
    for i, b in enumerate(bits):
        reflected[(-i - 1) % c] = 1 - b
    for base in (tuple(bits), tuple(reflected)):
        for r in range(c):
            out.add(base[r:] + base[:r])
    return out


def canonical_orientations(c: int) -> list[CycleSpec]:
    """One orientation per symmetry class, the lexicographically least of its orbit."""
    if c < 3:
        raise ValueError("girth must be at least 3")
    reps = set()
    for bits in itertools.product((0, 1), repeat=c):
        reps.add(min(orbit(bits)))
    return [CycleSpec(c, r) for r in sorted(reps)]


# ---------------------------------------------------------------------------
# bounds


@dataclass
class ClassResult:
    orientation: str
    alpha_max: Fraction | float | None
    unique_columns: int
    constraints: int
    status: str
    certified: bool
    witness: dict[str, Fraction] = field(default_factory=dict)
    families: dict[str, int] = field(default_factory=dict)


@dataclass
class BoundReport:
    girth: int
    mode: str
    classes: list[ClassResult]
    alpha_max: Fraction | float | None
    total_groups: int
    universal_unique_columns: int
    solver: str
    label: str

    def to_json(self) -> dict:
        return {
            "girth": self.girth,
            "mode": self.mode,
            "label": self.label,
            "solver": self.solver,
            "groups": self.total_groups,
            "universal_unique_columns": self.universal_unique_columns,
            "classes": [
                {
                    "orientation": k.orientation,
                    "alpha_max": _fmt(k.alpha_max),
                    "unique_columns": k.unique_columns,
                    "constraints": k.constraints,
                    "status": k.status,
                    "certified": k.certified,
                    "families": k.families,
                }
                for k in self.classes
            ],
            "alpha_max": _fmt(self.alpha_max),
        }


def _fmt(x):
    if x is None:
        return None
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))


@dataclass
class GroupColumns:
    """Distinct coefficient columns over every possible deviation of girth c."""

    c: int
    devs: list[Deviation]
    groups: np.ndarray  # representative vector per distinct column
    columns: np.ndarray  # (n_unique, len(devs)) int8
    counts: np.ndarray
    total_groups: int


def universal_columns(
    c: int,
    groups: np.ndarray | None = None,
    mode: str = "full",
    threads: int = 1,
    chunk: int = CHUNK,
    ceiling: int | None = None,
) -> GroupColumns:
    """Deduplicate group columns across the union of all orientations' rows.

    Columns equal on this superset of rows are equal in every orientation's
    LP, so the per-orientation compression can start from these.  With
    ``groups=None`` and ``mode="full"`` the groups are streamed in blocks so
    the full vector set never sits in memory at once.
    """
    devs = all_possible_deviations(c)
    if groups is None:
        if mode != "full":
            raise ValueError("pass groups explicitly for sampled mode")
        ceiling = vector_ceiling() if ceiling is None else ceiling
        if group_count(c) > ceiling:
            raise EnumerationTooLarge(
                f"full enumeration at c={c} has {group_count(c)} vectors, above the "
                f"ceiling {ceiling}; use sampled mode or raise NCG_VECTOR_CEILING"
            )
        blocks: Iterable[np.ndarray] = iter_full_groups(c, chunk)
    else:
        groups = np.asarray(groups, dtype=np.int8)
        blocks = (groups[i:i + chunk] for i in range(0, len(groups), chunk))

    def work(block: np.ndarray):
        cols = coefficient_block(c, devs, block)
        first, inverse, counts = _unique_rows_first(cols)
        return block[first], cols[first], counts

    seen: dict[bytes, int] = {}
    reps, cols_out, counts_out = [], [], []
    total = 0

    def merge(result, size):
        nonlocal total
        total += size
        g, cols, counts = result
        for k in range(len(g)):
            key = cols[k].tobytes()
            idx = seen.get(key)
            if idx is None:
                seen[key] = len(reps)
                reps.append(g[k])
                cols_out.append(cols[k])
                counts_out.append(int(counts[k]))
            else:
                counts_out[idx] += int(counts[k])

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            pending: deque = deque()
            for block in blocks:
                pending.append((pool.submit(work, block), len(block)))
                if len(pending) >= 2 * threads:
                    fut, size = pending.popleft()
                    merge(fut.result(), size)
            while pending:
                fut, size = pending.popleft()
                merge(fut.result(), size)
    else:
        for block in blocks:
            merge(work(block), len(block))

    return GroupColumns(
        c=c,
        devs=devs,
        groups=np.array(reps, dtype=np.int8).reshape(-1, c),
        columns=np.array(cols_out, dtype=np.int8).reshape(-1, len(devs)),
        counts=np.array(counts_out, dtype=np.int64),
        total_groups=total,
    )


def lp_for_orientation(gc: GroupColumns, spec: CycleSpec) -> CycleLP:
    """Compressed LP of one orientation, cut out of the universal columns."""
    wanted = deviations(spec)
    index = {dev: r for r, dev in enumerate(gc.devs)}
    rows = [index[dev] for dev in wanted]
    coeffs = gc.columns[:, rows]
    clp = _assemble(spec, wanted, gc.groups, coeffs, gc.counts)
    return compress_columns(clp)


def solve_class(clp: CycleLP, solver: str = "exact") -> ClassResult:
    res: SolveResult = solve_max(clp.lp, mode=solver, require_equality=True)
    certified = res.exact and res.optimal and check_certificate(clp.lp, res)
    if res.exact and res.optimal and not certified:
        raise RuntimeError(f"certificate check failed for orientation {clp.spec.bits}")
    witness = {}
    if res.optimal:
        n_groups = len(clp.groups)
        for j, v in res.certificate.items():
            if j < n_groups:
                witness["".join(map(str, clp.groups[j]))] = v
    return ClassResult(
        orientation=clp.spec.bits,
        alpha_max=res.optimum,
        unique_columns=clp.unique_columns,
        constraints=clp.lp.n_rows,
        status=res.status,
        certified=bool(certified),
        witness=witness,
        families={kind: sum(dev.kind == kind for dev in clp.devs) for kind in KINDS},
    )


def girth_bound(
    c: int,
    mode: str = "full",
    solver: str = "exact",
    seed: int = 0,
    extra_random: int | None = None,
    threads: int = 1,
    orientations: Sequence[CycleSpec] | None = None,
    groups: np.ndarray | None = None,
) -> BoundReport:
    """Maximum alpha/n over all orientation classes of a girth-c cycle.

    In full mode with the exact solver the result is an upper bound on
    ``alpha / n`` for every equilibrium whose shortest cycle has length c.
    Sampled mode drops variables, so it only estimates the LP optimum from
    below.
    """
    if c < 3:
        raise ValueError("girth must be at least 3")
    if groups is None and mode == "sampled":
        groups = enumerate_groups(c, "sampled", seed=seed, extra_random=extra_random)
    gc = universal_columns(c, groups=groups, mode=mode, threads=threads)
    log.info("girth %d: %d groups, %d distinct universal columns", c, gc.total_groups,
             len(gc.groups))
    specs = list(orientations) if orientations is not None else canonical_orientations(c)

    def run(spec: CycleSpec) -> ClassResult:
        return solve_class(lp_for_orientation(gc, spec), solver)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            classes = list(pool.map(run, specs))
    else:
        classes = [run(s) for s in specs]

    values = [k.alpha_max for k in classes if k.status == "optimal"]
    overall = max(values) if values else None
    if mode == "sampled":
        label = "estimate (lower bound of the LP optimum)"
    elif solver == "float":
        label = "upper bound (not certified: float solver)"
    else:
        label = "upper bound"
    return BoundReport(
        girth=c,
        mode=mode,
        classes=classes,
        alpha_max=overall,
        total_groups=gc.total_groups,
        universal_unique_columns=len(gc.groups),
        solver=solver,
        label=label,
    )
