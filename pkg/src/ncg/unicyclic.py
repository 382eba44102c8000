"""Which cycle lengths survive in a Nash equilibrium with exactly one cycle.

Take a k-cycle v_0..v_{k-1} and hang a tree of s_i vertices (v_i included)
on each v_i.  The owner of a cycle edge may swap it for an edge to the next
cycle vertex beyond its old neighbour.  Creation cost is unchanged, and the
owner's distance to every vertex of tree j moves by exactly the change of
its cycle distance to v_j (tree depths cancel).  Stability against the swap
is therefore one linear inequality in s per edge and owner.  Feasibility asks
for positive sizes such that every edge has an owner it is stable for.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

__all__ = ["OneCycleResult", "swap_coefficients", "brute_force", "one_cycle_feasibility"]


@dataclass
class OneCycleResult:
    k: int
    feasible: bool
    method: str
    sizes: tuple[int, ...] | None = None
    orientation: str | None = None
    trace: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"k": self.k, "feasible": self.feasible, "method": self.method}
        if self.sizes is not None:
            out["sizes"] = list(self.sizes)
            out["orientation"] = self.orientation
        out["trace"] = list(self.trace)
        return out


def _distances(k: int, src: int, drop: tuple[int, int], add: tuple[int, int]) -> list[int]:
    adj = [{(v - 1) % k, (v + 1) % k} for v in range(k)]
    a, b = drop
    adj[a].discard(b)
    adj[b].discard(a)
    a, b = add
    adj[a].add(b)
    adj[b].add(a)
    dist = [-1] * k
    dist[src] = 0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def swap_coefficients(k: int, edge: int, right: bool) -> np.ndarray:
    """Cost change of the owner of edge {v_edge, v_edge+1} after its swap.

    ``right`` means v_edge owns the edge and swaps it for {v_edge, v_edge+2};
    otherwise v_edge+1 swaps it for {v_edge+1, v_edge-1}.  Entry j is the
    change in distance to v_j, so stability reads ``coeffs @ s >= 0``.
    """
    if k < 3:
        raise ValueError("cycle length must be at least 3")
    a, b = edge % k, (edge + 1) % k
    owner, lost, new = (a, b, (b + 1) % k) if right else (b, a, (a - 1) % k)
    before = [min((j - owner) % k, (owner - j) % k) for j in range(k)]
    after = _distances(k, owner, (owner, lost), (owner, new))
    return np.array(after, dtype=np.int64) - np.array(before, dtype=np.int64)


def _all_coefficients(k: int) -> tuple[np.ndarray, np.ndarray]:
    right = np.array([swap_coefficients(k, e, True) for e in range(k)])
    left = np.array([swap_coefficients(k, e, False) for e in range(k)])
    return right, left


def brute_force(k: int, size_cap: int) -> OneCycleResult:
    """Try every size vector in {1..size_cap}^k.

    Each edge constrains only its own owner's swap, so the orientation can be
    chosen edge by edge once the sizes are fixed.
    """
    if k < 3:
        raise ValueError("cycle length must be at least 3")
    if size_cap < 1:
        raise ValueError("size cap must be positive")
    right, left = _all_coefficients(k)
    total = size_cap**k
    block = 1 << 18
    for start in range(0, total, block):
        idx = np.arange(start, min(total, start + block), dtype=np.int64)
        digits = (idx[:, None] // size_cap ** np.arange(k)[::-1]) % size_cap
        s = digits + 1
        ok_r = s @ right.T >= 0
        ok_l = s @ left.T >= 0
        good = (ok_r | ok_l).all(axis=1)
        hit = np.flatnonzero(good)
        if len(hit):
            row = int(hit[0])
            bits = "".join("1" if ok_r[row, e] else "0" for e in range(k))
            return OneCycleResult(
                k, True, "brute force", tuple(int(x) for x in s[row]), bits,
                [f"sizes {tuple(int(x) for x in s[row])} are stable for orientation {bits}"],
            )
    return OneCycleResult(
        k, False, "brute force",
        trace=[f"no size vector in {{1..{size_cap}}}^{k} is stable for any orientation"],
    )


def _template_holds(k: int) -> list[str] | None:
    """Check that the exact swap inequalities imply the generic ones.

    Generic form, for the edge {v_{i-1}, v_i}: if v_i owns it then
    s_{i-3} + s_{i-2} <= s_{i-1}; if v_{i-1} owns it then
    s_{i+1} + s_{i+2} <= s_i.  Since sizes are positive, the exact inequality
    implies the generic one whenever its coefficients are entrywise at most
    the generic coefficients.
    """
    if k < 6:
        return None
    lines = []
    for i in range(k):
        e = (i - 1) % k
        exact_owner_i = swap_coefficients(k, e, right=False)
        generic = np.zeros(k, dtype=np.int64)
        generic[(i - 3) % k] -= 1
        generic[(i - 2) % k] -= 1
        generic[(i - 1) % k] += 1
        if not (exact_owner_i <= generic).all():
            return None
        exact_owner_prev = swap_coefficients(k, e, right=True)
        generic = np.zeros(k, dtype=np.int64)
        generic[(i + 1) % k] -= 1
        generic[(i + 2) % k] -= 1
        generic[i] += 1
        if not (exact_owner_prev <= generic).all():
            return None
    lines.append(
        f"for every edge {{v_(i-1), v_i}} of the {k}-cycle, stability implies "
        "A_i: s_(i-3)+s_(i-2) <= s_(i-1) (owner v_i) or B_i: s_i >= s_(i+1)+s_(i+2) (owner v_(i-1))"
    )
    return lines


def chain_refutation(k: int) -> OneCycleResult | None:
    """Refute feasibility for k >= 6 without enumerating sizes.

    B_i gives s_i > s_(i+1), which contradicts A_(i+2) (that needs
    s_(i-1) + s_i <= s_(i+1)), so B_i forces B_(i+2).  Following i, i+2, ...
    around the cycle then yields s_i > s_(i+2) > ... > s_i.  With no B_i at
    all every A_i holds, and A_i gives s_(i-1) > s_(i-2) for all i, again a
    strictly increasing closed chain.
    """
    lines = _template_holds(k)
    if lines is None:
        return None
    lines += [
        "B_i implies s_i > s_(i+1), contradicting A_(i+2); hence B_i implies B_(i+2)",
        f"if some B_i holds then s_i > s_(i+2) > s_(i+4) > ... returns to s_i modulo {k}: contradiction",
        "otherwise every A_i holds, so s_(i-1) > s_(i-2) for all i: a strictly increasing cycle",
    ]
    return OneCycleResult(k, False, "chain refutation", trace=lines)


def one_cycle_feasibility(k: int, size_cap: int = 8, method: str = "auto") -> OneCycleResult:
    """Decide whether a unicyclic equilibrium pattern of cycle length k exists.

    ``method="auto"`` uses the chain refutation when it applies (k >= 6) and
    falls back to brute force over sizes up to ``size_cap``.
    """
    if k < 3:
        raise ValueError("cycle length must be at least 3")
    if method not in ("auto", "chain", "brute"):
        raise ValueError(f"unknown method {method!r}")
    if method in ("auto", "chain"):
        res = chain_refutation(k)
        if res is not None:
            return res
        if method == "chain":
            raise ValueError(f"the chain refutation does not apply at k={k}")
    return brute_force(k, size_cap)
