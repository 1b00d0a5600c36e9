"""Shrink a colored bounded-depth rooted tree to a small equivalent core.

The reduction works bottom-up. At every vertex the already-reduced child
subtrees are grouped by canonical code (rooted colored isomorphism); of
each group only the first ``s`` representatives are kept, the rest are
deleted wholesale. Keeping s copies per class is enough for the tree and
its core to agree on every sentence with at most s variables: with only
s pebbles in play, the spoiler side can never pin down more than s siblings
of one isomorphism class at a time.

The size guarantee is the recurrence

    bound(s, 0, c) = 1
    bound(s, k, c) = 1 + s * p * bound(s, k-1, c+1),
    p = (2c * bound(s, k-1, c+1)) ** bound(s, k-1, c+1)

where p over-counts the possible child classes: children are classified
as if the root's neighbors carried a palette doubled by marking, hence
the c+1 and 2c. The value explodes for k >= 3, so results carry a
saturated bound (capped at BOUND_CAP) together with an exactness flag.

Determinism: children are ordered by (canonical code of the reduced
subtree, vertex id). Re-reducing a reduced tree keeps everything, and
the kept set only grows with s.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pebble import DEFAULT_POSITION_CAP, fo_s_equivalent
from .trees import RootedColoredTree, restrict_tree

#: Saturation threshold for the size bound carried in results.
BOUND_CAP = 10**30


def kernel_size_bound(s: int, k: int, c: int) -> int:
    """Exact value of the size recurrence.

    Beware: the value is astronomical for k >= 3; use
    ``kernel_size_bound_capped`` when only a comparison is needed.
    """
    value = _bound(s, k, c, cap=None)
    assert value is not None
    return value


def kernel_size_bound_capped(
    s: int, k: int, c: int, cap: int = BOUND_CAP
) -> tuple[int, bool]:
    """(min(bound, cap), whether the returned value is exact)."""
    value = _bound(s, k, c, cap=cap)
    if value is None:
        return cap, False
    return value, True


def _bound(s: int, k: int, c: int, cap: int | None) -> int | None:
    if s < 1 or c < 1 or k < 0:
        raise ValueError("need s >= 1, c >= 1, k >= 0")
    if k == 0:
        return 1
    inner = _bound(s, k - 1, c + 1, cap)
    if inner is None:
        return None
    if cap is not None:
        # (2c * inner) ** inner overflows any budget once inner is large
        if inner.bit_length() * inner > 4 * cap.bit_length():
            return None
    p = (2 * c * inner) ** inner
    value = 1 + s * p * inner
    if cap is not None and value > cap:
        return None
    return value


def recolor_root(t: RootedColoredTree) -> RootedColoredTree:
    """Mark the root and its children on a doubled palette.

    The root gets the fresh color 2c+1 and each root child moves from
    color x to c+x; everything else keeps its color. The original
    coloring is recoverable, so equivalence over the marked palette
    implies equivalence over the original one.
    """
    c = t.c
    colors = list(t.colors)
    colors[t.root - 1] = 2 * c + 1
    for child in t.children[t.root]:
        colors[child - 1] = c + t.color_of(child)
    return RootedColoredTree(
        n=t.n, root=t.root, parents=t.parents, colors=tuple(colors), c=2 * c + 1
    )


def canonical_code(t: RootedColoredTree) -> bytes:
    """Canonical form: equal codes exactly for color-preserving rooted
    isomorphs. The code of a vertex is its color followed by the sorted
    codes of its children."""
    return _code_below(t, t.root)


def _code_below(t: RootedColoredTree, v: int) -> bytes:
    kids = sorted(_code_below(t, w) for w in t.children[v])
    return b"(%d:" % t.color_of(v) + b"".join(kids) + b")"


@dataclass(frozen=True)
class KernelResult:
    """Outcome of a reduction.

    ``kernel`` is the input restricted to ``kept`` (relabeled to 1..m in
    ascending id order), ``bound`` the size guarantee (saturated at
    BOUND_CAP when ``bound_exact`` is false), and ``stats`` records, per
    tree level, how many distinct child classes were seen across that
    level.
    """

    kernel: RootedColoredTree
    kept: frozenset[int]
    bound: int
    bound_exact: bool
    stats: tuple[tuple[int, int], ...]


def reduce_tree(t: RootedColoredTree, s: int) -> KernelResult:
    if s < 1:
        raise ValueError("the variable budget must be positive")
    class_counts: dict[int, int] = {}

    def work(v: int) -> tuple[frozenset[int], bytes]:
        reduced = sorted(
            ((*work(w), w) for w in t.children[v]),
            key=lambda item: (item[1], item[2]),
        )
        kept: set[int] = {v}
        codes: list[bytes] = []
        copies: dict[bytes, int] = {}
        for kept_w, code_w, _ in reduced:
            seen = copies.get(code_w, 0)
            copies[code_w] = seen + 1
            if seen < s:
                kept.update(kept_w)
                codes.append(code_w)
        if copies:
            level = t.depth_of(v)
            class_counts[level] = class_counts.get(level, 0) + len(copies)
        return frozenset(kept), b"(%d:" % t.color_of(v) + b"".join(codes) + b")"

    kept_all, _ = work(t.root)
    bound, exact = kernel_size_bound_capped(s, t.depth, t.c)
    return KernelResult(
        kernel=restrict_tree(t, kept_all),
        kept=kept_all,
        bound=bound,
        bound_exact=exact,
        stats=tuple(sorted(class_counts.items())),
    )


def verify_kernel(
    t: RootedColoredTree,
    result: KernelResult,
    s: int,
    cap: int = DEFAULT_POSITION_CAP,
) -> bool:
    """Check a reduction against an independent referee.

    Structural checks first (the kernel really is the restriction to the
    kept set, contains the root, and honors the size bound), then the
    pebble game decides equivalence of the original and the kernel.
    """
    if t.root not in result.kept:
        return False
    if len(result.kept) > result.bound:
        return False
    if restrict_tree(t, result.kept) != result.kernel:
        return False
    return fo_s_equivalent(t.to_graph(), result.kernel.to_graph(), s, cap)
