"""Rooted colored trees, elimination forests, tree-models, and their files.

Conventions:

* ``RootedColoredTree.depth`` counts edges, so a single vertex has depth 0.
* ``EliminationForest.height`` counts vertices along a root-to-node path,
  so a single vertex has height 1. A graph has tree-depth at most k
  exactly when it has an elimination forest of height at most k.

Tree file format (ASCII, ``#`` comments):

    p tree <n> <c>
    r <root>
    t <v> <parent> [<color>]      # parent 0 marks the root; color defaults to 1

Forest files are the same minus colors and the root line:

    p forest <n>
    t <v> <parent>                # parent 0 marks a root

Tree-model files are tree files with extra rule lines:

    rule <c1> <c2> <d> <0|1>
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, TextIO

from .graphs import ColoredGraph, _data_lines


@dataclass(frozen=True)
class RootedColoredTree:
    n: int
    root: int
    parents: tuple[int, ...]  # parents[v-1]; 0 for the root
    colors: tuple[int, ...]
    c: int

    def __post_init__(self) -> None:
        if not 1 <= self.root <= self.n:
            raise ValueError("root out of range")
        if len(self.parents) != self.n or len(self.colors) != self.n:
            raise ValueError("parents and colors must cover every vertex")
        if self.parents[self.root - 1] != 0:
            raise ValueError("the root must have parent 0")
        if self.c < 1:
            raise ValueError("color count must be positive")
        for v in range(1, self.n + 1):
            col = self.colors[v - 1]
            if not 1 <= col <= self.c:
                raise ValueError(f"vertex {v} has color {col} outside 1..{self.c}")
            p = self.parents[v - 1]
            if v != self.root and not 1 <= p <= self.n:
                raise ValueError(f"vertex {v} has parent {p} out of range")
            if p == v:
                raise ValueError(f"vertex {v} is its own parent")
        self.depths  # forces the cycle/connectivity check

    @staticmethod
    def build(
        parents: dict[int, int],
        colors: dict[int, int] | None = None,
        c: int | None = None,
    ) -> "RootedColoredTree":
        """From a child-to-parent map over 1..n (root mapped to 0)."""
        n = len(parents)
        roots = [v for v, p in parents.items() if p == 0]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {len(roots)}")
        cols = {v: 1 for v in parents}
        if colors:
            cols.update(colors)
        palette = c if c is not None else max(cols.values(), default=1)
        return RootedColoredTree(
            n=n,
            root=roots[0],
            parents=tuple(parents[v] for v in range(1, n + 1)),
            colors=tuple(cols[v] for v in range(1, n + 1)),
            c=palette,
        )

    @cached_property
    def depths(self) -> tuple[int, ...]:
        """Distance in edges from the root, per vertex."""
        depths = [-1] * (self.n + 1)
        depths[self.root] = 0
        for v in range(1, self.n + 1):
            if depths[v] >= 0:
                continue
            chain = []
            u = v
            while depths[u] < 0:
                chain.append(u)
                u = self.parents[u - 1]
                if u == 0 or u in chain:
                    raise ValueError("parent links do not form a rooted tree")
            base = depths[u]
            for i, w in enumerate(reversed(chain), start=1):
                depths[w] = base + i
        return tuple(depths[1:])

    @property
    def depth(self) -> int:
        return max(self.depths)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        """Children lists indexed by vertex (slot 0 unused), ids ascending."""
        kids: list[list[int]] = [[] for _ in range(self.n + 1)]
        for v in range(1, self.n + 1):
            p = self.parents[v - 1]
            if p != 0:
                kids[p].append(v)
        return tuple(tuple(sorted(k)) for k in kids)

    @cached_property
    def leaves(self) -> frozenset[int]:
        return frozenset(v for v in range(1, self.n + 1) if not self.children[v])

    def color_of(self, v: int) -> int:
        return self.colors[v - 1]

    def depth_of(self, v: int) -> int:
        return self.depths[v - 1]

    def to_graph(self) -> ColoredGraph:
        edges = [
            (v, self.parents[v - 1])
            for v in range(1, self.n + 1)
            if self.parents[v - 1] != 0
        ]
        return ColoredGraph.build(self.n, edges, self.colors, c=self.c)

    @staticmethod
    def from_graph(g: ColoredGraph, root: int) -> "RootedColoredTree":
        if not 1 <= root <= g.n:
            raise ValueError("root out of range")
        if len(g.edges) != g.n - 1:
            raise ValueError("not a tree: wrong edge count")
        parents = {root: 0}
        frontier = [root]
        while frontier:
            u = frontier.pop()
            for w in g.adj[u]:
                if w not in parents:
                    parents[w] = u
                    frontier.append(w)
        if len(parents) != g.n:
            raise ValueError("not a tree: graph is disconnected")
        return RootedColoredTree.build(
            parents, {v: g.color_of(v) for v in g.vertices}, c=g.c
        )

    @cached_property
    def distance(self) -> tuple[tuple[int, ...], ...]:
        """All-pairs distances in the tree (edges), indexed [u-1][v-1]."""
        up = self.depths
        anc_cache: dict[int, list[int]] = {}

        def ancestors(v: int) -> list[int]:
            if v not in anc_cache:
                chain = [v]
                while self.parents[chain[-1] - 1] != 0:
                    chain.append(self.parents[chain[-1] - 1])
                anc_cache[v] = chain
            return anc_cache[v]

        rows = []
        for u in range(1, self.n + 1):
            anc_u = {w: i for i, w in enumerate(ancestors(u))}
            row = []
            for v in range(1, self.n + 1):
                for j, w in enumerate(ancestors(v)):
                    if w in anc_u:
                        row.append(anc_u[w] + j)
                        break
            rows.append(tuple(row))
        return tuple(rows)


def restrict_tree(t: RootedColoredTree, kept: Iterable[int]) -> RootedColoredTree:
    """Induced subtree on ``kept``, relabeled to 1..m in ascending id order.

    ``kept`` must contain the root and be closed under taking parents.
    """
    kept_sorted = sorted(set(kept))
    if t.root not in kept_sorted:
        raise ValueError("the kept set must contain the root")
    relabel = {old: new for new, old in enumerate(kept_sorted, start=1)}
    parents: dict[int, int] = {}
    colors: dict[int, int] = {}
    for old in kept_sorted:
        p = t.parents[old - 1]
        if p != 0 and p not in relabel:
            raise ValueError("the kept set is not closed under parents")
        parents[relabel[old]] = relabel[p] if p != 0 else 0
        colors[relabel[old]] = t.color_of(old)
    return RootedColoredTree.build(parents, colors, c=t.c)


# ---------------------------------------------------------------------------
# Elimination forests and exact tree-depth

@dataclass(frozen=True)
class EliminationForest:
    n: int
    parents: tuple[int, ...]  # parents[v-1]; 0 for roots

    def __post_init__(self) -> None:
        if len(self.parents) != self.n:
            raise ValueError("parents must cover every vertex")
        for v in range(1, self.n + 1):
            p = self.parents[v - 1]
            if p != 0 and not 1 <= p <= self.n:
                raise ValueError(f"vertex {v} has parent {p} out of range")
        self.node_depths  # cycle check

    @cached_property
    def node_depths(self) -> tuple[int, ...]:
        """Depth counted in vertices: roots have depth 1."""
        depths = [0] * (self.n + 1)
        for v in range(1, self.n + 1):
            if depths[v]:
                continue
            chain = []
            u = v
            while u != 0 and not depths[u]:
                chain.append(u)
                u = self.parents[u - 1]
                if u in chain:
                    raise ValueError("parent links contain a cycle")
            base = depths[u] if u != 0 else 0
            for i, w in enumerate(reversed(chain), start=1):
                depths[w] = base + i
        return tuple(depths[1:])

    @property
    def height(self) -> int:
        return max(self.node_depths)

    @property
    def roots(self) -> tuple[int, ...]:
        return tuple(v for v in range(1, self.n + 1) if self.parents[v - 1] == 0)

    def ancestors(self, v: int) -> Iterable[int]:
        """Proper ancestors of ``v``, nearest first."""
        p = self.parents[v - 1]
        while p != 0:
            yield p
            p = self.parents[p - 1]


def validate_elimination_forest(g: ColoredGraph, ef: EliminationForest) -> bool:
    """True when every edge of ``g`` joins an ancestor-descendant pair."""
    if ef.n != g.n:
        raise ValueError("forest and graph disagree on the vertex count")
    anc: list[set[int]] = [set()] + [set(ef.ancestors(v)) for v in g.vertices]
    return all(v in anc[u] or u in anc[v] for u, v in g.edges)


def _components(vertices: frozenset[int], adj) -> list[frozenset[int]]:
    left = set(vertices)
    comps = []
    while left:
        seed = left.pop()
        comp = {seed}
        frontier = [seed]
        while frontier:
            u = frontier.pop()
            for w in adj[u]:
                if w in left:
                    left.remove(w)
                    comp.add(w)
                    frontier.append(w)
        comps.append(frozenset(comp))
    return comps


def compute_elimination_forest(
    g: ColoredGraph, k: int
) -> EliminationForest | None:
    """Exact minimum-height elimination forest, or None when tree-depth > k.

    Exhaustive recursion with memoization on connected vertex subsets:
    the tree-depth of a connected piece is 1 plus the best over root
    choices of the worst remaining component. Intended for small graphs
    (roughly n <= 20).
    """
    if k < 1:
        raise ValueError("the height budget must be positive")
    memo: dict[frozenset[int], tuple[int, int]] = {}

    def best(sub: frozenset[int]) -> tuple[int, int]:
        """(minimal height, best root) for a connected subset."""
        if len(sub) == 1:
            return 1, next(iter(sub))
        if sub in memo:
            return memo[sub]
        best_h, best_root = len(sub) + 1, -1
        for v in sorted(sub):
            worst = 0
            for comp in _components(sub - {v}, g.adj):
                h, _ = best(comp)
                worst = max(worst, h)
                if 1 + worst >= best_h:
                    break
            if 1 + worst < best_h:
                best_h, best_root = 1 + worst, v
        memo[sub] = (best_h, best_root)
        return best_h, best_root

    parents = [0] * (g.n + 1)

    def attach(sub: frozenset[int], above: int) -> None:
        _, root = best(sub)
        parents[root] = above
        for comp in _components(sub - {root}, g.adj):
            attach(comp, root)

    height = 0
    for comp in _components(frozenset(g.vertices), g.adj):
        h, _ = best(comp)
        height = max(height, h)
        if height > k:
            return None
        attach(comp, 0)
    return EliminationForest(n=g.n, parents=tuple(parents[1:]))


# ---------------------------------------------------------------------------
# Tree-models

@dataclass(frozen=True)
class TreeModel:
    """A colored rooted tree whose leaves are a graph's vertices, plus a
    rule mapping (color, color, leaf distance) to edge/non-edge.

    Rule keys are stored with the color pair sorted; ``verdict`` looks
    them up symmetrically.
    """

    tree: RootedColoredTree
    rules: tuple[tuple[int, int, int, bool], ...]

    def __post_init__(self) -> None:
        seen = set()
        for c1, c2, d, _ in self.rules:
            if c1 > c2:
                raise ValueError("rule colors must be stored sorted")
            if (c1, c2, d) in seen:
                raise ValueError(f"duplicate rule for {(c1, c2, d)}")
            seen.add((c1, c2, d))

    @staticmethod
    def build(
        tree: RootedColoredTree, rules: Iterable[tuple[int, int, int, bool]]
    ) -> "TreeModel":
        normalized = sorted(
            (min(c1, c2), max(c1, c2), d, bool(edge)) for c1, c2, d, edge in rules
        )
        return TreeModel(tree=tree, rules=tuple(normalized))

    @cached_property
    def _table(self) -> dict[tuple[int, int, int], bool]:
        return {(c1, c2, d): edge for c1, c2, d, edge in self.rules}

    def verdict(self, c1: int, c2: int, d: int) -> bool | None:
        return self._table.get((min(c1, c2), max(c1, c2), d))


def validate_tree_model(g: ColoredGraph, tm: TreeModel) -> bool:
    """True when the rule reproduces the adjacency of ``g`` exactly.

    The leaves of the tree must be exactly the vertex ids 1..n of ``g``;
    a realized color/distance triple missing from the rule counts as a
    mismatch.
    """
    if tm.tree.leaves != frozenset(g.vertices):
        raise ValueError(
            "tree-model leaves must be exactly the graph vertices 1..n"
        )
    dist = tm.tree.distance
    for u in g.vertices:
        for v in range(u + 1, g.n + 1):
            want = g.has_edge(u, v)
            got = tm.verdict(
                tm.tree.color_of(u), tm.tree.color_of(v), dist[u - 1][v - 1]
            )
            if got is None or got != want:
                return False
    return True


# ---------------------------------------------------------------------------
# File I/O

def write_tree(t: RootedColoredTree, stream: TextIO) -> None:
    stream.write(f"p tree {t.n} {t.c}\n")
    stream.write(f"r {t.root}\n")
    for v in range(1, t.n + 1):
        stream.write(f"t {v} {t.parents[v - 1]} {t.color_of(v)}\n")


def _read_tree_records(
    stream: TextIO,
) -> tuple[int, int, int, dict[int, int], dict[int, int], list[tuple[int, int, int, bool]]]:
    n = c = root = None
    parents: dict[int, int] = {}
    colors: dict[int, int] = {}
    rules: list[tuple[int, int, int, bool]] = []
    for lineno, fields in _data_lines(stream):
        kind = fields[0]
        if kind == "p":
            if len(fields) != 4 or fields[1] != "tree":
                raise ValueError(f"line {lineno}: malformed header, want 'p tree <n> <c>'")
            n, c = int(fields[2]), int(fields[3])
        elif kind == "r":
            if len(fields) != 2:
                raise ValueError(f"line {lineno}: malformed root line")
            root = int(fields[1])
        elif kind == "t":
            if len(fields) not in (3, 4):
                raise ValueError(f"line {lineno}: want 't <v> <parent> [<color>]'")
            v, p = int(fields[1]), int(fields[2])
            if v in parents:
                raise ValueError(f"line {lineno}: duplicate record for vertex {v}")
            parents[v] = p
            colors[v] = int(fields[3]) if len(fields) == 4 else 1
        elif kind == "rule":
            if len(fields) != 5:
                raise ValueError(f"line {lineno}: want 'rule <c1> <c2> <d> <0|1>'")
            c1, c2, d, bit = (int(x) for x in fields[1:])
            if bit not in (0, 1):
                raise ValueError(f"line {lineno}: rule verdict must be 0 or 1")
            rules.append((c1, c2, d, bool(bit)))
        else:
            raise ValueError(f"line {lineno}: unknown record {kind!r}")
    if n is None or root is None:
        raise ValueError("tree file needs a 'p tree' header and an 'r' line")
    return n, c, root, parents, colors, rules


def read_tree(stream: TextIO) -> RootedColoredTree:
    n, c, root, parents, colors, rules = _read_tree_records(stream)
    if rules:
        raise ValueError("unexpected rule lines in a plain tree file")
    return _assemble_tree(n, c, root, parents, colors)


def _assemble_tree(n, c, root, parents, colors) -> RootedColoredTree:
    parents.setdefault(root, 0)
    colors.setdefault(root, 1)
    if parents[root] != 0:
        raise ValueError(f"declared root {root} has a nonzero parent")
    for v in range(1, n + 1):
        if v not in parents:
            raise ValueError(f"vertex {v} has no 't' record")
    if len(parents) != n:
        raise ValueError("tree records mention vertices outside 1..n")
    return RootedColoredTree.build(parents, colors, c=c)


def read_tree_model(stream: TextIO) -> TreeModel:
    n, c, root, parents, colors, rules = _read_tree_records(stream)
    tree = _assemble_tree(n, c, root, parents, colors)
    return TreeModel.build(tree, rules)


def write_tree_model(tm: TreeModel, stream: TextIO) -> None:
    write_tree(tm.tree, stream)
    for c1, c2, d, edge in tm.rules:
        stream.write(f"rule {c1} {c2} {d} {1 if edge else 0}\n")


def write_forest(ef: EliminationForest, stream: TextIO) -> None:
    stream.write(f"p forest {ef.n}\n")
    for v in range(1, ef.n + 1):
        stream.write(f"t {v} {ef.parents[v - 1]}\n")


def read_forest(stream: TextIO) -> EliminationForest:
    n = None
    parents: dict[int, int] = {}
    for lineno, fields in _data_lines(stream):
        kind = fields[0]
        if kind == "p":
            if len(fields) != 3 or fields[1] != "forest":
                raise ValueError(f"line {lineno}: malformed header, want 'p forest <n>'")
            n = int(fields[2])
        elif kind == "t":
            if len(fields) != 3:
                raise ValueError(f"line {lineno}: want 't <v> <parent>'")
            v, p = int(fields[1]), int(fields[2])
            if v in parents:
                raise ValueError(f"line {lineno}: duplicate record for vertex {v}")
            parents[v] = p
        else:
            raise ValueError(f"line {lineno}: unknown record {kind!r}")
    if n is None:
        raise ValueError("missing 'p forest' header")
    return EliminationForest(
        n=n, parents=tuple(parents.get(v, 0) for v in range(1, n + 1))
    )
