"""One-dimensional interpretations, backwards translation, and the
decomposition-based model-checking pipelines.

An interpretation is a domain formula (one free variable ``x1``) and an
edge formula (free variables ``x1``, ``x2``) that must realize a
symmetric irreflexive relation on every host graph it is applied to.
``backwards_translate`` rewrites a sentence about the interpreted graph
into one about the host: quantifiers are relativized to the domain and
adjacency atoms are replaced by the edge formula, with the edge
formula's auxiliary variables renamed into a reserved pool so the
variable count grows by at most ``variable_overhead``.

Color atoms translate through an optional per-color formula table; the
identity is assumed when the table is absent. The tree pipelines need
this because their hosts carry composite colors.

Pipelines:

* ``mc_tree``: reduce the tree to its small equivalent core, then run
  the naive evaluator on the core.
* ``mc_treedepth``: find an elimination forest of height at most k,
  re-encode it as a colored tree whose colors carry (depth, original
  color, adjacency bits toward ancestors), translate the sentence
  through the matching interpretation, and hand off to ``mc_tree``.
* ``mc_treemodel``: same shape, with the host tree re-colored by
  (leaf flag, graph color, model color, depth) and the edge formula
  assembled from the model's (color, color, distance) rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .evaluator import evaluate_free, model_check
from .formulas import (
    Adj,
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    HasColor,
    Implies,
    Not,
    Or,
    Var,
    all_vars,
    canonical_false,
    conjunction,
    disjunction,
    free_vars,
    rename_variables,
    require_sentence,
    variable_count,
)
from .graphs import ColoredGraph
from .kernel import reduce_tree
from .trees import (
    EliminationForest,
    RootedColoredTree,
    TreeModel,
    compute_elimination_forest,
    validate_elimination_forest,
    validate_tree_model,
)

X1, X2, X3 = Var(1), Var(2), Var(3)


@dataclass(frozen=True)
class InterpretationScheme:
    """A pair of defining formulas plus the declared variable overhead.

    ``color_formulas`` optionally maps an original color to a one-free-
    variable formula over the host; colors without an entry translate to
    false, and an absent table means colors pass through unchanged.
    """

    domain_formula: Formula
    edge_formula: Formula
    variable_overhead: int
    color_formulas: tuple[tuple[int, Formula], ...] | None = None

    def __post_init__(self) -> None:
        if not free_vars(self.domain_formula) <= {X1}:
            raise ValueError("the domain formula may only have x1 free")
        if not free_vars(self.edge_formula) <= {X1, X2}:
            raise ValueError("the edge formula may only have x1, x2 free")
        if self.variable_overhead < 0:
            raise ValueError("variable overhead cannot be negative")
        if self.color_formulas is not None:
            for color, f in self.color_formulas:
                if not free_vars(f) <= {X1}:
                    raise ValueError(
                        f"the formula for color {color} may only have x1 free"
                    )

    @cached_property
    def _color_table(self) -> dict[int, Formula] | None:
        if self.color_formulas is None:
            return None
        return dict(self.color_formulas)


def identity_interpretation() -> InterpretationScheme:
    return InterpretationScheme(
        domain_formula=Eq(X1, X1),
        edge_formula=Adj(X1, X2),
        variable_overhead=0,
    )


def complement_interpretation() -> InterpretationScheme:
    return InterpretationScheme(
        domain_formula=Eq(X1, X1),
        edge_formula=And((Not(Adj(X1, X2)), Not(Eq(X1, X2)))),
        variable_overhead=0,
    )


def apply_interpretation(
    scheme: InterpretationScheme, g: ColoredGraph
) -> ColoredGraph:
    """The graph the scheme defines inside ``g``.

    The realized edge relation is checked to be symmetric and
    irreflexive on ``g``; violations are hard errors. Domain vertices
    are relabeled to 1..m in ascending order. Without color formulas
    they keep the host's colors; with color formulas each domain vertex
    must satisfy exactly one of them, which becomes its color.
    """
    dom_sat = evaluate_free(g, And((scheme.domain_formula, Eq(X1, X1))))
    domain = sorted(row[0] for row in dom_sat.rows)
    if not domain:
        raise ValueError("the interpretation has an empty domain on this graph")
    edge_sat = evaluate_free(
        g, And((scheme.edge_formula, Eq(X1, X1), Eq(X2, X2)))
    )
    related = {tuple(row) for row in edge_sat.rows}
    for u, v in related:
        if u == v:
            raise ValueError(f"edge formula is reflexive at vertex {u}")
        if (v, u) not in related:
            raise ValueError(f"edge formula is asymmetric on ({u},{v})")
    relabel = {old: new for new, old in enumerate(domain, start=1)}
    edges = {
        (relabel[u], relabel[v])
        for u, v in related
        if u < v and u in relabel and v in relabel
    }
    if scheme.color_formulas is None:
        colors = [g.color_of(v) for v in domain]
        palette = g.c
    else:
        holders: dict[int, set[int]] = {}
        for color, body in scheme.color_formulas:
            sat = evaluate_free(g, And((body, Eq(X1, X1))))
            holders[color] = {row[0] for row in sat.rows}
        colors = []
        for v in domain:
            matches = [color for color in sorted(holders) if v in holders[color]]
            if len(matches) != 1:
                raise ValueError(
                    f"vertex {v} satisfies {len(matches)} color formulas; "
                    "the interpreted coloring must be unambiguous"
                )
            colors.append(matches[0])
        palette = max(holders, default=1)
    return ColoredGraph.build(len(domain), edges, colors, c=palette)


def backwards_translate(
    sentence: Formula, scheme: InterpretationScheme
) -> Formula:
    """A sentence that holds on a host graph exactly when the original
    sentence holds on the interpreted graph.

    Quantifiers are relativized to the domain formula and adjacency
    atoms are replaced by instances of the edge formula. Auxiliary
    variables of the scheme's formulas are renamed into a fresh pool
    just past the sentence's largest variable index; the pool size is
    bounded by ``variable_overhead``, so the variable count grows by at
    most that constant. An adjacency atom on a repeated variable is
    replaced by falsehood, which matches the edge relation being
    irreflexive.
    """
    require_sentence(sentence)
    base = max(v.index for v in all_vars(sentence))

    aux_demand = 0
    used: list[tuple[Formula, frozenset[Var]]] = [
        (scheme.domain_formula, frozenset((X1,))),
        (scheme.edge_formula, frozenset((X1, X2))),
    ]
    if scheme.color_formulas is not None:
        used.extend((f, frozenset((X1,))) for _, f in scheme.color_formulas)
    for f, params in used:
        aux_demand = max(aux_demand, len(all_vars(f) - params))
    if aux_demand > scheme.variable_overhead:
        raise ValueError(
            f"scheme needs {aux_demand} auxiliary variables but declares "
            f"an overhead of {scheme.variable_overhead}"
        )

    def instantiate(f: Formula, params: dict[Var, Var]) -> Formula:
        aux = sorted(all_vars(f) - set(params))
        mapping = dict(params)
        mapping.update(
            {v: Var(base + i) for i, v in enumerate(aux, start=1)}
        )
        return rename_variables(f, mapping)

    def domain_at(v: Var) -> Formula:
        return instantiate(scheme.domain_formula, {X1: v})

    color_table = scheme._color_table

    def go(f: Formula) -> Formula:
        match f:
            case Adj(u, v):
                if u == v:
                    return canonical_false(u)
                return instantiate(scheme.edge_formula, {X1: u, X2: v})
            case Eq():
                return f
            case HasColor(color, v):
                if color_table is None:
                    return f
                body = color_table.get(color)
                if body is None:
                    return canonical_false(v)
                return instantiate(body, {X1: v})
            case Not(child):
                return Not(go(child))
            case And(children):
                return And(tuple(go(ch) for ch in children))
            case Or(children):
                return Or(tuple(go(ch) for ch in children))
            case Implies(lhs, rhs):
                return Implies(go(lhs), go(rhs))
            case Exists(var, body):
                return Exists(var, And((domain_at(var), go(body))))
            case Forall(var, body):
                return Forall(var, Implies(domain_at(var), go(body)))
        raise TypeError(f"not a formula: {f!r}")

    return go(sentence)


# ---------------------------------------------------------------------------
# Elimination-forest encoding
#
# A graph with a valid elimination forest of height k is re-encoded as a
# rooted tree over the same vertices (plus a spare root when the forest
# has several roots). The tree color of a graph vertex packs
#
#     (its depth d in the forest, counted in vertices from 1,
#      its original color,
#      one adjacency bit per proper ancestor, indexed by ancestor depth)
#
# into the palette laid out as: color 1 is reserved for the spare root;
# the block for depth d starts at offset c*(2^(d-1)-1) and enumerates
# original colors outer, bit patterns inner (bit j-1 stands for "adjacent
# to my ancestor at depth j"). The palette has 1 + c*(2^k - 1) colors.
# Since a valid forest routes every edge through an ancestor pair, the
# encoded tree determines the graph exactly, and the matching
# interpretation recovers it.


def _encoded_color(d: int, orig: int, bits: int, c: int) -> int:
    return 2 + c * (2 ** (d - 1) - 1) + (orig - 1) * 2 ** (d - 1) + bits


def _encoded_palette_size(k: int, c: int) -> int:
    return 1 + c * (2**k - 1)


def _colors_at_depth(d: int, c: int) -> list[int]:
    return [
        _encoded_color(d, orig, bits, c)
        for orig in range(1, c + 1)
        for bits in range(2 ** (d - 1))
    ]


def _colors_with_bit(d: int, j: int, c: int) -> list[int]:
    return [
        _encoded_color(d, orig, bits, c)
        for orig in range(1, c + 1)
        for bits in range(2 ** (d - 1))
        if bits >> (j - 1) & 1
    ]


def _colors_of_original(orig: int, k: int, c: int) -> list[int]:
    return [
        _encoded_color(d, orig, bits, c)
        for d in range(1, k + 1)
        for bits in range(2 ** (d - 1))
    ]


def _color_set_atom(v: Var, colors: list[int]) -> Formula:
    if not colors:
        return canonical_false(v)
    return disjunction(HasColor(col, v) for col in sorted(colors))


def encode_elimination_forest(
    g: ColoredGraph, ef: EliminationForest
) -> RootedColoredTree:
    """Colored-tree encoding of ``g`` along a valid elimination forest.

    Vertex ids are preserved; a spare root (id n+1, color 1) is added
    when the forest is not a tree.
    """
    if not validate_elimination_forest(g, ef):
        raise ValueError("not a valid elimination forest for this graph")
    k = ef.height
    depths = ef.node_depths
    colors: dict[int, int] = {}
    for v in g.vertices:
        bits = 0
        for anc in ef.ancestors(v):
            if g.has_edge(v, anc):
                bits |= 1 << (depths[anc - 1] - 1)
        colors[v] = _encoded_color(depths[v - 1], g.color_of(v), bits, g.c)
    parents = {v: ef.parents[v - 1] for v in g.vertices}
    roots = ef.roots
    if len(roots) == 1:
        pass
    else:
        spare = g.n + 1
        for r in roots:
            parents[r] = spare
        parents[spare] = 0
        colors[spare] = 1
    return RootedColoredTree.build(
        parents, colors, c=_encoded_palette_size(k, g.c)
    )


def depth_edge_interpretation(k: int, colors: int = 1) -> InterpretationScheme:
    """The interpretation that recovers a graph from its encoded
    elimination forest of height at most ``k`` over ``colors`` original
    colors.

    Two vertices are adjacent exactly when one is an ancestor of the
    other in the encoded tree and the descendant's adjacency bit for the
    ancestor's depth is set. Ancestry at a fixed distance is spelled as
    a chain of tree edges whose depth annotations decrease by one per
    step, reusing the two auxiliary variables x3 and x4.
    """
    if k < 1 or colors < 1:
        raise ValueError("need k >= 1 and colors >= 1")
    c = colors

    def chain(frm: Var, depth: int, target_depth: int, to: Var) -> Formula:
        if depth - 1 == target_depth:
            return Adj(frm, to)
        nxt = X3 if frm != X3 else Var(4)
        return Exists(
            nxt,
            And(
                (
                    Adj(frm, nxt),
                    _color_set_atom(nxt, _colors_at_depth(depth - 1, c)),
                    chain(nxt, depth - 1, target_depth, to),
                )
            ),
        )

    def directed(desc: Var, anc: Var) -> list[Formula]:
        terms = []
        for d in range(2, k + 1):
            for j in range(1, d):
                terms.append(
                    conjunction(
                        (
                            _color_set_atom(desc, _colors_with_bit(d, j, c)),
                            _color_set_atom(anc, _colors_at_depth(j, c)),
                            chain(desc, d, j, anc),
                        )
                    )
                )
        return terms

    terms = directed(X1, X2) + directed(X2, X1)
    edge = disjunction(terms) if terms else canonical_false(X1)
    color_formulas = tuple(
        (orig, _color_set_atom(X1, _colors_of_original(orig, k, c)))
        for orig in range(1, c + 1)
    )
    return InterpretationScheme(
        domain_formula=Not(HasColor(1, X1)),
        edge_formula=edge,
        variable_overhead=2,
        color_formulas=color_formulas,
    )


def mc_tree(t: RootedColoredTree, sentence: Formula, s: int) -> bool:
    """Decide the sentence on a colored tree by evaluating on its
    reduced core. Requires the sentence to use at most ``s`` variables."""
    require_sentence(sentence)
    if variable_count(sentence) > s:
        raise ValueError(
            f"sentence uses {variable_count(sentence)} variables, budget is {s}"
        )
    core = reduce_tree(t, s).kernel
    return model_check(core.to_graph(), sentence)


def mc_treedepth(g: ColoredGraph, sentence: Formula, k: int, s: int) -> bool:
    """Decide the sentence on a graph of tree-depth at most ``k`` via
    the encoded elimination forest."""
    require_sentence(sentence)
    if variable_count(sentence) > s:
        raise ValueError(
            f"sentence uses {variable_count(sentence)} variables, budget is {s}"
        )
    ef = compute_elimination_forest(g, k)
    if ef is None:
        raise ValueError(f"the graph has tree-depth larger than {k}")
    host = encode_elimination_forest(g, ef)
    scheme = depth_edge_interpretation(ef.height, g.c)
    translated = backwards_translate(sentence, scheme)
    return mc_tree(host, translated, s + scheme.variable_overhead)


# ---------------------------------------------------------------------------
# Tree-model encoding
#
# The host is the model tree recolored with composite colors
# (leaf flag, graph color of the leaf or 0, model color, depth); the
# palette enumerates the realized composites in sorted order. The edge
# formula turns every positive rule entry (c1, c2, d) into "the two
# leaves carry model colors {c1,c2} and their tree distance is exactly
# d", where distance-d is phrased as "some common ancestor at upward
# distances i+j = d, and none closer". Upward chains reuse x4, x5 with
# the meeting point pinned at x3, so the overhead is 3.


@dataclass(frozen=True)
class _TreeModelHost:
    tree: RootedColoredTree
    scheme: InterpretationScheme


def _tree_model_host(g: ColoredGraph, tm: TreeModel) -> _TreeModelHost:
    t = tm.tree
    leaves = t.leaves
    composites = []
    for v in range(1, t.n + 1):
        is_leaf = v in leaves
        composites.append(
            (
                1 if is_leaf else 0,
                g.color_of(v) if is_leaf else 0,
                t.color_of(v),
                t.depth_of(v),
            )
        )
    palette = sorted(set(composites))
    code = {comp: i for i, comp in enumerate(palette, start=1)}
    host_tree = RootedColoredTree(
        n=t.n,
        root=t.root,
        parents=t.parents,
        colors=tuple(code[comp] for comp in composites),
        c=len(palette),
    )

    def colors_where(pred) -> list[int]:
        return [code[comp] for comp in palette if pred(comp)]

    max_depth = t.depth
    X4, X5 = Var(4), Var(5)

    def up_chain(frm: Var, start_depth: int, steps: int, to: Var) -> Formula:
        """frm sits at start_depth; to is its ancestor ``steps`` up."""
        if steps == 0:
            return Eq(frm, to)
        end = conjunction(
            (
                Adj(frm, to),
                _color_set_atom(
                    to, colors_where(lambda cp: cp[3] == start_depth - 1)
                ),
            )
        )
        if steps == 1:
            return end
        nxt = X4 if frm != X4 else X5
        return Exists(
            nxt,
            And(
                (
                    Adj(frm, nxt),
                    _color_set_atom(
                        nxt, colors_where(lambda cp: cp[3] == start_depth - 1)
                    ),
                    up_chain(nxt, start_depth - 1, steps - 1, to),
                )
            ),
        )

    def ancestor_at(v: Var, steps: int, to: Var) -> Formula:
        options = []
        for d in range(steps, max_depth + 1):
            anchor = _color_set_atom(v, colors_where(lambda cp, dd=d: cp[3] == dd))
            options.append(conjunction((anchor, up_chain(v, d, steps, to))))
        return disjunction(options) if options else canonical_false(v)

    def within_distance(limit: int) -> Formula:
        meets = []
        for total in range(1, limit + 1):
            for i in range(total + 1):
                j = total - i
                meets.append(
                    Exists(
                        X3,
                        And((ancestor_at(X1, i, X3), ancestor_at(X2, j, X3))),
                    )
                )
        return disjunction(meets) if meets else canonical_false(X1)

    def distance_exactly(d: int) -> Formula:
        if d < 1:
            return canonical_false(X1)
        at_most = within_distance(d)
        if d == 1:
            return at_most
        return And((at_most, Not(within_distance(d - 1))))

    leaf_model_colors = {}
    for comp in palette:
        if comp[0] == 1:
            leaf_model_colors.setdefault(comp[2], []).append(code[comp])

    def model_color_atom(v: Var, mc: int) -> Formula:
        return _color_set_atom(v, leaf_model_colors.get(mc, []))

    edge_terms = []
    for c1, c2, d, is_edge in tm.rules:
        if not is_edge:
            continue
        if c1 == c2:
            pair = And((model_color_atom(X1, c1), model_color_atom(X2, c2)))
        else:
            pair = Or(
                (
                    And((model_color_atom(X1, c1), model_color_atom(X2, c2))),
                    And((model_color_atom(X1, c2), model_color_atom(X2, c1))),
                )
            )
        edge_terms.append(And((pair, distance_exactly(d))))
    positive = disjunction(edge_terms) if edge_terms else canonical_false(X1)
    edge = And((Not(Eq(X1, X2)), positive))

    color_formulas = tuple(
        (
            orig,
            _color_set_atom(
                X1, colors_where(lambda cp, o=orig: cp[0] == 1 and cp[1] == o)
            ),
        )
        for orig in range(1, g.c + 1)
    )
    scheme = InterpretationScheme(
        domain_formula=_color_set_atom(X1, colors_where(lambda cp: cp[0] == 1)),
        edge_formula=edge,
        variable_overhead=3,
        color_formulas=color_formulas,
    )
    return _TreeModelHost(tree=host_tree, scheme=scheme)


def tree_model_interpretation(
    g: ColoredGraph, tm: TreeModel
) -> tuple[RootedColoredTree, InterpretationScheme]:
    """The recolored host tree and the interpretation recovering ``g``
    from it. Mostly useful for testing the round trip."""
    host = _tree_model_host(g, tm)
    return host.tree, host.scheme


def mc_treemodel(
    g: ColoredGraph, tm: TreeModel, sentence: Formula, s: int
) -> bool:
    """Decide the sentence on a graph given a valid tree-model for it."""
    require_sentence(sentence)
    if variable_count(sentence) > s:
        raise ValueError(
            f"sentence uses {variable_count(sentence)} variables, budget is {s}"
        )
    if not validate_tree_model(g, tm):
        raise ValueError("the tree-model does not reproduce the graph")
    host = _tree_model_host(g, tm)
    translated = backwards_translate(sentence, host.scheme)
    return mc_tree(host.tree, translated, s + host.scheme.variable_overhead)
