"""
SIL — Catalog
Built-in abstract classes and the named independence relations on them.

Classes
  finset               pure sets, every embedding strong
  graph                undirected loopless graphs, full-subgraph order
  klocal_graph:K       graphs of degree < K, ordered by unions of components
  multigraph           directed multigraphs with an explicit edge sort
  module:N             Z/N-modules, submodule order
  vecspace:P           F_P-vector spaces, sizes measured by dimension
  dir:PATH[:MODE]      structures read from a directory of JSON files
"""

import itertools
import logging
import math
import os
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import networkx as nx

from .canon import canonical_key
from .colimits import PushoutResult, is_effective_square, is_pullback_square, relational_pushout
from .diagrams import AmalgamationDiagram, Span, Square
from .independence import IndependenceRelationSpec, nonfork_by_closure
from .reporting import Verdict
from .structures import (
    AbstractClass,
    Embedding,
    FinStructure,
    Morphism,
    Vocabulary,
    closed_subsets,
    is_embedding,
    is_homomorphism,
)

logger = logging.getLogger(__name__)

ATLAS_MAX = 7


class UnknownClassError(Exception):
    """Raised for a class name or parameter the catalog does not know."""
    pass


class UnknownRelationError(Exception):
    """Raised for a relation name the catalog does not know."""
    pass


class IncompatibleRelationError(Exception):
    """Raised when a relation is requested on a class it does not apply to."""
    pass


# -----------------------------------------------------------------------------
# Sets
# -----------------------------------------------------------------------------

class FinSetClass(AbstractClass):
    kind = "finset"
    exact = True
    has_amalgamation = True

    def __init__(self):
        super().__init__(Vocabulary(), "finset")

    def _enumerate_members(self, bound: int) -> List[FinStructure]:
        return [FinStructure(self.vocab, range(n)) for n in range(bound + 1)]

    def closure(self, N: FinStructure, A) -> frozenset:
        return frozenset(A)

    def closure_slack(self, alpha: int) -> int:
        return 0

    def pushout(self, span: Span) -> PushoutResult:
        return relational_pushout(span)

    def regular_mono(self, f: Morphism) -> Verdict:
        return Verdict.of(f.is_injective())


# -----------------------------------------------------------------------------
# Graphs
# -----------------------------------------------------------------------------

GRAPH_VOCAB = Vocabulary({"E": 2})


def graph_from_edges(n_or_universe, edges) -> FinStructure:
    """A graph on 0..n-1 (or the given universe) with both orientations of each edge."""
    universe = range(n_or_universe) if isinstance(n_or_universe, int) else n_or_universe
    E = set()
    for u, v in edges:
        E.add((u, v))
        E.add((v, u))
    return FinStructure(GRAPH_VOCAB, universe, {"E": E})


def to_networkx(N: FinStructure) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(N.universe)
    G.add_edges_from(N.rel("E"))
    return G


@lru_cache(maxsize=1)
def _atlas() -> Tuple[FinStructure, ...]:
    return tuple(graph_from_edges(g.number_of_nodes(), g.edges()) for g in nx.graph_atlas_g())


class GraphClass(AbstractClass):
    kind = "graph"
    exact = True
    has_amalgamation = True

    def __init__(self, name: str = "graph"):
        super().__init__(GRAPH_VOCAB, name)

    def member(self, M: FinStructure) -> bool:
        return all(u != v and (v, u) in M.rel("E") for u, v in M.rel("E"))

    def _enumerate_members(self, bound: int) -> List[FinStructure]:
        found: Dict[tuple, FinStructure] = {}
        for M in _atlas():
            if M.size <= bound and self.member(M):
                found.setdefault(canonical_key(M), M)
        layer = [M for M in found.values() if M.size == ATLAS_MAX]
        for n in range(ATLAS_MAX + 1, bound + 1):
            grown: Dict[tuple, FinStructure] = {}
            for M in layer:
                for k in range(n):
                    for nbrs in itertools.combinations(range(n - 1), k):
                        edges = [(u, v) for u, v in M.rel("E") if u < v] + [(n - 1, w) for w in nbrs]
                        M2 = graph_from_edges(n, edges)
                        if self.member(M2):
                            grown.setdefault(canonical_key(M2), M2)
            found.update(grown)
            layer = list(grown.values())
        return [found[k] for k in sorted(found)]

    def closure(self, N: FinStructure, A) -> frozenset:
        return frozenset(A)

    def closure_slack(self, alpha: int) -> int:
        return 0

    def free_atoms(self, name: str, arity: int, tuples: List[tuple]) -> List[Tuple[tuple, ...]]:
        pool = set(tuples)
        return [((u, v), (v, u)) for u, v in tuples if u < v and (v, u) in pool]

    def pushout(self, span: Span) -> PushoutResult:
        return relational_pushout(span)

    def regular_mono(self, f: Morphism) -> Verdict:
        """Regular monos of graphs are the full subgraph embeddings."""
        return Verdict.of(is_embedding(f))


class KLocalGraphClass(GraphClass):
    """
    Graphs whose vertices have degree < kappa. G <= H when G is a union of
    connected components of H, so the closure of a set is the union of the
    components it touches.
    """

    kind = "klocal_graph"

    def __init__(self, kappa: int):
        if kappa < 1:
            raise UnknownClassError(f"klocal_graph needs kappa >= 1, got {kappa}")
        super().__init__(f"klocal_graph:{kappa}")
        self.kappa = kappa

    def member(self, M: FinStructure) -> bool:
        if not super().member(M):
            return False
        degree: Dict[int, int] = {}
        for u, _ in M.rel("E"):
            degree[u] = degree.get(u, 0) + 1
        return all(d < self.kappa for d in degree.values())

    def strong(self, N: FinStructure, U: frozenset) -> bool:
        return all((u in U) == (v in U) for u, v in N.rel("E"))

    def closure(self, N: FinStructure, A) -> frozenset:
        A = frozenset(A)
        out = set()
        for comp in nx.connected_components(to_networkx(N)):
            if comp & A:
                out |= comp
        return frozenset(out)

    def closure_slack(self, alpha: int) -> int:
        return alpha


# -----------------------------------------------------------------------------
# Multigraphs
# -----------------------------------------------------------------------------

MULTIGRAPH_VOCAB = Vocabulary({"V": 1}, {"src": 1, "tgt": 1})


def multigraph(n_vertices: int, edges) -> FinStructure:
    """Vertices 0..n-1, then one element per (source, target) edge."""
    universe = list(range(n_vertices + len(edges)))
    src = {(v,): v for v in range(n_vertices)}
    tgt = dict(src)
    for i, (s, t) in enumerate(edges):
        src[(n_vertices + i,)] = s
        tgt[(n_vertices + i,)] = t
    return FinStructure(MULTIGRAPH_VOCAB, universe, {"V": [(v,) for v in range(n_vertices)]},
                        {"src": src, "tgt": tgt})


class MultigraphClass(AbstractClass):
    kind = "multigraph"
    exact = True
    has_amalgamation = True

    def __init__(self):
        super().__init__(MULTIGRAPH_VOCAB, "multigraph")

    def member(self, M: FinStructure) -> bool:
        V = M.rel("V")
        src, tgt = M.fn("src"), M.fn("tgt")
        for x in M.universe:
            s, t = src[(x,)], tgt[(x,)]
            if (x,) in V:
                if s != x or t != x:
                    return False
            elif (s,) not in V or (t,) not in V:
                return False
        return True

    def _enumerate_members(self, bound: int) -> List[FinStructure]:
        found: Dict[tuple, FinStructure] = {}
        for v in range(bound + 1):
            pairs = list(itertools.product(range(v), repeat=2))
            for e in range(bound - v + 1):
                if e and not v:
                    break
                for edges in itertools.combinations_with_replacement(pairs, e):
                    M = multigraph(v, edges)
                    found.setdefault(canonical_key(M), M)
        return [found[k] for k in sorted(found)]

    def closure(self, N: FinStructure, A) -> frozenset:
        return N.function_closure(A)

    def closure_slack(self, alpha: int) -> int:
        return 2 * alpha

    def pushout(self, span: Span) -> PushoutResult:
        return relational_pushout(span)

    def regular_mono(self, f: Morphism) -> Verdict:
        return Verdict.of(f.is_injective() and is_homomorphism(f))


# -----------------------------------------------------------------------------
# Modules and vector spaces
# -----------------------------------------------------------------------------

MODULE_VOCAB = Vocabulary({}, {"add": 2, "neg": 1, "zero": 0})


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(math.isqrt(p)) + 1))


def invariant_factor_lists(n: int, max_size: Optional[int] = None, max_len: Optional[int] = None) -> Iterator[tuple]:
    """Chains d1 | d2 | ... of divisors > 1 of n, bounded by product or length."""
    divisors = [d for d in range(2, n + 1) if n % d == 0]

    def rec(prefix: tuple, prod: int) -> Iterator[tuple]:
        yield prefix
        if max_len is not None and len(prefix) >= max_len:
            return
        for d in divisors:
            if prefix and d % prefix[-1]:
                continue
            if max_size is not None and prod * d > max_size:
                continue
            yield from rec(prefix + (d,), prod * d)

    return rec((), 1)


def module_structure(factors: tuple) -> FinStructure:
    """Z/d1 + ... + Z/dk with elements numbered in mixed radix; 0 is the zero."""
    elems = list(itertools.product(*[range(d) for d in factors]))
    index = {e: i for i, e in enumerate(elems)}

    def plus(a, b):
        return tuple((x + y) % d for x, y, d in zip(a, b, factors))

    add = {(index[a], index[b]): index[plus(a, b)] for a in elems for b in elems}
    neg = {(index[a],): index[tuple((-x) % d for x, d in zip(a, factors))] for a in elems}
    return FinStructure(MODULE_VOCAB, range(len(elems)), {}, {"add": add, "neg": neg, "zero": {(): 0}})


class ModuleClass(AbstractClass):
    """
    Z/n-modules. With measure "dim" (n prime) sizes are dimensions, so a
    bound of 2 means dimension at most 2.
    """

    kind = "module"
    exact = True
    has_amalgamation = True

    def __init__(self, n: int, measure: str = "size", name: Optional[str] = None):
        if n < 2:
            raise UnknownClassError(f"module needs n >= 2, got {n}")
        if measure == "dim" and not _is_prime(n):
            raise UnknownClassError(f"vecspace needs a prime, got {n}")
        super().__init__(MODULE_VOCAB, name or f"module:{n}")
        self.n = n
        self.measure = measure
        self._member_cache: Dict[FinStructure, bool] = {}

    # membership -----------------------------------------------------------

    def member(self, M: FinStructure) -> bool:
        if M not in self._member_cache:
            self._member_cache[M] = self._group_axioms(M)
        return self._member_cache[M]

    def _group_axioms(self, M: FinStructure) -> bool:
        add, neg = M.fn("add"), M.fn("neg")
        zero = M.fn("zero")[()]
        U = M.universe
        for x in U:
            if add[(x, zero)] != x or add[(x, neg[(x,)])] != zero:
                return False
            acc = zero
            for _ in range(self.n):
                acc = add[(acc, x)]
            if acc != zero:
                return False
            for y in U:
                if add[(x, y)] != add[(y, x)]:
                    return False
                for z in U:
                    if add[(add[(x, y)], z)] != add[(x, add[(y, z)])]:
                        return False
        return True

    def is_strong(self, N: FinStructure, U) -> bool:
        U = frozenset(U)
        return U <= N.elements and N.is_closed(U)

    # measures -------------------------------------------------------------

    def size_of(self, M: FinStructure) -> int:
        if self.measure != "dim":
            return M.size
        k, s = 0, 1
        while s < M.size:
            s *= self.n
            k += 1
        return k

    def extent(self, s0: int, s1: int, s2: int) -> int:
        if self.measure == "dim":
            return s1 + s2 - s0
        return s1 * s2 // max(s0, 1)

    def joint_bound(self, a: int, b: int) -> int:
        return a + b if self.measure == "dim" else a * b

    # enumeration ----------------------------------------------------------

    def _factor_lists(self, bound: int) -> Iterator[tuple]:
        if self.measure == "dim":
            return invariant_factor_lists(self.n, max_len=bound)
        return invariant_factor_lists(self.n, max_size=bound)

    def _enumerate_members(self, bound: int) -> List[FinStructure]:
        factors = sorted(self._factor_lists(bound), key=lambda f: (math.prod(f), f))
        return [module_structure(f) for f in factors]

    def strong_subsets(self, N: FinStructure) -> List[frozenset]:
        if N not in self._strong_cache:
            zero = frozenset({N.fn("zero")[()]})
            found = {zero}
            frontier = [zero]
            while frontier:
                nxt = []
                for S in frontier:
                    for x in N.universe:
                        if x in S:
                            continue
                        T = N.function_closure(S | {x})
                        if T not in found:
                            found.add(T)
                            nxt.append(T)
                frontier = nxt
            self._strong_cache[N] = sorted(found, key=lambda u: (len(u), sorted(u)))
        return self._strong_cache[N]

    def closure(self, N: FinStructure, A) -> frozenset:
        return N.function_closure(A)

    # amalgams -------------------------------------------------------------

    def _quotients(self, span: Span, least: bool = False):
        """(K, cosets) for subgroups K of M1 x M2 containing the glueing subgroup, smallest first."""
        M0, M1, M2 = span.base, span.left, span.right
        add1, add2 = M1.fn("add"), M2.fn("add")
        z1, z2 = M1.fn("zero")[()], M2.fn("zero")[()]
        neg2 = M2.fn("neg")
        G = [(x, y) for x in M1.universe for y in M2.universe]

        def gadd(p, q):
            return (add1[(p[0], q[0])], add2[(p[1], q[1])])

        def generate(gens) -> frozenset:
            out = {(z1, z2)}
            frontier = [(z1, z2)]
            while frontier:
                nxt = []
                for e in frontier:
                    for g in gens:
                        f = gadd(e, g)
                        if f not in out:
                            out.add(f)
                            nxt.append(f)
                frontier = nxt
            return frozenset(out)

        def legs_injective(K: frozenset) -> bool:
            return all(p == (z1, z2) for p in K if p[0] == z1 or p[1] == z2)

        D = generate([(span.f1(m), neg2[(span.f2(m),)]) for m in M0.universe])
        if least:
            yield D, G, gadd, (z1, z2)
            return
        found = {D}
        frontier = [D]
        while frontier:
            nxt = []
            for K in frontier:
                for g in G:
                    if g in K:
                        continue
                    K2 = generate(list(K) + [g])
                    if K2 not in found and legs_injective(K2):
                        found.add(K2)
                        nxt.append(K2)
            frontier = nxt
        for K in sorted(found, key=lambda k: (len(k), sorted(k))):
            yield K, G, gadd, (z1, z2)

    def _quotient_diagram(self, span: Span, K, G, gadd, zero):
        M1, M2 = span.left, span.right
        neg1, neg2 = M1.fn("neg"), M2.fn("neg")
        coset_of: Dict[tuple, int] = {}
        reps: List[tuple] = []
        for p in sorted(G):
            if p in coset_of:
                continue
            for q in K:
                coset_of[gadd(p, q)] = len(reps)
            reps.append(p)
        ids: Dict[int, int] = {coset_of[(x, zero[1])]: x for x in M1.universe}
        nid = max(M1.universe) + 1
        for i in range(len(reps)):
            if i not in ids:
                ids[i] = nid
                nid += 1
        add = {(ids[a], ids[b]): ids[coset_of[gadd(reps[a], reps[b])]]
               for a in range(len(reps)) for b in range(len(reps))}
        neg = {(ids[a],): ids[coset_of[(neg1[(reps[a][0],)], neg2[(reps[a][1],)])]] for a in range(len(reps))}
        Q = FinStructure(MODULE_VOCAB, ids.values(), {}, {"add": add, "neg": neg, "zero": {(): zero[0]}},
                         validate=False)
        g2 = {y: ids[coset_of[(zero[0], y)]] for y in M2.universe}
        rep_of = {ids[i]: reps[i] for i in range(len(reps))}
        d = AmalgamationDiagram(
            span,
            Embedding(M1, Q, {x: x for x in M1.universe}, check=False),
            Embedding(M2, Q, g2, check=False),
            check=False,
        )
        return d, rep_of

    def _direct_sum(self, Q: FinStructure, factors: tuple) -> Tuple[FinStructure, Dict[int, int]]:
        """Q + Z/d1 + ... keeping Q's ids on Q + 0."""
        C = module_structure(factors)
        cadd, cneg = C.fn("add"), C.fn("neg")
        qadd, qneg = Q.fn("add"), Q.fn("neg")
        q_index = {q: i for i, q in enumerate(Q.universe)}
        base = max(Q.universe) + 1

        def ident(q, c):
            return q if c == 0 else base + (c - 1) * Q.size + q_index[q]

        pairs = [(q, c) for c in C.universe for q in Q.universe]
        add = {(ident(*a), ident(*b)): ident(qadd[(a[0], b[0])], cadd[(a[1], b[1])]) for a in pairs for b in pairs}
        neg = {(ident(*a),): ident(qneg[(a[0],)], cneg[(a[1],)]) for a in pairs}
        S = FinStructure(MODULE_VOCAB, [ident(*a) for a in pairs], {},
                         {"add": add, "neg": neg, "zero": {(): Q.fn("zero")[()]}}, validate=False)
        return S, {q: q for q in Q.universe}

    def amalgams(self, span: Span, max_size: int, generated_only: bool = True):
        return self._iter_amalgams(span, max_size, generated_only)

    def _iter_amalgams(self, span: Span, max_size: int, generated_only: bool) -> Iterator[AmalgamationDiagram]:
        for K, G, gadd, zero in self._quotients(span):
            d, _ = self._quotient_diagram(span, K, G, gadd, zero)
            if self.size_of(d.apex) > max_size:
                continue
            yield d
            if generated_only:
                continue
            for factors in self._factor_lists(max_size):
                if not factors:
                    continue
                S, keep = self._direct_sum(d.apex, factors)
                if self.size_of(S) > max_size:
                    continue
                yield AmalgamationDiagram(
                    span,
                    Embedding(span.left, S, {x: keep[d.g1(x)] for x in span.left.universe}, check=False),
                    Embedding(span.right, S, {y: keep[d.g2(y)] for y in span.right.universe}, check=False),
                    check=False,
                )

    def extensions(self, N: FinStructure, bound: int) -> List[FinStructure]:
        out = []
        for factors in self._factor_lists(bound):
            if factors:
                S, _ = self._direct_sum(N, factors)
                if self.size_of(S) <= bound:
                    out.append(S)
        return out

    def pushout(self, span: Span) -> PushoutResult:
        K, G, gadd, zero = next(self._quotients(span, least=True))
        d, rep_of = self._quotient_diagram(span, K, G, gadd, zero)

        def mediate(other: AmalgamationDiagram) -> Dict[int, int]:
            add = other.apex.fn("add")
            return {q: add[(other.g1(x), other.g2(y))] for q, (x, y) in rep_of.items()}

        return PushoutResult(d, mediate)

    def regular_mono(self, f: Morphism) -> Verdict:
        return Verdict.of(f.is_injective() and is_homomorphism(f))


# -----------------------------------------------------------------------------
# User classes
# -----------------------------------------------------------------------------

class DirectoryClass(AbstractClass):
    """
    Members are the structures in a directory (mode "induced"), or those and
    all their substructures (mode "all"). No closure, colimits or
    amalgamation are assumed.
    """

    kind = "dir"

    def __init__(self, path: str, mode: str = "induced"):
        from .structure_io import load_structure_dir

        if mode not in ("induced", "all"):
            raise UnknownClassError(f"dir class mode must be 'induced' or 'all', got {mode!r}")
        files = load_structure_dir(path)
        if not files:
            raise UnknownClassError(f"no structure files in {path}")
        vocab = files[0].vocab
        if any(M.vocab != vocab for M in files):
            raise UnknownClassError(f"structures in {path} do not share a vocabulary")
        super().__init__(vocab, f"dir:{os.path.basename(os.path.normpath(path))}:{mode}")
        self.path = path
        self.mode = mode
        pool: Dict[tuple, FinStructure] = {}
        for M in files:
            pool.setdefault(canonical_key(M), M)
            if mode == "all":
                for U in closed_subsets(M):
                    sub = M.induced(U)
                    pool.setdefault(canonical_key(sub), sub)
        self._pool = pool

    def member(self, M: FinStructure) -> bool:
        return canonical_key(M) in self._pool

    def _enumerate_members(self, bound: int) -> List[FinStructure]:
        return [self._pool[k] for k in sorted(self._pool) if self._pool[k].size <= bound]


# -----------------------------------------------------------------------------
# Class registry
# -----------------------------------------------------------------------------

CLASS_NAMES = {
    "finset": "pure sets; every embedding strong",
    "graph": "undirected graphs; full-subgraph order",
    "klocal_graph:K": "graphs of degree < K; unions of components",
    "multigraph": "directed multigraphs with an edge sort",
    "module:N": "Z/N-modules; submodules",
    "vecspace:P": "F_P-vector spaces; bound is a dimension",
    "dir:PATH[:induced|all]": "structures from a directory of JSON files",
}


def _int_param(name: str, raw) -> int:
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise UnknownClassError(f"class '{name}' needs an integer parameter, got {raw!r}")


def make_class(name: str, params: Optional[dict] = None) -> AbstractClass:
    """Build a catalog class by name, e.g. make_class("klocal_graph", {"kappa": 2})."""
    params = params or {}
    if name == "finset":
        return FinSetClass()
    if name == "graph":
        return GraphClass()
    if name == "multigraph":
        return MultigraphClass()
    if name == "klocal_graph":
        return KLocalGraphClass(_int_param(name, params.get("kappa")))
    if name == "module":
        return ModuleClass(_int_param(name, params.get("n")))
    if name == "vecspace":
        p = _int_param(name, params.get("p"))
        return ModuleClass(p, "dim", f"vecspace:{p}")
    if name == "dir":
        if "path" not in params:
            raise UnknownClassError("dir class needs a path")
        return DirectoryClass(params["path"], params.get("mode", "induced"))
    raise UnknownClassError(f"unknown class '{name}'; known: {sorted(CLASS_NAMES)}")


@lru_cache(maxsize=64)
def parse_class_spec(text: str) -> AbstractClass:
    """Parse 'graph', 'klocal_graph:2', 'vecspace:2', 'module:4', 'dir:<path>[:mode]'."""
    text = text.strip()
    if text.startswith("dir:"):
        rest = text[4:]
        mode = "induced"
        for m in ("induced", "all"):
            if rest.endswith(":" + m):
                rest, mode = rest[: -len(m) - 1], m
        return make_class("dir", {"path": rest, "mode": mode})
    name, _, arg = text.partition(":")
    key = {"klocal_graph": "kappa", "module": "n", "vecspace": "p"}.get(name)
    if key is None:
        if arg:
            raise UnknownClassError(f"class '{name}' takes no parameter")
        return make_class(name)
    if not arg:
        raise UnknownClassError(f"class '{name}' needs a parameter, e.g. {name}:2")
    return make_class(name, {key: arg})


# -----------------------------------------------------------------------------
# Relations
# -----------------------------------------------------------------------------

GRAPH_KINDS = ("graph", "klocal_graph")
ALL_KINDS = ("finset", "graph", "klocal_graph", "multigraph", "module", "dir")
COLIMIT_KINDS = ("finset", "graph", "klocal_graph", "multigraph", "module")


def _meets_in_base(sq: Square) -> bool:
    return sq.left & sq.right == sq.base


def _cross_edges(sq: Square) -> Tuple[int, int]:
    """(present, possible) cross edges between the two sides outside the base."""
    E = sq.apex.rel("E")
    pairs = [(u, v) for u in sq.left - sq.base for v in sq.right - sq.base]
    return sum(1 for p in pairs if p in E), len(pairs)


def _no_cross(sq: Square) -> bool:
    return _meets_in_base(sq) and _cross_edges(sq)[0] == 0


def _all_cross(sq: Square) -> bool:
    if not _meets_in_base(sq):
        return False
    present, possible = _cross_edges(sq)
    return present == possible


def _mixed(sq: Square) -> bool:
    return _no_cross(sq) if len(sq.base) < 2 else _all_cross(sq)


def _right_has_edge(sq: Square) -> bool:
    return any(u in sq.right and v in sq.right for u, v in sq.apex.rel("E"))


def _iso_type(sq: Square) -> bool:
    return _all_cross(sq) if _right_has_edge(sq) else _no_cross(sq)


class _RelationEntry:

    def __init__(self, description: str, kinds: tuple, build: Callable, direct: bool = True):
        self.description = description
        self.kinds = kinds
        self.build = build
        self.direct = direct


def _effective(klass: AbstractClass) -> Callable[[Square], bool]:
    return lambda sq: is_effective_square(sq, klass).verdict is Verdict.HOLDS


RELATIONS: Dict[str, _RelationEntry] = {
    "intersection": _RelationEntry("sides meet exactly in the base", ALL_KINDS, lambda k: _meets_in_base),
    "no_cross_edges": _RelationEntry("intersection, no edges between the sides", GRAPH_KINDS, lambda k: _no_cross),
    "all_cross_edges": _RelationEntry("intersection, all edges between the sides", GRAPH_KINDS, lambda k: _all_cross),
    "mixed_bad": _RelationEntry("no cross edges over bases of size < 2, all cross edges otherwise",
                                GRAPH_KINDS, lambda k: _mixed),
    "iso_type_bad": _RelationEntry("all cross edges if the right side has an edge, none otherwise",
                                   GRAPH_KINDS, lambda k: _iso_type, direct=False),
    "pullback_rel": _RelationEntry("the square is a pullback", ALL_KINDS, lambda k: is_pullback_square),
    "effective_pullback_rel": _RelationEntry("pullback whose map from the pushout is regular",
                                             COLIMIT_KINDS, _effective),
    "all_squares": _RelationEntry("every square", ALL_KINDS, lambda k: (lambda sq: True)),
    "empty": _RelationEntry("no square", ALL_KINDS, lambda k: (lambda sq: False)),
    "even_apex": _RelationEntry("apex of even size", ALL_KINDS,
                                lambda k: (lambda sq: k.size_of(sq.apex) % 2 == 0), direct=False),
    "left_smaller": _RelationEntry("left side no larger than the right", ALL_KINDS,
                                   lambda k: (lambda sq: len(sq.left) <= len(sq.right)), direct=False),
}


def make_relation(name: str, klass: AbstractClass) -> IndependenceRelationSpec:
    entry = RELATIONS.get(name)
    if entry is None:
        raise UnknownRelationError(f"unknown relation '{name}'; known: {sorted(RELATIONS)}")
    if klass.kind not in entry.kinds:
        raise IncompatibleRelationError(f"relation '{name}' does not apply to class '{klass.name}'")
    decide = entry.build(klass)
    direct = nonfork_by_closure(decide, klass) if entry.direct and klass.exact else None
    return IndependenceRelationSpec(name, decide, klass, direct)


def relations_for(klass: AbstractClass) -> List[str]:
    return [name for name, entry in RELATIONS.items() if klass.kind in entry.kinds]
