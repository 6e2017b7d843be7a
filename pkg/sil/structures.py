"""
SIL — Structures
Finite structures in a finitary vocabulary, embeddings between them, and
abstract classes (K, <=K) with the hooks every search in the workbench uses.

Element ids are opaque non-negative integers. Structures are compared up to
isomorphism only through canonical forms or ``are_isomorphic``.
"""

import itertools
import logging
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from .reporting import CheckReport, Verdict

logger = logging.getLogger(__name__)


class StructureError(Exception):
    """Raised when a structure, map or vocabulary violates its invariants."""
    pass


class VocabularyMismatchError(Exception):
    """Raised when two structures that must share a vocabulary do not."""
    pass


class UnsupportedOperationError(Exception):
    """Raised when a class lacks a requested capability (pushouts, ...)."""
    pass


class NonEnumerableClassError(Exception):
    """Raised when a class cannot enumerate its members at the requested bound."""
    pass


# -----------------------------------------------------------------------------
# Vocabulary
# -----------------------------------------------------------------------------

class Vocabulary:
    """Relation symbols (arity >= 1) and function symbols (arity >= 0)."""

    def __init__(self, relations=None, functions=None):
        rels = dict(relations or {})
        fns = dict(functions or {})
        clash = set(rels) & set(fns)
        if clash:
            raise StructureError(f"symbol names used twice: {sorted(clash)}")
        for name, arity in rels.items():
            if not isinstance(arity, int) or arity < 1:
                raise StructureError(f"relation '{name}' needs a finite arity >= 1, got {arity!r}")
        for name, arity in fns.items():
            if not isinstance(arity, int) or arity < 0:
                raise StructureError(f"function '{name}' needs a finite arity >= 0, got {arity!r}")
        self.relations: Tuple[Tuple[str, int], ...] = tuple(sorted(rels.items()))
        self.functions: Tuple[Tuple[str, int], ...] = tuple(sorted(fns.items()))
        self._arity = dict(self.relations + self.functions)

    def arity(self, symbol: str) -> int:
        return self._arity[symbol]

    @property
    def has_constants(self) -> bool:
        return any(arity == 0 for _, arity in self.functions)

    def to_dict(self) -> dict:
        return {"relations": dict(self.relations), "functions": dict(self.functions)}

    def __eq__(self, other) -> bool:
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return (self.relations, self.functions) == (other.relations, other.functions)

    def __hash__(self) -> int:
        return hash((self.relations, self.functions))

    def __repr__(self) -> str:
        return f"<Vocabulary relations={dict(self.relations)} functions={dict(self.functions)}>"


# -----------------------------------------------------------------------------
# Finite structures
# -----------------------------------------------------------------------------

class FinStructure:
    """
    A finite structure: a universe of non-negative integer ids, a set of
    tuples per relation symbol and a total table per function symbol.
    Immutable and hashable.
    """

    def __init__(self, vocab: Vocabulary, universe: Iterable[int], relations=None, functions=None,
                 validate: bool = True):
        self.vocab = vocab
        self.universe: Tuple[int, ...] = tuple(sorted(set(universe)))
        self._elements = frozenset(self.universe)
        relations = relations or {}
        functions = functions or {}
        unknown = (set(relations) - {n for n, _ in vocab.relations}) | \
                  (set(functions) - {n for n, _ in vocab.functions})
        if unknown:
            raise StructureError(f"symbols not in vocabulary: {sorted(unknown)}")
        self._rels: Dict[str, frozenset] = {
            name: frozenset(tuple(t) for t in relations.get(name, ())) for name, _ in vocab.relations
        }
        self._fns: Dict[str, Dict[tuple, int]] = {}
        for name, _ in vocab.functions:
            table = functions.get(name, {})
            if not isinstance(table, dict):
                table = {tuple(row[:-1]): row[-1] for row in table}
            self._fns[name] = {tuple(k): v for k, v in table.items()}
        if validate:
            self._validate()
        self._hash = None
        self._facts = None

    def _validate(self) -> None:
        for x in self.universe:
            if not isinstance(x, int) or x < 0:
                raise StructureError(f"element ids must be non-negative integers, got {x!r}")
        if not self.universe and self.vocab.has_constants:
            raise StructureError("empty universe is not allowed with constant symbols")
        for name, arity in self.vocab.relations:
            for t in self._rels[name]:
                if len(t) != arity:
                    raise StructureError(f"relation '{name}': tuple {t} does not have arity {arity}")
                if not set(t) <= self._elements:
                    raise StructureError(f"relation '{name}': tuple {t} leaves the universe")
        for name, arity in self.vocab.functions:
            table = self._fns[name]
            for args in itertools.product(self.universe, repeat=arity):
                if args not in table:
                    raise StructureError(f"function '{name}' is not defined on {args}")
                if table[args] not in self._elements:
                    raise StructureError(f"function '{name}' maps {args} outside the universe")
            if len(table) != len(self.universe) ** arity:
                raise StructureError(f"function '{name}' has entries outside universe^{arity}")

    # -------------------------------------------------------------------------
    # Accessors
    # -------------------------------------------------------------------------

    @property
    def elements(self) -> frozenset:
        return self._elements

    @property
    def size(self) -> int:
        return len(self.universe)

    def __len__(self) -> int:
        return len(self.universe)

    def rel(self, name: str) -> frozenset:
        return self._rels[name]

    def fn(self, name: str) -> Dict[tuple, int]:
        return self._fns[name]

    def facts(self) -> Tuple[Tuple[str, tuple], ...]:
        """Relation tuples and function graphs as labeled tuples, sorted."""
        if self._facts is None:
            out = [(name, t) for name, _ in self.vocab.relations for t in self._rels[name]]
            out.extend((name, args + (v,)) for name, _ in self.vocab.functions
                       for args, v in self._fns[name].items())
            self._facts = tuple(sorted(out))
        return self._facts

    def is_closed(self, subset: Iterable[int]) -> bool:
        """True if the subset is closed under every function symbol."""
        U = frozenset(subset)
        for name, arity in self.vocab.functions:
            table = self._fns[name]
            for args in itertools.product(sorted(U), repeat=arity):
                if table[args] not in U:
                    return False
        return True

    def function_closure(self, subset: Iterable[int]) -> frozenset:
        closed = set(subset)
        changed = True
        while changed:
            changed = False
            for name, arity in self.vocab.functions:
                table = self._fns[name]
                for args in itertools.product(sorted(closed), repeat=arity):
                    v = table[args]
                    if v not in closed:
                        closed.add(v)
                        changed = True
        return frozenset(closed)

    def induced(self, subset: Iterable[int]) -> "FinStructure":
        """The substructure on a function-closed subset, keeping ids."""
        return _induced(self, frozenset(subset))

    def relabel(self, mapping: Dict[int, int]) -> "FinStructure":
        """An isomorphic copy with element x renamed to mapping[x]."""
        if len(set(mapping[x] for x in self.universe)) != len(self.universe):
            raise StructureError("relabeling must be injective")
        rels = {n: [tuple(mapping[v] for v in t) for t in ts] for n, ts in self._rels.items()}
        fns = {n: {tuple(mapping[v] for v in k): mapping[v] for k, v in tbl.items()}
               for n, tbl in self._fns.items()}
        return FinStructure(self.vocab, [mapping[x] for x in self.universe], rels, fns, validate=False)

    def to_dict(self) -> dict:
        return {
            "vocabulary": self.vocab.to_dict(),
            "universe": list(self.universe),
            "relations": {n: [list(t) for t in sorted(ts)] for n, ts in self._rels.items()},
            "functions": {n: [list(k) + [v] for k, v in sorted(tbl.items())] for n, tbl in self._fns.items()},
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinStructure):
            return NotImplemented
        return (self.vocab == other.vocab and self.universe == other.universe
                and self._rels == other._rels and self._fns == other._fns)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vocab, self.universe, self.facts()))
        return self._hash

    def __repr__(self) -> str:
        counts = ", ".join(f"{n}={len(ts)}" for n, ts in self._rels.items())
        return f"<FinStructure |U|={self.size} {counts}>"


@lru_cache(maxsize=65536)
def _induced(N: FinStructure, U: frozenset) -> FinStructure:
    if not U <= N.elements:
        raise StructureError(f"subset {sorted(U)} is not inside the universe")
    if not N.is_closed(U):
        raise StructureError(f"subset {sorted(U)} is not closed under the functions")
    rels = {name: [t for t in N.rel(name) if set(t) <= U] for name, _ in N.vocab.relations}
    fns = {name: {k: v for k, v in N.fn(name).items() if set(k) <= U} for name, _ in N.vocab.functions}
    return FinStructure(N.vocab, U, rels, fns, validate=False)


# -----------------------------------------------------------------------------
# Morphisms and embeddings
# -----------------------------------------------------------------------------

class Morphism:
    """A total map between the universes of two structures."""

    def __init__(self, source: FinStructure, target: FinStructure, mapping: Dict[int, int]):
        self.source = source
        self.target = target
        self.mapping = dict(mapping)
        if set(self.mapping) != source.elements:
            raise StructureError("map must be total on the source universe")
        if not set(self.mapping.values()) <= target.elements:
            raise StructureError("map lands outside the target universe")
        self._items = tuple(sorted(self.mapping.items()))

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def image(self, subset: Optional[Iterable[int]] = None) -> frozenset:
        if subset is None:
            return frozenset(self.mapping.values())
        return frozenset(self.mapping[x] for x in subset)

    def is_injective(self) -> bool:
        return len(set(self.mapping.values())) == len(self.mapping)

    def to_dict(self) -> dict:
        return {"map": [list(p) for p in self._items]}

    def __eq__(self, other) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented
        return (self.source, self.target, self._items) == (other.source, other.target, other._items)

    def __hash__(self) -> int:
        return hash((self.source, self.target, self._items))

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {dict(self._items)}>"


class Embedding(Morphism):
    """An injective map preserving and reflecting relations, commuting with functions."""

    def __init__(self, source: FinStructure, target: FinStructure, mapping: Dict[int, int],
                 check: bool = True):
        super().__init__(source, target, mapping)
        if check and not is_embedding(self):
            raise StructureError(f"not an embedding: {dict(self._items)}")


def _require_same_vocab(M: FinStructure, N: FinStructure) -> None:
    if M.vocab != N.vocab:
        raise VocabularyMismatchError(f"vocabularies differ: {M.vocab} vs {N.vocab}")


def _commutes_and_preserves(f: Morphism, reflect: bool) -> bool:
    M, N = f.source, f.target
    m = f.mapping
    for name, _ in M.vocab.relations:
        rm, rn = M.rel(name), N.rel(name)
        for t in rm:
            if tuple(m[v] for v in t) not in rn:
                return False
        if reflect:
            img = f.image()
            if sum(1 for t in rn if set(t) <= img) != len(rm):
                return False
    for name, _ in M.vocab.functions:
        fm, fn_ = M.fn(name), N.fn(name)
        for args, v in fm.items():
            if fn_[tuple(m[a] for a in args)] != m[v]:
                return False
    return True


def is_embedding(f: Morphism) -> bool:
    """Injective, relation-preserving-and-reflecting, function-commuting."""
    _require_same_vocab(f.source, f.target)
    return f.is_injective() and _commutes_and_preserves(f, reflect=True)


def is_homomorphism(f: Morphism) -> bool:
    _require_same_vocab(f.source, f.target)
    return _commutes_and_preserves(f, reflect=False)


def identity(M: FinStructure) -> Embedding:
    return Embedding(M, M, {x: x for x in M.universe}, check=False)


def inclusion(sub: FinStructure, sup: FinStructure) -> Embedding:
    """The identity-on-ids map of a substructure into a superstructure."""
    return Embedding(sub, sup, {x: x for x in sub.universe})


def compose(g: Morphism, f: Morphism) -> Morphism:
    """g after f."""
    if f.target != g.source:
        raise StructureError("maps are not composable")
    mapping = {x: g.mapping[f.mapping[x]] for x in f.source.universe}
    if isinstance(f, Embedding) and isinstance(g, Embedding):
        return Embedding(f.source, g.target, mapping, check=False)
    return Morphism(f.source, g.target, mapping)


def _tuples_with(domain: List[int], x: int, arity: int) -> Iterator[tuple]:
    for t in itertools.product(domain, repeat=arity):
        if x in t:
            yield t


def enumerate_embeddings(M: FinStructure, N: FinStructure,
                         partial: Optional[Dict[int, int]] = None) -> List[Embedding]:
    """
    All embeddings M -> N (extending ``partial`` if given), in lexicographic
    order of the images of M's elements. Function values are propagated as
    soon as their arguments are placed.
    """
    _require_same_vocab(M, N)
    if M.size > N.size:
        return []
    rels = [(arity, M.rel(name), N.rel(name)) for name, arity in M.vocab.relations]
    fns = [(arity, M.fn(name), N.fn(name)) for name, arity in M.vocab.functions]
    mapping: Dict[int, int] = {}
    used = set()
    results: List[Embedding] = []

    def assign(x: int, y: int, trail: list) -> bool:
        queue = [(x, y)]
        while queue:
            a, b = queue.pop()
            if a in mapping:
                if mapping[a] != b:
                    return False
                continue
            if b in used:
                return False
            mapping[a] = b
            used.add(b)
            trail.append(a)
            dom = list(mapping)
            for arity, rm, rn in rels:
                for t in _tuples_with(dom, a, arity):
                    if (t in rm) != (tuple(mapping[v] for v in t) in rn):
                        return False
            for arity, fm, fn_ in fns:
                if arity == 0:
                    continue
                for t in _tuples_with(dom, a, arity):
                    queue.append((fm[t], fn_[tuple(mapping[v] for v in t)]))
        return True

    def undo(trail: list) -> None:
        for a in trail:
            used.discard(mapping.pop(a))

    seed: list = []
    for arity, fm, fn_ in fns:
        if arity == 0 and not assign(fm[()], fn_[()], seed):
            return []
    for x, y in sorted((partial or {}).items()):
        if not assign(x, y, seed):
            return []

    order = list(M.universe)

    def extend(i: int) -> None:
        while i < len(order) and order[i] in mapping:
            i += 1
        if i == len(order):
            results.append(Embedding(M, N, dict(mapping), check=False))
            return
        x = order[i]
        for y in N.universe:
            if y in used:
                continue
            trail: list = []
            if assign(x, y, trail):
                extend(i + 1)
            undo(trail)

    extend(0)
    return results


def are_isomorphic(M: FinStructure, N: FinStructure) -> Optional[Embedding]:
    """An isomorphism M -> N if one exists; the identity when M == N."""
    from .canon import find_isomorphism

    _require_same_vocab(M, N)
    if M == N:
        return identity(M)
    if M.size != N.size or len(M.facts()) != len(N.facts()):
        return None
    mapping = find_isomorphism(M, N)
    if mapping is None:
        return None
    return Embedding(M, N, mapping, check=False)


# -----------------------------------------------------------------------------
# Abstract classes
# -----------------------------------------------------------------------------

class AbstractClass:
    """
    An abstract class (K, <=K) of finite structures.

    Subclasses override ``member`` and ``strong`` and may override the
    enumeration, closure and colimit hooks. ``exact`` marks classes where a
    least strong substructure always exists and amalgamation holds, so that
    bounded searches are complete.
    """

    kind = "generic"
    exact = False
    has_amalgamation = False
    max_brute_force = 1 << 18

    def __init__(self, vocab: Vocabulary, name: str = "abstract"):
        self.vocab = vocab
        self.name = name
        self._members_cache: Dict[int, List[FinStructure]] = {}
        self._strong_cache: Dict[FinStructure, List[frozenset]] = {}

    # -------------------------------------------------------------------------
    # Membership and order
    # -------------------------------------------------------------------------

    def member(self, M: FinStructure) -> bool:
        return True

    def strong(self, N: FinStructure, U: frozenset) -> bool:
        return True

    def is_member(self, M: FinStructure) -> bool:
        return M.vocab == self.vocab and self.member(M)

    def is_strong(self, N: FinStructure, U: Iterable[int]) -> bool:
        """Is the induced substructure on U a strong substructure of N?"""
        U = frozenset(U)
        if not U <= N.elements or not N.is_closed(U):
            return False
        return self.member(N.induced(U)) and self.strong(N, U)

    def is_strong_embedding(self, f: Morphism) -> bool:
        return (is_embedding(f) and self.is_member(f.source) and self.is_member(f.target)
                and self.is_strong(f.target, f.image()))

    # -------------------------------------------------------------------------
    # Measures
    # -------------------------------------------------------------------------

    def size_of(self, M: FinStructure) -> int:
        return M.size

    def extent(self, s0: int, s1: int, s2: int) -> int:
        """Size of the free amalgam of a span with side sizes s1, s2 over s0."""
        return s1 + s2 - s0

    def joint_bound(self, a: int, b: int) -> int:
        return a + b

    def closure_slack(self, alpha: int) -> Optional[int]:
        """How many non-tuple elements the closure of an alpha-tuple may add."""
        return None

    # -------------------------------------------------------------------------
    # Enumeration
    # -------------------------------------------------------------------------

    def members(self, bound: int) -> List[FinStructure]:
        """Members of size <= bound, one per isomorphism type, canonically sorted."""
        if bound not in self._members_cache:
            self._members_cache[bound] = self._enumerate_members(bound)
        return self._members_cache[bound]

    def _enumerate_members(self, bound: int) -> List[FinStructure]:
        from .canon import canonical_key

        found: Dict[tuple, FinStructure] = {}
        for n in range(bound + 1):
            universe = list(range(n))
            rel_choices = []
            for name, arity in self.vocab.relations:
                tuples = list(itertools.product(universe, repeat=arity))
                rel_choices.append([(name, tuples, mask) for mask in range(1 << len(tuples))])
            fn_choices = []
            for name, arity in self.vocab.functions:
                args = list(itertools.product(universe, repeat=arity))
                fn_choices.append([(name, args, vals) for vals in itertools.product(universe, repeat=len(args))])
            total = 1
            for c in rel_choices + fn_choices:
                total *= max(len(c), 1)
            if total > self.max_brute_force:
                raise NonEnumerableClassError(f"{self.name}: {total} raw structures of size {n}")
            if not universe and self.vocab.has_constants:
                continue
            for rchoice in itertools.product(*rel_choices):
                rels = {name: [t for i, t in enumerate(tuples) if mask >> i & 1] for name, tuples, mask in rchoice}
                for fchoice in itertools.product(*fn_choices):
                    fns = {name: dict(zip(args, vals)) for name, args, vals in fchoice}
                    M = FinStructure(self.vocab, universe, rels, fns, validate=False)
                    if self.member(M):
                        found.setdefault(canonical_key(M), M)
        return [found[k] for k in sorted(found)]

    def strong_subsets(self, N: FinStructure) -> List[frozenset]:
        """Strong subsets of N, sorted by size then elements."""
        if N not in self._strong_cache:
            elems = N.universe
            out = []
            for mask in range(1 << len(elems)):
                U = frozenset(e for i, e in enumerate(elems) if mask >> i & 1)
                if self.is_strong(N, U):
                    out.append(U)
            self._strong_cache[N] = sorted(out, key=lambda u: (len(u), sorted(u)))
        return self._strong_cache[N]

    def closure(self, N: FinStructure, A: Iterable[int]) -> Optional[frozenset]:
        """The least strong subset of N containing A, or None when there is none."""
        base = N.function_closure(A)
        if self.is_strong(N, base):
            return base
        supersets = [U for U in self.strong_subsets(N) if base <= U]
        if not supersets:
            return None
        meet = frozenset.intersection(*supersets)
        return meet if meet in supersets else None

    def substructures(self, N: FinStructure) -> List[FinStructure]:
        """Strong substructures of N, in ``strong_subsets`` order."""
        return [N.induced(U) for U in self.strong_subsets(N)]

    def config_key(self, N: FinStructure, marks=()) -> tuple:
        """Isomorphism key of N with the marked subsets named in order."""
        from .canon import canonical_key

        return canonical_key(N, [set(m) for m in marks])

    def amalgam_key(self, d) -> Optional[tuple]:
        from .diagrams import amalgam_key

        return amalgam_key(d, self)

    def free_atoms(self, name: str, arity: int, tuples: List[tuple]) -> List[Tuple[tuple, ...]]:
        """Groups of free tuples that are switched on together when completing an amalgam."""
        return [(t,) for t in tuples]

    def amalgams(self, span, max_size: int, generated_only: bool = True):
        """Class-specific amalgam iterator, or None for the generic engine."""
        return None

    def extensions(self, N: FinStructure, bound: int):
        """Class-specific strong extensions of N, or None for the generic engine."""
        return None

    # -------------------------------------------------------------------------
    # Colimit capabilities
    # -------------------------------------------------------------------------

    def pushout(self, span):
        raise UnsupportedOperationError(f"class '{self.name}' has no pushout construction")

    def regular_mono(self, f: Morphism) -> Verdict:
        if not f.is_injective():
            return Verdict.FAILS
        return Verdict.INCONCLUSIVE

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


def check_coherence(cls: AbstractClass, size_bound: int) -> CheckReport:
    """
    M0 subset M1 <= M2 and M0 <= M2 imply M0 <= M1, over every triple inside
    members of size <= size_bound; also identities strong and <= transitive.
    """
    report = CheckReport("coherence")
    try:
        members = cls.members(size_bound)
    except NonEnumerableClassError as e:
        return report.inconclusive(str(e)).finish(size_bound)
    for N in members:
        strong = cls.strong_subsets(N)
        strong_set = set(strong)
        report.count()
        if N.elements not in strong_set:
            return report.fail({"structure": N.to_dict()}, "identity is not strong").finish(size_bound)
        closed = [U for U in closed_subsets(N)]
        for U1 in strong:
            M1 = N.induced(U1)
            for U0 in closed:
                if not U0 <= U1:
                    continue
                report.count()
                strong_in_N = U0 in strong_set
                strong_in_M1 = cls.is_strong(M1, U0)
                if strong_in_N and not strong_in_M1:
                    return report.fail(
                        {"structure": N.to_dict(), "M1": sorted(U1), "M0": sorted(U0)},
                        "M0 <= M2 and M1 <= M2 but M0 is not strong in M1",
                    ).finish(size_bound)
                if strong_in_M1 and not strong_in_N:
                    return report.fail(
                        {"structure": N.to_dict(), "M1": sorted(U1), "M0": sorted(U0)},
                        "strong embeddings do not compose",
                    ).finish(size_bound)
    return report.finish(size_bound)


def closed_subsets(N: FinStructure) -> Iterator[frozenset]:
    elems = N.universe
    for mask in range(1 << len(elems)):
        U = frozenset(e for i, e in enumerate(elems) if mask >> i & 1)
        if N.is_closed(U):
            yield U
