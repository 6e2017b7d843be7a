"""
SIL — Amalgamation Diagrams
Spans, amalgams, amalgamation diagrams and their equivalence.

Every diagram has an inclusion form, a ``Square``: an apex N with three
strong subsets base <= left, right. Independence relations are decided on
squares. Bounded universes of spans, squares and composable configurations
are swept here, one representative per isomorphism type where it pays off.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

from .canon import canonical_form, canonical_key
from .limits import guard
from .reporting import CheckReport, Verdict
from .structures import (
    AbstractClass,
    Embedding,
    FinStructure,
    Vocabulary,
    compose,
    enumerate_embeddings,
    identity,
    inclusion,
)

logger = logging.getLogger(__name__)


class DiagramError(Exception):
    """Raised when arrows do not form a span, cospan or commuting square."""
    pass


class SpanMismatchError(Exception):
    """Raised when two diagrams that must share a span do not."""
    pass


class BudgetError(ValueError):
    """Raised for search budgets outside their valid range."""
    pass


# -----------------------------------------------------------------------------
# Spans, diagrams and squares
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class Span:
    f1: Embedding
    f2: Embedding

    def __post_init__(self):
        if self.f1.source != self.f2.source:
            raise DiagramError("span legs must share their source")

    @property
    def base(self) -> FinStructure:
        return self.f1.source

    @property
    def left(self) -> FinStructure:
        return self.f1.target

    @property
    def right(self) -> FinStructure:
        return self.f2.target

    def swapped(self) -> "Span":
        return Span(self.f2, self.f1)

    def to_dict(self) -> dict:
        return {
            "base": self.base.to_dict(),
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
            "f1": self.f1.to_dict()["map"],
            "f2": self.f2.to_dict()["map"],
        }


class AmalgamationDiagram:
    """A span (f1, f2) completed by g1, g2 into a commuting square."""

    def __init__(self, span: Span, g1: Embedding, g2: Embedding, check: bool = True):
        if g1.source != span.left or g2.source != span.right:
            raise DiagramError("g1, g2 must start at the span's sides")
        if g1.target != g2.target:
            raise DiagramError("g1, g2 must share their codomain")
        if check:
            for x in span.base.universe:
                if g1(span.f1(x)) != g2(span.f2(x)):
                    raise DiagramError(f"square does not commute at base element {x}")
        self.span = span
        self.g1 = g1
        self.g2 = g2

    @property
    def f1(self) -> Embedding:
        return self.span.f1

    @property
    def f2(self) -> Embedding:
        return self.span.f2

    @property
    def apex(self) -> FinStructure:
        return self.g1.target

    @cached_property
    def square(self) -> "Square":
        return Square(
            self.apex,
            self.g1.image(self.f1.image()),
            self.g1.image(),
            self.g2.image(),
        )

    def to_dict(self) -> dict:
        out = self.span.to_dict()
        out.update({"apex": self.apex.to_dict(), "g1": self.g1.to_dict()["map"], "g2": self.g2.to_dict()["map"]})
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, AmalgamationDiagram):
            return NotImplemented
        return (self.span, self.g1, self.g2) == (other.span, other.g1, other.g2)

    def __hash__(self) -> int:
        return hash((self.span, self.g1, self.g2))

    def __repr__(self) -> str:
        return f"<AmalgamationDiagram |N|={self.apex.size} {self.square.describe()}>"


class Square:
    """Inclusion form of a diagram: apex N and strong subsets base <= left, right."""

    __slots__ = ("apex", "base", "left", "right")

    def __init__(self, apex: FinStructure, base, left, right):
        self.apex = apex
        self.base = frozenset(base)
        self.left = frozenset(left)
        self.right = frozenset(right)
        if not (self.base <= self.left and self.base <= self.right):
            raise DiagramError("base must lie in both sides")
        if not (self.left | self.right) <= apex.elements:
            raise DiagramError("sides must lie in the apex")

    def dual(self) -> "Square":
        return Square(self.apex, self.base, self.right, self.left)

    def diagram(self) -> AmalgamationDiagram:
        return _square_diagram(self)

    def span(self) -> Span:
        return self.diagram().span

    def describe(self) -> str:
        return f"base={sorted(self.base)} left={sorted(self.left)} right={sorted(self.right)}"

    def to_dict(self) -> dict:
        return {
            "apex": self.apex.to_dict(),
            "base": sorted(self.base),
            "left": sorted(self.left),
            "right": sorted(self.right),
        }

    def _key(self) -> tuple:
        return (self.apex, self.base, self.left, self.right)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Square):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"<Square |N|={self.apex.size} {self.describe()}>"


@lru_cache(maxsize=65536)
def _square_diagram(sq: Square) -> AmalgamationDiagram:
    N = sq.apex
    M0, M1, M2 = N.induced(sq.base), N.induced(sq.left), N.induced(sq.right)
    span = Span(inclusion(M0, M1), inclusion(M0, M2))
    return AmalgamationDiagram(span, inclusion(M1, N), inclusion(M2, N), check=False)


def as_square(d) -> Square:
    return d if isinstance(d, Square) else d.square


def dual_diagram(d: AmalgamationDiagram) -> AmalgamationDiagram:
    """Swap (f1, g1) with (f2, g2)."""
    return AmalgamationDiagram(d.span.swapped(), d.g2, d.g1, check=False)


# -----------------------------------------------------------------------------
# Budgets
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchBudget:
    max_codomain_size: int
    max_depth: int = 2
    jobs: int = 1

    def __post_init__(self):
        if self.max_codomain_size < 1:
            raise BudgetError(f"max_codomain_size must be >= 1, got {self.max_codomain_size}")
        if self.max_depth < 1:
            raise BudgetError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.jobs < 1:
            raise BudgetError(f"jobs must be >= 1, got {self.jobs}")

    def with_size(self, size: int) -> "SearchBudget":
        return SearchBudget(max(size, 1), self.max_depth, self.jobs)

    def doubled(self) -> "SearchBudget":
        return self.with_size(2 * self.max_codomain_size)

    @classmethod
    def default_for(cls, klass: AbstractClass, d1: AmalgamationDiagram,
                    d2: Optional[AmalgamationDiagram] = None) -> "SearchBudget":
        d2 = d2 or d1
        size = klass.joint_bound(klass.size_of(d1.apex), klass.size_of(d2.apex))
        return cls(max(size, 1), max_depth=2)


# -----------------------------------------------------------------------------
# Span frames and isomorphism keys
# -----------------------------------------------------------------------------

class SpanFrame:
    """
    The span M1 <- M0 -> M2 as one structure: M1's elements followed by M2's
    fresh elements, with each side's facts under its own tagged symbols.
    Its canonical form identifies the span up to isomorphism; its
    automorphisms act on amalgam keys.
    """

    def __init__(self, span: Span):
        self.span = span
        M0, M1, M2 = span.base, span.left, span.right
        formal = [(1, x) for x in M1.universe]
        base2 = {span.f2(m): span.f1(m) for m in M0.universe}
        formal += [(2, y) for y in M2.universe if y not in base2]
        index = {p: i for i, p in enumerate(formal)}
        self.formal = formal
        self.index1: Dict[int, int] = {x: index[(1, x)] for x in M1.universe}
        self.index2: Dict[int, int] = {
            y: index[(1, base2[y])] if y in base2 else index[(2, y)] for y in M2.universe
        }
        rels = {}
        fns_as_rels = {}
        for name, arity in M1.vocab.relations:
            rels[f"{name}@1"] = arity
            rels[f"{name}@2"] = arity
        for name, arity in M1.vocab.functions:
            fns_as_rels[f"{name}@1"] = arity + 1
            fns_as_rels[f"{name}@2"] = arity + 1
        vocab = Vocabulary({**rels, **fns_as_rels, "side1": 1, "side2": 1, "base": 1})
        tables = {k: [] for k in vocab._arity}
        for side, M, idx in ((1, M1, self.index1), (2, M2, self.index2)):
            for name, t in M.facts():
                tables[f"{name}@{side}"].append(tuple(idx[v] for v in t))
            tables[f"side{side}"] = [(idx[v],) for v in M.universe]
        tables["base"] = [(self.index1[span.f1(m)],) for m in M0.universe]
        self.structure = FinStructure(vocab, range(len(formal)), tables, validate=False)

    @cached_property
    def form(self):
        return canonical_form(self.structure)

    @property
    def key(self) -> tuple:
        return self.form.encoding

    @cached_property
    def orbit_orders(self) -> Tuple[Tuple[int, ...], ...]:
        """Formal indices listed by canonical position, under every automorphism."""
        base_order = self.form.order()
        autos = enumerate_embeddings(self.structure, self.structure)
        return tuple(sorted({tuple(a(i) for i in base_order) for a in autos}))

    def images(self, d: AmalgamationDiagram) -> List[int]:
        out = []
        for side, x in self.formal:
            out.append(d.g1(x) if side == 1 else d.g2(x))
        return out


@lru_cache(maxsize=65536)
def span_frame(span: Span) -> SpanFrame:
    return SpanFrame(span)


def span_key(span: Span) -> tuple:
    return span_frame(span).key


def span_extent(klass: AbstractClass, span: Span) -> int:
    return klass.extent(klass.size_of(span.base), klass.size_of(span.left), klass.size_of(span.right))


def amalgam_key(d: AmalgamationDiagram, klass: AbstractClass, order=None) -> Optional[tuple]:
    """
    Isomorphism type of the closure of the span's image, every span element
    named. Equal on equivalent amalgams of one labeled span; None when the
    class has no closure there.
    """
    imgs = span_frame(d.span).images(d)
    C = klass.closure(d.apex, imgs)
    if C is None:
        return None
    positions = range(len(imgs)) if order is None else order
    return canonical_key(d.apex.induced(C), [{imgs[i]} for i in positions])


@lru_cache(maxsize=65536)
def amalgam_orbit(sq: Square, klass: AbstractClass) -> Optional[frozenset]:
    """The amalgam keys of a square under every automorphism of its span."""
    d = sq.diagram()
    frame = span_frame(d.span)
    keys = set()
    for order in frame.orbit_orders:
        k = amalgam_key(d, klass, order)
        if k is None:
            return None
        keys.add(k)
    return frozenset(keys)


def amalgam_type(d, klass: AbstractClass) -> Optional[tuple]:
    """Unlabeled type of the closure part with base, left and right marked."""
    sq = as_square(d)
    C = klass.closure(sq.apex, sq.left | sq.right)
    if C is None:
        return None
    return canonical_key(sq.apex.induced(C), (sq.base, sq.left, sq.right))


def transport(d: AmalgamationDiagram, span: Span) -> AmalgamationDiagram:
    """Re-express d over an isomorphic span, along the canonical isomorphism."""
    fa, fb = span_frame(d.span), span_frame(span)
    if fa.key != fb.key:
        raise SpanMismatchError("spans are not isomorphic")
    order_a = fa.form.order()
    pos_b = fb.form.labeling
    imgs = fa.images(d)
    g1 = {x: imgs[order_a[pos_b[fb.index1[x]]]] for x in span.left.universe}
    g2 = {y: imgs[order_a[pos_b[fb.index2[y]]]] for y in span.right.universe}
    return AmalgamationDiagram(
        span,
        Embedding(span.left, d.apex, g1, check=False),
        Embedding(span.right, d.apex, g2, check=False),
        check=False,
    )


# -----------------------------------------------------------------------------
# Amalgam engine
# -----------------------------------------------------------------------------

def _partial_injections(ys: List[int], xs: List[int]) -> Iterator[Dict[int, int]]:
    for k in range(min(len(ys), len(xs)) + 1):
        for chosen in itertools.combinations(ys, k):
            for targets in itertools.permutations(xs, k):
                yield dict(zip(chosen, targets))


def _subsets_in_order(atoms: list) -> Iterator[tuple]:
    for k in range(len(atoms) + 1):
        yield from itertools.combinations(atoms, k)


def iter_amalgams(span: Span, klass: AbstractClass, max_size: int,
                  generated_only: bool = True) -> Iterator[AmalgamationDiagram]:
    """
    Amalgams of the span with apex size <= max_size. M1 keeps its ids, so the
    free amalgam (no identifications, no new facts) comes first.
    """
    hook = klass.amalgams(span, max_size, generated_only)
    if hook is not None:
        yield from hook
        return
    yield from _relational_amalgams(span, klass, max_size, generated_only)


def _relational_amalgams(span: Span, klass: AbstractClass, max_size: int,
                         generated_only: bool) -> Iterator[AmalgamationDiagram]:
    M0, M1, M2 = span.base, span.left, span.right
    base2 = {span.f2(m): span.f1(m) for m in M0.universe}
    fresh1 = [x for x in M1.universe if x not in span.f1.image()]
    fresh2 = [y for y in M2.universe if y not in base2]
    first_new = max(M1.universe) + 1 if M1.universe else 0
    for pi in _partial_injections(fresh2, fresh1):
        n_gen = M1.size + len(fresh2) - len(pi)
        if n_gen > max_size:
            continue
        g2map = {}
        nid = first_new
        for y in M2.universe:
            if y in base2:
                g2map[y] = base2[y]
            elif y in pi:
                g2map[y] = pi[y]
            else:
                g2map[y] = nid
                nid += 1
        extras_range = [0] if generated_only else range(0, max_size - n_gen + 1)
        for extra in extras_range:
            universe = sorted(set(M1.universe) | set(g2map.values()) | set(range(nid, nid + extra)))
            yield from _completions(span, klass, g2map, universe)


def _completions(span: Span, klass: AbstractClass, g2map: Dict[int, int],
                 universe: List[int]) -> Iterator[AmalgamationDiagram]:
    M1, M2 = span.left, span.right
    img1 = M1.elements
    img2 = frozenset(g2map.values())
    vocab = M1.vocab

    forced_rels = {}
    rel_options = []
    for name, arity in vocab.relations:
        r1 = M1.rel(name)
        r2 = {tuple(g2map[v] for v in t) for t in M2.rel(name)}
        for t in r2:
            if set(t) <= img1 and t not in r1:
                return
        for t in r1:
            if set(t) <= img2 and t not in r2:
                return
        forced_rels[name] = set(r1) | r2
        free = [t for t in itertools.product(universe, repeat=arity)
                if not set(t) <= img1 and not set(t) <= img2]
        atoms = klass.free_atoms(name, arity, free)
        rel_options.append((name, list(_subsets_in_order(atoms))))

    tables = {}
    fn_free = []
    for name, arity in vocab.functions:
        table = dict(M1.fn(name))
        for args, v in M2.fn(name).items():
            a = tuple(g2map[x] for x in args)
            if a in table and table[a] != g2map[v]:
                return
            table[a] = g2map[v]
        tables[name] = table
        fn_free.append((name, [a for a in itertools.product(universe, repeat=arity) if a not in table]))

    g1 = {x: x for x in M1.universe}
    rel_choices = itertools.product(*[opts for _, opts in rel_options])
    for rchoice in rel_choices:
        rels = {}
        for (name, _), chosen in zip(rel_options, rchoice):
            extra = {t for group in chosen for t in group}
            rels[name] = forced_rels[name] | extra
        value_lists = [itertools.product(universe, repeat=len(args)) for _, args in fn_free]
        for fchoice in itertools.product(*value_lists):
            guard().check()
            fns = {}
            for (name, args), vals in zip(fn_free, fchoice):
                t = dict(tables[name])
                t.update(zip(args, vals))
                fns[name] = t
            N = FinStructure(vocab, universe, rels, fns, validate=False)
            if not klass.is_member(N):
                continue
            if not klass.is_strong(N, img1) or not klass.is_strong(N, img2):
                continue
            yield AmalgamationDiagram(
                span,
                Embedding(M1, N, g1, check=False),
                Embedding(M2, N, g2map, check=False),
                check=False,
            )


def enumerate_amalgams(span: Span, klass: AbstractClass, budget: SearchBudget) -> List[AmalgamationDiagram]:
    """Generated amalgams with |N| <= budget, one per isomorphism type over the span."""
    seen = set()
    out = []
    frame = span_frame(span)
    for d in iter_amalgams(span, klass, budget.max_codomain_size, generated_only=True):
        key = canonical_key(d.apex, [{i} for i in frame.images(d)])
        if key in seen:
            continue
        seen.add(key)
        out.append(d)
    return out


def extensions(klass: AbstractClass, N: FinStructure, bound: int) -> List[FinStructure]:
    """Proper strong extensions N <= N' with size(N') <= bound, one per type over N."""
    hook = klass.extensions(N, bound)
    if hook is not None:
        return list(hook)
    span = Span(identity(N), identity(N))
    seen = set()
    out = []
    for d in _relational_amalgams(span, klass, bound, generated_only=False):
        if d.apex.size == N.size:
            continue
        key = canonical_key(d.apex, [{x} for x in N.universe])
        if key not in seen:
            seen.add(key)
            out.append(d.apex)
    return out


# -----------------------------------------------------------------------------
# Bounded universes
# -----------------------------------------------------------------------------

def _below(strong: List[frozenset], top: frozenset) -> List[frozenset]:
    return [U for U in strong if U <= top]


def squares(klass: AbstractClass, bound: int, dedupe: bool = True) -> Iterator[Square]:
    """Every square with apex of size <= bound, one per isomorphism type."""
    seen = set()
    for N in klass.members(bound):
        strong = klass.strong_subsets(N)
        for left in strong:
            for right in strong:
                for base in _below(strong, left & right):
                    guard().check()
                    if dedupe:
                        key = canonical_key(N, (base, left, right))
                        if key in seen:
                            continue
                        seen.add(key)
                    yield Square(N, base, left, right)


def rectangles(klass: AbstractClass, bound: int) -> Iterator[Tuple[FinStructure, frozenset, frozenset, frozenset, frozenset, frozenset]]:
    """
    (N, U0, U1, U2, U3, U4) with U0 <= U1, U2; U1, U2 <= U3; U2 <= U4.
    The left square (U3; U0, U1, U2) and right square (N; U2, U3, U4)
    compose to (N; U0, U1, U4).
    """
    for N in klass.members(bound):
        strong = klass.strong_subsets(N)
        for U3 in strong:
            below3 = _below(strong, U3)
            for U4 in strong:
                for U2 in _below(below3, U4):
                    for U1 in below3:
                        for U0 in _below(strong, U1 & U2):
                            guard().check()
                            yield N, U0, U1, U2, U3, U4


def frames(klass: AbstractClass, bound: int) -> Iterator[Tuple[FinStructure, frozenset, frozenset, frozenset, frozenset]]:
    """(N, U0, U1, U2, U3) with U0 <= U1; U0 <= U2 <= U3."""
    for N in klass.members(bound):
        strong = klass.strong_subsets(N)
        for U1 in strong:
            for U3 in strong:
                for U2 in _below(strong, U3):
                    for U0 in _below(strong, U1 & U2):
                        guard().check()
                        yield N, U0, U1, U2, U3


def spans(klass: AbstractClass, bound: int) -> Iterator[Span]:
    """Spans whose free amalgam has size <= bound, one per isomorphism type."""
    seen = set()
    members = klass.members(bound)
    for M1 in members:
        s1 = klass.size_of(M1)
        for U0 in klass.strong_subsets(M1):
            M0 = M1.induced(U0)
            s0 = klass.size_of(M0)
            for M2 in members:
                s2 = klass.size_of(M2)
                if s2 < s0 or klass.extent(s0, s1, s2) > bound:
                    continue
                onto = M2.size == M0.size
                images = set()
                for e in enumerate_embeddings(M0, M2):
                    image = e.image()
                    if not klass.is_strong(M2, image):
                        continue
                    # Onto M2, or with f1 an isomorphism, the image fixes the span up to isomorphism.
                    if onto or M0.size == M1.size:
                        if image in images:
                            continue
                        images.add(image)
                    span = Span(inclusion(M0, M1), e)
                    key = span_key(span)
                    if key in seen:
                        continue
                    seen.add(key)
                    yield span


def check_amalgamation(klass: AbstractClass, bound: int) -> CheckReport:
    """Every span of extent <= bound has an amalgam of size <= bound."""
    report = CheckReport("amalgamation")
    for span in spans(klass, bound):
        report.count()
        if next(iter_amalgams(span, klass, bound), None) is None:
            return report.fail({"span": span.to_dict()}, "span has no amalgam within the bound").finish(bound)
    return report.finish(bound)


# -----------------------------------------------------------------------------
# Equivalence of amalgams
# -----------------------------------------------------------------------------

class EquivalenceResult:
    """Verdict of an equivalence search plus the merging cocone or chain found."""

    def __init__(self, verdict: Verdict, witness: Optional[dict] = None, detail: str = ""):
        self.verdict = verdict
        self.witness = witness
        self.detail = detail

    def __repr__(self) -> str:
        return f"<EquivalenceResult {self.verdict.value} {self.detail}>"


def _cocone_dict(d: AmalgamationDiagram) -> dict:
    return {"apex": d.apex.to_dict(), "g_a": d.g1.to_dict()["map"], "g_b": d.g2.to_dict()["map"]}


def _merge_over_closure(d1: AmalgamationDiagram, d2: AmalgamationDiagram, klass: AbstractClass,
                        budget: SearchBudget) -> Optional[AmalgamationDiagram]:
    frame = span_frame(d1.span)
    imgs1, imgs2 = frame.images(d1), frame.images(d2)
    C1 = klass.closure(d1.apex, imgs1)
    C2 = klass.closure(d2.apex, imgs2)
    if C1 is None or C2 is None:
        return None
    form1 = canonical_form(d1.apex.induced(C1), [{i} for i in imgs1])
    form2 = canonical_form(d2.apex.induced(C2), [{i} for i in imgs2])
    if form1.encoding != form2.encoding:
        return None
    back2 = {p: x for x, p in form2.labeling.items()}
    h = {x: back2[form1.labeling[x]] for x in C1}
    return _merge_along(d1, d2, C1, h, klass, budget)


def _merge_over_images(d1: AmalgamationDiagram, d2: AmalgamationDiagram, klass: AbstractClass,
                       budget: SearchBudget) -> Optional[AmalgamationDiagram]:
    frame = span_frame(d1.span)
    h = {}
    for a, b in zip(frame.images(d1), frame.images(d2)):
        if h.setdefault(a, b) != b:
            return None
    S = frozenset(h)
    if len(set(h.values())) != len(h) or not d1.apex.is_closed(S) or not klass.is_strong(d1.apex, S):
        return None
    if not d2.apex.is_closed(frozenset(h.values())) or not klass.is_strong(d2.apex, h.values()):
        return None
    return _merge_along(d1, d2, S, h, klass, budget)


def _merge_along(d1, d2, C: frozenset, h: Dict[int, int], klass: AbstractClass,
                 budget: SearchBudget) -> Optional[AmalgamationDiagram]:
    sub = d1.apex.induced(C)
    leg_a = Embedding(sub, d1.apex, {x: x for x in C}, check=False)
    leg_b = Embedding(sub, d2.apex, h)
    merge = Span(leg_a, leg_b)
    return next(iter_amalgams(merge, klass, budget.max_codomain_size), None)


def amalgams_equivalent(d1: AmalgamationDiagram, d2: AmalgamationDiagram, klass: AbstractClass,
                        budget: SearchBudget) -> EquivalenceResult:
    """
    Decide d1 ~ d2 at the budget. Where the class has closures, differing
    closure types refute equivalence outright and equal ones are merged by
    one amalgamation; otherwise one-step merges are chained up to
    ``budget.max_depth``.
    """
    if d1.span != d2.span:
        raise SpanMismatchError("amalgams must complete the same span")
    if d1 == d2:
        return EquivalenceResult(Verdict.HOLDS, {"apex": d1.apex.to_dict(), "chain": 0}, "identical")
    k1, k2 = amalgam_key(d1, klass), amalgam_key(d2, klass)
    if k1 is not None and k2 is not None:
        if k1 != k2:
            return EquivalenceResult(
                Verdict.FAILS,
                {"left": d1.to_dict(), "right": d2.to_dict()},
                "closures of the span images differ",
            )
        cocone = _merge_over_closure(d1, d2, klass, budget)
        if cocone is not None:
            return EquivalenceResult(Verdict.HOLDS, _cocone_dict(cocone), "merged over the closure")
        return EquivalenceResult(Verdict.INCONCLUSIVE, None, "no merging amalgam within the budget")
    return _chain_search(d1, d2, klass, budget)


def _chain_search(d1, d2, klass: AbstractClass, budget: SearchBudget) -> EquivalenceResult:
    cocone = _merge_over_images(d1, d2, klass, budget)
    if cocone is not None:
        return EquivalenceResult(Verdict.HOLDS, _cocone_dict(cocone), "one-step merge")
    pool = [d for d in enumerate_amalgams(d1.span, klass, budget)]
    frontier = [d1]
    seen = {d1}
    for depth in range(2, budget.max_depth + 1):
        nxt = []
        for a in frontier:
            for b in pool:
                if b in seen or _merge_over_images(a, b, klass, budget) is None:
                    continue
                if _merge_over_images(b, d2, klass, budget) is not None:
                    return EquivalenceResult(Verdict.HOLDS, {"chain": depth, "via": b.to_dict()}, f"chain of length {depth}")
                seen.add(b)
                nxt.append(b)
        frontier = nxt
    if klass.exact:
        return EquivalenceResult(Verdict.FAILS, {"left": d1.to_dict(), "right": d2.to_dict()},
                                 "exhaustive chain search found no merge")
    return EquivalenceResult(Verdict.INCONCLUSIVE, None, f"no chain of length <= {budget.max_depth}")
