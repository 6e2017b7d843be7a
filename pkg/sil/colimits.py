"""
SIL — Colimits
Pushouts and pullbacks of strong embeddings, regular monomorphisms, and
the pullback / effective-pullback square tests built on them.

Pushouts are a per-class capability: each built-in class returns a
``PushoutResult`` from ``AbstractClass.pushout``. Relational classes whose
functions are at most unary share ``relational_pushout``.
"""

import logging
from typing import Callable, Dict, Optional

from .diagrams import (
    AmalgamationDiagram,
    SearchBudget,
    Span,
    SpanMismatchError,
    Square,
    as_square,
    enumerate_amalgams,
    rectangles,
    spans,
    squares,
)
from .limits import guard
from .reporting import CheckReport, Verdict
from .structures import (
    AbstractClass,
    Embedding,
    FinStructure,
    Morphism,
    StructureError,
    UnsupportedOperationError,
    is_homomorphism,
)

logger = logging.getLogger(__name__)


class PushoutResult:
    """
    A pushout square plus its mediator. ``mediator(d)`` returns the induced
    map from the pushout apex into the apex of a competing amalgam ``d``,
    or None when no commuting homomorphism exists.
    """

    def __init__(self, cocone: AmalgamationDiagram, mediate: Callable[[AmalgamationDiagram], Dict[int, int]]):
        self.cocone = cocone
        self._mediate = mediate

    @property
    def apex(self) -> FinStructure:
        return self.cocone.apex

    def mediator(self, d: AmalgamationDiagram) -> Optional[Morphism]:
        if d.span != self.cocone.span:
            raise SpanMismatchError("competitor must complete the pushout's span")
        try:
            h = Morphism(self.apex, d.apex, self._mediate(d))
        except (KeyError, StructureError):
            return None
        if not is_homomorphism(h):
            return None
        for x in d.span.left.universe:
            if h(self.cocone.g1(x)) != d.g1(x):
                return None
        for y in d.span.right.universe:
            if h(self.cocone.g2(y)) != d.g2(y):
                return None
        return h

    def __repr__(self) -> str:
        return f"<PushoutResult |P|={self.apex.size}>"


class EffectiveSquareVerdict:
    """Is the square a pullback, and is the map from the pushout a regular mono?"""

    def __init__(self, is_pullback: bool, induced_map_regular: Verdict, witness: Optional[Morphism] = None):
        self.is_pullback = is_pullback
        self.induced_map_regular = induced_map_regular
        self.witness = witness

    @property
    def verdict(self) -> Verdict:
        if not self.is_pullback:
            return Verdict.FAILS
        return self.induced_map_regular

    def to_dict(self) -> dict:
        return {
            "is_pullback": self.is_pullback,
            "induced_map_regular": self.induced_map_regular.value,
            "witness": self.witness.to_dict()["map"] if self.witness is not None else None,
        }

    def __repr__(self) -> str:
        return f"<EffectiveSquareVerdict pullback={self.is_pullback} regular={self.induced_map_regular.value}>"


# -----------------------------------------------------------------------------
# Pushouts and pullbacks
# -----------------------------------------------------------------------------

def relational_pushout(span: Span) -> PushoutResult:
    """
    Disjoint union of M1 and M2 glued along M0: M1 keeps its ids, the fresh
    part of M2 is renumbered after them. Facts are the union of both images.
    Valid for vocabularies whose functions are at most unary.
    """
    M1, M2 = span.left, span.right
    if any(arity > 1 for _, arity in M1.vocab.functions):
        raise UnsupportedOperationError("relational pushout needs functions of arity <= 1")
    base2 = {span.f2(m): span.f1(m) for m in span.base.universe}
    nid = max(M1.universe) + 1 if M1.universe else 0
    g2map = {}
    for y in M2.universe:
        if y in base2:
            g2map[y] = base2[y]
        else:
            g2map[y] = nid
            nid += 1
    rels = {}
    for name, _ in M1.vocab.relations:
        rels[name] = set(M1.rel(name)) | {tuple(g2map[v] for v in t) for t in M2.rel(name)}
    fns = {}
    for name, _ in M1.vocab.functions:
        table = dict(M1.fn(name))
        for args, v in M2.fn(name).items():
            table[tuple(g2map[a] for a in args)] = g2map[v]
        fns[name] = table
    P = FinStructure(M1.vocab, set(M1.universe) | set(g2map.values()), rels, fns)
    cocone = AmalgamationDiagram(
        span,
        Embedding(M1, P, {x: x for x in M1.universe}, check=False),
        Embedding(M2, P, g2map, check=False),
    )
    fresh2 = {v: y for y, v in g2map.items() if y not in base2}

    def mediate(d: AmalgamationDiagram) -> Dict[int, int]:
        out = {x: d.g1(x) for x in M1.universe}
        out.update({v: d.g2(y) for v, y in fresh2.items()})
        return out

    return PushoutResult(cocone, mediate)


def pushout(span: Span, klass: AbstractClass) -> PushoutResult:
    """The pushout of a span in the class's ambient category."""
    return klass.pushout(span)


def pullback(g1: Embedding, g2: Embedding, klass: Optional[AbstractClass] = None) -> Span:
    """The intersection of the two images, as a span into M1 and M2."""
    if g1.target != g2.target:
        raise StructureError("cospan legs must share their codomain")
    N = g1.target
    meet = g1.image() & g2.image()
    P = N.induced(meet)
    inv1 = {v: x for x, v in g1.mapping.items()}
    inv2 = {v: y for y, v in g2.mapping.items()}
    return Span(
        Embedding(P, g1.source, {z: inv1[z] for z in P.universe}),
        Embedding(P, g2.source, {z: inv2[z] for z in P.universe}),
    )


# -----------------------------------------------------------------------------
# Squares
# -----------------------------------------------------------------------------

def is_regular_mono(f: Morphism, klass: AbstractClass) -> Verdict:
    return klass.regular_mono(f)


def is_pullback_square(d) -> bool:
    """Images of the sides meet exactly in the image of the base."""
    sq = as_square(d)
    return sq.left & sq.right == sq.base


def is_effective_square(d, klass: AbstractClass, budget: Optional[SearchBudget] = None) -> EffectiveSquareVerdict:
    """Pullback test plus regularity of the map from the pushout of the span."""
    d = d.diagram() if isinstance(d, Square) else d
    if not is_pullback_square(d):
        return EffectiveSquareVerdict(False, Verdict.FAILS)
    po = pushout(d.span, klass)
    h = po.mediator(d)
    if h is None:
        return EffectiveSquareVerdict(True, Verdict.FAILS)
    return EffectiveSquareVerdict(True, is_regular_mono(h, klass), h)


def _legs_regular(klass: AbstractClass, sq: Square) -> bool:
    d = sq.diagram()
    return all(is_regular_mono(f, klass) is Verdict.HOLDS for f in (d.f1, d.f2, d.g1, d.g2))


# -----------------------------------------------------------------------------
# Sweeps
# -----------------------------------------------------------------------------

def verify_ringel(klass: AbstractClass, size_bound: int) -> CheckReport:
    """Pushouts of regular monos are pullbacks, over every span within the bound."""
    report = CheckReport("ringel")
    for span in spans(klass, size_bound):
        if any(is_regular_mono(f, klass) is not Verdict.HOLDS for f in (span.f1, span.f2)):
            continue
        report.count()
        cocone = pushout(span, klass).cocone
        if not is_pullback_square(cocone):
            report.fail({"span": span.to_dict(), "pushout": cocone.apex.to_dict()},
                        "pushout of regular monos is not a pullback")
    return report.finish(size_bound)


def check_effective_unions(klass: AbstractClass, size_bound: int) -> CheckReport:
    """Every pullback square of regular monos within the bound is effective."""
    report = CheckReport("effective_unions")
    for sq in squares(klass, size_bound):
        if not is_pullback_square(sq) or not _legs_regular(klass, sq):
            continue
        report.count()
        verdict = is_effective_square(sq, klass)
        if verdict.verdict is Verdict.FAILS:
            report.fail({"square": sq.to_dict(), "effective": verdict.to_dict()},
                        "map from the pushout is not a regular mono")
        elif verdict.verdict is Verdict.INCONCLUSIVE:
            report.inconclusive(f"regularity undecided for {sq.describe()}")
    return report.finish(size_bound)


def check_effective_composition(klass: AbstractClass, size_bound: int) -> CheckReport:
    """Pasting two effective squares side by side gives an effective square."""
    report = CheckReport("effective_composition")
    memo: Dict[Square, Verdict] = {}

    def effective(sq: Square) -> Verdict:
        if sq not in memo:
            memo[sq] = is_effective_square(sq, klass).verdict
        return memo[sq]

    for N, U0, U1, U2, U3, U4 in rectangles(klass, size_bound):
        left_sq = Square(N.induced(U3), U0, U1, U2)
        right_sq = Square(N, U2, U3, U4)
        if effective(left_sq) is not Verdict.HOLDS or effective(right_sq) is not Verdict.HOLDS:
            continue
        report.count()
        outer = effective(Square(N, U0, U1, U4))
        if outer is Verdict.FAILS:
            report.fail({"left": left_sq.to_dict(), "right": right_sq.to_dict()},
                        "composite of effective squares is not effective")
            break
        if outer is Verdict.INCONCLUSIVE:
            report.inconclusive("regularity of a composite undecided")
    return report.finish(size_bound)


def check_pushout_universality(klass: AbstractClass, size_bound: int) -> CheckReport:
    """
    For every span and every generated amalgam within the bound, the mediator
    exists and commutes; it is unique because the pushout apex is generated
    by the images of its legs.
    """
    report = CheckReport("pushout_universality")
    budget = SearchBudget(max(size_bound, 1))
    for span in spans(klass, size_bound):
        po = pushout(span, klass)
        P = po.apex
        images = po.cocone.g1.image() | po.cocone.g2.image()
        if P.function_closure(images) != P.elements:
            report.fail({"span": span.to_dict()}, "pushout apex is not generated by the legs")
            continue
        for d in enumerate_amalgams(span, klass, budget):
            guard().check()
            report.count()
            if po.mediator(d) is None:
                report.fail({"span": span.to_dict(), "competitor": d.to_dict()},
                            "no commuting map from the pushout")
                break
    return report.finish(size_bound)
