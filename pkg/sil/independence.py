"""
SIL — Independence
Independence relations as decision procedures over squares, and bounded
checkers for every axiom a stable independence relation must satisfy.

All checkers sweep the bounded universes of ``diagrams`` at
``budget.max_codomain_size`` and return a ``CheckReport``. Left-hand
variants run the right-hand checker on the dual relation.
"""

import itertools
import logging
from typing import Callable, Dict, Iterable, List, Optional

from .diagrams import (
    AmalgamationDiagram,
    SearchBudget,
    Square,
    amalgam_orbit,
    amalgams_equivalent,
    as_square,
    extensions,
    frames,
    rectangles,
    span_key,
    spans,
    squares,
    transport,
)
from .limits import BudgetExhausted, guard
from .reporting import CheckReport, Verdict
from .structures import AbstractClass, FinStructure

logger = logging.getLogger(__name__)

RIGHT = "right"
LEFT = "left"


class IndependenceRelationSpec:
    """
    A named independence relation on one class.

    ``decide_square`` answers on inclusion squares; diagrams are reduced to
    their square first. ``direct_nonfork(U0, A, B, N)``, when present,
    decides the set-level closure of the relation without search.
    """

    def __init__(
        self,
        name: str,
        decide_square: Callable[[Square], bool],
        klass: Optional[AbstractClass] = None,
        direct_nonfork: Optional[Callable[[frozenset, frozenset, frozenset, FinStructure], bool]] = None,
        choice: Optional[dict] = None,
    ):
        self.name = name
        self.klass = klass
        self.direct_nonfork = direct_nonfork
        self.choice = choice
        self._decide = decide_square
        self._cache: Dict[Square, bool] = {}

    def decide(self, d) -> bool:
        sq = as_square(d)
        hit = self._cache.get(sq)
        if hit is None:
            hit = bool(self._decide(sq))
            self._cache[sq] = hit
        return hit

    def __call__(self, d) -> bool:
        return self.decide(d)

    def __repr__(self) -> str:
        where = self.klass.name if self.klass is not None else "-"
        return f"<IndependenceRelationSpec {self.name} on {where}>"


def dual_relation(rel: IndependenceRelationSpec) -> IndependenceRelationSpec:
    direct = None
    if rel.direct_nonfork is not None:
        def direct(U0, A, B, N):
            return rel.direct_nonfork(U0, B, A, N)
    return IndependenceRelationSpec(f"{rel.name}^d", lambda sq: rel.decide(sq.dual()), rel.klass, direct)


def _oriented(rel: IndependenceRelationSpec, side: str) -> IndependenceRelationSpec:
    if side == RIGHT:
        return rel
    if side == LEFT:
        return dual_relation(rel)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def _bound(budget: SearchBudget) -> int:
    return budget.max_codomain_size


def _guarded(name: str, budget: SearchBudget, body: Callable[[CheckReport], None]) -> CheckReport:
    report = CheckReport(name)
    try:
        body(report)
    except BudgetExhausted as e:
        report.inconclusive(str(e))
    return report.finish(_bound(budget))


def _pair_witness(first: Square, second: Square) -> dict:
    return {"first": first.to_dict(), "second": second.to_dict()}


# -----------------------------------------------------------------------------
# Axioms on squares
# -----------------------------------------------------------------------------

def check_closure_under_equiv(rel: IndependenceRelationSpec, klass: AbstractClass,
                              budget: SearchBudget) -> CheckReport:
    """Equivalent amalgams of one span are independent together or not at all."""

    def body(report: CheckReport) -> None:
        seen: Dict[tuple, Square] = {}
        unkeyed: Dict[tuple, List[Square]] = {}
        for sq in squares(klass, _bound(budget)):
            report.count()
            orbit = amalgam_orbit(sq, klass)
            if orbit is None:
                unkeyed.setdefault(span_key(sq.span()), []).append(sq)
                continue
            key = (span_key(sq.span()), orbit)
            first = seen.setdefault(key, sq)
            if rel(first) != rel(sq):
                report.fail(_pair_witness(first, sq), "equivalent amalgams decided differently")
                return
        for group in unkeyed.values():
            for a, b in itertools.combinations(group, 2):
                if rel(a) == rel(b):
                    continue
                da = a.diagram()
                db = transport(b.diagram(), da.span)
                result = amalgams_equivalent(da, db, klass, SearchBudget.default_for(klass, da, db))
                if result.verdict is Verdict.HOLDS:
                    report.fail(_pair_witness(a, b), "equivalent amalgams decided differently")
                    return
                if result.verdict is Verdict.INCONCLUSIVE:
                    report.inconclusive(f"equivalence undecided: {result.detail}")

    return _guarded("closure", budget, body)


def check_existence(rel: IndependenceRelationSpec, klass: AbstractClass, budget: SearchBudget) -> CheckReport:
    """Every span within the bound has an independent amalgam within the bound."""

    def body(report: CheckReport) -> None:
        covered = set()
        for sq in squares(klass, _bound(budget)):
            if rel(sq):
                covered.add(span_key(sq.span()))
        for span in spans(klass, _bound(budget)):
            report.count()
            if span_key(span) not in covered:
                report.fail({"span": span.to_dict()}, "span has no independent amalgam within the bound")
                return

    return _guarded("existence", budget, body)


def check_uniqueness(rel: IndependenceRelationSpec, klass: AbstractClass, budget: SearchBudget) -> CheckReport:
    """Any two independent amalgams of one span are equivalent."""

    def body(report: CheckReport) -> None:
        classes: Dict[tuple, Dict[frozenset, Square]] = {}
        unkeyed: Dict[tuple, List[Square]] = {}
        for sq in squares(klass, _bound(budget)):
            if not rel(sq):
                continue
            report.count()
            k = span_key(sq.span())
            orbit = amalgam_orbit(sq, klass)
            if orbit is None:
                unkeyed.setdefault(k, []).append(sq)
                continue
            per_span = classes.setdefault(k, {})
            per_span.setdefault(orbit, sq)
            if len(per_span) > 1 or len(orbit) > 1:
                pair = list(per_span.values())
                first, second = pair[0], pair[-1]
                report.fail(_pair_witness(first, second),
                            "two independent amalgams of one span are not equivalent")
                return
        for group in unkeyed.values():
            for a, b in itertools.combinations(group, 2):
                da = a.diagram()
                db = transport(b.diagram(), da.span)
                result = amalgams_equivalent(da, db, klass, SearchBudget.default_for(klass, da, db))
                if result.verdict is Verdict.FAILS:
                    report.fail(_pair_witness(a, b), "two independent amalgams of one span are not equivalent")
                    return
                if result.verdict is Verdict.INCONCLUSIVE:
                    report.inconclusive(f"equivalence undecided: {result.detail}")

    return _guarded("uniqueness", budget, body)


def check_transitivity(rel: IndependenceRelationSpec, klass: AbstractClass, budget: SearchBudget,
                       side: str = RIGHT) -> CheckReport:
    """Independent squares pasted side by side (right) or stacked (left) stay independent."""
    r = _oriented(rel, side)

    def body(report: CheckReport) -> None:
        for N, U0, U1, U2, U3, U4 in rectangles(klass, _bound(budget)):
            first = Square(N.induced(U3), U0, U1, U2)
            second = Square(N, U2, U3, U4)
            if not (r(first) and r(second)):
                continue
            report.count()
            outer = Square(N, U0, U1, U4)
            if not r(outer):
                report.fail(
                    {"side": side, "first": first.to_dict(), "second": second.to_dict(), "composite": outer.to_dict()},
                    f"{side} composite of independent squares is not independent",
                )
                return

    return _guarded(f"transitivity_{side}", budget, body)


def check_descent(rel: IndependenceRelationSpec, klass: AbstractClass, budget: SearchBudget,
                  side: str = RIGHT) -> CheckReport:
    """An independent outer rectangle has an independent first square."""
    r = _oriented(rel, side)

    def body(report: CheckReport) -> None:
        for N, U0, U1, U2, U3, U4 in rectangles(klass, _bound(budget)):
            outer = Square(N, U0, U1, U4)
            if not r(outer):
                continue
            report.count()
            first = Square(N.induced(U3), U0, U1, U2)
            if not r(first):
                report.fail({"side": side, "outer": outer.to_dict(), "first": first.to_dict()},
                            "outer rectangle independent but its first square is not")
                return

    return _guarded(f"descent_{side}", budget, body)


def check_monotonicity(rel: IndependenceRelationSpec, klass: AbstractClass, budget: SearchBudget,
                       side: str = RIGHT) -> CheckReport:
    """Shrinking one side of an independent square keeps it independent; descent is swept too."""
    r = _oriented(rel, side)

    def body(report: CheckReport) -> None:
        for N, U0, U1, U2, U3 in frames(klass, _bound(budget)):
            outer = Square(N, U0, U1, U3)
            if not r(outer):
                continue
            report.count()
            inner = Square(N, U0, U1, U2)
            if not r(inner):
                report.fail({"side": side, "outer": outer.to_dict(), "inner": inner.to_dict()},
                            "shrinking a side broke independence")
                return
        if report.holds:
            report.absorb(check_descent(rel, klass, budget, side))

    return _guarded(f"monotonicity_{side}", budget, body)


def check_base_monotonicity(rel: IndependenceRelationSpec, klass: AbstractClass, budget: SearchBudget,
                            side: str = RIGHT) -> CheckReport:
    """
    For an independent (N; U0, U1, U3) and U0 <= U2 <= U3, some strong
    U1' containing U1 and U2, inside N or a strong extension of N, makes
    (N'; U2, U1', U3) independent.
    """
    r = _oriented(rel, side)
    bound = _bound(budget)

    def found_in(N: FinStructure, need: frozenset, U2: frozenset, U3: frozenset) -> bool:
        return any(need <= U and r(Square(N, U2, U, U3)) for U in klass.strong_subsets(N))

    def body(report: CheckReport) -> None:
        for N, U0, U1, U2, U3 in frames(klass, bound):
            if not r(Square(N, U0, U1, U3)):
                continue
            report.count()
            need = U1 | U2
            if found_in(N, need, U2, U3):
                continue
            if any(found_in(N2, need, U2, U3) for N2 in extensions(klass, N, bound)):
                continue
            report.inconclusive(
                f"no enlargement of left={sorted(U1)} over base={sorted(U2)} within bound {bound}"
            )
            report.witnesses.append({"side": side, "outer": Square(N, U0, U1, U3).to_dict(),
                                     "new_base": sorted(U2)})

    return _guarded(f"base_monotonicity_{side}", budget, body)


def check_symmetry(rel: IndependenceRelationSpec, klass: AbstractClass, budget: SearchBudget) -> CheckReport:

    def body(report: CheckReport) -> None:
        for sq in squares(klass, _bound(budget)):
            report.count()
            if rel(sq) != rel(sq.dual()):
                report.fail({"square": sq.to_dict(), "decided": rel(sq)},
                            "relation differs from its dual")
                return

    return _guarded("symmetry", budget, body)


def check_isomorphism_lemma(rel: IndependenceRelationSpec, klass: AbstractClass,
                            budget: SearchBudget) -> CheckReport:
    """Squares with an isomorphic leg are independent."""

    def body(report: CheckReport) -> None:
        for sq in squares(klass, _bound(budget)):
            if sq.base != sq.left and sq.base != sq.right:
                continue
            report.count()
            if not rel(sq):
                report.fail({"square": sq.to_dict()}, "square with an isomorphic leg is not independent")
                return

    return _guarded("isomorphism_lemma", budget, body)


def _reverse_ids(N: FinStructure) -> Dict[int, int]:
    top = max(N.universe) if N.universe else 0
    return {x: 2 * top + 1 - x for x in N.universe}


def check_invariance(rel: IndependenceRelationSpec, klass: AbstractClass, budget: SearchBudget) -> CheckReport:
    """Decisions agree on isomorphic labeled squares."""
    from .canon import canonical_key

    def body(report: CheckReport) -> None:
        seen: Dict[tuple, Square] = {}
        for sq in squares(klass, _bound(budget), dedupe=False):
            report.count()
            key = canonical_key(sq.apex, (sq.base, sq.left, sq.right))
            first = seen.setdefault(key, sq)
            if rel(first) != rel(sq):
                report.fail(_pair_witness(first, sq), "isomorphic squares decided differently")
                return
            pi = _reverse_ids(sq.apex)
            moved = Square(sq.apex.relabel(pi), {pi[x] for x in sq.base},
                           {pi[x] for x in sq.left}, {pi[x] for x in sq.right})
            if rel(moved) != rel(sq):
                report.fail(_pair_witness(sq, moved), "relabeled square decided differently")
                return

    return _guarded("invariance", budget, body)


def check_knf_category(rel: IndependenceRelationSpec, klass: AbstractClass, budget: SearchBudget) -> CheckReport:
    """Identity squares are independent and independent squares compose."""
    report = CheckReport("knf_category")
    try:
        for N in klass.members(_bound(budget)):
            for U in klass.strong_subsets(N):
                report.count()
                identity_sq = Square(N, U, U, N.elements)
                if not rel(identity_sq):
                    report.fail({"square": identity_sq.to_dict()}, "identity square is not independent")
                    return report.finish(_bound(budget))
    except BudgetExhausted as e:
        report.inconclusive(str(e))
        return report.finish(_bound(budget))
    report.absorb(check_transitivity(rel, klass, budget, RIGHT))
    return report.finish(_bound(budget))


# -----------------------------------------------------------------------------
# Nonforking of sets
# -----------------------------------------------------------------------------

def nonfork_by_closure(decide: Callable[[Square], bool], klass: AbstractClass):
    """
    Set-level decider for relations that are monotone and depend only on the
    closure of the sides: test the square spanned by the closures.
    """

    def direct(U0: frozenset, A: frozenset, B: frozenset, N: FinStructure) -> bool:
        left = klass.closure(N, U0 | A)
        right = klass.closure(N, U0 | B)
        return decide(Square(N, U0, left, right))

    return direct


def nfbar_search(rel: IndependenceRelationSpec, U0: frozenset, A: frozenset, B: frozenset,
                 N: FinStructure, budget: SearchBudget) -> Verdict:
    """Search strong M1 >= U0 + A, M2 >= U0 + B inside N or a strong extension of N."""
    klass = rel.klass
    lo_left, lo_right = U0 | A, U0 | B
    for N2 in [N] + extensions(klass, N, max(_bound(budget), klass.size_of(N))):
        strong = klass.strong_subsets(N2)
        lefts = [U for U in strong if lo_left <= U]
        rights = [U for U in strong if lo_right <= U]
        for L in lefts:
            for R in rights:
                guard().check()
                if rel(Square(N2, U0, L, R)):
                    return Verdict.HOLDS
    return Verdict.FAILS


def nfbar(rel: IndependenceRelationSpec, M0, A: Iterable[int], B: Iterable[int], N: FinStructure,
          budget: SearchBudget, method: str = "auto") -> Verdict:
    """
    Is A independent from B over M0 inside N? ``M0`` is a strong substructure
    of N or its element set. The direct decider is used when registered.
    """
    U0 = M0.elements if isinstance(M0, FinStructure) else frozenset(M0)
    A, B = frozenset(A), frozenset(B)
    if rel.klass is None:
        raise ValueError(f"relation {rel.name} is not bound to a class")
    if method != "search" and rel.direct_nonfork is not None:
        return Verdict.of(rel.direct_nonfork(U0, A, B, N))
    if method == "direct":
        return Verdict.INCONCLUSIVE
    return nfbar_search(rel, U0, A, B, N, budget)


def _set_configs(klass: AbstractClass, bound: int):
    for N in klass.members(bound):
        subsets = [frozenset(c) for k in range(N.size + 1) for c in itertools.combinations(N.universe, k)]
        for U0 in klass.strong_subsets(N):
            for A in subsets:
                for B in subsets:
                    guard().check()
                    yield N, U0, A, B, subsets


def check_nfbar_laws(rel: IndependenceRelationSpec, klass: AbstractClass, budget: SearchBudget) -> CheckReport:
    """
    Sweep the laws of set-level nonforking over every configuration
    (N, U0, A, B) within the bound: preservation, monotonicity, normality,
    base monotonicity, extension, symmetry, uniqueness and transitivity.
    """
    from .galois import set_type_certificate

    bound = _bound(budget)
    report = CheckReport("nfbar_laws")
    symmetric = check_symmetry(rel, klass, budget).holds
    if not symmetric:
        report.record("nfbar_symmetry", "SKIP", "relation is not symmetric at this bound")
    failures: Dict[str, dict] = {}

    def nf(U0, A, B, N) -> bool:
        v = nfbar(rel, U0, A, B, N, budget)
        if v is Verdict.INCONCLUSIVE:
            raise _Undecided()
        return v is Verdict.HOLDS

    def violate(law: str, witness: dict) -> None:
        failures.setdefault(law, witness)

    try:
        for N, U0, A, B, subsets in _set_configs(klass, bound):
            report.count()
            holds = nf(U0, A, B, N)
            conf = {"structure": N.to_dict(), "base": sorted(U0), "A": sorted(A), "B": sorted(B)}

            pi = _reverse_ids(N)
            moved = nf(frozenset(pi[x] for x in U0), frozenset(pi[x] for x in A),
                       frozenset(pi[x] for x in B), N.relabel(pi))
            if moved != holds:
                violate("preservation", conf)

            if holds != nf(U0, A | U0, B | U0, N):
                violate("normality", conf)

            if not holds:
                continue

            for x in A:
                if not nf(U0, A - {x}, B, N):
                    violate("monotonicity", dict(conf, dropped=x))
            for y in B:
                if not nf(U0, A, B - {y}, N):
                    violate("monotonicity", dict(conf, dropped=y))

            for N2 in extensions(klass, N, bound):
                if not nf(U0, A, B, N2):
                    violate("preservation", dict(conf, extension=N2.to_dict()))

            if symmetric and not nf(U0, B, A, N):
                violate("symmetry", conf)

            for U2 in klass.strong_subsets(N):
                if not (U0 <= U2 and U2 <= B | U0):
                    continue
                if not nf(U2, A, B, N):
                    violate("base_monotonicity", dict(conf, new_base=sorted(U2)))

            for U2 in klass.strong_subsets(N):
                if not U0 <= U2:
                    continue
                if nf(U0, A, U2, N) and nf(U2, A, B, N) and not nf(U0, A, B, N):
                    violate("transitivity", dict(conf, middle=sorted(U2)))

            if klass.exact and not _extension_law(rel, klass, U0, A, B, N, budget, nf):
                violate("extension", conf)

            if len(A) == 1:
                _uniqueness_law(klass, U0, A, B, N, nf, violate, conf, set_type_certificate)
    except _Undecided:
        report.inconclusive("set-level nonforking undecided at this bound")
    except BudgetExhausted as e:
        report.inconclusive(str(e))

    for law in ("preservation", "monotonicity", "normality", "base_monotonicity", "extension",
                "symmetry", "uniqueness", "transitivity"):
        if law in failures:
            report.fail(dict(failures[law], law=law), f"nfbar {law} fails")
        elif report.verdict is Verdict.HOLDS:
            report.record(f"nfbar_{law}", "PASS", f"exhaustive at bound {bound}")
    return report.finish(bound)


class _Undecided(Exception):
    pass


def _extension_law(rel, klass, U0, A, B, N, budget, nf) -> bool:
    """Some amalgam moves A over U0 + B so that it is independent from all of N."""
    from .diagrams import Span, iter_amalgams
    from .structures import inclusion

    X = klass.closure(N, U0 | A | B)
    D = klass.closure(N, U0 | B)
    if X is None or D is None:
        return True
    MX, MD = N.induced(X), N.induced(D)
    span = Span(inclusion(MD, MX), inclusion(MD, N))
    size = klass.joint_bound(klass.size_of(MX), klass.size_of(N))
    for d in iter_amalgams(span, klass, size):
        N2 = d.apex
        base2 = d.g2.image(U0)
        if nf(base2, d.g1.image(A), d.g2.image(N.universe), N2):
            return True
    return False


def _uniqueness_law(klass, U0, A, B, N, nf, violate, conf, set_type_certificate) -> None:
    (a,) = tuple(A)
    for b in N.universe:
        if b <= a or not nf(U0, frozenset({b}), B, N):
            continue
        same_base = set_type_certificate(klass, N, U0, (a,)) == set_type_certificate(klass, N, U0, (b,))
        if not same_base:
            continue
        if set_type_certificate(klass, N, U0 | B, (a,)) != set_type_certificate(klass, N, U0 | B, (b,)):
            violate("uniqueness", dict(conf, other=b))


# -----------------------------------------------------------------------------
# Witness property and local character
# -----------------------------------------------------------------------------

def check_witness(rel: IndependenceRelationSpec, klass: AbstractClass, theta: int, budget: SearchBudget,
                  side: str = RIGHT) -> CheckReport:
    """Every dependent square has a set A of size < theta in its right side that already forks."""
    r = _oriented(rel, side)

    def body(report: CheckReport) -> None:
        for sq in squares(klass, _bound(budget)):
            if r(sq):
                continue
            report.count()
            right = sorted(sq.right)
            found = False
            for k in range(min(theta, len(right) + 1)):
                for A in itertools.combinations(right, k):
                    if nfbar(r, sq.base, sq.left, A, sq.apex, budget) is Verdict.FAILS:
                        found = True
                        break
                if found:
                    break
            if not found:
                report.fail({"side": side, "theta": theta, "square": sq.to_dict()},
                            f"no set of size < {theta} witnesses the dependence")
                return

    return _guarded(f"witness_{side}", budget, body)


def default_lambda(offset: int = 2) -> Callable[[int], int]:
    return lambda alpha: alpha + offset


def check_local_character(rel: IndependenceRelationSpec, klass: AbstractClass, lambda_fn: Callable[[int], int],
                          budget: SearchBudget, side: str = RIGHT) -> CheckReport:
    """
    For every N, strong M <= N and A in N, some strong M0 <= M of size at
    most lambda_fn(|A|) has A independent from M over M0.
    """
    r = _oriented(rel, side)

    def body(report: CheckReport) -> None:
        for N in klass.members(_bound(budget)):
            strong = klass.strong_subsets(N)
            for k in range(N.size + 1):
                for A in itertools.combinations(N.universe, k):
                    A = frozenset(A)
                    limit = lambda_fn(k)
                    for M in strong:
                        guard().check()
                        report.count()
                        small = [U for U in strong if U <= M and klass.size_of(N.induced(U)) <= limit]
                        verdicts = [nfbar(r, U, A, M, N, budget) for U in small]
                        if Verdict.HOLDS in verdicts:
                            continue
                        if Verdict.INCONCLUSIVE in verdicts:
                            report.inconclusive(f"nonforking undecided over M={sorted(M)}")
                            continue
                        report.fail({"side": side, "structure": N.to_dict(), "M": sorted(M), "A": sorted(A),
                                     "lambda": limit}, f"A forks over every strong M0 of size <= {limit}")
                        return

    return _guarded(f"local_character_{side}", budget, body)
