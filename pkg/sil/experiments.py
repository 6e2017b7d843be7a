"""
SIL — Experiments
Checks composed from the other modules: relation comparison, the search for
every coherent choice of amalgams, the full axiom suite and the sweeps that
tie axioms, colimits and types together.
"""

import logging
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .catalog import make_relation, parse_class_spec, relations_for
from .colimits import check_effective_unions, is_pullback_square
from .diagrams import SearchBudget, Square, amalgam_orbit, frames, rectangles, span_key, spans, squares
from .galois import find_order_property
from .independence import (
    LEFT,
    RIGHT,
    IndependenceRelationSpec,
    check_base_monotonicity,
    check_closure_under_equiv,
    check_descent,
    check_existence,
    check_invariance,
    check_isomorphism_lemma,
    check_knf_category,
    check_local_character,
    check_monotonicity,
    check_nfbar_laws,
    check_symmetry,
    check_transitivity,
    check_uniqueness,
    check_witness,
    default_lambda,
)
from .limits import guard, ordered_map
from .reporting import CheckReport, SuiteReport, Verdict
from .structures import AbstractClass

logger = logging.getLogger(__name__)


# -----------------------------------------------------------------------------
# Comparison
# -----------------------------------------------------------------------------

def differential_compare(rel_a: IndependenceRelationSpec, rel_b: IndependenceRelationSpec,
                         klass: AbstractClass, budget: SearchBudget) -> CheckReport:
    """Every square within the bound where the two relations disagree."""
    bound = budget.max_codomain_size
    report = CheckReport("compare")
    for sq in squares(klass, bound):
        report.count()
        a, b = rel_a(sq), rel_b(sq)
        if a != b:
            report.fail({"square": sq.to_dict(), rel_a.name: a, rel_b.name: b},
                        f"{rel_a.name} and {rel_b.name} disagree on {sq.describe()}")
    return report.finish(bound)


def verify_pullback_consequence(rel: IndependenceRelationSpec, klass: AbstractClass,
                                budget: SearchBudget) -> CheckReport:
    """Every independent square within the bound is a pullback square."""
    bound = budget.max_codomain_size
    report = CheckReport("pullback_consequence")
    report.notes.append("all finite bases stand in for model-homogeneous ones")
    for sq in squares(klass, bound):
        if not rel(sq):
            continue
        report.count()
        if not is_pullback_square(sq):
            report.fail({"square": sq.to_dict()}, "independent square whose sides meet outside the base")
            break
    return report.finish(bound)


# -----------------------------------------------------------------------------
# Axiom suite
# -----------------------------------------------------------------------------

Checker = Callable[[IndependenceRelationSpec, AbstractClass, SearchBudget, int, Callable[[int], int]], CheckReport]

AXIOMS: Dict[str, Checker] = {
    "closure": lambda r, k, b, t, l: check_closure_under_equiv(r, k, b),
    "existence": lambda r, k, b, t, l: check_existence(r, k, b),
    "uniqueness": lambda r, k, b, t, l: check_uniqueness(r, k, b),
    "transitivity_right": lambda r, k, b, t, l: check_transitivity(r, k, b, RIGHT),
    "transitivity_left": lambda r, k, b, t, l: check_transitivity(r, k, b, LEFT),
    "monotonicity_right": lambda r, k, b, t, l: check_monotonicity(r, k, b, RIGHT),
    "monotonicity_left": lambda r, k, b, t, l: check_monotonicity(r, k, b, LEFT),
    "descent_right": lambda r, k, b, t, l: check_descent(r, k, b, RIGHT),
    "descent_left": lambda r, k, b, t, l: check_descent(r, k, b, LEFT),
    "base_monotonicity_right": lambda r, k, b, t, l: check_base_monotonicity(r, k, b, RIGHT),
    "base_monotonicity_left": lambda r, k, b, t, l: check_base_monotonicity(r, k, b, LEFT),
    "symmetry": lambda r, k, b, t, l: check_symmetry(r, k, b),
    "isomorphism_lemma": lambda r, k, b, t, l: check_isomorphism_lemma(r, k, b),
    "invariance": lambda r, k, b, t, l: check_invariance(r, k, b),
    "witness_right": lambda r, k, b, t, l: check_witness(r, k, t, b, RIGHT),
    "witness_left": lambda r, k, b, t, l: check_witness(r, k, t, b, LEFT),
    "local_character_right": lambda r, k, b, t, l: check_local_character(r, k, l, b, RIGHT),
    "local_character_left": lambda r, k, b, t, l: check_local_character(r, k, l, b, LEFT),
    "knf_category": lambda r, k, b, t, l: check_knf_category(r, k, b),
    "nfbar_laws": lambda r, k, b, t, l: check_nfbar_laws(r, k, b),
}

DEFAULT_AXIOMS = (
    "closure",
    "existence",
    "uniqueness",
    "transitivity_right",
    "transitivity_left",
    "monotonicity_right",
    "monotonicity_left",
    "base_monotonicity_right",
    "symmetry",
    "isomorphism_lemma",
    "invariance",
    "witness_right",
    "local_character_right",
)


class UnknownAxiomError(Exception):
    """Raised for an axiom name the suite does not know."""
    pass


def run_axiom_suite(rel: IndependenceRelationSpec, klass: AbstractClass, budget: SearchBudget,
                    theta: int = 3, lambda_fn: Optional[Callable[[int], int]] = None,
                    axioms: Optional[Sequence[str]] = None, jobs: int = 1) -> SuiteReport:
    """Run the named checkers (default: the stable-independence axioms) and bundle their reports."""
    names = list(axioms or DEFAULT_AXIOMS)
    unknown = [n for n in names if n not in AXIOMS]
    if unknown:
        raise UnknownAxiomError(f"unknown axioms {unknown}; known: {sorted(AXIOMS)}")
    lam = lambda_fn or default_lambda()
    reports = ordered_map(lambda n: AXIOMS[n](rel, klass, budget, theta, lam), names, jobs)
    suite = SuiteReport(
        f"axioms:{rel.name}",
        context={"relation": rel.name, "class": klass.name, "bound": budget.max_codomain_size, "theta": theta},
    )
    for name, report in zip(names, reports):
        report.name = name
        suite.add(report)
    logger.info("suite %s on %s: %s", rel.name, klass.name, suite.matrix())
    return suite


# -----------------------------------------------------------------------------
# Canonicity
# -----------------------------------------------------------------------------

_OUT = "out-of-domain"
_NONCAND = "non-candidate"


class _ChoiceProblem:
    """
    Variables are the spans within the bound, values the amalgam keys of
    their rigid equivalence classes. Transitivity and monotonicity on both
    sides become Horn clauses over (span, key) literals.
    """

    def __init__(self, klass: AbstractClass, bound: int):
        self.klass = klass
        self.bound = bound
        self.domain = {span_key(s) for s in spans(klass, bound)}
        self.values: Dict[tuple, set] = {k: set() for k in self.domain}
        self.undecided = 0
        self._lits: Dict[Square, object] = {}
        for sq in squares(klass, bound):
            lit = self.literal(sq)
            if isinstance(lit, tuple):
                self.values[lit[0]].add(lit[1])
        self.clauses = set()
        for flip in (lambda s: s, lambda s: s.dual()):
            for N, U0, U1, U2, U3, U4 in rectangles(klass, bound):
                self._add([flip(Square(N.induced(U3), U0, U1, U2)), flip(Square(N, U2, U3, U4))],
                          flip(Square(N, U0, U1, U4)))
            for N, U0, U1, U2, U3 in frames(klass, bound):
                self._add([flip(Square(N, U0, U1, U3))], flip(Square(N, U0, U1, U2)))
        self.watch: Dict[tuple, list] = {k: [] for k in self.domain}
        for clause in self.clauses:
            for s in {p[0] for p in clause[0]}:
                self.watch[s].append(clause)
        logger.debug("choice problem: %d spans, %d clauses", len(self.domain), len(self.clauses))

    def literal(self, sq: Square):
        if sq not in self._lits:
            k = span_key(sq.span())
            if k not in self.domain:
                self._lits[sq] = _OUT
            else:
                orbit = amalgam_orbit(sq, self.klass)
                if orbit is None:
                    self.undecided += 1
                if orbit is None or len(orbit) != 1:
                    self._lits[sq] = _NONCAND
                else:
                    self._lits[sq] = (k, next(iter(orbit)))
        return self._lits[sq]

    def _add(self, premises: List[Square], conclusion: Square) -> None:
        lits = [self.literal(p) for p in premises]
        if any(not isinstance(l, tuple) for l in lits):
            return
        c = self.literal(conclusion)
        if c == _OUT:
            return
        concl = c if isinstance(c, tuple) else None
        prem = tuple(sorted(set(lits)))
        if concl is not None and concl in prem:
            return
        self.clauses.add((prem, concl))

    def propagate(self, assign: Dict[tuple, tuple], start: tuple) -> bool:
        queue = [start]
        while queue:
            s = queue.pop()
            for prem, concl in self.watch[s]:
                if any(p[0] not in assign or assign[p[0]] != p[1] for p in prem):
                    continue
                if concl is None:
                    return False
                cs, cv = concl
                if cs in assign:
                    if assign[cs] != cv:
                        return False
                elif cv in self.values[cs]:
                    assign[cs] = cv
                    queue.append(cs)
                else:
                    return False
        return True

    def solve(self, limit: int) -> Tuple[List[Dict[tuple, tuple]], bool]:
        order = sorted(self.domain, key=lambda k: (len(self.values[k]), k))
        found: List[Dict[tuple, tuple]] = []
        truncated = False

        def step(assign: Dict[tuple, tuple], i: int) -> None:
            nonlocal truncated
            if truncated:
                return
            while i < len(order) and order[i] in assign:
                i += 1
            if i == len(order):
                if len(found) >= limit:
                    truncated = True
                    return
                found.append(dict(assign))
                return
            s = order[i]
            for v in sorted(self.values[s]):
                guard().check()
                nxt = dict(assign)
                nxt[s] = v
                if self.propagate(nxt, s):
                    step(nxt, i + 1)

        step({}, 0)
        return found, truncated


def choice_relation(name: str, klass: AbstractClass, choice: Dict[tuple, tuple]) -> IndependenceRelationSpec:
    """A square is independent when its span is chosen and its rigid class is the chosen one."""

    def decide(sq: Square) -> bool:
        want = choice.get(span_key(sq.span()))
        if want is None:
            return False
        orbit = amalgam_orbit(sq, klass)
        return orbit is not None and orbit == frozenset({want})

    return IndependenceRelationSpec(name, decide, klass, choice=choice)


def _canonicity(klass: AbstractClass, budget: SearchBudget, lambda_fn, limit: int):
    problem = _ChoiceProblem(klass, budget.max_codomain_size)
    choices, truncated = problem.solve(limit)
    survivors = []
    for i, choice in enumerate(choices):
        rel = choice_relation(f"choice_{i}", klass, choice)
        if lambda_fn is not None:
            lc = check_local_character(rel, klass, lambda_fn, budget)
            if lc.verdict is Verdict.FAILS:
                continue
        survivors.append(rel)
    return survivors, problem, truncated


def canonicity_search(klass: AbstractClass, budget: SearchBudget,
                      lambda_fn: Optional[Callable[[int], int]] = None,
                      limit: int = 256) -> List[IndependenceRelationSpec]:
    """
    Every coherent choice of one rigid amalgam class per span within the
    bound that is closed under both transitivities and both monotonicities
    (and local character when ``lambda_fn`` is given).
    """
    return _canonicity(klass, budget, lambda_fn, limit)[0]


def matching_relations(rel: IndependenceRelationSpec, klass: AbstractClass, budget: SearchBudget) -> List[str]:
    """Catalog relations on the class that agree with ``rel`` on every square within the bound."""
    out = []
    for name in relations_for(klass):
        if differential_compare(rel, make_relation(name, klass), klass, budget).holds:
            out.append(name)
    return out


def canonicity_report(klass: AbstractClass, budget: SearchBudget,
                      lambda_fn: Optional[Callable[[int], int]] = None, limit: int = 256) -> CheckReport:
    """HOLDS when exactly one relation survives; each survivor is listed with its catalog matches."""
    bound = budget.max_codomain_size
    report = CheckReport("canonicity")
    survivors, problem, truncated = _canonicity(klass, budget, lambda_fn, limit)
    report.count(len(problem.domain))
    report.stats["survivors"] = len(survivors)
    report.stats["clauses"] = len(problem.clauses)
    listing = [{"name": r.name, "matches": matching_relations(r, klass, budget)} for r in survivors]
    if truncated:
        report.inconclusive(f"more than {limit} coherent choices")
    if problem.undecided:
        report.inconclusive(f"{problem.undecided} squares without a decidable amalgam class")
    if len(survivors) != 1:
        report.fail({"survivors": listing}, f"{len(survivors)} coherent choices survive at bound {bound}")
    else:
        report.record("canonicity", "PASS", f"unique survivor matches {listing[0]['matches']}")
        report.witnesses.append({"survivors": listing})
    return report.finish(bound)


# -----------------------------------------------------------------------------
# Sweeps across modules
# -----------------------------------------------------------------------------

def effective_unions_bridge(klass: AbstractClass, bound: int) -> CheckReport:
    """Effective unions hold at the bound exactly when pullback squares amalgamate uniquely."""
    report = CheckReport("effective_unions_bridge")
    eu = check_effective_unions(klass, bound)
    uq = check_uniqueness(make_relation("pullback_rel", klass), klass, SearchBudget(max(bound, 1)))
    report.count()
    report.stats["effective_unions"] = eu.verdict.value
    report.stats["pullback_uniqueness"] = uq.verdict.value
    if Verdict.INCONCLUSIVE in (eu.verdict, uq.verdict):
        report.inconclusive("one side of the bridge is undecided")
    elif eu.holds != uq.holds:
        report.fail({"effective_unions": eu.to_dict(), "uniqueness": uq.to_dict()},
                    "effective unions and uniqueness of pullback squares disagree")
    return report.finish(bound)


LEMMA_PREMISES = ("closure", "existence", "uniqueness", "transitivity_right")
LEMMA_CONSEQUENCES = ("monotonicity_right", "descent_right", "base_monotonicity_right", "isomorphism_lemma")


def lemma_implication_sweep(bound: int, classes: Iterable[str] = ("finset", "graph", "klocal_graph:2"),
                            lambda_fn: Optional[Callable[[int], int]] = None) -> CheckReport:
    """
    For every catalog relation on every listed class: closure, existence,
    uniqueness and right transitivity imply the derived axioms, and adding
    local character implies symmetry.
    """
    report = CheckReport("lemma_implications")
    budget = SearchBudget(max(bound, 1))
    lam = lambda_fn or default_lambda()
    for spec in classes:
        klass = parse_class_spec(spec)
        for name in relations_for(klass):
            rel = make_relation(name, klass)
            tag = f"{name}@{klass.name}"
            premises = run_axiom_suite(rel, klass, budget, axioms=LEMMA_PREMISES)
            if premises.verdict is not Verdict.HOLDS:
                report.record(tag, "SKIP", f"premises {premises.matrix()}")
                continue
            report.count()
            consequences = run_axiom_suite(rel, klass, budget, axioms=LEMMA_CONSEQUENCES)
            broken = [n for n, v in consequences.matrix().items() if v != Verdict.HOLDS.value]
            if broken:
                report.fail({"relation": name, "class": klass.name, "broken": broken}, f"{tag}: {broken} do not hold")
                continue
            lc = check_local_character(rel, klass, lam, budget)
            if lc.holds and not check_symmetry(rel, klass, budget).holds:
                report.fail({"relation": name, "class": klass.name, "broken": ["symmetry"]},
                            f"{tag}: local character without symmetry")
                continue
            report.record(tag, "PASS", "derived axioms hold")
    return report.finish(bound)


def stability_dichotomy(rel: IndependenceRelationSpec, klass: AbstractClass, bound: int,
                        max_alpha: int = 2, length: int = 3, order_bound: int = 6) -> CheckReport:
    """
    A relation passing the stable suite at ``bound`` leaves no order property
    among members of size <= ``order_bound``.
    """
    report = CheckReport("stability_dichotomy")
    suite = run_axiom_suite(rel, klass, SearchBudget(max(bound, 1)))
    if suite.verdict is not Verdict.HOLDS:
        report.record("stability_dichotomy", "SKIP", f"{rel.name} is not stable at bound {bound}")
        return report.finish(bound)
    report.stats["order_bound"] = order_bound
    report.stats["searched"] = []
    for alpha in range(1, max_alpha + 1):
        report.count()
        report.stats["searched"].append({"alpha": alpha, "length": length})
        witness = find_order_property(klass, alpha, length, order_bound)
        if witness is not None:
            report.fail(dict(witness.to_dict(), alpha=alpha),
                        f"stable relation {rel.name} coexists with an order property")
            break
    return report.finish(bound)
