"""
SIL — Galois Types
Orbital types of tuples over a base at finite scale: equality, counting,
bounded tameness and a search for the order property.

Two pointed extensions (M, N, a) and (M, N', a') have the same type when
some amalgam of N and N' over M sends a and a' to the same tuple. In
classes with closures and amalgamation this is decided by a certificate:
the isomorphism type of the closure of M and the tuple, with M's elements
and the tuple's positions named.
"""

import itertools
import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .canon import canonical_key
from .diagrams import SearchBudget, Span, extensions, iter_amalgams
from .limits import guard
from .reporting import CheckReport, Verdict
from .structures import AbstractClass, Embedding, FinStructure, inclusion

logger = logging.getLogger(__name__)


class BaseMismatchError(Exception):
    """Raised when two pointed extensions do not share their base."""
    pass


class PointedExtension:
    """A tuple ``abar`` of N, with M strong in N via ``embedding`` (inclusion by default)."""

    def __init__(self, M: FinStructure, N: FinStructure, abar: Sequence[int],
                 embedding: Optional[Embedding] = None):
        self.M = M
        self.N = N
        self.abar = tuple(abar)
        self.embedding = embedding if embedding is not None else inclusion(M, N)
        if not set(self.abar) <= N.elements:
            raise ValueError(f"tuple {self.abar} is not inside N")

    def to_dict(self) -> dict:
        return {"M": self.M.to_dict(), "N": self.N.to_dict(), "abar": list(self.abar),
                "embedding": self.embedding.to_dict()["map"]}

    def __repr__(self) -> str:
        return f"<PointedExtension |M|={self.M.size} |N|={self.N.size} abar={self.abar}>"


# -----------------------------------------------------------------------------
# Certificates
# -----------------------------------------------------------------------------

def set_type_certificate(klass: AbstractClass, N: FinStructure, B: Iterable[int],
                         abar: Sequence[int]) -> Optional[tuple]:
    """Type of ``abar`` over the set B inside N; B's elements are named by id order."""
    B = sorted(B)
    C = klass.closure(N, set(B) | set(abar))
    if C is None:
        return None
    return canonical_key(N.induced(C), [{b} for b in B] + [{a} for a in abar])


def type_certificate(klass: AbstractClass, p: PointedExtension) -> Optional[tuple]:
    names = [p.embedding(m) for m in p.M.universe]
    C = klass.closure(p.N, set(names) | set(p.abar))
    if C is None:
        return None
    return canonical_key(p.N.induced(C), [{x} for x in names] + [{a} for a in p.abar])


def _identified(p: PointedExtension, q: PointedExtension, klass: AbstractClass, size: int) -> bool:
    """Some amalgam of size <= size sends p's tuple and q's tuple to one tuple."""
    span = Span(p.embedding, q.embedding)
    for d in iter_amalgams(span, klass, size):
        guard().check()
        if all(d.g1(a) == d.g2(b) for a, b in zip(p.abar, q.abar)):
            return True
    return False


def _search_identifying(p: PointedExtension, q: PointedExtension, klass: AbstractClass,
                        budget: SearchBudget) -> bool:
    """
    Chains p ~ r1 ~ ... ~ q of one-step identifications, at most
    ``budget.max_depth`` steps long, through realizations over the same base
    no larger than p's or q's extension.
    """
    size = budget.max_codomain_size
    if _identified(p, q, klass, size):
        return True
    pool = realizations(klass, p.M, len(p.abar), max(klass.size_of(p.N), klass.size_of(q.N)))
    frontier = [p]
    seen = set()
    for _ in range(2, budget.max_depth + 1):
        nxt = []
        for a in frontier:
            for i, b in enumerate(pool):
                if i in seen or not _identified(a, b, klass, size):
                    continue
                if _identified(b, q, klass, size):
                    return True
                seen.add(i)
                nxt.append(b)
        frontier = nxt
    return False


def gtp_equal(p: PointedExtension, q: PointedExtension, klass: AbstractClass,
              budget: Optional[SearchBudget] = None, method: str = "auto") -> Verdict:
    """
    Decide gtp(p) = gtp(q). ``method`` is "certificate", "search" or "auto"
    (certificates on exact classes, amalgam search elsewhere).
    """
    if p.M != q.M:
        raise BaseMismatchError("pointed extensions must share their base")
    if method not in ("auto", "certificate", "search"):
        raise ValueError(f"unknown method {method!r}")
    if len(p.abar) != len(q.abar):
        return Verdict.FAILS
    if p.N == q.N and p.abar == q.abar and p.embedding == q.embedding:
        return Verdict.HOLDS
    if method == "certificate" or (method == "auto" and klass.exact):
        cp, cq = type_certificate(klass, p), type_certificate(klass, q)
        if cp is not None and cq is not None:
            return Verdict.of(cp == cq)
        if method == "certificate":
            return Verdict.INCONCLUSIVE
    budget = budget or SearchBudget(max(klass.joint_bound(klass.size_of(p.N), klass.size_of(q.N)), 1))
    if _search_identifying(p, q, klass, budget):
        return Verdict.HOLDS
    return Verdict.FAILS if klass.exact else Verdict.INCONCLUSIVE


# -----------------------------------------------------------------------------
# Counting
# -----------------------------------------------------------------------------

class TypeCount:
    """Number of types realized at ``bound``; ``stable`` when bound + 1 gives the same count."""

    def __init__(self, count: int, bound: int, stable: bool, representatives: List[PointedExtension]):
        self.count = count
        self.bound = bound
        self.stable = stable
        self.representatives = representatives

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "bound": self.bound,
            "stable": self.stable,
            "representatives": [{"N": p.N.to_dict(), "abar": list(p.abar)} for p in self.representatives],
        }

    def __repr__(self) -> str:
        return f"<TypeCount {self.count} bound={self.bound} stable={self.stable}>"


def realizations(klass: AbstractClass, M: FinStructure, alpha: int, bound: int) -> List[PointedExtension]:
    """Every alpha-tuple of M or of a strong extension of M within the bound."""
    out = []
    for N in [M] + extensions(klass, M, bound):
        for abar in itertools.product(N.universe, repeat=alpha):
            out.append(PointedExtension(M, N, abar))
    return out


def _classify(klass: AbstractClass, points: List[PointedExtension],
              budget: Optional[SearchBudget]) -> Tuple[List[PointedExtension], bool]:
    """One representative per type; the flag is False if some comparison was undecided."""
    reps: List[PointedExtension] = []
    certs: Dict[tuple, PointedExtension] = {}
    decided = True
    for p in points:
        c = type_certificate(klass, p) if klass.exact else None
        if c is not None:
            if c not in certs:
                certs[c] = p
                reps.append(p)
            continue
        verdicts = [gtp_equal(p, r, klass, budget, method="search") for r in reps]
        if Verdict.HOLDS in verdicts:
            continue
        if Verdict.INCONCLUSIVE in verdicts:
            decided = False
        reps.append(p)
    return reps, decided


def count_types(klass: AbstractClass, M: FinStructure, alpha: int, bound: Optional[int] = None,
                budget: Optional[SearchBudget] = None) -> TypeCount:
    """
    Count types of alpha-tuples over M realized in extensions of size <= bound
    (default: size of M plus alpha). The count is flagged unstable when one
    more element of room changes it.
    """
    if bound is None:
        bound = klass.size_of(M) + alpha
    reps, decided = _classify(klass, realizations(klass, M, alpha, bound), budget)
    wider, decided_wider = _classify(klass, realizations(klass, M, alpha, bound + 1), budget)
    stable = decided and decided_wider and len(wider) == len(reps)
    logger.debug("count_types %s |M|=%d alpha=%d bound=%d -> %d", klass.name, M.size, alpha, bound, len(reps))
    return TypeCount(len(reps), bound, stable, reps)


# -----------------------------------------------------------------------------
# Tameness
# -----------------------------------------------------------------------------

def check_tameness(klass: AbstractClass, M: FinStructure, alpha: int, chi: int,
                   bound: Optional[int] = None) -> CheckReport:
    """Distinct types over M already differ over some A inside M with |A| < chi."""
    report = CheckReport("tameness")
    if bound is None:
        bound = klass.size_of(M) + alpha
    points = realizations(klass, M, alpha, bound)
    by_cert: Dict[tuple, PointedExtension] = {}
    for p in points:
        c = type_certificate(klass, p)
        if c is None:
            return report.inconclusive(f"{klass.name} has no closure for a tuple over M").finish(bound)
        by_cert.setdefault(c, p)
    small = [frozenset(A) for k in range(min(chi, M.size + 1)) for A in itertools.combinations(M.universe, k)]
    types = list(by_cert.values())
    for p, q in itertools.combinations(types, 2):
        guard().check()
        report.count()
        if not any(set_type_certificate(klass, p.N, A, p.abar) != set_type_certificate(klass, q.N, A, q.abar)
                   for A in small):
            return report.fail(
                {"M": M.to_dict(), "p": p.to_dict(), "q": q.to_dict(), "chi": chi},
                f"types differ over M but agree over every subset of size < {chi}",
            ).finish(bound)
    return report.finish(bound)


def tameness_sweep(klass: AbstractClass, alpha: int, chi: int, bound: int) -> CheckReport:
    """check_tameness over every member M with size(M) + alpha <= bound."""
    report = CheckReport("tameness")
    for M in klass.members(bound):
        if klass.size_of(M) + alpha > bound:
            continue
        report.absorb(check_tameness(klass, M, alpha, chi, bound))
        if report.verdict is Verdict.FAILS:
            break
    return report.finish(bound)


# -----------------------------------------------------------------------------
# Order property
# -----------------------------------------------------------------------------

class OrderWitness:
    """A structure and tuples a_0 .. a_{L-1} ordered by their pair types over the empty set."""

    def __init__(self, M: FinStructure, tuples: List[tuple]):
        self.M = M
        self.tuples = tuples

    def to_dict(self) -> dict:
        return {"structure": self.M.to_dict(), "tuples": [list(t) for t in self.tuples]}

    def __repr__(self) -> str:
        return f"<OrderWitness |M|={self.M.size} tuples={self.tuples}>"


def _pair_type(klass: AbstractClass, N: FinStructure, a: tuple, b: tuple) -> Optional[tuple]:
    return set_type_certificate(klass, N, (), a + b)


def _pair_types(klass: AbstractClass, N: FinStructure, tuples: List[tuple], new: tuple):
    forward, backward = set(), set()
    for t in tuples:
        f, b = _pair_type(klass, N, t, new), _pair_type(klass, N, new, t)
        if f is None or b is None:
            return None
        forward.add(f)
        backward.add(b)
    return forward, backward


def is_order_witness(klass: AbstractClass, M: FinStructure, tuples: List[tuple]) -> bool:
    """Every type of (a_i, a_j) with i < j differs from every type of (a_j, a_i)."""
    forward, backward = set(), set()
    for i, j in itertools.combinations(range(len(tuples)), 2):
        f = _pair_type(klass, M, tuples[i], tuples[j])
        b = _pair_type(klass, M, tuples[j], tuples[i])
        if f is None or b is None:
            return False
        forward.add(f)
        backward.add(b)
    return not forward & backward


def find_order_property(klass: AbstractClass, alpha: int, length: int, size_bound: int) -> Optional[OrderWitness]:
    """
    Depth-first search for an order witness of the given length inside members
    of size <= size_bound. Each step adds one tuple of fresh elements through
    a strong extension generated by the structure so far and that tuple, and
    keeps the forward and backward pair types apart.
    """
    slack = klass.closure_slack(alpha)
    slack = alpha if slack is None else slack
    members = klass.members(size_bound)
    if not members:
        return None
    # smallest member: the empty structure, or the trivial one when constants exist
    start = members[0]
    seen = set()

    def step(N: FinStructure, tuples: List[tuple], forward: set, backward: set) -> Optional[OrderWitness]:
        if len(tuples) == length:
            return OrderWitness(N, tuples)
        room = min(size_bound, klass.size_of(N) + alpha + slack)
        for N2 in extensions(klass, N, room):
            fresh = [x for x in N2.universe if x not in N.elements]
            for abar in itertools.permutations(fresh, alpha):
                guard().check()
                if klass.closure(N2, N.elements | set(abar)) != N2.elements:
                    continue
                key = canonical_key(N2, [{x} for t in tuples + [abar] for x in t])
                if key in seen:
                    continue
                seen.add(key)
                types = _pair_types(klass, N2, tuples, abar)
                if types is None:
                    continue
                f2, b2 = forward | types[0], backward | types[1]
                if f2 & b2:
                    continue
                found = step(N2, tuples + [abar], f2, b2)
                if found is not None:
                    return found
        return None

    return step(start, [], set(), set())
