"""
SIL — Workbench Controller

Runs every workbench request through a fixed sequence of states so each
run is logged and reproducible.

States:
  IDLE → LOAD_CLASS → BUILD_RELATION → SEARCH → VERIFY → REPORT → IDLE
                                                     ↓
                                                HALT → IDLE

BUILD_RELATION is skipped by requests that involve no relation. On any
error the controller records the reason, passes through HALT back to IDLE
and re-raises.
"""

import datetime
import logging
from enum import Enum, auto
from typing import Callable, Optional

from .catalog import CLASS_NAMES, RELATIONS, make_relation, parse_class_spec, relations_for
from .colimits import check_effective_unions, pullback, pushout, verify_ringel
from .diagrams import SearchBudget
from .experiments import canonicity_report, differential_compare, run_axiom_suite
from .galois import check_tameness, count_types, find_order_property, tameness_sweep
from .limits import BudgetExhausted, MemoryGuard, set_guard
from .profile_loader import Profile, ProfileLoader, ProfileLoadError, fallback_profile
from .reporting import CheckReport, SuiteReport
from .structure_io import load_cospan, load_span, load_structure
from .structures import AbstractClass, check_coherence

logger = logging.getLogger(__name__)


class State(Enum):
    IDLE = auto()
    LOAD_CLASS = auto()
    BUILD_RELATION = auto()
    SEARCH = auto()
    VERIFY = auto()
    REPORT = auto()
    HALT = auto()


class Workbench:
    """
    The controller behind the command line.

    Settings resolve as: explicit argument > SIL_MAX_MEM (memory only) >
    profile > built-in fallback profile.
    """

    def __init__(
        self,
        profiles_dir: str,
        profile_id: str = "default",
        max_depth: Optional[int] = None,
        jobs: Optional[int] = None,
        max_mem_mib: Optional[float] = None,
    ):
        self.profiles_dir = profiles_dir
        self._loader = ProfileLoader(profiles_dir)
        self._state: State = State.IDLE
        self._state_log: list = []
        self._halt_reason: Optional[str] = None

        self.profile: Profile = self._load_profile(profile_id)
        self.max_depth = max_depth if max_depth is not None else self.profile.max_depth
        self.jobs = jobs if jobs is not None else self.profile.jobs
        if max_mem_mib is not None:
            set_guard(MemoryGuard(max_mem_mib))
        else:
            set_guard(MemoryGuard.from_env(self.profile.max_mem_mib))

    # -------------------------------------------------------------------------
    # Public Interface
    # -------------------------------------------------------------------------

    def budget(self, max_size: int) -> SearchBudget:
        return SearchBudget(max_size, max_depth=self.max_depth, jobs=self.jobs)

    def check_axioms(self, class_spec: str, relation: str, max_size: int,
                     axioms: Optional[list] = None, theta: Optional[int] = None) -> SuiteReport:
        """Run the axiom suite for one relation on one class."""

        def work():
            klass = self._load_class(class_spec)
            rel = self._build_relation(relation, klass)
            self._transition(State.SEARCH)
            return run_axiom_suite(
                rel, klass, self.budget(max_size),
                theta=theta if theta is not None else self.profile.theta,
                lambda_fn=self.profile.lambda_fn(),
                axioms=axioms or self.profile.axioms,
                jobs=self.jobs,
            )

        return self._run("axioms", work)

    def compare(self, class_spec: str, rel_a: str, rel_b: str, max_size: int) -> CheckReport:
        def work():
            klass = self._load_class(class_spec)
            a = self._build_relation(rel_a, klass)
            b = make_relation(rel_b, klass)
            self._transition(State.SEARCH)
            return differential_compare(a, b, klass, self.budget(max_size))

        return self._run("compare", work)

    def canonicity_search(self, class_spec: str, max_size: int, limit: int = 256,
                          local_character: bool = True) -> CheckReport:
        def work():
            klass = self._load_class(class_spec)
            self._transition(State.SEARCH)
            lam = self.profile.lambda_fn() if local_character else None
            return canonicity_report(klass, self.budget(max_size), lam, limit)

        return self._run("canonicity", work)

    def ringel(self, class_spec: str, max_size: int) -> CheckReport:
        def work():
            klass = self._load_class(class_spec)
            self._transition(State.SEARCH)
            return verify_ringel(klass, max_size)

        return self._run("ringel", work)

    def effective_unions(self, class_spec: str, max_size: int) -> CheckReport:
        def work():
            klass = self._load_class(class_spec)
            self._transition(State.SEARCH)
            return check_effective_unions(klass, max_size)

        return self._run("effective_unions", work)

    def coherence(self, class_spec: str, max_size: int) -> CheckReport:
        def work():
            klass = self._load_class(class_spec)
            self._transition(State.SEARCH)
            return check_coherence(klass, max_size)

        return self._run("coherence", work)

    def tameness(self, class_spec: str, tuple_len: int, chi: int, max_size: int,
                 base_path: Optional[str] = None) -> CheckReport:
        """Bounded tameness over one base structure, or over every member within the bound."""

        def work():
            klass = self._load_class(class_spec)
            self._transition(State.SEARCH)
            if base_path is not None:
                return check_tameness(klass, load_structure(base_path), tuple_len, chi, max_size)
            return tameness_sweep(klass, tuple_len, chi, max_size)

        return self._run("tameness", work)

    def order_property(self, class_spec: str, tuple_len: int, length: int, max_size: int) -> dict:
        def work():
            klass = self._load_class(class_spec)
            self._transition(State.SEARCH)
            witness = find_order_property(klass, tuple_len, length, max_size)
            self._transition(State.VERIFY)
            return {
                "name": "order_property",
                "class": klass.name,
                "tuple_len": tuple_len,
                "length": length,
                "bound": max_size,
                "found": witness is not None,
                "witness": witness.to_dict() if witness is not None else None,
            }

        return self._run("order_property", work, verify=False)

    def count_types(self, class_spec: str, base_path: str, tuple_len: int,
                    bound: Optional[int] = None) -> dict:
        def work():
            klass = self._load_class(class_spec)
            M = load_structure(base_path)
            if not klass.is_member(M):
                raise ValueError(f"{base_path} is not a member of class '{klass.name}'")
            self._transition(State.SEARCH)
            result = count_types(klass, M, tuple_len, bound)
            self._transition(State.VERIFY)
            return dict(result.to_dict(), name="count_types", **{"class": klass.name, "tuple_len": tuple_len})

        return self._run("count_types", work, verify=False)

    def colimit(self, operation: str, input_path: str, class_spec: Optional[str] = None) -> dict:
        """Pushout of a span file, or pullback of a cospan (or diagram) file."""

        def work():
            if operation == "pushout":
                if class_spec is None:
                    raise ValueError("pushout needs --class")
                klass = self._load_class(class_spec)
                span = load_span(input_path)
                self._transition(State.SEARCH)
                result = pushout(span, klass)
                self._transition(State.VERIFY)
                return {"name": "pushout", "class": klass.name, "cocone": result.cocone.to_dict()}
            if operation == "pullback":
                g1, g2 = load_cospan(input_path)
                self._transition(State.SEARCH)
                span = pullback(g1, g2)
                self._transition(State.VERIFY)
                return {"name": "pullback", "span": span.to_dict()}
            raise ValueError(f"unknown colimit operation '{operation}'")

        return self._run(f"colimit:{operation}", work, verify=False)

    def catalog(self) -> dict:
        """Known classes and relations, with the class kinds each relation applies to."""
        self._transition(State.REPORT)
        self._transition(State.IDLE)
        return {
            "classes": sorted(CLASS_NAMES),
            "relations": {name: {"description": e.description, "kinds": list(e.kinds)}
                          for name, e in sorted(RELATIONS.items())},
            "profiles": self._loader.list_available(),
        }

    def relations_on(self, class_spec: str) -> list:
        return relations_for(parse_class_spec(class_spec))

    def get_state(self) -> State:
        """Return the current FSM state."""
        return self._state

    def get_state_log(self) -> list:
        """Return the full state transition log."""
        return list(self._state_log)

    def get_halt_reason(self) -> Optional[str]:
        return self._halt_reason

    # -------------------------------------------------------------------------
    # Internal Methods
    # -------------------------------------------------------------------------

    def _load_profile(self, profile_id: str) -> Profile:
        try:
            return self._loader.load(profile_id)
        except ProfileLoadError:
            if profile_id != "default":
                raise
            logger.info("no default profile in %s, using the built-in one", self.profiles_dir)
            return fallback_profile()

    def _load_class(self, class_spec: str) -> AbstractClass:
        self._transition(State.LOAD_CLASS)
        return parse_class_spec(class_spec)

    def _build_relation(self, name: str, klass: AbstractClass):
        self._transition(State.BUILD_RELATION)
        return make_relation(name, klass)

    def _run(self, label: str, work: Callable, verify: bool = True):
        self._halt_reason = None
        try:
            result = work()
        except BudgetExhausted as e:
            logger.warning("%s: %s", label, e)
            self._transition(State.REPORT)
            self._transition(State.IDLE)
            return CheckReport(label).inconclusive(f"search aborted: {e}").finish()
        except Exception as e:
            self._halt(f"{type(e).__name__}: {e}")
            raise
        if verify:
            self._transition(State.VERIFY)
        self._transition(State.REPORT)
        self._transition(State.IDLE)
        return result

    def _halt(self, reason: str) -> None:
        logger.info("halt: %s", reason)
        self._halt_reason = reason
        self._transition(State.HALT)
        self._transition(State.IDLE)

    def _transition(self, new_state: State) -> None:
        self._state_log.append({
            "from": self._state.name,
            "to": new_state.name,
            "timestamp": self._now()
        })
        self._state = new_state

    @staticmethod
    def _now() -> str:
        return datetime.datetime.now(datetime.timezone.utc).isoformat()
