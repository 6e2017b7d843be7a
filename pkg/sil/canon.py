"""
SIL — Canonical Forms
Isomorphism-invariant encodings of marked finite structures.

Colour refinement over the structure's facts, then individualisation of
the smallest non-singleton cell, keeping the least leaf encoding. Two leaves
with one encoding give an automorphism; it prunes the children in one orbit
of the current path's stabiliser, and the search backs up to where the two
leaves diverged.
"""

from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from .limits import guard
from .structures import FinStructure

Marks = Tuple[frozenset, ...]


class CanonicalForm:
    """An encoding plus the labeling (element -> canonical position) that produced it."""

    __slots__ = ("encoding", "labeling")

    def __init__(self, encoding: tuple, labeling: Dict[int, int]):
        self.encoding = encoding
        self.labeling = labeling

    def order(self) -> List[int]:
        """Elements listed by canonical position."""
        return sorted(self.labeling, key=self.labeling.__getitem__)

    def __repr__(self) -> str:
        return f"<CanonicalForm n={self.encoding[0]}>"


def _normalise_marks(marks: Iterable[Iterable[int]]) -> Marks:
    return tuple(frozenset(m) for m in marks)


class _Refiner:

    def __init__(self, universe: Tuple[int, ...], facts: Tuple[Tuple[str, tuple], ...], marks: Marks):
        self.universe = universe
        self.facts = facts
        self.marks = marks
        self.fact_set = frozenset(facts)
        self.incidence: Dict[int, List[Tuple[int, int]]] = {x: [] for x in universe}
        self.touching: Dict[int, List[int]] = {x: [] for x in universe}
        for i, (_, t) in enumerate(facts):
            for pos, x in enumerate(t):
                self.incidence[x].append((i, pos))
            for x in set(t):
                self.touching[x].append(i)
        self._twins: Dict[Tuple[int, int], bool] = {}

    def initial(self) -> Dict[int, int]:
        sig = {x: tuple(x in m for m in self.marks) for x in self.universe}
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        return self.refine({x: ranks[sig[x]] for x in self.universe})

    def refine(self, colors: Dict[int, int]) -> Dict[int, int]:
        cells = len(set(colors.values()))
        while True:
            sig = {}
            for x in self.universe:
                around = sorted(
                    (self.facts[i][0], pos, tuple(colors[a] for a in self.facts[i][1]))
                    for i, pos in self.incidence[x]
                )
                sig[x] = (colors[x], tuple(around))
            ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
            colors = {x: ranks[sig[x]] for x in self.universe}
            if len(ranks) == cells:
                return colors
            cells = len(ranks)

    def twins(self, x: int, y: int) -> bool:
        """Is the transposition (x y) an automorphism of the marked structure?"""
        key = (x, y) if x < y else (y, x)
        if key not in self._twins:
            swap = {x: y, y: x}
            ok = all(m_has_both_or_neither(m, x, y) for m in self.marks)
            if ok:
                for i in set(self.touching[x]) | set(self.touching[y]):
                    name, t = self.facts[i]
                    if (name, tuple(swap.get(a, a) for a in t)) not in self.fact_set:
                        ok = False
                        break
            self._twins[key] = ok
        return self._twins[key]

    def encode(self, colors: Dict[int, int]) -> tuple:
        facts = tuple(sorted((name, tuple(colors[a] for a in t)) for name, t in self.facts))
        marks = tuple(tuple(sorted(colors[a] for a in m)) for m in self.marks)
        return (len(self.universe), facts, marks)

    def search(self, colors: Dict[int, int]) -> Tuple[tuple, Dict[int, int]]:
        """The least leaf encoding below ``colors`` and the labeling that gives it."""
        self.best: Optional[Tuple[tuple, Dict[int, int]]] = None
        self.leaves: Dict[tuple, Tuple[tuple, Dict[int, int]]] = {}
        self.automorphisms: List[Dict[int, int]] = []
        self._descend(colors, ())
        return self.best

    def _descend(self, colors: Dict[int, int], path: tuple) -> Optional[int]:
        """Explore one node; a returned depth asks every deeper node to back up."""
        guard().check()
        cells: Dict[int, List[int]] = {}
        for x in self.universe:
            cells.setdefault(colors[x], []).append(x)
        open_cells = [c for c, xs in cells.items() if len(xs) > 1]
        if not open_cells:
            return self._leaf(colors, path)
        target = min(open_cells, key=lambda c: (len(cells[c]), c))
        tried: List[int] = []
        for x in sorted(cells[target]):
            if any(self.twins(x, y) for y in tried) or self._in_orbit(x, tried, path):
                continue
            tried.append(x)
            split = {e: 2 * c + (0 if e == x else 1) for e, c in colors.items()}
            back_to = self._descend(self.refine(split), path + (x,))
            if back_to is not None and back_to < len(path):
                return back_to
        return None

    def _leaf(self, colors: Dict[int, int], path: tuple) -> Optional[int]:
        encoding = self.encode(colors)
        if self.best is None or encoding < self.best[0]:
            self.best = (encoding, colors)
        earlier = self.leaves.get(encoding)
        if earlier is None:
            self.leaves[encoding] = (path, colors)
            return None
        earlier_path, earlier_colors = earlier
        at = {c: e for e, c in colors.items()}
        self.automorphisms.append({e: at[c] for e, c in earlier_colors.items()})
        depth = 0
        while earlier_path[depth] == path[depth]:
            depth += 1
        return depth

    def _in_orbit(self, x: int, tried: List[int], path: tuple) -> bool:
        """Is x in the orbit of a tried sibling under automorphisms fixing the path?"""
        if not tried:
            return False
        gens = [g for g in self.automorphisms if all(g[p] == p for p in path)]
        if not gens:
            return False
        orbit = {x}
        frontier = [x]
        while frontier:
            nxt = []
            for e in frontier:
                for g in gens:
                    if g[e] not in orbit:
                        orbit.add(g[e])
                        nxt.append(g[e])
            frontier = nxt
        return any(y in orbit for y in tried)


def m_has_both_or_neither(mark: frozenset, x: int, y: int) -> bool:
    return (x in mark) == (y in mark)


@lru_cache(maxsize=200000)
def _canonical(structure: FinStructure, marks: Marks) -> CanonicalForm:
    refiner = _Refiner(structure.universe, structure.facts(), marks)
    encoding, labeling = refiner.search(refiner.initial())
    return CanonicalForm(encoding, dict(labeling))


def canonical_form(structure: FinStructure, marks: Iterable[Iterable[int]] = ()) -> CanonicalForm:
    """
    Canonical form of a structure with an ordered list of marks (unary
    predicates; a singleton mark names an individual element). Two marked
    structures are isomorphic iff their encodings are equal.
    """
    return _canonical(structure, _normalise_marks(marks))


def canonical_key(structure: FinStructure, marks: Iterable[Iterable[int]] = ()) -> tuple:
    return canonical_form(structure, marks).encoding


def canonical_copy(structure: FinStructure) -> FinStructure:
    """The structure relabeled onto 0..n-1 by its canonical labeling."""
    return structure.relabel(canonical_form(structure).labeling)


# -----------------------------------------------------------------------------
# Isomorphism search on incidence graphs
# -----------------------------------------------------------------------------

def incidence_graph(structure: FinStructure) -> nx.DiGraph:
    """Bipartite digraph: one node per element, one per fact, edges labeled by position."""
    G = nx.DiGraph()
    for x in structure.universe:
        G.add_node(("e", x), kind="element")
    for i, (name, t) in enumerate(structure.facts()):
        G.add_node(("f", i), kind=name)
        positions: Dict[int, set] = {}
        for pos, x in enumerate(t):
            positions.setdefault(x, set()).add(pos)
        for x, ps in positions.items():
            G.add_edge(("f", i), ("e", x), pos=frozenset(ps))
    return G


def find_isomorphism(M: FinStructure, N: FinStructure) -> Optional[Dict[int, int]]:
    matcher = DiGraphMatcher(
        incidence_graph(M),
        incidence_graph(N),
        node_match=lambda a, b: a["kind"] == b["kind"],
        edge_match=lambda a, b: a["pos"] == b["pos"],
    )
    if not matcher.is_isomorphic():
        return None
    return {a[1]: b[1] for a, b in matcher.mapping.items() if a[0] == "e"}
