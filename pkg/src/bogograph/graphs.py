"""Weighted multigraphs with a polarization: the combinatorial substrate.

A graph here is always a *model*: finitely many vertices, edges with exact
rational or symbolic lengths, loops and parallel edges allowed, connected.
A polarized graph additionally carries a vertex weight ``q >= 0`` whose
canonical divisor ``K(p) = 2q(p) + valence(p) - 2`` must be effective.

Vertex and edge ids are opaque strings; everything is ordered by id so all
derived data (variable slots, keys, reports) is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import (
    GraphValidationError,
    LoopContraction,
    NonEffectiveCanonicalDivisor,
    NumericLengthsRequired,
    ParseError,
    SameVertex,
)
from .rationals import format_rational, parse_rational


@dataclass(frozen=True)
class SymbolicLength:
    """The length variable l_<index>; index is 1-based."""

    index: int


Length = Union[Fraction, SymbolicLength]


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    length: Length

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def endpoints(self) -> tuple[str, str]:
        """Endpoints in id order; for a loop both are the base point."""
        return (self.u, self.v) if self.u <= self.v else (self.v, self.u)


class WeightedMultigraph:
    """Immutable by convention: never mutate vertices/edges after creation."""

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge]):
        self.vertices: tuple[str, ...] = tuple(sorted(vertices))
        self.edges: tuple[Edge, ...] = tuple(sorted(edges, key=lambda e: e.id))
        self._validate()
        self.edge_index: dict[str, int] = {e.id: i for i, e in enumerate(self.edges)}
        self._by_vertex: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            self._by_vertex[e.u].append(e)
            if not e.is_loop:
                self._by_vertex[e.v].append(e)

    def _validate(self) -> None:
        if not self.vertices:
            raise GraphValidationError("graph needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphValidationError("duplicate vertex ids")
        seen = set()
        vset = set(self.vertices)
        for e in self.edges:
            if e.id in seen:
                raise GraphValidationError(f"duplicate edge id {e.id!r}")
            seen.add(e.id)
            if e.u not in vset or e.v not in vset:
                raise GraphValidationError(f"edge {e.id!r} has unknown endpoint")
            if isinstance(e.length, SymbolicLength):
                if e.length.index < 1:
                    raise GraphValidationError(f"edge {e.id!r}: variable index must be >= 1")
            elif isinstance(e.length, Fraction):
                if e.length <= 0:
                    raise GraphValidationError(f"edge {e.id!r}: length must be positive")
            else:
                raise GraphValidationError(f"edge {e.id!r}: bad length {e.length!r}")
        if not _connected(self.vertices, [(e.u, e.v) for e in self.edges]):
            raise GraphValidationError("graph is not connected")

    # ------------------------------------------------------------------

    def edge(self, edge_id: str) -> Edge:
        return self.edges[self.edge_index[edge_id]]

    def incident(self, vertex: str) -> list[Edge]:
        """Edges touching the vertex; loops listed once."""
        return list(self._by_vertex[vertex])

    def valence(self, vertex: str) -> int:
        """Metric valence: a loop contributes 2."""
        total = 0
        for e in self._by_vertex[vertex]:
            total += 2 if e.is_loop else 1
        return total

    @property
    def is_numeric(self) -> bool:
        return all(isinstance(e.length, Fraction) for e in self.edges)

    @property
    def is_symbolic(self) -> bool:
        return all(isinstance(e.length, SymbolicLength) for e in self.edges)

    def numeric_lengths(self) -> list[Fraction]:
        """Edge lengths in slot order; requires a fully numeric graph."""
        if not self.is_numeric:
            raise NumericLengthsRequired("graph has symbolic edge lengths")
        return [e.length for e in self.edges]

    def variable_names(self) -> list[str]:
        """Display name per edge slot: the user's l_k when fully symbolic."""
        if self.is_symbolic:
            return [f"l{e.length.index}" for e in self.edges]
        return [f"l{i + 1}" for i in range(len(self.edges))]

    def __repr__(self):
        return f"WeightedMultigraph({len(self.vertices)} vertices, {len(self.edges)} edges)"


class PMGraph:
    """A weighted multigraph with a polarization q (zero where absent)."""

    def __init__(self, graph: WeightedMultigraph, q: Optional[Mapping[str, int]] = None):
        self.graph = graph
        cleaned: dict[str, int] = {}
        vset = set(graph.vertices)
        for vertex, weight in (q or {}).items():
            if vertex not in vset:
                raise GraphValidationError(f"q assigned to unknown vertex {vertex!r}")
            if not isinstance(weight, int) or weight < 0:
                raise GraphValidationError(f"q({vertex!r}) must be a nonnegative integer")
            if weight:
                cleaned[vertex] = weight
        self.q = cleaned
        canonical_divisor(self)  # rejects non-effective K

    def q_of(self, vertex: str) -> int:
        return self.q.get(vertex, 0)

    def __repr__(self):
        return f"PMGraph(genus {genus(self)}, {self.graph!r})"


# ----------------------------------------------------------------------
# basic invariants


def betti_number(graph: WeightedMultigraph) -> int:
    return len(graph.edges) - len(graph.vertices) + 1


def genus(pm: PMGraph) -> int:
    return betti_number(pm.graph) + sum(pm.q.values())


def canonical_divisor(pm: PMGraph) -> dict[str, int]:
    """K(p) = 2q(p) + v(p) - 2 per vertex; rejects any negative order."""
    divisor = {}
    for vertex in pm.graph.vertices:
        order = 2 * pm.q_of(vertex) + pm.graph.valence(vertex) - 2
        if order < 0:
            raise NonEffectiveCanonicalDivisor(
                f"K({vertex}) = {order} < 0 (valence {pm.graph.valence(vertex)}, q {pm.q_of(vertex)})"
            )
        divisor[vertex] = order
    return divisor


# ----------------------------------------------------------------------
# connectivity helpers


def _connected(vertices: Sequence[str], edge_pairs: Iterable[tuple[str, str]]) -> bool:
    vertices = list(vertices)
    if not vertices:
        return True
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = len(vertices)
    for u, v in edge_pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            count -= 1
    return count == 1


def components(vertices: Sequence[str], edge_pairs: Iterable[tuple[str, str]]) -> list[set[str]]:
    """Connected components of an auxiliary vertex/edge-pair graph."""
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edge_pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups: dict[str, set[str]] = {}
    for v in vertices:
        groups.setdefault(find(v), set()).add(v)
    return list(groups.values())


# ----------------------------------------------------------------------
# spanning trees


def spanning_trees(graph: WeightedMultigraph) -> list[frozenset[str]]:
    """All spanning trees as edge-id sets, sorted; loops never appear."""
    n = len(graph.vertices)
    if n == 1:
        return [frozenset()]
    nonloop = [e for e in graph.edges if not e.is_loop]
    trees = []
    for combo in combinations(nonloop, n - 1):
        parent = {v: v for v in graph.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        merges = 0
        ok = True
        for e in combo:
            ru, rv = find(e.u), find(e.v)
            if ru == rv:
                ok = False
                break
            parent[ru] = rv
            merges += 1
        if ok and merges == n - 1:
            trees.append(frozenset(e.id for e in combo))
    trees.sort(key=lambda t: tuple(sorted(t)))
    return trees


# ----------------------------------------------------------------------
# structural operations


def _merged_id(u: str, v: str) -> str:
    return min(u, v)


def contract_edge(graph: WeightedMultigraph, edge_id: str) -> WeightedMultigraph:
    """Merge the endpoints of a non-loop edge and delete it."""
    e = graph.edge(edge_id)
    if e.is_loop:
        raise LoopContraction(f"edge {edge_id!r} is a loop")
    merged = _merged_id(e.u, e.v)
    gone = e.v if merged == e.u else e.u

    def remap(x: str) -> str:
        return merged if x == gone else x

    vertices = [v for v in graph.vertices if v != gone]
    edges = [
        Edge(f.id, remap(f.u), remap(f.v), f.length)
        for f in graph.edges
        if f.id != edge_id
    ]
    return WeightedMultigraph(vertices, edges)


def fuse_vertices(graph: WeightedMultigraph, u: str, v: str) -> WeightedMultigraph:
    """Identify two distinct vertices; every edge is kept."""
    if u == v:
        raise SameVertex(f"cannot fuse {u!r} with itself")
    merged = _merged_id(u, v)
    gone = v if merged == u else u

    def remap(x: str) -> str:
        return merged if x == gone else x

    vertices = [w for w in graph.vertices if w != gone]
    edges = [Edge(f.id, remap(f.u), remap(f.v), f.length) for f in graph.edges]
    return WeightedMultigraph(vertices, edges)


def subdivide_edge(graph: WeightedMultigraph, edge_id: str, fraction: Fraction) -> WeightedMultigraph:
    """Split a numeric edge at the given interior fraction of its length."""
    fraction = Fraction(fraction)
    if not 0 < fraction < 1:
        raise GraphValidationError(f"subdivision fraction must be in (0,1), got {fraction}")
    e = graph.edge(edge_id)
    if not isinstance(e.length, Fraction):
        raise NumericLengthsRequired(f"edge {edge_id!r} has a symbolic length")
    mid = f"{edge_id}~mid"
    first = Edge(f"{edge_id}~a", e.u, mid, e.length * fraction)
    second = Edge(f"{edge_id}~b", mid, e.v, e.length * (1 - fraction))
    vertices = list(graph.vertices) + [mid]
    edges = [f for f in graph.edges if f.id != edge_id] + [first, second]
    return WeightedMultigraph(vertices, edges)


# ----------------------------------------------------------------------
# bridges, cut points, irreducibility


def bridges_and_blocks(graph: WeightedMultigraph) -> tuple[frozenset[str], bool]:
    """Bridge edge ids, plus whether the metric realization is irreducible.

    A cut point of the metric graph is an interior point of a bridge, a
    cut vertex of the model, or the base of a loop when anything else is
    attached there.  Graphs here are tiny, so each test is a direct
    delete-and-check.
    """
    n, m = len(graph.vertices), len(graph.edges)
    bridges = set()
    for e in graph.edges:
        if e.is_loop:
            continue
        rest = [(f.u, f.v) for f in graph.edges if f.id != e.id]
        if not _connected(graph.vertices, rest):
            bridges.add(e.id)

    if n == 1:
        irreducible = m <= 1  # a point or a circle
    elif any(e.is_loop for e in graph.edges):
        irreducible = False
    elif bridges:
        irreducible = False
    else:
        irreducible = True
        for vertex in graph.vertices:
            rest_vertices = [v for v in graph.vertices if v != vertex]
            rest_edges = [
                (f.u, f.v) for f in graph.edges if vertex not in (f.u, f.v)
            ]
            if len(rest_vertices) > 1 and not _connected(rest_vertices, rest_edges):
                irreducible = False
                break
    return frozenset(bridges), irreducible


# ----------------------------------------------------------------------
# isomorphism keys


def _length_key(length: Length, ignore: bool) -> str:
    if ignore:
        return ""
    if isinstance(length, SymbolicLength):
        return f"?{length.index}"
    return format_rational(length)


def canonical_form(graph: WeightedMultigraph, ignore_lengths: bool = False) -> str:
    """Canonical key: equal iff the multigraphs are isomorphic.

    Brute-force minimization over vertex orderings, restricted to blocks of
    a color refinement; fine at catalog sizes (<= 8 vertices or so).
    """
    n = len(graph.vertices)
    index = {v: i for i, v in enumerate(graph.vertices)}

    loops = [0] * n
    incident_keys: list[list[str]] = [[] for _ in range(n)]
    plain: list[tuple[int, int, str]] = []
    for e in graph.edges:
        key = _length_key(e.length, ignore_lengths)
        iu, iv = index[e.u], index[e.v]
        if e.is_loop:
            loops[iu] += 1
            incident_keys[iu].append(key)
        else:
            incident_keys[iu].append(key)
            incident_keys[iv].append(key)
        plain.append((min(iu, iv), max(iu, iv), key))

    colors = [
        (graph.valence(v), loops[index[v]], tuple(sorted(incident_keys[index[v]])))
        for v in graph.vertices
    ]
    for _ in range(n):
        refined = []
        for i in range(n):
            around = []
            for a, b, key in plain:
                if a == i and b != i:
                    around.append((repr(colors[b]), key))
                elif b == i and a != i:
                    around.append((repr(colors[a]), key))
            refined.append((colors[i], tuple(sorted(around))))
        if len(set(map(repr, refined))) == len(set(map(repr, colors))):
            colors = refined
            break
        colors = refined

    blocks: dict[str, list[int]] = {}
    for i in range(n):
        blocks.setdefault(repr(colors[i]), []).append(i)
    ordered_blocks = [blocks[c] for c in sorted(blocks)]

    best = None
    for arrangement in product(*(permutations(b) for b in ordered_blocks)):
        position = {}
        spot = 0
        for block in arrangement:
            for i in block:
                position[i] = spot
                spot += 1
        serial = tuple(
            sorted(
                (min(position[a], position[b]), max(position[a], position[b]), key)
                for a, b, key in plain
            )
        )
        if best is None or serial < best:
            best = serial
    body = ",".join(f"{a}-{b}" + (f":{k}" if k else "") for a, b, k in (best or ()))
    return f"V{n};{body}"


# ----------------------------------------------------------------------
# JSON schema


def length_from_json(value) -> Length:
    if isinstance(value, dict):
        if set(value) != {"var"} or not isinstance(value.get("var"), int):
            raise ParseError(f"bad symbolic length {value!r}")
        return SymbolicLength(value["var"])
    return parse_rational(value)


def length_to_json(length: Length):
    if isinstance(length, SymbolicLength):
        return {"var": length.index}
    return format_rational(length)


def pm_graph_from_json(data) -> PMGraph:
    """Parse the graph JSON schema; structural failures raise ParseError."""
    if not isinstance(data, dict):
        raise ParseError("graph JSON must be an object")
    try:
        raw_vertices = data["vertices"]
        raw_edges = data["edges"]
    except KeyError as exc:
        raise ParseError(f"missing key {exc}") from exc
    if not isinstance(raw_vertices, list) or not isinstance(raw_edges, list):
        raise ParseError("'vertices' and 'edges' must be arrays")
    vertices = []
    q = {}
    for item in raw_vertices:
        if not isinstance(item, dict) or "id" not in item:
            raise ParseError(f"bad vertex entry {item!r}")
        vid = item["id"]
        if not isinstance(vid, str):
            raise ParseError(f"vertex id must be a string, got {vid!r}")
        vertices.append(vid)
        weight = item.get("q", 0)
        if not isinstance(weight, int) or isinstance(weight, bool) or weight < 0:
            raise ParseError(f"vertex {vid!r}: q must be a nonnegative integer")
        if weight:
            q[vid] = weight
    edges = []
    for item in raw_edges:
        if not isinstance(item, dict):
            raise ParseError(f"bad edge entry {item!r}")
        try:
            eid, u, v, raw_len = item["id"], item["u"], item["v"], item["length"]
        except KeyError as exc:
            raise ParseError(f"edge entry missing key {exc}") from exc
        if not (isinstance(eid, str) and isinstance(u, str) and isinstance(v, str)):
            raise ParseError(f"edge ids and endpoints must be strings: {item!r}")
        edges.append(Edge(eid, u, v, length_from_json(raw_len)))
    return PMGraph(WeightedMultigraph(vertices, edges), q)


def pm_graph_to_json(pm: PMGraph) -> dict:
    return {
        "vertices": [
            {"id": v, "q": pm.q_of(v)} for v in pm.graph.vertices
        ],
        "edges": [
            {"id": e.id, "u": e.u, "v": e.v, "length": length_to_json(e.length)}
            for e in pm.graph.edges
        ],
    }
