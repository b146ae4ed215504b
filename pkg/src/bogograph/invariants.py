"""Exact invariants of polarized metric graphs.

Everything is computed from a chosen model.  Polynomial results live in
"slot space": variable ``i`` stands for the length of the ``i``-th edge in
id order, regardless of whether that edge carries a numeric or symbolic
length.  Use ``graph.variable_names()`` when printing.

Two independent computation routes are maintained on purpose:

* numeric route: effective resistance by exact Gaussian elimination on the
  reduced Laplacian, then the closed formula for epsilon;
* polynomial route: spanning-tree polynomials (eta and its fusions) and
  the explicit omega1 formula.

``phi`` evaluates both and refuses to return if they disagree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import (
    GenusTooSmall,
    GraphValidationError,
    LoopContraction,
    NotAPointedSummand,
    NumericLengthsRequired,
    SingularSystem,
    SymbolicLengthsRequired,
    TwoRouteMismatch,
    UnsupportedGenus,
)
from .graphs import (
    Edge,
    PMGraph,
    SymbolicLength,
    WeightedMultigraph,
    _connected,
    betti_number,
    bridges_and_blocks,
    canonical_divisor,
    components,
    contract_edge,
    fuse_vertices,
    genus,
    spanning_trees,
)
from .polynomials import SparsePoly

# Lower-bound constants: proved for genus 2..4, conjectural (g-1)/27g beyond.
THEOREM_C = {2: Fraction(1, 27), 3: Fraction(2, 81), 4: Fraction(1, 36)}


def conjectural_c(g: int) -> Fraction:
    return Fraction(g - 1, 27 * g)


@dataclass(frozen=True)
class RationalFunction:
    """A quotient numerator / eta^eta_power in slot variables."""

    numerator: SparsePoly
    eta_power: int

    def value_at(self, eta_poly: SparsePoly, lengths: Sequence[Fraction]) -> Fraction:
        return self.numerator.evaluate(lengths) / eta_poly.evaluate(lengths) ** self.eta_power


ExactValue = Union[Fraction, RationalFunction]


# ----------------------------------------------------------------------
# spanning-tree polynomials


def eta(graph: WeightedMultigraph) -> SparsePoly:
    """Sum over spanning trees of the product of the non-tree edge lengths."""
    m = len(graph.edges)
    terms = {}
    for tree in spanning_trees(graph):
        exp = [1] * m
        for edge_id in tree:
            exp[graph.edge_index[edge_id]] = 0
        terms[tuple(exp)] = 1
    return SparsePoly(m, terms)


def resistance_poly(graph: WeightedMultigraph, u: str, v: str) -> SparsePoly:
    """R(u,v) = r(u,v) * eta: the eta polynomial of the graph with u,v fused."""
    if u == v:
        return SparsePoly.zero(len(graph.edges))
    return eta(fuse_vertices(graph, u, v))


# ----------------------------------------------------------------------
# exact linear algebra on the Laplacian


def _laplacian(graph: WeightedMultigraph) -> list[list[Fraction]]:
    """Conductance matrix 1/length; loop edges contribute nothing."""
    index = {v: i for i, v in enumerate(graph.vertices)}
    n = len(graph.vertices)
    Q = [[Fraction(0)] * n for _ in range(n)]
    for e in graph.edges:
        if e.is_loop:
            continue
        c = 1 / Fraction(e.length)
        i, j = index[e.u], index[e.v]
        Q[i][i] += c
        Q[j][j] += c
        Q[i][j] -= c
        Q[j][i] -= c
    return Q


def _solve(matrix: list[list[Fraction]], rhs: list[list[Fraction]]) -> list[list[Fraction]]:
    """Gauss-Jordan solve for several right-hand sides, exactly."""
    n = len(matrix)
    width = len(rhs[0]) if rhs else 0
    a = [row[:] + r[:] for row, r in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularSystem("reduced Laplacian is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return [row[n:n + width] for row in a]


def resistance_numeric(graph: WeightedMultigraph, u: str, v: str) -> Fraction:
    """Effective resistance between two vertices of a numeric graph."""
    if u == v:
        return Fraction(0)
    lengths = graph.numeric_lengths()
    del lengths  # validation only
    index = {w: i for i, w in enumerate(graph.vertices)}
    Q = _laplacian(graph)
    j = index[v]
    reduced = [
        [Q[r][c] for c in range(len(Q)) if c != j]
        for r in range(len(Q))
        if r != j
    ]
    i = index[u] if index[u] < j else index[u] - 1
    rhs = [[Fraction(1)] if r == i else [Fraction(0)] for r in range(len(reduced))]
    solution = _solve(reduced, rhs)
    return solution[i][0]


def _resistance_table(graph: WeightedMultigraph) -> dict[tuple[str, str], Fraction]:
    """All-pairs effective resistance from one grounded Laplacian inverse."""
    verts = graph.vertices
    n = len(verts)
    table: dict[tuple[str, str], Fraction] = {}
    for w in verts:
        table[(w, w)] = Fraction(0)
    if n == 1:
        return table
    Q = _laplacian(graph)
    reduced = [row[: n - 1] for row in Q[: n - 1]]
    identity = [
        [Fraction(1) if r == c else Fraction(0) for c in range(n - 1)]
        for r in range(n - 1)
    ]
    G = _solve(reduced, identity)

    def green(a: int, b: int) -> Fraction:
        if a == n - 1 or b == n - 1:
            return Fraction(0)
        return G[a][b]

    for a in range(n):
        for b in range(a + 1, n):
            r = green(a, a) + green(b, b) - 2 * green(a, b)
            table[(verts[a], verts[b])] = r
            table[(verts[b], verts[a])] = r
    return table


# ----------------------------------------------------------------------
# edge factor F(e) = 1 - r(e)/l(e)


def edge_F(graph: WeightedMultigraph, edge_id: str) -> ExactValue:
    """1 for a loop, 0 for a bridge, strictly between otherwise."""
    e = graph.edge(edge_id)
    if graph.is_numeric:
        r = resistance_numeric(graph, e.u, e.v)
        return 1 - r / Fraction(e.length)
    eta_poly = eta(graph)
    k = graph.edge_index[edge_id]
    return RationalFunction(eta_poly - eta_poly.substitute_zero(k), 1)


# ----------------------------------------------------------------------
# shared symbolic skeleton


@dataclass
class _Skeleton:
    pm: PMGraph
    g: int
    K: dict[str, int]
    eta: SparsePoly
    R: dict[tuple[str, str], SparsePoly]
    f_eta: list[SparsePoly]  # per edge slot: eta - eta|_{l_k=0}
    ell: SparsePoly  # l_1 + ... + l_m


def _skeleton(pm: PMGraph) -> _Skeleton:
    graph = pm.graph
    m = len(graph.edges)
    eta_poly = eta(graph)
    R: dict[tuple[str, str], SparsePoly] = {}
    for v in graph.vertices:
        R[(v, v)] = SparsePoly.zero(m)
    for a_i in range(len(graph.vertices)):
        for b_i in range(a_i + 1, len(graph.vertices)):
            a, b = graph.vertices[a_i], graph.vertices[b_i]
            poly = resistance_poly(graph, a, b)
            R[(a, b)] = poly
            R[(b, a)] = poly
    f_eta = [eta_poly - eta_poly.substitute_zero(k) for k in range(m)]
    ell = SparsePoly(m, {tuple(1 if i == k else 0 for i in range(m)): 1 for k in range(m)})
    return _Skeleton(pm, genus(pm), canonical_divisor(pm), eta_poly, R, f_eta, ell)


def _edge_term_sums(sk: _Skeleton) -> list[SparsePoly]:
    """Per edge k: sum_i K(p_i) * (R(p_i, e_k^-) + R(p_i, e_k^+))."""
    graph = sk.pm.graph
    m = len(graph.edges)
    sums = []
    for k in range(m):
        lo, hi = graph.edges[k].endpoints()
        total = SparsePoly.zero(m)
        for p, kp in sk.K.items():
            if kp:
                total = total + kp * (sk.R[(p, lo)] + sk.R[(p, hi)])
        sums.append(total)
    return sums


def _qk_resistance_sum(sk: _Skeleton) -> SparsePoly:
    """sum_{i,j} q(p_i) K(p_j) R(p_i, p_j)."""
    graph = sk.pm.graph
    total = SparsePoly.zero(len(graph.edges))
    for pi, qi in sk.pm.q.items():
        for pj, kj in sk.K.items():
            if qi and kj and pi != pj:
                total = total + (qi * kj) * sk.R[(pi, pj)]
    return total


def _kk_resistance_sum(sk: _Skeleton) -> SparsePoly:
    """sum_{i,j} K(p_i) K(p_j) R(p_i, p_j)."""
    graph = sk.pm.graph
    verts = graph.vertices
    total = SparsePoly.zero(len(graph.edges))
    for a_i in range(len(verts)):
        for b_i in range(a_i + 1, len(verts)):
            a, b = verts[a_i], verts[b_i]
            coeff = 2 * sk.K[a] * sk.K[b]
            if coeff:
                total = total + coeff * sk.R[(a, b)]
    return total


def epsilon_numerator(sk: _Skeleton) -> SparsePoly:
    """E with epsilon = E / eta^2."""
    graph = sk.pm.graph
    m = len(graph.edges)
    g = sk.g
    first = Fraction(1, g) * (sk.eta * _qk_resistance_sum(sk))
    second = SparsePoly.zero(m)
    for k in range(m):
        x_k = SparsePoly.variable(m, k)
        second = second + sk.f_eta[k] * sk.f_eta[k] * x_k
    second = Fraction(g - 1, 3 * g) * second
    third = SparsePoly.zero(m)
    for k, edge_sum in enumerate(_edge_term_sums(sk)):
        if not edge_sum.is_zero():
            third = third + sk.f_eta[k] * edge_sum
    third = Fraction(1, 2 * g) * third
    return first + second + third


def phi_numerator(sk: _Skeleton) -> SparsePoly:
    """Phi with phi = Phi / eta^2, via the epsilon and r(K,K) route."""
    g = sk.g
    if g < 2:
        raise GenusTooSmall("phi needs genus >= 2")
    E = epsilon_numerator(sk)
    kk = _kk_resistance_sum(sk)
    return (
        Fraction(5 * g - 2, 4 * (g - 1)) * E
        - Fraction(3, 8 * (g - 1)) * (sk.eta * kk)
        - Fraction(1, 4) * (sk.ell * sk.eta * sk.eta)
    )


def omega1_numerator(sk: _Skeleton) -> SparsePoly:
    """The explicit homogeneous degree-(2b1+1) polynomial with
    phi = (g-1)/(6g) * l(Gamma) - omega1 / eta^2."""
    g = sk.g
    if g < 2:
        raise GenusTooSmall("omega1 needs genus >= 2")
    graph = sk.pm.graph
    m = len(graph.edges)

    square_sum = SparsePoly.zero(m)
    for k in range(m):
        x_k = SparsePoly.variable(m, k)
        square_sum = square_sum + sk.f_eta[k] * sk.f_eta[k] * x_k
    term1 = Fraction(5 * g - 2, 12 * g) * (sk.ell * sk.eta * sk.eta - square_sum)

    middle = SparsePoly.zero(m)
    for pi, ki in sk.K.items():
        if not ki:
            continue
        for pj in graph.vertices:
            if pi == pj:
                continue
            weight = ki * (3 * g * sk.K[pj] - 2 * (5 * g - 2) * sk.pm.q_of(pj))
            if weight:
                middle = middle + weight * sk.R[(pi, pj)]
    term2 = Fraction(1, 8 * g * (g - 1)) * (sk.eta * middle)

    third = SparsePoly.zero(m)
    for k, edge_sum in enumerate(_edge_term_sums(sk)):
        if not edge_sum.is_zero():
            third = third + sk.f_eta[k] * edge_sum
    term3 = Fraction(-(5 * g - 2), 8 * g * (g - 1)) * third

    return term1 + term2 + term3


def omega1(pm: PMGraph) -> SparsePoly:
    """Slot-space omega1; requires genus >= 2 and all-symbolic lengths."""
    if not pm.graph.is_symbolic:
        raise SymbolicLengthsRequired("omega1 is reported for symbolic models only")
    return omega1_numerator(_skeleton(pm))


# ----------------------------------------------------------------------
# the invariants epsilon, tau, phi


def _numeric_ingredients(pm: PMGraph):
    graph = pm.graph
    lengths = {e.id: Fraction(e.length) for e in graph.edges}
    r = _resistance_table(graph)
    K = canonical_divisor(pm)
    F = {}
    for e in graph.edges:
        lo, hi = e.endpoints()
        F[e.id] = 1 - r[(lo, hi)] / lengths[e.id]
    return lengths, r, K, F


def _epsilon_numeric(pm: PMGraph, lengths, r, K, F) -> Fraction:
    g = genus(pm)
    graph = pm.graph
    first = Fraction(0)
    for pi, qi in pm.q.items():
        for pj, kj in K.items():
            if qi and kj:
                first += qi * kj * r[(pi, pj)]
    first /= g
    second = Fraction(g - 1, 3 * g) * sum(
        (F[e.id] ** 2 * lengths[e.id] for e in graph.edges), Fraction(0)
    )
    third = Fraction(0)
    for pi, ki in K.items():
        if not ki:
            continue
        inner = Fraction(0)
        for e in graph.edges:
            lo, hi = e.endpoints()
            inner += F[e.id] * (r[(pi, lo)] + r[(pi, hi)])
        third += ki * inner
    third /= 2 * g
    return first + second + third


def _rkk_numeric(pm: PMGraph, r, K) -> Fraction:
    total = Fraction(0)
    for pi, ki in K.items():
        for pj, kj in K.items():
            if ki and kj and pi != pj:
                total += ki * kj * r[(pi, pj)]
    return total


def epsilon(pm: PMGraph) -> ExactValue:
    if pm.graph.is_numeric:
        lengths, r, K, F = _numeric_ingredients(pm)
        return _epsilon_numeric(pm, lengths, r, K, F)
    return RationalFunction(epsilon_numerator(_skeleton(pm)), 2)


def r_canonical(pm: PMGraph) -> ExactValue:
    """r(K, K) = sum K(p_i) K(p_j) r(p_i, p_j)."""
    if pm.graph.is_numeric:
        _, r, K, _ = _numeric_ingredients(pm)
        return _rkk_numeric(pm, r, K)
    return RationalFunction(_kk_resistance_sum(_skeleton(pm)), 1)


def total_length(graph: WeightedMultigraph) -> Union[Fraction, SparsePoly]:
    """Sum of all edge lengths; a slot polynomial unless fully numeric."""
    if graph.is_numeric:
        return sum((Fraction(e.length) for e in graph.edges), Fraction(0))
    m = len(graph.edges)
    total = SparsePoly.zero(m)
    for i, e in enumerate(graph.edges):
        if isinstance(e.length, SymbolicLength):
            total = total + SparsePoly.variable(m, i)
        else:
            total = total + SparsePoly.constant(m, Fraction(e.length))
    return total


def tau(pm: PMGraph) -> ExactValue:
    """tau = (2g-1)/(4g(g-1)) * epsilon - r(K,K)/(8g(g-1)); genus >= 2."""
    g = genus(pm)
    if g < 2:
        raise GenusTooSmall("tau needs genus >= 2")
    if pm.graph.is_numeric:
        lengths, r, K, F = _numeric_ingredients(pm)
        eps = _epsilon_numeric(pm, lengths, r, K, F)
        rkk = _rkk_numeric(pm, r, K)
        return Fraction(2 * g - 1, 4 * g * (g - 1)) * eps - rkk / Fraction(8 * g * (g - 1))
    sk = _skeleton(pm)
    numerator = (
        Fraction(2 * g - 1, 4 * g * (g - 1)) * epsilon_numerator(sk)
        - Fraction(1, 8 * g * (g - 1)) * (sk.eta * _kk_resistance_sum(sk))
    )
    return RationalFunction(numerator, 2)


def phi(pm: PMGraph) -> ExactValue:
    """phi, computed by two independent formulas which must agree exactly."""
    g = genus(pm)
    if g < 2:
        raise GenusTooSmall("phi needs genus >= 2")
    sk = _skeleton(pm)
    omega = omega1_numerator(sk)
    if pm.graph.is_numeric:
        lengths, r, K, F = _numeric_ingredients(pm)
        eps = _epsilon_numeric(pm, lengths, r, K, F)
        rkk = _rkk_numeric(pm, r, K)
        ell = total_length(pm.graph)
        via_epsilon = (
            Fraction(5 * g - 2, 4 * (g - 1)) * eps
            - Fraction(3, 8 * (g - 1)) * rkk
            - ell / 4
        )
        point = pm.graph.numeric_lengths()
        eta_value = sk.eta.evaluate(point)
        via_omega = Fraction(g - 1, 6 * g) * ell - omega.evaluate(point) / eta_value ** 2
        if via_epsilon != via_omega:
            raise TwoRouteMismatch(
                f"phi routes disagree: {via_epsilon} vs {via_omega}"
            )
        return via_epsilon
    numerator = phi_numerator(sk)
    identity = Fraction(g - 1, 6 * g) * (sk.ell * sk.eta * sk.eta) - omega
    if numerator != identity:
        raise TwoRouteMismatch("phi numerator does not match the omega1 identity")
    return RationalFunction(numerator, 2)


# ----------------------------------------------------------------------
# admissible measure


@dataclass(frozen=True)
class AdmissibleMeasure:
    point_masses: dict[str, Fraction]
    edge_masses: dict[str, Fraction]

    def total_mass(self) -> Fraction:
        return sum(self.point_masses.values(), Fraction(0)) + sum(
            self.edge_masses.values(), Fraction(0)
        )


def admissible_measure(pm: PMGraph) -> AdmissibleMeasure:
    """Point mass q(p)/g per vertex, total mass F(e)/g per edge; mass 1."""
    if not pm.graph.is_numeric:
        raise NumericLengthsRequired("admissible measure needs numeric lengths")
    g = genus(pm)
    _, _, _, F = _numeric_ingredients(pm)
    points = {p: Fraction(w, g) for p, w in sorted(pm.q.items())}
    edges = {e.id: F[e.id] / g for e in pm.graph.edges}
    return AdmissibleMeasure(points, edges)


# ----------------------------------------------------------------------
# point types and the genus lower bound


@dataclass(frozen=True)
class TypeProfile:
    """Total length of the points of each type, indexed 0..floor(g/2)."""

    genus: int
    lengths: dict[int, Union[Fraction, SparsePoly]]

    def total(self) -> Union[Fraction, SparsePoly]:
        values = list(self.lengths.values())
        total = values[0]
        for v in values[1:]:
            total = total + v
        return total


def _side_genus(pm: PMGraph, side: set[str], inner_edges: list[Edge]) -> int:
    b1 = len(inner_edges) - len(side) + 1
    return b1 + sum(w for v, w in pm.q.items() if v in side)


def classify_types(pm: PMGraph) -> TypeProfile:
    """Edge-interior point types: 0 off bridges, else the smaller side genus.

    Vertices, q-support, and cut points of valence >= 3 carry no length and
    are ignored.  Type is constant on open edge interiors of a model whose
    vertex set contains the support of q, which ours always does.
    """
    g = genus(pm)
    if g < 2:
        raise GenusTooSmall("point types need genus >= 2")
    graph = pm.graph
    bridges, _ = bridges_and_blocks(graph)
    buckets: dict[int, list[str]] = {i: [] for i in range(g // 2 + 1)}
    for e in graph.edges:
        if e.id not in bridges:
            buckets[0].append(e.id)
            continue
        rest = [f for f in graph.edges if f.id != e.id]
        sides = components(graph.vertices, [(f.u, f.v) for f in rest])
        side_u = next(side for side in sides if e.u in side)
        side_v = next(side for side in sides if e.v in side)
        genus_u = _side_genus(pm, side_u, [f for f in rest if f.u in side_u])
        genus_v = _side_genus(pm, side_v, [f for f in rest if f.u in side_v])
        i = min(genus_u, genus_v)
        buckets[i].append(e.id)
    lengths: dict[int, Union[Fraction, SparsePoly]] = {}
    for i, edge_ids in buckets.items():
        if not edge_ids:
            lengths[i] = Fraction(0)
            continue
        if all(isinstance(graph.edge(x).length, Fraction) for x in edge_ids):
            lengths[i] = sum((Fraction(graph.edge(x).length) for x in edge_ids), Fraction(0))
        else:
            m = len(graph.edges)
            total = SparsePoly.zero(m)
            for x in edge_ids:
                e = graph.edge(x)
                if isinstance(e.length, SymbolicLength):
                    total = total + SparsePoly.variable(m, graph.edge_index[x])
                else:
                    total = total + SparsePoly.constant(m, Fraction(e.length))
            lengths[i] = total
    return TypeProfile(g, lengths)


def graph_lower_bound(pm: PMGraph, allow_conjectural: bool = False):
    """c(g)*l_0 + sum over positive types of (2i(g-i)/g)*l_i."""
    g = genus(pm)
    if g < 2:
        raise GenusTooSmall("the lower bound needs genus >= 2")
    if g > 4 and not allow_conjectural:
        raise UnsupportedGenus(
            f"genus {g} has no proved constant; pass allow_conjectural to use (g-1)/27g"
        )
    c = THEOREM_C.get(g, conjectural_c(g))
    profile = classify_types(pm)
    bound = c * profile.lengths[0]
    for i in range(1, g // 2 + 1):
        bound = bound + Fraction(2 * i * (g - i), g) * profile.lengths[i]
    return bound


# ----------------------------------------------------------------------
# induced polarizations on pointed summands


def induced_polarization(
    pm: PMGraph, sub_vertices: Sequence[str], sub_edges: Sequence[str]
) -> PMGraph:
    """Polarization pulled back along the retraction onto a pointed summand.

    Each component of the complement must meet the subgraph in exactly one
    vertex; its first Betti number plus its q-weight lands there.
    """
    graph = pm.graph
    vs = set(sub_vertices)
    es = set(sub_edges)
    if not vs or not vs <= set(graph.vertices) or not es <= set(graph.edge_index):
        raise NotAPointedSummand("subgraph references unknown vertices or edges")
    for x in es:
        e = graph.edge(x)
        if e.u not in vs or e.v not in vs:
            raise NotAPointedSummand(f"edge {x!r} leaves the chosen vertex set")
    inner = [(graph.edge(x).u, graph.edge(x).v) for x in es]
    if not _connected(sorted(vs), inner):
        raise NotAPointedSummand("chosen subgraph is not connected")

    rest_edges = [e for e in graph.edges if e.id not in es]
    rest_vertices = set(v for v in graph.vertices if v not in vs)
    for e in rest_edges:
        rest_vertices.update((e.u, e.v))
    q_new = {v: pm.q_of(v) for v in vs if pm.q_of(v)}
    if rest_vertices:
        for comp in components(sorted(rest_vertices), [(e.u, e.v) for e in rest_edges]):
            attach = comp & vs
            if len(attach) != 1:
                raise NotAPointedSummand(
                    f"complement component meets the subgraph in {len(attach)} points"
                )
            anchor = attach.pop()
            comp_edges = [e for e in rest_edges if e.u in comp]
            b1 = len(comp_edges) - len(comp) + 1
            extra = b1 + sum(pm.q_of(v) for v in comp if v != anchor)
            if extra:
                q_new[anchor] = q_new.get(anchor, 0) + extra
    sub_graph = WeightedMultigraph(sorted(vs), [graph.edge(x) for x in sorted(es)])
    induced = PMGraph(sub_graph, q_new)
    if genus(induced) != genus(pm):
        raise NotAPointedSummand("induced polarization does not preserve the genus")
    return induced


# ----------------------------------------------------------------------
# continuity under edge contraction


@dataclass(frozen=True)
class ContractionReport:
    edge_id: str
    ts: tuple[Fraction, ...]
    phi_values: tuple[Fraction, ...]
    phi_limit: Fraction
    differences: tuple[Fraction, ...]
    monotone: bool


def _contract_pm(pm: PMGraph, edge_id: str) -> PMGraph:
    """Contract a non-loop edge; q adds up at the merged vertex."""
    e = pm.graph.edge(edge_id)
    if e.is_loop:
        raise LoopContraction(f"edge {edge_id!r} is a loop")
    merged = min(e.u, e.v)
    gone = max(e.u, e.v)
    q_new = {v: w for v, w in pm.q.items() if v not in (merged, gone)}
    joint = pm.q_of(merged) + pm.q_of(gone)
    if joint:
        q_new[merged] = joint
    return PMGraph(contract_edge(pm.graph, edge_id), q_new)


def contraction_limit_check(
    pm: PMGraph, edge_id: str, ts: Sequence[Fraction]
) -> ContractionReport:
    """Evaluate phi along a shrinking edge and compare with the contraction."""
    e = pm.graph.edge(edge_id)
    if e.is_loop:
        raise LoopContraction(f"edge {edge_id!r} is a loop")
    for other in pm.graph.edges:
        if other.id != edge_id and not isinstance(other.length, Fraction):
            raise NumericLengthsRequired("all other edges must have numeric lengths")
    limit_pm = _contract_pm(pm, edge_id)
    phi_limit = phi(limit_pm)
    values = []
    for t in ts:
        t = Fraction(t)
        if t < 0:
            raise GraphValidationError("t values must be nonnegative")
        if t == 0:
            values.append(phi_limit)
            continue
        edges = [
            Edge(f.id, f.u, f.v, t if f.id == edge_id else f.length)
            for f in pm.graph.edges
        ]
        pm_t = PMGraph(WeightedMultigraph(pm.graph.vertices, edges), pm.q)
        if genus(pm_t) != genus(limit_pm):
            raise GraphValidationError("contraction changed the genus")
        values.append(phi(pm_t))
    diffs = [abs(v - phi_limit) for v in values]
    monotone = all(b <= a for a, b in zip(diffs, diffs[1:]))
    return ContractionReport(
        edge_id,
        tuple(Fraction(t) for t in ts),
        tuple(values),
        phi_limit,
        tuple(diffs),
        monotone,
    )


# ----------------------------------------------------------------------
# bundled report


@dataclass(frozen=True)
class InvariantBundle:
    genus: int
    betti: int
    eta: SparsePoly
    total_length: Union[Fraction, SparsePoly]
    epsilon: ExactValue
    r_kk: ExactValue
    tau: Optional[ExactValue]
    phi: Optional[ExactValue]
    omega1: Optional[SparsePoly]
    type_profile: Optional[TypeProfile]
    measure: Optional[AdmissibleMeasure]


def invariant_bundle(pm: PMGraph) -> InvariantBundle:
    """Everything at once; tau/phi/omega1/types are None at genus 1."""
    g = genus(pm)
    sk = _skeleton(pm)
    small = g < 2
    return InvariantBundle(
        genus=g,
        betti=betti_number(pm.graph),
        eta=sk.eta,
        total_length=total_length(pm.graph),
        epsilon=epsilon(pm),
        r_kk=r_canonical(pm),
        tau=None if small else tau(pm),
        phi=None if small else phi(pm),
        omega1=None if small else omega1_numerator(sk),
        type_profile=None if small else classify_types(pm),
        measure=admissible_measure(pm) if pm.graph.is_numeric else None,
    )
