"""Coefficientwise certificates for the phi lower bound on cubic graphs.

For an irreducible cubic graph with q == 0 and canonical model of 2g-2
vertices and m = 3g-3 edges, a constant A with

    A * sigma_3 * eta^2 - omega_1 * sigma_2   coefficientwise >= 0

certifies phi >= [(g-1)/(6g) - A(3g-5)/(9(g-1))] * l(Gamma).  We take the
smallest A making every monomial coefficient nonnegative: this is
sufficient for the functional inequality, though possibly not necessary,
and the certificate records that semantics.  All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .errors import BadDeltaIndex, GenusTooSmall, NotCanonicalCubic, UnsupportedGenus
from .graphs import PMGraph, bridges_and_blocks, canonical_form, genus
from .invariants import THEOREM_C, _skeleton, conjectural_c, omega1_numerator
from .polynomials import SparsePoly, elementary_symmetric
from .rationals import format_rational


def validate_canonical_cubic(pm: PMGraph) -> int:
    """Check the canonical-model shape; returns the genus."""
    g = genus(pm)
    if g < 2:
        raise NotCanonicalCubic(f"genus {g} < 2")
    graph = pm.graph
    if pm.q:
        raise NotCanonicalCubic("polarization must be identically zero")
    if len(graph.vertices) != 2 * g - 2:
        raise NotCanonicalCubic(
            f"expected {2 * g - 2} vertices for genus {g}, found {len(graph.vertices)}"
        )
    if len(graph.edges) != 3 * g - 3:
        raise NotCanonicalCubic(
            f"expected {3 * g - 3} edges for genus {g}, found {len(graph.edges)}"
        )
    if any(e.is_loop for e in graph.edges):
        raise NotCanonicalCubic("loop edges are not allowed")
    for v in graph.vertices:
        if graph.valence(v) != 3:
            raise NotCanonicalCubic(f"vertex {v!r} has valence {graph.valence(v)} != 3")
    _, irreducible = bridges_and_blocks(graph)
    if not irreducible:
        raise NotCanonicalCubic("graph is not 2-connected")
    return g


def constraint_coefficients(
    pm: PMGraph,
) -> list[tuple[tuple[int, ...], Fraction, Fraction]]:
    """Per monomial alpha of S = sigma_3*eta^2 and W = omega_1*sigma_2:
    (alpha, s_alpha, w_alpha) over the union of the two supports.

    Exponent vectors index the edges in id order; edge lengths on the
    input graph are ignored (the certificate is combinatorial).
    """
    validate_canonical_cubic(pm)
    sk = _skeleton(pm)
    m = len(pm.graph.edges)
    S = elementary_symmetric(3, m) * sk.eta * sk.eta
    W = omega1_numerator(sk) * elementary_symmetric(2, m)
    rows = []
    for alpha in sorted(set(S.terms) | set(W.terms)):
        rows.append((alpha, S.coefficient(alpha), W.coefficient(alpha)))
    return rows


@dataclass(frozen=True)
class Certificate:
    graph_key: str
    genus: int
    feasible: bool
    a_min: Optional[Fraction]
    bound: Optional[Fraction]
    binding: tuple[tuple[int, ...], ...]
    offending: tuple[tuple[int, ...], ...]
    conjecture_a: Fraction
    conjecture_ok: Optional[bool]
    edge_order: tuple[str, ...]
    semantics: str = "coefficientwise"

    def to_json(self) -> dict:
        data = {
            "graph": self.graph_key,
            "genus": self.genus,
            "feasible": self.feasible,
            "A_min": format_rational(self.a_min) if self.feasible else None,
            "c": format_rational(self.bound) if self.feasible else None,
            "conjecture_A": format_rational(self.conjecture_a),
            "conjecture_ok": self.conjecture_ok,
            "binding_monomials": [list(alpha) for alpha in self.binding],
            "edge_order": list(self.edge_order),
            "semantics": self.semantics,
        }
        if not self.feasible:
            data["offending_monomials"] = [list(alpha) for alpha in self.offending]
        return data


def solve_min_A(
    constraints: Sequence[tuple[tuple[int, ...], Fraction, Fraction]],
) -> tuple[Optional[Fraction], list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Smallest A >= 0 with A*s - w >= 0 for every row; None if impossible.

    Returns (A or None, binding monomials, offending monomials).  A row
    with s = 0 and w > 0 can never be satisfied; rows with s = 0, w <= 0
    impose nothing.
    """
    offending = [alpha for alpha, s, w in constraints if s == 0 and w > 0]
    if offending:
        return None, [], offending
    best = Fraction(0)
    for alpha, s, w in constraints:
        if s > 0 and w > 0:
            ratio = Fraction(w, 1) / s
            if ratio > best:
                best = ratio
    binding = [
        alpha
        for alpha, s, w in constraints
        if s > 0 and Fraction(w, 1) == best * s
    ]
    return best, binding, []


def bound_from_A(g: int, A: Fraction) -> Fraction:
    """(g-1)/(6g) - A*(3g-5)/(9(g-1))."""
    if g < 2:
        raise GenusTooSmall("the certified bound needs genus >= 2")
    return Fraction(g - 1, 6 * g) - Fraction(A) * Fraction(3 * g - 5, 9 * (g - 1))


def conjecture_A(g: int) -> Fraction:
    """7(g-1)^2 / (6g(3g-5)); equivalent to c(g) = (g-1)/27g."""
    if g < 2:
        raise GenusTooSmall("needs genus >= 2")
    return Fraction(7 * (g - 1) ** 2, 6 * g * (3 * g - 5))


def minimal_A(pm: PMGraph) -> Certificate:
    """Certify one canonical cubic graph; infeasibility is reported, not raised."""
    g = validate_canonical_cubic(pm)
    rows = constraint_coefficients(pm)
    a_min, binding, offending = solve_min_A(rows)
    conj = conjecture_A(g)
    feasible = a_min is not None
    return Certificate(
        graph_key=canonical_form(pm.graph, ignore_lengths=True),
        genus=g,
        feasible=feasible,
        a_min=a_min,
        bound=bound_from_A(g, a_min) if feasible else None,
        binding=tuple(binding),
        offending=tuple(offending),
        conjecture_a=conj,
        conjecture_ok=(a_min <= conj) if feasible else None,
        edge_order=tuple(e.id for e in pm.graph.edges),
    )


# ----------------------------------------------------------------------
# effective curve bounds


def curve_bound(
    g: int,
    d: int,
    deltas: Optional[Mapping[int, int]] = None,
    smooth: bool = False,
    allow_conjectural: bool = False,
) -> Fraction:
    """Lower bound for the infimum of the heights a'(D).

    Smooth fibration: 3/(d(g-1)).  Otherwise
    (1/(2d(2g+1))) * (c(g) delta_0 + sum over 0 < i <= g/2 of (2i(g-i)/g) delta_i),
    with proved c(g) for genus 2..4 and the conjectural (g-1)/27g beyond
    when explicitly allowed.
    """
    if g < 2:
        raise UnsupportedGenus(f"genus {g} < 2")
    if d < 1:
        raise BadDeltaIndex(f"degree d must be positive, got {d}")
    if smooth:
        return Fraction(3, d * (g - 1))
    if g > 4 and not allow_conjectural:
        raise UnsupportedGenus(
            f"genus {g} has no proved constant; pass allow_conjectural to use (g-1)/27g"
        )
    c = THEOREM_C.get(g, conjectural_c(g))
    deltas = dict(deltas or {})
    total = Fraction(0)
    for i, count in deltas.items():
        if not isinstance(i, int) or i < 0 or i > g // 2:
            raise BadDeltaIndex(f"delta index {i} outside [0, {g // 2}]")
        if not isinstance(count, int) or count < 0:
            raise BadDeltaIndex(f"delta_{i} must be a nonnegative integer")
        if i == 0:
            total += c * count
        else:
            total += Fraction(2 * i * (g - i), g) * count
    return Fraction(1, 2 * d * (2 * g + 1)) * total
