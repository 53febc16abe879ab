"""Independent ground truth: local intersection numbers and Milnor numbers.

The intersection multiplicity uses the classical axiom-driven reduction
(degree descent on the restrictions to y = 0), exact over the coefficient
field.  Milnor numbers are intersection numbers of the partials; the Euler
characteristic of a pencil fiber is a difference of Milnor numbers, with
the generic one probed at three random parameter values and required to
agree.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .engine import EngineError, _single_motive, single_poly_motive
from .fields import QQ, Field
from .geometry import diagram_of, face_polynomial
from .polynomials import (BiPoly, UniPoly, gcd_bivariate,
                          rational_content_strip, squarefree_decomposition_y)

INF = float("inf")


class OracleError(Exception):
    pass


def _restrict_y0(F: BiPoly) -> UniPoly:
    K = F.field
    coeffs = {}
    for (a, b), c in F.terms.items():
        if b == 0:
            coeffs[a] = c
    n = max(coeffs, default=-1) + 1
    return UniPoly(K, tuple(coeffs.get(i, K.zero) for i in range(n)))


def _strip_y(F: BiPoly):
    v = F.y_valuation()
    return v, F.shift_monomial(0, -v)


def intersection_multiplicity(F: BiPoly, G: BiPoly, point=(0, 0)):
    """Local intersection number of the curves F = 0 and G = 0 at ``point``.

    Returns a nonnegative integer, or inf when the curves share a
    component through the point.
    """
    K = F.field
    F = rational_content_strip(F.translate(*point))
    G = rational_content_strip(G.translate(*point))
    if F.is_zero() or G.is_zero():
        other = G if F.is_zero() else F
        return INF if other.vanishes_at_origin() else 0
    g = gcd_bivariate(F, G)
    if g.total_degree() > 0 and g.vanishes_at_origin():
        return INF
    return _fulton(F, G)


def _fulton(F: BiPoly, G: BiPoly):
    K = F.field
    total = 0
    while True:
        if F.is_unit_at_origin() or G.is_unit_at_origin():
            return total
        f = _restrict_y0(F)
        g = _restrict_y0(G)
        if f.is_zero() and g.is_zero():
            return INF   # y divides both: shared component y = 0
        if f.is_zero():
            F, G = G, F
            f, g = g, f
        if g.is_zero():
            # G = y * H; I(F, G) = ord_x F(x, 0) + I(F, H)
            k = 0
            while K.is_zero(f.coeffs[k]):
                k += 1
            total += k
            G = G.shift_monomial(0, -1)
            continue
        if f.degree > g.degree:
            F, G = G, F
            f, g = g, f
        # kill the leading restriction coefficient of G
        c = K.mul(g.leading(), K.inv(f.leading()))
        shift = g.degree - f.degree
        G = rational_content_strip(G - F.shift_monomial(shift, 0).scale(c))


def milnor_number(F: BiPoly, point=(0, 0)):
    """mu(F, point) = I(dF/dx, dF/dy, point); inf for non-isolated germs."""
    return intersection_multiplicity(F.derivative("x"), F.derivative("y"), point)


def random_probe(rng: random.Random) -> Fraction:
    num = rng.randint(2, 60) * rng.choice((1, -1))
    den = rng.randint(1, 9)
    return Fraction(num, den)


def generic_milnor_number(P: BiPoly, Q: BiPoly, point=(0, 0), seed=0,
                          probes=3, avoid=()):
    """mu(P - c_gen Q) via random probes, with a constancy check.

    The generic value is constant off a finite set, so three independent
    probes agreeing certify it; a disagreement aborts loudly.
    """
    rng = random.Random(seed)
    avoid = set(avoid)
    values = []
    tried = []
    while len(values) < probes:
        c = random_probe(rng)
        if c in avoid or c in tried:
            continue
        tried.append(c)
        mu = milnor_number(P - Q.scale(c), point)
        if mu == INF:
            raise OracleError(
                "pencil member at probe c = %s has a non-isolated singularity" % c)
        values.append((c, mu))
    mus = {mu for _, mu in values}
    if len(mus) != 1:
        raise OracleError(
            "generic Milnor number probes disagree: %s "
            "(a probe hit the bifurcation set or hypotheses fail)" % (values,))
    return values[0][1]


def chi_via_mu(P: BiPoly, Q: BiPoly, value, point=(0, 0), seed=0):
    """chi_c of the pencil Milnor fiber at ``value``: mu_generic - mu_value."""
    mu_gen = generic_milnor_number(P, Q, point, seed=seed,
                                   avoid=[value] if isinstance(value, Fraction) else ())
    if value == "inf":
        mu_c = milnor_number(Q, point)
    else:
        K = P.field
        mu_c = milnor_number(P - Q.scale(K.coerce(value)), point)
    if mu_c == INF:
        raise OracleError("non-isolated singularity at the requested value")
    return mu_gen - mu_c


def is_reduced_at_origin(F: BiPoly) -> bool:
    """No repeated component through the origin (iff mu is finite there).

    After stripping axis factors, a repeated through-origin component is
    exactly a through-origin factor of gcd(V, dV/dy): axis-free irreducible
    factors are never y-free, so simple factors cannot divide the
    derivative.
    """
    if F.is_zero():
        return False
    if F.x_valuation() >= 2:
        return False
    V = F.shift_monomial(-F.x_valuation(), 0)
    if V.y_valuation() >= 2:
        return False
    V = V.shift_monomial(0, -V.y_valuation())
    if V.is_unit_at_origin():
        return True
    g = gcd_bivariate(V, V.derivative("y"))
    return not g.vanishes_at_origin()


def relative_area(F: BiPoly) -> Fraction:
    """Area of the diagram relative to F: half the root-weighted level sum.

    Each segment contributes (number of distinct roots of its face
    polynomial) * (supporting level) / 2 -- the total area of one triangle
    with legs p, q scaled by the level, per root.  For a convenient
    nondegenerate polynomial this is the area between the polygon and the
    axes (the shoelace fan area from the origin).
    """
    total = Fraction(0)
    for seg in diagram_of(F).segments():
        fp = face_polynomial(F, seg)
        total += Fraction(fp.roots_count() * seg.level, 2)
    return total


def shoelace_area(F: BiPoly) -> Fraction:
    """Fan (shoelace) area between the Newton polygon and the origin rays."""
    verts = diagram_of(F).vertices
    total = Fraction(0)
    for (a0, b0), (a1, b1) in zip(verts, verts[1:]):
        total += Fraction(abs(a0 * b1 - a1 * b0), 2)
    return total


def mu_via_newton(F: BiPoly):
    """Milnor number from Newton data: 1 + 2S - corrections - child terms.

    The corrections subtract the horizontal intercept when the polygon
    touches the x-axis (and symmetrically), and the Euler realizations of
    the fiber motives of all Newton transforms of F.
    """
    if F.is_zero() or not F.vanishes_at_origin():
        raise OracleError("germ must be nonzero and vanish at the origin")
    if not is_reduced_at_origin(F):
        raise OracleError("non-isolated singularity: Milnor number is infinite")
    D = diagram_of(F)
    a_h, b_h = D.horizontal_vertex
    a_v, b_v = D.vertical_vertex
    total = 1 + 2 * relative_area(F)
    if b_h == 0:
        total -= a_h
    if a_v == 0:
        total -= b_v
    for seg in diagram_of(F).segments():
        fp = face_polynomial(F, seg)
        p, q = seg.normal
        for orbit in fp.orbits:
            chi = _transform_chi(F, p, q, orbit)
            total -= chi
    if total.denominator != 1:
        raise OracleError("Newton-data Milnor number is not an integer")
    return int(total)


def _transform_chi(F, p, q, orbit):
    """Orbit-weighted Euler realization of the transform's fiber motive."""
    from .engine import _follow_single_orbit
    total, _ = _follow_single_orbit(F, p, q, orbit.minpoly, orbit.certified,
                                    4 * max(F.total_degree(), 1), [])
    return total.euler()
