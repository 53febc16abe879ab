"""Newton maps, their application, and base-case detection for pairs.

A Newton map sigma_(p,q,mu) substitutes x -> mu^q' x^p, y -> x^q (y + mu^p')
with p p' - q q' = 1.  Applying it to P factors out x^m(p,q); the quotient
is a unit at the origin unless (p, q) is a segment normal and mu a root of
the face polynomial (then the quotient's y-valuation at x=0 is the root
multiplicity and the height can only shrink to it).

A pair is a base case when each member is x^M y^m * unit, or when both are
x^M A(x,y)^m * unit for one shared smooth branch A = y - mu x^q + higher
terms.  Detection is exact: the polygon pins the candidate branch shape and
a square-free certificate plus a bivariate gcd confirm the factorization.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .geometry import (Face, GeometryError, diagram_of, face_polynomial,
                       zform_of_segment)
from .polynomials import (BiPoly, UniPoly, gcd_bivariate,
                          squarefree_decomposition_y, substitute_newton_raw)


@dataclass(frozen=True)
class NewtonMap:
    p: int
    q: int
    pprime: int
    qprime: int
    mu: object   # scalar of the working field

    def to_json(self, field):
        return {"p": self.p, "q": self.q, "pprime": self.pprime,
                "qprime": self.qprime, "mu": field.to_str(self.mu)}


def make_newton_map(p, q, mu, field=None):
    """Newton map with the minimal nonnegative (p', q') solving pp'-qq'=1."""
    if gcd(p, q) != 1:
        raise ValueError("(p, q) = (%d, %d) is not coprime" % (p, q))
    if field is not None:
        mu = field.coerce(mu)
        if field.is_zero(mu):
            raise ValueError("Newton map needs mu != 0")
    if q == 0:
        pprime, qprime = 1, 0
    else:
        pprime = pow(p, -1, q)
        qprime = (p * pprime - 1) // q
    return NewtonMap(p, q, pprime, qprime, mu)


def apply_map(P: BiPoly, nm: NewtonMap) -> BiPoly:
    return substitute_newton_raw(P, nm.p, nm.q, nm.pprime, nm.qprime, nm.mu)


@dataclass
class TransformOutcome:
    exponent: int          # m(p, q), the extracted power of x
    quotient: BiPoly       # P_sigma / x^exponent
    classification: str    # "unit" | "root"
    multiplicity: int      # root multiplicity (0 for units)
    height_before: int
    height_after: int


def apply_transform(P: BiPoly, nm: NewtonMap) -> TransformOutcome:
    """Apply a Newton map and classify the outcome."""
    if P.is_zero():
        raise ValueError("cannot transform the zero polynomial")
    K = P.field
    D = diagram_of(P)
    m, face = D.support_function(nm.p, nm.q)
    image = apply_map(P, nm)
    quotient = image.shift_monomial(-m, 0)
    mult = 0
    if face.dim == 1:
        F = zform_of_segment(P, face)
        z_mu = UniPoly(K, (K.neg(nm.mu), K.one))
        while True:
            qq, rr = F.divmod(z_mu)
            if not rr.is_zero():
                break
            mult += 1
            F = qq
    classification = "root" if mult else "unit"
    h_after = diagram_of(quotient).height() if not quotient.is_zero() else 0
    return TransformOutcome(m, quotient, classification, mult, D.height(), h_after)


def enumerate_triples(P: BiPoly):
    """All (p, q, orbit) with an actual root: the continuing Newton triples."""
    out = []
    if P.is_zero():
        raise ValueError("zero polynomial")
    for seg in diagram_of(P).segments():
        fp = face_polynomial(P, seg)
        p, q = seg.normal
        for orbit in fp.orbits:
            out.append((p, q, orbit))
    return out


@dataclass(frozen=True)
class MonMonShape:
    M1: int
    m1: int
    M2: int
    m2: int

    kind = "monmon"


@dataclass(frozen=True)
class Dim1Dim1Shape:
    M1: int
    m1: int
    M2: int
    m2: int
    q: int
    mu: object     # explicit branch root, scalar of the working field

    kind = "dim1dim1"


def smooth_branch_shape(V: BiPoly):
    """Certify V = A(x, y)^m * unit with A = y - mu x^q + higher terms.

    V must have x-valuation 0.  Returns (q, mu, m); a unit at the origin
    gives (None, None, 0); any other shape returns None.
    """
    K = V.field
    if V.is_unit_at_origin():
        return (None, None, 0)
    try:
        D = diagram_of(V)
    except GeometryError:
        return None
    verts = D.vertices
    if len(verts) != 2 or verts[0][0] != 0 or verts[1][1] != 0:
        return None
    m = verts[0][1]
    seg = Face.segment(verts[0], verts[1])
    p, q = seg.normal
    if p != 1:
        return None
    F = zform_of_segment(V, seg)
    # need F = lead * (z - mu)^m exactly
    lead = F.leading()
    mu = K.mul(K.neg(F.coeffs[m - 1]), K.inv(K.mul(K.from_int(m), lead)))
    target = (UniPoly(K, (K.neg(mu), K.one)) ** m).scale(lead)
    if F != target:
        return None
    if m == 1:
        # polygon height 1 forces a single smooth polynomial branch
        return (q, mu, 1)
    cont, sqf = squarefree_decomposition_y(V)
    through = [(g, j) for g, j in sqf if g.vanishes_at_origin()]
    if len(through) != 1:
        return None
    g, j = through[0]
    if j != m:
        return None
    try:
        Dg = diagram_of(g)
    except GeometryError:
        return None
    if Dg.vertices != ((0, 1), (q, 0)):
        return None
    segg = Face.segment((0, 1), (q, 0))
    Fg = zform_of_segment(g, segg)
    root = K.mul(K.neg(Fg.coeffs[0]), K.inv(Fg.coeffs[1]))
    if not K.eq(root, mu):
        return None
    return (q, mu, m)


def detect_base_case(A: BiPoly, B: BiPoly):
    """MonMonShape, Dim1Dim1Shape, or None for a working pair (A, B)."""
    if A.is_zero() or B.is_zero():
        raise ValueError("base-case detection on a zero polynomial")
    M1 = A.x_valuation()
    M2 = B.x_valuation()
    V1 = A.shift_monomial(-M1, 0)
    V2 = B.shift_monomial(-M2, 0)
    n1 = V1.y_valuation()
    n2 = V2.y_valuation()
    if (V1.shift_monomial(0, -n1).is_unit_at_origin()
            and V2.shift_monomial(0, -n2).is_unit_at_origin()):
        return MonMonShape(M1, n1, M2, n2)
    s1 = smooth_branch_shape(V1)
    s2 = smooth_branch_shape(V2)
    if s1 is None or s2 is None:
        return None
    q1, mu1, m1 = s1
    q2, mu2, m2 = s2
    if m1 == 0 and m2 == 0:
        return MonMonShape(M1, 0, M2, 0)
    if m1 == 0:
        return Dim1Dim1Shape(M1, 0, M2, m2, q2, mu2)
    if m2 == 0:
        return Dim1Dim1Shape(M1, m1, M2, 0, q1, mu1)
    K = A.field
    if q1 != q2 or not K.eq(mu1, mu2):
        return None
    # same leading branch data; require literally the same branch
    g = gcd_bivariate(V1, V2)
    if not g.vanishes_at_origin():
        return None
    return Dim1Dim1Shape(M1, m1, M2, m2, q1, mu1)
