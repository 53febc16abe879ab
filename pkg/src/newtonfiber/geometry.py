"""Newton diagrams, polygons, dual fans, and face polynomials.

The diagram of a support set E is the convex hull of E + (R>=0)^2, encoded
by its finite ordered vertex list (a increasing, b decreasing).  Compact
faces are the vertices and the segments between consecutive vertices; a
segment's primitive inward normal (p, q) has p, q >= 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import gcd

from .polynomials import BiPoly, UniPoly, factor_over_tower


class GeometryError(ValueError):
    pass


def _pareto_minimal(points):
    by_a = {}
    for a, b in points:
        if a not in by_a or b < by_a[a]:
            by_a[a] = b
    staircase = sorted(by_a.items())
    out = []
    best = None
    for a, b in staircase:
        if best is None or b < best:
            out.append((a, b))
            best = b
    return out


def _lower_hull(points):
    """Vertices of the lower-left hull of a b-decreasing staircase."""
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (a1, b1), (a2, b2) = hull[-2], hull[-1]
            # keep hull[-1] only if it lies strictly below segment hull[-2]->pt
            cross = (a2 - a1) * (pt[1] - b1) - (pt[0] - a1) * (b2 - b1)
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


class NewtonDiagram:
    """Ordered vertex list of Delta(E) plus the generating support."""

    def __init__(self, support):
        support = sorted(set((int(a), int(b)) for a, b in support))
        if not support:
            raise GeometryError("empty support has no Newton diagram")
        self.support = tuple(support)
        self.vertices = tuple(_lower_hull(_pareto_minimal(support)))

    def __repr__(self):
        return "NewtonDiagram(vertices=%r)" % (list(self.vertices),)

    def __eq__(self, other):
        return isinstance(other, NewtonDiagram) and self.vertices == other.vertices

    @property
    def vertical_vertex(self):
        return self.vertices[0]

    @property
    def horizontal_vertex(self):
        return self.vertices[-1]

    def height(self):
        return self.vertices[0][1] - self.vertices[-1][1]

    def segments(self):
        out = []
        for v0, v1 in zip(self.vertices, self.vertices[1:]):
            out.append(Face.segment(v0, v1))
        return out

    def faces(self):
        out = [Face.vertex(v) for v in self.vertices]
        out.extend(self.segments())
        return out

    def support_function(self, p, q):
        """(min of ap+bq over the diagram, minimizing face)."""
        if (p, q) == (0, 0):
            raise GeometryError("zero direction")
        if p < 0 or q < 0:
            raise GeometryError("direction must be in the closed positive quadrant")
        if gcd(p, q) != 1:
            raise GeometryError("direction (%d, %d) is not primitive" % (p, q))
        vals = [(a * p + b * q, (a, b)) for a, b in self.vertices]
        m = min(v for v, _ in vals)
        argmins = [pt for v, pt in vals if v == m]
        if len(argmins) == 1:
            return m, Face.vertex(argmins[0])
        if len(argmins) == 2:
            return m, Face.segment(argmins[0], argmins[1])
        raise GeometryError("support function minimized on three vertices")

    def to_json(self):
        return {"vertices": [list(v) for v in self.vertices],
                "height": self.height()}


@dataclass(frozen=True)
class Face:
    """Compact face of a Newton polygon: a vertex or a segment."""

    kind: str                  # "vertex" | "segment"
    points: tuple              # (pt,) or (start, end) with start.a < end.a
    normal: tuple = None       # primitive (p, q) for segments
    level: int = None          # ap + bq on the supporting line

    @staticmethod
    def vertex(pt):
        return Face("vertex", (tuple(pt),))

    @staticmethod
    def segment(v0, v1):
        (a0, b0), (a1, b1) = v0, v1
        if a0 > a1:
            (a0, b0), (a1, b1) = (a1, b1), (a0, b0)
        da, db = a1 - a0, b0 - b1
        g = gcd(da, db)
        p, q = db // g, da // g
        return Face("segment", ((a0, b0), (a1, b1)), (p, q), a0 * p + b0 * q)

    @property
    def dim(self):
        return 0 if self.kind == "vertex" else 1

    @property
    def point(self):
        return self.points[0]

    @property
    def start(self):
        return self.points[0]

    @property
    def end(self):
        return self.points[-1]

    def lattice_points(self):
        if self.kind == "vertex":
            return [self.points[0]]
        (a0, b0), (a1, b1) = self.points
        p, q = self.normal
        k = (a1 - a0) // q
        return [(a0 + i * q, b0 - i * p) for i in range(k + 1)]

    def lattice_length(self):
        if self.kind == "vertex":
            return 0
        return (self.end[0] - self.start[0]) // self.normal[1]

    def to_json(self):
        d = {"kind": self.kind, "points": [list(p) for p in self.points]}
        if self.kind == "segment":
            d["normal"] = list(self.normal)
            d["level"] = self.level
        return d


def diagram_of(P: BiPoly, mode="full"):
    """Newton diagram of P; mode "prime" drops the support on the x-axis."""
    if P.is_zero():
        raise GeometryError("the zero polynomial has no Newton diagram")
    supp = P.support
    if mode == "prime":
        supp = {(a, b) for a, b in supp if b > 0}
        if not supp:
            raise GeometryError("support lies entirely on the x-axis")
    elif mode != "full":
        raise GeometryError("unknown diagram mode %r" % mode)
    return NewtonDiagram(supp)


@dataclass(frozen=True)
class FaceOrbit:
    """One Galois orbit of roots of a face polynomial.

    ``minpoly`` is monic over the coefficient tower; ``size`` its degree
    (number of conjugate roots), ``multiplicity`` the shared root
    multiplicity.  ``root`` is the explicit field element for size 1.
    """

    minpoly: UniPoly
    size: int
    multiplicity: int
    certified: bool
    root: object = None

    def sort_key(self):
        K = self.minpoly.field
        return (self.size, self.multiplicity,
                tuple(K.sort_key(c) for c in self.minpoly.coeffs))

    def to_json(self):
        return {"minpoly": self.minpoly.to_str(), "orbit_size": self.size,
                "multiplicity": self.multiplicity}


@dataclass(frozen=True)
class FacePolynomial:
    """Factored restriction of a polynomial to one face.

    Reconstruction: lead * x^prefix_a * y^prefix_b * prod (y^p - mu x^q)^nu
    over all orbit roots equals the face polynomial exactly.
    """

    face: Face
    prefix: tuple          # (a_gamma, b_gamma)
    lead: object           # scalar
    orbits: tuple          # FaceOrbit list; empty for vertex faces
    zform: UniPoly = None  # z-substituted form, segments only

    def roots_count(self):
        return sum(o.size for o in self.orbits)

    def has_multiple_root(self):
        return any(o.multiplicity > 1 for o in self.orbits)

    def to_json(self):
        return {"face": self.face.to_json(),
                "prefix": list(self.prefix),
                "orbits": [o.to_json() for o in self.orbits]}


def face_restriction(P: BiPoly, face: Face):
    """The raw face polynomial P_gamma as a BiPoly."""
    K = P.field
    pts = set(face.lattice_points())
    return BiPoly(K, {k: c for k, c in P.terms.items() if k in pts})


def zform_of_segment(P: BiPoly, face: Face):
    """z-form F with F(z) = sum c_k z^(K-k) along the segment lattice points."""
    K = P.field
    (a0, b0), _ = face.points
    p, q = face.normal
    length = face.lattice_length()
    coeffs = []
    for k in range(length + 1):
        coeffs.append(P.coefficient(a0 + k * q, b0 - k * p))
    coeffs.reverse()   # constant term corresponds to k = length
    return UniPoly(K, coeffs)


def face_polynomial(P: BiPoly, face: Face):
    """Factored face polynomial of P along ``face``."""
    K = P.field
    if face.kind == "vertex":
        a, b = face.point
        c = P.coefficient(a, b)
        if K.is_zero(c):
            raise GeometryError("vertex (%d, %d) carries no coefficient" % (a, b))
        return FacePolynomial(face, (a, b), c, ())
    F = zform_of_segment(P, face)
    unit, factors = factor_over_tower(F)
    orbits = []
    for g, mult, certified in factors:
        root = None
        if g.degree == 1:
            root = K.neg(g.coeffs[0])
        orbits.append(FaceOrbit(g, g.degree, mult, certified, root))
    orbits.sort(key=lambda o: o.sort_key())
    (a0, b0), (a1, b1) = face.points
    return FacePolynomial(face, (a0, b1), F.leading(), tuple(orbits), F)


def smoothness(P: BiPoly, face: Face):
    """Smoothness witnesses of a face: returns {"x": v, "y": v} entries.

    A face is y-smooth when it carries points (x_v, 1) and (x_w, 0) with
    nonzero coefficients, x_v < x_w; x-smooth symmetrically.  The witness
    value stored is the off-axis point v of the defining pair.
    """
    K = P.field
    pts = [pt for pt in face.lattice_points()
           if not K.is_zero(P.coefficient(*pt))]
    out = {}
    ys1 = [pt for pt in pts if pt[1] == 1]
    ys0 = [pt for pt in pts if pt[1] == 0]
    for v in ys1:
        if any(w[0] > v[0] for w in ys0):
            out["y"] = v
            break
    xs1 = [pt for pt in pts if pt[0] == 1]
    xs0 = [pt for pt in pts if pt[0] == 0]
    for v in xs1:
        if any(w[1] > v[1] for w in xs0):
            out["x"] = v
            break
    return out


def is_smooth_face(P: BiPoly, face: Face):
    """"x-smooth" / "y-smooth" / "not smooth" classification."""
    w = smoothness(P, face)
    if "y" in w:
        return "y-smooth"
    if "x" in w:
        return "x-smooth"
    return "not smooth"


def is_nondegenerate(P: BiPoly):
    """True iff every segment face polynomial has only simple roots."""
    if P.is_zero():
        raise GeometryError("zero polynomial")
    D = diagram_of(P)
    for seg in D.segments():
        if face_polynomial(P, seg).has_multiple_root():
            return False
    return True


# --- dual fans and the common refinement ---

@dataclass(frozen=True)
class DualCone:
    """Relatively open cone of the dual fan: a ray or an open 2-cone."""

    kind: str          # "ray" | "cone2"
    gens: tuple        # (w,) or (w1, w2), primitive, angle-ordered
    face: Face = None

    def interior_direction(self):
        if self.kind == "ray":
            return self.gens[0]
        (p1, q1), (p2, q2) = self.gens
        p, q = p1 + p2, q1 + q2
        g = gcd(p, q)
        return (p // g, q // g)

    def to_json(self):
        d = {"kind": self.kind, "generators": [list(g) for g in self.gens]}
        if self.face is not None:
            d["face"] = self.face.to_json()
        return d


def _ray_sort_key(r):
    p, q = r
    return (q * 10**9 // max(p, 1) if p else 10**18, q, -p)


def _sorted_rays(rays):
    # sort by angle from (1,0) toward (0,1): q1/p1 < q2/p2
    def key(r):
        return (r[1], r[0]) if r[0] == 0 else None

    uniq = sorted(set(rays))

    def angle_lt(r1, r2):
        return r1[1] * r2[0] < r2[1] * r1[0]

    # simple insertion sort by the exact fraction q/p (p >= 1 for interior rays)
    out = []
    for r in uniq:
        i = 0
        while i < len(out) and angle_lt(out[i], r):
            i += 1
        out.insert(i, r)
    return out


def dual_fan(D: NewtonDiagram):
    """Cones of the dual fan, swept from the (1,0) side to the (0,1) side.

    2-cones are listed with their vertex faces; interior rays with their
    segment faces.  The boundary rays (1,0) and (0,1) appear only as
    generators of the extreme 2-cones.
    """
    segs = D.segments()
    rays = [s.normal for s in segs]
    cones = []
    left = (1, 0)
    for i, v in enumerate(D.vertices):
        right = rays[i] if i < len(rays) else (0, 1)
        cones.append(DualCone("cone2", (left, right), Face.vertex(v)))
        if i < len(rays):
            cones.append(DualCone("ray", (rays[i],), segs[i]))
        left = right
    return cones


@dataclass(frozen=True)
class ConeEc:
    """Cone of the refined fan with its associated pair of faces."""

    kind: str
    gens: tuple
    face_w: Face      # face of the working polynomial (P - cQ side)
    face_q: Face      # face of the denominator polynomial
    is_cv: bool = False
    is_ch: bool = False

    def interior_direction(self):
        return DualCone(self.kind, self.gens).interior_direction()

    def to_json(self):
        return {"kind": self.kind,
                "generators": [list(g) for g in self.gens],
                "face_numerator_pencil": self.face_w.to_json(),
                "face_denominator": self.face_q.to_json(),
                "is_Cv": self.is_cv, "is_Ch": self.is_ch}


class FanEc:
    """Coarsest common refinement of the dual fans of two diagrams."""

    def __init__(self, dw: NewtonDiagram, dq: NewtonDiagram):
        rays = _sorted_rays([s.normal for s in dw.segments()]
                            + [s.normal for s in dq.segments()])
        self.rays = rays
        cones = []
        boundary = [(1, 0)] + rays + [(0, 1)]
        for left, right in zip(boundary, boundary[1:]):
            c = DualCone("cone2", (left, right))
            d = c.interior_direction()
            _, fw = dw.support_function(*d)
            _, fq = dq.support_function(*d)
            cones.append(ConeEc("cone2", (left, right), fw, fq))
        for r in rays:
            _, fw = dw.support_function(*r)
            _, fq = dq.support_function(*r)
            if fw.dim == 0 and fq.dim == 0:
                raise GeometryError("merged ray %r is dual to no segment" % (r,))
            cones.append(ConeEc("ray", (r,), fw, fq))
        # tag C_v (first 2-cone) and C_h (last 2-cone)
        two = [c for c in cones if c.kind == "cone2"]
        tagged = []
        for c in cones:
            is_cv = c.kind == "cone2" and c.gens[0] == (1, 0)
            is_ch = c.kind == "cone2" and c.gens[1] == (0, 1)
            tagged.append(ConeEc(c.kind, c.gens, c.face_w, c.face_q, is_cv, is_ch))
        self.cones = tagged

    def two_cones(self):
        return [c for c in self.cones if c.kind == "cone2"]

    def ray_cones(self):
        return [c for c in self.cones if c.kind == "ray"]

    def to_json(self):
        return {"rays": [list(r) for r in self.rays],
                "cones": [c.to_json() for c in self.cones]}


def fan_Ec(W: BiPoly, Q: BiPoly):
    """Refined fan of the pair (W, Q) with per-cone face annotations."""
    if W.is_zero() or Q.is_zero():
        raise GeometryError("fan of a zero polynomial")
    if (W.is_x_only() and Q.is_x_only()) or (W.is_y_only() and Q.is_y_only()):
        raise GeometryError("degenerate pair: both polynomials in one variable")
    return FanEc(diagram_of(W), diagram_of(Q))
