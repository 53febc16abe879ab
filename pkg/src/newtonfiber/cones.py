"""Rational cone series and the epsilon coefficients of the fiber formula.

A cone series sums L^(-eta(k,l)) T^(phi(k,l)) over the lattice points of a
rational cone, graded by phi.  Its closed form is a finite sum of geometric
kernels; the T -> infinity limit equals the compactly supported Euler
characteristic of the cone and depends only on the cone kind.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class ConeError(ValueError):
    pass


@dataclass(frozen=True)
class LinearForm:
    a: int
    b: int

    def __call__(self, v):
        return self.a * v[0] + self.b * v[1]

    def to_json(self):
        return [self.a, self.b]


@dataclass(frozen=True)
class Cone2:
    """Ray, open 2-cone, or half-open 2-cone (first generator closed)."""

    kind: str       # "ray" | "open2" | "halfopen"
    gens: tuple

    def __post_init__(self):
        for p, q in self.gens:
            if (p, q) == (0, 0) or gcd(abs(p), abs(q)) != 1:
                raise ConeError("generators must be primitive and nonzero")
        if self.kind == "ray":
            if len(self.gens) != 1:
                raise ConeError("a ray has one generator")
        elif self.kind in ("open2", "halfopen"):
            (p1, q1), (p2, q2) = self.gens
            if p1 * q2 - p2 * q1 == 0:
                raise ConeError("2-cone generators must not be colinear")
        else:
            raise ConeError("unknown cone kind %r" % self.kind)

    def contains(self, v):
        if self.kind == "ray":
            p, q = self.gens[0]
            k, l = v
            return k * q == l * p and (k * p + l * q) > 0
        (p1, q1), (p2, q2) = self.gens
        det = p1 * q2 - p2 * q1
        a = Fraction(v[0] * q2 - v[1] * p2, det)
        b = Fraction(p1 * v[1] - q1 * v[0], det)
        if self.kind == "open2":
            return a > 0 and b > 0
        return a >= 0 and b > 0

    def chi_c(self):
        return {"open2": 1, "ray": -1, "halfopen": 0}[self.kind]


def _check_positive(phi: LinearForm, cone: Cone2):
    for g in cone.gens:
        if phi(g) <= 0:
            raise ConeError("grading form is not positive on generator %r" % (g,))


def cone_series_limit(phi: LinearForm, eta: LinearForm, cone: Cone2):
    """T -> infinity limit of the cone series: the Euler characteristic."""
    _check_positive(phi, cone)
    return cone.chi_c()


def fundamental_parallelepiped(gens):
    """Lattice points of (]0,1] w1 + ]0,1] w2)."""
    (p1, q1), (p2, q2) = gens
    det = p1 * q2 - p2 * q1
    xs = [0, p1, p2, p1 + p2]
    ys = [0, q1, q2, q1 + q2]
    pts = []
    for k in range(min(xs), max(xs) + 1):
        for l in range(min(ys), max(ys) + 1):
            a = Fraction(k * q2 - l * p2, det)
            b = Fraction(p1 * l - q1 * k, det)
            if 0 < a <= 1 and 0 < b <= 1:
                pts.append((k, l))
    pts.sort()
    return pts


@dataclass(frozen=True)
class GeometricTerm:
    """L^(-e0) T^(s0) divided by prod (1 - L^(-e) T^(s)) over kernels."""

    num: tuple        # (e0, s0)
    kernels: tuple    # ((e, s), ...)

    def to_json(self):
        return {"numerator": {"L_exp": -self.num[0], "T_exp": self.num[1]},
                "kernels": [{"L_exp": -e, "T_exp": s} for e, s in self.kernels]}


class ConeSeries:
    """Finite sum of geometric terms; expandable to any T-order."""

    def __init__(self, terms):
        self.terms = tuple(terms)

    def expand(self, order):
        """Coefficients up to T^order as {T_exp: {L_exp: int}}."""
        out = {}
        for term in self.terms:
            e0, s0 = term.num
            partial = {s0: {-e0: 1}}
            for (e, s) in term.kernels:
                new = {}
                for texp, lcoeffs in partial.items():
                    k = 0
                    while texp + k * s <= order:
                        for lexp, c in lcoeffs.items():
                            tgt = new.setdefault(texp + k * s, {})
                            key = lexp - k * e
                            tgt[key] = tgt.get(key, 0) + c
                        k += 1
                partial = new
            for texp, lcoeffs in partial.items():
                if texp > order:
                    continue
                tgt = out.setdefault(texp, {})
                for lexp, c in lcoeffs.items():
                    tgt[lexp] = tgt.get(lexp, 0) + c
        for texp in list(out):
            out[texp] = {k: v for k, v in out[texp].items() if v}
            if not out[texp]:
                del out[texp]
        return out

    def to_json(self):
        return [t.to_json() for t in self.terms]


def cone_series_closed_form(phi: LinearForm, eta: LinearForm, cone: Cone2):
    """Exact closed form of the cone series as a sum of geometric kernels."""
    _check_positive(phi, cone)
    if cone.kind == "ray":
        w = cone.gens[0]
        return ConeSeries([GeometricTerm((eta(w), phi(w)), ((eta(w), phi(w)),))])
    w1, w2 = cone.gens
    kernels = ((eta(w1), phi(w1)), (eta(w2), phi(w2)))
    terms = [GeometricTerm((eta(v), phi(v)), kernels)
             for v in fundamental_parallelepiped(cone.gens)]
    if cone.kind == "halfopen":
        terms.append(GeometricTerm((eta(w2), phi(w2)), ((eta(w2), phi(w2)),)))
    return ConeSeries(terms)


def brute_force_sum(phi: LinearForm, eta: LinearForm, cone: Cone2, order):
    """Direct lattice summation of the cone series up to T^order."""
    _check_positive(phi, cone)
    # the grading is positive on the cone, so |v| is bounded per grade
    bound = 0
    for g in cone.gens:
        bound = max(bound, abs(g[0]) + abs(g[1]))
    # phi(v) >= 1 forces v within a box of size order * bound
    box = order * bound + 1
    out = {}
    for k in range(-box, box + 1):
        for l in range(-box, box + 1):
            v = (k, l)
            if v == (0, 0) or not cone.contains(v):
                continue
            n = phi(v)
            if 1 <= n <= order:
                tgt = out.setdefault(n, {})
                key = -eta(v)
                tgt[key] = tgt.get(key, 0) + 1
    for n in list(out):
        out[n] = {k: v for k, v in out[n].items() if v}
        if not out[n]:
            del out[n]
    return out


# --- epsilon predicates of the fiber formula ---

@dataclass(frozen=True)
class EpsDim2:
    """Coefficient and class shape produced by a 2-cone of the refined fan.

    ``shape`` is "axis-x" or "axis-y" (one-torus monomial class, epsilon in
    {0, 1}, additive) or "interior" (full two-torus fraction class entering
    with a minus sign, epsilon in {0, 1}).
    """

    shape: str
    eps: int
    diff: tuple    # (a0 - a1, b0 - b1)


def eps_dim2(face_w, face_q, gens):
    """Epsilon of a 2-cone with vertex faces face_w, face_q and generators."""
    if face_w.dim != 0 or face_q.dim != 0:
        raise ConeError("2-cone faces must be vertices")
    (a0, b0), (a1, b1) = face_w.point, face_q.point
    diff = (a0 - a1, b0 - b1)
    if b0 == 0 and b1 == 0:
        return EpsDim2("axis-x", 1 if a0 > a1 else 0, diff)
    if a0 == 0 and a1 == 0:
        return EpsDim2("axis-y", 1 if b0 > b1 else 0, diff)
    w1, w2 = gens
    pos = (w1[0] * diff[0] + w1[1] * diff[1] > 0
           and w2[0] * diff[0] + w2[1] * diff[1] > 0)
    return EpsDim2("interior", 1 if pos else 0, diff)


def eps_dim1(face_w, face_q, ray):
    """Epsilon in {-1, 0} of a 1-cone: -1 iff the level difference is positive.

    The pairing of (chosen point of face_w) - (chosen point of face_q) with
    the ray is constant on the faces, so any representatives work.
    """
    p, q = ray
    (a0, b0) = face_w.points[0]
    (a1, b1) = face_q.points[0]
    return -1 if (a0 - a1) * p + (b0 - b1) * q > 0 else 0
