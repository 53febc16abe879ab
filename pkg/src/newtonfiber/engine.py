"""Recursive evaluation of the motivic Milnor fiber of a plane-curve pencil.

Given the working pair (W, Q) = (P - cQ, Q) vanishing at the origin, the
fiber motive is assembled cone by cone over the refined fan:

* each 2-cone contributes a one-torus monomial class (both faces on the
  same axis) or minus a full-torus monomial class, gated by its epsilon;
* each interior ray contributes the removed-locus fraction class of its
  face pair when the level difference is positive, plus one recursive
  summand per root orbit of either face polynomial (a union: shared roots
  recurse once);
* base-case pairs (monomial-times-unit or a shared smooth branch) stop the
  recursion with closed-form motives.

Root orbits of degree k are followed once over the extension by the orbit
generator and weighted by k; if an uncertified modulus later exposes a zero
divisor, the orbit splits and both halves are recomputed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cones import eps_dim1, eps_dim2
from .fields import QQ, ExtensionField, Field, SplitRequired
from .geometry import (Face, FanEc, GeometryError, diagram_of, dual_fan,
                       face_polynomial, fan_Ec, zform_of_segment)
from .motives import BranchRef, Motive, field_signature, fraction_class, torus1, torus2
from .polynomials import BiPoly, UniPoly, factor_over_tower
from .transforms import (Dim1Dim1Shape, MonMonShape, apply_map,
                         detect_base_case, make_newton_map,
                         smooth_branch_shape)


class EngineError(Exception):
    pass


class DegeneratePairError(EngineError):
    pass


class NotIndeterminatePointError(EngineError):
    pass


class RecursionBudgetExceeded(EngineError):
    def __init__(self, trail):
        self.trail = trail
        super().__init__(
            "transform budget exhausted without reaching a base case; "
            "trail:\n" + "\n".join(trail))


INFINITY = "inf"


# --- branch bookkeeping ---

def _root_branch(field, mu):
    return BranchRef(field_signature(field), "root:%s" % field.to_str(mu), 1)


def _orbit_branch(field, minpoly: UniPoly):
    return BranchRef(field_signature(field), "orbit:%s" % minpoly.to_str(), minpoly.degree)


def _branch_of_factor(field, h: UniPoly):
    if h.degree == 1:
        return _root_branch(field, field.neg(h.coeffs[0]))
    return _orbit_branch(field, h)


@dataclass
class RayOrbit:
    """One factor of the gcd-refined common basis of a ray's face roots."""

    minpoly: UniPoly
    certified: bool
    mult_w: int
    mult_q: int


def _coprime_refine(entries):
    """Refine [(poly, cert, mw, mq)] to a pairwise coprime common basis."""
    work = list(entries)
    out = []
    while work:
        h, ch, mw, mq = work.pop()
        split = False
        for i, (g, cg, nw, nq) in enumerate(work):
            d = h.gcd(g)
            if d.degree == 0 or (d.degree == h.degree and d.degree == g.degree):
                continue
            # proper overlap: refine both entries
            work.pop(i)
            rest_h = h.exact_div(d)
            rest_g = g.exact_div(d)
            work.append((d, False, mw + nw, mq + nq))
            if rest_h.degree > 0:
                work.append((rest_h, False, mw, mq))
            if rest_g.degree > 0:
                work.append((rest_g, False, nw, nq))
            split = True
            break
        if not split:
            out.append((h, ch, mw, mq))
    merged = {}
    for h, ch, mw, mq in out:
        key = h.coeffs
        if key in merged:
            old = merged[key]
            merged[key] = RayOrbit(h, old.certified and ch,
                                   old.mult_w + mw, old.mult_q + mq)
        else:
            merged[key] = RayOrbit(h, ch, mw, mq)
    return sorted(merged.values(),
                  key=lambda r: tuple(r.minpoly.field.sort_key(c)
                                      for c in r.minpoly.coeffs))


def _ray_data(W: BiPoly, Qp: BiPoly, cone):
    """Prefixes, refined root orbits, and levels for a 1-cone of the fan."""
    p, q = cone.gens[0]
    entries = []
    prefixes = []
    levels = []
    for poly, face, tag in ((W, cone.face_w, "w"), (Qp, cone.face_q, "q")):
        if face.dim == 0:
            a, b = face.point
            prefixes.append((a, b))
            levels.append(a * p + b * q)
            continue
        F = zform_of_segment(poly, face)
        (a0, b0), (a1, b1) = face.points
        prefixes.append((a0, b1))
        levels.append(a0 * p + b0 * q)
        _, factors = factor_over_tower(F)
        for h, mult, cert in factors:
            if tag == "w":
                entries.append((h, cert, mult, 0))
            else:
                entries.append((h, cert, 0, mult))
    orbits = _coprime_refine(entries)
    return prefixes, levels, orbits


def _fraction_motive(field, p, q, prefixes, orbits):
    (aw, bw), (aq, bq) = prefixes
    mono = (aw - aq, bw - bq)
    factors = []
    removed = []
    for o in orbits:
        br = _branch_of_factor(field, o.minpoly)
        factors.append((br, o.mult_w - o.mult_q))
        removed.append(br)
    return fraction_class(p, q, mono, factors, removed)


# --- base-case motives ---

def monmon_motive(shape: MonMonShape) -> Motive:
    M1, m1, M2, m2 = shape.M1, shape.m1, shape.M2, shape.m2
    if (M1, m1) == (0, 0) or (M2, m2) == (0, 0):
        raise EngineError("monomial base case with a unit member")
    if (M1 == 0 and m2 == 0) or (M2 == 0 and m1 == 0):
        return Motive.zero()
    if M1 == M2:
        if M1 == 0:
            return torus1(m1 - m2) if m1 > m2 else Motive.zero()
        return Motive.zero()
    if m1 == m2:
        if m1 == 0:
            return torus1(M1 - M2) if M1 > M2 else Motive.zero()
        return Motive.zero()
    if M1 > M2 and m1 > m2:
        return -torus2(M1 - M2, m1 - m2)
    return Motive.zero()


def dim1dim1_motive(shape: Dim1Dim1Shape, field: Field) -> Motive:
    M1, m1, M2, m2, q = shape.M1, shape.m1, shape.M2, shape.m2, shape.q
    A = M1 - M2
    d = m1 - m2
    N = A + q * d
    total = Motive.zero()
    if N > 0:
        total = total + torus1(N)
    if M1 == 0 and M2 == 0:
        if d > 0:
            total = total + torus1(d)
    elif A > 0 and N > 0:
        total = total - torus2(A, d)
    if N > 0:
        br = _root_branch(field, field.coerce(shape.mu))
        total = total + fraction_class(1, q, (A, 0), ((br, d),), (br,))
    if d > 0 and N > 0:
        total = total - torus2(A, d)
    return total


def base_case_motive(shape, field: Field) -> Motive:
    if isinstance(shape, MonMonShape):
        return monmon_motive(shape)
    if isinstance(shape, Dim1Dim1Shape):
        return dim1dim1_motive(shape, field)
    raise EngineError("unknown base-case shape %r" % (shape,))


def _shape_json(shape, field):
    if shape is None:
        return None
    d = {"kind": shape.kind, "M1": shape.M1, "m1": shape.m1,
         "M2": shape.M2, "m2": shape.m2}
    if isinstance(shape, Dim1Dim1Shape):
        d["q"] = shape.q
        d["mu"] = field.to_str(field.coerce(shape.mu))
    return d


# --- the pair recursion ---

def _pair_motive(W: BiPoly, Qp: BiPoly, budget: int, trail):
    K = W.field
    node = {"field": field_signature(K),
            "pair": [W.to_str(), Qp.to_str()],
            "base_case": None, "cones": [], "children": []}
    shape = detect_base_case(W, Qp)
    if shape is not None:
        motive = base_case_motive(shape, K)
        node["base_case"] = _shape_json(shape, K)
        node["motive"] = motive.to_json()
        return motive, node
    if budget <= 0:
        raise RecursionBudgetExceeded(trail + ["pair (%s ; %s)" % (W.to_str(), Qp.to_str())])
    fan = fan_Ec(W, Qp)
    total = Motive.zero()
    for cone in fan.cones:
        info = {"cone": cone.to_json()}
        if cone.kind == "cone2":
            e = eps_dim2(cone.face_w, cone.face_q, cone.gens)
            info["eps"] = e.eps
            info["shape"] = e.shape
            if e.eps:
                if e.shape == "axis-x":
                    term = torus1(e.diff[0])
                elif e.shape == "axis-y":
                    term = torus1(e.diff[1])
                else:
                    term = -torus2(*e.diff)
                info["term"] = term.to_json()
                total = total + term
            node["cones"].append(info)
            continue
        p, q = cone.gens[0]
        prefixes, levels, orbits = _ray_data(W, Qp, cone)
        e = eps_dim1(cone.face_w, cone.face_q, (p, q))
        info["eps"] = e
        if e == -1:
            term = _fraction_motive(K, p, q, prefixes, orbits)
            info["term"] = term.to_json()
            total = total + term
        node["cones"].append(info)
        for orbit in orbits:
            sub, children = _follow_orbit(W, Qp, p, q, orbit.minpoly,
                                          orbit.certified, budget, trail)
            total = total + sub
            node["children"].extend(children)
    node["motive"] = total.to_json()
    return total, node


def _follow_orbit(W, Qp, p, q, minpoly: UniPoly, certified, budget, trail):
    """Recurse along every root of ``minpoly``; returns (motive, child nodes).

    Degree-one factors recurse in the current field; larger orbits adjoin
    the generator and scale the child by the orbit size.  ``SplitRequired``
    from the adjoined level splits the orbit and retries.
    """
    K = W.field
    total = Motive.zero()
    children = []
    stack = [(minpoly, certified)]
    while stack:
        h, cert = stack.pop()
        if h.degree == 1:
            mu = K.neg(h.coeffs[0])
            nm = make_newton_map(p, q, mu, K)
            step = "sigma(%d,%d,%s)" % (p, q, K.to_str(mu))
            sub, child = _pair_motive(apply_map(W, nm), apply_map(Qp, nm),
                                      budget - 1, trail + [step])
            child["map"] = nm.to_json(K)
            child["weight"] = 1
            total = total + sub
            children.append(child)
            continue
        name = "mu%d" % (K.tower_depth() + 1)
        E = ExtensionField(K, h.coeffs, name, certified=cert)
        try:
            W2 = W.map_field(E)
            Q2 = Qp.map_field(E)
            nm = make_newton_map(p, q, E.generator, E)
            step = "sigma(%d,%d,%s root of %s)" % (p, q, name, h.to_str())
            sub, child = _pair_motive(apply_map(W2, nm), apply_map(Q2, nm),
                                      budget - 1, trail + [step])
            child["map"] = nm.to_json(E)
            child["weight"] = h.degree
            total = total + sub.scale_int(h.degree)
            children.append(child)
        except SplitRequired as sp:
            if sp.field is not E:
                raise
            g = UniPoly(K, sp.factor)
            stack.append((g, False))
            stack.append((h.exact_div(g), False))
    return total, children


# --- public entry points ---

def translate_to_origin(P: BiPoly, Q: BiPoly, point):
    x0, y0 = point
    K = P.field
    P2 = P.translate(x0, y0)
    Q2 = Q.translate(x0, y0)
    if not (P2.vanishes_at_origin() and Q2.vanishes_at_origin()):
        raise NotIndeterminatePointError(
            "point (%s, %s) is not a common zero of P and Q"
            % (K.to_str(K.coerce(x0)), K.to_str(K.coerce(y0))))
    return P2, Q2


def _validate_pair(P: BiPoly, Q: BiPoly):
    if P.is_zero() or Q.is_zero():
        raise DegeneratePairError("P and Q must both be nonzero")
    if (P.is_x_only() and Q.is_x_only()) or (P.is_y_only() and Q.is_y_only()):
        raise DegeneratePairError("the pair lies in k[x]^2 or k[y]^2")


def default_budget(P: BiPoly, Q: BiPoly) -> int:
    return 4 * (max(P.total_degree(), 0) + max(Q.total_degree(), 0))


@dataclass
class FiberResult:
    motive: Motive
    tree: dict
    value_kind: str       # "finite" | "inf"
    working_pair: tuple   # (W, denominator)


def motivic_milnor_fiber(P: BiPoly, Q: BiPoly, value, point=(0, 0)) -> FiberResult:
    """Motivic Milnor fiber of [P : Q] at ``point`` for ``value``.

    ``value`` is a scalar of P's field (or coercible) or the string "inf";
    the infinite value swaps the pair and evaluates Q - 0*P against P.
    """
    _validate_pair(P, Q)
    P, Q = translate_to_origin(P, Q, point)
    K = P.field
    if value == INFINITY:
        W, den = Q, P
        kind = INFINITY
    else:
        c = K.coerce(value)
        W = P - Q.scale(c)
        den = Q
        kind = "finite"
        if W.is_zero():
            raise DegeneratePairError("P - c*Q vanishes identically: f is constant")
    _validate_pair(W, den)
    budget = default_budget(P, Q)
    motive, tree = _pair_motive(W, den, budget, [])
    tree["map"] = None
    tree["weight"] = 1
    return FiberResult(motive, tree, kind, (W, den))


# --- single-polynomial fiber (classical Newton-algorithm recursion) ---

def _single_shape(F: BiPoly):
    """(kind, data) for closed-form shapes of one polynomial, else None."""
    M = F.x_valuation()
    V = F.shift_monomial(-M, 0)
    m = V.y_valuation()
    U = V.shift_monomial(0, -m)
    if U.is_unit_at_origin():
        return ("mono", M, m, None, None)
    if m == 0:
        s = smooth_branch_shape(V)
        if s is not None and s[2] >= 1:
            q, mu, mm = s
            return ("branch", M, mm, q, mu)
    return None


def _single_shape_motive(shape):
    _, M, m, _, _ = shape
    if M >= 1 and m >= 1:
        return -torus2(M, m)
    if M >= 1:
        return torus1(M)
    if m >= 1:
        return torus1(m)
    raise EngineError("single-polynomial shape is a unit at the origin")


def _single_motive(F: BiPoly, budget: int, trail):
    K = F.field
    node = {"field": field_signature(K), "pair": [F.to_str()],
            "base_case": None, "cones": [], "children": []}
    shape = _single_shape(F)
    if shape is not None:
        motive = _single_shape_motive(shape)
        node["base_case"] = {"kind": shape[0], "M": shape[1], "m": shape[2]}
        node["motive"] = motive.to_json()
        return motive, node
    if budget <= 0:
        raise RecursionBudgetExceeded(trail + ["poly %s" % F.to_str()])
    D = diagram_of(F)
    origin = Face.vertex((0, 0))
    total = Motive.zero()
    for cone in dual_fan(D):
        if cone.kind == "cone2":
            e = eps_dim2(cone.face, origin, cone.gens)
            if e.eps:
                if e.shape == "axis-x":
                    total = total + torus1(e.diff[0])
                elif e.shape == "axis-y":
                    total = total + torus1(e.diff[1])
                else:
                    total = total - torus2(*e.diff)
            continue
        p, q = cone.gens[0]
        face = cone.face
        Fz = zform_of_segment(F, face)
        (a0, b0), (a1, b1) = face.points
        _, factors = factor_over_tower(Fz)
        orbits = [RayOrbit(h, cert, mult, 0) for h, mult, cert in factors]
        term = _fraction_motive(K, p, q, [(a0, b1), (0, 0)], orbits)
        total = total + term
        for o in orbits:
            sub, children = _follow_single_orbit(F, p, q, o.minpoly, o.certified,
                                                 budget, trail)
            total = total + sub
            node["children"].extend(children)
    node["motive"] = total.to_json()
    return total, node


def _follow_single_orbit(F, p, q, minpoly, certified, budget, trail):
    K = F.field
    total = Motive.zero()
    children = []
    stack = [(minpoly, certified)]
    while stack:
        h, cert = stack.pop()
        if h.degree == 1:
            mu = K.neg(h.coeffs[0])
            nm = make_newton_map(p, q, mu, K)
            sub, child = _single_motive(apply_map(F, nm), budget - 1,
                                        trail + ["sigma(%d,%d,%s)" % (p, q, K.to_str(mu))])
            child["map"] = nm.to_json(K)
            child["weight"] = 1
            total = total + sub
            children.append(child)
            continue
        E = ExtensionField(K, h.coeffs, "mu%d" % (K.tower_depth() + 1), certified=cert)
        try:
            F2 = F.map_field(E)
            nm = make_newton_map(p, q, E.generator, E)
            sub, child = _single_motive(apply_map(F2, nm), budget - 1,
                                        trail + ["sigma(%d,%d,orbit)" % (p, q)])
            child["map"] = nm.to_json(E)
            child["weight"] = h.degree
            total = total + sub.scale_int(h.degree)
            children.append(child)
        except SplitRequired as sp:
            if sp.field is not E:
                raise
            g = UniPoly(K, sp.factor)
            stack.append((g, False))
            stack.append((h.exact_div(g), False))
    return total, children


def single_poly_motive(F: BiPoly):
    """Motivic Milnor fiber of one polynomial germ at the origin."""
    if F.is_zero() or not F.vanishes_at_origin():
        raise EngineError("the germ must be nonzero and vanish at the origin")
    budget = 4 * max(F.total_degree(), 1)
    motive, tree = _single_motive(F, budget, [])
    return motive, tree


def pair_with_x_power_motive(P: BiPoly, M: int):
    """Stripped-down evaluation of the pair (P, x^M) at value 0.

    Independent of the shared fan machinery: the denominator polygon stays
    a single vertex (M', 0) along the whole recursion (a Newton map sends
    x^M to a constant times x^(M*p)), so every cone comes from the working
    polynomial's dual fan alone.
    """
    if not P.vanishes_at_origin():
        raise EngineError("P must vanish at the origin")
    budget = 4 * (P.total_degree() + M)

    def rec(F, Mq, budget, trail):
        K = F.field
        shape = detect_base_case(F, BiPoly.monomial(K, Mq, 0))
        if shape is not None:
            return base_case_motive(shape, K)
        if budget <= 0:
            raise RecursionBudgetExceeded(trail)
        den_vertex = Face.vertex((Mq, 0))
        D = diagram_of(F)
        total = Motive.zero()
        for cone in dual_fan(D):
            if cone.kind == "cone2":
                e = eps_dim2(cone.face, den_vertex, cone.gens)
                if e.eps:
                    if e.shape == "axis-x":
                        total = total + torus1(e.diff[0])
                    elif e.shape == "axis-y":
                        total = total + torus1(e.diff[1])
                    else:
                        total = total - torus2(*e.diff)
                continue
            p, q = cone.gens[0]
            face = cone.face
            Fz = zform_of_segment(F, face)
            (a0, b0), (a1, b1) = face.points
            _, factors = factor_over_tower(Fz)
            orbits = [RayOrbit(h, cert, mult, 0) for h, mult, cert in factors]
            if eps_dim1(face, den_vertex, (p, q)) == -1:
                total = total + _fraction_motive(K, p, q, [(a0, b1), (Mq, 0)], orbits)
            for o in orbits:
                stack = [(o.minpoly, o.certified)]
                while stack:
                    h, cert = stack.pop()
                    if h.degree == 1:
                        mu = K.neg(h.coeffs[0])
                        nm = make_newton_map(p, q, mu, K)
                        total = total + rec(apply_map(F, nm), Mq * p, budget - 1,
                                            trail + ["sigma(%d,%d)" % (p, q)])
                        continue
                    E = ExtensionField(K, h.coeffs, "mu%d" % (K.tower_depth() + 1),
                                       certified=cert)
                    try:
                        nm = make_newton_map(p, q, E.generator, E)
                        sub = rec(apply_map(F.map_field(E), nm), Mq * p, budget - 1,
                                  trail + ["sigma(%d,%d,orbit)" % (p, q)])
                        total = total + sub.scale_int(h.degree)
                    except SplitRequired as sp:
                        if sp.field is not E:
                            raise
                        g = UniPoly(K, sp.factor)
                        stack.append((g, False))
                        stack.append((h.exact_div(g), False))
        return total

    return rec(P, M, budget, [])


def render_tree(node, indent=0):
    """Indented text rendering of a recursion tree."""
    pad = "  " * indent
    lines = []
    head = pad
    if node.get("map"):
        m = node["map"]
        head += "sigma(%s,%s; mu=%s) x%d: " % (m["p"], m["q"], m["mu"],
                                               node.get("weight", 1))
    pair = node["pair"]
    head += " ; ".join(pair)
    lines.append(head)
    if node.get("base_case"):
        lines.append(pad + "  base case: %s" % node["base_case"])
    for child in node.get("children", ()):
        lines.extend(render_tree(child, indent + 1))
    return lines
