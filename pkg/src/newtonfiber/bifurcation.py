"""Newton and motivic bifurcation sets of a plane-curve pencil.

The Newton set runs the Newton algorithm on the pair (P - cQ, Q) with the
parameter left as an indeterminate.  Along the recursion (which follows
only parameter-free roots: roots of the denominator faces and the
persistent common roots of dicritical faces), every diagram is inspected:

* a dicritical vertex off the axes yields its cancelling value;
* a dicritical vertex on an axis yields its cancelling value when the
  adjacent compact face is missing, non-smooth, or smooth with every
  smoothness witness cancelled too;
* a dicritical segment yields the parameter roots of the discriminant of
  its reduced face polynomial (persistent roots lowered to multiplicity
  one), excluding values that cancel a vertex of the face, and each root is
  verified to produce an actual multiplicity jump.

The value infinity is handled by the swapped orientation: it belongs to
the set iff 0 is a candidate for the pair (Q - cP, P).  Candidates are
canonicalized by their minimal polynomial over QQ, so conjugate irrational
candidates report as one orbit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .engine import (RecursionBudgetExceeded, _coprime_refine, _validate_pair,
                     default_budget, motivic_milnor_fiber, translate_to_origin)
from .fields import (QQ, ExtensionField, Field, RatFun, RationalFunctionField,
                     SplitRequired)
from .geometry import Face, diagram_of, fan_Ec, smoothness, zform_of_segment
from .motives import field_signature
from .oracle import (INF, OracleError, generic_milnor_number, milnor_number,
                     random_probe)
from .polynomials import (BiPoly, UniPoly, factor_over_tower, lift_scalar,
                          resultant, unipoly_map_field)
from .transforms import apply_map, detect_base_case, make_newton_map


class BifurcationError(Exception):
    pass


# --- canonicalization of candidate values over QQ ---

def tower_dimension(K: Field) -> int:
    if isinstance(K, ExtensionField):
        return K.degree * tower_dimension(K.base)
    return 1


def flatten_to_qq(K: Field, elem):
    if K is QQ:
        return [elem]
    if isinstance(K, ExtensionField):
        out = []
        for c in elem:
            out.extend(flatten_to_qq(K.base, c))
        return out
    raise BifurcationError("cannot flatten element of %r" % (K,))


def minimal_polynomial_qq(K: Field, elem) -> UniPoly:
    """Monic minimal polynomial over QQ of a tower element."""
    dim = tower_dimension(K)
    rows = []       # echelon rows: (pivot index, vector, combo)
    power = K.one
    vectors = []
    for i in range(dim + 1):
        vec = flatten_to_qq(K, power)
        combo = [Fraction(0)] * (dim + 2)
        combo[i] = Fraction(1)
        v = list(vec)
        for piv, rv, rc in rows:
            if v[piv]:
                f = v[piv] / rv[piv]
                v = [a - f * b for a, b in zip(v, rv)]
                combo = [a - f * b for a, b in zip(combo, rc)]
        nz = next((j for j, a in enumerate(v) if a), None)
        if nz is None:
            coeffs = combo[:i + 1]
            f = UniPoly(QQ, coeffs).monic()
            # pick the irreducible factor vanishing on elem
            for g, _, _ in factor_over_tower(f)[1]:
                if K.is_zero(_eval_qq_poly_in_tower(g, K, elem)):
                    return g
            raise BifurcationError("minimal polynomial factor selection failed")
        rows.append((nz, v, combo))
        power = K.mul(power, elem)
        vectors.append(vec)
    raise BifurcationError("no linear dependency found (dimension error)")


def _eval_qq_poly_in_tower(g: UniPoly, K: Field, elem):
    acc = K.zero
    for c in reversed(g.coeffs):
        acc = K.add(K.mul(acc, elem), lift_scalar(K, c, QQ))
    return acc


def push_down_c_poly(h: UniPoly) -> UniPoly:
    """Norm of a parameter polynomial down the tower, landing in QQ[c]."""
    K = h.field
    while isinstance(K, ExtensionField):
        B = K.base
        Bc = RationalFunctionField(B, "c")
        # h = sum_i h_i c^i with h_i in K = B[alpha]; regroup as alpha-poly
        deg_alpha = K.degree
        alpha_coeffs = []
        for j in range(deg_alpha):
            cj = Bc.make(tuple(h_i[j] for h_i in h.coeffs)) if h.coeffs else Bc.zero
            alpha_coeffs.append(cj)
        H = UniPoly(Bc, alpha_coeffs)
        M = UniPoly(Bc, tuple(Bc.make((c,)) for c in K.minpoly))
        R = resultant(M, H)
        if Bc.is_zero(R):
            raise BifurcationError("vanishing norm while pushing down a candidate")
        h = UniPoly(B, R.num)
        K = B
    return h


@dataclass
class Candidate:
    """One Newton non-generic value (or conjugate orbit of values)."""

    minpoly: UniPoly                 # monic irreducible over QQ
    reasons: list = dc_field(default_factory=list)
    witnesses: list = dc_field(default_factory=list)

    @property
    def degree(self):
        return self.minpoly.degree

    def rational(self):
        if self.degree == 1:
            return -self.minpoly.coeffs[0]
        return None

    def sort_key(self):
        r = self.rational()
        if r is not None:
            return (0, r)
        return (1, tuple(QQ.sort_key(c) for c in self.minpoly.coeffs))

    def value_str(self):
        r = self.rational()
        if r is not None:
            return str(r)
        return "root of %s" % self.minpoly.to_str("c")

    def to_json(self):
        return {"value": self.value_str(),
                "minpoly": [str(c) for c in self.minpoly.coeffs],
                "degree": self.degree,
                "reasons": sorted(set(self.reasons)),
                "witnesses": self.witnesses}


class Collector:
    def __init__(self):
        self.by_key = {}
        self.flags = []
        self.records = []

    def add_element(self, K, elem, reason, witness):
        mp = minimal_polynomial_qq(K, elem)
        self._add(mp, reason, witness)

    def add_orbit(self, K, h: UniPoly, reason, witness):
        norm = push_down_c_poly(h)
        for g, _, _ in factor_over_tower(norm)[1]:
            self._add(g, reason, witness)

    def _add(self, mp: UniPoly, reason, witness):
        key = mp.coeffs
        cand = self.by_key.get(key)
        if cand is None:
            cand = Candidate(mp)
            self.by_key[key] = cand
        cand.reasons.append(reason)
        cand.witnesses.append(witness)

    def candidates(self):
        return sorted(self.by_key.values(), key=lambda c: c.sort_key())


# --- the generic-parameter walk ---

def _c_parts(Kc: RationalFunctionField, v: RatFun):
    """Split a parameter-linear coefficient a - c*b into (a, b)."""
    K = Kc.base
    if v.den != (K.one,) or len(v.num) > 2:
        raise BifurcationError("coefficient is not linear in the parameter")
    a = v.num[0] if len(v.num) >= 1 else K.zero
    b = K.neg(v.num[1]) if len(v.num) == 2 else K.zero
    return a, b


def _zform_parts(Kc, W: BiPoly, face: Face):
    F = zform_of_segment(W, face)
    K = Kc.base
    f0, f1 = [], []
    for c in F.coeffs:
        a, b = _c_parts(Kc, c)
        f0.append(a)
        f1.append(b)
    return UniPoly(K, f0), UniPoly(K, f1)


def _divcount(F: UniPoly, h: UniPoly) -> int:
    n = 0
    while not F.is_zero():
        q, r = F.divmod(h)
        if not r.is_zero():
            break
        F = q
        n += 1
    return n


def _reduced_pair(F0: UniPoly, F1: UniPoly):
    """(F0bar, F1bar): persistent multiple roots lowered to multiplicity 1."""
    K = F0.field
    G = F0.gcd(F1)
    div = UniPoly.const(K, 1)
    if G.degree > 0:
        for h, _, _ in factor_over_tower(G)[1]:
            nu = min(_divcount(F0, h), _divcount(F1, h))
            if nu >= 2:
                div = div * h ** (nu - 1)
    if div.degree == 0:
        return F0, F1
    return F0.exact_div(div), F1.exact_div(div)


def _verify_jump(F0, F1, c0_field, c0_value, collector, witness):
    """Check a multiplicity jump at the specialized parameter value."""
    K = F0.field
    E = c0_field
    F0e = unipoly_map_field(F0, E, K) if E is not K else F0
    F1e = unipoly_map_field(F1, E, K) if E is not K else F1
    Fc = F0e - F1e.scale(c0_value)
    if Fc.is_zero():
        return True
    try:
        for g, mult, _ in factor_over_tower(Fc)[1]:
            if mult < 2:
                continue
            nu = min(_divcount(F0e, g), _divcount(F1e, g))
            if mult > max(nu, 1):
                return True
    except SplitRequired:
        collector.flags.append(
            "jump verification split an uncertified orbit at %s; "
            "accepted by the discriminant criterion" % witness)
        return True
    return False


def _segment_candidates(Kc, W, seg, collector, path):
    K = Kc.base
    F0, F1 = _zform_parts(Kc, W, seg)
    if F1.is_zero():
        return None
    witness = "Sigma=%s, face %s" % ("/".join(path) or "root", seg.points)
    collector.records.append({"path": list(path), "face": seg.to_json(),
                              "kind": "dicritical-segment"})
    F0b, F1b = _reduced_pair(F0, F1)
    disc_c = _parametric_discriminant(Kc, F0b, F1b)
    if disc_c.is_zero():
        raise BifurcationError("identically vanishing reduced discriminant")
    # values cancelling the endpoints of the face are handled by the
    # vertex bullets, not here
    cancel_values = []
    for pt in (seg.start, seg.end):
        a, b = _c_parts(Kc, W.coefficient(*pt))
        if not K.is_zero(b):
            cancel_values.append(K.mul(a, K.inv(b)))
    for h, _, _ in factor_over_tower(disc_c)[1]:
        for cv in cancel_values:
            while h.degree >= 1 and K.is_zero(h.evaluate(cv)):
                h = h.exact_div(UniPoly(K, (K.neg(cv), K.one)))
        if h.degree < 1:
            continue
        if h.degree == 1:
            c0 = K.neg(h.coeffs[0])
            if _verify_jump(F0, F1, K, c0, collector, witness):
                collector.add_element(K, c0, "discriminant-root", witness)
            else:
                collector.flags.append(
                    "discriminant root without multiplicity jump at %s" % witness)
        else:
            name = "c%d" % (K.tower_depth() + 1)
            E = ExtensionField(K, h.monic().coeffs, name, certified=(K is QQ))
            if _verify_jump(F0, F1, E, E.generator, collector, witness):
                collector.add_orbit(K, h, "discriminant-root", witness)
            else:
                collector.flags.append(
                    "discriminant orbit without multiplicity jump at %s" % witness)


def _parametric_discriminant(Kc, F0b: UniPoly, F1b: UniPoly) -> UniPoly:
    """Numerator in QQ-tower[c] of disc_z(F0b - c F1b)."""
    from .polynomials import discriminant
    K = Kc.base
    n = max(len(F0b.coeffs), len(F1b.coeffs))
    coeffs = []
    for i in range(n):
        a = F0b.coeffs[i] if i < len(F0b.coeffs) else K.zero
        b = F1b.coeffs[i] if i < len(F1b.coeffs) else K.zero
        coeffs.append(Kc.make((a, K.neg(b))))
    F = UniPoly(Kc, coeffs)
    if F.degree < 1:
        return UniPoly.zero(K)
    d = discriminant(F)
    return UniPoly(K, d.num)


def _vertex_candidates(Kc, W, collector, path):
    K = Kc.base
    D = diagram_of(W)
    verts = D.vertices
    for i, (a, b) in enumerate(verts):
        p0, p1 = _c_parts(Kc, W.coefficient(a, b))
        if K.is_zero(p1):
            continue
        c0 = K.mul(p0, K.inv(p1))
        witness = "Sigma=%s, vertex (%d, %d)" % ("/".join(path) or "root", a, b)
        collector.records.append({"path": list(path),
                                  "face": {"kind": "vertex", "points": [[a, b]]},
                                  "kind": "dicritical-vertex"})
        if a >= 1 and b >= 1:
            collector.add_element(K, c0, "vertex-cancellation", witness)
            continue
        # axis vertex: look at the adjacent compact face
        if b == 0:
            adj = Face.segment(verts[i - 1], verts[i]) if i >= 1 else None
        else:
            adj = Face.segment(verts[0], verts[1]) if len(verts) >= 2 else None
        if adj is None:
            collector.add_element(K, c0, "axis-vertex-with-bad-adjacent-face", witness)
            continue
        wits = smoothness(W, adj)
        if not wits:
            collector.add_element(K, c0, "axis-vertex-with-bad-adjacent-face", witness)
            continue
        cancelled = []
        for tag, v in sorted(wits.items()):
            w0, w1 = _c_parts(Kc, W.coefficient(*v))
            val = K.sub(w0, K.mul(c0, w1))
            cancelled.append(K.is_zero(val))
        if all(cancelled):
            collector.add_element(K, c0, "axis-vertex-with-bad-adjacent-face", witness)
        elif any(cancelled):
            collector.flags.append(
                "smoothness witnesses disagree about cancellation at %s" % witness)


def _generic_walk(Wc: BiPoly, Qc: BiPoly, collector, budget, path):
    Kc = Wc.field
    K = Kc.base
    _vertex_candidates(Kc, Wc, collector, path)
    D = diagram_of(Wc)
    seg_roots = {}
    for seg in D.segments():
        _segment_candidates(Kc, Wc, seg, collector, path)
    if detect_base_case(Wc, Qc) is not None:
        return
    if budget <= 0:
        raise RecursionBudgetExceeded(path + ["generic walk"])
    fan = fan_Ec(Wc, Qc)
    for cone in fan.ray_cones():
        p, q = cone.gens[0]
        entries = []
        if cone.face_w.dim == 1:
            F0, F1 = _zform_parts(Kc, Wc, cone.face_w)
            G = F0.gcd(F1) if not F1.is_zero() else F0.monic()
            if G.degree > 0:
                for h, mult, cert in factor_over_tower(G)[1]:
                    entries.append((h, cert, mult, 0))
        if cone.face_q.dim == 1:
            Q0, Q1 = _zform_parts(Kc, Qc, cone.face_q)
            if not Q1.is_zero():
                raise BifurcationError("denominator face depends on the parameter")
            for h, mult, cert in factor_over_tower(Q0)[1]:
                entries.append((h, cert, 0, mult))
        for orbit in _coprime_refine(entries):
            _follow_generic(Wc, Qc, p, q, orbit.minpoly, orbit.certified,
                            collector, budget, path)


def _follow_generic(Wc, Qc, p, q, minpoly, certified, collector, budget, path):
    Kc = Wc.field
    K = Kc.base
    stack = [(minpoly, certified)]
    while stack:
        h, cert = stack.pop()
        if h.degree == 1:
            mu = K.neg(h.coeffs[0])
            nm = make_newton_map(p, q, lift_scalar(Kc, mu, K), Kc)
            step = "s(%d,%d,%s)" % (p, q, K.to_str(mu))
            _generic_walk(apply_map(Wc, nm), apply_map(Qc, nm), collector,
                          budget - 1, path + [step])
            continue
        name = "mu%d" % (K.tower_depth() + 1)
        E = ExtensionField(K, h.coeffs, name, certified=cert)
        Ec = RationalFunctionField(E, Kc.var)
        try:
            W2 = Wc.map_field(Ec)
            Q2 = Qc.map_field(Ec)
            nm = make_newton_map(p, q, lift_scalar(Ec, E.generator, E), Ec)
            step = "s(%d,%d,%s:%s)" % (p, q, name, h.to_str())
            _generic_walk(apply_map(W2, nm), apply_map(Q2, nm), collector,
                          budget - 1, path + [step])
        except SplitRequired as sp:
            if sp.field is not E:
                raise
            g = UniPoly(K, sp.factor)
            stack.append((g, False))
            stack.append((h.exact_div(g), False))


def _run_generic(P: BiPoly, Q: BiPoly, collector):
    K = P.field
    Kc = RationalFunctionField(K, "c")
    Pc = P.map_field(Kc)
    Qc = Q.map_field(Kc)
    Wc = Pc - Qc.scale(Kc.gen)
    _generic_walk(Wc, Qc, collector, default_budget(P, Q), [])


# --- public sets and reports ---

@dataclass
class NewtonBifurcationSet:
    finite: list                 # [Candidate]
    has_infinity: bool
    infinity_reasons: list
    flags: list
    records: list

    def values_str(self):
        out = [c.value_str() for c in self.finite]
        if self.has_infinity:
            out.append("inf")
        return out

    def to_json(self):
        out = {"candidates": [c.to_json() for c in self.finite],
               "infinity": self.has_infinity,
               "flags": self.flags}
        if self.has_infinity:
            out["infinity_reasons"] = sorted(set(self.infinity_reasons))
        return out


def newton_bifurcation_set(P: BiPoly, Q: BiPoly, point=(0, 0)) -> NewtonBifurcationSet:
    _validate_pair(P, Q)
    P0, Q0 = translate_to_origin(P, Q, point)
    direct = Collector()
    _run_generic(P0, Q0, direct)
    swapped = Collector()
    _run_generic(Q0, P0, swapped)
    has_inf = False
    inf_reasons = []
    for cand in swapped.candidates():
        if cand.rational() == 0:
            has_inf = True
            inf_reasons = sorted(set(cand.reasons))
    return NewtonBifurcationSet(direct.candidates(), has_inf, inf_reasons,
                                direct.flags + swapped.flags,
                                direct.records)


@dataclass
class ValueVerdict:
    label: str
    reasons: list
    motive_nonzero: bool
    chi: int
    is_candidate: bool
    mu: object = None
    chi_mu: object = None

    def to_json(self):
        d = {"value": self.label, "reasons": self.reasons,
             "motive_nonzero": self.motive_nonzero, "chi": self.chi,
             "candidate": self.is_candidate}
        if self.mu is not None:
            d["mu"] = self.mu if self.mu != INF else "inf"
        if self.chi_mu is not None:
            d["chi_via_mu"] = self.chi_mu
        return d


def _candidate_motive(P, Q, cand: Candidate, point):
    r = cand.rational()
    if r is not None:
        return motivic_milnor_fiber(P, Q, r, point)
    E = ExtensionField(QQ, cand.minpoly.coeffs, "c0", certified=True)
    PE = P.map_field(E)
    QE = Q.map_field(E)
    return motivic_milnor_fiber(PE, QE, E.generator, point)


def _probe_values(count, seed, avoid):
    rng = random.Random(seed)
    out = []
    avoid = set(avoid)
    while len(out) < count:
        c = random_probe(rng)
        if c in avoid or c in out:
            continue
        out.append(c)
    return out


def motivic_bifurcation_set(P: BiPoly, Q: BiPoly, point=(0, 0), probes=3, seed=0):
    """Engine verdicts at every Newton candidate plus random probe values."""
    nset = newton_bifurcation_set(P, Q, point)
    rows = []
    for cand in nset.finite:
        res = _candidate_motive(P, Q, cand, point)
        rows.append(ValueVerdict(cand.value_str(), sorted(set(cand.reasons)),
                                 not res.motive.is_zero(), res.motive.euler(), True))
    if nset.has_infinity:
        res = motivic_milnor_fiber(P, Q, "inf", point)
        rows.append(ValueVerdict("inf", nset.infinity_reasons,
                                 not res.motive.is_zero(), res.motive.euler(), True))
    avoid = [c.rational() for c in nset.finite if c.rational() is not None]
    for c in _probe_values(probes, seed, avoid):
        res = motivic_milnor_fiber(P, Q, c, point)
        rows.append(ValueVerdict(str(c), ["probe"],
                                 not res.motive.is_zero(), res.motive.euler(), False))
    return nset, rows


def compare_sets(P: BiPoly, Q: BiPoly, point=(0, 0), probes=3, seed=0):
    """Side-by-side report: Newton set, engine motives, and the mu-oracle."""
    from .polynomials import gcd_bivariate
    _validate_pair(P, Q)
    P0, Q0 = translate_to_origin(P, Q, point)
    hypotheses_ok = True
    hypothesis_notes = []
    g = gcd_bivariate(P0, Q0)
    if g.total_degree() > 0:
        hypotheses_ok = False
        hypothesis_notes.append("P and Q share the component gcd = %s" % g.to_str())
    rng = random.Random(seed + 1)
    if hypotheses_ok:
        samples = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]
        samples += [(random_probe(rng), random_probe(rng)) for _ in range(2)]
        for a, b in samples:
            member = P0.scale(a) + Q0.scale(b)
            if member.is_zero():
                continue
            if member.vanishes_at_origin() and milnor_number(member) == INF:
                hypotheses_ok = False
                hypothesis_notes.append(
                    "pencil member %s*P + %s*Q has a non-isolated singularity" % (a, b))
                break
    nset, rows = motivic_bifurcation_set(P, Q, point, probes=probes, seed=seed)
    mu_gen = None
    agreement = None
    if hypotheses_ok:
        avoid = [c.rational() for c in nset.finite if c.rational() is not None]
        mu_gen = generic_milnor_number(P0, Q0, seed=seed + 2, avoid=avoid)
        agreement = True
        for row in rows:
            mu_c = _row_mu(P0, Q0, row, nset)
            row.mu = mu_c
            row.chi_mu = (mu_gen - mu_c) if mu_c != INF else None
            if row.chi_mu != row.chi:
                agreement = False
            if row.is_candidate and not row.motive_nonzero:
                agreement = False
            if not row.is_candidate and row.motive_nonzero:
                agreement = False
    return {
        "hypotheses_ok": hypotheses_ok,
        "hypothesis_notes": hypothesis_notes,
        "newton_set": nset.to_json(),
        "mu_generic": mu_gen,
        "rows": [r.to_json() for r in rows],
        "agreement": agreement,
    }


def _row_mu(P0, Q0, row: ValueVerdict, nset):
    if row.label == "inf":
        return milnor_number(Q0)
    cand = None
    for c in nset.finite:
        if c.value_str() == row.label:
            cand = c
            break
    if cand is None:
        return milnor_number(P0 - Q0.scale(Fraction(row.label)))
    r = cand.rational()
    if r is not None:
        return milnor_number(P0 - Q0.scale(r))
    E = ExtensionField(QQ, cand.minpoly.coeffs, "c0", certified=True)
    PE = P0.map_field(E)
    QE = Q0.map_field(E)
    return milnor_number(PE - QE.scale(E.generator))
