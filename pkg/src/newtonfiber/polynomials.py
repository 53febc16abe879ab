"""Univariate and sparse bivariate polynomials over exact scalar fields.

``UniPoly`` is dense (constant term first); ``BiPoly`` maps exponent pairs
(a, b) for x^a y^b to nonzero scalars.  Both are immutable value objects
tied to a ``Field`` instance; mixing parents raises ``IncompatibleFields``.

Factorization policy: complete irreducible factorization only over QQ
(delegated to sympy, which certifies irreducibility); over extension
towers we do square-free decomposition and keep non-linear square-free
factors as unsplit root orbits.  Downstream arithmetic splits them on
demand via ``SplitRequired``.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, gcd

import sympy

from .fields import (QQ, ExtensionField, Field, RatFun, RationalFunctionField,
                     _monic, _poly_divmod, _poly_gcd_monic, _poly_mul, _strip,
                     _zip_pad)


class IncompatibleFields(TypeError):
    pass


def _same_field(a, b):
    if a.field is not b.field:
        raise IncompatibleFields(
            "operands live over different scalar domains: %r vs %r"
            % (a.field, b.field))


class UniPoly:
    """Dense univariate polynomial; ``coeffs[i]`` multiplies z^i."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        self.field = field
        self.coeffs = _strip(field, tuple(field.coerce(c) for c in coeffs))

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def const(cls, field, c):
        return cls(field, (c,))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def leading(self):
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        return (isinstance(other, UniPoly) and self.field is other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        _same_field(self, other)
        f = self.field
        return UniPoly(f, tuple(f.add(x, y) for x, y in _zip_pad(f, self.coeffs, other.coeffs)))

    def __neg__(self):
        f = self.field
        return UniPoly(f, tuple(f.neg(x) for x in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        _same_field(self, other)
        return UniPoly(self.field, _poly_mul(self.field, self.coeffs, other.coeffs))

    def scale(self, c):
        f = self.field
        c = f.coerce(c)
        return UniPoly(f, tuple(f.mul(c, x) for x in self.coeffs))

    def __pow__(self, n):
        r = UniPoly.const(self.field, 1)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def divmod(self, other):
        q, r = _poly_divmod(self.field, self.coeffs, other.coeffs)
        return UniPoly(self.field, q), UniPoly(self.field, r)

    def exact_div(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("division is not exact")
        return q

    def monic(self):
        return UniPoly(self.field, _monic(self.field, self.coeffs))

    def gcd(self, other):
        _same_field(self, other)
        return UniPoly(self.field, _poly_gcd_monic(self.field, self.coeffs, other.coeffs))

    def derivative(self):
        f = self.field
        return UniPoly(f, tuple(f.mul(f.from_int(i), c)
                                for i, c in enumerate(self.coeffs) if i))

    def evaluate(self, v):
        f = self.field
        v = f.coerce(v)
        acc = f.zero
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, v), c)
        return acc

    def shift_is_root(self, v):
        return self.field.is_zero(self.evaluate(v))

    def to_str(self, var="z"):
        f = self.field
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i] if i < len(self.coeffs) else f.zero
            if f.is_zero(c):
                continue
            cs = f.to_str(c)
            if i == 0:
                parts.append(cs)
            else:
                mono = var if i == 1 else "%s^%d" % (var, i)
                if cs == "1":
                    parts.append(mono)
                elif cs == "-1":
                    parts.append("-%s" % mono)
                else:
                    cs = "(%s)" % cs if ("+" in cs or "-" in cs[1:] or " " in cs) else cs
                    parts.append("%s*%s" % (cs, mono))
        s = parts[0]
        for p in parts[1:]:
            s += " - " + p[1:] if p.startswith("-") else " + " + p
        return s if parts else "0"

    def __repr__(self):
        return "UniPoly(%s)" % self.to_str()


def squarefree_decomposition(f: UniPoly):
    """Yun's algorithm; returns (unit, [(monic square-free factor, multiplicity)]).

    Characteristic-zero scalars only.  The unit times the product of
    factor^multiplicity reconstructs ``f`` exactly.
    """
    if f.is_zero():
        raise ValueError("square-free decomposition of the zero polynomial")
    K = f.field
    unit = f.leading()
    f = f.monic()
    if f.degree == 0:
        return unit, []
    out = []
    df = f.derivative()
    a = f.gcd(df)
    b = f.exact_div(a)
    c = df.exact_div(a)
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        g = b.gcd(d)
        if g.degree > 0:
            out.append((g, i))
        b = b.exact_div(g)
        c = d.exact_div(g)
        d = c - b.derivative()
        i += 1
    return unit, out


def factor_over_tower(f: UniPoly):
    """Factor ``f`` over its coefficient tower.

    Returns (unit, [(monic factor, multiplicity, certified)]).  Over QQ the
    factors are certified irreducible.  Over an extension level the
    decomposition is square-free only, with degree-1 factors split off;
    remaining factors are root-orbit bundles (certified=False).
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    K = f.field
    if K is QQ:
        return _factor_rational(f)
    unit, sqf = squarefree_decomposition(f)
    out = []
    for g, mult in sqf:
        if g.degree == 1:
            out.append((g, mult, True))
        else:
            out.append((g, mult, False))
    return unit, out


def _factor_rational(f: UniPoly):
    z = sympy.Symbol("z")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * z**i
               for i, c in enumerate(f.coeffs))
    const, factors = sympy.Poly(expr, z, domain="QQ").factor_list()
    unit = Fraction(const.p, const.q)
    out = []
    for poly, mult in factors:
        coeffs = [Fraction(c.p, c.q) for c in reversed(poly.all_coeffs())]
        g = UniPoly(QQ, coeffs)
        lead = g.leading()
        unit *= lead ** mult
        out.append((g.monic(), mult, True))
    return unit, out


def roots_in_field(f: UniPoly):
    """Roots of ``f`` lying in its own coefficient field, with multiplicities."""
    K = f.field
    out = []
    for g, mult, _ in factor_over_tower(f)[1]:
        if g.degree == 1:
            out.append((K.neg(g.coeffs[0]), mult))
    return out


def resultant(f: UniPoly, g: UniPoly):
    """Sylvester resultant via the Euclidean identity, exact over the field."""
    _same_field(f, g)
    K = f.field
    if f.is_zero() or g.is_zero():
        return K.zero
    m, n = f.degree, g.degree
    if n == 0:
        return K.pow(g.coeffs[0], m)
    if m == 0:
        return K.pow(f.coeffs[0], n)
    if m < n:
        sign = K.from_int((-1) ** (m * n))
        return K.mul(sign, resultant(g, f))
    _, r = f.divmod(g)
    if r.is_zero():
        return K.zero
    sign = K.from_int((-1) ** (m * n))
    lead_pow = K.pow(g.leading(), m - r.degree)
    return K.mul(sign, K.mul(lead_pow, resultant(g, r)))


def discriminant(f: UniPoly):
    if f.degree < 1:
        raise ValueError("discriminant needs degree >= 1")
    K = f.field
    m = f.degree
    sign = K.from_int((-1) ** (m * (m - 1) // 2))
    res = resultant(f, f.derivative())
    return K.mul(sign, K.mul(res, K.inv(f.leading())))


class BiPoly:
    """Sparse bivariate polynomial: {(a, b): coeff} with zero coeffs stripped."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Field, terms):
        self.field = field
        clean = {}
        for (a, b), c in terms.items():
            c = field.coerce(c)
            if not field.is_zero(c):
                clean[(int(a), int(b))] = c
        self.terms = clean

    @classmethod
    def zero(cls, field):
        return cls(field, {})

    @classmethod
    def monomial(cls, field, a, b, c=1):
        return cls(field, {(a, b): field.coerce(c)})

    @classmethod
    def variable(cls, field, name):
        if name == "x":
            return cls.monomial(field, 1, 0)
        if name == "y":
            return cls.monomial(field, 0, 1)
        raise ValueError("unknown variable %r" % name)

    def is_zero(self):
        return not self.terms

    @property
    def support(self):
        return set(self.terms)

    def coefficient(self, a, b):
        return self.terms.get((a, b), self.field.zero)

    def total_degree(self):
        return max((a + b for a, b in self.terms), default=-1)

    def __eq__(self, other):
        return (isinstance(other, BiPoly) and self.field is other.field
                and self.terms == other.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        _same_field(self, other)
        f = self.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = f.add(out[k], c) if k in out else c
        return BiPoly(f, out)

    def __neg__(self):
        f = self.field
        return BiPoly(f, {k: f.neg(c) for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        _same_field(self, other)
        f = self.field
        out = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                p = f.mul(c1, c2)
                out[k] = f.add(out[k], p) if k in out else p
        return BiPoly(f, out)

    def __pow__(self, n):
        r = BiPoly.monomial(self.field, 0, 0)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def scale(self, c):
        f = self.field
        c = f.coerce(c)
        return BiPoly(f, {k: f.mul(c, v) for k, v in self.terms.items()})

    def shift_monomial(self, da, db):
        """Multiply by x^da y^db (da, db may be negative when divisible)."""
        if da < 0 and any(a + da < 0 for a, _ in self.terms):
            raise ValueError("not divisible by x^%d" % -da)
        if db < 0 and any(b + db < 0 for _, b in self.terms):
            raise ValueError("not divisible by y^%d" % -db)
        return BiPoly(self.field, {(a + da, b + db): c for (a, b), c in self.terms.items()})

    def x_valuation(self):
        return min((a for a, _ in self.terms), default=0)

    def y_valuation(self):
        return min((b for _, b in self.terms), default=0)

    def constant_term(self):
        return self.coefficient(0, 0)

    def is_unit_at_origin(self):
        return not self.field.is_zero(self.constant_term())

    def vanishes_at_origin(self):
        return self.field.is_zero(self.constant_term())

    def deg_x(self):
        return max((a for a, _ in self.terms), default=-1)

    def deg_y(self):
        return max((b for _, b in self.terms), default=-1)

    def derivative(self, var):
        f = self.field
        out = {}
        for (a, b), c in self.terms.items():
            if var == "x" and a > 0:
                out[(a - 1, b)] = f.add(out.get((a - 1, b), f.zero),
                                        f.mul(f.from_int(a), c))
            elif var == "y" and b > 0:
                out[(a, b - 1)] = f.add(out.get((a, b - 1), f.zero),
                                        f.mul(f.from_int(b), c))
        return BiPoly(f, out)

    def evaluate(self, xv, yv):
        f = self.field
        xv, yv = f.coerce(xv), f.coerce(yv)
        acc = f.zero
        for (a, b), c in self.terms.items():
            acc = f.add(acc, f.mul(c, f.mul(f.pow(xv, a), f.pow(yv, b))))
        return acc

    def translate(self, x0, y0):
        """P(x + x0, y + y0), exact binomial expansion."""
        f = self.field
        x0, y0 = f.coerce(x0), f.coerce(y0)
        out = {}
        for (a, b), c in self.terms.items():
            for i in range(a + 1):
                ci = f.mul(c, f.mul(f.from_int(comb(a, i)), f.pow(x0, a - i)))
                for j in range(b + 1):
                    cij = f.mul(ci, f.mul(f.from_int(comb(b, j)), f.pow(y0, b - j)))
                    k = (i, j)
                    out[k] = f.add(out[k], cij) if k in out else cij
        return BiPoly(f, out)

    def map_field(self, new_field, src_field=None):
        """Re-coefficient into ``new_field`` (must extend the current one)."""
        src = src_field or self.field
        return BiPoly(new_field, {k: lift_scalar(new_field, c, src)
                                  for k, c in self.terms.items()})

    def is_x_only(self):
        return all(b == 0 for _, b in self.terms)

    def is_y_only(self):
        return all(a == 0 for a, _ in self.terms)

    def to_str(self):
        f = self.field
        if not self.terms:
            return "0"
        parts = []
        for (a, b) in sorted(self.terms, key=lambda k: (k[0] + k[1], k[0])):
            c = self.terms[(a, b)]
            mono = ""
            if a:
                mono += "x" if a == 1 else "x^%d" % a
            if b:
                mono += ("*" if mono else "") + ("y" if b == 1 else "y^%d" % b)
            cs = f.to_str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-%s" % mono)
            else:
                cs = "(%s)" % cs if ("+" in cs or ("-" in cs[1:]) or "/" in cs) else cs
                parts.append("%s*%s" % (cs, mono))
        s = parts[0]
        for p in parts[1:]:
            s += " - " + p[1:] if p.startswith("-") else " + " + p
        return s

    def __repr__(self):
        return "BiPoly(%s)" % self.to_str()


def lift_scalar(dst: Field, a, src: Field):
    """Embed a scalar of ``src`` into ``dst`` along the tower structure."""
    if dst is src:
        return a
    if isinstance(a, RatFun):
        if not (isinstance(dst, RationalFunctionField)
                and isinstance(src, RationalFunctionField)
                and dst.var == src.var):
            raise IncompatibleFields("cannot lift a rational function into %r" % (dst,))
        num = tuple(lift_scalar(dst.base, c, src.base) for c in a.num)
        den = tuple(lift_scalar(dst.base, c, src.base) for c in a.den)
        return dst.make(num, den)
    if isinstance(dst, ExtensionField):
        return dst.coerce(lift_scalar(dst.base, a, src))
    if isinstance(dst, RationalFunctionField):
        return dst.make((lift_scalar(dst.base, a, src),))
    if dst is QQ and src is QQ:
        return a
    raise IncompatibleFields("no lift from %r into %r" % (src, dst))


def unipoly_map_field(f: UniPoly, dst: Field, src: Field = None):
    src = src or f.field
    return UniPoly(dst, tuple(lift_scalar(dst, c, src) for c in f.coeffs))


def substitute_newton_raw(P: BiPoly, p, q, pprime, qprime, mu):
    """Image of P under x -> mu^q' x^p, y -> x^q (y + mu^p').

    The caller guarantees p*p' - q*q' = 1 and mu != 0; mu lives in P's field.
    """
    f = P.field
    mu = f.coerce(mu)
    if f.is_zero(mu):
        raise ValueError("Newton transformation needs mu != 0")
    out = {}
    mu_pp = f.pow(mu, pprime)
    for (a, b), c in P.terms.items():
        base = f.mul(c, f.pow(mu, qprime * a))
        xexp = a * p + b * q
        # (y + mu^p')^b
        for k in range(b + 1):
            coeff = f.mul(base, f.mul(f.from_int(comb(b, k)), f.pow(mu_pp, b - k)))
            key = (xexp, k)
            out[key] = f.add(out[key], coeff) if key in out else coeff
    return BiPoly(f, out)


# --- bivariate gcd and square-free structure via K(x)[y] ---

def _as_y_dense_over_ratx(P: BiPoly, Kx: RationalFunctionField):
    K = P.field
    dy = P.deg_y()
    cols = [dict() for _ in range(dy + 1)]
    for (a, b), c in P.terms.items():
        cols[b][a] = c
    out = []
    for col in cols:
        if not col:
            out.append(Kx.zero)
        else:
            n = max(col) + 1
            out.append(Kx.make(tuple(col.get(i, K.zero) for i in range(n))))
    return out


def _from_y_dense_over_ratx(coeffs, K: Field, Kx: RationalFunctionField):
    """Clear denominators and return a primitive-in-x BiPoly over K."""
    # common denominator
    den = (K.one,)
    for c in coeffs:
        if Kx.is_zero(c):
            continue
        g = _poly_gcd_monic(K, den, c.den)
        extra, _ = _poly_divmod(K, c.den, g)
        den = _poly_mul(K, den, extra)
    terms = {}
    for b, c in enumerate(coeffs):
        if Kx.is_zero(c):
            continue
        mulp, _ = _poly_divmod(K, den, c.den)
        num = _poly_mul(K, c.num, mulp)
        for a, v in enumerate(num):
            if not K.is_zero(v):
                terms[(a, b)] = v
    P = BiPoly(K, terms)
    # primitive part in x: divide by gcd of x-coefficient polynomials
    cont = _x_content(P)
    if len(cont) > 1:
        P = _exact_div_by_x_poly(P, cont)
    return P


def _x_content(P: BiPoly):
    """gcd in K[x] of the coefficients of P viewed in (K[x])[y]; monic tuple."""
    K = P.field
    cols = {}
    for (a, b), c in P.terms.items():
        cols.setdefault(b, {})[a] = c
    g = ()
    for col in cols.values():
        n = max(col) + 1
        poly = _strip(K, tuple(col.get(i, K.zero) for i in range(n)))
        g = _poly_gcd_monic(K, g, poly)
        if len(g) == 1:
            return g
    return g if g else (K.one,)


def _exact_div_by_x_poly(P: BiPoly, d):
    K = P.field
    cols = {}
    for (a, b), c in P.terms.items():
        cols.setdefault(b, {})[a] = c
    terms = {}
    for b, col in cols.items():
        n = max(col) + 1
        poly = tuple(col.get(i, K.zero) for i in range(n))
        q, r = _poly_divmod(K, poly, d)
        if r:
            raise ValueError("x-content division not exact")
        for a, v in enumerate(q):
            if not K.is_zero(v):
                terms[(a, b)] = v
    return BiPoly(K, terms)


def rational_content_strip(P: BiPoly) -> BiPoly:
    """Rescale a QQ-coefficient polynomial to primitive integer form."""
    if P.field is not QQ or P.is_zero():
        return P
    from math import lcm
    den = 1
    num = 0
    for c in P.terms.values():
        den = lcm(den, c.denominator)
        num = gcd(num, c.numerator)
    scale = Fraction(den, num if num else 1)
    return P if scale == 1 else P.scale(scale)


def _y_dense_xpolys(P: BiPoly):
    """P as a dense list in y of x-coefficient tuples over K."""
    K = P.field
    dy = P.deg_y()
    cols = [dict() for _ in range(dy + 1)]
    for (a, b), c in P.terms.items():
        cols[b][a] = c
    out = []
    for col in cols:
        n = max(col) + 1 if col else 0
        out.append(_strip(K, tuple(col.get(i, K.zero) for i in range(n))))
    while out and not out[-1]:
        out.pop()
    return out


def _from_y_dense_xpolys(lst, K):
    terms = {}
    for b, xs in enumerate(lst):
        for a, v in enumerate(xs):
            if not K.is_zero(v):
                terms[(a, b)] = v
    return BiPoly(K, terms)


def _list_content(lst, K):
    g = ()
    for xs in lst:
        g = _poly_gcd_monic(K, g, xs)
        if len(g) == 1:
            return g
    return g if g else (K.one,)


def _list_primitive(lst, K):
    cont = _list_content(lst, K)
    if len(cont) > 1:
        out = []
        for xs in lst:
            q, r = _poly_divmod(K, xs, cont)
            out.append(q)
        lst = out
    if K is QQ:
        from math import lcm
        den, num = 1, 0
        for xs in lst:
            for c in xs:
                den = lcm(den, c.denominator)
                num = gcd(num, c.numerator)
        if num and (den != 1 or num != 1):
            s = Fraction(den, num)
            lst = [tuple(c * s for c in xs) for xs in lst]
    return lst


def _prem_y(A, B, K):
    """Pseudo-remainder of A by B in (K[x])[y]; both dense y-lists."""
    dB = len(B) - 1
    lcB = B[-1]
    R = list(A)
    while R and len(R) - 1 >= dB:
        lead = R[-1]
        k = len(R) - 1 - dB
        new = []
        for i in range(len(R) - 1):
            term = _poly_mul(K, R[i], lcB)
            j = i - k
            if 0 <= j < dB:
                sub = _poly_mul(K, B[j], lead)
                term = _strip(K, tuple(K.sub(x1, y1)
                                       for x1, y1 in _zip_pad(K, term, sub)))
            new.append(term)
        while new and not new[-1]:
            new.pop()
        R = new
    return R


def gcd_bivariate(P: BiPoly, Q: BiPoly):
    """A gcd of P and Q in K[x, y] via a primitive pseudo-remainder sequence.

    Returns a polynomial dividing both inputs exactly, carrying the shared
    x-content, with leading scalar normalized to 1.
    """
    _same_field(P, Q)
    K = P.field
    if P.is_zero() and Q.is_zero():
        return BiPoly.zero(K)
    if P.is_zero():
        return _normalize_lead(Q)
    if Q.is_zero():
        return _normalize_lead(P)
    cont = _poly_gcd_monic(K, _x_content(P), _x_content(Q))
    A = _list_primitive(_y_dense_xpolys(P), K)
    B = _list_primitive(_y_dense_xpolys(Q), K)
    if len(A) < len(B):
        A, B = B, A
    while True:
        if len(B) == 0:
            G = A
            break
        if len(B) == 1:
            G = [(K.one,)]
            break
        R = _prem_y(A, B, K)
        if not R:
            G = B
            break
        A, B = B, _list_primitive(R, K)
    prim = _from_y_dense_xpolys(_list_primitive(G, K), K)
    if len(cont) > 1:
        contP = BiPoly(K, {(a, 0): c for a, c in enumerate(cont) if not K.is_zero(c)})
        prim = prim * contP
    return _normalize_lead(prim)


def _normalize_lead(P: BiPoly):
    if P.is_zero():
        return P
    K = P.field
    key = max(P.terms, key=lambda k: (k[1], k[0]))
    return P.scale(K.inv(P.terms[key]))


def _exact_div_y(A, B, K):
    """Exact synthetic division in (K[x])[y] on dense y-lists of x-tuples."""
    if not A:
        return []
    dB = len(B) - 1
    if len(A) - 1 < dB:
        raise ValueError("bivariate division not exact (degree)")
    lcB = B[-1]
    R = [tuple(c) for c in A]
    Q = [()] * (len(A) - dB)
    for k in range(len(A) - 1 - dB, -1, -1):
        top = R[dB + k]
        if not top:
            Q[k] = ()
            continue
        qk, rr = _poly_divmod(K, top, lcB)
        if rr:
            raise ValueError("bivariate division not exact (leading step)")
        Q[k] = qk
        for j in range(dB + 1):
            prod = _poly_mul(K, B[j], qk)
            R[j + k] = _strip(K, tuple(K.sub(u, v)
                                       for u, v in _zip_pad(K, R[j + k], prod)))
    if any(R):
        raise ValueError("bivariate division not exact (remainder)")
    return Q


def exact_divide(P: BiPoly, D: BiPoly):
    """Exact division in K[x,y]; raises ValueError if not divisible."""
    _same_field(P, D)
    K = P.field
    if D.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if P.is_zero():
        return P
    Q = _exact_div_y(_y_dense_xpolys(P), _y_dense_xpolys(D), K)
    return _from_y_dense_xpolys(Q, K)


def _gcd_lists_y(A, B, K):
    """Primitive gcd in (K[x])[y] of two primitive dense y-lists."""
    if len(A) < len(B):
        A, B = B, A
    while True:
        if len(B) == 0:
            return _list_primitive(A, K)
        if len(B) == 1:
            return [(K.one,)]
        R = _prem_y(A, B, K)
        if not R:
            return _list_primitive(B, K)
        A, B = B, _list_primitive(R, K)


def _y_derivative_list(A, K):
    out = []
    for b in range(1, len(A)):
        out.append(tuple(K.mul(K.from_int(b), c) for c in A[b]))
    while out and not out[-1]:
        out.pop()
    return out


def _list_sub(A, B, K):
    n = max(len(A), len(B))
    out = []
    for j in range(n):
        u = A[j] if j < len(A) else ()
        v = B[j] if j < len(B) else ()
        out.append(_strip(K, tuple(K.sub(uu, vv) for uu, vv in _zip_pad(K, u, v))))
    while out and not out[-1]:
        out.pop()
    return out


def squarefree_decomposition_y(P: BiPoly):
    """Square-free structure of P in (K[x])[y], Yun over the UFD K[x].

    Returns (x_content, [(primitive square-free factor, multiplicity)]).
    Multiplying factor^multiplicity over the list recovers P up to the
    content and a scalar.
    """
    if P.is_zero():
        raise ValueError("square-free decomposition of zero")
    K = P.field
    cont = _x_content(P)
    f = _list_primitive(_y_dense_xpolys(P), K)
    if len(f) <= 1:
        return cont, []
    df = _y_derivative_list(f, K)
    a = _gcd_lists_y(f, df, K)
    b = _exact_div_y(f, a, K)
    c = _exact_div_y(df, a, K)
    d = _list_sub(c, _y_derivative_list(b, K), K)
    out = []
    i = 1
    while len(b) > 1:
        g = _gcd_lists_y(_list_primitive(b, K), _list_primitive(d, K) if d else [], K)
        if len(g) > 1:
            out.append((_from_y_dense_xpolys(g, K), i))
        b = _exact_div_y(b, g, K)
        cq = _exact_div_y(d, g, K) if d else []
        d = _list_sub(cq, _y_derivative_list(b, K), K)
        i += 1
    return cont, out


def primitive_coprime_parts(P: BiPoly, Q: BiPoly):
    """(P/g, Q/g, g) for g = gcd_bivariate(P, Q)."""
    g = gcd_bivariate(P, Q)
    if g.is_zero() or g.total_degree() == 0:
        return P, Q, g
    return exact_divide(P, g), exact_divide(Q, g), g
