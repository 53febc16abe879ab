"""Exact scalar arithmetic: rationals, algebraic extension towers, rational functions.

A scalar domain is a ``Field`` object; scalars themselves are plain Python
values whose shape depends on the field:

* ``QQ``            -- values are ``fractions.Fraction``
* ``ExtensionField`` -- values are tuples of scalars of the base field,
  coordinates w.r.t. the power basis of the generator (reduced mod the
  minimal polynomial, canonical length = degree)
* ``RationalFunctionField`` -- values are ``RatFun`` pairs (num, den) of
  dense coefficient tuples over the base field, normalized

Extensions built from a factor that was not certified irreducible run in
"dynamic evaluation" mode: zero tests and inversions detect zero divisors
and raise ``SplitRequired`` carrying a proper factor of the modulus, so the
caller can split the orbit and retry.
"""

from __future__ import annotations

from fractions import Fraction


class SplitRequired(Exception):
    """A would-be field turned out reducible; carries a proper factor.

    ``factor`` is a monic coefficient tuple (over the extension's base
    field) of a proper divisor of the minimal polynomial.
    """

    def __init__(self, field, factor):
        self.field = field
        self.factor = factor
        super().__init__("modulus of %r splits; found factor of degree %d"
                         % (field, len(factor) - 1))


class Field:
    """Common interface for exact scalar domains."""

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        raise NotImplementedError

    def eq(self, a, b):
        return self.is_zero(self.sub(a, b))

    def from_int(self, n):
        raise NotImplementedError

    @property
    def zero(self):
        return self.from_int(0)

    @property
    def one(self):
        return self.from_int(1)

    def coerce(self, a):
        """Lift ``a`` (int, Fraction, or element of a sub-field) into this field."""
        raise NotImplementedError

    def sort_key(self, a):
        """Deterministic total order key; used for canonical output only."""
        raise NotImplementedError

    def to_str(self, a):
        raise NotImplementedError

    def pow(self, a, n):
        if n < 0:
            return self.inv(self.pow(a, -n))
        r = self.one
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    # Tower bookkeeping: QQ is depth 0, each extension adds one level.
    def tower_depth(self):
        return 0

    def describe(self):
        """JSON-friendly description of the scalar domain."""
        return {"kind": "QQ"}


class RationalField(Field):
    """The rationals; elements are Fraction."""

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def from_int(self, n):
        return Fraction(n)

    def coerce(self, a):
        if isinstance(a, (int, Fraction)):
            return Fraction(a)
        raise TypeError("cannot coerce %r into QQ" % (a,))

    def sort_key(self, a):
        return (a.numerator, a.denominator)

    def to_str(self, a):
        return str(a)

    def __repr__(self):
        return "QQ"


QQ = RationalField()


def _tuple_pad(coords, n, zero):
    return tuple(coords) + (zero,) * (n - len(coords))


class ExtensionField(Field):
    """Simple extension ``base[z]/(minpoly)`` with power-basis coordinates.

    ``minpoly`` is a monic dense coefficient tuple over ``base`` of degree
    >= 2, constant term first.  ``certified`` marks moduli known to be
    irreducible (full factorization over QQ); uncertified moduli get the
    zero-divisor checks of dynamic evaluation.
    """

    def __init__(self, base: Field, minpoly, name: str, certified: bool):
        deg = len(minpoly) - 1
        if deg < 2:
            raise ValueError("extension degree must be >= 2")
        if not base.eq(minpoly[-1], base.one):
            raise ValueError("minimal polynomial must be monic")
        self.base = base
        self.minpoly = tuple(minpoly)
        self.degree = deg
        self.name = name
        self.certified = certified
        # x^deg reduced: -(lower coefficients)
        self._red = tuple(base.neg(c) for c in minpoly[:-1])

    def __repr__(self):
        return "%r(%s)" % (self.base, self.name)

    def tower_depth(self):
        return 1 + self.base.tower_depth()

    def describe(self):
        return {
            "kind": "extension",
            "name": self.name,
            "degree": self.degree,
            "minpoly": [self.base.to_str(c) for c in self.minpoly],
            "base": self.base.describe(),
            "certified": self.certified,
        }

    @property
    def generator(self):
        b = self.base
        return _tuple_pad((b.zero, b.one), self.degree, b.zero)

    def from_int(self, n):
        b = self.base
        return _tuple_pad((b.from_int(n),), self.degree, b.zero)

    def coerce(self, a):
        b = self.base
        if isinstance(a, tuple) and len(a) == self.degree:
            return a
        return _tuple_pad((b.coerce(a),), self.degree, b.zero)

    def add(self, a, b):
        f = self.base
        return tuple(f.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        f = self.base
        return tuple(f.neg(x) for x in a)

    def mul(self, a, b):
        f = self.base
        n = self.degree
        prod = [f.zero] * (2 * n - 1)
        for i, x in enumerate(a):
            if f.is_zero(x):
                continue
            for j, y in enumerate(b):
                prod[i + j] = f.add(prod[i + j], f.mul(x, y))
        # reduce degrees >= n using x^n = _red
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if f.is_zero(c):
                continue
            prod[k] = f.zero
            for j, r in enumerate(self._red):
                prod[k - n + j] = f.add(prod[k - n + j], f.mul(c, r))
        return tuple(prod[:n])

    def is_zero(self, a):
        f = self.base
        if all(f.is_zero(x) for x in a):
            return True
        if not self.certified:
            # zero divisor <=> gcd(minpoly, a) proper; a unit has gcd 1
            g = _poly_gcd_monic(f, self.minpoly, _strip(f, a))
            if len(g) - 1 not in (0, self.degree):
                raise SplitRequired(self, g)
        return False

    def inv(self, a):
        f = self.base
        g, s = _poly_half_xgcd(f, _strip(f, a), self.minpoly)
        if len(g) != 1:
            if len(g) - 1 == self.degree:
                raise ZeroDivisionError("inverse of 0 in %r" % self)
            raise SplitRequired(self, _monic(f, g))
        c = f.inv(g[0])
        return _tuple_pad(tuple(f.mul(c, x) for x in s), self.degree, f.zero)

    def sort_key(self, a):
        return tuple(self.base.sort_key(x) for x in a)

    def to_str(self, a):
        f = self.base
        parts = []
        for i, c in enumerate(a):
            if f.is_zero(c):
                continue
            cs = f.to_str(c)
            if i == 0:
                parts.append(cs)
            else:
                mono = self.name if i == 1 else "%s^%d" % (self.name, i)
                parts.append(mono if cs == "1" else "%s*%s" % (cs, mono))
        return " + ".join(parts) if parts else "0"


# --- dense univariate helpers over an abstract Field (constant term first) ---

def _strip(f: Field, coeffs):
    coeffs = list(coeffs)
    while coeffs and f.is_zero(coeffs[-1]):
        coeffs.pop()
    return tuple(coeffs)


def _monic(f: Field, coeffs):
    coeffs = _strip(f, coeffs)
    if not coeffs:
        return coeffs
    c = f.inv(coeffs[-1])
    return tuple(f.mul(c, x) for x in coeffs)


def _poly_divmod(f: Field, a, b):
    a = list(_strip(f, a))
    b = _strip(f, b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [f.zero] * max(0, len(a) - len(b) + 1)
    inv_lead = f.inv(b[-1])
    while len(a) >= len(b):
        c = f.mul(a[-1], inv_lead)
        d = len(a) - len(b)
        q[d] = c
        for i, bc in enumerate(b):
            a[d + i] = f.sub(a[d + i], f.mul(c, bc))
        a = list(_strip(f, a))
        if not a:
            break
    return _strip(f, q), _strip(f, a)


def _poly_gcd_monic(f: Field, a, b):
    a, b = _strip(f, a), _strip(f, b)
    while b:
        _, r = _poly_divmod(f, a, b)
        a, b = b, r
    return _monic(f, a) if a else ()


def _poly_half_xgcd(f: Field, a, m):
    """Return (g, s) with g = gcd(a, m) and s*a = g (mod m)."""
    r0, r1 = _strip(f, m), _strip(f, a)
    s0, s1 = (), (f.one,)
    while r1:
        q, r = _poly_divmod(f, r0, r1)
        r0, r1 = r1, r
        qs = _poly_mul(f, q, s1)
        s0, s1 = s1, _strip(f, tuple(
            f.sub(x, y) for x, y in _zip_pad(f, s0, qs)))
    return r0, s0


def _poly_mul(f: Field, a, b):
    a, b = _strip(f, a), _strip(f, b)
    if not a or not b:
        return ()
    out = [f.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = f.add(out[i + j], f.mul(x, y))
    return _strip(f, out)


def _zip_pad(f: Field, a, b):
    n = max(len(a), len(b))
    a = _tuple_pad(a, n, f.zero)
    b = _tuple_pad(b, n, f.zero)
    return zip(a, b)


class RatFun:
    """Normalized rational function: monic-denominator pair of coefficient tuples."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self.num = num
        self.den = den

    def __repr__(self):
        return "RatFun(%r, %r)" % (self.num, self.den)

    def __eq__(self, other):
        return isinstance(other, RatFun) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))


class RationalFunctionField(Field):
    """Field of rational functions in one indeterminate over ``base``."""

    def __init__(self, base: Field, var: str = "c"):
        self.base = base
        self.var = var

    def __repr__(self):
        return "%r(%s)" % (self.base, self.var)

    def tower_depth(self):
        return self.base.tower_depth()

    def describe(self):
        return {"kind": "ratfun", "var": self.var, "base": self.base.describe()}

    def make(self, num, den=None):
        f = self.base
        num = _strip(f, tuple(f.coerce(c) for c in num))
        den = (f.one,) if den is None else _strip(f, tuple(f.coerce(c) for c in den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return RatFun((), (f.one,))
        g = _poly_gcd_monic(f, num, den)
        if len(g) > 1:
            num, _ = _poly_divmod(f, num, g)
            den, _ = _poly_divmod(f, den, g)
        lc = f.inv(den[-1])
        num = tuple(f.mul(lc, x) for x in num)
        den = tuple(f.mul(lc, x) for x in den)
        return RatFun(num, den)

    @property
    def gen(self):
        f = self.base
        return RatFun((f.zero, f.one), (f.one,))

    def from_int(self, n):
        f = self.base
        if n == 0:
            return RatFun((), (f.one,))
        return RatFun((f.from_int(n),), (f.one,))

    def coerce(self, a):
        if isinstance(a, RatFun):
            return a
        return self.make((self.base.coerce(a),))

    def add(self, a, b):
        f = self.base
        num = tuple(f.add(x, y) for x, y in _zip_pad(
            f, _poly_mul(f, a.num, b.den), _poly_mul(f, b.num, a.den)))
        return self.make(num, _poly_mul(f, a.den, b.den))

    def neg(self, a):
        f = self.base
        return RatFun(tuple(f.neg(x) for x in a.num), a.den)

    def mul(self, a, b):
        f = self.base
        return self.make(_poly_mul(f, a.num, b.num), _poly_mul(f, a.den, b.den))

    def inv(self, a):
        if not a.num:
            raise ZeroDivisionError("inverse of 0 in %r" % self)
        return self.make(a.den, a.num)

    def is_zero(self, a):
        return not a.num

    def eq(self, a, b):
        return a.num == b.num and a.den == b.den

    def sort_key(self, a):
        return (tuple(self.base.sort_key(c) for c in a.num),
                tuple(self.base.sort_key(c) for c in a.den))

    def to_str(self, a):
        def poly_str(coeffs):
            parts = []
            for i, c in enumerate(coeffs):
                if self.base.is_zero(c):
                    continue
                cs = self.base.to_str(c)
                if i == 0:
                    parts.append(cs)
                else:
                    mono = self.var if i == 1 else "%s^%d" % (self.var, i)
                    parts.append(mono if cs == "1" else "%s*%s" % (cs, mono))
            return " + ".join(parts) if parts else "0"

        if not a.num:
            return "0"
        if a.den == (self.base.one,):
            return poly_str(a.num)
        return "(%s)/(%s)" % (poly_str(a.num), poly_str(a.den))

    # constant / degree structure in the indeterminate
    def c_degree(self, a):
        return max(len(a.num) - 1, 0) if a.num else -1

    def is_constant(self, a):
        return len(a.num) <= 1 and a.den == (self.base.one,)

    def constant_value(self, a):
        if not a.num:
            return self.base.zero
        if not self.is_constant(a):
            raise ValueError("not a constant in %s" % self.var)
        return a.num[0]

    def evaluate(self, a, value):
        """Specialize the indeterminate to ``value`` (base-field element)."""
        f = self.base
        value = f.coerce(value)

        def ev(coeffs):
            acc = f.zero
            for c in reversed(coeffs):
                acc = f.add(f.mul(acc, value), c)
            return acc

        den = ev(a.den)
        if f.is_zero(den):
            raise ZeroDivisionError("denominator vanishes at specialization")
        return f.mul(ev(a.num), f.inv(den))


def tower_levels(field: Field):
    """List of extension fields from the bottom up (excluding QQ / ratfun wrapper)."""
    levels = []
    while isinstance(field, (ExtensionField, RationalFunctionField)):
        if isinstance(field, ExtensionField):
            levels.append(field)
        field = field.base
    levels.reverse()
    return levels
