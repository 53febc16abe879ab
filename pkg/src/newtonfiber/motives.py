"""Symbolic classes in the equivariant Grothendieck ring with torus actions.

A ``Motive`` is a finite Z[L, L^-1]-linear combination of canonical class
keys.  Construction normalizes eagerly:

* scalar constants on the structure map are dropped (torus rescaling);
* a full-torus monomial class [x^a y^b : Gm^2 -> Gm] rewrites to
  (L - 1) * [x^gcd(a,b) : Gm -> Gm] by an equivariant monomial change of
  coordinates;
* a removed-locus fraction class whose only branch is smooth (p = 1,
  explicit single root, no y-monomial part) splits by cut-and-paste into
  (L - 1) * [x^gcd : Gm -> Gm] minus a one-torus class.

Keys quotient only by these implemented isomorphisms, so zero-testing is
syntactic: a zero result is certified, a nonzero one means "nonzero under
the implemented relations".  The Euler realization sends L to 1 and each
class to the compactly supported Euler characteristic of its fiber at 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .fields import QQ, ExtensionField, Field, RationalFunctionField


def field_signature(field: Field) -> str:
    if field is QQ:
        return "QQ"
    if isinstance(field, ExtensionField):
        mp = UniStr(field.minpoly, field.base)
        return "%s[%s | %s]" % (field_signature(field.base), field.name, mp)
    if isinstance(field, RationalFunctionField):
        return "%s(%s)" % (field_signature(field.base), field.var)
    return repr(field)


def UniStr(coeffs, base):
    parts = []
    for i, c in enumerate(coeffs):
        if base.is_zero(c):
            continue
        cs = base.to_str(c)
        parts.append(cs if i == 0 else "%s*z^%d" % (cs, i))
    return " + ".join(parts) if parts else "0"


class LaurentZ:
    """Element of Z[L, L^-1]: {exponent: nonzero int coefficient}."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {e: c for e, c in (coeffs or {}).items() if c}

    @classmethod
    def of(cls, n, exp=0):
        return cls({exp: n} if n else {})

    @classmethod
    def L_minus_one(cls):
        return cls({1: 1, 0: -1})

    def __add__(self, other):
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentZ(out)

    def __neg__(self):
        return LaurentZ({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentZ(out)

    def scale(self, n):
        return LaurentZ({e: n * c for e, c in self.coeffs.items()})

    def is_zero(self):
        return not self.coeffs

    def at_one(self):
        return sum(self.coeffs.values())

    def __eq__(self, other):
        return isinstance(other, LaurentZ) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def to_json(self):
        return [[e, c] for e, c in sorted(self.coeffs.items())]

    def to_str(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            if e == 0:
                parts.append("%+d" % c)
            else:
                mono = "L" if e == 1 else ("L^%d" % e)
                if c == 1:
                    parts.append("+%s" % mono)
                elif c == -1:
                    parts.append("-%s" % mono)
                else:
                    parts.append("%+d*%s" % (c, mono))
        s = " ".join(parts)
        return s[1:] if s.startswith("+") else s

    def __repr__(self):
        return "LaurentZ(%s)" % self.to_str()


@dataclass(frozen=True)
class BranchRef:
    """A root orbit of a quasi-homogeneous branch y^p = mu x^q.

    ``desc`` is "root:<element>" for an explicit root or "orbit:<minpoly>"
    for an unsplit conjugacy bundle; ``size`` counts the roots it stands for.
    """

    field_sig: str
    desc: str
    size: int

    def sort_key(self):
        return (self.desc, self.field_sig, self.size)

    def to_json(self):
        return {"field": self.field_sig, "branch": self.desc, "orbit_size": self.size}


@dataclass(frozen=True)
class TorusOne:
    """[x^n : Gm -> Gm, sigma_Gm]; the action weight is immaterial."""

    n: int

    def chi(self):
        return self.n

    def canonical(self):
        return ("torus1", self.n)

    def to_json(self):
        return {"kind": "torus1", "exponent": self.n}

    def to_str(self):
        e = "x" if self.n == 1 else "x^%d" % self.n
        return "[%s: Gm->Gm, sigma]" % e


@dataclass(frozen=True)
class FractionClass:
    """[monomial * prod branch^e : Gm^2 minus removed branches -> Gm, sigma_ray].

    ``mono`` is the net monomial exponent pair, ``factors`` maps branches to
    nonzero integer exponents, ``removed`` lists branches deleted from the
    domain.  The quasi-homogeneous type (p, q) is part of the key.
    """

    p: int
    q: int
    mono: tuple
    factors: tuple     # ((BranchRef, int), ...) sorted
    removed: tuple     # (BranchRef, ...) sorted

    def level_difference(self):
        da, db = self.mono
        n = da * self.p + db * self.q
        for br, e in self.factors:
            n += e * br.size * self.p * self.q
        return n

    def chi(self):
        counted = {br for br in self.removed}
        counted.update(br for br, e in self.factors if e != 0)
        r = sum(br.size for br in counted)
        return -r * abs(self.level_difference())

    def canonical(self):
        return ("fraction", self.p, self.q, self.mono,
                tuple((b.sort_key(), e) for b, e in self.factors),
                tuple(b.sort_key() for b in self.removed))

    def to_json(self):
        return {"kind": "fraction", "ray": [self.p, self.q],
                "monomial": list(self.mono),
                "factors": [{"branch": b.to_json(), "exponent": e}
                            for b, e in self.factors],
                "removed": [b.to_json() for b in self.removed]}

    def to_str(self):
        da, db = self.mono
        bits = []
        if da:
            bits.append("x^%d" % da)
        if db:
            bits.append("y^%d" % db)
        for br, e in self.factors:
            root = br.desc.split(":", 1)[1]
            base = "(y^%d - (%s)*x^%d)" % (self.p, root, self.q)
            bits.append(base if e == 1 else "%s^%d" % (base, e))
        expr = "*".join(bits) if bits else "1"
        return "[%s: Gm^2 \\ {branches} -> Gm, sigma_(%d,%d)]" % (expr, self.p, self.q)


class CatalogueError(ValueError):
    """A class shape outside the implemented realization catalogue."""


class Motive:
    """Normalized Z[L, L^-1]-combination of canonical classes."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for cls, coeff in (terms or {}).items():
            if not coeff.is_zero():
                clean[cls] = coeff
        self._terms = clean

    @classmethod
    def zero(cls):
        return cls({})

    def terms(self):
        return dict(self._terms)

    def is_zero(self):
        return not self._terms

    def __add__(self, other):
        out = dict(self._terms)
        for cls, coeff in other._terms.items():
            out[cls] = out[cls] + coeff if cls in out else coeff
        return Motive(out)

    def __neg__(self):
        return Motive({cls: -coeff for cls, coeff in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale_int(self, n):
        if n == 0:
            return Motive.zero()
        return Motive({cls: coeff.scale(n) for cls, coeff in self._terms.items()})

    def scale_laurent(self, lam: LaurentZ):
        if lam.is_zero():
            return Motive.zero()
        return Motive({cls: coeff * lam for cls, coeff in self._terms.items()})

    def __eq__(self, other):
        return isinstance(other, Motive) and self._terms == other._terms

    def euler(self):
        """Euler characteristic of the fiber at 1, with L realized as 1."""
        total = 0
        for cls, coeff in self._terms.items():
            total += coeff.at_one() * cls.chi()
        return total

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0].canonical())

    def to_json(self):
        return [{"class": cls.to_json(), "coefficient": coeff.to_json()}
                for cls, coeff in self.sorted_terms()]

    def to_str(self):
        if not self._terms:
            return "0"
        parts = []
        for cls, coeff in self.sorted_terms():
            cs = coeff.to_str()
            if cs == "1":
                parts.append(cls.to_str())
            elif cs == "-1":
                parts.append("-%s" % cls.to_str())
            else:
                parts.append("(%s)*%s" % (cs, cls.to_str()))
        s = parts[0]
        for p in parts[1:]:
            s += " - " + p[1:] if p.startswith("-") else " + " + p
        return s

    def __repr__(self):
        return "Motive(%s)" % self.to_str()


def torus1(n: int) -> Motive:
    """Normalized one-torus monomial class; exponent folds to |n|."""
    return Motive({TorusOne(abs(n)): LaurentZ.of(1)})


def torus2(a: int, b: int) -> Motive:
    """[x^a y^b : Gm^2 -> Gm]; rewrites to (L-1) * torus1(gcd(a, b))."""
    return Motive({TorusOne(gcd(abs(a), abs(b))): LaurentZ.L_minus_one()})


def fraction_class(p, q, mono, factors, removed) -> Motive:
    """Normalize a removed-locus fraction class.

    ``factors``: iterable of (BranchRef, exponent); zero exponents allowed
    (dropped from the map data but the branch stays removed if listed).
    The smooth single-branch shape splits by cut-and-paste.
    """
    fmap = {}
    for br, e in factors:
        if e:
            fmap[br] = fmap.get(br, 0) + e
    factors_t = tuple(sorted(fmap.items(), key=lambda kv: kv[0].sort_key()))
    removed_t = tuple(sorted(set(removed), key=lambda b: b.sort_key()))
    if not factors_t and not removed_t:
        da, db = mono
        return torus2(da, db)
    cls = FractionClass(p, q, (int(mono[0]), int(mono[1])), factors_t, removed_t)
    smooth = _smooth_split(cls)
    if smooth is not None:
        return smooth
    return Motive({cls: LaurentZ.of(1)})


def _smooth_split(cls: FractionClass):
    """Cut-and-paste of [x^A (y - mu x^q)^d : Gm^2 minus the branch -> Gm]."""
    if cls.p != 1 or cls.mono[1] != 0:
        return None
    branches = {br for br in cls.removed}
    branches.update(br for br, _ in cls.factors)
    if len(branches) != 1:
        return None
    br = next(iter(branches))
    if br.size != 1 or not br.desc.startswith("root:"):
        return None
    d = dict(cls.factors).get(br, 0)
    A = cls.mono[0]
    n = A + cls.q * d
    return torus2(A, d) - torus1(n)


def chi_of_motive(m: Motive) -> int:
    return m.euler()
