"""Exact arithmetic in the cyclotomic field Q(zeta_12).

Elements are stored in the power basis 1, z, z^2, z^3 of Q[x]/(x^4 - x^2 + 1),
where z denotes a primitive 12th root of unity.  The subfields needed elsewhere
sit inside it as zeta_6 = z^2, zeta_4 = z^3, zeta_3 = z^4 = z^2 - 1.

The numeric embedding is fixed once and for all as z -> exp(2*pi*i/12); every
floating-point computation in the package goes through this single choice.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from math import gcd

# minimal polynomial x^4 - x^2 + 1; reduction rule z^4 = z^2 - 1
_Z = complex(cmath.exp(2j * cmath.pi / 12))
_Z_POWERS = [_Z ** k for k in range(12)]


def _gcd_many(values):
    g = 0
    for v in values:
        g = gcd(g, abs(v))
        if g == 1:
            return 1
    return g


class CycElem:
    """An element of Q(zeta_12), kept as 4 integers over a common denominator.

    The representation is normalized: the denominator is positive and coprime
    to the content of the numerator vector, so equality is plain tuple
    comparison.  Values are immutable and hashable.
    """

    __slots__ = ("vec", "den")

    def __init__(self, vec=(0, 0, 0, 0), den=1, _normalized=False):
        if _normalized or den == 1:
            self.vec = tuple(vec)
            self.den = den
            return
        if den == 0:
            raise ZeroDivisionError("zero denominator in CycElem")
        if den < 0:
            vec = tuple(-c for c in vec)
            den = -den
        g = _gcd_many([den] + list(vec))
        if g > 1:
            vec = tuple(c // g for c in vec)
            den //= g
        self.vec = tuple(vec)
        self.den = den

    # -- constructors -------------------------------------------------

    @classmethod
    def from_rational(cls, value) -> "CycElem":
        if isinstance(value, CycElem):
            return value
        f = Fraction(value)
        return cls((f.numerator, 0, 0, 0), f.denominator)

    @classmethod
    def from_fractions(cls, fracs) -> "CycElem":
        fracs = [Fraction(f) for f in fracs]
        den = 1
        for f in fracs:
            den = den * f.denominator // gcd(den, f.denominator)
        vec = tuple(int(f * den) for f in fracs)
        return cls(vec, den)

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> "CycElem":
        """The root of unity zeta_order^power, for any order dividing 12."""
        if 12 % order != 0:
            raise ValueError(f"order {order} does not divide 12")
        return ZETA12 ** ((12 // order) * power)

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return self.vec == (0, 0, 0, 0)

    def is_rational(self) -> bool:
        return self.vec[1] == self.vec[2] == self.vec[3] == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.vec[0], self.den)

    def fractions(self):
        return tuple(Fraction(c, self.den) for c in self.vec)

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        if not isinstance(other, CycElem):
            other = CycElem.from_rational(other)
        a, b = self, other
        if a.den == b.den:
            return CycElem(tuple(x + y for x, y in zip(a.vec, b.vec)), a.den)
        return CycElem(
            tuple(x * b.den + y * a.den for x, y in zip(a.vec, b.vec)),
            a.den * b.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return CycElem(tuple(-c for c in self.vec), self.den, _normalized=True)

    def __sub__(self, other):
        if not isinstance(other, CycElem):
            other = CycElem.from_rational(other)
        return self + (-other)

    def __rsub__(self, other):
        return CycElem.from_rational(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, CycElem):
            other = CycElem.from_rational(other)
        a0, a1, a2, a3 = self.vec
        b0, b1, b2, b3 = other.vec
        if a1 == a2 == a3 == 0:
            return CycElem((a0 * b0, a0 * b1, a0 * b2, a0 * b3), self.den * other.den)
        if b1 == b2 == b3 == 0:
            return CycElem((a0 * b0, a1 * b0, a2 * b0, a3 * b0), self.den * other.den)
        if a1 == a3 == 0 and b1 == b3 == 0:
            # both in the subfield Q(zeta_6) = Q + Q*z^2; z^4 = z^2 - 1
            bd = a2 * b2
            return CycElem(
                (a0 * b0 - bd, 0, a0 * b2 + a2 * b0 + bd, 0),
                self.den * other.den,
            )
        c0 = a0 * b0
        c1 = a0 * b1 + a1 * b0
        c2 = a0 * b2 + a1 * b1 + a2 * b0
        c3 = a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0
        c4 = a1 * b3 + a2 * b2 + a3 * b1
        c5 = a2 * b3 + a3 * b2
        c6 = a3 * b3
        # z^4 = z^2 - 1, z^5 = z^3 - z, z^6 = -1
        return CycElem(
            (c0 - c4 - c6, c1 - c5, c2 + c4, c3 + c5),
            self.den * other.den,
        )

    __rmul__ = __mul__

    def inverse(self) -> "CycElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_12)")
        if self.is_rational():
            return CycElem((self.den, 0, 0, 0), self.vec[0])
        # Solve (self * x) = 1 via the 4x4 multiplication-by-self matrix.
        cols = []
        p = CycElem((self.vec), 1, _normalized=False)
        for _ in range(4):
            cols.append(p.vec)
            v = p.vec
            p = CycElem((-v[3], v[0], v[1] + v[3], v[2]), 1)  # multiply by z
        m = [[Fraction(cols[j][i]) for j in range(4)] for i in range(4)]
        rhs = [Fraction(1), Fraction(0), Fraction(0), Fraction(0)]
        sol = _solve4(m, rhs)
        return CycElem.from_fractions(sol) * CycElem((self.den, 0, 0, 0), 1)

    def __truediv__(self, other):
        if not isinstance(other, CycElem):
            other = CycElem.from_rational(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycElem.from_rational(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparisons / hashing -----------------------------------------

    def __eq__(self, other):
        if isinstance(other, CycElem):
            return self.vec == other.vec and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self == CycElem.from_rational(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.vec, self.den))

    def __bool__(self):
        return not self.is_zero()

    # -- embedding and Galois action ------------------------------------

    def embed(self) -> complex:
        """Image under the fixed embedding z -> exp(2*pi*i/12)."""
        c0, c1, c2, c3 = self.vec
        return (c0 + c1 * _Z_POWERS[1] + c2 * _Z_POWERS[2] + c3 * _Z_POWERS[3]) / self.den

    def galois(self, k: int) -> "CycElem":
        """Apply the field automorphism z -> z^k (k coprime to 12)."""
        if gcd(k, 12) != 1:
            raise ValueError(f"z -> z^{k} is not an automorphism")
        zk = ZETA12 ** k
        out = ZERO
        p = ONE
        for i in range(4):
            out = out + CycElem((self.vec[i], 0, 0, 0), self.den) * p
            p = p * zk
        return out

    # -- display --------------------------------------------------------

    def __repr__(self):
        return f"CycElem({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.vec):
            if c == 0:
                continue
            f = Fraction(c, self.den)
            if i == 0:
                parts.append(_frac_str(f))
            else:
                zs = "z" if i == 1 else f"z^{i}"
                if f == 1:
                    parts.append(zs)
                elif f == -1:
                    parts.append(f"-{zs}")
                else:
                    parts.append(f"{_frac_str(f)}*{zs}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


def _frac_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _solve4(m, rhs):
    """Gaussian elimination on a 4x4 Fraction system (partial pivot on != 0)."""
    n = 4
    a = [row[:] + [rhs[i]] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular multiplication matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


ZERO = CycElem((0, 0, 0, 0), 1, _normalized=True)
ONE = CycElem((1, 0, 0, 0), 1, _normalized=True)
ZETA12 = CycElem((0, 1, 0, 0), 1, _normalized=True)
ZETA6 = CycElem((0, 0, 1, 0), 1, _normalized=True)
ZETA4 = CycElem((0, 0, 0, 1), 1, _normalized=True)
ZETA3 = CycElem((-1, 0, 1, 0), 1, _normalized=True)

#: exponents of the nontrivial automorphisms of Q(zeta_12)
GALOIS_EXPONENTS = (5, 7, 11)


def conjugate_product(a: CycElem) -> CycElem:
    """Product of the three nontrivial Galois conjugates, so that
    a * conjugate_product(a) equals the rational field norm."""
    return a.galois(5) * a.galois(7) * a.galois(11)


def field_norm(a: CycElem) -> Fraction:
    p = a * conjugate_product(a)
    if p.vec[1] or p.vec[2] or p.vec[3]:
        raise AssertionError("field norm must be rational")
    return Fraction(p.vec[0], p.den)


def integral_gcd(a: CycElem, b: CycElem) -> CycElem:
    """A gcd of two integral elements of Z[zeta_12] (norm-Euclidean ring).

    Nearest-integer division drives the Euclidean loop; if a division step
    fails to shrink the norm (it should not, but rounding ties are delicate)
    the loop bails out with 1, which merely under-removes content.
    """
    if a.den != 1 or b.den != 1:
        raise ValueError("integral_gcd needs integral elements")
    na, nb = abs(field_norm(a)), abs(field_norm(b))
    if na < nb:
        a, b, na, nb = b, a, nb, na
    while not b.is_zero():
        badj = conjugate_product(b)
        nb_int = (b * badj).vec[0]
        num = a * badj
        q = CycElem(
            tuple(_round_div(x, nb_int) for x in num.vec), 1, _normalized=True
        )
        r = a - q * b
        nr = abs(field_norm(r))
        if not r.is_zero() and nr >= abs(nb_int):
            return ONE
        a, b = b, r
    return a


def _round_div(x: int, d: int) -> int:
    if d < 0:
        x, d = -x, -d
    return (2 * x + d) // (2 * d)


def content_gcd(elems) -> CycElem:
    """gcd over Z[zeta_12] of a family of integral elements; ONE if any step
    degenerates.  Stops early once the running gcd has norm 1."""
    g = ZERO
    for e in elems:
        if e.is_zero():
            continue
        g = e if g.is_zero() else integral_gcd(g, e)
        if abs(field_norm(g)) == 1:
            return ONE
    return g if not g.is_zero() else ONE

_SUBFIELD_ORDER = {"Q": 1, "zeta3": 3, "zeta6": 6, "zeta12": 12}


def coerce(tag: str, value) -> CycElem:
    """Canonical inclusion of a subfield element.

    For tag "Q", value is a rational number.  For the root-of-unity tags,
    value is the exponent k and the result is zeta_tag^k inside Q(zeta_12).
    """
    if tag not in _SUBFIELD_ORDER:
        raise ValueError(f"unknown subfield tag {tag!r}")
    if tag == "Q":
        return CycElem.from_rational(value)
    return CycElem.zeta(_SUBFIELD_ORDER[tag], int(value))


def field_arithmetic(a: CycElem, b: CycElem, op: str) -> CycElem:
    """Named entry point for the four field operations ("add", "sub", "mul", "div")."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def embed_complex(a: CycElem) -> complex:
    return a.embed()
