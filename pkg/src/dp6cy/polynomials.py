"""Sparse multivariate polynomials over Q(zeta_12).

A polynomial belongs to a named ring (fixed variable list plus monomial
order); arithmetic across different rings is rejected loudly.  Monomials are
exponent tuples, terms live in a dict, and the leading term under the ring's
order is cached on first use.

The text format accepted by :func:`parse_poly` covers integers, fractions
``a/b``, the symbol ``z`` for zeta_12 with ``^`` powers, and ``*``/``^`` for
products and powers of variables, e.g. ``v2*v3^2 - v0^2*v5`` or
``(5*z^2 - 5)*v1^2*v2``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .cyclotomic import CycElem, ONE, ZERO, ZETA12


# ---------------------------------------------------------------------------
# monomial orders
# ---------------------------------------------------------------------------

class MonOrder:
    """Total order on monomials: "grevlex", "lex", or "block(k)" elimination.

    The block order eliminates the first k variables: it compares the leading
    k-block by grevlex first, then the tail by grevlex, which makes it an
    elimination order for those variables.
    """

    def __init__(self, kind: str = "grevlex", block: int = 0):
        if kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.block = block

    def key(self, exps):
        """Sort key: larger key = larger monomial."""
        if self.kind == "grevlex":
            return _grevlex_key(exps)
        if self.kind == "lex":
            return exps
        k = self.block
        return (_grevlex_key(exps[:k]), _grevlex_key(exps[k:]))

    def __eq__(self, other):
        return (
            isinstance(other, MonOrder)
            and self.kind == other.kind
            and (self.kind != "block" or self.block == other.block)
        )

    def __hash__(self):
        return hash((self.kind, self.block if self.kind == "block" else 0))

    def __repr__(self):
        if self.kind == "block":
            return f"MonOrder('block', {self.block})"
        return f"MonOrder({self.kind!r})"


def _grevlex_key(exps):
    total = 0
    for e in exps:
        total += e
    return (total, tuple(-e for e in reversed(exps)))


GREVLEX = MonOrder("grevlex")
LEX = MonOrder("lex")


# ---------------------------------------------------------------------------
# rings
# ---------------------------------------------------------------------------

class Ring:
    """A named polynomial ring: variable names plus a monomial order."""

    def __init__(self, name: str, variables, order: MonOrder = GREVLEX):
        self.name = name
        self.variables = tuple(variables)
        self.order = order
        self.nvars = len(self.variables)
        self._index = {v: i for i, v in enumerate(self.variables)}
        self._key_cache = {}

    def var_index(self, name: str) -> int:
        return self._index[name]

    def key(self, exps):
        k = self._key_cache.get(exps)
        if k is None:
            k = self.order.key(exps)
            self._key_cache[exps] = k
        return k

    def zero(self) -> "MPoly":
        return MPoly(self, {})

    def one(self) -> "MPoly":
        return MPoly(self, {(0,) * self.nvars: ONE})

    def const(self, c) -> "MPoly":
        c = c if isinstance(c, CycElem) else CycElem.from_rational(c)
        if c.is_zero():
            return self.zero()
        return MPoly(self, {(0,) * self.nvars: c})

    def var(self, i) -> "MPoly":
        if isinstance(i, str):
            i = self._index[i]
        e = [0] * self.nvars
        e[i] = 1
        return MPoly(self, {tuple(e): ONE})

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=ONE) -> "MPoly":
        coeff = coeff if isinstance(coeff, CycElem) else CycElem.from_rational(coeff)
        if coeff.is_zero():
            return self.zero()
        return MPoly(self, {tuple(exps): coeff})

    def __eq__(self, other):
        return (
            isinstance(other, Ring)
            and self.name == other.name
            and self.variables == other.variables
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.name, self.variables, self.order))

    def __repr__(self):
        return f"Ring({self.name!r}, {list(self.variables)}, {self.order!r})"


_REGISTRY = {}


def register_ring(ring: Ring) -> Ring:
    existing = _REGISTRY.get(ring.name)
    if existing is not None:
        if existing == ring:
            return existing
        raise ValueError(f"ring name {ring.name!r} already registered differently")
    _REGISTRY[ring.name] = ring
    return ring


def get_ring(name: str) -> Ring:
    return _REGISTRY[name]


def make_ring(name: str, variables, order: MonOrder = GREVLEX) -> Ring:
    """Fetch-or-create a registered ring."""
    if name in _REGISTRY:
        candidate = Ring(name, variables, order)
        if _REGISTRY[name] != candidate:
            raise ValueError(f"ring name {name!r} already registered differently")
        return _REGISTRY[name]
    return register_ring(Ring(name, variables, order))


# ambient rings used throughout: P^5, P^6, P^8, P^4, P^2
P5 = make_ring("P5", [f"v{i}" for i in range(6)])
P6 = make_ring("P6", [f"u{i}" for i in range(7)])
P8 = make_ring("P8", [f"u{i}" for i in range(9)])
P4 = make_ring("P4", [f"l{i}" for i in range(5)])
P2 = make_ring("P2", [f"x{i}" for i in range(3)])


def chart_ring(ring: Ring, chart: int) -> Ring:
    """Affine chart ring of a projective ring: drop one variable, keep names."""
    names = [f"y{ring.variables[i][1:]}" for i in range(ring.nvars) if i != chart]
    return make_ring(f"{ring.name}.chart{chart}", names)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class RingMismatch(ValueError):
    pass


class MPoly:
    """Immutable sparse polynomial: {exponent tuple: nonzero CycElem}."""

    __slots__ = ("ring", "terms", "_lead")

    def __init__(self, ring: Ring, terms: dict, _clean=False):
        self.ring = ring
        if _clean:
            self.terms = terms
        else:
            self.terms = {m: c for m, c in terms.items() if not c.is_zero()}
        self._lead = None

    # -- basic queries --------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def lead(self):
        """(monomial, coefficient) of the leading term; None for 0."""
        if self._lead is None and self.terms:
            key = self.ring.key
            m = max(self.terms, key=key)
            self._lead = (m, self.terms[m])
        return self._lead

    def lm(self):
        lead = self.lead()
        return lead[0] if lead else None

    def lc(self):
        lead = self.lead()
        return lead[1] if lead else ZERO

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def sorted_terms(self, reverse=True):
        key = self.ring.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=reverse)

    def constant_value(self) -> CycElem:
        zero_m = (0,) * self.ring.nvars
        if not self.terms:
            return ZERO
        if set(self.terms) == {zero_m}:
            return self.terms[zero_m]
        raise ValueError("polynomial is not constant")

    # -- arithmetic -------------------------------------------------------

    def _check(self, other):
        if self.ring is not other.ring and self.ring != other.ring:
            raise RingMismatch(f"rings differ: {self.ring.name} vs {other.ring.name}")

    def __add__(self, other):
        if not isinstance(other, MPoly):
            other = self.ring.const(other)
        self._check(other)
        small, big = (self.terms, other.terms) if len(self.terms) < len(other.terms) else (other.terms, self.terms)
        out = dict(big)
        for m, c in small.items():
            acc = out.get(m)
            if acc is None:
                out[m] = c
            else:
                s = acc + c
                if s.is_zero():
                    del out[m]
                else:
                    out[m] = s
        return MPoly(self.ring, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.ring, {m: -c for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        if not isinstance(other, MPoly):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return self.ring.const(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycElem)):
            return self.scale(other)
        self._check(other)
        if not self.terms or not other.terms:
            return self.ring.zero()
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                c = ca * cb
                acc = out.get(m)
                if acc is None:
                    out[m] = c
                else:
                    s = acc + c
                    if s.is_zero():
                        del out[m]
                    else:
                        out[m] = s
        return MPoly(self.ring, out, _clean=True)

    def __rmul__(self, other):
        return self.__mul__(other)

    def scale(self, c) -> "MPoly":
        c = c if isinstance(c, CycElem) else CycElem.from_rational(c)
        if c.is_zero():
            return self.ring.zero()
        return MPoly(self.ring, {m: co * c for m, co in self.terms.items()}, _clean=True)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def mul_term(self, exps, coeff) -> "MPoly":
        """Multiply by the single term coeff * x^exps."""
        return MPoly(
            self.ring,
            {tuple(a + b for a, b in zip(m, exps)): c * coeff for m, c in self.terms.items()},
            _clean=True,
        )

    # -- normalization ----------------------------------------------------

    def monic(self) -> "MPoly":
        if not self.terms:
            return self
        lc = self.lc()
        if lc == ONE:
            return self
        inv = lc.inverse()
        return self.scale(inv)

    def content_normalized(self) -> "MPoly":
        """Scale so all coefficients are integral over Z[zeta_12] with overall
        content a unit: rational content is divided out, and (for genuinely
        cyclotomic coefficients) so is the Z[zeta_12]-gcd.  Keeps Buchberger
        arithmetic fraction-free without coefficient blowup."""
        if not self.terms:
            return self
        den_lcm = 1
        for c in self.terms.values():
            den_lcm = den_lcm * c.den // gcd(den_lcm, c.den)
        g = 0
        rational_only = True
        for c in self.terms.values():
            scale = den_lcm // c.den
            if rational_only and not c.is_rational():
                rational_only = False
            for x in c.vec:
                g = gcd(g, abs(x) * scale)
            if g == 1 and den_lcm == 1 and not rational_only:
                break
        if g == 0:
            return self
        factor = Fraction(den_lcm, g)
        out = self if factor == 1 else self.scale(factor)
        if rational_only:
            return out
        from .cyclotomic import content_gcd

        ag = content_gcd(out.terms.values())
        if ag == ONE:
            return out
        return out.scale(ag.inverse())

    # -- calculus and substitution ----------------------------------------

    def partial(self, var: int) -> "MPoly":
        out = {}
        for m, c in self.terms.items():
            e = m[var]
            if e == 0:
                continue
            mm = list(m)
            mm[var] = e - 1
            out[tuple(mm)] = c * e
        return MPoly(self.ring, out)

    def evaluate(self, point):
        """Evaluate at a point; exact if entries are CycElem, numeric otherwise."""
        if len(point) != self.ring.nvars:
            raise ValueError("point length does not match ring")
        exact = all(isinstance(p, CycElem) for p in point)
        if exact:
            total = ZERO
            for m, c in self.terms.items():
                v = c
                for x, e in zip(point, m):
                    if e:
                        v = v * x ** e
                total = total + v
            return total
        pt = [p.embed() if isinstance(p, CycElem) else complex(p) for p in point]
        total = 0j
        for m, c in self.terms.items():
            v = c.embed()
            for x, e in zip(pt, m):
                if e:
                    v *= x ** e
            total += v
        return total

    def compose(self, images, target_ring: Ring | None = None) -> "MPoly":
        """Substitute images[i] for variable i; images are MPoly in a common ring."""
        if len(images) != self.ring.nvars:
            raise ValueError("need one image per variable")
        ring = target_ring or images[0].ring
        power_cache = [{0: ring.one()} for _ in images]

        def power(i, e):
            cache = power_cache[i]
            if e not in cache:
                p = power(i, e - 1) * images[i]
                cache[e] = p
            return cache[e]

        total = ring.zero()
        for m, c in self.terms.items():
            term = ring.const(c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            total = total + term
        return total

    def substitute_linear(self, matrix) -> "MPoly":
        """Compose with the linear change of variables v -> M*v (exact).

        matrix[i][j] is the coefficient of v_j in the image of v_i.
        """
        n = self.ring.nvars
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ValueError("matrix size does not match ring")
        _check_invertible(matrix)
        images = []
        for i in range(n):
            img = self.ring.zero()
            for j, c in enumerate(matrix[i]):
                c = c if isinstance(c, CycElem) else CycElem.from_rational(c)
                if not c.is_zero():
                    img = img + self.ring.var(j).scale(c)
            images.append(img)
        return self.compose(images, self.ring)

    def dehomogenize(self, chart: int) -> "MPoly":
        if not self.is_homogeneous():
            raise ValueError("dehomogenize needs a homogeneous polynomial")
        target = chart_ring(self.ring, chart)
        out = {}
        for m, c in self.terms.items():
            mm = tuple(e for i, e in enumerate(m) if i != chart)
            acc = out.get(mm)
            out[mm] = c if acc is None else acc + c
        return MPoly(target, out)

    def map_to(self, target: Ring, var_map=None) -> "MPoly":
        """Re-express in another ring; var_map[i] = target index of source var i
        (defaults to matching variable names)."""
        if var_map is None:
            var_map = [target.var_index(v) for v in self.ring.variables]
        out = {}
        for m, c in self.terms.items():
            e = [0] * target.nvars
            for i, k in enumerate(m):
                if k:
                    if m[i] and var_map[i] is None:
                        raise ValueError("variable not present in target ring")
                    e[var_map[i]] += k
            out[tuple(e)] = c
        if len(out) != len(self.terms):
            raise ValueError("variable map collides")
        return MPoly(target, out)

    # -- display -----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring.name, frozenset(self.terms.items())))

    def __repr__(self):
        return f"MPoly({self.ring.name}: {self})"

    def __str__(self):
        return poly_to_text(self)


def _check_invertible(matrix):
    """Exact singularity test by fraction-free elimination over Q(zeta_12)."""
    n = len(matrix)
    a = [[c if isinstance(c, CycElem) else CycElem.from_rational(c) for c in row] for row in matrix]
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if piv is None:
            raise ValueError("singular substitution matrix")
        a[col], a[piv] = a[piv], a[col]
        pc = a[col][col]
        for r in range(col + 1, n):
            if not a[r][col].is_zero():
                f = a[r][col]
                a[r] = [pc * x - f * y for x, y in zip(a[r], a[col])]


def poly_arithmetic(f: MPoly, g: MPoly, op: str) -> MPoly:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")


def jacobian_matrix(fs):
    """Matrix of formal partials: entry (i, j) = d f_i / d v_j."""
    if not fs:
        return []
    ring = fs[0].ring
    for f in fs[1:]:
        if f.ring != ring:
            raise RingMismatch("jacobian needs a common ring")
    return [[f.partial(j) for j in range(ring.nvars)] for f in fs]


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def poly_to_text(f: MPoly) -> str:
    """Canonical text form, round-trippable through parse_poly."""
    if f.is_zero():
        return "0"
    chunks = []
    for m, c in f.sorted_terms():
        mono = "*".join(
            v if e == 1 else f"{v}^{e}"
            for v, e in zip(f.ring.variables, m)
            if e
        )
        cs = _coeff_to_text(c)
        if mono:
            if cs == "1":
                term = mono
            elif cs == "-1":
                term = f"-{mono}"
            elif any(s in cs[1:] for s in "+-"):
                term = f"({cs})*{mono}"
            else:
                term = f"{cs}*{mono}"
        else:
            term = f"({cs})" if any(s in cs[1:] for s in "+-") else cs
        chunks.append(term)
    out = chunks[0]
    for t in chunks[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def _coeff_to_text(c: CycElem) -> str:
    return str(c)


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens = []
        self._scan()
        self.i = 0

    def _scan(self):
        t, i, n = self.text, 0, len(self.text)
        while i < n:
            ch = t[i]
            if ch.isspace():
                i += 1
                continue
            if ch in "+-*/^()":
                self.tokens.append((ch, ch))
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < n and t[j].isdigit():
                    j += 1
                self.tokens.append(("int", int(t[i:j])))
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < n and (t[j].isalnum() or t[j] == "_"):
                    j += 1
                self.tokens.append(("name", t[i:j]))
                i = j
                continue
            raise ValueError(f"bad character {ch!r} in polynomial text")

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok


def parse_poly(text: str, ring: Ring) -> MPoly:
    """Parse the polynomial text format into the given ring.

    Grammar (precedence low to high): sum of signed products; a product is
    factors joined by ``*`` or ``/``; a factor is an integer, ``z``, a ring
    variable, or a parenthesized expression, optionally raised with ``^``.
    Division is only allowed by constants.
    """
    tz = _Tokenizer(text)
    result = _parse_sum(tz, ring)
    if tz.peek()[0] is not None:
        raise ValueError(f"trailing input in polynomial text at token {tz.peek()!r}")
    return result


def _parse_sum(tz, ring):
    total = ring.zero()
    sign = 1
    first = True
    while True:
        kind, _ = tz.peek()
        if kind in ("+", "-"):
            tz.next()
            if kind == "-":
                sign = -sign
            continue
        if kind is None or kind == ")":
            if first:
                raise ValueError("empty expression")
            return total
        term = _parse_product(tz, ring)
        total = total + (term if sign > 0 else -term)
        sign = 1
        first = False
        kind, _ = tz.peek()
        if kind not in ("+", "-", None, ")"):
            raise ValueError(f"unexpected token {tz.peek()!r}")


def _parse_product(tz, ring):
    result = _parse_power(tz, ring)
    while True:
        kind, _ = tz.peek()
        if kind == "*":
            tz.next()
            result = result * _parse_power(tz, ring)
        elif kind == "/":
            tz.next()
            divisor = _parse_power(tz, ring)
            result = result.scale(divisor.constant_value().inverse())
        else:
            return result


def _parse_power(tz, ring):
    base = _parse_atom(tz, ring)
    kind, _ = tz.peek()
    if kind == "^":
        tz.next()
        k2, val = tz.next()
        if k2 != "int":
            raise ValueError("exponent must be a non-negative integer")
        return base ** val
    return base


def _parse_atom(tz, ring):
    kind, val = tz.next()
    if kind == "int":
        return ring.const(val)
    if kind == "name":
        if val == "z":
            return ring.const(ZETA12)
        if val in ring._index:
            return ring.var(val)
        raise ValueError(f"unknown symbol {val!r} for ring {ring.name}")
    if kind == "(":
        inner = _parse_sum(tz, ring)
        k2, _ = tz.next()
        if k2 != ")":
            raise ValueError("unbalanced parenthesis")
        return inner
    if kind == "-":
        return -_parse_atom(tz, ring)
    if kind == "+":
        return _parse_atom(tz, ring)
    raise ValueError(f"unexpected token {(kind, val)!r}")
