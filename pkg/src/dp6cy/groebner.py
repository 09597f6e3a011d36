"""Buchberger-based ideal arithmetic over Q(zeta_12).

The pair queue uses the Gebauer-Moller installation (coprimality and chain
criteria) with normal selection; intermediate reductions are fraction-free
with content removal after every reduction, so all Buchberger arithmetic
stays on integral coefficient vectors.  Reduced bases are monic and unique,
which makes ideal equality a set comparison.
"""

from __future__ import annotations

import heapq
import os
from fractions import Fraction

_DEBUG = bool(os.environ.get("DP6CY_GB_DEBUG"))

from .cyclotomic import CycElem, ONE, ZERO
from .polynomials import MPoly, MonOrder, Ring, make_ring, parse_poly, poly_to_text


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


class _Entry:
    __slots__ = ("terms", "lm", "lc", "idx", "sugar")

    def __init__(self, poly: MPoly, idx: int, sugar=None):
        self.terms = poly.terms
        self.lm, self.lc = poly.lead()
        self.idx = idx
        self.sugar = poly.degree() if sugar is None else sugar


def _reduce_full(h_terms, basis, ring, exact=False, sugar=None):
    """Full reduction of a term dict against basis entries.

    exact=False: fraction-free (result correct up to a scalar), used inside
    Buchberger.  exact=True: divisors must be monic; returns the true
    remainder, used for normal forms.  When `sugar` is given, the reduced
    polynomial's sugar degree is tracked and returned alongside the terms.
    """
    key = ring.key
    h = dict(h_terms)
    done = set()
    steps = 0
    while True:
        best = None
        best_key = None
        for m in h:
            if m in done:
                continue
            k = key(m)
            if best_key is None or k > best_key:
                best, best_key = m, k
        if best is None:
            return (h, sugar) if sugar is not None else h
        hit = None
        for e in basis:
            if _divides(e.lm, best):
                hit = e
                break
        if hit is None:
            done.add(best)
            continue
        c = h[best]
        delta = _sub(best, hit.lm)
        if sugar is not None:
            sugar = max(sugar, hit.sugar + sum(delta))
        if exact or hit.lc == ONE:
            new = dict(h)
        else:
            # h <- lc(g)*h - c*x^delta*g keeps everything division-free
            new = {m: co * hit.lc for m, co in h.items()}
        for m, co in hit.terms.items():
            mm = _add(m, delta)
            sub = c * co
            acc = new.get(mm)
            if acc is None:
                new[mm] = -sub
            else:
                s = acc - sub
                if s.is_zero():
                    del new[mm]
                else:
                    new[mm] = s
        h = new
        steps += 1
        if not exact and steps % 12 == 0 and h:
            h = MPoly(ring, h, _clean=True).content_normalized().terms


def _spoly(f: _Entry, g: _Entry, ring):
    l = _lcm(f.lm, g.lm)
    a = MPoly(ring, f.terms, _clean=True).mul_term(_sub(l, f.lm), g.lc)
    b = MPoly(ring, g.terms, _clean=True).mul_term(_sub(l, g.lm), f.lc)
    sugar = max(f.sugar + sum(_sub(l, f.lm)), g.sugar + sum(_sub(l, g.lm)))
    return (a - b).terms, sugar


def _pair_sugar(f: _Entry, g: _Entry):
    l = _lcm(f.lm, g.lm)
    return max(f.sugar + sum(_sub(l, f.lm)), g.sugar + sum(_sub(l, g.lm)))


class GroebnerBasis:
    """A reduced, monic Groebner basis with the original generators kept."""

    def __init__(self, ring: Ring, generators, original=None):
        self.ring = ring
        self.order = ring.order
        self.generators = list(generators)
        self.original = list(original) if original is not None else list(generators)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __eq__(self, other):
        if not isinstance(other, GroebnerBasis):
            return NotImplemented
        return self.ring == other.ring and set(
            frozenset(g.terms.items()) for g in self.generators
        ) == set(frozenset(g.terms.items()) for g in other.generators)

    def __repr__(self):
        return f"GroebnerBasis({self.ring.name}, {len(self.generators)} gens)"

    def is_unit_ideal(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].degree() == 0

    def is_zero_ideal(self) -> bool:
        return not self.generators

    def leading_monomials(self):
        return [g.lm() for g in self.generators]

    def normal_form(self, f: MPoly) -> MPoly:
        if f.ring != self.ring:
            raise ValueError("normal_form: ring mismatch")
        if not self.generators:
            return f
        entries = [_Entry(g, i) for i, g in enumerate(self.generators)]
        return MPoly(self.ring, _reduce_full(f.terms, entries, self.ring, exact=True))

    def contains(self, f: MPoly) -> bool:
        return self.normal_form(f).is_zero()

    # -- zero-dimensional structure ------------------------------------

    def is_zero_dimensional(self) -> bool:
        if self.is_unit_ideal():
            return True
        if not self.generators:
            return self.ring.nvars == 0
        lms = self.leading_monomials()
        for i in range(self.ring.nvars):
            if not any(sum(m) == m[i] and m[i] > 0 for m in lms):
                return False
        return True

    def quotient_dimension(self):
        """Number of standard monomials; float('inf') when not 0-dimensional."""
        if self.is_unit_ideal():
            return 0
        if not self.is_zero_dimensional():
            return float("inf")
        return len(self.standard_monomials())

    def standard_monomials(self):
        """Monomials outside the leading-term ideal, sorted ascending."""
        if self.is_unit_ideal():
            return []
        n = self.ring.nvars
        lms = self.leading_monomials()
        bounds = []
        for i in range(n):
            pure = [m[i] for m in lms if sum(m) == m[i] and m[i] > 0]
            if not pure:
                raise ValueError("quotient ring is not finite-dimensional")
            bounds.append(min(pure))
        out = []
        stack = [(0,) * n]
        seen = {(0,) * n}
        while stack:
            m = stack.pop()
            if any(_divides(lm, m) for lm in lms):
                continue
            out.append(m)
            for i in range(n):
                if m[i] + 1 >= bounds[i]:
                    continue
                mm = list(m)
                mm[i] += 1
                mm = tuple(mm)
                if mm not in seen:
                    seen.add(mm)
                    stack.append(mm)
        out.sort(key=self.ring.key)
        return out

    def multiplication_matrix(self, var: int, basis=None):
        """Matrix of multiplication by the given variable on the quotient
        basis, columns indexed by basis monomials (entry [i][j] over CycElem)."""
        if basis is None:
            basis = self.standard_monomials()
        if not basis and not self.is_unit_ideal():
            raise ValueError("infinite-dimensional quotient")
        index = {m: i for i, m in enumerate(basis)}
        n = len(basis)
        cols = []
        entries = [_Entry(g, i) for i, g in enumerate(self.generators)]
        shift = [0] * self.ring.nvars
        shift[var] = 1
        shift = tuple(shift)
        for m in basis:
            mm = _add(m, shift)
            if mm in index:
                col = {index[mm]: ONE}
            else:
                nf = _reduce_full({mm: ONE}, entries, self.ring, exact=True)
                col = {}
                for mono, c in nf.items():
                    col[index[mono]] = c
            cols.append(col)
        matrix = [[ZERO] * n for _ in range(n)]
        for j, col in enumerate(cols):
            for i, c in col.items():
                matrix[i][j] = c
        return matrix

    # -- serialization ---------------------------------------------------

    def to_lines(self):
        return [poly_to_text(g) for g in self.generators]

    @classmethod
    def from_lines(cls, ring: Ring, lines, original=None):
        gens = [parse_poly(line, ring) for line in lines]
        return cls(ring, gens, original=original)


def buchberger(gens, ring: Ring | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by gens.

    Handles the degenerate ideals <0> and <1>.  The result is independent of
    the generator order (reduced bases are unique per monomial order).
    """
    gens = [g for g in gens if g is not None]
    if ring is None:
        if not gens:
            raise ValueError("buchberger needs generators or an explicit ring")
        ring = gens[0].ring
    original = list(gens)
    work = []
    seen = set()
    for g in gens:
        if g.ring != ring:
            raise ValueError("buchberger: mixed rings")
        if g.is_zero():
            continue
        g = g.content_normalized()
        fs = frozenset(g.terms.items())
        if fs not in seen:
            seen.add(fs)
            work.append(g)
    if not work:
        return GroebnerBasis(ring, [], original=original)
    work.sort(key=lambda p: ring.key(p.lm()))

    G: list[_Entry] = []
    pairs = []  # heap of (sugar, lcm_key, tiebreak, i, j, lcm)
    pair_set = {}
    counter = 0

    def push_pair(ei, ej):
        nonlocal counter
        l = _lcm(ei.lm, ej.lm)
        counter += 1
        item = (_pair_sugar(ei, ej), ring.key(l), counter, ei.idx, ej.idx, l)
        heapq.heappush(pairs, item)
        pair_set[(ei.idx, ej.idx)] = l

    def update(new_entry):
        """Gebauer-Moller UPDATE: prune new and old pairs, then install."""
        lm_h = new_entry.lm
        cand = list(G)
        kept = []
        # chain criterion among the new pairs
        for g in cand:
            l_g = _lcm(lm_h, g.lm)
            redundant = False
            for g2 in cand:
                if g2 is g:
                    continue
                l2 = _lcm(lm_h, g2.lm)
                if l2 != l_g and _divides(l2, l_g):
                    redundant = True
                    break
            if not redundant:
                kept.append(g)
        # drop pairs caught by duplicate lcm (keep one representative)
        by_lcm = {}
        for g in kept:
            by_lcm.setdefault(_lcm(lm_h, g.lm), g)
        # coprimality criterion
        survivors = [g for l, g in by_lcm.items() if not _coprime(lm_h, g.lm)]
        # chain criterion against the old pair set
        for (i, j), l in list(pair_set.items()):
            ei, ej = id_map[i], id_map[j]
            if (
                _divides(lm_h, l)
                and _lcm(lm_h, ei.lm) != l
                and _lcm(lm_h, ej.lm) != l
            ):
                del pair_set[(i, j)]
        for g in survivors:
            push_pair(g, new_entry)
        G.append(new_entry)
        id_map[new_entry.idx] = new_entry

    id_map = {}
    next_idx = 0
    for g in work:
        e = _Entry(g, next_idx)
        next_idx += 1
        update(e)

    processed = 0
    while pairs:
        _, _, _, i, j, l = heapq.heappop(pairs)
        if pair_set.get((i, j)) != l:
            continue
        del pair_set[(i, j)]
        s, s_sugar = _spoly(id_map[i], id_map[j], ring)
        if not s:
            continue
        h, h_sugar = _reduce_full(s, G, ring, sugar=s_sugar)
        processed += 1
        if _DEBUG and processed % 20 == 0:
            bits = max(
                (max(abs(x).bit_length() for x in c.vec) for c in h.values()),
                default=0,
            ) if h else 0
            print(
                f"[gb {ring.name}] pairs={len(pair_set)} basis={len(G)} "
                f"processed={processed} terms={len(h)} bits={bits}",
                flush=True,
            )
        if not h:
            continue
        hp = MPoly(ring, h, _clean=True).content_normalized()
        e = _Entry(hp, next_idx, sugar=h_sugar)
        next_idx += 1
        update(e)

    reduced = _interreduce([MPoly(ring, e.terms, _clean=True) for e in G], ring)
    return GroebnerBasis(ring, reduced, original=original)


def _interreduce(polys, ring):
    """Minimalize and tail-reduce a Groebner set into the reduced monic basis."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return []
    polys.sort(key=lambda p: ring.key(p.lm()))
    minimal = []
    for p in polys:
        lm = p.lm()
        if any(_divides(q.lm(), lm) for q in minimal):
            continue
        minimal = [q for q in minimal if not _divides(lm, q.lm())]
        minimal.append(p)
    minimal = [p.monic() for p in minimal]
    changed = True
    while changed:
        changed = False
        for i, p in enumerate(minimal):
            others = [_Entry(q, k) for k, q in enumerate(minimal) if k != i]
            if not others:
                continue
            nf = MPoly(ring, _reduce_full(p.terms, others, ring, exact=True))
            if nf.terms != p.terms:
                if nf.is_zero():
                    raise AssertionError("minimal basis element reduced to zero")
                minimal[i] = nf.monic()
                changed = True
    minimal.sort(key=lambda p: ring.key(p.lm()), reverse=True)
    return minimal


def normal_form(f: MPoly, basis: GroebnerBasis) -> MPoly:
    return basis.normal_form(f)


def ideal_equality(a: GroebnerBasis, b: GroebnerBasis) -> bool:
    if a.ring != b.ring:
        raise ValueError("ideal_equality: ring mismatch")
    return a == b


def s_polynomial_check(basis: GroebnerBasis) -> bool:
    """Re-verify the Buchberger criterion: every S-polynomial reduces to 0."""
    gens = basis.generators
    entries = [_Entry(g, i) for i, g in enumerate(gens)]
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            s = _spoly(entries[i], entries[j], basis.ring)
            if s and _reduce_full(s, entries, basis.ring):
                return False
    return True


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------

def elimination_ideal(gens, eliminate: int, target_ring: Ring | None = None) -> GroebnerBasis:
    """Intersect the ideal with the subring dropping the first `eliminate`
    variables, via a block elimination order.

    The returned basis lives in the registered grevlex ring on the surviving
    variables (created if needed, or `target_ring` with matching names).
    """
    if not gens:
        raise ValueError("elimination_ideal needs generators")
    ring = gens[0].ring
    k = eliminate
    if not 0 < k < ring.nvars:
        raise ValueError("eliminate count must be strictly between 0 and nvars")
    elim_ring = make_ring(
        f"{ring.name}.elim{k}", ring.variables, MonOrder("block", k)
    )
    lifted = [g.map_to(elim_ring) for g in gens]
    gb = buchberger(lifted, elim_ring)
    survivors = ring.variables[k:]
    if target_ring is None:
        target_ring = make_ring(f"{ring.name}.sub{k}", survivors)
    elif target_ring.variables != tuple(survivors):
        raise ValueError("target ring variables do not match surviving variables")
    var_map = [None] * k + [i for i in range(len(survivors))]
    kept = []
    for g in gb.generators:
        if all(all(m[i] == 0 for i in range(k)) for m in g.terms):
            kept.append(g.map_to(target_ring, var_map))
    reduced = _interreduce(kept, target_ring)
    return GroebnerBasis(target_ring, reduced, original=kept)


def eliminate_variables(gens, drop_indices, target_ring: Ring | None = None) -> GroebnerBasis:
    """Eliminate an arbitrary set of variables by reordering them first."""
    ring = gens[0].ring
    drop = sorted(set(drop_indices))
    keep = [i for i in range(ring.nvars) if i not in drop]
    perm = drop + keep
    perm_ring = make_ring(
        f"{ring.name}.perm{''.join(map(str, drop))}",
        [ring.variables[i] for i in perm],
        MonOrder("block", len(drop)),
    )
    inv = [perm.index(i) for i in range(ring.nvars)]
    lifted = [g.map_to(perm_ring, inv) for g in gens]
    gb = buchberger(lifted, perm_ring)
    survivors = [ring.variables[i] for i in keep]
    if target_ring is None:
        target_ring = make_ring(f"{ring.name}.keep{''.join(map(str, keep))}", survivors)
    k = len(drop)
    var_map = [None] * k + list(range(len(survivors)))
    kept = []
    for g in gb.generators:
        if all(all(m[i] == 0 for i in range(k)) for m in g.terms):
            kept.append(g.map_to(target_ring, var_map))
    reduced = _interreduce(kept, target_ring)
    return GroebnerBasis(target_ring, reduced, original=kept)


# ---------------------------------------------------------------------------
# Hilbert series: projective dimension and degree
# ---------------------------------------------------------------------------

def _minimalize(monos):
    monos = sorted(set(monos), key=sum)
    out = []
    for m in monos:
        if not any(_divides(q, m) for q in out):
            out.append(m)
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly_add(a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly_shift_mul(a, k):
    return [0] * k + list(a)


def _hilbert_numerator(monos, memo):
    """Numerator of the Hilbert series of k[x]/I for a monomial ideal I."""
    monos = _minimalize(monos)
    key = frozenset(monos)
    if key in memo:
        return memo[key]
    if not monos:
        return [1]
    if any(sum(m) == 0 for m in monos):
        return []
    # split off pure powers (they contribute exact (1 - t^d) factors)
    pures = [m for m in monos if sum(m) == max(m)]
    if len(pures) == len(monos):
        out = [1]
        for m in monos:
            out = _poly_sub(out, _poly_shift_mul(out, sum(m)))
        memo[key] = out
        return out
    # pivot on the most frequent variable of a mixed generator; the exact
    # sequence 0 -> R/(I:p) -> R/I -> R/(I+p) -> 0 gives
    # N(I) = N(I + <p>) + t * N(I : p)
    n = len(monos[0])
    mixed_vars = set()
    for m in monos:
        if sum(m) != max(m):
            mixed_vars.update(i for i, e in enumerate(m) if e)
    counts = [0] * n
    for m in monos:
        for i, e in enumerate(m):
            if e:
                counts[i] += 1
    piv = max(mixed_vars, key=lambda i: counts[i])
    pivot = tuple(1 if i == piv else 0 for i in range(n))
    plus = monos + [pivot]
    colon = [tuple(e - p if e >= p else 0 for e, p in zip(m, pivot)) for m in monos]
    res = _poly_add(
        _hilbert_numerator(plus, memo),
        _poly_shift_mul(_hilbert_numerator(colon, memo), 1),
    )
    memo[key] = res
    return res


def projective_dimension_degree(gens) -> tuple:
    """(projective dimension, degree) of V(gens) via the Hilbert series of
    the leading-term ideal of a grevlex basis."""
    ring = gens[0].ring
    for g in gens:
        if not g.is_homogeneous():
            raise ValueError("projective_dimension_degree needs homogeneous generators")
    gb = buchberger(gens, ring)
    if gb.is_unit_ideal():
        return (-1, 0)
    if gb.is_zero_ideal():
        return (ring.nvars - 1, 1)
    num = _hilbert_numerator(gb.leading_monomials(), {})
    # divide numerator by (1 - t) while possible
    cancels = 0
    while num and sum(num) == 0:
        # synthetic division by (1 - t): q_i = sum of num_0..num_i
        q = []
        acc = 0
        for c in num[:-1]:
            acc += c
            q.append(acc)
        num = q
        while num and num[-1] == 0:
            num.pop()
        cancels += 1
    cone_dim = ring.nvars - cancels
    degree = sum(num) if num else 1
    return (cone_dim - 1, degree)
