"""Projective schemes and rational maps for the del Pezzo pipeline.

Builds the sextic del Pezzo surface in P^6 from its plane model, projects it
into P^5, and manages the complete-intersection threefolds that contain it:
named cubic forms, generic members of the family, singular-scheme systems,
and the monomial map whose image carries the quotient-singularity analysis.
"""

from __future__ import annotations

import importlib.resources
import random

from .cyclotomic import CycElem, ONE, ZERO
from .groebner import (
    GroebnerBasis,
    buchberger,
    eliminate_variables,
    projective_dimension_degree,
)
from .polynomials import (
    MPoly,
    MonOrder,
    P2,
    P4,
    P5,
    P6,
    P8,
    Ring,
    jacobian_matrix,
    make_ring,
    parse_poly,
)


# ---------------------------------------------------------------------------
# named forms
# ---------------------------------------------------------------------------

class NamedFormRegistry:
    """The named forms on P^5, parsed from the shipped transcription file.

    Holds Q1, Q2, Q3 := Q1 + Q2, F1..F7, the invariant cubic pairs
    (A1p, A2p) and (A1pp, A2pp), and exposes the generic-family template
    A(c) = sum c_i F_i.
    """

    def __init__(self, source: str | None = None):
        if source is None:
            source = (
                importlib.resources.files("dp6cy.data")
                .joinpath("forms.txt")
                .read_text()
            )
        self.source = source
        names = {}
        pending = {}
        for line in source.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            name, expr = (part.strip() for part in line.split("=", 1))
            pending[name] = expr
        # F-combinations reference earlier names; resolve in file order
        for name, expr in pending.items():
            poly = _parse_with_names(expr, names)
            names[name] = poly
        self.forms = names
        self.forms["Q3"] = self.forms["Q1"] + self.forms["Q2"]
        self.F = [self.forms[f"F{i}"] for i in range(1, 8)]
        self.Q = [self.forms["Q1"], self.forms["Q2"]]

    def __getitem__(self, name: str) -> MPoly:
        return self.forms[name]

    def names(self):
        return list(self.forms)

    def ideal_generators(self):
        """The nine generators of the del Pezzo ideal in P^5."""
        return [self.forms[n] for n in ("Q1", "Q2", "F1", "F2", "F3", "F4", "F5", "F6", "F7")]

    def family_member(self, coeffs) -> MPoly:
        """sum coeffs[i] * F_{i+1} for 7 coefficients."""
        if len(coeffs) != 7:
            raise ValueError("the cubic family has 7 coefficients")
        total = P5.zero()
        for c, f in zip(coeffs, self.F):
            c = c if isinstance(c, CycElem) else CycElem.from_rational(c)
            total = total + f.scale(c)
        return total


def _parse_with_names(expr: str, names: dict) -> MPoly:
    # allow references to already-parsed names (A1p = F1 + F2 - ...)
    tokens = expr.replace("+", " + ").replace("-", " - ").split()
    if any(tok in names for tok in tokens):
        total = P5.zero()
        sign = 1
        for tok in tokens:
            if tok == "+":
                continue
            if tok == "-":
                sign = -sign
                continue
            part = names.get(tok)
            if part is None:
                part = parse_poly(tok, P5)
            total = total + (part if sign > 0 else -part)
            sign = 1
        return total
    return parse_poly(expr, P5)


_REGISTRY_CACHE = None


def registry() -> NamedFormRegistry:
    global _REGISTRY_CACHE
    if _REGISTRY_CACHE is None:
        _REGISTRY_CACHE = NamedFormRegistry()
    return _REGISTRY_CACHE


# ---------------------------------------------------------------------------
# rational maps and implicitization
# ---------------------------------------------------------------------------

class RationalMapSpec:
    """A rational map between projective spaces given by same-degree forms."""

    def __init__(self, source: Ring, target: Ring, components):
        self.source = source
        self.target = target
        self.components = list(components)
        if not self.components or all(c.is_zero() for c in self.components):
            raise ValueError("map components must not all vanish")
        degs = {c.degree() for c in self.components if not c.is_zero()}
        if len(degs) != 1 or not all(c.is_homogeneous() for c in self.components if not c.is_zero()):
            raise ValueError("map components must be homogeneous of one degree")
        if len(self.components) != target.nvars:
            raise ValueError("component count must match target dimension")

    def evaluate(self, point):
        return [c.evaluate(point) for c in self.components]

    def base_point(self, point) -> bool:
        """True when every component vanishes at the (exact) point."""
        values = self.evaluate(point)
        return all(v.is_zero() if isinstance(v, CycElem) else abs(v) < 1e-12 for v in values)


def del_pezzo_embed() -> RationalMapSpec:
    """The anticanonical system of cubics through [1:0:0], [0:1:0], [0:0:1],
    listed in the ambient coordinate order u0..u6."""
    monomials = [
        "x0*x1^2",
        "x0*x2^2",
        "x1^2*x2",
        "x0^2*x1",
        "x2^2*x1",
        "x0^2*x2",
        "x0*x1*x2",
    ]
    return RationalMapSpec(P2, P6, [parse_poly(m, P2) for m in monomials])


def image_ideal(spec: RationalMapSpec) -> GroebnerBasis:
    """Ideal of the closure of the image, by eliminating the source variables
    from the graph ideal <u_i - m_i(x)>."""
    ns, nt = spec.source.nvars, spec.target.nvars
    graph = make_ring(
        f"graph.{spec.source.name}.{spec.target.name}",
        list(spec.source.variables) + list(spec.target.variables),
        MonOrder("block", ns),
    )
    src_map = list(range(ns))
    tgt_map = [ns + i for i in range(nt)]
    gens = []
    for i, comp in enumerate(spec.components):
        gens.append(graph.var(ns + i) - comp.map_to(graph, src_map))
    gb = buchberger(gens, graph)
    kept = []
    var_map = [None] * ns + list(range(nt))
    for g in gb.generators:
        if all(all(m[i] == 0 for i in range(ns)) for m in g.terms):
            kept.append(g.map_to(spec.target, var_map))
    from .groebner import _interreduce

    reduced = _interreduce(kept, spec.target)
    return GroebnerBasis(spec.target, reduced, original=kept)


def pullback_is_zero(spec: RationalMapSpec, g: MPoly) -> bool:
    """Implicitization soundness oracle: g(m_0, ..., m_k) == 0 exactly."""
    return g.compose(spec.components, spec.source).is_zero()


def del_pezzo_p5_ideal() -> GroebnerBasis:
    """I(D6~) in P^5: project I(D6) from [0:...:0:1] by eliminating u6."""
    gb6 = image_ideal(del_pezzo_embed())
    target = make_ring("P6.drop6", P6.variables[:6])
    dropped = eliminate_variables(gb6.generators, [6], target_ring=target)
    moved = [g.map_to(P5, list(range(6))) for g in dropped.generators]
    return buchberger(moved, P5)


def quotient_monomial_map() -> RationalMapSpec:
    """The degree-3 monomial map P^4 -> P^8 used to present the cyclic
    quotient singularity by its invariants."""
    monomials = [
        "l0^3",
        "l1^3",
        "l1^2*l2",
        "l2^2*l1",
        "l2^3",
        "l3^3",
        "l3^2*l4",
        "l4^2*l3",
        "l4^3",
    ]
    return RationalMapSpec(P4, P8, [parse_poly(m, P4) for m in monomials])


def quotient_image_binomials():
    """The six displayed binomial generators of the monomial-map image."""
    text = [
        "-u1*u3 + u2^2",
        "-u1*u4 + u2*u3",
        "-u2*u4 + u3^2",
        "-u5*u7 + u6^2",
        "-u5*u8 + u6*u7",
        "-u6*u8 + u7^2",
    ]
    return [parse_poly(t, P8) for t in text]


# ---------------------------------------------------------------------------
# complete-intersection threefolds
# ---------------------------------------------------------------------------

class CIThreefold:
    """A complete intersection of two cubic fourfolds in P^5."""

    def __init__(self, a: MPoly, b: MPoly, name: str = "X"):
        if a.ring != P5 or b.ring != P5:
            raise ValueError("threefold cubics must live in the P5 ring")
        for f in (a, b):
            if not (f.is_homogeneous() and f.degree() == 3):
                raise ValueError("defining forms must be homogeneous cubics")
        if _linearly_dependent(a, b):
            raise ValueError("defining cubics are linearly dependent")
        self.a = a
        self.b = b
        self.name = name

    def forms(self):
        return [self.a, self.b]

    def jacobian(self):
        return jacobian_matrix([self.a, self.b])

    def singular_scheme_ideal(self, chart: int):
        """Chart generators of the singular scheme: the two dehomogenized
        cubics plus all fifteen 2x2 minors of the 2x6 Jacobian."""
        if not 0 <= chart < 6:
            raise ValueError("chart must be one of the 6 coordinate charts")
        jac = self.jacobian()
        gens = [self.a.dehomogenize(chart), self.b.dehomogenize(chart)]
        for j in range(6):
            for k in range(j + 1, 6):
                minor = jac[0][j] * jac[1][k] - jac[0][k] * jac[1][j]
                gens.append(minor.dehomogenize(chart))
        return gens

    def chart_forms(self, chart: int):
        return [self.a.dehomogenize(chart), self.b.dehomogenize(chart)]

    def __repr__(self):
        return f"CIThreefold({self.name})"


def _linearly_dependent(a: MPoly, b: MPoly) -> bool:
    if a.is_zero() or b.is_zero():
        return True
    m, c = a.lead()
    cb = b.terms.get(m)
    if cb is None:
        return False
    ratio = cb / c
    return b == a.scale(ratio)


def y_prime() -> CIThreefold:
    r = registry()
    return CIThreefold(r["A1p"], r["A2p"], name="Y'")


def y_double_prime() -> CIThreefold:
    r = registry()
    return CIThreefold(r["A1pp"], r["A2pp"], name="Y''")


def generic_family_sample(seed: int) -> CIThreefold:
    """Deterministic pseudo-random member of the cubic family through the
    del Pezzo surface: integer coefficients in [-9, 9] \\ {0}, resampled
    while the two cubics are linearly dependent."""
    rng = random.Random(seed)
    r = registry()

    def draw():
        coeffs = []
        while len(coeffs) < 7:
            c = rng.randint(-9, 9)
            if c != 0:
                coeffs.append(c)
        return coeffs

    while True:
        ca, cb = draw(), draw()
        a = r.family_member(ca)
        b = r.family_member(cb)
        if not _linearly_dependent(a, b):
            x = CIThreefold(a, b, name=f"sample{seed}")
            x.coefficients = (ca, cb)
            return x


def contains_scheme(inner: GroebnerBasis, outer_gens) -> bool:
    """V(outer) contains the scheme of `inner` iff every outer generator
    reduces to zero against inner's basis."""
    return all(inner.normal_form(g).is_zero() for g in outer_gens)


def chart_groebner(x: CIThreefold, chart: int) -> GroebnerBasis:
    return buchberger(x.singular_scheme_ideal(chart))


def smoothness_check(gens, expected_codim: int, max_charts: int | None = None):
    """("smooth", None) or ("singular", chartwise quotient dims).

    Chart-by-chart: the scheme ideal plus the rank-deficiency minors of its
    Jacobian must cut out the empty set.  Minors are added incrementally so
    the common case (unit ideal) exits before all of them are formed.
    """
    ring = gens[0].ring
    n = ring.nvars
    jac = jacobian_matrix(gens)
    r = expected_codim
    chart_dims = []
    smooth = True
    charts = range(n if max_charts is None else max_charts)
    for chart in charts:
        base = [g.dehomogenize(chart) for g in gens]
        gb = buchberger(base)
        if gb.is_unit_ideal():
            chart_dims.append(0)
            continue
        import itertools

        added = list(base)
        unit = False
        batch = []
        for rows in itertools.combinations(range(len(gens)), r):
            for cols in itertools.combinations(range(n), r):
                minor = _det([[jac[i][j] for j in cols] for i in rows])
                if minor.is_zero():
                    continue
                batch.append(minor.dehomogenize(chart))
                if len(batch) >= 6:
                    added.extend(batch)
                    batch = []
                    gb = buchberger(added)
                    if gb.is_unit_ideal():
                        unit = True
                        break
            if unit:
                break
        if not unit and batch:
            added.extend(batch)
            gb = buchberger(added)
            unit = gb.is_unit_ideal()
        if unit:
            chart_dims.append(0)
            continue
        q = gb.quotient_dimension()
        if q == float("inf"):
            raise ValueError(f"singular locus is positive-dimensional in chart {chart}")
        chart_dims.append(q)
        if q > 0:
            smooth = False
    if smooth:
        return ("smooth", chart_dims)
    return ("singular", chart_dims)


def _det(matrix):
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = None
    for j in range(n):
        sub = [[row[k] for k in range(n) if k != j] for row in matrix[1:]]
        term = matrix[0][j] * _det(sub)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total
