"""Numeric resolution of zero-dimensional systems.

Chart systems are solved by the multiplication-matrix eigenvalue method: a
seeded random combination of the multiplication matrices is diagonalized,
solutions are read off the eigenvectors through the quotient-basis
coordinates, then polished by Newton iteration on a well-conditioned square
subsystem.  Points from all charts are merged projectively (Fubini-Study
metric) into a SolutionSet.
"""

from __future__ import annotations

import random

import numpy as np
import scipy.linalg

from .config import Tolerances, DEFAULT
from .cyclotomic import CycElem, GALOIS_EXPONENTS
from .groebner import GroebnerBasis, buchberger
from .polynomials import MPoly


class CPoint:
    """A projective point with (largest coordinate = 1) normalization."""

    __slots__ = ("coords", "residual", "chart")

    def __init__(self, coords, residual=float("nan"), chart=None):
        coords = np.asarray(coords, dtype=complex)
        k = int(np.argmax(np.abs(coords)))
        if coords[k] == 0:
            raise ValueError("zero vector is not a projective point")
        self.coords = coords / coords[k]
        self.residual = residual
        self.chart = chart

    def __len__(self):
        return len(self.coords)

    def __repr__(self):
        inner = ", ".join(f"{c:.4g}" for c in self.coords)
        return f"CPoint([{inner}], res={self.residual:.1e})"


def fubini_study(p, q) -> float:
    """Projective distance: sin of the angle between the coordinate lines."""
    a = np.asarray(p, dtype=complex)
    b = np.asarray(q, dtype=complex)
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ValueError("zero vector")
    c = abs(np.vdot(a, b)) / (na * nb)
    return float(np.sqrt(max(0.0, 1.0 - min(1.0, c) ** 2)))


class SolutionSet:
    """Deduplicated projective solutions with chart provenance."""

    def __init__(self, points, chart_dims, tol: Tolerances):
        self.points = list(points)
        self.chart_dims = dict(chart_dims)
        self.tol = tol

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def coords_array(self):
        return np.array([p.coords for p in self.points])

    def max_residual(self):
        return max((p.residual for p in self.points), default=0.0)

    def to_json(self):
        return {
            "count": len(self.points),
            "chart_dims": {str(k): v for k, v in self.chart_dims.items()},
            "points": [
                {
                    "coords": [[float(c.real), float(c.imag)] for c in p.coords],
                    "residual": float(p.residual),
                    "chart": p.chart,
                }
                for p in self.points
            ],
        }

    @classmethod
    def from_json(cls, data, tol: Tolerances):
        pts = [
            CPoint(
                [complex(re, im) for re, im in entry["coords"]],
                residual=entry["residual"],
                chart=entry["chart"],
            )
            for entry in data["points"]
        ]
        dims = {int(k): v for k, v in data["chart_dims"].items()}
        return cls(pts, dims, tol)


class NonZeroDimensionalError(ValueError):
    def __init__(self, chart):
        super().__init__(f"chart {chart} system is not zero-dimensional")
        self.chart = chart


def _embed_matrix(matrix):
    return np.array([[c.embed() for c in row] for row in matrix], dtype=complex)


def chart_solutions(gb: GroebnerBasis, seed: int = 0):
    """All solutions of a 0-dimensional chart system, unrefined.

    Returns (points, quotient_dimension) where each point is a complex
    vector in the chart coordinates.
    """
    if gb.is_unit_ideal():
        return [], 0
    if not gb.is_zero_dimensional():
        raise ValueError("system is not zero-dimensional")
    basis = gb.standard_monomials()
    n = gb.ring.nvars
    dim = len(basis)
    mats = [_embed_matrix(gb.multiplication_matrix(i, basis)) for i in range(n)]
    rng = random.Random(seed)
    combo = np.zeros((dim, dim), dtype=complex)
    weights = [rng.uniform(0.25, 1.0) + rng.uniform(0.25, 1.0) * 1j for _ in range(n)]
    for w, m in zip(weights, mats):
        combo += w * m
    # evaluation functionals are right eigenvectors of the transpose
    _, vecs = np.linalg.eig(combo.T)
    one_index = basis.index((0,) * n)
    var_rows = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        e = tuple(e)
        if e in basis:
            row = np.zeros(dim, dtype=complex)
            row[basis.index(e)] = 1.0
        else:
            # variable is not a standard monomial: use its normal form
            nf = gb.normal_form(gb.ring.var(i))
            row = np.zeros(dim, dtype=complex)
            for m, c in nf.terms.items():
                row[basis.index(m)] = c.embed()
        var_rows.append(row)
    points = []
    for j in range(vecs.shape[1]):
        v = vecs[:, j]
        denom = v[one_index]
        if abs(denom) < 1e-13:
            continue
        points.append(np.array([row @ v / denom for row in var_rows]))
    return points, dim


def newton_refine(point, polys, ring, tol: Tolerances, max_iter: int = 50):
    """Polish a chart solution on the square subsystem selected by QR column
    pivoting of the Jacobian; returns (point, residual over all generators)."""
    n = ring.nvars
    polys = [p for p in polys if not p.is_zero()]
    jac = [[p.partial(j) for j in range(n)] for p in polys]
    x = np.asarray(point, dtype=complex)

    def full_jac(xv):
        return np.array([[e.evaluate(xv) for e in row] for row in jac], dtype=complex)

    def residuals(xv):
        return np.array([p.evaluate(xv) for p in polys], dtype=complex)

    J = full_jac(x)
    # rows of J = columns of J^T; pivoting picks n well-conditioned equations
    _, _, piv = scipy.linalg.qr(J.T, pivoting=True, mode="economic")
    rows = list(piv[:n])
    sub_polys = [polys[i] for i in rows]
    sub_jac = [jac[i] for i in rows]
    for _ in range(max_iter):
        f = np.array([p.evaluate(x) for p in sub_polys], dtype=complex)
        if np.max(np.abs(residuals(x))) <= tol.newton_residual:
            break
        Js = np.array([[e.evaluate(x) for e in row] for row in sub_jac], dtype=complex)
        try:
            step = np.linalg.solve(Js, f)
        except np.linalg.LinAlgError:
            step, *_ = np.linalg.lstsq(Js, f, rcond=None)
        x = x - step
        if np.max(np.abs(step)) < 1e-16:
            break
    res = float(np.max(np.abs(residuals(x))))
    return x, res


def _chart_to_projective(x, chart, nvars):
    coords = np.empty(nvars, dtype=complex)
    coords[:chart] = x[:chart]
    coords[chart] = 1.0
    coords[chart + 1:] = x[chart:]
    return coords


def solve_zero_dim(chart_systems, tol: Tolerances = DEFAULT, seed: int = 0,
                   groebner_bases=None) -> SolutionSet:
    """Solve per-chart 0-dimensional systems and merge projectively.

    chart_systems: dict chart -> list of MPoly in that chart's ring.
    groebner_bases: optional precomputed dict chart -> GroebnerBasis.
    """
    merged = []
    chart_dims = {}
    for chart in sorted(chart_systems):
        gens = chart_systems[chart]
        gb = None if groebner_bases is None else groebner_bases.get(chart)
        if gb is None:
            gb = buchberger(gens)
        if gb.is_unit_ideal():
            chart_dims[chart] = 0
            continue
        if not gb.is_zero_dimensional():
            raise NonZeroDimensionalError(chart)
        raw, dim = chart_solutions(gb, seed=seed)
        chart_dims[chart] = dim
        ring = gens[0].ring
        nvars = ring.nvars + 1
        for x in raw:
            xr, res = newton_refine(x, gens, ring, tol)
            if res > tol.report_residual:
                # eigen-readout can be noisy for clustered eigenvalues; retry
                # from a small perturbation before giving up
                xr2, res2 = newton_refine(
                    x + 1e-6 * np.random.default_rng(seed).standard_normal(len(x)),
                    gens, ring, tol)
                if res2 < res:
                    xr, res = xr2, res2
            if res > tol.report_residual:
                continue
            merged.append(CPoint(_chart_to_projective(xr, chart, nvars),
                                 residual=res, chart=chart))
    unique = deduplicate(merged, tol.dedup_distance)
    unique.sort(key=_point_sort_key)
    return SolutionSet(unique, chart_dims, tol)


def deduplicate(points, threshold):
    unique = []
    for p in points:
        best = None
        for q in unique:
            if fubini_study(p.coords, q.coords) <= threshold:
                best = q
                break
        if best is None:
            unique.append(p)
        elif p.residual < best.residual:
            unique[unique.index(best)] = p
    return unique


def _point_sort_key(p: CPoint):
    return tuple((round(c.real, 8), round(c.imag, 8)) for c in p.coords)


# ---------------------------------------------------------------------------
# ODP certification
# ---------------------------------------------------------------------------

class ODPCertificate:
    def __init__(self, point, verdict, singular_values, jacobian_rank, null_combo):
        self.point = point
        self.verdict = verdict
        self.singular_values = singular_values
        self.jacobian_rank = jacobian_rank
        self.null_combo = null_combo

    def is_odp(self):
        return self.verdict == "ODP"

    def __repr__(self):
        return f"ODPCertificate({self.verdict}, sv={self.singular_values})"


def certify_odp(threefold, point: CPoint, tol: Tolerances = DEFAULT) -> ODPCertificate:
    """Check that a singular point of the CI threefold is an ordinary double
    point: Jacobian rank exactly 1, and the Hessian of the gradient-vanishing
    cubic combination, restricted to the tangent space of the complementary
    smooth combination, has numeric rank 4 with the configured gap."""
    chart = int(np.argmax(np.abs(point.coords)))
    a = threefold.a.dehomogenize(chart)
    b = threefold.b.dehomogenize(chart)
    ring = a.ring
    n = ring.nvars
    x = np.delete(point.coords / point.coords[chart], chart)
    grad_a = np.array([a.partial(j).evaluate(x) for j in range(n)])
    grad_b = np.array([b.partial(j).evaluate(x) for j in range(n)])
    J = np.vstack([grad_a, grad_b])
    sv = np.linalg.svd(J, compute_uv=False)
    scale = max(sv[0], 1.0)
    rank = int(np.sum(sv > 1e-7 * scale))
    if rank == 0:
        return ODPCertificate(point, "degenerate", [], 0, None)
    if rank == 2:
        return ODPCertificate(point, "not-singular", list(sv), 2, None)
    # combination G = lam_a*A + lam_b*B with vanishing gradient: kernel of the
    # n x 2 gradient matrix (bilinear, so take the conjugated last V^H row)
    K = J.T
    _, _, vh = np.linalg.svd(K)
    lam = np.conj(vh[-1, :])
    lam_a, lam_b = lam
    # complementary smooth combination H (independent member of the pencil)
    mu = np.array([-np.conj(lam_b), np.conj(lam_a)])
    grad_h = mu[0] * grad_a + mu[1] * grad_b
    if np.linalg.norm(grad_h) < 1e-9 * scale:
        return ODPCertificate(point, "degenerate", list(sv), rank, lam)
    # Hessian of G at the point
    hess = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            v = lam_a * a.partial(i).partial(j).evaluate(x) + \
                lam_b * b.partial(i).partial(j).evaluate(x)
            hess[i, j] = v
            hess[j, i] = v
    # restrict the quadratic form to T_x V(H) = {v : grad_h . v = 0}
    _, _, vh2 = np.linalg.svd(grad_h.reshape(1, -1))
    tangent = vh2[1:, :].conj().T
    restricted = tangent.T @ hess @ tangent
    rsv = np.linalg.svd(restricted, compute_uv=False)
    ok = len(rsv) == 4 and rsv[3] >= tol.hessian_gap * rsv[0]
    verdict = "ODP" if ok else "degenerate"
    return ODPCertificate(point, verdict, [float(v) for v in rsv], rank, lam)


# ---------------------------------------------------------------------------
# matching and census
# ---------------------------------------------------------------------------

class MatchReport:
    def __init__(self, pairs, galois_exponent=None, unmatched_found=(), unmatched_expected=()):
        self.pairs = pairs
        self.galois_exponent = galois_exponent
        self.unmatched_found = list(unmatched_found)
        self.unmatched_expected = list(unmatched_expected)

    @property
    def matched(self):
        return not self.unmatched_found and not self.unmatched_expected


def match_points(found: SolutionSet, expected, tol: Tolerances = DEFAULT) -> MatchReport:
    """Bijection between found points and exact expected coordinates, within
    the matching tolerance; retries under the Galois conjugations of
    Q(zeta_12) when the direct embedding does not match."""
    if len(found) != len(expected):
        raise ValueError(
            f"cardinality mismatch: found {len(found)}, expected {len(expected)}")
    for exponent in (None,) + tuple(GALOIS_EXPONENTS):
        report = _try_match(found, expected, exponent, tol)
        if report.matched:
            return report
    return report


def _try_match(found, expected, exponent, tol):
    emb = []
    for vec in expected:
        coords = [
            (c.galois(exponent) if exponent else c).embed() if isinstance(c, CycElem)
            else complex(c)
            for c in vec
        ]
        emb.append(CPoint(coords).coords)
    pairs = []
    used = set()
    unmatched_found = []
    for i, p in enumerate(found):
        hit = None
        for j, e in enumerate(emb):
            if j in used:
                continue
            if fubini_study(p.coords, e) <= tol.match_distance:
                hit = j
                break
        if hit is None:
            unmatched_found.append(i)
        else:
            used.add(hit)
            pairs.append((i, hit))
    unmatched_expected = [j for j in range(len(emb)) if j not in used]
    return MatchReport(pairs, exponent, unmatched_found, unmatched_expected)


def membership_census(points: SolutionSet, named_items, tol: Tolerances = DEFAULT):
    """For each point, which named forms/ideals vanish there.

    named_items: dict name -> MPoly | list[MPoly] | GroebnerBasis.
    Returns (per_point, counts): per_point[i] is the set of vanishing names.
    """
    per_point = []
    for p in points:
        names = set()
        for name, item in named_items.items():
            if isinstance(item, GroebnerBasis):
                forms = item.generators
            elif isinstance(item, MPoly):
                forms = [item]
            else:
                forms = list(item)
            if all(_vanishes(f, p.coords, tol) for f in forms):
                names.add(name)
        per_point.append(names)
    counts = {}
    for names in per_point:
        for name in names:
            counts[name] = counts.get(name, 0) + 1
    return per_point, counts


def _vanishes(form: MPoly, coords, tol: Tolerances) -> bool:
    value = form.evaluate(list(coords))
    scale = sum(abs(c.embed()) for c in form.terms.values())
    return abs(value) <= tol.census_vanish * max(scale, 1.0)
