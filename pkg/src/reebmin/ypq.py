"""Explicit Y^{p,q} Einstein metrics and the L^{a,b,c} toric bridge.

The metric is evaluated in the local chart (theta, phi, y, psi, alpha);
the Einstein property Ric = 4 g is then *verified* by pure finite
differences of the metric components (Christoffel symbols and their
derivatives), deliberately independent of any hand-derived curvature
algebra.  The L^{a,b,c} admissibility conditions and the charge-vector
route into the toric minimization live here too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

import numpy as np

from . import cones as _cones
from . import latcore
from .errors import BadParams, DegenerateChartPoint, StepTooLarge


@dataclass(frozen=True)
class QuadraticValue:
    """Exact number rational + coeff * sqrt(radicand)."""

    rational: Fraction
    coeff: Fraction
    radicand: int

    def __float__(self) -> float:
        return float(self.rational) + float(self.coeff) * math.sqrt(self.radicand)


def apq(p: int, q: int) -> QuadraticValue:
    """The cubic constant a_{p,q} = 1/2 - (p^2-3q^2) sqrt(4p^2-3q^2) / (4p^3)."""
    _check_pq(p, q)
    return QuadraticValue(
        rational=Fraction(1, 2),
        coeff=Fraction(-(p * p - 3 * q * q), 4 * p**3),
        radicand=4 * p * p - 3 * q * q,
    )


def _check_pq(p, q):
    if not (isinstance(p, int) and isinstance(q, int)):
        raise BadParams("p, q must be integers")
    if not 0 < q < p:
        raise BadParams(f"need 0 < q < p, got (p, q) = ({p}, {q})")
    if gcd(p, q) != 1:
        raise BadParams(f"p and q must be coprime, got gcd = {gcd(p, q)}")


def _cubic_roots(a: float) -> tuple[float, float, float]:
    # 2y^3 - 3y^2 + a = 0, depressed via y = t + 1/2: t^3 - (3/4) t + (a/2 - 1/4),
    # three real roots for a in (0,1); one Newton polish per root
    theta = math.acos(1.0 - 2.0 * a)
    roots = []
    for k in range(3):
        y = 0.5 + math.cos((theta - 2.0 * math.pi * k) / 3.0)
        for _ in range(3):
            f = a - 3 * y * y + 2 * y**3
            df = 6 * y * (y - 1.0)
            if df != 0.0:
                y -= f / df
        roots.append(y)
    return tuple(sorted(roots))


@dataclass(frozen=True)
class YpqParams:
    p: int
    q: int
    a_exact: QuadraticValue
    a: float
    y1: float
    y2: float
    y3: float


def ypq_params(p: int, q: int) -> YpqParams:
    _check_pq(p, q)
    a_ex = apq(p, q)
    a = float(a_ex)
    if not 0.0 < a < 1.0:
        raise BadParams(f"a_(p,q) = {a} outside (0, 1)")
    y1, y2, y3 = _cubic_roots(a)
    return YpqParams(p=p, q=q, a_exact=a_ex, a=a, y1=y1, y2=y2, y3=y3)


def w_of(Y: YpqParams, y: float) -> float:
    return 2.0 * (Y.a - y * y) / (1.0 - y)


def q_of(Y: YpqParams, y: float) -> float:
    return (Y.a - 3.0 * y * y + 2.0 * y**3) / (Y.a - y * y)


def f_of(Y: YpqParams, y: float) -> float:
    return (Y.a - 2.0 * y + y * y) / (6.0 * (Y.a - y * y))


@dataclass(frozen=True)
class ChartPoint:
    """Point of the local chart; order (theta, phi, y, psi, alpha)."""

    theta: float
    phi: float
    y: float
    psi: float
    alpha: float

    def coords(self) -> np.ndarray:
        return np.array([self.theta, self.phi, self.y, self.psi, self.alpha])


# Reeb field xi = 3 d_psi - 1/2 d_alpha in chart coordinates
REEB_COMPONENTS = (0.0, 0.0, 0.0, 3.0, -0.5)


def _interior_margin(Y: YpqParams, x: ChartPoint) -> float:
    return min(x.theta, math.pi - x.theta, x.y - Y.y1, Y.y2 - x.y)


def metric_eval(Y: YpqParams, x: ChartPoint) -> np.ndarray:
    """Metric components g_{ij} at x, coordinate order (theta, phi, y, psi, alpha)."""
    if _interior_margin(Y, x) <= 0:
        raise DegenerateChartPoint(
            f"chart degenerates at theta = {x.theta}, y = {x.y}"
        )
    a_, y = Y.a, x.y
    A = (1.0 - y) / 6.0
    W = w_of(Y, y)
    Q = q_of(Y, y)
    F = f_of(Y, y)
    if W <= 0 or Q <= 0:
        raise DegenerateChartPoint(f"w(y) q(y) <= 0 at y = {y}")
    ct, st = math.cos(x.theta), math.sin(x.theta)
    g = np.zeros((5, 5))
    g[0, 0] = A
    g[1, 1] = A * st * st + (Q / 9.0 + W * F * F) * ct * ct
    g[2, 2] = 1.0 / (W * Q)
    g[3, 3] = Q / 9.0 + W * F * F
    g[4, 4] = W
    g[1, 3] = g[3, 1] = -(Q / 9.0 + W * F * F) * ct
    g[1, 4] = g[4, 1] = -W * F * ct
    g[3, 4] = g[4, 3] = W * F
    return g


def _metric_fn(Y: YpqParams):
    def fn(coords: np.ndarray) -> np.ndarray:
        return metric_eval(Y, ChartPoint(*coords))

    return fn


# --- generic finite-difference curvature -----------------------------------


def christoffel_fd(metric, x: np.ndarray, h: float) -> np.ndarray:
    """Gamma^k_{ij} by central differences of the metric components."""
    dim = len(x)
    ginv = np.linalg.inv(metric(x))
    dg = np.empty((dim, dim, dim))
    for l in range(dim):
        xp, xm = x.copy(), x.copy()
        xp[l] += h
        xm[l] -= h
        dg[l] = (metric(xp) - metric(xm)) / (2.0 * h)
    # S[l,i,j] = d_i g_{lj} + d_j g_{li} - d_l g_{ij}
    s = np.einsum("ilj->lij", dg) + np.einsum("jli->lij", dg) - dg
    return 0.5 * np.einsum("kl,lij->kij", ginv, s)


def ricci_fd_metric(metric, x: np.ndarray, h: float) -> np.ndarray:
    """Ricci tensor of an arbitrary metric function, second-order central FD."""
    dim = len(x)
    gamma = christoffel_fd(metric, x, h)
    dgamma = np.empty((dim, dim, dim, dim))
    for a in range(dim):
        xp, xm = x.copy(), x.copy()
        xp[a] += h
        xm[a] -= h
        dgamma[a] = (christoffel_fd(metric, xp, h) - christoffel_fd(metric, xm, h)) / (2.0 * h)
    term1 = np.einsum("kkij->ij", dgamma)
    term2 = np.einsum("jkki->ij", dgamma)
    contracted = np.einsum("kkl->l", gamma)
    term3 = np.einsum("l,lij->ij", contracted, gamma)
    term4 = np.einsum("rjl,lri->ij", gamma, gamma)
    ric = term1 - term2 + term3 - term4
    return 0.5 * (ric + ric.T)


def ricci_fd(Y: YpqParams, x: ChartPoint, h: float = 1e-3,
             richardson: bool = True) -> np.ndarray:
    """Ricci tensor of the Y^{p,q} metric at x by finite differences.

    One Richardson level on top of the second-order scheme; requires the
    point to sit at least 10h inside every coordinate degeneration.
    """
    if _interior_margin(Y, x) < 10.0 * h:
        raise StepTooLarge(
            f"margin {_interior_margin(Y, x):.4f} < 10 h = {10 * h:.4f}"
        )
    fn = _metric_fn(Y)
    coords = x.coords()
    if not richardson:
        return ricci_fd_metric(fn, coords, h)
    r_h = ricci_fd_metric(fn, coords, h)
    r_h2 = ricci_fd_metric(fn, coords, h / 2.0)
    return (4.0 * r_h2 - r_h) / 3.0


def einstein_residual(Y: YpqParams, x: ChartPoint, h: float = 1e-3) -> float:
    """max |Ric - 4 g| entrywise (the Einstein constant is 2(n-1) = 4)."""
    ric = ricci_fd(Y, x, h)
    return float(np.max(np.abs(ric - 4.0 * metric_eval(Y, x))))


def killing_residual(Y: YpqParams, x: ChartPoint, h: float = 1e-4) -> float:
    """max |L_xi g|: the Reeb field has constant components, so this is
    xi^a d_a g_{ij} by central differences along psi and alpha."""
    fn = _metric_fn(Y)
    coords = x.coords()
    lie = np.zeros((5, 5))
    for a, comp in enumerate(REEB_COMPONENTS):
        if comp == 0.0:
            continue
        xp, xm = coords.copy(), coords.copy()
        xp[a] += h
        xm[a] -= h
        lie += comp * (fn(xp) - fn(xm)) / (2.0 * h)
    return float(np.max(np.abs(lie)))


def reeb_norm_residual(Y: YpqParams, x: ChartPoint) -> float:
    """|g(xi, xi) - 1|: the contact form eta = g(xi, .) must give eta(xi) = 1."""
    g = metric_eval(Y, x)
    xi = np.array(REEB_COMPONENTS)
    return abs(float(xi @ g @ xi) - 1.0)


def ricci_reeb_residual(Y: YpqParams, x: ChartPoint, h: float = 1e-3) -> float:
    """|Ric(xi, xi) - 4|, checked independently of the full Einstein test."""
    ric = ricci_fd(Y, x, h)
    xi = np.array(REEB_COMPONENTS)
    return abs(float(xi @ ric @ xi) - 4.0)


def random_chart_points(Y: YpqParams, count: int, rng,
                        theta_margin: float = 0.2,
                        y_margin: float = 0.05) -> list[ChartPoint]:
    """Sample points inside the default interior margins."""
    dy = Y.y2 - Y.y1
    pts = []
    for _ in range(count):
        pts.append(
            ChartPoint(
                theta=rng.uniform(theta_margin, math.pi - theta_margin),
                phi=rng.uniform(0.0, 2.0 * math.pi),
                y=rng.uniform(Y.y1 + y_margin * dy, Y.y2 - y_margin * dy),
                psi=rng.uniform(0.0, 2.0 * math.pi),
                alpha=rng.uniform(0.0, 2.0 * math.pi),
            )
        )
    return pts


# --- regularity and the L^{a,b,c} family ------------------------------------


@dataclass(frozen=True)
class Regularity:
    kind: str        # quasi-regular | irregular
    m: int | None    # the integer with 4p^2 - 3q^2 = m^2, when quasi-regular


def quasiregular_check(p: int, q: int) -> Regularity:
    """Quasi-regular iff 4p^2 - 3q^2 is a perfect square; else irregular rank 2."""
    _check_pq(p, q)
    disc = 4 * p * p - 3 * q * q
    root = isqrt(disc)
    if root * root == disc:
        return Regularity(kind="quasi-regular", m=root)
    return Regularity(kind="irregular", m=None)


@dataclass(frozen=True)
class LabcParams:
    a: int
    b: int
    c: int

    @property
    def d(self) -> int:
        return self.a + self.b - self.c

    @property
    def charges(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, -self.c, -self.d)


@dataclass(frozen=True)
class LabcVerdict:
    valid: bool
    params: LabcParams | None
    reasons: tuple[str, ...]


def labc_admissible(a: int, b: int, c: int) -> LabcVerdict:
    """Integer conditions for L^{a,b,c} to be a smooth Sasaki-Einstein 5-manifold."""
    reasons = []
    if min(a, b, c) < 1:
        reasons.append("a, b, c must be positive")
    else:
        d = a + b - c
        if a > b:
            reasons.append("need a <= b")
        if c > b:
            reasons.append("need c <= b")
        if d < 1:
            reasons.append("need d = a + b - c >= 1")
        if not reasons:
            if gcd(gcd(a, b), gcd(c, d)) != 1:
                reasons.append("gcd(a, b, c, d) > 1")
            for x, xn in ((a, "a"), (b, "b")):
                for y, yn in ((c, "c"), (d, "d")):
                    if gcd(x, y) != 1:
                        reasons.append(f"gcd({xn}, {yn}) = {gcd(x, y)} > 1")
    if reasons:
        return LabcVerdict(valid=False, params=None, reasons=tuple(reasons))
    return LabcVerdict(valid=True, params=LabcParams(a=a, b=b, c=c), reasons=())


def ypq_embed(p: int, q: int) -> LabcParams:
    """Y^{p,q} as L^{p-q, p+q, p}; asserts the admissibility conditions."""
    _check_pq(p, q)
    verdict = labc_admissible(p - q, p + q, p)
    assert verdict.valid, verdict.reasons
    return verdict.params


def labc_cone(L: LabcParams) -> _cones.GorensteinCone:
    """Moment cone of the L^{a,b,c} singularity, in its height-1 basis.

    Gale dual of the single charge row (a, b, -c, -d); the zero row sum
    makes the cone Gorenstein, which is asserted.
    """
    verdict = labc_admissible(L.a, L.b, L.c)
    if not verdict.valid:
        raise BadParams("; ".join(verdict.reasons))
    rays = latcore.gale_dual([list(L.charges)])
    cone = _cones.validate_cone(rays)
    g = _cones.gorenstein_normalize(cone)
    assert g.ell == 1
    return g
