"""Polynomial arithmetic and root analysis for the linearized dynamics.

Coefficients are stored in ascending degree order throughout: coeffs[0] is
the constant term and coeffs[-1] the leading one.  Root finding uses the
Aberth-Ehrlich simultaneous iteration with a certified polish step that
snaps clustered approximations onto multiple roots, so repeated roots come
out far more accurately than the bare iteration delivers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .algorithms import AlgorithmSpec
from .errors import DegenerateFamilyError, DomainError, RootFindingError

DEFAULT_GRID_SIZE = 400

_MAX_SWEEPS = 500
_UPDATE_TOL = 1e-12
_RESIDUAL_TOL = 1e-8
_PAIR_TOL = 1e-7
_GATHER_RADIUS = 3e-3
_CERT_TOL = 1e-12


@dataclass(frozen=True)
class Polynomial:
    """Real-coefficient polynomial; trailing zero coefficients are trimmed."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = [float(v) for v in self.coeffs]
        if not c:
            raise ValueError("need at least one coefficient")
        if not all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        while len(c) > 1 and c[-1] == 0.0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, s):
        return npoly.polyval(s, self.coeffs)

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial((0.0,))
        return Polynomial(tuple(npoly.polyder(self.coeffs)))

    def monic(self) -> "Polynomial":
        return Polynomial(tuple(c / self.coeffs[-1] for c in self.coeffs))


@dataclass(frozen=True)
class RootSet:
    """Complex roots listed with multiplicity, sorted by real part then imaginary."""

    roots: tuple[complex, ...]

    def __post_init__(self):
        r = tuple(sorted((complex(v) for v in self.roots), key=lambda z: (z.real, z.imag)))
        if not r:
            raise ValueError("a root set cannot be empty")
        object.__setattr__(self, "roots", r)

    @property
    def max_real(self) -> float:
        return max(z.real for z in self.roots)


@dataclass(frozen=True)
class IntervalPolynomial:
    """Elementwise coefficient intervals [lower, upper], ascending degree order."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lower)
        up = tuple(float(v) for v in self.upper)
        if not lo or len(lo) != len(up):
            raise ValueError("lower and upper must be nonempty and of equal length")
        if not all(np.isfinite(lo + up)):
            raise ValueError("interval bounds must be finite")
        if any(a > b for a, b in zip(lo, up)):
            raise ValueError("each interval needs lower <= upper")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)

    @property
    def degree(self) -> int:
        return len(self.lower) - 1


def from_roots(roots, leading: float = 1.0) -> Polynomial:
    """Expand leading * prod(s - r) for a conjugate-closed list of roots."""
    c = npoly.polyfromroots(list(roots)) * leading
    tol = 1e-8 * max(1.0, float(np.max(np.abs(c.real))))
    if np.max(np.abs(c.imag)) > tol:
        raise ValueError("roots are not closed under conjugation")
    return Polynomial(tuple(c.real))


def _aberth(monic: np.ndarray, attempt: int):
    """One randomized Aberth-Ehrlich pass; returns roots or None on failure."""
    deg = len(monic) - 1
    dc = npoly.polyder(monic)
    absc = np.abs(monic)
    # fixed stream so identical inputs give identical outputs
    rng = np.random.default_rng(0xA6E57 + attempt)
    radius = 1.0 + float(np.max(absc))
    ang = 2.0 * np.pi * (np.arange(deg) + rng.uniform(0.1, 0.9, deg)) / deg
    z = radius * np.exp(1j * ang)
    for _ in range(_MAX_SWEEPS):
        pv = npoly.polyval(z, monic)
        dv = npoly.polyval(z, dc)
        if np.any(dv == 0):
            z = z + 1e-8 * radius * (1 + 1j) * (dv == 0)
            continue
        w = pv / dv
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        if np.any(diff == 0):
            z = z * (1.0 + 1e-10) + 1e-12 * radius
            continue
        denom = 1.0 - w * np.sum(1.0 / diff, axis=1)
        if np.any(denom == 0):
            z = z * (1.0 + 1e-10)
            continue
        corr = w / denom
        z = z - corr
        if not np.all(np.isfinite(z)):
            return None
        if np.all(np.abs(corr) <= _UPDATE_TOL * (1.0 + np.abs(z))):
            return z
        # multiple roots never meet the update tolerance; accept once every
        # residual sits at the evaluation noise floor
        floor = 8.0 * np.finfo(float).eps * npoly.polyval(np.abs(z), absc)
        if np.all(np.abs(npoly.polyval(z, monic)) <= floor):
            return z
    return z


def _pair_conjugates(z: np.ndarray) -> np.ndarray:
    """Snap near-real roots onto the axis and average conjugate partners."""
    out = []
    rest = []
    for v in z:
        if abs(v.imag) <= _PAIR_TOL * (1.0 + abs(v)):
            out.append(complex(v.real, 0.0))
        else:
            rest.append(complex(v))
    rest.sort(key=lambda v: (v.real, abs(v.imag), v.imag))
    used = [False] * len(rest)
    for i, v in enumerate(rest):
        if used[i]:
            continue
        used[i] = True
        best = None
        for j in range(i + 1, len(rest)):
            if used[j]:
                continue
            d = abs(rest[j] - v.conjugate())
            if d <= _PAIR_TOL * (1.0 + abs(v)) and (best is None or d < best[0]):
                best = (d, j)
        if best is None:
            # leave it; the residual check decides whether this is fatal
            out.append(v)
            continue
        used[best[1]] = True
        m = 0.5 * (v + rest[best[1]].conjugate())
        out.append(m)
        out.append(m.conjugate())
    return np.array(out, dtype=complex)


def _newton(c, dc, z0, wander):
    z = complex(z0)
    for _ in range(80):
        dv = complex(npoly.polyval(z, dc))
        if dv == 0:
            return None
        step = complex(npoly.polyval(z, c)) / dv
        z = z - step
        if not np.isfinite(z.real) or not np.isfinite(z.imag) or abs(z - z0) > wander:
            return None
        if abs(step) <= 4.0 * np.finfo(float).eps * (1.0 + abs(z)):
            return z
    return z


def _certify_cluster(cluster, derivs):
    """Snap a cluster of m approximations onto one m-fold root if certified.

    The candidate is the Newton iterate of the (m-1)-th derivative started
    at the centroid; certification demands |p^(j)(z)| below the evaluation
    noise scale for every j < m.  On failure the farthest member is split
    off and the rest retried, so simple roots that merely sit close
    together pass through untouched.
    """
    m = len(cluster)
    if m == 1:
        return list(cluster)
    z0 = np.mean(cluster)
    diam = max(abs(v - z0) for v in cluster)
    zs = _newton(derivs[m - 1], derivs[m], z0, wander=10.0 * diam + 1e-7 * (1.0 + abs(z0)))
    ok = zs is not None
    if ok:
        for j in range(m):
            scale = float(npoly.polyval(abs(zs), np.abs(derivs[j])))
            if abs(complex(npoly.polyval(zs, derivs[j]))) > _CERT_TOL * max(scale, 1e-300):
                ok = False
                break
    if ok:
        if abs(zs.imag) <= _PAIR_TOL * (1.0 + abs(zs)):
            zs = complex(zs.real, 0.0)
        return [zs] * m
    far = max(range(m), key=lambda i: abs(cluster[i] - z0))
    rest = [cluster[i] for i in range(m) if i != far]
    return _certify_cluster(rest, derivs) + [cluster[far]]


def _polish_clusters(z: np.ndarray, monic: np.ndarray) -> np.ndarray:
    derivs = [np.asarray(monic, dtype=float)]
    while len(derivs[-1]) > 1:
        derivs.append(npoly.polyder(derivs[-1]))
    n = len(z)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= _GATHER_RADIUS * (1.0 + min(abs(z[i]), abs(z[j]))):
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(complex(z[i]))
    out = []
    for cluster in groups.values():
        out.extend(_certify_cluster(cluster, derivs))
    return np.array(out, dtype=complex)


def find_roots(p: Polynomial) -> RootSet:
    """All complex roots of p, with multiplicity.

    Starts the Aberth-Ehrlich iteration from randomly perturbed points on a
    circle of radius 1 + max |coeffs|, runs at most 500 sweeps to a 1e-12
    relative update tolerance, then applies the certified cluster polish.
    Every returned root must satisfy

        |p(root)| <= 1e-8 * max |coeffs| * (1 + |root|**degree),

    otherwise a RootFindingError is raised.
    """
    if p.degree < 1:
        raise ValueError("root finding needs degree >= 1")
    c = np.asarray(p.coeffs, dtype=float)
    monic = c / c[-1]
    if p.degree == 1:
        roots = np.array([-monic[0]], dtype=complex)
    else:
        roots = None
        for attempt in range(3):
            cand = _aberth(monic, attempt)
            if cand is not None:
                roots = cand
                break
        if roots is None:
            raise RootFindingError("Aberth-Ehrlich iteration failed to converge")
        roots = _pair_conjugates(roots)
        roots = _polish_clusters(roots, monic)
        roots = _pair_conjugates(roots)
    bound = _RESIDUAL_TOL * float(np.max(np.abs(c))) * (1.0 + np.abs(roots) ** p.degree)
    res = np.abs(npoly.polyval(roots, c))
    if np.any(res > bound):
        raise RootFindingError(
            f"root residual {float(np.max(res / bound)):.3g}x above tolerance"
        )
    return RootSet(tuple(roots))


def root_product(rs: RootSet) -> float:
    """Product of root magnitudes; equals |constant / leading| of the polynomial."""
    return float(np.prod([abs(z) for z in rs.roots]))


def char_poly(spec: AlgorithmSpec, lambda_f: float) -> Polynomial:
    """Monic characteristic polynomial of the dynamics at curvature lambda_f.

    Degree k; the coefficient of s^j is g_j + h_j * lambda_f for
    1 <= j <= k-1 and the constant term is lambda_f itself.
    """
    lambda_f = float(lambda_f)
    if not 0.0 < lambda_f <= 1.0:
        raise DomainError(f"lambda_f must lie in (0, 1], got {lambda_f}")
    coeffs = [lambda_f]
    coeffs.extend(g + h * lambda_f for g, h in zip(spec.g, spec.h))
    coeffs.append(1.0)
    return Polynomial(tuple(coeffs))


def is_hurwitz(p: Polynomial) -> bool:
    """True iff every root lies strictly in the open left half-plane."""
    if p.degree < 1:
        raise ValueError("stability needs degree >= 1")
    return find_roots(p).max_real < 0.0


def worst_rate(spec: AlgorithmSpec, kappa: float, grid_size: int = DEFAULT_GRID_SIZE) -> float:
    """Worst-case decay exponent over curvatures lambda_f in [1/kappa, 1].

    Scans a uniform grid (endpoints included) and returns
    rho = -max over the grid of the largest root real part; positive iff
    the dynamics are uniformly exponentially stable on the grid.
    """
    kappa = float(kappa)
    if kappa < 1.0:
        raise DomainError(f"kappa must be >= 1, got {kappa}")
    if grid_size < 2:
        raise DomainError(f"grid_size must be >= 2, got {grid_size}")
    worst = -np.inf
    for lam in np.unique(np.linspace(1.0 / kappa, 1.0, grid_size)):
        worst = max(worst, find_roots(char_poly(spec, float(lam))).max_real)
    return -worst


def charpoly_interval(spec: AlgorithmSpec, lam_lo: float, lam_hi: float) -> IntervalPolynomial:
    """Coefficientwise hull of the characteristic family over [lam_lo, lam_hi].

    Each coefficient is affine in lambda_f, so the hull interval is spanned
    by the two endpoint values.
    """
    lam_lo, lam_hi = float(lam_lo), float(lam_hi)
    if not 0.0 < lam_lo <= lam_hi <= 1.0:
        raise DomainError(f"need 0 < lam_lo <= lam_hi <= 1, got [{lam_lo}, {lam_hi}]")
    lo = [lam_lo]
    up = [lam_hi]
    for g, h in zip(spec.g, spec.h):
        a, b = g + h * lam_lo, g + h * lam_hi
        lo.append(min(a, b))
        up.append(max(a, b))
    lo.append(1.0)
    up.append(1.0)
    return IntervalPolynomial(tuple(lo), tuple(up))


# lower/upper selection per coefficient index mod 4, one row per vertex polynomial
_KHARITONOV_PATTERNS = (
    (0, 0, 1, 1),
    (0, 1, 1, 0),
    (1, 0, 0, 1),
    (1, 1, 0, 0),
)


def kharitonov_polys(ip: IntervalPolynomial) -> tuple[Polynomial, Polynomial, Polynomial, Polynomial]:
    """The four Kharitonov vertex polynomials of an interval family.

    The family is Hurwitz-stable iff all four are.  Raises
    DegenerateFamilyError when the leading interval contains zero, since
    the family then mixes degrees.
    """
    lo, up = ip.lower, ip.upper
    if lo[-1] <= 0.0 <= up[-1]:
        raise DegenerateFamilyError("leading coefficient interval contains zero")
    bounds = (lo, up)
    out = []
    for pat in _KHARITONOV_PATTERNS:
        out.append(Polynomial(tuple(bounds[pat[i % 4]][i] for i in range(len(lo)))))
    return tuple(out)
