"""Randomized scalar objectives with piecewise-constant curvature.

A test function has nine curvature values, one per interval:

    I1 = (-inf, -4.5), I2 = (-4.5, -3.5), I3 = (-3.5, -2.5),
    I4 = (-2.5, -0.5), I5 = (-0.5, 0.5), I6 = (0.5, 2.5),
    I7 = (2.5, 3.5),   I8 = (3.5, 4.5),  I9 = (4.5, inf).

The gradient is continuous and piecewise linear with grad(0) = 0, and
f(0) = 0, so the origin is a stationary point; sampling rejects candidates
for which it is not the unique minimizer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SamplingError

BREAKPOINTS = np.array([-4.5, -3.5, -2.5, -0.5, 0.5, 2.5, 3.5, 4.5])

_REJECTION_BUDGET = 100_000
_CURVATURE_FLOOR = 1e-6


def _breakpoint_gradients(h) -> np.ndarray:
    """Gradient at the eight breakpoints, integrated outward from grad(0) = 0."""
    bg = np.empty(8)
    bg[4] = 0.5 * h[4]
    bg[5] = bg[4] + 2.0 * h[5]
    bg[6] = bg[5] + h[6]
    bg[7] = bg[6] + h[7]
    bg[3] = -0.5 * h[4]
    bg[2] = bg[3] - 2.0 * h[3]
    bg[1] = bg[2] - h[2]
    bg[0] = bg[1] - h[1]
    return bg


def _breakpoint_values(h, bg) -> np.ndarray:
    """Function value at the eight breakpoints, integrated outward from f(0) = 0."""
    bf = np.empty(8)
    bf[4] = 0.125 * h[4]
    bf[5] = bf[4] + 2.0 * bg[4] + 2.0 * h[5]
    bf[6] = bf[5] + bg[5] + 0.5 * h[6]
    bf[7] = bf[6] + bg[6] + 0.5 * h[7]
    bf[3] = 0.125 * h[4]
    bf[2] = bf[3] - 2.0 * bg[3] + 2.0 * h[3]
    bf[1] = bf[2] - bg[2] + 0.5 * h[2]
    bf[0] = bf[1] - bg[1] + 0.5 * h[1]
    return bf


def _single_minimum(bg) -> bool:
    return bool(np.all(bg[4:] > 0.0) and np.all(bg[:4] < 0.0))


@dataclass(frozen=True)
class PiecewiseQuadratic:
    """Scalar objective with piecewise-constant curvature and its minimum at 0.

    hessians holds the nine interval curvatures; mu is the strong-convexity
    parameter the function was sampled for (hessians[4] >= mu).  Tail
    curvatures must lie in (0, 1] and all curvatures in [-1, 1], keeping
    the gradient 1-Lipschitz.
    """

    hessians: tuple[float, ...]
    mu: float

    def __post_init__(self):
        h = tuple(float(v) for v in self.hessians)
        object.__setattr__(self, "hessians", h)
        object.__setattr__(self, "mu", float(self.mu))
        if len(h) != 9:
            raise ValueError(f"need 9 curvature values, got {len(h)}")
        if not all(np.isfinite(h)):
            raise ValueError("curvatures must be finite")
        if not 0.0 < self.mu <= 1.0:
            raise DomainError(f"mu must lie in (0, 1], got {self.mu}")
        if not (0.0 < h[0] <= 1.0 and 0.0 < h[8] <= 1.0):
            raise ValueError("tail curvatures must lie in (0, 1]")
        if max(abs(v) for v in h) > 1.0:
            raise ValueError("curvatures must lie in [-1, 1]")
        if h[4] < self.mu:
            raise ValueError(f"central curvature {h[4]} is below mu = {self.mu}")
        bg = _breakpoint_gradients(h)
        if not _single_minimum(bg):
            raise ValueError("the origin is not the unique minimizer")
        harr = np.asarray(h)
        # per-interval anchors: the nearest breakpoint toward the origin,
        # except the left tail which anchors at -4.5
        anchors = np.concatenate(([BREAKPOINTS[0]], BREAKPOINTS))
        ga = np.concatenate(([bg[0]], bg))
        bf = _breakpoint_values(h, bg)
        fa = np.concatenate(([bf[0]], bf))
        object.__setattr__(self, "_h", harr)
        object.__setattr__(self, "_anchors", anchors)
        object.__setattr__(self, "_ga", ga)
        object.__setattr__(self, "_fa", fa)

    def grad(self, x):
        x = np.asarray(x, dtype=float)
        i = np.searchsorted(BREAKPOINTS, x, side="right")
        out = self._ga[i] + self._h[i] * (x - self._anchors[i])
        return out if out.ndim else float(out)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        i = np.searchsorted(BREAKPOINTS, x, side="right")
        dx = x - self._anchors[i]
        out = self._fa[i] + self._ga[i] * dx + 0.5 * self._h[i] * dx * dx
        return out if out.ndim else float(out)

    def to_dict(self) -> dict:
        return {"hessians": list(self.hessians), "mu": self.mu}

    @staticmethod
    def from_dict(d: dict) -> "PiecewiseQuadratic":
        return PiecewiseQuadratic(tuple(d["hessians"]), float(d["mu"]))


@dataclass(frozen=True)
class QuadraticObjective:
    """f(x) = lam * x**2 / 2 with curvature lam in (0, 1]."""

    lam: float

    def __post_init__(self):
        object.__setattr__(self, "lam", float(self.lam))
        if not 0.0 < self.lam <= 1.0:
            raise DomainError(f"curvature must lie in (0, 1], got {self.lam}")

    def grad(self, x):
        x = np.asarray(x, dtype=float)
        out = self.lam * x
        return out if out.ndim else float(out)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        out = 0.5 * self.lam * x * x
        return out if out.ndim else float(out)


def grad(f, x):
    """Gradient of a test function at x (scalar or array, elementwise)."""
    return f.grad(x)


def value(f, x):
    """Value of a test function at x (scalar or array, elementwise)."""
    return f.value(x)


def sample_function(rng: np.random.Generator, mu: float) -> PiecewiseQuadratic:
    """Draw a random test function with central curvature at least mu.

    Tail curvatures are uniform on (0, 1] (sampled on [1e-6, 1]), the six
    middle curvatures uniform on [-1, 1], the central one uniform on
    [mu, 1].  Candidates whose origin is not the unique minimizer are
    rejected; gives up after 100000 attempts.
    """
    mu = float(mu)
    if not 0.0 < mu <= 1.0:
        raise DomainError(f"mu must lie in (0, 1], got {mu}")
    for _ in range(_REJECTION_BUDGET):
        h = np.empty(9)
        h[0] = rng.uniform(_CURVATURE_FLOOR, 1.0)
        h[1:4] = rng.uniform(-1.0, 1.0, 3)
        h[4] = rng.uniform(mu, 1.0)
        h[5:8] = rng.uniform(-1.0, 1.0, 3)
        h[8] = rng.uniform(_CURVATURE_FLOOR, 1.0)
        if _single_minimum(_breakpoint_gradients(h)):
            return PiecewiseQuadratic(tuple(h), mu)
    raise SamplingError(f"no single-minimum candidate in {_REJECTION_BUDGET} draws")


def sector_alpha(f: PiecewiseQuadratic) -> float:
    """Largest alpha with grad(x) / x >= alpha for all x != 0.

    The secant slope of a continuous piecewise-linear gradient attains its
    infimum either at a breakpoint or in the limits x -> 0 / x -> +-inf,
    where it tends to the local curvature, so only finitely many
    candidates need checking.
    """
    h = f.hessians
    bg = _breakpoint_gradients(h)
    cand = [h[4], h[0], h[8]]
    cand.extend(bg[j] / BREAKPOINTS[j] for j in range(8))
    alpha = float(min(cand))
    if alpha <= 0.0:
        raise ValueError("sector bound is not positive")
    return alpha


class FunctionBatch:
    """Shared-grid vectorized gradient for a stack of test functions.

    grad(X) maps an array of shape (len(funcs), n) to the same shape,
    applying the i-th function to row i.  Used to advance many simulations
    in one numpy call; the per-element arithmetic is identical to
    PiecewiseQuadratic.grad, so batched and single runs agree bitwise.
    """

    def __init__(self, funcs):
        if not funcs:
            raise ValueError("need at least one function")
        self._h = np.stack([f._h for f in funcs])
        self._ga = np.stack([f._ga for f in funcs])
        self._anchors = funcs[0]._anchors
        self._rows = np.arange(len(funcs))

    def grad(self, X, rows=None):
        r = (self._rows if rows is None else np.asarray(rows))[:, None]
        i = np.searchsorted(BREAKPOINTS, X, side="right")
        return self._ga[r, i] + self._h[r, i] * (X - self._anchors[i])
