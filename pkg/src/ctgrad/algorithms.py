"""Continuous-time optimization dynamics in normalized coordinates.

An order-k method is written as the k-th order ODE

    x^(k) = -sum_j g_j x^(j) - grad f(x + sum_j h_j x^(j)),    j = 1 .. k-1,

in units where the gradient Lipschitz constant and the gradient gain are
both one.  The state vector stacks derivatives component-major:
z = (x, x', ..., x^(k-1)), each block of spatial dimension n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class AlgorithmSpec:
    """Order k plus damping coefficients g and gradient-probe coefficients h.

    g and h each carry k-1 entries (empty for k = 1).  label is a free-form
    tag used in experiment output.
    """

    k: int
    g: tuple[float, ...] = ()
    h: tuple[float, ...] = ()
    label: str = "custom"

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise DomainError(f"order k must be an integer >= 1, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "g", tuple(float(v) for v in self.g))
        object.__setattr__(self, "h", tuple(float(v) for v in self.h))
        if len(self.g) != self.k - 1 or len(self.h) != self.k - 1:
            raise ValueError(
                f"g and h must each have k-1 = {self.k - 1} entries, "
                f"got {len(self.g)} and {len(self.h)}"
            )
        if not all(math.isfinite(v) for v in self.g + self.h):
            raise ValueError("coefficients must be finite")

    def to_dict(self) -> dict:
        return {"k": self.k, "g": list(self.g), "h": list(self.h), "label": self.label}

    @staticmethod
    def from_dict(d: dict) -> "AlgorithmSpec":
        return AlgorithmSpec(
            int(d["k"]),
            tuple(d.get("g", ())),
            tuple(d.get("h", ())),
            str(d.get("label", "custom")),
        )


def gradient_flow() -> AlgorithmSpec:
    """First-order flow x' = -grad f(x)."""
    return AlgorithmSpec(1, (), (), "gradient_flow")


def heavy_ball(kappa: float) -> AlgorithmSpec:
    """Momentum dynamics x'' = -(2/sqrt(kappa)) x' - grad f(x)."""
    kappa = float(kappa)
    if kappa < 1.0:
        raise DomainError(f"kappa must be >= 1, got {kappa}")
    return AlgorithmSpec(2, (2.0 / math.sqrt(kappa),), (0.0,), "heavy_ball")


def fast_kth(k: int, kappa: float) -> AlgorithmSpec:
    """Order-k family with worst-case rate kappa**(-1/k) over curvatures [1/kappa, 1].

    Coefficients (j = 1 .. k-1, binomial C):

        h_j = kappa**(j/k) * C(k-1, j)
        g_j = kappa**(-(k-j)/k) * C(k, j) - h_j / kappa

    k = 1 degenerates to plain gradient flow.
    """
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise DomainError(f"order k must be an integer >= 1, got {k!r}")
    k = int(k)
    kappa = float(kappa)
    if kappa < 1.0:
        raise DomainError(f"kappa must be >= 1, got {kappa}")
    if k == 1:
        return gradient_flow()
    h = tuple(kappa ** (j / k) * math.comb(k - 1, j) for j in range(1, k))
    g = tuple(
        kappa ** (-(k - j) / k) * math.comb(k, j) - h[j - 1] / kappa
        for j in range(1, k)
    )
    return AlgorithmSpec(k, g, h, f"fast_kth:{k}")


@dataclass(frozen=True)
class VectorField:
    """First-order form of the dynamics for a concrete objective.

    The objective must expose grad(x) operating elementwise on arrays, so a
    scalar test function extends to separable problems with n > 1.
    """

    spec: AlgorithmSpec
    objective: object
    n: int = 1

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"spatial dimension n must be an integer >= 1, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if not callable(getattr(self.objective, "grad", None)):
            raise ValueError("objective must provide a grad(x) method")

    @property
    def dim(self) -> int:
        return self.spec.k * self.n


def _field_batch(g, h, grad_fn, Z, k, n):
    """Vectorized right-hand side for a batch of states.

    Z has shape (batch, k*n); g and h are either (k-1,) shared coefficients
    or (batch, k-1) per-run coefficients.  Returns dZ/dt of the same shape.
    """
    dZ = np.empty_like(Z)
    if k > 1:
        dZ[:, : (k - 1) * n] = Z[:, n:]
    x = Z[:, :n]
    probe = x.copy()
    acc = np.zeros_like(x)
    for j in range(1, k):
        xj = Z[:, j * n : (j + 1) * n]
        probe = probe + h[..., j - 1 : j] * xj
        acc = acc + g[..., j - 1 : j] * xj
    dZ[:, (k - 1) * n :] = -acc - grad_fn(probe)
    return dZ


def eval_field(vf: VectorField, z) -> np.ndarray:
    """Evaluate dz/dt at a single state z of dimension k*n."""
    z = np.asarray(z, dtype=float)
    if z.shape != (vf.dim,):
        raise ValueError(f"state must have shape ({vf.dim},), got {z.shape}")
    if not np.all(np.isfinite(z)):
        raise ValueError("state must be finite")
    g = np.asarray(vf.spec.g, dtype=float)
    h = np.asarray(vf.spec.h, dtype=float)
    out = _field_batch(g, h, vf.objective.grad, z[None, :], vf.spec.k, vf.n)[0]
    return out


def linearized_matrix(spec: AlgorithmSpec, lambda_f: float) -> np.ndarray:
    """Companion matrix of the dynamics linearized at curvature lambda_f.

    Valid for lambda_f in (0, 1]; the k x k matrix acts on (x, x', ...,
    x^(k-1)) for a one-dimensional quadratic of curvature lambda_f.
    """
    lambda_f = float(lambda_f)
    if not 0.0 < lambda_f <= 1.0:
        raise DomainError(f"lambda_f must lie in (0, 1], got {lambda_f}")
    k = spec.k
    A = np.zeros((k, k))
    for i in range(k - 1):
        A[i, i + 1] = 1.0
    A[k - 1, 0] = -lambda_f
    for j in range(1, k):
        A[k - 1, j] = -(spec.g[j - 1] + spec.h[j - 1] * lambda_f)
    return A
