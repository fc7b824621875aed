"""Fixed-step classical Runge-Kutta integration of the dynamics.

simulate() advances one trajectory; the private batch core advances many
runs of the same algorithm at once (used by the sweep driver).  Both share
the same per-element arithmetic, so replaying a single run out of a batch
reproduces it bitwise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .algorithms import AlgorithmSpec, VectorField, _field_batch, eval_field
from .errors import DivergenceError, DomainError
from .polynomials import DEFAULT_GRID_SIZE, char_poly, find_roots

_DIVERGENCE_GUARD = 1e12


class TerminationReason(enum.Enum):
    TOLERANCE = "tolerance-reached"
    T_MAX = "t-max-reached"
    DIVERGENCE = "divergence"


@dataclass(frozen=True)
class SimConfig:
    """Step size, stopping rules and recording stride for simulate()."""

    dt: float = 0.01
    tol: float = 1e-8
    t_max: float = 1e5
    record_stride: int = 10

    def __post_init__(self):
        if not self.dt > 0.0:
            raise DomainError(f"dt must be positive, got {self.dt}")
        if not self.tol > 0.0:
            raise DomainError(f"tol must be positive, got {self.tol}")
        if not self.t_max >= self.dt:
            raise DomainError(f"t_max must be at least dt, got {self.t_max}")
        if not isinstance(self.record_stride, int) or self.record_stride < 1:
            raise DomainError(f"record_stride must be an integer >= 1, got {self.record_stride!r}")


@dataclass(frozen=True)
class Trajectory:
    """Strided samples of one simulated run.

    Sample 0 is the initial state; thereafter every record_stride-th step
    is kept, plus the final step when termination lands off the stride.
    norms[i] is the euclidean norm of states[i].
    """

    times: np.ndarray
    states: np.ndarray
    norms: np.ndarray
    terminated_by: TerminationReason

    @property
    def t_end(self) -> float:
        return float(self.times[-1])


def rk4_step(vf: VectorField, z, dt: float) -> np.ndarray:
    """One classical Runge-Kutta update (stage weights 1/6, 1/3, 1/3, 1/6)."""
    if not dt > 0.0:
        raise DomainError(f"dt must be positive, got {dt}")
    z = np.asarray(z, dtype=float)
    g = np.asarray(vf.spec.g, dtype=float)
    h = np.asarray(vf.spec.h, dtype=float)

    def field(Z):
        return _field_batch(g, h, vf.objective.grad, Z, vf.spec.k, vf.n)

    eval_field(vf, z)  # validates shape and finiteness
    out = _rk4_batch(field, z[None, :], dt)[0]
    if not np.all(np.isfinite(out)):
        raise DivergenceError("step produced non-finite state")
    return out


def _rk4_batch(field, Z, dt):
    k1 = field(Z)
    k2 = field(Z + (0.5 * dt) * k1)
    k3 = field(Z + (0.5 * dt) * k2)
    k4 = field(Z + dt * k3)
    return Z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _run_batch(spec, g, h, grad_fn, Z0, n, cfg, keep_states=False):
    """Advance a batch of runs to termination.

    Z0 is (batch, k*n); g and h are shared (k-1,) or per-run (batch, k-1)
    coefficient arrays; grad_fn maps (batch, n) -> (batch, n).  Returns a
    list of per-run dicts with times, norms, optional states, and the
    termination reason.  Finished runs are frozen in place so the batch
    keeps advancing only the active ones.
    """
    B, dim = Z0.shape
    k = spec.k
    dt, tol, stride = cfg.dt, cfg.tol, cfg.record_stride
    n_max = int(np.ceil(cfg.t_max / dt - 1e-12))

    Z = np.array(Z0, dtype=float)
    norms = np.sqrt(np.sum(Z * Z, axis=1))
    active = np.ones(B, dtype=bool)
    end_step = np.zeros(B, dtype=np.int64)
    reason = np.empty(B, dtype=object)
    final_norm = norms.copy()
    final_state = Z.copy() if keep_states else None

    snap_steps = [0]
    snap_norms = [norms.copy()]
    snap_states = [Z.copy()] if keep_states else None

    done0 = norms <= tol
    if np.any(done0):
        reason[done0] = TerminationReason.TOLERANCE
        active &= ~done0

    step = 0
    with np.errstate(over="ignore", invalid="ignore"):
        while step < n_max and np.any(active):
            step += 1
            idx = np.flatnonzero(active)
            Znew = _rk4_batch(
                lambda X: _field_batch(g[idx] if g.ndim == 2 else g,
                                       h[idx] if h.ndim == 2 else h,
                                       lambda P: grad_fn(P, idx),
                                       X, k, n),
                Z[idx], dt)
            nrm = np.sqrt(np.sum(Znew * Znew, axis=1))
            Z[idx] = Znew
            norms[idx] = nrm

            bad = ~np.isfinite(nrm) | (nrm > _DIVERGENCE_GUARD)
            hit = nrm <= tol
            finished = bad | hit
            if step == n_max:
                finished[:] = True
            if np.any(finished):
                fin = idx[finished]
                reason[fin[bad[finished]]] = TerminationReason.DIVERGENCE
                reason[fin[hit[finished] & ~bad[finished]]] = TerminationReason.TOLERANCE
                if step == n_max:
                    left = fin[~bad[finished] & ~hit[finished]]
                    reason[left] = TerminationReason.T_MAX
                end_step[fin] = step
                final_norm[fin] = nrm[finished]
                if keep_states:
                    final_state[fin] = Znew[finished]
            if step % stride == 0:
                snap_steps.append(step)
                snap_norms.append(norms.copy())
                if keep_states:
                    snap_states.append(Z.copy())
            if np.any(finished):
                active[idx[finished]] = False

    snap_steps = np.asarray(snap_steps)
    SN = np.stack(snap_norms)
    SS = np.stack(snap_states) if keep_states else None
    out = []
    for b in range(B):
        end = int(end_step[b])
        m = int(np.searchsorted(snap_steps, end, side="right"))
        t_steps = snap_steps[:m]
        nn = SN[:m, b]
        ss = SS[:m, b, :] if keep_states else None
        if end > 0 and end % stride != 0:
            t_steps = np.append(t_steps, end)
            nn = np.append(nn, final_norm[b])
            if keep_states:
                ss = np.vstack([ss, final_state[b][None, :]])
        out.append({
            "times": t_steps * dt,
            "norms": np.array(nn),
            "states": np.array(ss) if keep_states else None,
            "reason": reason[b],
        })
    return out


def simulate(spec: AlgorithmSpec, objective, z0, config: SimConfig | None = None) -> Trajectory:
    """Integrate the dynamics from z0 until |z| <= tol, divergence, or t_max.

    z0 has dimension k*n (component-major); divergence (norm above 1e12 or
    non-finite) is reported through terminated_by, not raised.
    """
    cfg = config if config is not None else SimConfig()
    z0 = np.asarray(z0, dtype=float)
    if z0.ndim != 1 or z0.size == 0:
        raise ValueError("z0 must be a nonempty vector")
    if not np.all(np.isfinite(z0)):
        raise ValueError("z0 must be finite")
    n, rem = divmod(z0.size, spec.k)
    if rem:
        raise ValueError(f"z0 size {z0.size} is not a multiple of k = {spec.k}")
    g = np.asarray(spec.g, dtype=float)
    h = np.asarray(spec.h, dtype=float)
    res = _run_batch(spec, g, h, lambda P, idx: objective.grad(P), z0[None, :], n, cfg,
                     keep_states=True)[0]
    return Trajectory(times=res["times"], states=res["states"], norms=res["norms"],
                      terminated_by=res["reason"])


def rk4_stability_check(spec: AlgorithmSpec, kappa: float, dt: float,
                        grid_size: int = DEFAULT_GRID_SIZE):
    """Check the step size against the linear stability region of RK4.

    Evaluates the growth factor R(w) = 1 + w + w^2/2 + w^3/6 + w^4/24 at
    w = dt * s for every root s of the characteristic polynomial across
    the curvature grid on [1/kappa, 1].  Returns (ok, worst) where ok is
    True iff max |R| < 1 and worst is the dt * s achieving the maximum.
    """
    kappa = float(kappa)
    if kappa < 1.0:
        raise DomainError(f"kappa must be >= 1, got {kappa}")
    if not dt > 0.0:
        raise DomainError(f"dt must be positive, got {dt}")
    worst = None
    worst_mag = -1.0
    for lam in np.unique(np.linspace(1.0 / kappa, 1.0, grid_size)):
        for root in find_roots(char_poly(spec, float(lam))).roots:
            w = root * dt
            mag = abs(1.0 + w + w**2 / 2.0 + w**3 / 6.0 + w**4 / 24.0)
            if mag > worst_mag:
                worst_mag, worst = mag, w
    return worst_mag < 1.0, worst


def trajectory_to_csv(traj: Trajectory, path) -> None:
    """Write t, state components, and norm as CSV (repr-formatted floats)."""
    dim = traj.states.shape[1]
    header = "t," + ",".join(f"z{i + 1}" for i in range(dim)) + ",norm"
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for t, row, nrm in zip(traj.times, traj.states, traj.norms):
            cells = [repr(float(t))] + [repr(float(v)) for v in row] + [repr(float(nrm))]
            fh.write(",".join(cells) + "\n")
