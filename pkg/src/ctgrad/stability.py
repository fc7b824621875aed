"""Frequency-domain stability certificates for the closed-loop dynamics.

The linearized loop is a proper rational transfer function in positive
feedback with the curvature gain; stability is certified either by the
Nyquist winding number along a (possibly shifted) imaginary-axis contour,
or by a circle criterion that covers curvature varying with position.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .algorithms import AlgorithmSpec
from .errors import (
    ContourSingularityError,
    DomainError,
    MarginalStabilityError,
    PreconditionError,
)
from .polynomials import Polynomial, find_roots, from_roots

_OMEGA_MIN = 1e-6
_OMEGA_MAX = 1e6
_POINTS_PER_DECADE = 4000
_CONTOUR_TOL = 1e-9
_MARGIN = 1e-9
_WARN_FACTOR = 10.0
_CANCEL_TOL = 1e-6
_CASE_TOL = 1e-12


@dataclass(frozen=True)
class TransferFunction:
    """Proper rational function num/den, both in ascending coefficient order."""

    num: Polynomial
    den: Polynomial

    def __post_init__(self):
        if self.num.degree > self.den.degree:
            raise ValueError("transfer function must be proper")

    def __call__(self, s):
        return npoly.polyval(s, self.num.coeffs) / npoly.polyval(s, self.den.coeffs)


@dataclass(frozen=True)
class NyquistCurve:
    """Sampled frequency response along the contour Re(s) = -shift.

    points[i] is the response at s = -shift + 1j * omegas[i]; limit_point
    is the common limit at both infinite ends.  The generating transfer
    function and gain ride along so the winding computation can refine the
    grid locally where the sampling is too coarse.
    """

    omegas: np.ndarray
    points: np.ndarray
    shift: float
    gain: float
    limit_point: complex
    tf: TransferFunction | None = None


def transfer_function(spec: AlgorithmSpec, kappa: float) -> TransferFunction:
    """Open-loop response of the dynamics at condition number kappa.

    num = [1, h_1, ..., h_{k-1}], den = [1/kappa, gbar_1, ..., gbar_{k-1}, 1]
    with gbar_j = g_j + h_j / kappa; the curvature enters the loop as a
    gain in [0, 1 - 1/kappa].
    """
    kappa = float(kappa)
    if kappa < 1.0:
        raise DomainError(f"kappa must be >= 1, got {kappa}")
    num = Polynomial((1.0,) + spec.h)
    den_coeffs = [1.0 / kappa]
    den_coeffs.extend(g + h / kappa for g, h in zip(spec.g, spec.h))
    den_coeffs.append(1.0)
    return TransferFunction(num, Polynomial(tuple(den_coeffs)))


def default_omega_grid() -> np.ndarray:
    """Logarithmic frequency grid, 4000 points per decade per side over
    [1e-6, 1e6], mirrored to negative frequencies, with omega = 0 included."""
    decades = int(round(np.log10(_OMEGA_MAX / _OMEGA_MIN)))
    pos = np.logspace(np.log10(_OMEGA_MIN), np.log10(_OMEGA_MAX),
                      decades * _POINTS_PER_DECADE + 1)
    return np.concatenate((-pos[::-1], [0.0], pos))


def _check_contour_clear(den: Polynomial, shift: float) -> None:
    for z in find_roots(den).roots:
        if abs(z.real + shift) < _CONTOUR_TOL:
            raise ContourSingularityError(
                f"denominator root {z} lies on the contour Re(s) = {-shift}"
            )


def nyquist_curve(tf: TransferFunction, gain: float, shift: float = 0.0,
                  omega_grid=None) -> NyquistCurve:
    """Sample gain * tf along the vertical contour Re(s) = -shift.

    The denominator must have no roots within 1e-9 of the contour.  The
    limit point is 0 for strictly proper tf, gain times the leading
    coefficient ratio otherwise.
    """
    gain = float(gain)
    shift = float(shift)
    _check_contour_clear(tf.den, shift)
    om = default_omega_grid() if omega_grid is None else np.asarray(omega_grid, dtype=float)
    if om.ndim != 1 or om.size < 2:
        raise ValueError("omega grid must be a vector with at least two points")
    s = -shift + 1j * om
    pts = gain * npoly.polyval(s, tf.num.coeffs) / npoly.polyval(s, tf.den.coeffs)
    if tf.num.degree < tf.den.degree:
        limit = 0.0 + 0.0j
    else:
        limit = complex(gain * tf.num.coeffs[-1] / tf.den.coeffs[-1])
    return NyquistCurve(omegas=om, points=pts, shift=shift, gain=gain,
                        limit_point=limit, tf=tf)


def _arc_increment(w0, w1, p0, p1, about, evalf, depth):
    """Principal-value argument increment over one grid segment, bisecting
    (with fresh curve evaluations) wherever a single segment turns by more
    than pi/2."""
    inc = float(np.angle((p1 - about) / (p0 - about)))
    if abs(inc) <= 0.5 * np.pi:
        return inc
    if evalf is None:
        raise ArithmeticError("winding increment too coarse and no evaluator to refine")
    if depth >= 48:
        raise MarginalStabilityError("curve cannot be resolved near the critical point")
    wm = 0.5 * (w0 + w1)
    pm = complex(evalf(wm))
    if abs(pm - about) < _MARGIN:
        raise MarginalStabilityError(
            f"curve passes within {_MARGIN} of {about} at omega = {wm}"
        )
    return (_arc_increment(w0, wm, p0, pm, about, evalf, depth + 1)
            + _arc_increment(wm, w1, pm, p1, about, evalf, depth + 1))


def winding_number(curve: NyquistCurve, about: complex = -1.0 + 0.0j) -> int:
    """Signed winding number of the closed response curve about a point.

    Counterclockwise is positive.  The curve is closed through its limit
    point; argument increments above pi/2 on a single segment trigger
    local grid refinement.  Raises MarginalStabilityError if any sample
    comes within 1e-9 of the point.
    """
    about = complex(about)
    om = np.asarray(curve.omegas, dtype=float)
    pts = np.asarray(curve.points, dtype=complex)
    evalf = None
    if curve.tf is not None:
        nc = curve.tf.num.coeffs
        dc = curve.tf.den.coeffs
        gn, sh = curve.gain, curve.shift

        def evalf(w):
            s = -sh + 1j * np.asarray(w)
            return gn * npoly.polyval(s, nc) / npoly.polyval(s, dc)

        # push both ends far enough out that closing through the limit
        # point cannot hide a sign change
        ext = []
        w = max(abs(om[0]), abs(om[-1]), 1.0)
        while w < 1e12:
            w *= 4.0
            ext.append(w)
        ext = np.asarray(ext)
        om = np.concatenate((-ext[::-1], om, ext))
        pts = np.concatenate((evalf(-ext[::-1]), pts, evalf(ext)))

    rel = pts - about
    if np.min(np.abs(rel)) < _MARGIN:
        raise MarginalStabilityError(f"curve passes within {_MARGIN} of {about}")
    if abs(curve.limit_point - about) < _MARGIN:
        raise MarginalStabilityError(f"limit point lies within {_MARGIN} of {about}")

    inc = np.angle(rel[1:] / rel[:-1])
    coarse = np.flatnonzero(np.abs(inc) > 0.5 * np.pi)
    total = float(np.sum(inc))
    for i in coarse:
        total -= inc[i]
        total += _arc_increment(om[i], om[i + 1], pts[i], pts[i + 1], about, evalf, 0)
    # close the contour through the limit point at both infinite ends
    for a, b in ((pts[-1], curve.limit_point), (curve.limit_point, pts[0])):
        step = float(np.angle((b - about) / (a - about)))
        if abs(step) > 0.5 * np.pi:
            raise ArithmeticError("contour closure is under-resolved at the grid ends")
        total += step
    w = total / (2.0 * np.pi)
    wi = int(round(w))
    if abs(w - wi) > 0.1:
        raise MarginalStabilityError(f"winding number {w:.3f} is not close to an integer")
    return wi


def nyquist_stable(spec: AlgorithmSpec, kappa: float, lambda_f: float,
                   shift: float = 0.0) -> bool:
    """Certify closed-loop stability (all roots left of -shift) at one curvature.

    Requires the open-loop denominator roots to lie strictly left of
    -shift; the loop gain is lambda_f - 1/kappa in [0, 1 - 1/kappa].
    True iff the winding number of the response about -1 is zero.
    """
    kappa = float(kappa)
    lambda_f = float(lambda_f)
    if kappa < 1.0:
        raise DomainError(f"kappa must be >= 1, got {kappa}")
    if not 1.0 / kappa <= lambda_f <= 1.0:
        raise DomainError(f"lambda_f must lie in [1/kappa, 1], got {lambda_f}")
    tf = transfer_function(spec, kappa)
    if find_roots(tf.den).max_real >= -float(shift):
        raise PreconditionError(
            "open-loop poles must lie strictly left of the contour"
        )
    curve = nyquist_curve(tf, gain=lambda_f - 1.0 / kappa, shift=shift)
    return winding_number(curve, about=-1.0 + 0.0j) == 0


def cancel_common_factor(tf: TransferFunction) -> TransferFunction:
    """Divide out root pairs shared by numerator and denominator.

    Roots closer than 1e-6 (relative) are treated as common; when nothing
    matches the input is returned unchanged.
    """
    if tf.num.degree < 1 or tf.den.degree < 1:
        return tf
    rn = list(find_roots(tf.num).roots)
    rd = list(find_roots(tf.den).roots)
    keep_n = []
    cancelled = 0
    for z in rn:
        match = None
        for i, w in enumerate(rd):
            if abs(z - w) <= _CANCEL_TOL * (1.0 + abs(z)):
                match = i
                break
        if match is None:
            keep_n.append(z)
        else:
            rd.pop(match)
            cancelled += 1
    if cancelled == 0:
        return tf
    num = from_roots(keep_n, tf.num.coeffs[-1])
    den = from_roots(rd, tf.den.coeffs[-1])
    return TransferFunction(num, den)


def circle_criterion(spec: AlgorithmSpec, kappa: float, alpha_s: float):
    """Disk test for absolute stability over the curvature sector [alpha_s, 1].

    Returns (ok, case) with case one of "above", "equal", "below" by the
    sign of alpha_s - 1/kappa (tolerance 1e-12):

      above: the response curve must avoid the closed disk D through
             -1/(alpha_s - 1/kappa) and -1/(1 - 1/kappa);
      equal: the curve must stay strictly right of the vertical line
             through -1/(1 - 1/kappa);
      below: the curve must lie in the interior of D.

    Passing within 1e-9 fails; passing within 10x of that margin emits a
    warning.  When the response reduces to a first-order lag the curve is
    a known circle and the test is repeated in exact circle geometry.
    """
    kappa = float(kappa)
    alpha_s = float(alpha_s)
    if kappa <= 1.0:
        raise DomainError(f"kappa must be > 1, got {kappa}")
    if not 0.0 < alpha_s <= 1.0:
        raise DomainError(f"alpha_s must lie in (0, 1], got {alpha_s}")
    tf = transfer_function(spec, kappa)
    _check_contour_clear(tf.den, 0.0)
    om = default_omega_grid()
    s = 1j * om
    pts = npoly.polyval(s, tf.num.coeffs) / npoly.polyval(s, tf.den.coeffs)
    if tf.num.degree == tf.den.degree:
        pts = np.append(pts, tf.num.coeffs[-1] / tf.den.coeffs[-1])
    else:
        pts = np.append(pts, 0.0 + 0.0j)

    d = alpha_s - 1.0 / kappa
    x_line = -1.0 / (1.0 - 1.0 / kappa)
    if abs(d) <= _CASE_TOL:
        case = "equal"
        margin = float(np.min(pts.real)) - x_line
    elif d > 0.0:
        case = "above"
        a = -1.0 / d
        center = 0.5 * (a + x_line)
        radius = 0.5 * abs(x_line - a)
        margin = float(np.min(np.abs(pts - center))) - radius
    else:
        case = "below"
        a = -1.0 / d
        center = 0.5 * (a + x_line)
        radius = 0.5 * (a - x_line)
        margin = radius - float(np.max(np.abs(pts - center)))
    ok = margin > _MARGIN

    if ok:
        exact = _exact_circle_margin(tf, case, x_line, d)
        if exact is not None:
            ok = exact > _MARGIN
            margin = min(margin, exact)
    if ok and margin < _WARN_FACTOR * _MARGIN:
        warnings.warn(
            f"circle criterion passes with margin {margin:.3e}, "
            f"within 10x of the {_MARGIN} threshold",
            stacklevel=2,
        )
    return ok, case


def _exact_circle_margin(tf: TransferFunction, case: str, x_line: float, d: float):
    """Margin in exact geometry when the response is a first-order lag.

    c / (s + a) with a > 0 traces the circle of center c/(2a) and radius
    c/(2a) as omega runs over the whole real line; first-order responses
    arise for the fast family after pole-zero cancellation.
    """
    red = cancel_common_factor(tf)
    if red.den.degree != 1 or red.num.degree != 0:
        return None
    a = red.den.coeffs[0] / red.den.coeffs[1]
    c = red.num.coeffs[0] / red.den.coeffs[1]
    if a <= 0.0 or c <= 0.0:
        return None
    cc = c / (2.0 * a)
    rc = cc
    if case == "equal":
        # leftmost point of the response circle is the origin
        return 0.0 - x_line
    center = 0.5 * (-1.0 / d + x_line)
    radius = 0.5 * abs(x_line + 1.0 / d)
    dist = abs(cc - center)
    if case == "above":
        # separation either outside D or inside the hole of the response circle
        return max(dist - radius - rc, rc - dist - radius)
    return radius - (dist + rc)
