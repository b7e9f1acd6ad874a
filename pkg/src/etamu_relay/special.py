"""
Special functions used by the closed-form error-rate expressions.

The Lauricella function of the fourth kind, F_D, is evaluated through its
Euler-type single integral

    F_D(a; b_1..b_n; c; x_1..x_n)
        = Γ(c) / (Γ(a) Γ(c-a)) ∫_0^1 t^(a-1) (1-t)^(c-a-1) Π (1 - x_i t)^(-b_i) dt,

valid for c > a > 0 and every x_i < 1.  The integral is computed with a
double-exponential (tanh-sinh) rule, which copes with the algebraic endpoint
singularities (a < 1, c - a < 1) and with arguments close to 1.
"""
from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import AccuracyError, DomainError

__all__ = [
    "log_gamma",
    "gauss_2f1",
    "lauricella_fd",
    "tanh_sinh",
    "FdArgs",
]

# Abscissae are spread over |u| <= _U_MAX in the transformed variable; past
# that the double-exponential weights are below 1e-270 for every integrand
# used here.
_U_MAX = 6.0
_H0 = 0.5
_MAX_LEVEL = 11
_RTOL = 1e-10

_HYP2F1_RTOL = 1e-15
_HYP2F1_MAXTERM = 200_000


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``."""
    x = float(x)
    if not x > 0.0 or not math.isfinite(x):
        raise DomainError(f"log_gamma requires a finite positive argument, got {x!r}")
    return math.lgamma(x)


# ---------------------------------------------------------------------------
# tanh-sinh machinery
# ---------------------------------------------------------------------------


def _level_nodes(level: int):
    """Transformed abscissae added at refinement ``level`` and the step size."""
    h = _H0 / 2**level
    if level == 0:
        k = np.arange(-int(_U_MAX / h), int(_U_MAX / h) + 1)
    else:
        n = int(_U_MAX / h)
        k = np.arange(-n, n + 1)
        k = k[k % 2 != 0]
    return k * h, h


def _unit_map(u):
    """Map u -> t in (0, 1) returning log t, log(1-t), t, 1-t and log dt/du."""
    s2 = math.pi * np.sinh(u)  # 2 s with s = (pi/2) sinh u
    lt = -np.logaddexp(0.0, -s2)
    l1t = -np.logaddexp(0.0, s2)
    lw = math.log(math.pi) + np.log(np.cosh(u)) + lt + l1t
    return lt, l1t, np.exp(lt), np.exp(l1t), lw


def _refine(level_sum: Callable[[int], float], rtol: float, max_level: int, what: str):
    total = level_sum(0)
    prev = total * _H0
    for level in range(1, max_level + 1):
        total += level_sum(level)
        cur = total * _H0 / 2**level
        err = abs(cur - prev)
        if level >= 3 and (err <= rtol * abs(cur) or (cur == 0.0 and err == 0.0)):
            return cur, err
        prev = cur
    raise AccuracyError(
        f"{what}: tanh-sinh did not reach rtol={rtol:g} (estimate error {err:.3g})",
        estimate=cur,
        error=err,
    )


def _tanh_sinh_log(log_integrand, rtol=_RTOL, max_level=_MAX_LEVEL, what="integral"):
    """Integrate a positive integrand on (0, 1) given in log form.

    ``log_integrand(lt, l1t, t, omt)`` returns the log of the integrand at the
    nodes; ``omt`` is ``1 - t`` computed without cancellation.
    """

    def level_sum(level):
        u, _ = _level_nodes(level)
        lt, l1t, t, omt, lw = _unit_map(u)
        return float(np.sum(np.exp(log_integrand(lt, l1t, t, omt) + lw)))

    return _refine(level_sum, rtol, max_level, what)


def tanh_sinh(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    rtol: float = _RTOL,
    max_level: int = _MAX_LEVEL,
) -> tuple[float, float]:
    """Double-exponential quadrature of a vectorised ``f`` over ``[lo, hi]``.

    Returns ``(value, error_estimate)``.  Raises :class:`AccuracyError` when
    successive refinements do not agree to ``rtol``.
    """
    lo = float(lo)
    hi = float(hi)
    if hi == lo:
        return 0.0, 0.0
    if hi < lo:
        v, e = tanh_sinh(f, hi, lo, rtol, max_level)
        return -v, e
    span = hi - lo

    def level_sum(level):
        u, _ = _level_nodes(level)
        _, _, t, omt, lw = _unit_map(u)
        w = np.exp(lw) * span
        x = np.where(t < 0.5, lo + span * t, hi - span * omt)
        keep = (w > 0.0) & (x > lo) & (x < hi)
        if not np.any(keep):
            return 0.0
        return float(np.sum(w[keep] * f(x[keep])))

    return _refine(level_sum, rtol, max_level, "tanh_sinh")


# ---------------------------------------------------------------------------
# Gauss hypergeometric function
# ---------------------------------------------------------------------------


def _hyp2f1_series(a, b, c, x):
    term = 1.0
    total = 1.0
    for n in range(_HYP2F1_MAXTERM):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x
        total += term
        if term == 0.0 or abs(term) <= _HYP2F1_RTOL * abs(total):
            return total
    raise AccuracyError(
        f"2F1({a}, {b}; {c}; {x}) series did not converge in {_HYP2F1_MAXTERM} terms",
        estimate=total,
        error=abs(term),
    )


def _hyp2f1_euler_integral(a, b, c, x):
    # 2F1(a,b;c;x) = Γ(c)/(Γ(b)Γ(c-b)) ∫ t^(b-1)(1-t)^(c-b-1)(1-xt)^(-a) dt, c > b > 0
    return lauricella_fd(b, [a], c, [x])


def gauss_2f1(a: float, b: float, c: float, x: float) -> float:
    """Gauss hypergeometric function ₂F₁(a, b; c; x) for real ``x < 1``.

    ``|x| <= 0.5`` is summed directly.  Negative ``x`` is first mapped into
    (0, 1) with the Pfaff transformation; arguments in (0.5, 1) are
    evaluated from the Euler integral when either numerator parameter
    permits it, and by the (slowly converging) series otherwise.
    """
    a, b, c, x = float(a), float(b), float(c), float(x)
    if not c > 0.0:
        raise DomainError(f"gauss_2f1 requires c > 0, got c={c}")
    if not x < 1.0:
        raise DomainError(f"gauss_2f1 requires x < 1, got x={x}")
    if x == 0.0 or a == 0.0 or b == 0.0:
        return 1.0
    if abs(x) <= 0.5:
        return _hyp2f1_series(a, b, c, x)
    if x < 0.0:
        # Pfaff: 2F1(a,b;c;x) = (1-x)^(-b) 2F1(c-a, b; c; x/(x-1))
        z = x / (x - 1.0)
        return (1.0 - x) ** (-b) * gauss_2f1(c - a, b, c, z)
    if c > b > 0.0:
        return _hyp2f1_euler_integral(a, b, c, x)
    if c > a > 0.0:
        return _hyp2f1_euler_integral(b, a, c, x)
    if _nonpos_int(c - a) or _nonpos_int(c - b):
        # Euler: (1-x)^(c-a-b) 2F1(c-a, c-b; c; x), a terminating series here
        return (1.0 - x) ** (c - a - b) * _hyp2f1_series(c - a, c - b, c, x)
    if abs(c - a - b - round(c - a - b)) > 1e-8:
        return _hyp2f1_one_minus_x(a, b, c, x)
    return _hyp2f1_series(a, b, c, x)


def _nonpos_int(v: float) -> bool:
    return v <= 0.0 and v == round(v)


def _rgamma(v: float) -> float:
    return 0.0 if _nonpos_int(v) else 1.0 / math.gamma(v)


def _hyp2f1_one_minus_x(a, b, c, x):
    # connection formula around x = 1; both series run in 1 - x < 0.5
    y = 1.0 - x
    s = c - a - b
    t1 = math.gamma(c) * math.gamma(s) * _rgamma(c - a) * _rgamma(c - b)
    t2 = math.gamma(c) * math.gamma(-s) * _rgamma(a) * _rgamma(b)
    out = 0.0
    if t1 != 0.0:
        out += t1 * _hyp2f1_series(a, b, 1.0 - s, y)
    if t2 != 0.0:
        out += t2 * y**s * _hyp2f1_series(c - a, c - b, 1.0 + s, y)
    return out


# ---------------------------------------------------------------------------
# Lauricella F_D
# ---------------------------------------------------------------------------


class FdArgs:
    """Validated argument bundle for :func:`lauricella_fd`."""

    __slots__ = ("a", "b", "c", "x")

    def __init__(self, a, b, c, x):
        b = np.atleast_1d(np.asarray(b, dtype=float))
        x = np.atleast_1d(np.asarray(x, dtype=float))
        a = float(a)
        c = float(c)
        if b.ndim != 1 or b.shape != x.shape or b.size < 1:
            raise DomainError("F_D needs equally long, non-empty b and x vectors")
        if not a > 0.0:
            raise DomainError(f"F_D requires a > 0, got a={a}")
        if not c - a > 0.0:
            raise DomainError(f"F_D requires c > a, got a={a}, c={c}")
        if not np.all(np.isfinite(b)) or not np.all(np.isfinite(x)):
            raise DomainError("F_D parameters must be finite")
        if np.any(x >= 1.0):
            raise DomainError(f"F_D requires every x_i < 1, got {x.tolist()}")
        self.a, self.b, self.c, self.x = a, b, c, x

    @property
    def n(self) -> int:
        return self.b.size

    def __repr__(self):
        return f"FdArgs(a={self.a!r}, b={self.b.tolist()!r}, c={self.c!r}, x={self.x.tolist()!r})"


def lauricella_fd(
    a, b: Sequence[float] | None = None, c=None, x: Sequence[float] | None = None, rtol: float = _RTOL
) -> float:
    """Lauricella function F_D^(n)(a; b; c; x) for ``c > a > 0`` and ``x_i < 1``.

    ``a`` may also be an :class:`FdArgs` instance, in which case the remaining
    positional arguments are ignored.

    Examples
    --------
    >>> round(lauricella_fd(0.5, [0.7], 1.5, [0.3]), 9)  # = 2F1(0.5, 0.7; 1.5; 0.3)
    1.083357268
    """
    args = a if isinstance(a, FdArgs) else FdArgs(a, b, c, x)
    a, c = args.a, args.c
    keep = args.b != 0.0
    bb = args.b[keep][:, None]
    xx = args.x[keep][:, None]
    neg = xx[:, 0] <= 0.0

    def log_integrand(lt, l1t, t, omt):
        out = (a - 1.0) * lt + (c - a - 1.0) * l1t
        if bb.size:
            arg = np.where(neg[:, None], 1.0 - xx * t, (1.0 - xx) + xx * omt)
            out = out - np.sum(bb * np.log(arg), axis=0)
        return out

    log_pref = math.lgamma(c) - math.lgamma(a) - math.lgamma(c - a)
    value, _ = _tanh_sinh_log(log_integrand, rtol=rtol, what=f"lauricella_fd{args!r}")
    if value <= 0.0:
        return 0.0
    return math.exp(log_pref + math.log(value))
