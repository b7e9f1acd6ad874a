"""
η–μ fading: parameterisation, SNR density, MGF, amount of fading and a
physical-model sampler.

Both formats of the distribution are supported analytically.  In Format 1,
η is the power ratio between the in-phase and quadrature scattered waves of
each cluster; in Format 2 it is their correlation coefficient.  The auxiliary
constants (h, H) always satisfy h² − H² = h, which is what makes the MGF
equal to one at the origin.

Note on Format 1: a commonly reproduced table gives h = (1 + η⁻¹ + η)/4.  That
expression does not reduce to Rayleigh fading at η = 1 (it yields h = 3/4 and
an MGF that is not 1 at s = 0).  The relation used here is
h = (2 + η⁻¹ + η)/4, which satisfies every special-case reduction.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ive

from .errors import DomainError, UnsupportedError

__all__ = [
    "Format",
    "EtaMuParams",
    "LinkParams",
    "hH_from_eta",
    "pdf_snr",
    "mgf",
    "mgf_hH",
    "sample_snr",
    "amount_of_fading",
    "amount_of_fading_from_mgf",
    "rayleigh",
    "hoyt",
    "nakagami",
]


class Format(str, enum.Enum):
    FORMAT1 = "format1"
    FORMAT2 = "format2"


def _hH(eta: float, fmt: Format) -> tuple[float, float]:
    if fmt is Format.FORMAT1:
        if not eta > 0.0 or not math.isfinite(eta):
            raise DomainError(f"Format 1 requires eta > 0, got {eta}")
        return (2.0 + 1.0 / eta + eta) / 4.0, (1.0 / eta - eta) / 4.0
    if not -1.0 < eta < 1.0:
        raise DomainError(f"Format 2 requires -1 < eta < 1, got {eta}")
    d = 1.0 - eta * eta
    return 1.0 / d, eta / d


@dataclass(frozen=True)
class EtaMuParams:
    """Shape of one η–μ fading link."""

    eta: float
    mu: float
    fmt: Format = Format.FORMAT1

    def __post_init__(self):
        object.__setattr__(self, "fmt", Format(self.fmt))
        object.__setattr__(self, "eta", float(self.eta))
        object.__setattr__(self, "mu", float(self.mu))
        if not self.mu > 0.0 or not math.isfinite(self.mu):
            raise DomainError(f"mu must be positive, got {self.mu}")
        _hH(self.eta, self.fmt)

    @property
    def h(self) -> float:
        return _hH(self.eta, self.fmt)[0]

    @property
    def H(self) -> float:
        return _hH(self.eta, self.fmt)[1]


@dataclass(frozen=True)
class LinkParams:
    """One hop: fading shape plus channel variance Ω = E|α|² (linear)."""

    shape: EtaMuParams
    omega: float = 1.0

    def __post_init__(self):
        if not self.omega > 0.0 or not math.isfinite(self.omega):
            raise DomainError(f"omega must be positive and finite, got {self.omega}")

    def mean_snr(self, power: float, noise: float = 1.0) -> float:
        """Average SNR γ̄ = (P/N₀)·Ω for transmit power ``power``."""
        return power * self.omega / noise


def rayleigh() -> EtaMuParams:
    return EtaMuParams(1.0, 0.5)


def hoyt(q: float) -> EtaMuParams:
    """Nakagami-q (Hoyt) fading as the Format-1 point μ = 0.5, η = q²."""
    return EtaMuParams(q * q, 0.5)


def nakagami(m: float) -> EtaMuParams:
    """Nakagami-m fading as the Format-1 point μ = m/2, η = 1."""
    return EtaMuParams(1.0, m / 2.0)


def hH_from_eta(shape: EtaMuParams) -> tuple[float, float]:
    """Return ``(h, H)`` for the shape's format.

    >>> hH_from_eta(EtaMuParams(0.5, 1.0))
    (1.125, 0.375)
    """
    return _hH(shape.eta, shape.fmt)


def pdf_snr(gamma, shape: EtaMuParams, gbar: float):
    """Density of the instantaneous SNR for average SNR ``gbar``.

    The modified Bessel function is evaluated in exponentially scaled form so
    large ``gamma/gbar`` does not overflow.
    """
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0.0) or np.any(~np.isfinite(g)):
        raise DomainError("pdf_snr requires finite gamma >= 0")
    if not gbar > 0.0:
        raise DomainError(f"gbar must be positive, got {gbar}")
    mu = shape.mu
    h, H = hH_from_eta(shape)
    H = abs(H)  # the density depends on H only through H^2
    nu = mu - 0.5
    z = 2.0 * mu * H * g / gbar
    log_const = (
        math.log(2.0 * math.sqrt(math.pi))
        + (mu + 0.5) * math.log(mu)
        + mu * math.log(h)
        - math.lgamma(mu)
        - (mu + 0.5) * math.log(gbar)
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        # small-argument branch: H^-nu I_nu(z) -> (mu g / gbar)^nu / Gamma(nu + 1)
        small = z < 1e-8
        lg = np.log(g)
        log_bessel_small = nu * (np.log(mu / gbar) + lg) - math.lgamma(nu + 1.0) + (mu - 0.5) * lg
        zz = np.where(small, 1.0, z)
        log_bessel = (mu - 0.5) * lg - nu * math.log(H if H > 0 else 1.0) + np.log(ive(nu, zz)) + zz
        lb = np.where(small, log_bessel_small, log_bessel)
        out = np.exp(log_const - 2.0 * mu * g * h / gbar + lb)
    out = np.where(g == 0.0, _pdf_at_zero(mu, h, gbar, log_const), out)
    return out if out.ndim else float(out)


def _pdf_at_zero(mu, h, gbar, log_const):
    # density behaves like gamma^(2 mu - 1) at the origin
    if mu > 0.5:
        return 0.0
    if mu < 0.5:
        return math.inf
    return math.exp(log_const - math.lgamma(1.0))


def mgf_hH(h: float, H: float, mu: float, gbar: float, s):
    """MGF in terms of explicit (h, H); see :func:`mgf`."""
    s = np.asarray(s, dtype=float)
    mu2 = 2.0 * mu
    out = (4.0 * mu * mu * h / ((mu2 * (h - H) + s * gbar) * (mu2 * (h + H) + s * gbar))) ** mu
    return out if out.ndim else float(out)


def mgf(shape: EtaMuParams, gbar: float, s):
    """E[exp(−sγ)] for η–μ fading with average SNR ``gbar``; vectorised in ``s``.

    >>> round(mgf(rayleigh(), 9.0, 1.0), 12)
    0.1
    """
    h, H = hH_from_eta(shape)
    # h = h² − H² for both formats, so the ratio form below is the same
    # function and equals 1 exactly at s = 0
    s = np.asarray(s, dtype=float)
    mu2 = 2.0 * shape.mu
    x = s * gbar
    out = (np.log1p(x / (mu2 * (h - H))) + np.log1p(x / (mu2 * (h + H)))) * -shape.mu
    out = np.exp(out)
    return out if out.ndim else float(out)


def _half_integer_clusters(mu: float) -> int:
    n = round(2.0 * mu)
    if n < 1 or abs(2.0 * mu - n) > 1e-12:
        raise UnsupportedError(f"the physical-model sampler needs 2*mu to be a positive integer, got mu={mu}")
    return n


def sample_snr(shape: EtaMuParams, gbar: float, rng: np.random.Generator, size=None):
    """Draw instantaneous SNRs from the Format-1 physical model.

    γ = Σ_{i=1}^{2μ} (X_i² + Y_i²) with independent zero-mean Gaussians whose
    variances satisfy σ_X²/σ_Y² = η, scaled so that E[γ] = ``gbar``.  Only
    half-integer μ in Format 1 are supported.
    """
    if shape.fmt is not Format.FORMAT1:
        raise UnsupportedError("sampling is implemented for Format 1 only")
    n = _half_integer_clusters(shape.mu)
    eta = shape.eta
    var_y = gbar / (n * (1.0 + eta))
    shp = () if size is None else ((size,) if np.isscalar(size) else tuple(size))
    x = rng.standard_normal((n,) + shp)
    y = rng.standard_normal((n,) + shp)
    out = var_y * (eta * np.sum(x * x, axis=0) + np.sum(y * y, axis=0))
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# amount of fading at the MRC output (all relays decoding)
# ---------------------------------------------------------------------------


def _link_moments(shape: EtaMuParams, gbar: float):
    h, H = hH_from_eta(shape)
    mu = shape.mu
    d_mean = gbar * h / (mu * (h * h - H * H))
    d_prod = gbar * gbar / (4.0 * mu * mu * (h * h - H * H))
    return d_mean, d_prod


def amount_of_fading(network) -> float:
    """AoF = Var(γ_MRC)/E²(γ_MRC) when every relay decodes correctly.

    Closed form for identical relay-to-destination links; ``network`` is a
    :class:`~etamu_relay.network.NetworkModel`.
    """
    K = network.K
    mu_sd = network.sd.shape.mu
    d1, d2 = _link_moments(network.sd.shape, network.gbar_sd)
    if K == 0:
        mu_rd, d3, d4 = 0.0, 0.0, 0.0
    else:
        shapes = {ln.shape for ln in network.rd}
        gbars = np.asarray(network.gbar_rd)
        if len(shapes) != 1 or np.ptp(gbars) > 1e-12 * gbars.max():
            raise UnsupportedError("the closed-form AoF needs identical relay-to-destination links")
        shape = network.rd[0].shape
        mu_rd = shape.mu
        d4, d3 = _link_moments(shape, float(gbars[0]))
    mean = mu_sd * d1 + K * mu_rd * d4
    first = (mu_sd * (mu_sd + 1.0) * d1 * d1 - 2.0 * d2 * mu_sd - 2.0 * d3 * K * mu_rd) / mean**2
    second = K * (mu_rd * (K * mu_rd + 1.0) * d4 * d4 + 2.0 * mu_sd * mu_rd * d1 * d4) / mean**2
    return first + second - 1.0


def amount_of_fading_from_mgf(network, rel_step: float = 1e-3) -> float:
    """AoF from numerical derivatives of the MRC-output MGF at the origin.

    Independent of the closed form: the first two moments come from
    five-point finite differences of Π_i M_i(s), so non-identical relay links
    are allowed.
    """
    links = [(network.sd.shape, network.gbar_sd)]
    links += [(ln.shape, g) for ln, g in zip(network.rd, network.gbar_rd)]
    step = rel_step / max(g for _, g in links)

    def M(s):
        out = 1.0
        for shape, g in links:
            out *= mgf(shape, g, s)
        return out

    f = {k: M(k * step) for k in (-2, -1, 0, 1, 2)}
    m1 = -(f[-2] - 8.0 * f[-1] + 8.0 * f[1] - f[2]) / (12.0 * step)
    m2 = (-f[-2] + 16.0 * f[-1] - 30.0 * f[0] + 16.0 * f[1] - f[2]) / (12.0 * step * step)
    return m2 / (m1 * m1) - 1.0
