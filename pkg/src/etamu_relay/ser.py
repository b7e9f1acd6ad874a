"""
End-to-end symbol error rate of K-relay decode-and-forward with MRC.

The destination combines the direct link with every relay that decoded the
source symbol.  Averaging over the 2^K decoding outcomes gives

    P_SER = Σ_z P(e | C_z) Π_k P(A_k = C_z(k)),

where the conditional error P(e | C_z) is an angular integral of the MRC MGF
(a product of η–μ MGFs).  Those integrals have closed forms in terms of the
Lauricella F_D function; each ships with a direct θ-quadrature counterpart
that serves both as a fallback and as an independent check.

Each MGF factor is written as (1 + A₁/sin²θ)^(−μ)(1 + A₂/sin²θ)^(−μ) with
A₁,₂ = gγ̄ / (2(h ∓ H)μ).  With S = Σ (all exponents) the PSK pieces are

    I₁  = β Γ(S+½) / (2√π Γ(S+1)) · F_D(S+½; μ…; S+1; −1/A…)
    I₁₁ = cos(π/M) M(g)/π · F_D(½; μ…, ½−S; 3/2; cos²(π/M)/(1+A)…, cos²(π/M))

with β = Π A^(−μ), and the QAM pieces follow the same pattern over [0, π/2]
and [0, π/4].
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AccuracyError, CapacityError, DomainError
from .fading import EtaMuParams, hH_from_eta, mgf
from .network import Modulation, NetworkModel, Scheme, active_relays
from .special import gauss_2f1, lauricella_fd, tanh_sinh

__all__ = [
    "Method",
    "SerResult",
    "MAX_RELAYS",
    "mrc_mgf",
    "cond_error",
    "cond_error_mpsk",
    "cond_error_mqam",
    "relay_decode_error",
    "decoding_probabilities",
    "end_to_end_ser",
    "angular_coeff",
    "angular_coeff_quadrature",
    "a_coeff_relay_dest",
    "a_coeff_source_relay",
    "asymptotic_terms",
    "asymptotic_ser",
]

MAX_RELAYS = 20


class Method(str, enum.Enum):
    EXACT_CLOSED_FORM = "exact_closed_form"
    EXACT_QUADRATURE = "exact_quadrature"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class SerResult:
    value: float
    method: Method

    def __float__(self):
        return self.value


Hop = tuple  # (EtaMuParams, gbar)


def _check_k(network: NetworkModel):
    if network.K > MAX_RELAYS:
        raise CapacityError(f"K={network.K} exceeds the 2^K enumeration guard of {MAX_RELAYS} relays")


def _receiver_hops(network: NetworkModel, cz: int) -> list[Hop]:
    hops = [(network.sd.shape, network.gbar_sd)]
    for k in active_relays(cz, network.K):
        hops.append((network.rd[k].shape, network.gbar_rd[k]))
    return hops


def mrc_mgf(network: NetworkModel, cz: int, s):
    """MGF of the MRC output SNR for decoding set ``cz``; vectorised in ``s``."""
    out = 1.0
    for shape, g in _receiver_hops(network, cz):
        out = out * mgf(shape, g, s)
    return out


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def _factors(hops: Sequence[Hop], g: float, fast_path: bool):
    """Exponents and A-coefficients of the MGF product, one pair per hop.

    The first hop is the direct link.  With ``fast_path`` the relay hops that
    share shape and mean SNR are merged by adding their exponents.
    """
    groups: list[list] = []  # [exponent, shape, gbar]
    relay_index: dict = {}
    for idx, (shape, gbar) in enumerate(hops):
        if gbar == 0.0:
            continue  # a silent branch has MGF 1
        key = (shape, gbar)
        if fast_path and idx > 0 and key in relay_index:
            groups[relay_index[key]][0] += shape.mu
            continue
        if idx > 0:
            relay_index[key] = len(groups)
        groups.append([shape.mu, shape, gbar])
    m, A = [], []
    for mu_sum, shape, gbar in groups:
        h, H = hH_from_eta(shape)
        for sign in (-1.0, 1.0):
            m.append(mu_sum)
            A.append(g * gbar / (2.0 * (h + sign * H) * shape.mu))
    return np.array(m), np.array(A)


def _blind_error(mod: Modulation) -> float:
    """Error probability when the receiver has no signal at all."""
    return (mod.m - 1) / mod.m


def _psk_closed(m, A, mod: Modulation):
    S = m.sum()
    log_beta = -np.sum(m * np.log(A))
    i1 = math.exp(
        log_beta + math.lgamma(S + 0.5) - math.lgamma(S + 1.0) - math.log(2.0 * math.sqrt(math.pi))
    ) * lauricella_fd(S + 0.5, m, S + 1.0, -1.0 / A)
    if mod.m == 2:
        return i1, 0.0
    cm = math.cos(math.pi / mod.m)
    c2 = cm * cm
    log_mg = -np.sum(m * np.log1p(A))
    i11 = (
        cm
        / math.pi
        * math.exp(log_mg)
        * lauricella_fd(0.5, np.append(m, 0.5 - S), 1.5, np.append(c2 / (1.0 + A), c2))
    )
    return i1, i11


def _qam_closed(m, A, mod: Modulation):
    S = m.sum()
    log_beta = -np.sum(m * np.log(A))
    lg = math.lgamma(S + 0.5)
    i3 = math.exp(log_beta + 0.5 * math.log(math.pi) + lg - math.lgamma(S + 1.0) - math.log(2.0))
    i3 *= lauricella_fd(S + 0.5, m, S + 1.0, -1.0 / A)
    i4 = math.exp(log_beta - (S + 1.5) * math.log(2.0) + lg - math.lgamma(S + 1.5))
    i4 *= lauricella_fd(S + 0.5, np.append(m, 0.5), S + 1.5, np.append(-0.5 / A, 0.5))
    return i3, i4


def _combine(parts, mod: Modulation) -> float:
    if mod.scheme is Scheme.PSK:
        return parts[0] + parts[1]
    C = mod.cqam
    return 4.0 * C / math.pi * parts[0] - 4.0 * C * C / math.pi * parts[1]


def _parts_closed(hops, mod: Modulation, fast_path: bool = True):
    m, A = _factors(hops, mod.g, fast_path)
    if m.size == 0:
        return None
    return (_psk_closed if mod.scheme is Scheme.PSK else _qam_closed)(m, A, mod)


def _parts_quadrature(hops, mod: Modulation):
    hops = [hp for hp in hops if hp[1] > 0.0]
    if not hops:
        return None
    g = mod.g

    def integrand(theta):
        with np.errstate(divide="ignore", over="ignore"):
            s = g / np.sin(theta) ** 2
            out = np.ones_like(theta)
            for shape, gbar in hops:
                out = out * mgf(shape, gbar, s)
        return out

    if mod.scheme is Scheme.PSK:
        i1 = tanh_sinh(integrand, 0.0, math.pi / 2)[0] / math.pi
        i11 = tanh_sinh(integrand, math.pi / 2, (mod.m - 1) * math.pi / mod.m)[0] / math.pi
        return i1, i11
    return tanh_sinh(integrand, 0.0, math.pi / 2)[0], tanh_sinh(integrand, 0.0, math.pi / 4)[0]


def _error_prob(hops, mod: Modulation, method: str = "closed", fast_path: bool = True):
    """Average error probability for MRC over ``hops``; returns (value, Method)."""
    if method == "closed":
        try:
            parts = _parts_closed(hops, mod, fast_path)
            used = Method.EXACT_CLOSED_FORM
        except AccuracyError:
            parts = _parts_quadrature(hops, mod)
            used = Method.EXACT_QUADRATURE
    elif method == "quadrature":
        parts = _parts_quadrature(hops, mod)
        used = Method.EXACT_QUADRATURE
    else:
        raise DomainError(f"unknown method {method!r}; use 'closed' or 'quadrature'")
    if parts is None:
        return _blind_error(mod), used
    return min(max(_combine(parts, mod), 0.0), 1.0), used


def cond_error(network: NetworkModel, cz: int, mod: Modulation, method: str = "closed", fast_path: bool = True) -> float:
    """P(e | A = C_z): destination error given the decoding set ``cz``."""
    return _error_prob(_receiver_hops(network, cz), mod, method, fast_path)[0]


def cond_error_mpsk(network, cz, mod, method="closed", fast_path=True) -> float:
    if mod.scheme is not Scheme.PSK:
        raise DomainError("cond_error_mpsk needs a PSK modulation")
    return cond_error(network, cz, mod, method, fast_path)


def cond_error_mqam(network, cz, mod, method="closed", fast_path=True) -> float:
    if mod.scheme is not Scheme.QAM:
        raise DomainError("cond_error_mqam needs a QAM modulation")
    return cond_error(network, cz, mod, method, fast_path)


def relay_decode_error(shape: EtaMuParams, gbar: float, mod: Modulation, method: str = "closed") -> float:
    """P(A(k) = 0): symbol error on one source→relay hop with mean SNR ``gbar``."""
    return _error_prob([(shape, gbar)], mod, method)[0]


def decoding_probabilities(network: NetworkModel, mod: Modulation, method: str = "closed") -> np.ndarray:
    """P(A = C_z) for every decoding set z = 0 … 2^K − 1."""
    _check_k(network)
    p_err = [relay_decode_error(ln.shape, g, mod, method) for ln, g in zip(network.sr, network.gbar_sr)]
    probs = np.ones(1)
    for p in p_err:  # bit k of z <-> relay k, so relay k doubles the table
        probs = np.concatenate([probs * p, probs * (1.0 - p)])
    return probs


def end_to_end_ser(network: NetworkModel, mod: Modulation, method: str = "closed") -> SerResult:
    """Exact end-to-end SER by enumeration of all decoding sets."""
    _check_k(network)
    p_err, flags = [], []
    for ln, g in zip(network.sr, network.gbar_sr):
        v, used = _error_prob([(ln.shape, g)], mod, method)
        p_err.append(v)
        flags.append(used)
    total = 0.0
    for z in range(2**network.K):
        prob = 1.0
        for k, p in enumerate(p_err):
            prob *= (1.0 - p) if z >> k & 1 else p
        if prob == 0.0:
            continue
        v, used = _error_prob(_receiver_hops(network, z), mod, method)
        flags.append(used)
        total += prob * v
    used = Method.EXACT_QUADRATURE if Method.EXACT_QUADRATURE in flags else Method.EXACT_CLOSED_FORM
    return SerResult(min(max(total, 0.0), 1.0), used)


# ---------------------------------------------------------------------------
# high-SNR asymptotics
# ---------------------------------------------------------------------------


def angular_coeff(p: float, mod: Modulation) -> float:
    """Angular coefficient of the high-SNR expansion for total exponent ``p``.

    PSK: (1/π) ∫₀^{(M−1)π/M} sin^{4p}θ dθ.
    QAM: (4C/π) ∫₀^{π/2} sin^{4p}θ dθ − (4C²/π) ∫₀^{π/4} sin^{4p}θ dθ.
    """
    if not p > 0.0:
        raise DomainError("angular exponent must be positive")
    a = 2.0 * p
    # ∫₀^{π/2} sin^{2a}
    half = math.sqrt(math.pi) * math.exp(math.lgamma(a + 0.5) - math.lgamma(a + 1.0)) / 2.0
    if mod.scheme is Scheme.PSK:
        tail = 0.0
        if mod.m > 2:
            cm = math.cos(math.pi / mod.m)
            tail = cm * gauss_2f1(0.5 - a, 0.5, 1.5, cm * cm)
        return (half + tail) / math.pi
    C = mod.cqam
    quarter = 2.0 ** (-a - 1.5) / (a + 0.5) * gauss_2f1(0.5, a + 0.5, a + 1.5, 0.5)
    return 4.0 * C / math.pi * half - 4.0 * C * C / math.pi * quarter


def angular_coeff_quadrature(p: float, mod: Modulation) -> float:
    """Direct θ-quadrature of :func:`angular_coeff` (independent check)."""

    def f(t):
        return np.sin(t) ** (4.0 * p)

    if mod.scheme is Scheme.PSK:
        return tanh_sinh(f, 0.0, (mod.m - 1) * math.pi / mod.m, rtol=1e-13)[0] / math.pi
    C = mod.cqam
    return (
        4.0 * C / math.pi * tanh_sinh(f, 0.0, math.pi / 2, rtol=1e-13)[0]
        - 4.0 * C * C / math.pi * tanh_sinh(f, 0.0, math.pi / 4, rtol=1e-13)[0]
    )


def a_coeff_relay_dest(cz: int, mu_sd: float, mu_rd: Sequence[float], mod: Modulation) -> float:
    """Coefficient of the z-th conditional-error term: exponent μ_SD + Σ_{k∈C_z} μ_{Rk,D}."""
    p = mu_sd + sum(mu_rd[k] for k in active_relays(cz, len(mu_rd)))
    return angular_coeff(p, mod)


def a_coeff_source_relay(mu_sr: float, mod: Modulation) -> float:
    """Coefficient of the high-SNR relay decode error on a μ_{S,R} hop."""
    return angular_coeff(mu_sr, mod)


def _log_diversity_factor(shape: EtaMuParams, gbar: float, g: float) -> float:
    # log (4 μ² h / (g² γ̄²))^μ
    mu = shape.mu
    h, _ = hH_from_eta(shape)
    return mu * (math.log(4.0 * mu * mu * h) - 2.0 * math.log(g * gbar))


def asymptotic_terms(network: NetworkModel, mod: Modulation) -> np.ndarray:
    """Per-decoding-set contributions of the high-SNR SER (length 2^K)."""
    _check_k(network)
    K, g = network.K, mod.g
    mu_sd = network.sd.shape.mu
    mu_rd = [ln.shape.mu for ln in network.rd]
    log_sd = _log_diversity_factor(network.sd.shape, network.gbar_sd, g)
    log_rd = [_log_diversity_factor(ln.shape, gb, g) for ln, gb in zip(network.rd, network.gbar_rd)]
    log_relay_err = [
        math.log(a_coeff_source_relay(ln.shape.mu, mod)) + _log_diversity_factor(ln.shape, gb, g)
        for ln, gb in zip(network.sr, network.gbar_sr)
    ]
    out = np.empty(2**K)
    for z in range(2**K):
        lv = log_sd + math.log(a_coeff_relay_dest(z, mu_sd, mu_rd, mod))
        for k in range(K):
            lv += log_rd[k] if z >> k & 1 else log_relay_err[k]
        out[z] = math.exp(lv)
    return out


def asymptotic_ser(network: NetworkModel, mod: Modulation) -> SerResult:
    """High-SNR SER; successful relay decoding is taken with probability one."""
    v = float(np.sum(asymptotic_terms(network, mod)))
    return SerResult(min(v, 1.0), Method.ASYMPTOTIC)
