"""Classical closed forms for the special cases of η–μ fading.

Used as independent references by the validation suite and the tests.
"""
from __future__ import annotations

import math

from .network import Modulation, Scheme

__all__ = [
    "mgf_rayleigh",
    "mgf_hoyt",
    "mgf_nakagami",
    "ser_rayleigh",
    "ser_bpsk_nakagami",
]


def mgf_rayleigh(gbar, s):
    return 1.0 / (1.0 + s * gbar)


def mgf_hoyt(q, gbar, s):
    """Nakagami-q MGF, [1 + 2sγ̄ + (2q sγ̄/(1+q²))²]^(−1/2)."""
    return (1.0 + 2.0 * s * gbar + (2.0 * q * s * gbar / (1.0 + q * q)) ** 2) ** -0.5


def mgf_nakagami(m, gbar, s):
    return (1.0 + s * gbar / m) ** -m


def ser_rayleigh(gbar: float, mod: Modulation) -> float:
    """Exact single-link SER of M-PSK or square M-QAM in Rayleigh fading."""
    g = mod.g
    beta = math.sqrt(g * gbar / (1.0 + g * gbar))
    if mod.scheme is Scheme.PSK:
        M = mod.m
        alpha = beta / math.tan(math.pi / M)
        return (M - 1.0) / M * (1.0 - beta * M / ((M - 1.0) * math.pi) * (math.pi / 2.0 + math.atan(alpha)))
    C = mod.cqam
    return 2.0 * C * (1.0 - beta) - C * C * (1.0 - 4.0 / math.pi * beta * math.atan(1.0 / beta))


def ser_bpsk_nakagami(m: int, gbar: float) -> float:
    """BPSK error probability in Nakagami-m fading, integer ``m``."""
    if int(m) != m or m < 1:
        raise ValueError("integer m >= 1 required")
    m = int(m)
    mu = math.sqrt(gbar / (m + gbar))
    tot = sum(math.comb(m - 1 + k, k) * ((1.0 + mu) / 2.0) ** k for k in range(m))
    return ((1.0 - mu) / 2.0) ** m * tot
