"""
Symbol-level Monte Carlo simulation of the decode-and-forward relay link.

Each trial sends one uniformly drawn symbol.  Every relay detects it from its
own noisy copy, relays that got it right retransmit, and the destination
combines the direct and relayed copies by MRC before minimum-distance
detection.  Channel gains are envelope × uniform phase, the envelope drawn
from the η–μ physical model; noise is CN(0, 1) and SNRs are carried by the
gain powers.

Work is split into fixed-size blocks, block ``b`` drawing from
``SeedSequence([seed, b])``.  Blocks only return integer counts, so the
result does not depend on how many threads ran them.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fading import EtaMuParams, LinkParams, sample_snr
from .network import Modulation, NetworkModel

__all__ = ["SimConfig", "SimResult", "check_supported", "simulate_ser", "simulate_hop_ser", "detect_symbol"]

MIN_SYMBOLS = 10_000


@dataclass(frozen=True)
class SimConfig:
    symbols: int = 1_000_000
    seed: int = 0
    batch: int = 1 << 16
    workers: int | None = None

    def __post_init__(self):
        if int(self.symbols) != self.symbols or self.symbols < MIN_SYMBOLS:
            raise DomainError(f"symbols must be an integer >= {MIN_SYMBOLS}, got {self.symbols}")
        if self.batch < 1:
            raise DomainError("batch must be positive")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be an unsigned 64-bit integer")

    def blocks(self):
        n = int(self.symbols)
        return [(b, min(self.batch, n - b * self.batch)) for b in range(math.ceil(n / self.batch))]


@dataclass(frozen=True)
class SimResult:
    ser_hat: float
    stderr: float
    n: int
    relay_errors: tuple = ()

    @classmethod
    def from_counts(cls, errors: int, n: int, relay_errors=()) -> "SimResult":
        p = errors / n
        return cls(p, math.sqrt(p * (1.0 - p) / n), n, tuple(int(e) for e in relay_errors))


def _nearest(z: np.ndarray, points: np.ndarray) -> np.ndarray:
    # argmin keeps the first minimum, so ties go to the lowest index
    return np.argmin(np.abs(z[..., None] - points) ** 2, axis=-1)


def detect_symbol(y, mod: Modulation):
    """Index of the constellation point nearest to ``y`` (ties: lowest index).

    >>> detect_symbol(0j, Modulation.psk(2))
    0
    """
    y = np.asarray(y, dtype=complex)
    if not np.all(np.isfinite(y)):
        raise DomainError("detect_symbol needs finite samples")
    out = _nearest(y, mod.constellation())
    return int(out) if out.ndim == 0 else out


def _gain(shape: EtaMuParams, gbar: float, rng, n: int) -> np.ndarray:
    if gbar <= 0.0:
        return np.zeros(n, dtype=complex)
    power = sample_snr(shape, gbar, rng, n)
    phase = rng.uniform(0.0, 2.0 * math.pi, n)
    return np.sqrt(power) * np.exp(1j * phase)


def _noise(rng, n):
    return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * math.sqrt(0.5)


def _run_block(network: NetworkModel, mod: Modulation, seed: int, b: int, n: int):
    rng = np.random.default_rng(np.random.SeedSequence([seed, b]))
    pts = mod.constellation()
    tx = rng.integers(0, mod.m, n)
    x = pts[tx]
    h0 = _gain(network.sd.shape, network.gbar_sd, rng, n)
    num = np.conj(h0) * (h0 * x + _noise(rng, n))
    den = np.abs(h0) ** 2
    relay_err = []
    for ln_sr, g_sr, ln_rd, g_rd in zip(network.sr, network.gbar_sr, network.rd, network.gbar_rd):
        hs = _gain(ln_sr.shape, g_sr, rng, n)
        ys = hs * x + _noise(rng, n)
        if g_sr > 0.0:
            ok = _nearest(ys * np.conj(hs) / np.abs(hs) ** 2, pts) == tx
        else:
            ok = np.zeros(n, dtype=bool)
        hr = _gain(ln_rd.shape, g_rd, rng, n)
        yr = hr * x + _noise(rng, n)
        num = num + np.where(ok, np.conj(hr) * yr, 0.0)
        den = den + np.where(ok, np.abs(hr) ** 2, 0.0)
        relay_err.append(int(n - ok.sum()))
    # den == 0 only without any received signal: detect from zero
    with np.errstate(invalid="ignore", divide="ignore"):
        z = np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), 0.0)
    errors = int(np.count_nonzero(_nearest(z, pts) != tx))
    return errors, relay_err


def check_supported(network: NetworkModel) -> None:
    """Raise :class:`UnsupportedError` if some hop cannot be sampled."""
    rng = np.random.default_rng(0)
    for ln in (network.sd, *network.sr, *network.rd):
        sample_snr(ln.shape, 1.0, rng, 1)


def simulate_ser(network: NetworkModel, mod: Modulation, cfg: SimConfig | None = None) -> SimResult:
    """End-to-end symbol error frequency with its binomial standard error.

    Every hop must be Format 1 with 2μ integer (the sampler's constraint).
    Per-relay decode-error counts are returned in ``relay_errors``.
    """
    cfg = cfg or SimConfig()
    check_supported(network)
    blocks = cfg.blocks()
    with ThreadPoolExecutor(max_workers=cfg.workers) as ex:
        out = list(ex.map(lambda bn: _run_block(network, mod, cfg.seed, *bn), blocks))
    errors = sum(e for e, _ in out)
    relay = np.sum([r for _, r in out], axis=0) if network.K else ()
    return SimResult.from_counts(errors, int(cfg.symbols), relay)


def simulate_hop_ser(shape: EtaMuParams, gbar: float, mod: Modulation, cfg: SimConfig | None = None) -> SimResult:
    """Single-hop symbol error frequency, e.g. a relay's decode error."""
    net = NetworkModel(LinkParams(shape, 1.0), total_power=gbar)
    return simulate_ser(net, mod, cfg)
