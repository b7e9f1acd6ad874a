"""
Self-validation suite: every analytic result against an independent oracle.

``run_checks`` returns one :class:`Check` per row; the CLI prints them as a
table and exits non-zero if any fails.  ``fault="table-h"`` swaps in the
misprinted Format-1 relation h = (1 + η⁻¹ + η)/4 for the fading reductions,
which must make the Rayleigh check fail (a sanity test of the suite itself).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import hyp2f1

from . import reference as ref
from .fading import EtaMuParams, LinkParams, amount_of_fading, amount_of_fading_from_mgf, mgf_hH, pdf_snr
from .montecarlo import SimConfig, simulate_ser
from .network import Modulation, NetworkModel
from .power import kkt_residual, optimize_power, verify_convexity
from .ser import angular_coeff, angular_coeff_quadrature, cond_error, end_to_end_ser, relay_decode_error
from .special import gauss_2f1, lauricella_fd, tanh_sinh

__all__ = ["Check", "run_checks", "format_table", "FAULTS"]

FAULTS = ("none", "table-h")


@dataclass(frozen=True)
class Check:
    name: str
    value: float  # worst observed metric
    tol: float
    passed: bool
    note: str = ""


def _chk(name, value, tol, note=""):
    return Check(name, float(value), tol, bool(value <= tol), note)


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def _hH_fn(fault):
    if fault == "table-h":
        return lambda eta: ((1.0 + 1.0 / eta + eta) / 4.0, (1.0 / eta - eta) / 4.0)
    return lambda eta: ((2.0 + 1.0 / eta + eta) / 4.0, (1.0 / eta - eta) / 4.0)


def _check_fd():
    worst = 0.0
    for a, b, dc, x in itertools.product((0.5, 1.0, 1.5), (0.5, 1.0, 1.5), (0.5, 1.0), (-5, -1, -0.1, 0.1, 0.5, 0.9)):
        worst = max(worst, _rel(lauricella_fd(a, [b], a + dc, [x]), gauss_2f1(a, b, a + dc, x)))
    return _chk("F_D(1) = 2F1 reduction grid", worst, 1e-9)


def _check_2f1():
    worst = 0.0
    for a, b, c, x in itertools.product((-1.5, 0.5, 2.25), (0.5, 1.0, 3.5), (1.5, 2.0, 4.0), (-3.0, -0.4, 0.3, 0.5, 0.8, 0.97)):
        worst = max(worst, _rel(gauss_2f1(a, b, c, x), hyp2f1(a, b, c, x)))
    return _chk("2F1 vs scipy hyp2f1", worst, 1e-10)


def _check_closed_vs_quadrature(n=40, seed=2024):
    rng = np.random.default_rng(seed)
    mods = [Modulation.psk(2), Modulation.psk(4), Modulation.psk(16), Modulation.qam(4), Modulation.qam(16)]
    worst = 0.0
    for _ in range(n):
        k = int(rng.integers(0, 4))
        shape = EtaMuParams(float(rng.choice([0.1, 0.5, 0.9])), float(rng.choice([0.5, 1.0, 1.5])))
        mod = mods[int(rng.integers(len(mods)))]
        net = NetworkModel.symmetric(k, shape, snr_db=float(rng.choice([0.0, 10.0, 20.0])))
        for cz in range(2**k):
            worst = max(worst, _rel(cond_error(net, cz, mod), cond_error(net, cz, mod, method="quadrature")))
        worst = max(worst, _rel(relay_decode_error(shape, 7.0, mod), relay_decode_error(shape, 7.0, mod, "quadrature")))
    return _chk("closed forms vs theta quadrature", worst, 1e-8, f"{n} random networks")


def _check_angular():
    worst = 0.0
    for p in (0.5, 1.0, 1.5, 2.5):
        for mod in (Modulation.psk(2), Modulation.psk(4), Modulation.psk(16), Modulation.qam(4), Modulation.qam(16)):
            worst = max(worst, _rel(angular_coeff(p, mod), angular_coeff_quadrature(p, mod)))
    return _chk("high-SNR angular coefficients", worst, 1e-10)


def _check_reductions(fault):
    hH = _hH_fn(fault)
    s = np.array([0.0, 0.1, 1.0, 5.0])
    gbar = 3.0
    out = []
    h, H = hH(1.0)
    out.append(_chk("Rayleigh MGF reduction", np.max(np.abs(mgf_hH(h, H, 0.5, gbar, s) - ref.mgf_rayleigh(gbar, s))), 1e-6))
    worst = 0.0
    for q in (0.2, 0.5, 0.9):
        h, H = hH(q * q)
        worst = max(worst, np.max(np.abs(mgf_hH(h, H, 0.5, gbar, s) - ref.mgf_hoyt(q, gbar, s))))
    out.append(_chk("Hoyt MGF reduction", worst, 1e-6))
    worst = 0.0
    for m in (1.0, 2.0, 3.0, 2.5):
        h, H = hH(1.0 - 1e-9)
        worst = max(worst, np.max(np.abs(mgf_hH(h, H, m / 2.0, gbar, s) - ref.mgf_nakagami(m, gbar, s))))
    out.append(_chk("Nakagami-m MGF reduction", worst, 1e-6))
    return out


def _check_single_hop_ser():
    worst = 0.0
    for mod in (Modulation.psk(2), Modulation.psk(8), Modulation.qam(4), Modulation.qam(16)):
        for g in (1.0, 10.0, 100.0):
            net = NetworkModel(LinkParams(EtaMuParams(1.0, 0.5)), total_power=g)
            worst = max(worst, abs(end_to_end_ser(net, mod).value - ref.ser_rayleigh(g, mod)))
    for m in (1, 2, 3):
        for g in (1.0, 10.0, 100.0):
            net = NetworkModel(LinkParams(EtaMuParams(1.0, m / 2.0)), total_power=g)
            worst = max(worst, abs(end_to_end_ser(net, Modulation.psk(2)).value - ref.ser_bpsk_nakagami(m, g)))
    return _chk("single-hop SER vs classical forms", worst, 1e-6)


def _check_pdf():
    worst_norm = worst_mean = 0.0
    for eta, mu, gbar in ((0.5, 0.5, 1.0), (0.1, 1.0, 3.0), (1.0, 1.5, 10.0), (2.0, 2.0, 0.5)):
        shape = EtaMuParams(eta, mu)
        # map (0, inf) onto (0, 1) with gamma = gbar * t / (1 - t)
        def f(t, k, shape=shape, gbar=gbar):
            with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                gam = gbar * t / (1.0 - t)
                ok = np.isfinite(gam)
                v = gam**k * pdf_snr(np.where(ok, gam, 0.0), shape, gbar) * gbar / (1.0 - t) ** 2
            return np.where(ok & np.isfinite(v), v, 0.0)

        worst_norm = max(worst_norm, abs(tanh_sinh(lambda t: f(t, 0), 0.0, 1.0, rtol=1e-12)[0] - 1.0))
        worst_mean = max(worst_mean, _rel(tanh_sinh(lambda t: f(t, 1), 0.0, 1.0, rtol=1e-12)[0], gbar))
    return [_chk("pdf normalisation", worst_norm, 1e-8), _chk("pdf mean", worst_mean, 1e-7)]


def _check_aof():
    worst = 0.0
    for k in (1, 2, 3):
        for mu, eta, om in ((0.5, 1.0, 1.0), (1.0, 0.3, 10.0), (1.5, 0.7, 0.5)):
            net = NetworkModel.symmetric(k, EtaMuParams(eta, mu), 1.0, 1.0, om, snr_db=10.0)
            worst = max(worst, _rel(amount_of_fading(net), amount_of_fading_from_mgf(net)))
    direct = max(abs(amount_of_fading(NetworkModel.symmetric(0, EtaMuParams(1.0, mu))) - 1.0 / (2.0 * mu)) for mu in (0.5, 1.0, 2.5))
    dual = abs(amount_of_fading(NetworkModel.symmetric(1, EtaMuParams(1.0, 0.5))) - 0.5)
    return [_chk("AoF closed form vs MGF moments", worst, 1e-6), _chk("AoF special cases", max(direct, dual), 1e-9)]


def _check_opa():
    mod = Modulation.qam(4)
    convex = True
    worst_kkt = 0.0
    for k in (1, 2, 3):
        net = NetworkModel.symmetric(k, EtaMuParams(0.5, 1.0), 1.0, 1.0, 10.0, snr_db=20.0)
        convex &= verify_convexity(net, mod, trials=20, rng=k)
        rep = optimize_power(net, mod)
        worst_kkt = max(worst_kkt, kkt_residual(net, mod, rep.allocation))
    return [_chk("objective convexity", 0.0 if convex else 1.0, 0.0), _chk("KKT residual at optimum", worst_kkt, 1e-6)]


def _check_mc(symbols, seed):
    cases = [
        (NetworkModel.symmetric(1, EtaMuParams(1.0, 0.5), snr_db=17.0), Modulation.psk(4)),
        (NetworkModel.symmetric(2, EtaMuParams(0.5, 1.0), 1.0, 1.0, 10.0, snr_db=10.0), Modulation.qam(4)),
        (NetworkModel.symmetric(0, EtaMuParams(0.3, 1.5), snr_db=12.0), Modulation.qam(16)),
    ]
    worst = 0.0
    for i, (net, mod) in enumerate(cases):
        r = simulate_ser(net, mod, SimConfig(symbols, seed + i))
        worst = max(worst, abs(r.ser_hat - end_to_end_ser(net, mod).value) / r.stderr)
    return _chk("Monte Carlo vs exact (in stderr units)", worst, 3.0, f"N={symbols}")


def run_checks(mc: bool = True, fault: str = "none", symbols: int = 1_000_000, seed: int = 1):
    if fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}; choose from {FAULTS}")
    out = [_check_2f1(), _check_fd(), _check_closed_vs_quadrature(), _check_angular()]
    out += _check_reductions(fault)
    out.append(_check_single_hop_ser())
    out += _check_pdf()
    out += _check_aof()
    out += _check_opa()
    if mc:
        out.append(_check_mc(symbols, seed))
    return out


def format_table(checks) -> str:
    w = max(len(c.name) for c in checks)
    lines = [f"{'check':<{w}}  {'worst':>10}  {'tol':>8}  result"]
    for c in checks:
        note = f"  ({c.note})" if c.note else ""
        lines.append(f"{c.name:<{w}}  {c.value:>10.3g}  {c.tol:>8.0e}  {'PASS' if c.passed else 'FAIL'}{note}")
    return "\n".join(lines)
