"""
JSON run configuration.

A config describes one or more *series*.  Top-level keys form the base and
each entry of ``"series"`` is deep-merged over it::

    {
      "modulation": {"scheme": "psk", "order": 4},
      "network": {
        "relays": 2,
        "defaults": {"eta": 1.0, "mu": 0.5, "format": "format1"},
        "sd": {"omega_db": 0},
        "sr": {"omega_db": 0},
        "rd": [{"omega_db": 10}, {"omega_db": 10, "mu": 1.0}]
      },
      "sweep": {"start_db": 0, "stop_db": 30, "step_db": 2},
      "allocation": "epa",
      "methods": ["exact", "asymptotic"],
      "mc": {"symbols": 1000000, "seed": 1},
      "series": [{"label": "K=1", "network": {"relays": 1}}]
    }

``sr``/``rd`` may be a single link object (replicated ``relays`` times) or a
list with one object per relay.  Ω is given in dB.  ``allocation`` is
``"epa"``, ``"opa"`` or an explicit list ``[a0, a1, ...]``.
"""
from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .fading import EtaMuParams, Format, LinkParams
from .network import Modulation, NetworkModel, PowerAllocation, db_to_lin

__all__ = ["ConfigError", "Series", "RunConfig", "load_config", "parse_config", "METHODS"]

METHODS = ("exact", "asymptotic", "mc")


class ConfigError(DomainError):
    """Malformed or inconsistent run configuration."""


@dataclass
class Series:
    label: str
    network: NetworkModel  # total power set to the first sweep point
    mod: Modulation
    snr_db: list
    allocation: object = "epa"  # "epa", "opa" or PowerAllocation
    methods: tuple = ("exact",)
    mc_symbols: int = 1_000_000
    mc_seed: int = 0
    mc_batch: int = 1 << 16
    mc_workers: int | None = None


@dataclass
class RunConfig:
    series: list = field(default_factory=list)
    description: str = ""


def _merge(base, over):
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def _get(d, key, path, kind=None, default=...):
    if key not in d:
        if default is ...:
            raise ConfigError(f"{path}.{key}: missing required field")
        return default
    v = d[key]
    if kind is float:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ConfigError(f"{path}.{key}: expected a finite number, got {v!r}")
        return float(v)
    if kind is int:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v:
            raise ConfigError(f"{path}.{key}: expected an integer, got {v!r}")
        return int(v)
    if kind is str and not isinstance(v, str):
        raise ConfigError(f"{path}.{key}: expected a string, got {v!r}")
    return v


def _link(d, defaults, path) -> LinkParams:
    if not isinstance(d, dict):
        raise ConfigError(f"{path}: expected an object")
    d = {**defaults, **d}
    unknown = set(d) - {"eta", "mu", "format", "omega_db"}
    if unknown:
        raise ConfigError(f"{path}: unknown field(s) {sorted(unknown)}")
    try:
        shape = EtaMuParams(
            _get(d, "eta", path, float),
            _get(d, "mu", path, float),
            Format(_get(d, "format", path, str, "format1")),
        )
        return LinkParams(shape, db_to_lin(_get(d, "omega_db", path, float, 0.0)))
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _links(v, k, defaults, path):
    if isinstance(v, list):
        if k is not None and len(v) != k:
            raise ConfigError(f"{path}: {len(v)} links given for {k} relays")
        return [_link(x, defaults, f"{path}[{i}]") for i, x in enumerate(v)]
    if k is None:
        raise ConfigError(f"{path}: a single link object needs network.relays")
    return [_link(v, defaults, path)] * k


def _network(d, path="network") -> tuple[LinkParams, list, list, float]:
    if not isinstance(d, dict):
        raise ConfigError(f"{path}: expected an object")
    unknown = set(d) - {"relays", "defaults", "sd", "sr", "rd", "noise"}
    if unknown:
        raise ConfigError(f"{path}: unknown field(s) {sorted(unknown)}")
    k = _get(d, "relays", path, int, None)
    if k is not None and k < 0:
        raise ConfigError(f"{path}.relays: must be >= 0")
    if k is None and "sr" not in d and "rd" not in d:
        k = 0
    defaults = _get(d, "defaults", path, None, {})
    if not isinstance(defaults, dict):
        raise ConfigError(f"{path}.defaults: expected an object")
    sd = _link(_get(d, "sd", path, None, {}), defaults, f"{path}.sd")
    if k == 0:
        sr, rd = [], []
    else:
        sr = _links(_get(d, "sr", path, None, {}), k, defaults, f"{path}.sr")
        rd = _links(_get(d, "rd", path, None, {}), k if k is not None else len(sr), defaults, f"{path}.rd")
    if len(sr) != len(rd):
        raise ConfigError(f"{path}: sr and rd list different numbers of relays")
    noise = _get(d, "noise", path, float, 1.0)
    if not noise > 0.0:
        raise ConfigError(f"{path}.noise: must be positive")
    return sd, sr, rd, noise


def _sweep(d, path="sweep") -> list:
    if isinstance(d, list):
        pts = d
    elif isinstance(d, dict):
        if "points_db" in d:
            pts = d["points_db"]
            if not isinstance(pts, list) or not pts:
                raise ConfigError(f"{path}.points_db: expected a non-empty list")
        else:
            lo = _get(d, "start_db", path, float)
            hi = _get(d, "stop_db", path, float)
            step = _get(d, "step_db", path, float)
            if not step > 0.0:
                raise ConfigError(f"{path}.step_db: must be > 0")
            if hi < lo:
                raise ConfigError(f"{path}: stop_db < start_db")
            n = int(math.floor((hi - lo) / step + 1e-9)) + 1
            pts = [lo + i * step for i in range(n)]
    else:
        raise ConfigError(f"{path}: expected an object or a list of SNR values")
    out = []
    for i, p in enumerate(pts):
        if isinstance(p, bool) or not isinstance(p, (int, float)) or not math.isfinite(p):
            raise ConfigError(f"{path}[{i}]: expected a finite number, got {p!r}")
        out.append(float(p))
    return sorted(out)


def _modulation(d, path="modulation") -> Modulation:
    if not isinstance(d, dict):
        raise ConfigError(f"{path}: expected an object")
    try:
        return Modulation(_get(d, "scheme", path, str).lower(), _get(d, "order", path, int))
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _allocation(v, k, path="allocation"):
    if v in ("epa", "opa"):
        return v
    if isinstance(v, list):
        try:
            a = PowerAllocation.from_array(np.asarray(v, dtype=float))
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{path}: {exc}") from None
        if a.K != k:
            raise ConfigError(f"{path}: {len(v)} fractions given for {k} relays")
        return a
    raise ConfigError(f"{path}: expected 'epa', 'opa' or a list of fractions, got {v!r}")


def _methods(v, path="methods") -> tuple:
    if isinstance(v, str):
        v = [x.strip() for x in v.split(",") if x.strip()]
    if not isinstance(v, list) or not v:
        raise ConfigError(f"{path}: expected a non-empty list drawn from {list(METHODS)}")
    bad = [m for m in v if m not in METHODS]
    if bad:
        raise ConfigError(f"{path}: unknown method(s) {bad}; choose from {list(METHODS)}")
    return tuple(m for m in METHODS if m in v)


def _series(d, label) -> Series:
    known = {"label", "description", "network", "modulation", "sweep", "snr_db",
             "allocation", "methods", "mc", "series", "output"}
    unknown = set(d) - known
    if unknown:
        raise ConfigError(f"{label}: unknown top-level field(s) {sorted(unknown)}")
    sd, sr, rd, noise = _network(_get(d, "network", "config"))
    mod = _modulation(_get(d, "modulation", "config"))
    if "sweep" in d:
        snr = _sweep(d["sweep"])
    elif "snr_db" in d:
        snr = _sweep([d["snr_db"]] if not isinstance(d["snr_db"], list) else d["snr_db"], "snr_db")
    else:
        raise ConfigError("config.sweep: missing required field (or give snr_db)")
    net = NetworkModel.build(sd, sr, rd, snr_db=snr[0], noise=noise)
    alloc = _allocation(d.get("allocation", "epa"), net.K)
    methods = _methods(d.get("methods", ["exact"]))
    mc = d.get("mc", {})
    if not isinstance(mc, dict):
        raise ConfigError("mc: expected an object")
    seed = _get(mc, "seed", "mc", int, 0)
    if not 0 <= seed < 2**64:
        raise ConfigError("mc.seed: must be an unsigned 64-bit integer")
    workers = mc.get("workers")
    if workers is not None:
        workers = _get(mc, "workers", "mc", int)
    return Series(
        label=str(d.get("label", label)),
        network=net,
        mod=mod,
        snr_db=snr,
        allocation=alloc,
        methods=methods,
        mc_symbols=_get(mc, "symbols", "mc", int, 1_000_000),
        mc_seed=seed,
        mc_batch=_get(mc, "batch", "mc", int, 1 << 16),
        mc_workers=workers,
    )


def parse_config(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config: top level must be a JSON object")
    base = {k: v for k, v in doc.items() if k != "series"}
    entries = doc.get("series")
    if entries is None:
        return RunConfig([_series(base, "series[0]")], str(doc.get("description", "")))
    if not isinstance(entries, list) or not entries:
        raise ConfigError("config.series: expected a non-empty list")
    out = []
    for i, over in enumerate(entries):
        if not isinstance(over, dict):
            raise ConfigError(f"series[{i}]: expected an object")
        try:
            out.append(_series(_merge(base, over), f"series[{i}]"))
        except ConfigError as exc:
            raise ConfigError(f"series[{i}]: {exc}") from None
    return RunConfig(out, str(doc.get("description", "")))


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_config(doc)
