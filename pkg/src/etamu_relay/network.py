"""Network, modulation and power-allocation data model."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import DomainError
from .fading import EtaMuParams, LinkParams

__all__ = [
    "Scheme",
    "Modulation",
    "PowerAllocation",
    "NetworkModel",
    "epa",
    "db_to_lin",
    "lin_to_db",
    "decoding_sets",
    "active_relays",
]


def db_to_lin(x_db):
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0) if np.ndim(x_db) else 10.0 ** (float(x_db) / 10.0)


def lin_to_db(x):
    return 10.0 * np.log10(x) if np.ndim(x) else 10.0 * math.log10(x)


class Scheme(str, enum.Enum):
    PSK = "psk"
    QAM = "qam"


@dataclass(frozen=True)
class Modulation:
    """M-PSK or square M-QAM of order ``m``."""

    scheme: Scheme
    m: int

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if int(self.m) != self.m or self.m < 2:
            raise DomainError(f"constellation order must be an integer >= 2, got {self.m}")
        object.__setattr__(self, "m", int(self.m))
        if self.scheme is Scheme.QAM:
            r = math.isqrt(self.m)
            if r * r != self.m or self.m < 4:
                raise DomainError(f"square QAM needs a perfect-square order >= 4, got {self.m}")

    @classmethod
    def psk(cls, m: int) -> "Modulation":
        return cls(Scheme.PSK, m)

    @classmethod
    def qam(cls, m: int) -> "Modulation":
        return cls(Scheme.QAM, m)

    @property
    def g(self) -> float:
        if self.scheme is Scheme.PSK:
            return math.sin(math.pi / self.m) ** 2
        return 1.5 / (self.m - 1)

    @property
    def cqam(self) -> float:
        """C = 1 − 1/√M (square QAM only)."""
        if self.scheme is not Scheme.QAM:
            raise DomainError("C is defined for QAM only")
        return 1.0 - 1.0 / math.sqrt(self.m)

    def constellation(self) -> np.ndarray:
        """Unit-average-energy constellation points indexed 0..M−1."""
        if self.scheme is Scheme.PSK:
            return np.exp(2j * np.pi * np.arange(self.m) / self.m)
        r = math.isqrt(self.m)
        lv = 2.0 * np.arange(r) - (r - 1)
        pts = (lv[:, None] + 1j * lv[None, :]).ravel()
        return pts / math.sqrt(2.0 * (self.m - 1) / 3.0)

    def __str__(self):
        return f"{self.m}-{self.scheme.value.upper()}"


@dataclass(frozen=True)
class PowerAllocation:
    """Fractions of the total power given to the source and to each relay."""

    a0: float
    ar: tuple = ()

    def __post_init__(self):
        ar = tuple(float(v) for v in self.ar)
        object.__setattr__(self, "ar", ar)
        object.__setattr__(self, "a0", float(self.a0))
        v = self.as_array()
        if np.any(v < 0.0) or not np.all(np.isfinite(v)):
            raise DomainError(f"power fractions must be finite and non-negative, got {v.tolist()}")
        if abs(v.sum() - 1.0) > 1e-12:
            raise DomainError(f"power fractions must sum to 1, got sum={v.sum()!r}")

    @property
    def K(self) -> int:
        return len(self.ar)

    def as_array(self) -> np.ndarray:
        return np.array((self.a0,) + self.ar)

    @classmethod
    def from_array(cls, v) -> "PowerAllocation":
        v = np.asarray(v, dtype=float)
        return cls(v[0], tuple(v[1:]))


def epa(k: int) -> PowerAllocation:
    """Equal power split P/(K+1) between the source and ``k`` relays."""
    if k < 0:
        raise DomainError("number of relays must be >= 0")
    v = np.full(k + 1, 1.0 / (k + 1))
    v[0] = 1.0 - v[1:].sum()
    return PowerAllocation.from_array(v)


@dataclass(frozen=True)
class NetworkModel:
    """Source, K relays and destination.

    The source power a₀P feeds both the direct link and every source→relay
    link; relay k transmits with a_k·P when it has decoded correctly.
    ``allocation`` defaults to equal power allocation.
    """

    sd: LinkParams
    sr: tuple = ()
    rd: tuple = ()
    noise: float = 1.0
    total_power: float = 1.0
    allocation: PowerAllocation | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "sr", tuple(self.sr))
        object.__setattr__(self, "rd", tuple(self.rd))
        if len(self.sr) != len(self.rd):
            raise DomainError("sr and rd must list one link per relay")
        if not self.noise > 0.0 or not self.total_power > 0.0:
            raise DomainError("noise power and total power must be positive")
        if self.allocation is None:
            object.__setattr__(self, "allocation", epa(self.K))
        elif self.allocation.K != self.K:
            raise DomainError(f"allocation has {self.allocation.K} relay entries, network has {self.K}")

    @property
    def K(self) -> int:
        return len(self.sr)

    @property
    def snr(self) -> float:
        """Transmit SNR P/N₀ of the whole power budget."""
        return self.total_power / self.noise

    @property
    def gbar_sd(self) -> float:
        return self.allocation.a0 * self.snr * self.sd.omega

    @property
    def gbar_sr(self) -> tuple:
        return tuple(self.allocation.a0 * self.snr * ln.omega for ln in self.sr)

    @property
    def gbar_rd(self) -> tuple:
        return tuple(a * self.snr * ln.omega for a, ln in zip(self.allocation.ar, self.rd))

    def with_allocation(self, allocation) -> "NetworkModel":
        if not isinstance(allocation, PowerAllocation):
            allocation = PowerAllocation.from_array(allocation)
        return replace(self, allocation=allocation)

    def with_power(self, total_power: float) -> "NetworkModel":
        return replace(self, total_power=float(total_power))

    def with_snr_db(self, snr_db: float) -> "NetworkModel":
        return self.with_power(db_to_lin(snr_db) * self.noise)

    @classmethod
    def symmetric(
        cls,
        k: int,
        shape: EtaMuParams,
        omega_sd: float = 1.0,
        omega_sr: float = 1.0,
        omega_rd: float = 1.0,
        snr_db: float = 0.0,
        allocation: PowerAllocation | None = None,
    ) -> "NetworkModel":
        """All hops share ``shape``; Ω values are linear."""
        return cls.build(
            LinkParams(shape, omega_sd),
            [LinkParams(shape, omega_sr)] * k,
            [LinkParams(shape, omega_rd)] * k,
            snr_db=snr_db,
            allocation=allocation,
        )

    @classmethod
    def build(
        cls,
        sd: LinkParams,
        sr: Sequence[LinkParams],
        rd: Sequence[LinkParams],
        snr_db: float = 0.0,
        noise: float = 1.0,
        allocation: PowerAllocation | None = None,
    ) -> "NetworkModel":
        return cls(sd, tuple(sr), tuple(rd), noise, db_to_lin(snr_db) * noise, allocation)


def decoding_sets(k: int) -> range:
    """All decoding outcomes as bit masks; bit j set means relay j+1 decoded."""
    return range(2**k)


def active_relays(cz: int, k: int) -> list[int]:
    if not 0 <= cz < 2**k:
        raise DomainError(f"decoding set {cz} out of range for K={k}")
    return [j for j in range(k) if cz >> j & 1]
