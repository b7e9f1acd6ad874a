import math

import numpy as np
import pytest

from etamu_relay.errors import DomainError
from etamu_relay.fading import EtaMuParams, LinkParams, rayleigh
from etamu_relay.network import (
    Modulation,
    NetworkModel,
    PowerAllocation,
    active_relays,
    db_to_lin,
    decoding_sets,
    epa,
    lin_to_db,
)


def test_db_roundtrip():
    assert db_to_lin(20.0) == pytest.approx(100.0)
    assert lin_to_db(1000.0) == pytest.approx(30.0)
    x = np.array([-7.5, 0.0, 13.0])
    assert np.allclose(lin_to_db(db_to_lin(x)), x)


@pytest.mark.parametrize("m", [2, 4, 8, 16, 32])
def test_psk_constants(m):
    mod = Modulation.psk(m)
    assert mod.g == pytest.approx(math.sin(math.pi / m) ** 2)
    assert mod.m == m and str(mod) == f"{m}-PSK"


@pytest.mark.parametrize("m", [4, 16, 64, 256])
def test_qam_constants(m):
    mod = Modulation.qam(m)
    assert mod.g == pytest.approx(1.5 / (m - 1))
    assert mod.cqam == pytest.approx(1 - 1 / math.sqrt(m))


@pytest.mark.parametrize("mod", [Modulation.psk(2), Modulation.psk(8), Modulation.qam(4), Modulation.qam(16), Modulation.qam(64)])
def test_constellation_unit_energy(mod):
    pts = mod.constellation()
    assert pts.size == mod.m
    assert abs(np.mean(np.abs(pts) ** 2) - 1.0) <= 1e-12
    assert len(set(np.round(pts, 12))) == mod.m


@pytest.mark.parametrize("bad", [("qam", 8), ("qam", 2), ("psk", 1), ("psk", 2.5), ("fsk", 4)])
def test_modulation_domain(bad):
    with pytest.raises((DomainError, ValueError)):
        Modulation(*bad)


def test_cqam_psk_rejected():
    with pytest.raises(DomainError):
        Modulation.psk(4).cqam


def test_epa_examples():
    assert epa(0).as_array().tolist() == [1.0]
    assert epa(1).as_array().tolist() == [0.5, 0.5]
    assert np.allclose(epa(2).as_array(), [1 / 3] * 3)
    assert abs(epa(7).as_array().sum() - 1.0) <= 1e-12
    with pytest.raises(DomainError):
        epa(-1)


@pytest.mark.parametrize("v", [[0.5, 0.6], [-0.1, 1.1], [0.5, math.nan]])
def test_allocation_invariants(v):
    with pytest.raises(DomainError):
        PowerAllocation.from_array(v)


def test_network_snrs():
    sd = LinkParams(rayleigh(), 2.0)
    sr = [LinkParams(rayleigh(), 3.0)]
    rd = [LinkParams(rayleigh(), 5.0)]
    net = NetworkModel.build(sd, sr, rd, snr_db=10.0, noise=2.0, allocation=PowerAllocation(0.6, (0.4,)))
    assert net.snr == pytest.approx(10.0)
    assert net.gbar_sd == pytest.approx(0.6 * 10 * 2)
    assert net.gbar_sr == pytest.approx((0.6 * 10 * 3,))
    assert net.gbar_rd == pytest.approx((0.4 * 10 * 5,))


def test_network_defaults_and_with():
    net = NetworkModel.symmetric(3, EtaMuParams(0.5, 1.0), snr_db=0.0)
    assert net.K == 3 and np.allclose(net.allocation.as_array(), 0.25)
    net2 = net.with_snr_db(20.0).with_allocation([0.4, 0.2, 0.2, 0.2])
    assert net2.snr == pytest.approx(100.0) and net2.allocation.a0 == 0.4
    assert net.snr == pytest.approx(1.0)  # immutable


def test_network_domain():
    ln = LinkParams(rayleigh())
    with pytest.raises(DomainError):
        NetworkModel(ln, (ln,), ())
    with pytest.raises(DomainError):
        NetworkModel(ln, noise=0.0)
    with pytest.raises(DomainError):
        NetworkModel(ln, (ln,), (ln,), allocation=epa(2))


def test_decoding_sets():
    assert list(decoding_sets(2)) == [0, 1, 2, 3]
    assert active_relays(0b101, 3) == [0, 2]
    assert active_relays(0, 3) == []
    with pytest.raises(DomainError):
        active_relays(8, 3)
