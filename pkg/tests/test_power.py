import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etamu_relay.errors import DomainError
from etamu_relay.fading import EtaMuParams, LinkParams
from etamu_relay.network import Modulation, NetworkModel, PowerAllocation, epa
from etamu_relay.power import (
    PowerObjective,
    kkt_residual,
    optimize_power,
    project_simplex,
    verify_convexity,
)
from etamu_relay.ser import asymptotic_ser

QAM4 = Modulation.qam(4)
ETA = 0.5


def table_net(k, mu_sd, mu_sr, mu_rd, omega_rd=1.0, snr_db=20.0):
    sd = LinkParams(EtaMuParams(ETA, mu_sd))
    sr = [LinkParams(EtaMuParams(ETA, mu_sr))] * k
    rd = [LinkParams(EtaMuParams(ETA, mu_rd), omega_rd)] * k
    return NetworkModel.build(sd, sr, rd, snr_db=snr_db)


# rows: (mu_sr, mu_rd, K=1 split, K=2 split), mu_sd = 0.5, balanced links
TABLE_MU = [
    (0.5, 0.5, (0.6270, 0.3730), (0.4832, 0.2584)),
    (0.5, 1.0, (0.6572, 0.3428), (0.4914, 0.2543)),
    (0.5, 1.5, (0.6871, 0.3129), (0.5048, 0.2476)),
    (1.0, 0.5, (0.5415, 0.4585), (0.4006, 0.2997)),
    (1.0, 1.0, (0.5302, 0.4698), (0.3842, 0.3079)),
    (1.0, 1.5, (0.5725, 0.4275), (0.3971, 0.3014)),
    (1.5, 0.5, (0.5160, 0.4840), (0.3724, 0.3138)),
    (1.5, 1.0, (0.4652, 0.5348), (0.3443, 0.3278)),
    (1.5, 1.5, (0.5008, 0.4992), (0.3424, 0.3288)),
]

# rows: (mu, omega_rd linear, K=1, K=2, K=3)
TABLE_OMEGA = [
    (0.5, 1, (0.6270, 0.3730), (0.4832, 0.2584), (0.4036, 0.1988)),
    (0.5, 10, (0.7968, 0.2032), (0.6974, 0.1513), (0.6328, 0.1224)),
    (0.5, 100, (0.9181, 0.0819), (0.8712, 0.0644), (0.8371, 0.0543)),
    (1.0, 1, (0.5925, 0.4075), (0.4368, 0.2816), (0.3520, 0.2160)),
    (1.0, 10, (0.8316, 0.1684), (0.7343, 0.1328), (0.6658, 0.1114)),
    (1.0, 100, (0.9557, 0.0443), (0.9247, 0.0376), (0.8995, 0.0335)),
    (1.5, 1, (0.5735, 0.4265), (0.4131, 0.2935), (0.3274, 0.2242)),
    (1.5, 10, (0.8496, 0.1504), (0.7549, 0.1226), (0.6850, 0.1050)),
    (1.5, 100, (0.9683, 0.0317), (0.9439, 0.0280), (0.9232, 0.0256)),
]

# rows: (mu, 4-PSK, 16-PSK, 16-QAM), K = 2, balanced links
TABLE_MOD = [
    (0.5, (0.4832, 0.2584), (0.4932, 0.2534), (0.5113, 0.2443)),
    (1.0, (0.4368, 0.2816), (0.4392, 0.2804), (0.4572, 0.2714)),
    (1.5, (0.4130, 0.2935), (0.4138, 0.2931), (0.4287, 0.2857)),
]


def check_split(rep, want, k):
    a = rep.allocation.as_array()
    assert rep.converged and not rep.boundary
    assert abs(a[0] - want[0]) <= 0.002
    assert np.all(np.abs(a[1:] - want[1]) <= 0.002)
    assert np.ptp(a[1:]) <= 1e-6
    assert rep.kkt_residual < 1e-6


# Three two-relay cells of the published grid are not minimisers of the
# asymptotic objective: the tabulated split gives a higher asymptotic and a
# higher exact SER than the converged optimum (see README).
OFF_TABLE = {(1.0, 1.5), (1.5, 1.0), (1.5, 1.5)}


@pytest.mark.parametrize("mu_sr,mu_rd,k1,k2", TABLE_MU)
def test_table_mu_one_relay(mu_sr, mu_rd, k1, k2):
    check_split(optimize_power(table_net(1, 0.5, mu_sr, mu_rd), QAM4), k1, 1)


@pytest.mark.parametrize(
    "mu_sr,mu_rd,k1,k2",
    [
        pytest.param(*row, marks=pytest.mark.xfail(strict=True, reason="tabulated split is not the optimum"))
        if row[:2] in OFF_TABLE
        else row
        for row in TABLE_MU
    ],
)
def test_table_mu_two_relays(mu_sr, mu_rd, k1, k2):
    check_split(optimize_power(table_net(2, 0.5, mu_sr, mu_rd), QAM4), k2, 2)


@pytest.mark.parametrize("mu_sr,mu_rd", sorted(OFF_TABLE))
def test_off_table_cells_are_suboptimal(mu_sr, mu_rd):
    from etamu_relay.ser import end_to_end_ser

    want = dict(((r[0], r[1]), r[3]) for r in TABLE_MU)[(mu_sr, mu_rd)]
    net = table_net(2, 0.5, mu_sr, mu_rd)
    rep = optimize_power(net, QAM4)
    tab = np.array([want[0], want[1], want[1]])
    tab /= tab.sum()
    obj = PowerObjective(net, QAM4)
    assert obj.value(tab) > obj.value(rep.allocation.as_array())
    assert end_to_end_ser(net.with_allocation(tab), QAM4).value > end_to_end_ser(net.with_allocation(rep.allocation), QAM4).value


@pytest.mark.parametrize("mu,omega,k1,k2,k3", TABLE_OMEGA)
def test_table_omega(mu, omega, k1, k2, k3):
    for k, want in ((1, k1), (2, k2), (3, k3)):
        check_split(optimize_power(table_net(k, mu, mu, mu, omega), QAM4), want, k)


@pytest.mark.parametrize("mu,psk4,psk16,qam16", TABLE_MOD)
def test_table_modulation(mu, psk4, psk16, qam16):
    net = table_net(2, mu, mu, mu)
    for mod, want in ((Modulation.psk(4), psk4), (Modulation.psk(16), psk16), (Modulation.qam(16), qam16)):
        check_split(optimize_power(net, mod), want, 2)


@pytest.mark.parametrize("snr_db", [0.0, 10.0, 35.0, 60.0])
def test_argmin_invariant_to_power(snr_db):
    # every decoding-set term has the same total exponent when mu_SR = mu_RD
    base = optimize_power(table_net(2, 1.0, 1.5, 1.5, 10.0), QAM4).allocation.as_array()
    other = optimize_power(table_net(2, 1.0, 1.5, 1.5, 10.0, snr_db), QAM4).allocation.as_array()
    assert np.max(np.abs(base - other)) <= 1e-6


def test_argmin_moves_with_power_when_exponents_differ():
    lo = optimize_power(table_net(2, 1.0, 0.5, 1.5, 10.0, 10.0), QAM4).allocation.a0
    hi = optimize_power(table_net(2, 1.0, 0.5, 1.5, 10.0, 30.0), QAM4).allocation.a0
    assert hi - lo > 0.05


def test_start_point_independent():
    net = table_net(3, 1.0, 1.5, 0.5, 3.0)
    ref = optimize_power(net, QAM4).allocation.as_array()
    rng = np.random.default_rng(8)
    for _ in range(5):
        got = optimize_power(net, QAM4, start=rng.dirichlet(np.ones(4))).allocation.as_array()
        assert np.max(np.abs(got - ref)) <= 1e-6


def test_opa_not_worse_than_epa():
    rng = np.random.default_rng(4)
    for _ in range(20):
        k = int(rng.integers(1, 4))
        mk = lambda: LinkParams(EtaMuParams(float(rng.uniform(0.2, 2.0)), float(rng.choice([0.5, 1.0, 1.5]))), float(rng.uniform(0.2, 20)))
        net = NetworkModel.build(mk(), [mk() for _ in range(k)], [mk() for _ in range(k)], snr_db=25.0)
        rep = optimize_power(net, QAM4)
        assert rep.ser <= asymptotic_ser(net.with_allocation(epa(k)), QAM4).value * (1 + 1e-12)


def test_k1_policy_inequality():
    for mu_sd in (0.5, 1.0, 1.5):
        for mu_sr in (0.5, 1.0, 1.5):
            for mu_rd in (0.5, 1.0, 1.5):
                for om in (1.0, 10.0, 100.0):
                    a = optimize_power(table_net(1, mu_sd, mu_sr, mu_rd, om), QAM4).allocation
                    assert a.a0 * mu_rd >= a.ar[0] * mu_sd


def test_opa_rejects_direct_only():
    with pytest.raises(DomainError):
        optimize_power(table_net(0, 0.5, 0.5, 0.5), QAM4)


def test_boundary_reported():
    # an enormously strong relay link needs almost no power
    sd = LinkParams(EtaMuParams(ETA, 3.0))
    rl = LinkParams(EtaMuParams(ETA, 0.5))
    net = NetworkModel.build(sd, [rl], [LinkParams(rl.shape, 1e20)], snr_db=20.0)
    rep = optimize_power(net, QAM4)
    assert rep.boundary and 0.0 < rep.allocation.ar[0] < 1e-9
    assert math.isnan(rep.kkt_residual)
    assert rep.allocation.as_array().sum() == pytest.approx(1.0, abs=1e-12)


def test_iteration_cap():
    rep = optimize_power(table_net(2, 0.5, 1.0, 1.5, 10.0), QAM4, max_iter=1)
    assert not rep.converged and rep.iterations == 1


# KKT ----------------------------------------------------------------------


def test_kkt_large_at_epa_for_unbalanced_links():
    net = table_net(1, 0.5, 0.5, 0.5, 100.0)
    assert kkt_residual(net, QAM4, epa(1)) > 1e-3


def test_kkt_rejects_boundary():
    with pytest.raises(DomainError):
        kkt_residual(table_net(1, 0.5, 0.5, 0.5), QAM4, PowerAllocation(1.0, (0.0,)))


def test_gradient_matches_finite_difference():
    obj = PowerObjective(table_net(3, 1.0, 0.5, 1.5, 10.0), Modulation.psk(8))
    x = np.array([0.4, 0.1, 0.3, 0.2])
    g = obj.grad(x)
    for i in range(4):
        e = np.zeros(4)
        e[i] = 1e-6
        fd = (obj.value(x + e) - obj.value(x - e)) / 2e-6
        assert fd == pytest.approx(g[i], rel=1e-6)


def test_objective_scale_matches_asymptotic_ser():
    net = table_net(2, 1.0, 0.5, 1.5, 10.0)
    obj = PowerObjective(net, QAM4)
    a = np.array([0.5, 0.3, 0.2])
    assert obj.ser(a) == pytest.approx(asymptotic_ser(net.with_allocation(a), QAM4).value, rel=1e-12)
    assert obj.value(epa(2).as_array()) == pytest.approx(1.0, rel=1e-12)
    assert obj.value([1.0, 0.0, 0.0]) == math.inf


# projection ------------------------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=1, max_size=8))
def test_projection_lands_on_simplex(v):
    p = project_simplex(v)
    assert np.all(p >= 0.0) and abs(p.sum() - 1.0) <= 1e-12
    # idempotent
    assert np.allclose(project_simplex(p), p, atol=1e-12)


def test_projection_examples():
    assert np.allclose(project_simplex([0.2, 0.3, 0.5]), [0.2, 0.3, 0.5])
    assert np.allclose(project_simplex([2.0, 0.0]), [1.0, 0.0])
    assert np.allclose(project_simplex([1.0, 1.0]), [0.5, 0.5])


# convexity ------------------------------------------------------------------


@pytest.mark.parametrize("k", [1, 2, 3])
def test_convexity(k):
    net = table_net(k, 0.5, 1.0, 1.5, 10.0)
    assert verify_convexity(net, QAM4, trials=100, rng=k)


def test_convexity_detects_concave():
    net = table_net(2, 0.5, 0.5, 0.5)
    obj = PowerObjective(net, QAM4)
    assert not verify_convexity(net, QAM4, trials=10, rng=0, objective=lambda a: -obj.value(a))


def test_convexity_rejects_k0():
    with pytest.raises(DomainError):
        verify_convexity(table_net(0, 0.5, 0.5, 0.5), QAM4)
