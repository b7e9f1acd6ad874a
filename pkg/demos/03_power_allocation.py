"""Optimal power split versus equal split on an unbalanced network.

The relay-to-destination links are 10 dB stronger than the rest, so the
optimizer moves power toward the source.  Run:  python3 demos/03_power_allocation.py
"""
from etamu_relay.fading import EtaMuParams
from etamu_relay.network import Modulation, NetworkModel
from etamu_relay.power import optimize_power
from etamu_relay.ser import end_to_end_ser

qam4 = Modulation.qam(4)
print("K=2, eta=0.5, Omega_RD = 10 dB, 4-QAM")
print(f"  {'SNR':>4} {'mu':>4}  {'OPA split':<24} {'SER epa':>10} {'SER opa':>10}")
for mu in (0.5, 1.0, 1.5):
    for d in (10.0, 20.0, 30.0):
        net = NetworkModel.symmetric(2, EtaMuParams(0.5, mu), 1.0, 1.0, 10.0, snr_db=d)
        rep = optimize_power(net, qam4)
        a = rep.allocation.as_array()
        e = end_to_end_ser(net, qam4).value
        o = end_to_end_ser(net.with_allocation(rep.allocation), qam4).value
        print(f"  {d:4.0f} {mu:4.1f}  {' / '.join(f'{v:.4f}' for v in a):<24} {e:10.3e} {o:10.3e}")
