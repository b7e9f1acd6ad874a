"""How much do relays buy?  SER curves, diversity slopes, gain at 1e-4.

Run:  python3 demos/02_relays_and_diversity.py
"""
import math

import numpy as np
from scipy.optimize import brentq

from etamu_relay.fading import rayleigh
from etamu_relay.network import Modulation, NetworkModel
from etamu_relay.ser import asymptotic_ser, end_to_end_ser

qpsk = Modulation.psk(4)


def ser(k, d):
    return end_to_end_ser(NetworkModel.symmetric(k, rayleigh(), snr_db=d), qpsk).value


print("QPSK over Rayleigh hops, equal power split")
print("  SNR dB " + "".join(f"{'K=' + str(k):>12}" for k in range(4)))
for d in range(0, 31, 5):
    print(f"  {d:>6} " + "".join(f"{ser(k, d):12.3e}" for k in range(4)))

print("\nslope of log10 SER per decade of SNR over 30-40 dB")
x = np.arange(30.0, 40.1, 1.0)
for k in range(1, 4):
    ex = [math.log10(ser(k, d)) for d in x]
    asy = [math.log10(asymptotic_ser(NetworkModel.symmetric(k, rayleigh(), snr_db=d), qpsk).value) for d in x]
    print(f"  K={k}: exact {-np.polyfit(x / 10, ex, 1)[0]:.3f}   asymptotic {-np.polyfit(x / 10, asy, 1)[0]:.3f}")

at = {k: brentq(lambda d: math.log(ser(k, d) / 1e-4), 0, 80) for k in range(4)}
print("\nSNR needed for SER = 1e-4, and the gain over direct transmission")
for k in range(4):
    print(f"  K={k}: {at[k]:6.2f} dB   gain {at[0] - at[k]:5.2f} dB")
