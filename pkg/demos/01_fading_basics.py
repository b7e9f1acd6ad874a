"""η–μ fading in a few lines: parameters, reductions, and why h matters.

Run:  python3 demos/01_fading_basics.py
"""
from etamu_relay.fading import EtaMuParams, hH_from_eta, mgf, mgf_hH, rayleigh

print("Format-1 parameters for a few shapes")
for eta in (0.1, 0.5, 1.0, 3.0):
    h, H = hH_from_eta(EtaMuParams(eta, 1.0))
    print(f"  eta={eta:<4}  h={h:.4f}  H={H:+.4f}")

gbar, s = 10.0, 0.7
print("\nRayleigh check: eta=1, mu=0.5 must give M(s) = 1/(1 + s*gbar)")
print(f"  library {mgf(rayleigh(), gbar, s):.12f}   exact {1 / (1 + s * gbar):.12f}")

# the commonly reproduced table entry h = (1 + 1/eta + eta)/4 gives h = 3/4 at eta = 1
h_bad, H_bad = 0.75, 0.0
print(f"  with h = 3/4 instead: {mgf_hH(h_bad, H_bad, 0.5, gbar, s):.12f}  (not Rayleigh)")
