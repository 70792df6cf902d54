"""How fast does channel time-variation die off as the array grows?

The Doppler spread of the pre-compensated channel shrinks roughly like
1/sqrt(M): residual motion comes from the mainlobe width (narrowing like
1/M, weight growing like log M) and the sidelobes. This demo sweeps the
closed form over M, fits the asymptotic model, and prints the log-log
slope, which should sit near -1/2.

Run:  python3 demos/spread_scaling.py
"""

import numpy as np

from beamdoppler import (asymptotic_spread, closed_form_params, fit_scaling,
                         jakes_reference_spread, spread_closed_form)

F_D, R = 1000.0, 0.45
MS = [128, 256, 512, 1024, 2048, 4096]

sigmas = [spread_closed_form(closed_form_params(m, R, F_D)).sigma_ds
          for m in MS]
kappa, slope = fit_scaling(MS, F_D, R)
_, jakes = jakes_reference_spread(F_D)

print(f"peak Doppler {F_D:.0f} Hz -> classical spread {jakes:.0f} rad/s")
print(f"{'M':>6} {'spread rad/s':>14} {'vs classical':>13} {'asymptotic':>12}")
for m, s in zip(MS, sigmas):
    fit = float(asymptotic_spread(m, F_D, kappa))
    print(f"{m:6d} {s:14.1f} {jakes / s:12.1f}x {fit:12.1f}")
print(f"\nlog-log slope: {slope:.3f} (model predicts about -1/2)")
print(f"fitted scale kappa: {kappa:.4f} "
      "(independent of f_d; rescaling f_d leaves it unchanged)")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed, skipping the figure")
else:
    fig, ax = plt.subplots(figsize=(5.2, 3.8))
    ax.loglog(MS, sigmas, "o-", label="closed form")
    ax.loglog(MS, asymptotic_spread(np.array(MS, float), F_D, kappa), "--",
              label=f"asymptotic fit, slope {slope:.2f}")
    ax.set_xlabel("transmit antennas M")
    ax.set_ylabel("Doppler spread [rad/s]")
    ax.legend()
    fig.tight_layout()
    fig.savefig("demos_spread_scaling.png", dpi=130)
    print("wrote demos_spread_scaling.png")
