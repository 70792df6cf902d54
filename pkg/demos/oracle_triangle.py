"""Three independent routes to the same Doppler spread.

1. Closed form: analytic moments of the windowed spectral model.
2. Numeric oracle: the exact autocorrelation integral (no approximations),
   sampled on a lag grid and transformed.
3. Monte-Carlo: simulate the equivalent gain process itself, estimate its
   autocorrelation from the ensemble, transform the estimate.

The three must agree pairwise within 15 percent at the reference setup;
this demo reports the actual deviations.

Run:  python3 demos/oracle_triangle.py
"""

import time

from beamdoppler import (closed_form_params, derive_rng,
                         empirical_channel_spread, spread_closed_form,
                         spread_numeric_oracle)

M, R, F_D, TRIALS = 128, 0.45, 1000.0, 500

t0 = time.time()
closed = spread_closed_form(closed_form_params(M, R, F_D)).sigma_ds
t1 = time.time()
numeric = spread_numeric_oracle(M, R, F_D)
t2 = time.time()
empirical, detail = empirical_channel_spread(
    M, R, F_D, derive_rng(2024, "triangle-demo"), trials=TRIALS,
    return_detail=True)
t3 = time.time()

print(f"setup: M = {M}, d/lambda = {R}, f_d = {F_D:.0f} Hz")
print(f"closed form      : {closed:8.2f} rad/s   ({t1 - t0:.2f} s)")
print(f"numeric oracle   : {numeric:8.2f} rad/s   ({t2 - t1:.2f} s)")
print(f"monte-carlo ({TRIALS:3d}) : {empirical:8.2f} rad/s   ({t3 - t2:.1f} s, "
      f"split halves {detail['half_spreads'][0]:.1f} / "
      f"{detail['half_spreads'][1]:.1f})")

pairs = [("closed vs numeric", closed, numeric),
         ("closed vs monte-carlo", closed, empirical),
         ("numeric vs monte-carlo", numeric, empirical)]
for name, a, b in pairs:
    print(f"{name:24s}: {100 * abs(a - b) / min(a, b):5.1f}% apart")
