"""End-to-end uplink: what the Doppler pre-rotation buys at 360 km/h.

Three transmitters share the same beam network and MRC-LS receiver:
  conventional_dfo    no compensation, full Doppler: LS training goes
                      stale within the frame and the error rate floors
  proposed            per-beam pre-rotation: the floor drops with M
  conventional_nodfo  a parked terminal, the noise-only reference

Run:  python3 demos/uplink_ser.py          (takes a couple of minutes)
      python3 demos/uplink_ser.py --quick  (10x fewer frames)
"""

import sys
import time

from beamdoppler import SystemConfig, run_ser_point

FRAMES = 200 if "--quick" in sys.argv else 2000
SNR_DB = 20.0

cfg = SystemConfig()
print(f"16QAM, {cfg.n_blocks} blocks/frame, f_d*T_b = "
      f"{cfg.normalized_max_dfo:.2f}, SNR {SNR_DB:.0f} dB, "
      f"{FRAMES} frames/point\n")

rows = [("conventional_dfo", 128), ("proposed", 128), ("proposed", 256),
        ("proposed", 512), ("conventional_nodfo", 128)]
for scheme, m in rows:
    t0 = time.time()
    pt = run_ser_point(cfg.with_updates(tx_antennas=m), scheme, SNR_DB,
                       FRAMES)
    print(f"{scheme:18s} M={m:4d}  SER = {pt.ser:.2e} ± {pt.ci95:.1e}"
          f"   ({time.time() - t0:.0f} s)")

print("\nreading: uncompensated Doppler is catastrophic; pre-rotation pulls"
      "\nthe floor down by orders of magnitude and it keeps falling with M,"
      "\napproaching the static reference.")
