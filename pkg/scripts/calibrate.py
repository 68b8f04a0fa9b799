"""Desk-scale calibration sweep: locates the BER curves of every mode.

Development aid for pinning acceptance-test grids; not part of the
package. Writes CSVs under /tmp/calib/.
"""

import logging
import pathlib
import sys
import time

from ffma.experiment import ExperimentSpec, run_experiment

logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)

OUT = pathlib.Path("/tmp/calib")
OUT.mkdir(exist_ok=True)

COMMON = dict(
    n=600, k=5, m=60, snr_ref="esn0", seed=7, workers=2,
    min_frames=200, min_bit_errors=120, batch_frames=100,
)

RUNS = [
    ("sf", dict(system="SF", j_list=(60,), snr_grid=(2.5, 2.75, 3.0, 3.25, 3.5, 3.75, 4.0), max_frames=12000)),
    ("sf30", dict(system="SF", j_list=(30,), snr_grid=(2.5, 2.75, 3.0, 3.25, 3.5, 3.75, 4.0), max_frames=24000)),
    ("sf1", dict(system="SF", j_list=(1,), snr_grid=(-1.0, -0.5, 0.0, 0.5, 1.0), max_frames=40000)),
    ("df60", dict(system="DF", j_list=(60,), snr_grid=(0.25, 0.5, 0.75, 1.0, 1.25, 1.5), max_frames=12000)),
    ("df30", dict(system="DF", j_list=(30,), snr_grid=(-1.0, -0.75, -0.5, -0.25, 0.0, 0.5), max_frames=24000)),
    ("df1", dict(system="DF", j_list=(1,), snr_grid=(-4.5, -4.0, -3.5, -3.0, -2.5), max_frames=40000)),
    ("pa60", dict(system="PA", mu_pas=60.0, j_list=(60,), snr_grid=(-10.5, -10.0, -9.5, -9.0, -8.5), max_frames=12000)),
    ("pa30", dict(system="PA", mu_pas=60.0, j_list=(30,), snr_grid=(-10.5, -10.0, -9.5, -9.0, -8.5), max_frames=24000)),
    ("al60", dict(system="ALOHA", j_list=(60,), snr_grid=(4.0, 4.5, 5.0, 5.5, 6.0), max_frames=60000)),
    ("al30", dict(system="ALOHA", j_list=(30,), snr_grid=(1.0, 1.5, 2.0, 2.5, 3.0), max_frames=60000)),
]

for name, kw in RUNS:
    t0 = time.perf_counter()
    spec = ExperimentSpec(output=str(OUT / f"{name}.csv"), **COMMON, **kw)
    pts = run_experiment(spec)
    print(f"== {name} ({time.perf_counter()-t0:.0f}s)")
    for p in pts:
        print(f"   {p.system} J={p.j_users} {p.snr_db:+.2f} dB: ber={p.ber:.3g} ({p.bit_errors} err / {p.frames} fr)")
print("calibration done")
