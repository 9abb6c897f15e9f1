"""Zero-damping trapped-particle arrays under position measurement.

Without damping the covariance grows linearly in time and so do both QFI
accumulators. Local measurement gives rates linear in M; a single global
measurement gives M^2. Information lost to the system (delta I) is a
fixed fraction of the global QFI in both cases.
"""

import numpy as np

from gqfi.models import build_model
from gqfi.spectral import asymptotic_report

Ms = [4, 8, 16, 32, 60]
for name in ("trapped_local", "trapped_global"):
    print(f"\n{name}")
    print(f"{'M':>4} {'rate_IG':>12} {'rate_IE':>12} {'nbar_rate':>10} {'opt_IG':>12}")
    rg = []
    for M in Ms:
        r = asymptotic_report(build_model(name, M=M), with_dephasing=False)
        rg.append(r.rate_IG)
        print(f"{M:>4} {r.rate_IG:12.4f} {r.rate_IE:12.4f} {r.nbar:10.5f} {r.opt_IG:12.4f}")
    print(f"log-log slope {np.polyfit(np.log(Ms), np.log(rg), 1)[0]:.3f}")
