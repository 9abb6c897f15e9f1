"""Cross-check the Gaussian engine against brute-force Fock evolution.

The Fock oracle evolves the two-parameter pseudo-density matrix in a
truncated number basis and reads both QFIs off finite-difference
fidelities. For a single lossy driven cavity the two agree to about 1e-6.
"""

from gqfi import IntegratorConfig, build_model, run_trajectory
from gqfi.fock import fidelity_qfis

for name in ("cavity_local", "trapped_local"):
    model = build_model(name, M=1)
    t = 10.0 if name == "cavity_local" else 5.0
    g = run_trajectory(model, IntegratorConfig(dt=0.005, t_max=t, record_stride=10**9))[-1]
    f = fidelity_qfis(model, t=t, cutoff=20, dt=2e-3)
    print(f"\n{name}, t={t:g}")
    for q, gv, fv in (("I_G", g.I_G, f.I_G), ("I_E", g.I_E, f.I_E),
                      ("delta_I", g.delta_I, f.I_G - f.I_E)):
        print(f"  {q:8s} gaussian {gv:12.6f}  fock {fv:12.6f}  rel err {abs(gv - fv) / abs(fv):.1e}")
