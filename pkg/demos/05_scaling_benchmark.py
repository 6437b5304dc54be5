"""Quasi-linear scaling of setup and evaluation time.

Quadruples the frequency (and point count) repeatedly and times the two
phases. Direct summation would grow 16x per step; both phases here grow
close to 4x, i.e. nearly linearly in n.
"""

import numpy as np

from dirfft import RunConfig, run_experiment

rows = []
print("q       n      omega        Ts         Ta          e")
for q in (4, 5, 6):
    row = run_experiment(RunConfig(shape="ellipse", q=q, m_cheb=8, op="S", seed=0))
    rows.append(row)
    print(
        f"{q}  {row.n:7d}   {row.omega:8.1f}   {row.t_setup:7.2f}s   "
        f"{row.t_apply:7.3f}s   {row.err:.2e}"
    )

n = np.array([row.n for row in rows], dtype=float)
alpha_setup = np.polyfit(np.log(n), np.log([row.t_setup for row in rows]), 1)[0]
alpha_apply = np.polyfit(np.log(n), np.log([row.t_apply for row in rows]), 1)[0]
print(f"\nfitted exponents: setup n^{alpha_setup:.2f}, apply n^{alpha_apply:.2f}")
print("(direct summation is n^2; anything near 1 is the quasi-linear regime)")
print("\nthe same sweep is scriptable from the command line, e.g.:")
print("  dirfft --shape ellipse --q 4,5,6 --mc 8 --op S --out scaling.csv -v")
