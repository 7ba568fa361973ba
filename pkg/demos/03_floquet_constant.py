"""The Floquet constant theta of the periodic Hill equation.

With y1 = phi' the periodic solution of the linearized stationary
equation, the second fundamental solution ybar satisfies
ybar(x + 2*pi) = ybar(x) + theta*phi'(x).  theta != 0 certifies that
the kernel of L_Re is simple, and theta < 0 places the zero eigenvalue
in the position that gives exactly one negative eigenvalue.
"""

import numpy as np

from skwave import floquet_theta, isoinertia_sweep
from skwave.waves import default_grid, sample_profile, solve_family

for family, r, k in [("periodic_dn", 1, 0.5), ("periodic_dn_quotient", 2, 0.5)]:
    params = solve_family(family, r, k)
    prof = sample_profile(params, default_grid(params))
    res = floquet_theta(prof)
    print(f"{family} (r={r}, k={k}): omega={res.omega_at:.4f} "
          f"theta={res.theta:.4f}")
    print(f"  ybar(2pi)={res.ybar_end[0]:.6f}, ybar'(2pi)={res.ybar_end[1]:.6f}, "
          f"phi''(0)={res.phi_dd0:.6f}")

print("\ntheta and the operator inertia are constant along each branch")
print("(isoinertia): any change would be flagged as an anomaly.\n")
for family, r, ks in [("periodic_dn", 1, np.linspace(0.15, 0.9, 6)),
                      ("periodic_dn_quotient", 2, [0.25, 0.5, 0.75])]:
    rep = isoinertia_sweep(family, r, ks)
    print(f"{family}:")
    for e in rep.entries:
        print(f"  k={e.k:.2f}: theta={e.theta:9.4f}  "
              f"n_neg={e.n_neg} kernel={e.z_kernel}")
    print(f"  anomalies: {list(rep.anomalies) or 'none'}")
