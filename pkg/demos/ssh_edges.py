"""Edge modes of the dimerized chain embedded in the spin model.

The left mode lives on single-zero states and is an exact eigenstate of
the full Hamiltonian. The right mode lives on double-zero states, which
couple out of the subspace. On a finite chain the left mode keeps a tiny
variance from its tail, of order (t1/t2)**(2L - 2).

    python3 demos/ssh_edges.py
"""

import numpy as np

from eastwest import ChainGeometry, EvolveConfig, TBRing, build_ssh, evolve
from eastwest.spectral import midgap_levels, ssh_projected_spectrum
from eastwest.tb import energy_variance, ssh_edge_modes

L, t1, t2 = 12, 0.6, 1.4
E, _ = ssh_projected_spectrum(L, t1, t2)
print("projected levels:", np.round(E, 3))
print("mid-gap:", midgap_levels(E, t1, t2))

left, right = ssh_edge_modes(L, t1, t2)
ring = TBRing(L, "open")
cfg = EvolveConfig(t_max=20.0, dt_record=5.0, entropy=False)
for g in (0.0, 10.0, 40.0):
    H = build_ssh(ChainGeometry(L, "open"), t1, t2, g)
    FL = evolve(H, left, cfg, ring, periodic=False).fidelity
    FR = evolve(H, right, cfg, ring, periodic=False).fidelity
    print(f"g={g:4.1f}: var(left)={energy_variance(left, H):.1e}  var(right)={energy_variance(right, H):.3f}"
          f"  F_left(20)={FL[-1]:.3f}  F_right(20)={FR[-1]:.3f}")
