"""Level-spacing ratios in symmetry sectors.

Translation, inversion and (at g=0, even L) the staggered XX operator P
split the spectrum; only the fully resolved sector should look like GOE.

    python3 demos/level_statistics.py
"""

from eastwest import ChainGeometry, build_hpx
from eastwest.spectral import R_GOE, R_POISSON, SectorSpec, sector_spectrum

print(f"reference: Poisson {R_POISSON:.4f}, GOE {R_GOE:.4f}")
for L in (10, 12, 14):
    geom = ChainGeometry(L)
    H = build_hpx(geom)
    for spec in (SectorSpec(0, 1), SectorSpec(0, 1, 0)):
        res = sector_spectrum(H, geom, spec)
        print(f"L={L:2d}  {spec.label:12s} dim={res.eigenvalues.size:5d}  <r>={res.mean_r:.4f}")
