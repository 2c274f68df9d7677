import numpy as np
import pytest

from eastwest.core import ChainGeometry, entanglement_entropy, half_chain_region, vacuum
from eastwest.hamiltonians import build_hpx, build_hpx_g
from eastwest.spectral import (
    R_GOE,
    R_POISSON,
    ResourceGuardError,
    SectorSpec,
    all_sectors,
    chiral_pairing_error,
    eigen_entropy_scatter,
    in_span,
    ks_distance_to_surmise,
    merge_degenerate,
    midgap_levels,
    momentum_sector_of_tb_state,
    overlap_spectrum,
    p_sector_values,
    r_statistics,
    sector_basis,
    sector_project,
    sector_spectrum,
    ssh_projected_spectrum,
    unfold_and_histogram,
    unfold_spectrum,
    weighted_mean_r,
    wigner_surmise,
    zero_mode_census,
)
from eastwest.tb import TBRing, momentum_state, period4_zero_modes


def _goe_levels(dim, rng):
    A = rng.normal(size=(dim, dim))
    return np.linalg.eigvalsh((A + A.T) / 2)


@pytest.mark.parametrize("L", [6, 8, 10])
@pytest.mark.parametrize("resolve_p", [False, True])
def test_sector_completeness_and_reassembly(L, resolve_p):
    geom = ChainGeometry(L)
    H = build_hpx(geom)
    full = np.linalg.eigvalsh(H.toarray())
    parts, dims = [], 0
    for spec in all_sectors(geom, resolve_p=resolve_p):
        block, basis = sector_project(H, geom, spec)
        assert np.allclose(block, block.conj().T, atol=1e-12)
        dims += basis.dim
        parts.append(np.linalg.eigvalsh(block))
    assert dims == 2**L
    assert np.max(np.abs(np.sort(np.concatenate(parts)) - full)) < 1e-9


def test_stabilizer_sectors_reassemble():
    L = 10
    geom = ChainGeometry(L)
    H = build_hpx_g(geom, 10.0)
    full = np.linalg.eigvalsh(H.toarray())
    parts = [np.linalg.eigvalsh(sector_project(H, geom, s)[0]) for s in all_sectors(geom)]
    assert np.max(np.abs(np.sort(np.concatenate(parts)) - full)) < 1e-9
    with pytest.raises(ValueError, match="does not commute"):
        sector_project(H, geom, SectorSpec(0, 1, 0))


def test_p_sector_dimensions():
    # the spectrum of P at L=8 has two states at p=+L, not one: see the notes
    L = 8
    geom = ChainGeometry(L)
    assert list(p_sector_values(L)) == [-8, -4, 0, 4, 8]
    dims = {int(p): sector_basis(geom, SectorSpec(p=int(p))).dim for p in p_sector_values(L)}
    assert dims == {-8: 2, -4: 56, 0: 140, 4: 56, 8: 2}


def test_sector_errors():
    with pytest.raises(ValueError):
        sector_basis(ChainGeometry(8, "open"), SectorSpec(k=0))
    with pytest.raises(ValueError):
        sector_basis(ChainGeometry(7), SectorSpec(p=0))
    with pytest.raises(ValueError):
        sector_basis(ChainGeometry(8), SectorSpec(k=1, i=1))
    with pytest.raises(ValueError):
        SectorSpec(i=2)


def test_r_oracles(rng):
    assert r_statistics(np.arange(50.0))[0] == 1
    E = np.cumsum(rng.exponential(size=100_000))
    assert abs(r_statistics(E)[0] - R_POISSON) < 0.005
    goe = np.concatenate([r_statistics(_goe_levels(400, rng))[1] for _ in range(20)])
    assert abs(goe.mean() - R_GOE) < 0.005
    with pytest.raises(ValueError):
        r_statistics(np.arange(5.0))


def test_merge_degenerate():
    assert np.allclose(merge_degenerate(np.array([0, 1e-12, 1, 2])), [0, 1, 2])


def test_unfolding(rng):
    s = np.diff(unfold_spectrum(np.linspace(-3, 5, 400)))
    assert np.allclose(s, 1, atol=1e-6)
    pooled = []
    for _ in range(10):
        eps = unfold_spectrum(_goe_levels(500, rng))
        pooled.append(np.diff(eps))
    s = np.concatenate(pooled)
    assert abs(s.mean() - 1) < 0.02
    assert ks_distance_to_surmise(s) < 0.05
    s1, density, edges = unfold_and_histogram(_goe_levels(500, rng))
    assert density.size == edges.size - 1 and abs(np.sum(density * np.diff(edges)) - 1) < 0.02
    assert wigner_surmise(0.0) == 0
    with pytest.raises(ValueError):
        unfold_spectrum(np.arange(50.0))


def test_unresolved_spectrum_between_poisson_and_goe():
    L = 12
    E = np.linalg.eigvalsh(build_hpx(ChainGeometry(L)).toarray())
    assert R_POISSON < r_statistics(E)[0] < R_GOE


def test_most_symmetric_sector_l12():
    L = 12
    geom = ChainGeometry(L)
    res = sector_spectrum(build_hpx(geom), geom, SectorSpec(0, 1, 0))
    assert res.eigenvalues.size == 118
    assert R_POISSON < res.mean_r < R_GOE + 0.03
    assert weighted_mean_r([res]) == pytest.approx(res.mean_r)


def test_resource_guard():
    geom = ChainGeometry(10)
    with pytest.raises(ResourceGuardError):
        sector_spectrum(build_hpx(geom), geom, SectorSpec(0, 1), memory_limit=1e3)


@pytest.mark.parametrize("L", [6, 8])
def test_zero_mode_census(L):
    H = build_hpx(ChainGeometry(L))
    count, K = zero_mode_census(H)
    ring = TBRing(L)
    states = [vacuum(L), momentum_state(ring, L // 2), momentum_state(ring, -L // 2)]
    if L % 4 == 0:
        states += period4_zero_modes(L)
    for v in states:
        assert in_span(v, K) < 1e-10
    assert np.linalg.matrix_rank(np.array(states), tol=1e-8) == len(states)
    assert count >= len(states)


def test_census_counts():
    # recorded kernel dimensions at tol 1e-10; they grow much faster than L
    counts = {L: zero_mode_census(build_hpx(ChainGeometry(L)))[0] for L in (6, 8, 10, 12)}
    assert counts == {6: 12, 8: 30, 10: 56, 12: 128}


@pytest.mark.parametrize("g", [0.0, 3.0])
def test_chiral_pairing(g):
    E = np.linalg.eigvalsh(build_hpx_g(ChainGeometry(10), g).toarray())
    assert chiral_pairing_error(E) < 1e-9


def test_ssh_midgap():
    E, _ = ssh_projected_spectrum(18, 0.6, 1.4)
    assert E.size == 35
    mid = midgap_levels(E, 0.6, 1.4)
    assert mid.size == 2
    bulk = E[np.abs(E) > 0.4]
    assert np.min(np.abs(bulk)) > 0.75


def test_overlap_examples():
    L = 10
    geom = ChainGeometry(L)
    H = build_hpx(geom)
    E, U = np.linalg.eigh(H.toarray())
    _, w = overlap_spectrum(U[:, 40], H)
    assert w.max() == pytest.approx(1) and w.sum() == pytest.approx(1, abs=1e-10)
    L = 12
    geom = ChainGeometry(L)
    n = L // 2 + 1
    k = momentum_sector_of_tb_state(L, n)
    psi = momentum_state(TBRing(L), n)
    E, w = overlap_spectrum(psi, build_hpx_g(geom, 10.0), geom, SectorSpec(k))
    assert abs(w.sum() - 1) < 1e-10 and w.max() > 0.9
    E, w = overlap_spectrum(psi, build_hpx(geom), geom, SectorSpec(k))
    assert w[np.abs(E) < 1.0].sum() > 0.9
    with pytest.raises(ValueError):
        overlap_spectrum(psi, build_hpx(geom), geom, SectorSpec((k + 1) % L))


def test_eigen_entropy():
    L = 10
    geom = ChainGeometry(L)
    H = build_hpx(geom)
    E, S = eigen_entropy_scatter(H, geom, SectorSpec(0, 1))
    assert np.any((np.abs(E) < 1e-10) & (S < 1e-10))
    # cross-check a few entropies against the core routine on full-space vectors
    block, basis = sector_project(H, geom, SectorSpec(0, 1))
    Eb, Ub = np.linalg.eigh(block)
    for j in (3, 20, 50):
        if np.min(np.abs(np.delete(Eb, j) - Eb[j])) > 1e-6:
            v = basis.to_full(Ub[:, j])
            s = entanglement_entropy(v / np.linalg.norm(v), L, half_chain_region(L))
            assert s == pytest.approx(S[j], abs=1e-10)


def test_eigen_entropy_outliers():
    L = 12
    geom = ChainGeometry(L)
    E, S = eigen_entropy_scatter(build_hpx(geom), geom, SectorSpec(0, 1, 0))
    window = (np.abs(E) < 1.0) & (np.abs(E) > 1e-9)
    bulk = S[window]
    low = S[np.abs(E) < 1.0]
    assert low.min() < bulk.mean() - 3 * bulk.std()
