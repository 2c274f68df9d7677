import numpy as np
import pytest

from eastwest.core import ChainGeometry, is_hermitian, max_abs, vacuum
from eastwest.hamiltonians import (
    ModelParams,
    bloch_diagonal,
    build_bloch,
    build_blockade,
    build_h1_local,
    build_hpx,
    build_hpx_g,
    build_hpxp,
    build_model,
    build_ssh,
    split_parent,
)
from eastwest.tb import (
    TBRing,
    h_tb,
    leaked_index,
    leaked_partner_index,
    momentum_state,
    period4_zero_modes,
)

from conftest import X, Z, dense_hpx, dense_hpx_g, dense_hpxp, dense_ssh, kron_op, wrap


@pytest.mark.parametrize("L", range(3, 9))
@pytest.mark.parametrize("periodic", [True, False])
def test_hpx_matches_oracle(L, periodic):
    geom = ChainGeometry(L, "periodic" if periodic else "open")
    assert np.max(np.abs(build_hpx(geom).toarray() - dense_hpx(L, periodic))) < 1e-13
    assert np.max(np.abs(build_hpxp(geom).toarray() - dense_hpxp(L, periodic))) < 1e-13


@pytest.mark.parametrize("L, g", [(4, 0.0), (5, 2.5), (8, 10.0)])
def test_hpx_g_matches_oracle(L, g):
    H = build_hpx_g(ChainGeometry(L), g)
    assert np.max(np.abs(H.toarray() - dense_hpx_g(L, g))) < 1e-13
    assert is_hermitian(H)


def test_hpx_g_reduces_and_hermitian():
    geom = ChainGeometry(12)
    assert max_abs(build_hpx_g(geom, 0.0) - build_hpx(geom)) == 0
    assert is_hermitian(build_hpx_g(geom, 10.0))
    with pytest.raises(ValueError):
        build_hpx_g(geom, np.inf)


@pytest.mark.parametrize("L", [3, 6, 11])
def test_vacuum_annihilated(L):
    assert np.linalg.norm(build_hpx(ChainGeometry(L)) @ vacuum(L)) == 0


def test_pauli_decomposition():
    L = 8
    rhs = np.zeros((256, 256))
    for j in range(1, L + 1):
        rhs += 0.5 * (kron_op(L, {j: X}) - kron_op(L, {wrap(L, j - 1): Z, j: X, wrap(L, j + 1): Z}))
    rhs += 2 * dense_hpxp(L)
    assert np.max(np.abs(build_hpx(ChainGeometry(L)).toarray() - rhs)) < 1e-13


def test_stabilizer_annihilates_tb_subspace():
    L = 10
    ring = TBRing(L)
    V = ring.isometry
    assert max_abs(build_hpxp(ChainGeometry(L)) @ V) == 0


def test_stabilizer_two_level_system():
    L = 8
    H = build_hpxp(ChainGeometry(L))
    for m in range(1, L + 1):
        v = np.zeros(1 << L)
        v[leaked_index(L, m)] = 1
        image = H @ v
        assert np.count_nonzero(image) == 1
        assert image[leaked_partner_index(L, m)] == 1


def test_tb_commutes_with_stabilizer():
    L = 10
    _, Htb = h_tb(TBRing(L))
    Hp = build_hpxp(ChainGeometry(L))
    assert max_abs(Htb @ Hp - Hp @ Htb) == 0


@pytest.mark.parametrize("L", [8, 10, 12, 14])
@pytest.mark.parametrize("g", [0.0, 3.0, 10.0])
def test_pi_half_states_survive_stabilizer(L, g):
    H = build_hpx_g(ChainGeometry(L), g)
    ring = TBRing(L)
    for n in (L // 2, -L // 2):
        assert np.linalg.norm(H @ momentum_state(ring, n)) < 1e-12


@pytest.mark.parametrize("L", [8, 12])
def test_period4_zero_modes(L):
    H = build_hpx(ChainGeometry(L))
    for v in period4_zero_modes(L):
        assert np.linalg.norm(H @ v) < 1e-12


def test_ssh_uniform_limit_and_oracle():
    L = 7
    open_geom = ChainGeometry(L, "open")
    # the uniform limit differs from the open H_PX only by the X_{L-1} P_L term
    diff = build_hpx(open_geom) - build_ssh(open_geom, 1.0, 1.0)
    expected = kron_op(L, {L - 1: X, L: np.diag([1.0, 0.0])})
    assert np.max(np.abs(diff.toarray() - expected)) < 1e-13
    H = build_ssh(ChainGeometry(4, "open"), 0.3, 0.7)
    assert np.max(np.abs(H.toarray() - dense_ssh(4, 0.3, 0.7))) < 1e-13
    Hg = build_ssh(ChainGeometry(6, "open"), 0.6, 1.4, g=2.0)
    assert np.max(np.abs(Hg.toarray() - dense_ssh(6, 0.6, 1.4, 2.0))) < 1e-13
    with pytest.raises(ValueError):
        build_ssh(ChainGeometry(6), 0.6, 1.4)


def test_bloch_diagonal_values():
    L, F = 10, 0.6
    geom = ChainGeometry(L)
    d = bloch_diagonal(geom, F)
    ring = TBRing(L)
    assert d[(1 << L) - 1] == 0
    for m in range(1, L + 1):
        assert d[ring.fock_indices[2 * m - 2]] == pytest.approx(F * m)
    for m in range(1, L):
        assert d[ring.fock_indices[2 * m - 1]] == pytest.approx(F * (m + 0.5))
    # the wrap pair (L, 1) enters with the literal coefficients: F (L + 1 - (L + 1/2))
    assert d[ring.fock_indices[2 * L - 1]] == pytest.approx(F * 0.5)
    H = build_bloch(geom, F, g=2.0)
    off = H - build_hpx_g(geom, 2.0)
    assert max_abs(off - np.diag(d)) < 1e-14


def test_blockade_family():
    geom = ChainGeometry(8)
    assert max_abs(build_blockade(geom, 1) - build_hpx(geom)) == 0
    assert max_abs(build_blockade(geom, 1, 4.0) - build_hpx_g(geom, 4.0)) < 1e-14
    H2 = build_blockade(ChainGeometry(9), 2, g=3.0)
    assert np.linalg.norm(H2 @ vacuum(9)) == 0
    assert is_hermitian(H2)


def test_blockade_projection_alpha2():
    L = 9
    ring = TBRing(L, alpha=2)
    V = ring.isometry
    H = build_blockade(ChainGeometry(L), 2)
    proj = (V.T @ H @ V).toarray()
    # |A_m^(2)> (2 zeros) and |B_m^(2)> (3 zeros) form a uniform ring
    n = ring.size
    ring_hop = np.zeros((n, n))
    for r in range(n):
        ring_hop[r, (r + 1) % n] = ring_hop[(r + 1) % n, r] = 1
    assert np.max(np.abs(proj - ring_hop)) < 1e-13


def test_parent_split():
    L = 8
    geom = ChainGeometry(L)
    hop, h1 = split_parent(geom)
    assert max_abs(hop + h1 - build_hpx(geom)) < 1e-13
    L = 12
    geom = ChainGeometry(L)
    ring = TBRing(L)
    states = [vacuum(L), momentum_state(ring, L // 2), momentum_state(ring, -L // 2)]
    for i in range(1, L + 1):
        h = build_h1_local(geom, i)
        for v in states:
            assert np.linalg.norm(h @ v) < 1e-12
    L = 10
    hop, _ = split_parent(ChainGeometry(L))
    V = TBRing(L).isometry
    image = (hop @ V).toarray()
    inside = (V @ (V.T @ image))
    assert np.max(np.abs(image - inside)) < 1e-13


def test_tb_leak_channels():
    L = 10
    H = build_hpx(ChainGeometry(L))
    ring = TBRing(L)
    Pi = ring.isometry
    for m in range(1, L + 1):
        out = H @ ring.a_state(m)
        assert np.linalg.norm(out - Pi @ (Pi.T @ out)) == 0
        out = H @ ring.b_state(m)
        perp = out - Pi @ (Pi.T @ out)
        support = set(np.flatnonzero(np.abs(perp) > 0))
        assert support <= {leaked_index(L, m), leaked_index(L, wrap(L, m + 1))}


def test_model_dispatch_and_params():
    geom = ChainGeometry(6)
    assert max_abs(build_model("px_g", geom, g=2) - build_hpx_g(geom, 2)) == 0
    assert max_abs(build_model("bloch", geom, F=0.5) - build_bloch(geom, 0.5)) == 0
    with pytest.raises(ValueError):
        build_model("ising", geom)
    with pytest.raises(ValueError):
        ModelParams(geom, g=-1)
    with pytest.raises(ValueError):
        build_blockade(ChainGeometry(6), 2)
