"""The embedded tight-binding subspace and its special states.

The subspace is spanned by single-defect states of the all-ones vacuum:
``A_m`` has ``alpha`` zeros starting at site ``m`` and ``B_m`` has
``alpha + 1`` (``alpha = 1`` for the East-West chain). They are laid out on
a ring ``r = 1..2L`` with ``A_m`` at odd ``r = 2m - 1`` and ``B_m`` at even
``r = 2m``. On an open chain the wrapping ``B_L`` is absent and the ring
becomes the segment ``A_1, B_1, ..., B_{L-1}, A_L``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .core import ChainGeometry, OPEN, PERIODIC, _freeze, bit

TWO_PI = 2.0 * np.pi


def _defect_index(L: int, start: int, length: int) -> int:
    """Basis index of ``length`` zeros from ``start`` (wrapping) in the vacuum."""
    idx = (1 << L) - 1
    for a in range(length):
        idx &= ~bit(L, (start + a - 1) % L + 1)
    return idx


@dataclass(frozen=True)
class TBRing:
    """Index map between ring sites and defect basis states."""

    L: int
    boundary: str = PERIODIC
    alpha: int = 1

    def __post_init__(self):
        ChainGeometry(self.L, self.boundary)
        if self.alpha < 1 or self.L < self.alpha + 2:
            raise ValueError("chain too short for the defect size")

    @property
    def size(self) -> int:
        return 2 * self.L if self.boundary == PERIODIC else 2 * self.L - 1

    @property
    def periodic(self) -> bool:
        return self.boundary == PERIODIC

    def label(self, r: int) -> tuple[str, int]:
        """``('A', m)`` or ``('B', m)`` for ring site ``r`` (1-based)."""
        if not 1 <= r <= self.size:
            raise ValueError(f"ring site {r} out of range")
        return ("A", (r + 1) // 2) if r % 2 else ("B", r // 2)

    def ring_site(self, kind: str, m: int) -> int:
        r = 2 * m - 1 if kind == "A" else 2 * m
        if kind not in ("A", "B") or not 1 <= r <= self.size:
            raise ValueError(f"no ring site for {kind}_{m}")
        return r

    @cached_property
    def fock_indices(self) -> np.ndarray:
        """Basis index of each ring site, ``r = 1..size`` stored at position ``r - 1``."""
        out = np.empty(self.size, dtype=np.int64)
        for r in range(1, self.size + 1):
            kind, m = self.label(r)
            out[r - 1] = _defect_index(self.L, m, self.alpha + (kind == "B"))
        return out

    def a_state(self, m: int) -> np.ndarray:
        return self.embed(_unit(self.size, self.ring_site("A", m)))

    def b_state(self, m: int) -> np.ndarray:
        return self.embed(_unit(self.size, self.ring_site("B", m)))

    def embed(self, coeffs: np.ndarray) -> np.ndarray:
        """Full-space vector with ring amplitudes ``coeffs`` (any envelope)."""
        coeffs = np.asarray(coeffs)
        if coeffs.shape != (self.size,):
            raise ValueError(f"expected {self.size} ring amplitudes")
        v = np.zeros(1 << self.L, dtype=complex)
        v[self.fock_indices] = coeffs
        return v

    def coefficients(self, v: np.ndarray) -> np.ndarray:
        return np.asarray(v)[self.fock_indices].astype(complex)

    @cached_property
    def isometry(self) -> sp.csr_matrix:
        """``2**L x size`` matrix whose columns are the defect basis states."""
        n = self.size
        return _freeze(
            sp.csr_matrix(
                (np.ones(n), (self.fock_indices, np.arange(n))), shape=(1 << self.L, n)
            )
        )


def _unit(n: int, r: int) -> np.ndarray:
    e = np.zeros(n, dtype=complex)
    e[r - 1] = 1.0
    return e


def leaked_index(L: int, m: int) -> int:
    """``|L_m>``: zeros on sites ``m-1, m, m+1``."""
    return _defect_index(L, (m - 2) % L + 1, 3)


def leaked_partner_index(L: int, m: int) -> int:
    """``|Lbar_m>``: zeros on sites ``m-1`` and ``m+1`` only."""
    idx = (1 << L) - 1
    idx &= ~bit(L, (m - 2) % L + 1)
    idx &= ~bit(L, m % L + 1)
    return idx


def tb_projector_weights(v: np.ndarray, ring: TBRing) -> tuple[np.ndarray, float]:
    """Ring amplitudes of ``v`` and its relative weight ``p`` outside the subspace."""
    v = np.asarray(v)
    total = float(np.vdot(v, v).real)
    if total == 0:
        raise ValueError("zero vector")
    coeffs = ring.coefficients(v)
    inside = float(np.vdot(coeffs, coeffs).real)
    p = min(1.0, max(0.0, (total - inside) / total))
    return coeffs, p


def leaked_weight(v: np.ndarray, ring: TBRing) -> float:
    return tb_projector_weights(v, ring)[1]


def tb_matrix(ring: TBRing, hopping: np.ndarray | None = None) -> np.ndarray:
    """Nearest-neighbour hopping matrix on the ring (amplitude 1 by default)."""
    n = ring.size
    bonds = n if ring.periodic else n - 1
    t = np.ones(bonds) if hopping is None else np.asarray(hopping, dtype=float)
    h = np.zeros((n, n))
    for b in range(bonds):
        i, j = b, (b + 1) % n
        h[i, j] = h[j, i] = t[b]
    return h


def h_tb(ring: TBRing):
    """Ring hopping matrix and the same operator embedded in the full space."""
    if not ring.periodic:
        raise ValueError("the uniform ring needs periodic boundaries")
    h = tb_matrix(ring)
    V = ring.isometry
    return h, _freeze((V @ sp.csr_matrix(h) @ V.T).tocsr())


def momentum_grid(L: int) -> np.ndarray:
    """``k_n = pi n / L`` for ``n = -L..L-1``."""
    return np.pi * np.arange(-L, L) / L


def momentum_coefficients(L: int, n: int) -> np.ndarray:
    if not -L <= n <= L - 1:
        raise ValueError(f"momentum index {n} outside -L..L-1")
    r = np.arange(1, 2 * L + 1)
    return np.exp(1j * np.pi * n * r / L) / np.sqrt(2 * L)


def momentum_state(ring: TBRing, n: int) -> np.ndarray:
    """Normalized ring momentum eigenstate ``|k_n>`` embedded in the full space."""
    if not ring.periodic:
        raise ValueError("momentum states need a periodic ring")
    return ring.embed(momentum_coefficients(ring.L, n))


def momentum_index(L: int, k: float) -> int:
    """Grid index ``n`` with ``k = pi n / L`` (mod 2 pi); raises when off-grid."""
    x = k * L / np.pi
    n = int(round(x))
    if abs(x - n) > 1e-9:
        raise ValueError(f"momentum {k} is not on the grid pi*n/{L}")
    return (n + L) % (2 * L) - L


def to_momentum(coeffs: np.ndarray, L: int) -> np.ndarray:
    """Amplitudes ``<k_n|psi>`` for ``n = -L..L-1`` from ring amplitudes."""
    r = np.arange(1, 2 * L + 1)
    k = momentum_grid(L)
    phases = np.exp(-1j * np.outer(k, r)) / np.sqrt(2 * L)
    return phases @ np.asarray(coeffs)


def momentum_operator_form(L: int, n: int) -> np.ndarray:
    """``|k_n>`` built by lowering operators on the vacuum.

    ``(2L)**-1/2 sum_j exp(2 i k j) (exp(-i k) s_j^- + s_j^- s_{j+1}^-)|vac>``.
    Independent of :class:`TBRing`; used as a cross-check.
    """
    k = np.pi * n / L
    vac = (1 << L) - 1
    v = np.zeros(1 << L, dtype=complex)
    for j in range(1, L + 1):
        jn = j % L + 1
        single = vac & ~bit(L, j)
        double = single & ~bit(L, jn)
        phase = np.exp(2j * k * j)
        v[single] += phase * np.exp(-1j * k)
        v[double] += phase
    return v / np.sqrt(2 * L)


@dataclass(frozen=True)
class WavepacketParams:
    """Centre ``m0`` (ring coordinate), radius ``R`` and carrier momentum ``k``."""

    m0: float
    R: int
    k: float

    def __post_init__(self):
        if int(self.R) != self.R or self.R < 1:
            raise ValueError("R must be an integer >= 1")


def ring_distance(r, m0, n: int):
    d = np.abs(np.asarray(r, dtype=float) - m0) % n
    return np.minimum(d, n - d)


def envelope_norm(R: int) -> float:
    return float(np.sqrt((2 * R + 1) / 2 + np.cos(np.pi / (2 * R + 3))))


def envelope(params: WavepacketParams, r, ring_size: int):
    """Compact cosine envelope ``|cos(pi d / (2R+3))| / N`` for ``d <= R``."""
    d = ring_distance(r, params.m0, ring_size)
    w = np.abs(np.cos(np.pi * d / (2 * params.R + 3))) / envelope_norm(params.R)
    return np.where(d <= params.R, w, 0.0)


def wavepacket_coefficients(L: int, params: WavepacketParams, ring_size: int | None = None):
    n = 2 * L if ring_size is None else ring_size
    if 2 * params.R + 1 > n:
        raise ValueError("wavepacket wider than the ring")
    r = np.arange(1, n + 1)
    return envelope(params, r, n) * np.exp(1j * params.k * r)


def wavepacket(ring: TBRing, params: WavepacketParams) -> np.ndarray:
    """Localized defect ``sum_r w(r) exp(i k r) |r>``."""
    return ring.embed(wavepacket_coefficients(ring.L, params, ring.size))


@dataclass(frozen=True)
class ScarParams:
    """Modulation momentum ``q`` and carrier momentum ``k``."""

    q: float
    k: float

    def __post_init__(self):
        if abs(np.sin(self.q)) < 1e-12:
            raise ValueError("q must not be a multiple of pi")


def scar_momenta(L: int, params: ScarParams) -> tuple[int, int]:
    """Grid indices of ``k + q`` and ``k - q``."""
    return momentum_index(L, params.k + params.q), momentum_index(L, params.k - params.q)


def scarred_state(ring: TBRing, params: ScarParams) -> np.ndarray:
    """``(|k+q> + |k-q>)/sqrt(2)``."""
    n1, n2 = scar_momenta(ring.L, params)
    return (momentum_state(ring, n1) + momentum_state(ring, n2)) / np.sqrt(2)


def scar_envelope_state(ring: TBRing, params: ScarParams) -> np.ndarray:
    """The same state written as the envelope ``cos(q r)/sqrt(L)`` times ``exp(i k r)``."""
    r = np.arange(1, ring.size + 1)
    return ring.embed(np.cos(params.q * r) * np.exp(1j * params.k * r) / np.sqrt(ring.L))


def two_packet_state(a: WavepacketParams, b: WavepacketParams, L: int) -> np.ndarray:
    """Tensor product of two wavepackets, each on a half chain of ``L/2`` sites.

    Ring coordinates of each packet are local to its half (``r = 1..L``).
    """
    if L % 2:
        raise ValueError("L must be even")
    half = TBRing(L // 2)
    parts = []
    for params in (a, b):
        c = wavepacket_coefficients(half.L, params, half.size)
        if abs(c[-1]) > 0:
            raise ValueError("wavepacket crosses the edge of its half chain")
        parts.append(half.embed(c))
    return np.kron(parts[0], parts[1])


def ssh_basis(L: int) -> TBRing:
    """Open segment ``A_1, B_1, ..., B_{L-1}, A_L``."""
    return TBRing(L, OPEN)


def ssh_edge_modes(L: int, t1: float, t2: float) -> tuple[np.ndarray, np.ndarray]:
    """Left (A-sublattice) and right (B-sublattice) edge modes of the dimerized chain."""
    if t2 == 0:
        raise ValueError("t2 must be nonzero")
    ring = ssh_basis(L)
    x = -t1 / t2
    m = np.arange(1, L)
    left = np.zeros(ring.size, dtype=complex)
    right = np.zeros(ring.size, dtype=complex)
    left[2 * m - 2] = x ** (m - 1)
    right[2 * m - 1] = x ** ((L - 1) - m)
    left /= np.linalg.norm(left)
    right /= np.linalg.norm(right)
    return ring.embed(left), ring.embed(right)


def ssh_projected(L: int, t1: float, t2: float) -> np.ndarray:
    """Dimerized Hamiltonian restricted to the open segment basis.

    Built from the hopping pattern directly; the test suite checks it
    against ``V^T H V`` of the full operator.
    """
    ring = ssh_basis(L)
    hop = np.zeros(ring.size - 1)
    for m in range(1, L):
        hop[2 * m - 2] = t1  # A_m - B_m
        if m < L - 1:
            hop[2 * m - 1] = t2  # B_m - A_{m+1}
    return tb_matrix(ring, hop)


def droplet_state(L: int, start: int, length: int, sign: int = 1) -> np.ndarray:
    """``|+-pi/2>`` restricted to the block ``start..start+length-1`` (wrapping), vacuum outside.

    The restriction keeps every defect state that lies inside the block.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if not 2 <= length <= L or not 1 <= start <= L:
        raise ValueError("invalid region")
    ring = TBRing(L)
    k = sign * np.pi / 2
    c = np.zeros(ring.size, dtype=complex)
    n_sites = 2 * L if length == L else 2 * length - 1
    for a in range(n_sites):
        r = (2 * start - 2 + a) % ring.size + 1
        c[r - 1] = np.exp(1j * k * r)
    return ring.embed(c / np.linalg.norm(c))


def expectation(v: np.ndarray, H) -> float:
    return float(np.vdot(v, H @ v).real)


def energy_variance(v: np.ndarray, H) -> float:
    """``<H^2> - <H>^2`` clamped at zero."""
    hv = H @ v
    e = np.vdot(v, hv).real
    return float(max(0.0, np.vdot(hv, hv).real - e * e))


def x_basis_product(L: int, signs) -> np.ndarray:
    """Product of ``X`` eigenstates; ``signs[i] = +1`` gives ``(|0>+|1>)/sqrt 2``."""
    plus = np.array([1.0, 1.0]) / np.sqrt(2)
    minus = np.array([1.0, -1.0]) / np.sqrt(2)
    v = np.ones(1, dtype=complex)
    for s in signs:
        v = np.kron(v, plus if s > 0 else minus)
    return v


def period4_zero_modes(L: int) -> list[np.ndarray]:
    """``|++--++--...>`` and its three translations (``L`` a multiple of 4)."""
    if L % 4:
        raise ValueError("L must be a multiple of 4")
    pattern = [1, 1, -1, -1]
    return [x_basis_product(L, [pattern[(i - s) % 4] for i in range(L)]) for s in range(4)]
