"""Symmetry-resolved exact diagonalization and level statistics.

Sectors are labelled by a momentum ``k`` (integer, ``T = exp(2 pi i k / L)``),
an inversion parity ``i = +-1`` and, for ``g = 0`` on even rings, an
eigenvalue ``p`` of ``P = sum_i (-1)**i X_i X_{i+1}``. ``P`` is diagonal in
the ``X`` eigenbasis, so ``p``-resolved sectors are built in the
Hadamard-rotated frame and mapped back with a fast Walsh-Hadamard
transform. ``T`` maps ``p -> -p``, so momentum labels combine with ``p``
only in the ``p = 0`` sector.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .core import (
    ChainGeometry,
    entanglement_entropy,
    half_chain_region,
    popcount,
    reflect_indices,
    translate_indices,
)

log = logging.getLogger(__name__)

R_GOE = 0.5307
R_POISSON = 2 * np.log(2) - 1  # 0.3863

DEFAULT_MEMORY_LIMIT = 4 * 1024**3


class ResourceGuardError(MemoryError):
    """A dense computation would exceed the configured memory budget."""


@dataclass(frozen=True)
class SectorSpec:
    k: int | None = None
    i: int | None = None
    p: int | None = None

    def __post_init__(self):
        if self.i not in (None, 1, -1):
            raise ValueError("inversion parity must be +1 or -1")

    @property
    def label(self) -> str:
        parts = [f"{name}={val}" for name, val in (("k", self.k), ("i", self.i), ("p", self.p)) if val is not None]
        return ",".join(parts) or "full"


@dataclass
class SectorBasis:
    """Orthonormal sector basis as a sparse isometry in the chosen frame."""

    L: int
    spec: SectorSpec
    V: sp.csr_matrix
    frame: str  # "z": computational basis, "x": Hadamard-rotated

    @property
    def dim(self) -> int:
        return self.V.shape[1]

    def to_full(self, vecs: np.ndarray) -> np.ndarray:
        """Map sector coordinates (columns) to computational-basis vectors."""
        out = self.V @ np.asarray(vecs, dtype=complex)
        return fwht(out, self.L) if self.frame == "x" else out

    def from_full(self, v: np.ndarray) -> np.ndarray:
        w = np.asarray(v, dtype=complex)
        if self.frame == "x":
            w = fwht(w, self.L)
        return self.V.conj().T @ w


@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray
    sector: str
    mean_r: float | None = None
    eigenvectors: np.ndarray | None = None
    entropy: np.ndarray | None = None


def fwht(x: np.ndarray, L: int) -> np.ndarray:
    """Apply ``H^{(x)L}`` (normalized Hadamard on every site) to the leading axis."""
    x = np.asarray(x, dtype=complex)
    shape = x.shape
    y = x.reshape((2,) * L + shape[1:]).copy()
    s = 1 / np.sqrt(2)
    for a in range(L):
        y0 = np.take(y, 0, axis=a)
        y1 = np.take(y, 1, axis=a)
        y = np.stack(((y0 + y1) * s, (y0 - y1) * s), axis=a)
    return y.reshape(shape)


def p_eigenvalues_xframe(L: int) -> np.ndarray:
    """Diagonal of ``P`` in the ``X`` eigenbasis (bit 0 = ``|+>``, bit 1 = ``|->``)."""
    s = np.arange(1 << L, dtype=np.int64)
    x = [1 - 2 * ((s >> (L - i)) & 1) for i in range(1, L + 1)]
    return sum(((-1) ** i) * x[i - 1] * x[i % L] for i in range(1, L + 1))


def p_sector_values(L: int) -> np.ndarray:
    """Distinct eigenvalues of ``P`` (from its spectrum, not from a formula)."""
    return np.unique(p_eigenvalues_xframe(L))


def _check_commutes(H, geom: ChainGeometry, spec: SectorSpec, tol: float = 1e-9):
    rng = np.random.default_rng(0)
    v = rng.normal(size=H.shape[0]) + 1j * rng.normal(size=H.shape[0])
    v /= np.linalg.norm(v)
    Hv = H @ v
    scale = max(1.0, np.linalg.norm(Hv))
    checks = []
    if spec.k is not None:
        T = translate_indices(geom.L)
        checks.append(("T", lambda w: _permute(w, T)))
    if spec.i is not None:
        inv = reflect_indices(geom.L)
        checks.append(("I", lambda w: _permute(w, inv)))
    if spec.p is not None:
        d = p_eigenvalues_xframe(geom.L)
        checks.append(("P", lambda w: fwht(d * fwht(w, geom.L), geom.L)))
    for name, op in checks:
        err = np.linalg.norm(H @ op(v) - op(Hv)) / scale
        if err > tol:
            raise ValueError(f"Hamiltonian does not commute with {name} (residual {err:.2e})")


def _permute(w, target):
    out = np.empty_like(w)
    out[target] = w
    return out


def sector_basis(geom: ChainGeometry, spec: SectorSpec) -> SectorBasis:
    """Symmetry-adapted orthonormal basis for ``spec``."""
    L = geom.L
    if (spec.k is not None or spec.p is not None) and not geom.periodic:
        raise ValueError("momentum and P sectors need a periodic ring")
    if spec.p is not None and L % 2:
        raise ValueError("P sectors need even L")
    if spec.k is not None and spec.p not in (None, 0):
        raise ValueError("translation maps p to -p; momentum only combines with p = 0")
    if spec.i is not None and spec.k is not None and (2 * spec.k) % L:
        raise ValueError("inversion parity is only defined at k = 0 or k = L/2")

    dim = 1 << L
    if spec.p is None:
        configs = np.arange(dim, dtype=np.int64)
        frame = "z"
    else:
        configs = np.flatnonzero(p_eigenvalues_xframe(L) == spec.p).astype(np.int64)
        frame = "x"
    if configs.size == 0:
        return SectorBasis(L, spec, sp.csr_matrix((dim, 0)), frame)

    # group elements I^a T^l acting on configs, with characters
    shifts = range(L) if spec.k is not None else [0]
    flips = (0, 1) if spec.i is not None else (0,)
    inv = reflect_indices(L)
    images, chars = [], []
    for a in flips:
        for l in shifts:
            img = translate_indices(L, l)[configs] if l else configs
            if a:
                img = inv[img]
            chi = 1.0 + 0j
            if spec.k is not None:
                chi *= np.exp(-2j * np.pi * spec.k * l / L)
            if a:
                chi *= spec.i
            images.append(img)
            chars.append(chi)
    images = np.array(images)
    reps = configs[images.min(axis=0) == configs]
    pos = np.searchsorted(configs, reps)
    rows = images[:, pos].ravel()
    cols = np.tile(np.arange(reps.size), len(chars))
    data = np.repeat(np.array(chars), reps.size)
    V = sp.csr_matrix((data, (rows, cols)), shape=(dim, reps.size))
    norms = np.sqrt(np.asarray(abs(V).power(2).sum(axis=0)).ravel())
    keep = norms > 1e-10
    V = (V[:, keep] @ sp.diags(1 / norms[keep])).tocsr()
    return SectorBasis(L, spec, V, frame)


def sector_project(H, geom: ChainGeometry, spec: SectorSpec, check: bool = True):
    """Dense Hamiltonian block of ``spec`` and its basis."""
    if check:
        _check_commutes(H, geom, spec)
    basis = sector_basis(geom, spec)
    if basis.dim == 0:
        return np.zeros((0, 0)), basis
    if basis.frame == "z":
        block = (basis.V.conj().T @ (H @ basis.V)).toarray()
    else:
        cols = []
        for start in range(0, basis.dim, 32):
            chunk = basis.V[:, start : start + 32].toarray()
            hc = fwht(_apply_cols(H, fwht(chunk, geom.L)), geom.L)
            cols.append(basis.V.conj().T @ hc)
        block = np.hstack(cols)
    block = 0.5 * (block + block.conj().T)
    return block, basis


def _apply_cols(H, X):
    if sp.issparse(H) and not np.iscomplexobj(H.data):
        return H @ X.real + 1j * (H @ X.imag)
    return H @ X


def all_sectors(geom: ChainGeometry, resolve_p: bool = False, inversion: bool = True) -> list[SectorSpec]:
    """A complete, non-overlapping list of sectors."""
    L = geom.L
    specs = []

    def momentum_sectors(p):
        out = []
        for k in range(L):
            if inversion and (2 * k) % L == 0:
                out += [SectorSpec(k, 1, p), SectorSpec(k, -1, p)]
            else:
                out.append(SectorSpec(k, None, p))
        return out

    if not resolve_p:
        return momentum_sectors(None)
    for p in p_sector_values(L):
        p = int(p)
        if p == 0:
            specs += momentum_sectors(0)
        elif inversion:
            specs += [SectorSpec(None, 1, p), SectorSpec(None, -1, p)]
        else:
            specs.append(SectorSpec(None, None, p))
    return specs


def merge_degenerate(E: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    E = np.sort(np.asarray(E, dtype=float))
    if E.size == 0:
        return E
    keep = np.concatenate(([True], np.diff(E) > tol))
    return E[keep]


def r_statistics(eigenvalues, tol: float = 1e-10) -> tuple[float, np.ndarray]:
    """Mean and list of ``r_j = min(s_{j-1}, s_j) / max(s_{j-1}, s_j)``."""
    E = merge_degenerate(eigenvalues, tol)
    if E.size < 10:
        raise ValueError(f"need at least 10 distinct levels, got {E.size}")
    s = np.diff(E)
    r = np.minimum(s[:-1], s[1:]) / np.maximum(s[:-1], s[1:])
    return float(r.mean()), r


def sector_spectrum(H, geom: ChainGeometry, spec: SectorSpec, vectors: bool = False,
                    memory_limit: float = DEFAULT_MEMORY_LIMIT) -> SpectrumResult:
    basis = sector_basis(geom, spec)
    _guard(basis.dim, geom.L if vectors else 0, memory_limit)
    block, basis = sector_project(H, geom, spec)
    if vectors:
        E, U = np.linalg.eigh(block)
    else:
        E, U = np.linalg.eigvalsh(block), None
    mean_r = r_statistics(E)[0] if merge_degenerate(E).size >= 10 else None
    return SpectrumResult(E, spec.label, mean_r, U)


def weighted_mean_r(results: list[SpectrumResult]) -> float:
    """Sector-size weighted average of per-sector mean ``r``."""
    pairs = [(r.mean_r, r.eigenvalues.size) for r in results if r.mean_r is not None]
    w = np.array([n for _, n in pairs], dtype=float)
    return float(np.dot([m for m, _ in pairs], w) / w.sum())


def _guard(dim: int, L: int, limit: float):
    need = 16.0 * dim * dim * 2 + (16.0 * dim * (1 << L) if L else 0)
    if need > limit:
        raise ResourceGuardError(f"dense step needs ~{need / 1e9:.1f} GB (limit {limit / 1e9:.1f} GB)")


def wigner_surmise(s):
    """GOE nearest-neighbour spacing surmise ``(pi/2) s exp(-pi s^2 / 4)``."""
    s = np.asarray(s, dtype=float)
    return 0.5 * np.pi * s * np.exp(-0.25 * np.pi * s**2)


def wigner_surmise_cdf(s):
    return 1.0 - np.exp(-0.25 * np.pi * np.asarray(s, dtype=float) ** 2)


def unfold_spectrum(eigenvalues, degree: int = 10, discard: float = 0.05) -> np.ndarray:
    """Unfolded levels from a polynomial fit of the integrated density of states.

    The fit uses all levels; ``discard`` of the levels at each edge are then dropped.
    """
    E = merge_degenerate(eigenvalues)
    if E.size < 100:
        raise ValueError("need at least 100 levels to unfold")
    staircase = np.arange(1, E.size + 1)
    fit = np.polynomial.Polynomial.fit(E, staircase, degree)
    eps = fit(E)
    if not np.all(np.isfinite(eps)) or np.ptp(eps) == 0:
        raise ValueError("degenerate polynomial fit")
    cut = int(discard * E.size)
    return eps[cut : E.size - cut]


def unfold_and_histogram(eigenvalues, degree: int = 10, bins=None, discard: float = 0.05):
    """Unfolded spacings and their normalized histogram ``(spacings, density, edges)``."""
    s = np.diff(unfold_spectrum(eigenvalues, degree, discard))
    if bins is None:
        bins = np.linspace(0, 4, 41)
    density, edges = np.histogram(s, bins=bins, density=True)
    return s, density, edges


def ks_distance_to_surmise(spacings) -> float:
    s = np.sort(np.asarray(spacings, dtype=float))
    n = s.size
    cdf = wigner_surmise_cdf(s)
    upper = np.arange(1, n + 1) / n - cdf
    lower = cdf - np.arange(n) / n
    return float(max(upper.max(), lower.max()))


def eigen_entropy_scatter(H, geom: ChainGeometry, spec: SectorSpec | None = None,
                          region=None, memory_limit: float = DEFAULT_MEMORY_LIMIT,
                          resolve_degenerate: bool = True):
    """Energies and entanglement entropies ``(E_i, S_i)`` of every eigenstate in a sector.

    Inside degenerate clusters the eigenbasis is fixed by the zero count
    (see :func:`_split_degenerate`); pass ``resolve_degenerate=False`` to keep
    the raw solver output.
    """
    region = half_chain_region(geom.L) if region is None else region
    if spec is None:
        _guard(H.shape[0], 0, memory_limit)
        Hd = H.toarray() if sp.issparse(H) else np.asarray(H)
        E, U = np.linalg.eigh(Hd)
        full = U
    else:
        res = sector_spectrum(H, geom, spec, vectors=True, memory_limit=memory_limit)
        E = res.eigenvalues
        basis = sector_basis(geom, spec)
        full = basis.to_full(res.eigenvectors)
    if resolve_degenerate:
        full = _split_degenerate(E, full, geom.L)
    S = np.array([entanglement_entropy(full[:, j], geom.L, region) for j in range(E.size)])
    return E, S


def _split_degenerate(E, vecs, L, tol: float = 1e-9):
    """Rotate each degenerate cluster to diagonalize the number of zeros ``sum_i P_i``.

    This makes the choice of eigenbasis reproducible; product zero modes
    such as the vacuum come out as clean basis vectors.
    """
    zeros = L - popcount(np.arange(1 << L, dtype=np.int64))
    vecs = vecs.copy()
    start = 0
    while start < E.size:
        stop = start + 1
        while stop < E.size and E[stop] - E[stop - 1] < tol:
            stop += 1
        if stop - start > 1:
            W = vecs[:, start:stop]
            M = W.conj().T @ (zeros[:, None] * W)
            _, R = np.linalg.eigh(0.5 * (M + M.conj().T))
            vecs[:, start:stop] = W @ R
        start = stop
    return vecs


def overlap_spectrum(state: np.ndarray, H, geom: ChainGeometry | None = None,
                     spec: SectorSpec | None = None, memory_limit: float = DEFAULT_MEMORY_LIMIT):
    """``(E_i, |<E_i|state>|^2)`` over the full space or one sector containing ``state``."""
    state = np.asarray(state, dtype=complex)
    nrm = np.linalg.norm(state)
    if abs(nrm - 1) > 1e-10:
        raise ValueError("state not normalized")
    if spec is None:
        _guard(H.shape[0], 0, memory_limit)
        Hd = H.toarray() if sp.issparse(H) else np.asarray(H)
        E, U = np.linalg.eigh(Hd)
        return E, np.abs(U.conj().T @ state) ** 2
    block, basis = sector_project(H, geom, spec)
    c = basis.from_full(state)
    lost = 1 - np.vdot(c, c).real
    if lost > 1e-10:
        raise ValueError(f"state has weight {lost:.2e} outside sector {spec.label}")
    E, U = np.linalg.eigh(block)
    return E, np.abs(U.conj().T @ c) ** 2


def zero_mode_census(H, tol: float = 1e-10, memory_limit: float = DEFAULT_MEMORY_LIMIT):
    """Number of eigenvalues with ``|E| < tol`` and an orthonormal basis of that kernel."""
    _guard(H.shape[0], 0, memory_limit)
    Hd = H.toarray() if sp.issparse(H) else np.asarray(H)
    E, U = np.linalg.eigh(Hd)
    mask = np.abs(E) < tol
    return int(mask.sum()), U[:, mask]


def in_span(v: np.ndarray, basis: np.ndarray) -> float:
    """Norm of the component of ``v`` orthogonal to the columns of ``basis``."""
    return float(np.linalg.norm(v - basis @ (basis.conj().T @ v)))


def chiral_pairing_error(E) -> float:
    """Mismatch between the sorted spectrum and its mirror image ``-E``."""
    E = np.sort(np.asarray(E))
    return float(np.max(np.abs(E + E[::-1])))


def momentum_sector_of_tb_state(L: int, n: int) -> int:
    """Translation label ``k`` (``T = exp(2 pi i k / L)``) of ring momentum state ``|k_n>``.

    Translating the chain by one site moves every defect two ring sites.
    """
    return (-n) % L


def ssh_projected_spectrum(L: int, t1: float, t2: float):
    from .tb import ssh_projected

    return np.linalg.eigh(ssh_projected(L, t1, t2))


def midgap_levels(E, t1: float, t2: float, zero_tol: float = 1e-12) -> np.ndarray:
    """Nonzero levels inside the dimerization gap ``|E| < |t2 - t1|``.

    Exact zeros (the decoupled ``|A_L>``) are excluded.
    """
    E = np.asarray(E)
    gap = abs(abs(t2) - abs(t1))
    return E[(np.abs(E) < 0.5 * gap) & (np.abs(E) > zero_tol)]
