"""Sparse Hamiltonians of the East-West chain family.

All builders return real symmetric ``csr_matrix`` operators over the full
``2**L`` computational basis (see :mod:`eastwest.core` for conventions).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .core import ChainGeometry, OPEN, PERIODIC, _freeze, bit, string_operator


@dataclass(frozen=True)
class ModelParams:
    geom: ChainGeometry
    g: float = 0.0
    t1: float = 1.0
    t2: float = 1.0
    F: float = 0.0
    alpha: int = 1

    def __post_init__(self):
        if not np.isfinite(self.g) or self.g < 0:
            raise ValueError("g must be finite and >= 0")
        if int(self.alpha) != self.alpha or self.alpha < 1:
            raise ValueError("alpha must be an integer >= 1")


def _bonds(geom: ChainGeometry):
    """Bonds ``(i, i+1)``: ``1..L`` on a ring, ``1..L-1`` on an open chain."""
    last = geom.L if geom.periodic else geom.L - 1
    return [(i, geom.site(i + 1)) for i in range(1, last + 1)]


def _centres(geom: ChainGeometry):
    """Sites with both neighbours present: all on a ring, ``2..L-1`` when open."""
    if geom.periodic:
        return [(geom.site(j - 1), j, geom.site(j + 1)) for j in range(1, geom.L + 1)]
    return [(j - 1, j, j + 1) for j in range(2, geom.L)]


def hpx_terms(geom: ChainGeometry):
    for i, j in _bonds(geom):
        yield 1.0, {i: "P", j: "X"}
        yield 1.0, {i: "X", j: "P"}


def hpxp_terms(geom: ChainGeometry):
    for a, j, b in _centres(geom):
        yield 1.0, {a: "P", j: "X", b: "P"}


def build_hpx(geom: ChainGeometry) -> sp.csr_matrix:
    """East-West Hamiltonian ``sum_i (P_i X_{i+1} + X_i P_{i+1})``."""
    return string_operator(geom.L, hpx_terms(geom))


def build_hpxp(geom: ChainGeometry) -> sp.csr_matrix:
    """Stabilizer ``sum_j P_{j-1} X_j P_{j+1}`` (interior sites on an open chain)."""
    if geom.periodic and geom.L < 3:
        raise ValueError("ring too short for a three-site term")
    return string_operator(geom.L, hpxp_terms(geom))


def build_hpx_g(geom: ChainGeometry, g: float) -> sp.csr_matrix:
    """``H_PX + g H_PXP``."""
    if not np.isfinite(g):
        raise ValueError("g must be finite")
    terms = list(hpx_terms(geom))
    if g != 0:
        terms += [(g * c, f) for c, f in hpxp_terms(geom)]
    return string_operator(geom.L, terms)


def build_ssh(geom: ChainGeometry, t1: float, t2: float, g: float = 0.0) -> sp.csr_matrix:
    """Dimerized open chain.

    ``sum_{i=1}^{L-2} (t1 P_i X_{i+1} + t2 X_i P_{i+1}) + t1 P_{L-1} X_L``
    plus ``g sum_{i=2}^{L-1} P_{i-1} X_i P_{i+1}``. There is deliberately no
    ``X_{L-1} P_L`` term, so ``|A_L>`` decouples from the ring.
    """
    if geom.boundary != OPEN:
        raise ValueError("the dimerized chain is defined with open boundaries")
    L = geom.L
    if L < 3:
        raise ValueError("need L >= 3")
    terms = []
    for i in range(1, L - 1):
        terms.append((t1, {i: "P", i + 1: "X"}))
        terms.append((t2, {i: "X", i + 1: "P"}))
    terms.append((t1, {L - 1: "P", L: "X"}))
    if g != 0:
        terms += [(g * c, f) for c, f in hpxp_terms(geom)]
    return string_operator(L, terms)


def bloch_diagonal(geom: ChainGeometry, F: float) -> np.ndarray:
    """Diagonal of ``F sum_m (m P_m - (m + 1/2) P_m P_{m+1})``; the pair ``(L, 1)`` wraps."""
    if not geom.periodic:
        raise ValueError("the tilt is defined on a periodic ring")
    L = geom.L
    s = np.arange(1 << L, dtype=np.int64)
    diag = np.zeros(s.size)
    for m in range(1, L + 1):
        zero_m = (s & bit(L, m)) == 0
        zero_next = (s & bit(L, geom.site(m + 1))) == 0
        diag += m * zero_m - (m + 0.5) * (zero_m & zero_next)
    return F * diag


def build_bloch_tilt(geom: ChainGeometry, F: float) -> sp.csr_matrix:
    return _freeze(sp.diags(bloch_diagonal(geom, F), format="csr"))


def build_bloch(geom: ChainGeometry, F: float, g: float = 0.0) -> sp.csr_matrix:
    """Tilted model ``H_PX + g H_PXP + dH_Bloch``."""
    return _freeze((build_hpx_g(geom, g) + build_bloch_tilt(geom, F)).tocsr())


def build_blockade(geom: ChainGeometry, alpha: int, g: float = 0.0) -> sp.csr_matrix:
    """Blockade-range family with projector strings of length ``alpha``.

    ``sum_i (P_{i-alpha+1}..P_i X_{i+1} + X_i P_{i+1}..P_{i+alpha})
    + g sum_i P_{i-alpha}..P_{i-1} X_i P_{i+1}..P_{i+alpha}``, indices mod L.
    """
    if not geom.periodic:
        raise ValueError("the blockade family is defined on a periodic ring")
    alpha = int(alpha)
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    L = geom.L
    if L <= 2 * alpha + 2:
        raise ValueError(f"L={L} too short for blockade range alpha={alpha}")
    site = geom.site
    terms = []
    for i in range(1, L + 1):
        left = {site(i - a): "P" for a in range(alpha)}
        left[site(i + 1)] = "X"
        right = {site(i + a): "P" for a in range(1, alpha + 1)}
        right[i] = "X"
        terms += [(1.0, left), (1.0, right)]
        if g != 0:
            pxp = {site(i + a): "P" for a in range(-alpha, alpha + 1) if a}
            pxp[i] = "X"
            terms.append((g, pxp))
    return string_operator(L, terms)


def split_parent(geom: ChainGeometry):
    """Split ``H_PX = H_hop + H_1``.

    ``H_hop = sum_i (N_{i-1} P_i X_{i+1} + X_i P_{i+1} N_{i+2})`` keeps the
    tight-binding subspace invariant; ``H_1 = sum_i h1_terms(i)``.
    """
    if not geom.periodic:
        raise ValueError("the parent split is defined on a periodic ring")
    site = geom.site
    hop = []
    for i in range(1, geom.L + 1):
        hop.append((1.0, {site(i - 1): "N", i: "P", site(i + 1): "X"}))
        hop.append((1.0, {i: "X", site(i + 1): "P", site(i + 2): "N"}))
    h1 = [t for i in range(1, geom.L + 1) for t in h1_terms(geom, i)]
    return string_operator(geom.L, hop), string_operator(geom.L, h1)


def h1_terms(geom: ChainGeometry, i: int):
    site = geom.site
    return [
        (1.0, {site(i - 1): "P", i: "P", site(i + 1): "X"}),
        (1.0, {site(i - 1): "X", i: "P", site(i + 1): "P"}),
    ]


def build_h1_local(geom: ChainGeometry, i: int) -> sp.csr_matrix:
    """Grouped local term ``P_{i-1} P_i X_{i+1} + X_{i-1} P_i P_{i+1}``."""
    return string_operator(geom.L, h1_terms(geom, i))


def build_model(kind: str, geom: ChainGeometry, **params) -> sp.csr_matrix:
    """Dispatch by model name: ``px``, ``px_g``, ``ssh``, ``bloch``, ``blockade``."""
    g = params.get("g", 0.0)
    if kind == "px":
        return build_hpx(geom)
    if kind == "px_g":
        return build_hpx_g(geom, g)
    if kind == "ssh":
        return build_ssh(geom, params["t1"], params["t2"], g)
    if kind == "bloch":
        return build_bloch(geom, params["F"], g)
    if kind == "blockade":
        return build_blockade(geom, params.get("alpha", 1), g)
    raise ValueError(f"unknown model {kind!r}")


__all__ = [
    "ModelParams",
    "PERIODIC",
    "OPEN",
    "build_hpx",
    "build_hpxp",
    "build_hpx_g",
    "build_ssh",
    "bloch_diagonal",
    "build_bloch_tilt",
    "build_bloch",
    "build_blockade",
    "split_parent",
    "build_h1_local",
    "build_model",
]
