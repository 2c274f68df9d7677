"""Hilbert-space engine for spin-1/2 chains in the computational basis.

Conventions used throughout the package:

* sites are labelled ``1..L``; site 1 is the most significant bit of the
  basis index, so ``index = sum_i b_i 2**(L - i)``;
* bit value 0 is the local state ``|0>``, bit value 1 is ``|1>``;
* ``P = |0><0|``, ``N = |1><1|``, ``X`` is the Pauli flip and ``Z|0> = +|0>``.

State vectors are plain complex numpy arrays over the full ``2**L`` space and
operators are ``scipy.sparse.csr_matrix`` instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

BIT_CONVENTION = "site 1 = most significant bit; bit 0 <-> |0>, bit 1 <-> |1>"

PERIODIC = "periodic"
OPEN = "open"


@dataclass(frozen=True)
class ChainGeometry:
    """Chain length and boundary condition."""

    L: int
    boundary: str = PERIODIC

    def __post_init__(self):
        if self.boundary not in (PERIODIC, OPEN):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if not isinstance(self.L, (int, np.integer)):
            raise TypeError("L must be an integer")
        minimum = 3 if self.boundary == PERIODIC else 2
        if self.L < minimum:
            raise ValueError(f"{self.boundary} chain needs L >= {minimum}, got {self.L}")

    @property
    def periodic(self) -> bool:
        return self.boundary == PERIODIC

    @property
    def dim(self) -> int:
        return 1 << self.L

    def site(self, i: int) -> int:
        """Wrap a (possibly out of range) site label into ``1..L``."""
        return (i - 1) % self.L + 1


def bit(L: int, site: int) -> int:
    """Integer mask selecting ``site`` (1-based)."""
    return 1 << (L - site)


def index_of(bits: Sequence[int] | str) -> int:
    """Basis index of a Fock state given as a bit sequence or a string like ``'110'``."""
    if isinstance(bits, str):
        bits = [int(c) for c in bits]
    index = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"invalid bit value {b!r}")
        index = (index << 1) | int(b)
    return index


def state_of(index: int, L: int) -> tuple[int, ...]:
    """Bit pattern (site 1 first) of basis ``index`` on ``L`` sites."""
    if not 0 <= index < (1 << L):
        raise ValueError(f"index {index} out of range for L={L}")
    return tuple((index >> (L - i)) & 1 for i in range(1, L + 1))


def basis_state(L: int, bits: Sequence[int] | str | int) -> np.ndarray:
    """Normalized computational basis vector."""
    idx = bits if isinstance(bits, (int, np.integer)) else index_of(bits)
    if isinstance(bits, (str, list, tuple)) and len(bits) != L:
        raise ValueError("bit pattern length does not match L")
    v = np.zeros(1 << L, dtype=complex)
    v[idx] = 1.0
    return v


def vacuum(L: int) -> np.ndarray:
    """The all-ones state ``|11...1>``."""
    return basis_state(L, (1 << L) - 1)


def apply(op, v: np.ndarray) -> np.ndarray:
    """Sparse matrix-vector product ``op @ v``; ``v`` is left untouched."""
    v = np.asarray(v)
    if op.shape[1] != v.shape[0]:
        raise ValueError(f"dimension mismatch: operator {op.shape}, vector {v.shape}")
    return op @ v


def _freeze(op: sp.csr_matrix) -> sp.csr_matrix:
    op.sum_duplicates()
    op.sort_indices()
    op.eliminate_zeros()
    for arr in (op.data, op.indices, op.indptr):
        arr.flags.writeable = False
    return op


def string_operator(L: int, terms: Iterable[tuple[float, dict[int, str]]]) -> sp.csr_matrix:
    """Sum of products of single-site ``P``, ``N`` and ``X`` factors.

    Each term is ``(coeff, {site: 'P' | 'N' | 'X'})`` with 1-based sites. A
    site carries at most one factor, so the factors commute and every term
    is a conditioned bit flip. The result is real and returned as CSR.
    """
    dim = 1 << L
    states = np.arange(dim, dtype=np.int64)
    rows, cols, vals = [], [], []
    for coeff, factors in terms:
        if coeff == 0:
            continue
        flip = cond_mask = cond_val = 0
        for site, name in factors.items():
            m = bit(L, site)
            if name == "X":
                flip |= m
            elif name == "P":
                cond_mask |= m
            elif name == "N":
                cond_mask |= m
                cond_val |= m
            else:
                raise ValueError(f"unsupported factor {name!r}")
        src = states[(states & cond_mask) == cond_val]
        rows.append((src ^ flip).astype(np.int32))
        cols.append(src.astype(np.int32))
        vals.append(np.full(src.size, float(coeff)))
    if not rows:
        return _freeze(sp.csr_matrix((dim, dim)))
    op = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim),
    )
    return _freeze(op)


def diagonal_operator(diag: np.ndarray) -> sp.csr_matrix:
    return _freeze(sp.diags(np.asarray(diag), format="csr"))


def permutation_operator(target: np.ndarray) -> sp.csr_matrix:
    """Operator sending basis state ``s`` to ``target[s]``."""
    dim = target.size
    op = sp.csr_matrix(
        (np.ones(dim), (target, np.arange(dim))), shape=(dim, dim)
    )
    return _freeze(op)


def translate_indices(L: int, shift: int = 1) -> np.ndarray:
    """Image of every basis index under translation by ``shift`` sites to the right."""
    shift %= L
    s = np.arange(1 << L, dtype=np.int64)
    if shift == 0:
        return s
    full = (1 << L) - 1
    # site i -> i + shift means bit position L-i -> L-i-shift: a cyclic right rotation
    return ((s >> shift) | (s << (L - shift))) & full


def reflect_indices(L: int) -> np.ndarray:
    """Image of every basis index under spatial inversion ``i -> L + 1 - i``."""
    s = np.arange(1 << L, dtype=np.int64)
    out = np.zeros_like(s)
    for k in range(L):
        out |= ((s >> k) & 1) << (L - 1 - k)
    return out


def popcount(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=np.int64)
    count = np.zeros_like(s)
    while np.any(s):
        count += s & 1
        s = s >> 1
    return count


def chiral_diagonal(L: int) -> np.ndarray:
    """Diagonal of ``prod_i Z_i``: ``(-1)**(number of ones)``."""
    return 1.0 - 2.0 * (popcount(np.arange(1 << L)) & 1)


def staggered_xx(geom: ChainGeometry) -> sp.csr_matrix:
    """``sum_i (-1)**i X_i X_{i+1}`` on an even periodic ring."""
    if not geom.periodic or geom.L % 2:
        raise ValueError("the staggered XX operator needs an even periodic ring")
    L = geom.L
    dim = 1 << L
    states = np.arange(dim, dtype=np.int64)
    rows, vals = [], []
    for i in range(1, L + 1):
        flip = bit(L, i) | bit(L, geom.site(i + 1))
        rows.append(states ^ flip)
        vals.append(np.full(dim, (-1.0) ** i))
    op = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.tile(states, L))),
        shape=(dim, dim),
    )
    return _freeze(op)


def symmetry_ops(geom: ChainGeometry, which: Iterable[str] = ("T", "I", "C", "P")) -> dict:
    """Symmetry operators of the chain as sparse matrices.

    ``T`` translates by one site (periodic only), ``I`` inverts
    ``i -> L + 1 - i``, ``C = prod Z_i`` and ``P = sum (-1)**i X_i X_{i+1}``
    (even periodic rings only).
    """
    ops = {}
    for name in which:
        if name == "T":
            if not geom.periodic:
                raise ValueError("translation needs a periodic chain")
            ops["T"] = permutation_operator(translate_indices(geom.L))
        elif name == "I":
            ops["I"] = permutation_operator(reflect_indices(geom.L))
        elif name == "C":
            ops["C"] = diagonal_operator(chiral_diagonal(geom.L))
        elif name == "P":
            ops["P"] = staggered_xx(geom)
        else:
            raise ValueError(f"unknown symmetry {name!r}")
    return ops


def norm(v: np.ndarray) -> float:
    return float(np.linalg.norm(v))


def _region_axes(L: int, region: Iterable[int]) -> list[int]:
    sites = sorted(set(int(i) for i in region))
    if not sites:
        raise ValueError("empty region")
    if sites[0] < 1 or sites[-1] > L:
        raise ValueError("region outside the chain")
    if len(sites) == L:
        raise ValueError("region must be a proper subset of the chain")
    # contiguous on the ring: at most one gap when sites are sorted cyclically
    gaps = sum(1 for a, b in zip(sites, sites[1:] + [sites[0] + L]) if b - a > 1)
    if gaps > 1:
        raise ValueError("region must be contiguous")
    return [i - 1 for i in sites]


def schmidt_values(v: np.ndarray, L: int, region: Iterable[int]) -> np.ndarray:
    axes = _region_axes(L, region)
    rest = [a for a in range(L) if a not in axes]
    psi = np.asarray(v).reshape((2,) * L).transpose(axes + rest)
    m = psi.reshape(1 << len(axes), -1)
    return la.svdvals(m)


def entanglement_entropy(v: np.ndarray, L: int, region: Iterable[int]) -> float:
    """Von Neumann entropy (nats) of a contiguous block of sites.

    On a ring the block may wrap around site ``L``; it then has two cuts.
    """
    nv = np.linalg.norm(v)
    if abs(nv - 1.0) > 1e-10:
        raise ValueError(f"state not normalized (norm={nv!r})")
    lam = schmidt_values(v, L, region) ** 2
    lam = lam[lam > 1e-14]
    return float(max(0.0, -np.sum(lam * np.log(lam))))


def half_chain_region(L: int) -> list[int]:
    return list(range(1, L // 2 + 1))


def is_hermitian(op, tol: float = 1e-12) -> bool:
    diff = op - op.conj().T
    if sp.issparse(diff):
        return diff.nnz == 0 or float(np.max(np.abs(diff.data))) < tol
    return float(np.max(np.abs(diff))) < tol


def max_abs(op) -> float:
    """Largest absolute matrix element (0 for an empty sparse matrix)."""
    if sp.issparse(op):
        op = op.tocsr()
        return float(np.max(np.abs(op.data))) if op.nnz else 0.0
    return float(np.max(np.abs(op))) if np.size(op) else 0.0
