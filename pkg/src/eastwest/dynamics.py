"""Real-time evolution with a Lanczos propagator and trajectory observables."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
from scipy.signal import find_peaks

from .core import entanglement_entropy, half_chain_region
from .tb import TBRing

log = logging.getLogger(__name__)


class KrylovConvergenceError(RuntimeError):
    """The Lanczos step could not reach the requested tolerance."""


@dataclass(frozen=True)
class EvolveConfig:
    t_max: float
    dt_record: float
    tolerance: float = 1e-10
    krylov_dim: int = 40
    reorthogonalize: bool = False
    entropy: bool = True
    store_states: bool = False

    def __post_init__(self):
        if not 0 < self.tolerance <= 1e-4:
            raise ValueError("tolerance must lie in (0, 1e-4]")
        if self.dt_record <= 0:
            raise ValueError("dt_record must be positive")
        if self.t_max < 0:
            raise ValueError("t_max must be non-negative")
        if self.krylov_dim < 2:
            raise ValueError("krylov_dim must be >= 2")

    @property
    def times(self) -> np.ndarray:
        n = int(np.floor(self.t_max / self.dt_record + 1e-9))
        return self.dt_record * np.arange(n + 1)


@dataclass
class Trajectory:
    times: np.ndarray
    fidelity: np.ndarray
    density: np.ndarray
    leakage: np.ndarray
    entropy: np.ndarray
    xbar: np.ndarray
    energy: np.ndarray
    norm: np.ndarray
    L: int
    periodic: bool = True
    states: list | None = field(default=None, repr=False)

    def as_columns(self) -> dict[str, np.ndarray]:
        cols = {"t": self.times, "F": self.fidelity, "p": self.leakage, "S": self.entropy}
        for i in range(self.L):
            cols[f"P_{i + 1}"] = self.density[:, i]
        cols["xbar"] = self.xbar
        return cols


def _matvec(H):
    if sp.issparse(H) and not np.iscomplexobj(H.data):
        return lambda v: H @ v.real + 1j * (H @ v.imag)
    return lambda v: H @ v


class LanczosPropagator:
    """Short-time propagator ``exp(-i H t)`` on a Krylov space.

    One Lanczos basis is built from the current state and reused for every
    time it can reach within ``tol``; the error estimate is the usual
    ``beta_m |[exp(-i T t) e_1]_m|`` bound. Plain three-term Lanczos is
    accurate for ``exp`` at these basis sizes; ``reorthogonalize`` adds a
    full Gram-Schmidt pass per iteration.
    """

    def __init__(self, H, tol: float = 1e-10, m_max: int = 40, reorthogonalize: bool = False):
        self.H = H
        self.matvec = _matvec(H)
        self.tol = tol
        self.m_max = m_max
        self.reorthogonalize = reorthogonalize

    def basis(self, v: np.ndarray, t_target: float):
        beta0 = np.linalg.norm(v)
        n = v.size
        m_max = min(self.m_max, n)
        Q = np.empty((m_max, n), dtype=complex)
        alpha = np.zeros(m_max)
        beta = np.zeros(m_max)
        Q[0] = v / beta0
        m = m_max
        invariant = False
        for j in range(m_max):
            w = self.matvec(Q[j])
            alpha[j] = np.vdot(Q[j], w).real
            w -= alpha[j] * Q[j]
            if j > 0:
                w -= beta[j - 1] * Q[j - 1]
            if self.reorthogonalize:
                w -= (Q[: j + 1] @ w.conj()).conj() @ Q[: j + 1]
            beta[j] = np.linalg.norm(w)
            if beta[j] < 1e-12 * max(1.0, abs(alpha[j])):
                m, invariant = j + 1, True
                break
            if j + 1 < m_max:
                Q[j + 1] = w / beta[j]
            if j >= 2 and self._error(alpha[: j + 1], beta[: j + 1], t_target, beta0) < self.tol:
                m = j + 1
                break
        return Q[:m], alpha[:m], beta[:m], beta0, invariant

    @staticmethod
    def _eig(alpha, beta):
        if alpha.size == 1:
            return alpha.copy(), np.ones((1, 1))
        return la.eigh_tridiagonal(alpha, beta[:-1])

    def _error(self, alpha, beta, t, beta0) -> float:
        lam, S = self._eig(alpha, beta)
        c = S @ (np.exp(-1j * lam * t) * S[0])
        return float(beta0 * beta[-1] * abs(c[-1]))

    def reach(self, alpha, beta, beta0, invariant, t_target) -> float:
        """Largest time ``<= t_target`` whose error estimate is below ``tol``."""
        if invariant or self._error(alpha, beta, t_target, beta0) <= self.tol:
            return t_target
        lo, hi = 0.0, t_target
        for _ in range(50):
            mid = 0.5 * (lo + hi)
            if self._error(alpha, beta, mid, beta0) <= self.tol:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-6 * t_target:
                break
        return lo

    @staticmethod
    def apply(Q, alpha, beta, beta0, t) -> np.ndarray:
        lam, S = LanczosPropagator._eig(alpha, beta)
        c = S @ (np.exp(-1j * lam * t) * S[0])
        return beta0 * (c @ Q)

    def propagate(self, v: np.ndarray, times) -> list[np.ndarray]:
        """States ``exp(-i H t) v`` at the increasing ``times`` (``>= 0``)."""
        times = np.asarray(times, dtype=float)
        out = []
        t_now = 0.0
        state = np.asarray(v, dtype=complex)
        i = 0
        while i < times.size:
            if times[i] - t_now <= 1e-14:
                out.append(state.copy())
                i += 1
                continue
            horizon = times[-1] - t_now
            Q, a, b, b0, inv = self.basis(state, horizon)
            dt = self.reach(a, b, b0, inv, horizon)
            if dt <= 1e-9 * max(1.0, horizon):
                raise KrylovConvergenceError(
                    f"no progress at t={t_now} with krylov_dim={self.m_max}, tol={self.tol}"
                )
            while i < times.size and times[i] - t_now <= dt + 1e-14:
                out.append(self.apply(Q, a, b, b0, times[i] - t_now))
                i += 1
            if i < times.size:
                state = self.apply(Q, a, b, b0, dt)
                t_now += dt
        return out


def dense_propagate(H, psi0: np.ndarray, times) -> list[np.ndarray]:
    """Reference propagation by full diagonalization (small systems only)."""
    Hd = H.toarray() if sp.issparse(H) else np.asarray(H)
    E, U = np.linalg.eigh(Hd)
    c = U.conj().T @ psi0
    return [U @ (np.exp(-1j * E * t) * c) for t in np.atleast_1d(times)]


def site_zero_density(psi: np.ndarray, L: int | None = None) -> np.ndarray:
    """``<P_i>`` for every site."""
    psi = np.asarray(psi)
    L = int(round(np.log2(psi.size))) if L is None else L
    if psi.size != 1 << L:
        raise ValueError("state dimension does not match L")
    prob = (np.abs(psi) ** 2).reshape((2,) * L)
    out = np.empty(L)
    for i in range(L):
        out[i] = np.take(prob, 0, axis=i).sum()
    return out


def center_of_mass(profile: np.ndarray, L: int | None = None, periodic: bool = True) -> float:
    """Mean position (site units, ``1..L``) of a non-negative profile.

    On a ring the mean is taken on the circle, so the result lies in ``[1, L + 1)``.
    """
    w = np.asarray(profile, dtype=float)
    L = w.size if L is None else L
    if np.any(w < -1e-12):
        raise ValueError("profile must be non-negative")
    if w.sum() <= 0:
        raise ValueError("profile is zero everywhere")
    sites = np.arange(1, L + 1)
    if not periodic:
        return float(w @ sites / w.sum())
    z = w @ np.exp(2j * np.pi * (sites - 1) / L)
    if abs(z) < 1e-12 * w.sum():
        raise ValueError("circular mean undefined for a uniform profile")
    return float(np.angle(z) / (2 * np.pi) * L % L + 1)


def unwrap_positions(xbar: np.ndarray, L: int) -> np.ndarray:
    """Remove jumps by ``L`` from a sequence of circular positions."""
    return np.unwrap(np.asarray(xbar) * 2 * np.pi / L) * L / (2 * np.pi)


def evolve(H, psi0: np.ndarray, cfg: EvolveConfig, ring: TBRing | None = None,
           periodic: bool = True) -> Trajectory:
    """Propagate ``psi0`` under ``H`` and record observables on ``cfg.times``.

    ``ring`` selects the subspace used for the leakage ``p(t)``; it defaults
    to the defect ring of the chain (periodic or open).
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if H.shape != (psi0.size, psi0.size):
        raise ValueError("Hamiltonian and state dimensions differ")
    n0 = np.linalg.norm(psi0)
    if abs(n0 - 1) > 1e-10:
        raise ValueError(f"initial state not normalized (norm={n0})")
    L = int(round(np.log2(psi0.size)))
    if ring is None:
        ring = TBRing(L, "periodic" if periodic else "open")
    times = cfg.times
    prop = LanczosPropagator(H, cfg.tolerance, cfg.krylov_dim, cfg.reorthogonalize)
    region = half_chain_region(L)
    matvec = prop.matvec

    rows = {k: [] for k in ("F", "p", "S", "xbar", "E", "norm", "dens")}
    states = [] if cfg.store_states else None

    def record(psi):
        nrm = np.linalg.norm(psi)
        rows["norm"].append(nrm)
        rows["F"].append(abs(np.vdot(psi0, psi)))
        inside = ring.coefficients(psi)
        rows["p"].append(max(0.0, 1.0 - np.vdot(inside, inside).real / nrm**2))
        rows["E"].append(np.vdot(psi, matvec(psi)).real)
        dens = site_zero_density(psi, L)
        rows["dens"].append(dens)
        try:
            rows["xbar"].append(center_of_mass(dens, L, periodic))
        except ValueError:
            rows["xbar"].append(np.nan)
        rows["S"].append(entanglement_entropy(psi / nrm, L, region) if cfg.entropy else np.nan)
        if states is not None:
            states.append(psi.copy())

    for psi in prop.propagate(psi0, times):
        record(psi)

    return Trajectory(
        times=times,
        fidelity=np.array(rows["F"]),
        density=np.array(rows["dens"]),
        leakage=np.array(rows["p"]),
        entropy=np.array(rows["S"]),
        xbar=np.array(rows["xbar"]),
        energy=np.array(rows["E"]),
        norm=np.array(rows["norm"]),
        L=L,
        periodic=periodic,
        states=states,
    )


def detect_revivals(F, times=None, prominence: float = 1e-3) -> list[tuple[float, float]]:
    """Local maxima of a fidelity series after its first minimum.

    Peaks must rise ``prominence`` above the first minimum; positions are
    refined by a parabola through the three samples around each maximum.
    A flat series yields an empty list.
    """
    F = np.asarray(F, dtype=float)
    if F.size < 3:
        raise ValueError("need at least three samples")
    t = np.arange(F.size, dtype=float) if times is None else np.asarray(times, dtype=float)
    interior = np.arange(1, F.size - 1)
    minima = interior[(F[interior] <= F[interior - 1]) & (F[interior] < F[interior + 1])]
    if minima.size == 0:
        return []
    base = F[minima[0]]
    peaks = []
    for i in range(minima[0] + 1, F.size - 1):
        if F[i] > F[i - 1] and F[i] >= F[i + 1] and F[i] - base > prominence:
            y0, y1, y2 = F[i - 1 : i + 2]
            denom = y0 - 2 * y1 + y2
            shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
            shift = float(np.clip(shift, -0.5, 0.5))
            dt = t[i + 1] - t[i]
            peaks.append((float(t[i] + shift * dt), float(y1 - 0.25 * (y0 - y2) * shift)))
    return peaks


def turning_points(x, times, prominence: float = 0.5) -> list[tuple[float, float, str]]:
    """Refined maxima and minima of a sampled trajectory, in time order.

    Extrema must stand out by ``prominence`` (same units as ``x``).
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(times, dtype=float)
    out = []
    for sign, kind in ((1.0, "max"), (-1.0, "min")):
        idx, _ = find_peaks(sign * x, prominence=prominence)
        for i in idx:
            y0, y1, y2 = x[i - 1 : i + 2]
            denom = y0 - 2 * y1 + y2
            shift = float(np.clip(0.5 * (y0 - y2) / denom, -0.5, 0.5)) if denom else 0.0
            out.append((float(t[i] + shift * (t[i + 1] - t[i])), float(y1 - 0.25 * (y0 - y2) * shift), kind))
    return sorted(out)


def oscillation_periods(x, times, prominence: float = 0.5) -> np.ndarray:
    """Periods from consecutive maxima and from consecutive minima, ordered by end time."""
    pts = turning_points(x, times, prominence)
    periods = []
    for kind in ("max", "min"):
        tk = [p[0] for p in pts if p[2] == kind]
        periods += [(b, b - a) for a, b in zip(tk, tk[1:])]
    return np.array([p for _, p in sorted(periods)])


def window_contrast(x, times, period: float) -> np.ndarray:
    """``max - min`` of ``x`` over successive windows ``[n T, (n+1) T]``."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(times, dtype=float)
    n = int(np.floor(t[-1] / period + 1e-9))
    out = []
    for j in range(n):
        sel = (t >= j * period - 1e-12) & (t <= (j + 1) * period + 1e-12)
        out.append(np.ptp(x[sel]))
    return np.array(out)
