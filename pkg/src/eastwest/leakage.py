"""First-order prediction of the weight leaking out of the tight-binding ring.

Within the ring, ``H_PX`` acts as uniform hopping with ``E(k) = 2 cos k``.
Leakage enters only through the ``B`` sites, which couple pairwise to the
three-zero states ``|L_m>``; the stabilizer rotates each ``|L_m>`` inside the
two-level system ``{|L_m>, |Lbar_m>}`` with eigenvalues ``+-1``. Summing the
first-order Dyson amplitude over ``m`` pairs momenta ``k`` and ``k + pi``:

    Lambda(tau) = sum_{0 <= k_n < pi, s = +-} cos^2 k_n
                  |psi_{k_n} F_s(E(k_n)) + psi_{k_n + pi} F_s(E(k_n + pi))|^2

and ``p = Lambda / (1 + Lambda)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tb import TBRing, momentum_grid, tb_projector_weights, to_momentum


@dataclass(frozen=True)
class LeakagePrediction:
    tau: np.ndarray
    p: np.ndarray
    lam: np.ndarray
    g: float
    L: int
    psi0_k: np.ndarray


def f_kernel(E, g, tau, sign: int):
    """``F_s = 2i exp(-i x tau/2) sin(x tau/2) / x`` with ``x = E + s g``.

    At ``x = 0`` the removable singularity gives ``i tau``.
    """
    x = np.asarray(E, dtype=float) + sign * g
    tau = np.asarray(tau, dtype=float)
    half = 0.5 * x * tau
    # sin(x tau/2)/x = (tau/2) sinc(x tau / (2 pi)) in numpy's normalized sinc
    ratio = 0.5 * tau * np.sinc(half / np.pi)
    return 2j * np.exp(-1j * half) * ratio


def dispersion(k):
    return 2.0 * np.cos(k)


def lambda_tau(psi0_k: np.ndarray, L: int, g: float, tau) -> np.ndarray:
    """Leakage coefficient for momentum amplitudes ordered as ``n = -L..L-1``."""
    psi0_k = np.asarray(psi0_k, dtype=complex)
    if psi0_k.shape != (2 * L,):
        raise ValueError(f"expected {2 * L} momentum amplitudes")
    nrm = np.vdot(psi0_k, psi0_k).real
    if abs(nrm - 1.0) > 1e-8:
        raise ValueError(f"momentum amplitudes not normalized (norm^2={nrm})")
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    k = momentum_grid(L)
    # classes {k_n, k_n + pi}: n = 0..L-1 paired with n - L (array offsets L+n and n)
    n = np.arange(L)
    kp, km = k[L + n], k[n]
    amp_p, amp_m = psi0_k[L + n], psi0_k[n]
    weight = np.cos(kp) ** 2
    lam = np.zeros(tau.size)
    for sign in (1, -1):
        fp = f_kernel(dispersion(kp)[:, None], g, tau[None, :], sign)
        fm = f_kernel(dispersion(km)[:, None], g, tau[None, :], sign)
        total = amp_p[:, None] * fp + amp_m[:, None] * fm
        lam += weight @ np.abs(total) ** 2
    return lam


def momentum_amplitudes(psi0: np.ndarray, ring: TBRing) -> np.ndarray:
    """``<k_n|psi0>`` for ``n = -L..L-1``; requires ``psi0`` inside the ring subspace."""
    coeffs, p = tb_projector_weights(psi0, ring)
    if p > 1e-10:
        raise ValueError(f"initial state leaves the tight-binding subspace (p={p:.3g})")
    return to_momentum(coeffs, ring.L)


def p_predict(psi0: np.ndarray, L: int, g: float, tau) -> LeakagePrediction:
    """Predicted leaked weight ``p(tau) = Lambda/(1+Lambda)`` on a grid of times."""
    ring = TBRing(L)
    psik = momentum_amplitudes(psi0, ring)
    psik = psik / np.linalg.norm(psik)
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    lam = lambda_tau(psik, L, g, tau)
    return LeakagePrediction(tau=tau, p=lam / (1.0 + lam), lam=lam, g=g, L=L, psi0_k=psik)


def momentum_leakage_small_tau(L: int, d: int, tau):
    """Leading-order leakage ``2 pi^2 tau^2 (d/L)^2`` of ``|k = pi/2 + pi d / L>`` at ``g = 0``."""
    return 2.0 * np.pi**2 * np.asarray(tau) ** 2 * (d / L) ** 2


def momentum_variance(k):
    """``||Pi_perp H_PX |k>||^2 = 2 cos^2 k``."""
    return 2.0 * np.cos(k) ** 2


def revival_frequency(k: float, q: float) -> float:
    """Revival frequency ``4 |sin k sin q|`` of ``(|k+q> + |k-q>)/sqrt 2``."""
    return float(4.0 * abs(np.sin(k) * np.sin(q)))


def leaked_amplitude_sum(psi0_k: np.ndarray, L: int, s: float) -> np.ndarray:
    """``beta_{m-1}(s) + beta_m(s)`` for ``m = 1..L``: the source of ``|L_m>``.

    ``beta_m(s) = <B_m| exp(-i H_TB s) |psi0>``; the sum is the amplitude fed
    into the three-zero state centred on site ``m``. It vanishes identically
    for states supported on ``k = +-pi/2``.
    """
    k = momentum_grid(L)
    m = np.arange(1, L + 1)
    phases = np.exp(1j * np.outer(2 * m - 1, k))
    return phases @ (np.asarray(psi0_k) * np.exp(-1j * dispersion(k) * s) * 2 * np.cos(k)) / np.sqrt(2 * L)
