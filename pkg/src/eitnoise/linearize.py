"""Linearized fluctuation system: drift matrix B and diffusion matrix D.

Fluctuations delta-O around the steady state obey d(delta O)/dt =
B . delta O + G with delta-noise forces G.  The 12 variables are ordered as
in ``model.VARIABLES``: conjugate fields first, then atomic coherences and
inversions, then the fields, so that slot k and slot CONJUGATE_INDEX[k]
form a conjugate pair.

Conventions
-----------
* B is the exact first-order expansion of the deterministic c-number
  equations: each bilinear X*Y contributes <X> dY + <Y> dX.
* D is the symmetric matrix of plain noise-force pair correlators,
  <G_k(t) G_l(t')> = D[k, l] delta(t - t'), in the normally ordered
  c-number sense.  Atomic entries are linear in the steady-state means;
  the field block carries the squeezed-input correlators (all of which
  vanish for coherent/vacuum inputs, the vacuum unit being restored at
  the reported-spectrum level).  Atomic and field reservoirs are
  independent, so the cross block is zero.
* The ground-coherence sector carries the cross-decay coefficient
  gamma_cross; the closed-form reference spectra correspond to
  gamma_cross = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import EigenFailure, NonStationaryState, SingularLyapunov
from .model import (A1, A1C, A2, A2C, CONJUGATE_INDEX, S01, S02, S10, S12,
                    S20, S21, VARIABLES, W1, W2, SteadyState, SystemParams,
                    steady_state_residual)


def _require_stationary(p: SystemParams, s: SteadyState,
                        tol: float | None) -> None:
    if tol is None:
        tol = 1e-8 * max(1.0, float(p.n_atoms))
    res = steady_state_residual(p, s)
    if res > tol:
        raise NonStationaryState(
            f"residual {res:.3e} exceeds stationarity tolerance {tol:.3e}")


def build_drift(p: SystemParams, s: SteadyState,
                stationarity_tol: float | None = None) -> np.ndarray:
    """12x12 drift matrix of the linearized fluctuation equations."""
    _require_stationary(p, s, stationarity_tol)
    g1, g2 = p.g_1, p.g_2
    om1, om2 = p.rabi_1, p.rabi_2
    gs = 0.5 * (p.gamma_rad_1 + p.gamma_rad_2)
    c1 = (-2.0 * p.gamma_rad_1 - p.gamma_rad_2) / 3.0
    c2 = (-p.gamma_rad_1 - 2.0 * p.gamma_rad_2) / 3.0

    B = np.zeros((12, 12), dtype=complex)
    B[A2C, S02] = 1j * g2
    B[A2C, A2C] = -0.5 * p.kappa_2
    B[A1C, S01] = 1j * g1
    B[A1C, A1C] = -0.5 * p.kappa_1

    B[S02, S02] = -gs
    B[S02, A2C] = -1j * g2 * s.w2
    B[S02, W2] = -1j * om2.conjugate()
    B[S02, A1C] = 1j * g1 * s.sigma12
    B[S02, S12] = 1j * om1.conjugate()

    B[S01, S01] = -gs
    B[S01, A1C] = -1j * g1 * s.w1
    B[S01, W1] = -1j * om1.conjugate()
    B[S01, A2C] = 1j * g2 * s.sigma21
    B[S01, S21] = 1j * om2.conjugate()

    B[S12, S02] = 1j * om1
    B[S12, A1] = 1j * g1 * s.sigma02
    B[S12, S10] = -1j * om2.conjugate()
    B[S12, A2C] = -1j * g2 * s.sigma10

    B[W1, W1] = c1
    B[W1, W2] = c1
    B[W1, S01] = -2j * om1
    B[W1, A1] = -2j * g1 * s.sigma01
    B[W1, S10] = 2j * om1.conjugate()
    B[W1, A1C] = 2j * g1 * s.sigma10
    B[W1, S02] = -1j * om2
    B[W1, A2] = -1j * g2 * s.sigma02
    B[W1, S20] = 1j * om2.conjugate()
    B[W1, A2C] = 1j * g2 * s.sigma20

    B[W2, W1] = c2
    B[W2, W2] = c2
    B[W2, S01] = -1j * om1
    B[W2, A1] = -1j * g1 * s.sigma01
    B[W2, S10] = 1j * om1.conjugate()
    B[W2, A1C] = 1j * g1 * s.sigma10
    B[W2, S02] = -2j * om2
    B[W2, A2] = -2j * g2 * s.sigma02
    B[W2, S20] = 2j * om2.conjugate()
    B[W2, A2C] = 2j * g2 * s.sigma20

    B[S21, S20] = -1j * om1.conjugate()
    B[S21, A1C] = -1j * g1 * s.sigma20
    B[S21, S01] = 1j * om2
    B[S21, A2] = 1j * g2 * s.sigma01

    B[S10, S10] = -gs
    B[S10, W1] = 1j * om1
    B[S10, A1] = 1j * g1 * s.w1
    B[S10, S12] = -1j * om2
    B[S10, A2] = -1j * g2 * s.sigma12

    B[S20, S20] = -gs
    B[S20, W2] = 1j * om2
    B[S20, A2] = 1j * g2 * s.w2
    B[S20, S21] = -1j * om1
    B[S20, A1] = -1j * g1 * s.sigma21

    B[A1, S10] = -1j * g1
    B[A1, A1] = -0.5 * p.kappa_1
    B[A2, S20] = -1j * g2
    B[A2, A2] = -0.5 * p.kappa_2
    return B


def build_diffusion(p: SystemParams, s: SteadyState,
                    stationarity_tol: float | None = None) -> np.ndarray:
    """12x12 symmetric diffusion matrix of the noise forces."""
    _require_stationary(p, s, stationarity_tol)
    g1t, g2t = p.gamma_rad_1, p.gamma_rad_2
    gx = p.gamma_cross
    om1, om2 = p.rabi_1, p.rabi_2

    D = np.zeros((12, 12), dtype=complex)

    def put(i: int, j: int, value: complex) -> None:
        D[i, j] = value
        D[j, i] = value

    # inversion sector; "- c.c." folds to twice the imaginary part
    x = 4.0 * om1 * s.sigma01 + om2 * s.sigma02
    put(W1, W1, (4.0 * g1t + g2t) * s.sigma00 + 2.0 * x.imag)
    y = 4.0 * om2 * s.sigma02 + om1 * s.sigma01
    put(W2, W2, (g1t + 4.0 * g2t) * s.sigma00 + 2.0 * y.imag)
    z = om2 * s.sigma02 + om1 * s.sigma01
    put(W1, W2, 2.0 * (g1t + g2t) * s.sigma00 + 4.0 * z.imag)

    # ground-coherence sector
    put(S12, S21, g1t * s.sigma00 + 2.0 * gx * s.sigma11
        + 2.0 * (om2 * s.sigma12).imag)
    put(S02, S12, -1j * om2.conjugate() * s.sigma12)
    put(S20, S21, (-1j * om2.conjugate() * s.sigma12).conjugate())
    put(S02, S21, gx * s.sigma01)
    put(S20, S12, gx * s.sigma10)

    # inversion/optical-coherence cross terms
    put(W1, S10, 1j * om2 * s.sigma12)
    put(W1, S01, (1j * om2 * s.sigma12).conjugate())
    v = -2j * om1.conjugate() * s.sigma20 + 2j * om2 * s.sigma01
    put(W1, S21, v)
    put(W1, S12, v.conjugate())
    put(W2, S10, -1j * om2 * s.sigma12)
    put(W2, S01, (-1j * om2 * s.sigma12).conjugate())
    v = -1j * om1.conjugate() * s.sigma20 + 1j * om2 * s.sigma01
    put(W2, S21, v)
    put(W2, S12, v.conjugate())

    # optical-coherence sector
    put(S10, S10, 2j * om1 * s.sigma10)
    put(S01, S01, (2j * om1 * s.sigma10).conjugate())
    v = -1j * om1.conjugate() * s.sigma02 - 1j * om2.conjugate() * s.sigma01
    put(S01, S02, v)
    put(S20, S10, v.conjugate())
    put(S20, S20, 2j * om2 * s.sigma20)
    put(S02, S02, (2j * om2 * s.sigma20).conjugate())
    v = (gx * s.sigma02 + 1j * om2 * (s.w1 - s.w2) + 1j * om1 * s.sigma12)
    put(S01, S12, v)
    put(S21, S10, v.conjugate())

    # squeezed-input field noise (normally ordered; vanishes at r = 0)
    for (r, th, kap, ann, cre) in (
            (p.squeeze_1.r, p.squeeze_1.theta, p.kappa_1, A1, A1C),
            (p.squeeze_2.r, p.squeeze_2.theta, p.kappa_2, A2, A2C)):
        cs = math.cosh(r) * math.sinh(r)
        put(ann, ann, -kap * cs * np.exp(1j * th))
        put(cre, cre, -kap * cs * np.exp(-1j * th))
        put(ann, cre, kap * math.sinh(r) ** 2)

    asym = np.abs(D - D.T).max()
    if asym != 0.0:
        raise AssertionError(f"diffusion assembly lost symmetry: {asym}")
    return D


@dataclass(frozen=True)
class FluctuationSystem:
    """Drift and diffusion of the linearized dynamics, plus the variable
    ordering they refer to."""

    ordering: tuple[str, ...]
    drift: np.ndarray
    diffusion: np.ndarray

    @classmethod
    def from_steady_state(cls, p: SystemParams, s: SteadyState,
                          stationarity_tol: float | None = None
                          ) -> "FluctuationSystem":
        return cls(
            ordering=VARIABLES,
            drift=build_drift(p, s, stationarity_tol),
            diffusion=build_diffusion(p, s, stationarity_tol),
        )


def conjugation_permutation() -> np.ndarray:
    """Permutation matrix P mapping each variable to its conjugate partner;
    P conj(B) P = B for conjugate-consistent steady states."""
    P = np.zeros((12, 12))
    P[np.arange(12), list(CONJUGATE_INDEX)] = 1.0
    return P


@dataclass(frozen=True)
class StabilityReport:
    eigenvalues: np.ndarray
    max_real_part: float
    stable: bool
    soft_modes: int
    tolerance: float


def stability_check(fs: FluctuationSystem,
                    tol_factor: float = 1e-9) -> StabilityReport:
    """Eigenvalue test of the drift matrix.

    Stability is judged on real parts; eigenvalues whose real part lies
    within +-tol of zero are counted as soft modes rather than declared
    unstable (the ground-state coherence carries no direct damping and can
    sit numerically at zero).
    """
    try:
        ev = np.linalg.eigvals(fs.drift)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(f"eigendecomposition failed: {exc}")
    tol = tol_factor * max(1.0, float(np.linalg.norm(fs.drift)))
    max_real = float(ev.real.max())
    soft = int(np.sum(np.abs(ev.real) <= tol))
    return StabilityReport(
        eigenvalues=ev,
        max_real_part=max_real,
        stable=bool(max_real < tol),
        soft_modes=soft,
        tolerance=tol,
    )


def lyapunov_covariance(fs: FluctuationSystem,
                        singular_tol: float = 1e-9) -> np.ndarray:
    """Stationary covariance X solving B X + X B^dagger = -D.

    This equals the frequency integral of the spectrum matrix over
    2*pi and serves as the independent consistency oracle for the
    frequency-domain pipeline.
    """
    ev = np.linalg.eigvals(fs.drift)
    tol = singular_tol * max(1.0, float(np.linalg.norm(fs.drift)))
    sums = ev[:, None] + ev[None, :].conjugate()
    if np.abs(sums).min() < tol:
        raise SingularLyapunov(
            "drift matrix has an eigenvalue pair summing to zero")
    if ev.real.max() >= tol:
        raise SingularLyapunov(
            f"drift matrix is not stable (max real part {ev.real.max():.3e})")
    X = scipy.linalg.solve_continuous_lyapunov(fs.drift, -fs.diffusion)
    return X
