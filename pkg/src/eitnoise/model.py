"""Physical scenario definition and semiclassical steady state.

The system is a two-mode optical cavity containing N three-level atoms in
Lambda configuration: one excited level |0> and two ground levels |1>, |2>.
Cavity mode 1 (the pump) is resonant with the 1<->0 transition, mode 2 (the
probe) with 2<->0.  All rates and frequencies are expressed in units of a
reference radiative rate, so a symmetric scenario typically has
gamma_rad_1 = gamma_rad_2 = 1.

Collective atomic variables are sums over atoms: populations Sigma_aa,
coherences Sigma_ab, and the inversion-like combinations
W_j = Sigma_00 - Sigma_jj.  The mean-value (noise-free) equations of motion
are bilinear in the collective variables and the intracavity field
amplitudes alpha_i; their stationary point under resonant driving is the
dark-state solution, in which the excited level is empty, both optical
coherences vanish, and the intracavity fields remain at their configured
amplitudes (the input drives are chosen so that the empty-cavity balance
gives exactly alpha_i).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DegenerateSteadyState, NoConvergence

_TWO_PI = 2.0 * math.pi

#: index order of the 12 fluctuation variables used throughout the package
VARIABLES = (
    "alpha2_conj", "alpha1_conj", "sigma02", "sigma01", "sigma12",
    "w1", "w2", "sigma21", "sigma10", "sigma20", "alpha1", "alpha2",
)

#: index of the conjugate partner of each variable (w1, w2 are real)
CONJUGATE_INDEX = (11, 10, 9, 8, 7, 5, 6, 4, 3, 2, 1, 0)

# slot numbers, for readable matrix assembly
A2C, A1C, S02, S01, S12, W1, W2, S21, S10, S20, A1, A2 = range(12)


@dataclass(frozen=True)
class SqueezeSpec:
    """Squeezed-vacuum input setting for one cavity mode.

    r is the squeeze magnitude (r = 0 means coherent/vacuum input) and
    theta the squeeze phase; theta is normalized into [0, 2*pi).
    """

    r: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta) % _TWO_PI)
        object.__setattr__(self, "r", float(self.r))


@dataclass(frozen=True)
class SystemParams:
    """All physical rates, couplings and input settings of one scenario.

    gamma_rad_1, gamma_rad_2: radiative decay rates of |0> into |1>, |2>.
    gamma_cross: cross-decay coefficient entering only the ground-coherence
        diffusion.  The default 0 is the value under which the numerical
        pipeline reproduces the closed-form reference spectra; see
        ``eitnoise.analysis.gamma_cross_sensitivity`` for the sweep.
    kappa_1, kappa_2: cavity amplitude decay rates of pump and probe modes.
    g_1, g_2: atom-cavity coupling constants.
    n_atoms: number of atoms (the collective variables scale with it).
    alpha_1, alpha_2: intracavity mean-field targets; the Rabi frequencies
        are g_i * alpha_i.
    squeeze_1, squeeze_2: input squeezing of pump and probe.
    """

    gamma_rad_1: float
    gamma_rad_2: float
    kappa_1: float
    kappa_2: float
    g_1: float
    g_2: float
    n_atoms: int
    alpha_1: complex
    alpha_2: complex
    gamma_cross: float = 0.0
    squeeze_1: SqueezeSpec = field(default_factory=SqueezeSpec)
    squeeze_2: SqueezeSpec = field(default_factory=SqueezeSpec)

    @property
    def rabi_1(self) -> complex:
        return self.g_1 * complex(self.alpha_1)

    @property
    def rabi_2(self) -> complex:
        return self.g_2 * complex(self.alpha_2)

    @property
    def is_symmetric(self) -> bool:
        """Equal decay rates, couplings and cavity losses for both modes."""
        return (
            math.isclose(self.gamma_rad_1, self.gamma_rad_2, rel_tol=1e-12)
            and math.isclose(self.g_1, self.g_2, rel_tol=1e-12)
            and math.isclose(self.kappa_1, self.kappa_2, rel_tol=1e-12)
        )

    @property
    def cooperativity(self) -> float | None:
        """g^2 N / (Gamma gamma), defined only in the symmetric regime."""
        if not self.is_symmetric:
            return None
        return self.g_1 ** 2 * self.n_atoms / (self.gamma_rad_1 * self.kappa_1)

    @property
    def closed_form_ready(self) -> bool:
        """True when the closed-form reference spectra apply: symmetric
        regime, coherent pump input, probe squeezed along theta = 0, and
        real non-negative field amplitudes."""
        a1, a2 = complex(self.alpha_1), complex(self.alpha_2)
        return (
            self.is_symmetric
            and abs(self.squeeze_1.r) < 1e-12
            and min(self.squeeze_2.theta, _TWO_PI - self.squeeze_2.theta) < 1e-12
            and abs(a1.imag) < 1e-12 * max(1.0, abs(a1))
            and abs(a2.imag) < 1e-12 * max(1.0, abs(a2))
            and a1.real >= 0.0
            and a2.real >= 0.0
        )


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]
    symmetric: bool
    closed_forms_applicable: bool
    cooperativity: float | None

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_params(p: SystemParams) -> ValidationReport:
    """Check scenario invariants; report-style, never raises."""
    bad = []
    for name in ("gamma_rad_1", "gamma_rad_2", "kappa_1", "kappa_2",
                 "g_1", "g_2"):
        if not getattr(p, name) > 0.0:
            bad.append(f"{name} must be strictly positive")
    if p.gamma_cross < 0.0:
        bad.append("gamma_cross must be non-negative")
    if p.n_atoms < 1:
        bad.append("n_atoms must be at least 1")
    for name in ("squeeze_1", "squeeze_2"):
        if getattr(p, name).r < 0.0:
            bad.append(f"{name}.r must be non-negative")
    return ValidationReport(
        violations=tuple(bad),
        symmetric=p.is_symmetric,
        closed_forms_applicable=p.closed_form_ready,
        cooperativity=p.cooperativity,
    )


@dataclass(frozen=True)
class SteadyState:
    """Mean values around which the dynamics is linearized.

    Populations are stored redundantly with w1/w2 for reporting; the
    conjugate coherences are exposed as properties so conjugate-pair
    consistency holds by construction.
    """

    alpha1: complex
    alpha2: complex
    sigma01: complex
    sigma02: complex
    sigma12: complex
    w1: float
    w2: float
    sigma00: float
    sigma11: float
    sigma22: float
    residual: float = 0.0

    @property
    def sigma10(self) -> complex:
        return self.sigma01.conjugate()

    @property
    def sigma20(self) -> complex:
        return self.sigma02.conjugate()

    @property
    def sigma21(self) -> complex:
        return self.sigma12.conjugate()

    def vector(self) -> np.ndarray:
        """Mean values in the canonical 12-variable order."""
        return np.array([
            self.alpha2.conjugate(), self.alpha1.conjugate(),
            self.sigma02, self.sigma01, self.sigma12,
            self.w1, self.w2,
            self.sigma21, self.sigma10, self.sigma20,
            self.alpha1, self.alpha2,
        ], dtype=complex)


def transparency_drive(p: SystemParams) -> tuple[complex, complex]:
    """External drive amplitudes sqrt(kappa_i) <a_in,i> that hold the
    intracavity means at alpha_i when the optical coherences vanish."""
    return (p.kappa_1 / 2.0 * complex(p.alpha_1),
            p.kappa_2 / 2.0 * complex(p.alpha_2))


def cnumber_rhs(p: SystemParams, v: np.ndarray) -> np.ndarray:
    """Deterministic part of the c-number equations of motion, evaluated on
    a 12-component state vector in canonical order.

    The cavity rows include the fixed transparency drive, so the dark-state
    solution is an exact zero of this function.  Conjugate-variable slots
    are treated as independent components, which is what the linearization
    differentiates.
    """
    a2c, a1c, s02, s01, s12, w1, w2, s21, s10, s20, a1, a2 = v
    g1, g2 = p.g_1, p.g_2
    k1, k2 = p.kappa_1, p.kappa_2
    gs = 0.5 * (p.gamma_rad_1 + p.gamma_rad_2)
    d1, d2 = transparency_drive(p)
    # population factor: N + W1 + W2 equals 3 * Sigma_00 for N atoms
    pop = p.n_atoms + w1 + w2
    c1 = (-2.0 * p.gamma_rad_1 - p.gamma_rad_2) / 3.0
    c2 = (-p.gamma_rad_1 - 2.0 * p.gamma_rad_2) / 3.0

    out = np.empty(12, dtype=complex)
    out[A2C] = 1j * g2 * s02 - 0.5 * k2 * a2c + d2.conjugate()
    out[A1C] = 1j * g1 * s01 - 0.5 * k1 * a1c + d1.conjugate()
    out[S02] = -gs * s02 - 1j * g2 * a2c * w2 + 1j * g1 * a1c * s12
    out[S01] = -gs * s01 - 1j * g1 * a1c * w1 + 1j * g2 * a2c * s21
    out[S12] = 1j * g1 * s02 * a1 - 1j * g2 * s10 * a2c
    out[W1] = (c1 * pop - 2j * g1 * s01 * a1 + 2j * g1 * s10 * a1c
               - 1j * g2 * s02 * a2 + 1j * g2 * s20 * a2c)
    out[W2] = (c2 * pop - 1j * g1 * s01 * a1 + 1j * g1 * s10 * a1c
               - 2j * g2 * s02 * a2 + 2j * g2 * s20 * a2c)
    out[S21] = -1j * g1 * s20 * a1c + 1j * g2 * s01 * a2
    out[S10] = -gs * s10 + 1j * g1 * w1 * a1 - 1j * g2 * s12 * a2
    out[S20] = -gs * s20 + 1j * g2 * w2 * a2 - 1j * g1 * s21 * a1
    out[A1] = -1j * g1 * s10 - 0.5 * k1 * a1 + d1
    out[A2] = -1j * g2 * s20 - 0.5 * k2 * a2 + d2
    return out


def steady_state_residual(p: SystemParams, s: SteadyState) -> float:
    """Euclidean norm of all mean-value right-hand sides at s.

    Exactly zero only at a true stationary point; serves as the
    independent oracle for the analytic and iterative solvers.
    """
    return float(np.linalg.norm(cnumber_rhs(p, s.vector())))


def _dark_state(p: SystemParams) -> SteadyState:
    """Stationary state with all atoms in the field-decoupled ground
    superposition; exact for resonant driving with any decay rates."""
    om1, om2 = p.rabi_1, p.rabi_2
    denom = abs(om1) ** 2 + abs(om2) ** 2
    n = float(p.n_atoms)
    s11 = n * abs(om2) ** 2 / denom
    s22 = n * abs(om1) ** 2 / denom
    s12 = -n * om1 * om2.conjugate() / denom
    return SteadyState(
        alpha1=complex(p.alpha_1), alpha2=complex(p.alpha_2),
        sigma01=0.0 + 0.0j, sigma02=0.0 + 0.0j, sigma12=s12,
        w1=-s11, w2=-s22, sigma00=0.0, sigma11=s11, sigma22=s22,
    )


def _atomic_unknowns(s: SteadyState) -> np.ndarray:
    return np.array([
        s.sigma01.real, s.sigma01.imag, s.sigma02.real, s.sigma02.imag,
        s.sigma12.real, s.sigma12.imag, s.w1, s.w2,
    ])


def _state_from_unknowns(p: SystemParams, x: np.ndarray,
                         residual: float = 0.0) -> SteadyState:
    s01 = complex(x[0], x[1])
    s02 = complex(x[2], x[3])
    s12 = complex(x[4], x[5])
    w1, w2 = float(x[6]), float(x[7])
    s00 = (p.n_atoms + w1 + w2) / 3.0
    return SteadyState(
        alpha1=complex(p.alpha_1), alpha2=complex(p.alpha_2),
        sigma01=s01, sigma02=s02, sigma12=s12, w1=w1, w2=w2,
        sigma00=s00, sigma11=s00 - w1, sigma22=s00 - w2,
        residual=residual,
    )


def _atomic_residual(p: SystemParams, x: np.ndarray) -> np.ndarray:
    s = _state_from_unknowns(p, x)
    rhs = cnumber_rhs(p, s.vector())
    return np.array([
        rhs[S01].real, rhs[S01].imag, rhs[S02].real, rhs[S02].imag,
        rhs[S12].real, rhs[S12].imag, rhs[W1].real, rhs[W2].real,
    ])


def solve_steady_state(p: SystemParams, tol: float = 1e-12,
                       max_iter: int = 200) -> SteadyState:
    """Stationary point of the noise-free equations with fields pinned at
    the configured alpha_i.

    The analytic dark-state branch is exact under resonant driving; a
    damped Newton iteration on the 8 real atomic unknowns is used as a
    fallback when the analytic candidate does not meet tolerance.
    """
    scale = max(abs(p.rabi_1), abs(p.rabi_2))
    if scale < 1e-15:
        raise DegenerateSteadyState(
            "both Rabi frequencies vanish; the ground manifold is a "
            "continuum of stationary states")
    abs_tol = tol * max(1.0, float(p.n_atoms))

    cand = _dark_state(p)
    res = steady_state_residual(p, cand)
    if res <= abs_tol:
        return replace(cand, residual=res)

    # damped Newton with finite-difference Jacobian from the dark state
    x = _atomic_unknowns(cand)
    f = _atomic_residual(p, x)
    h = 1e-7 * max(1.0, float(p.n_atoms))
    for _ in range(max_iter):
        if np.linalg.norm(f) <= abs_tol:
            break
        jac = np.empty((8, 8))
        for j in range(8):
            e = np.zeros(8)
            e[j] = h
            jac[:, j] = (_atomic_residual(p, x + e)
                         - _atomic_residual(p, x - e)) / (2.0 * h)
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence(f"singular Jacobian in Newton solve: {exc}")
        lam = 1.0
        norm0 = np.linalg.norm(f)
        while lam > 1e-8:
            f_new = _atomic_residual(p, x + lam * step)
            if np.linalg.norm(f_new) < norm0:
                x = x + lam * step
                f = f_new
                break
            lam *= 0.5
        else:
            raise NoConvergence("Newton damping failed to reduce residual")
    else:
        raise NoConvergence(
            f"steady-state solve did not reach tolerance {abs_tol:.2e}")

    s = _state_from_unknowns(p, x)
    return replace(s, residual=steady_state_residual(p, s))
