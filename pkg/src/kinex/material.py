"""Microscopic superconductor response for one homogeneous film region.

Implements the temperature-dependent gap, the broadened (Dynes) density of
states, the complex conductivity sigma(omega, T)/sigma_n by numerical
quadrature of occupation-weighted coherence kernels, and the sheet kinetic
inductance derived from sigma2. Units follow `kinex.constants`: energies in
meV, temperatures in K, angular frequency in rad/s, sheet resistance in
Ohm/square, inductance in pH/square.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import BCS_GAP_RATIO, DOS_CLAMP, HBAR, K_B
from .errors import DomainError, NumericsError

__all__ = [
    "MaterialState",
    "ComplexConductivity",
    "gap_at_temperature",
    "dynes_dos",
    "mb_conductivity",
    "sheet_kinetic_inductance",
]


@dataclass(frozen=True)
class MaterialState:
    """Superconductor parameters of one nanowire region.

    t_c          critical temperature [K]
    delta0       gap at T=0 [meV]; None derives the weak-coupling value
    gamma_ratio  density-of-states broadening Gamma/Delta [dimensionless]
    r_sheet      normal-state sheet resistance [Ohm/sq]
    thickness    film thickness [nm]
    width        wire width [nm]
    """

    t_c: float
    delta0: float | None = None
    gamma_ratio: float = 0.0
    r_sheet: float = 400.0
    thickness: float = 10.0
    width: float = 100.0

    def __post_init__(self):
        if self.t_c <= 0:
            raise DomainError(f"t_c must be positive, got {self.t_c}")
        if self.delta0 is None:
            object.__setattr__(self, "delta0", BCS_GAP_RATIO * K_B * self.t_c)
        if self.delta0 <= 0:
            raise DomainError(f"delta0 must be positive, got {self.delta0}")
        if not 0.0 <= self.gamma_ratio < 1.0:
            raise DomainError(f"gamma_ratio must be in [0, 1), got {self.gamma_ratio}")
        for name in ("r_sheet", "thickness", "width"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")


@dataclass(frozen=True)
class ComplexConductivity:
    """Normalized complex conductivity at one (omega, T) point.

    sigma1_norm = Re sigma / sigma_n, sigma2_norm = Im sigma / sigma_n.
    """

    sigma1_norm: float
    sigma2_norm: float
    omega: float
    temperature: float


def gap_at_temperature(m: MaterialState, t: float) -> float:
    """Interpolated gap Delta(T) [meV].

    Uses the tanh closed form Delta0 * tanh(1.74 * sqrt(T_c/T - 1)), which
    tracks the self-consistent weak-coupling solution to a few percent and
    has smooth derivatives for fitting. Returns 0 at and above T_c.
    """
    if t < 0:
        raise DomainError(f"temperature must be nonnegative, got {t}")
    if t >= m.t_c:
        return 0.0
    if t == 0.0:
        return float(m.delta0)
    return float(m.delta0 * np.tanh(1.74 * np.sqrt(m.t_c / t - 1.0)))


def dynes_dos(e, delta: float, gamma: float):
    """Broadened quasiparticle density of states N(E), normalized to 1.

    N(E) = Re[(E + i*Gamma) / sqrt((E + i*Gamma)^2 - Delta^2)] with the
    branch giving N >= 0. Even in E. The pure-BCS divergence at |E| = Delta
    with Gamma = 0 is clamped to DOS_CLAMP. Accepts scalars or arrays.
    """
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}")
    if gamma < 0:
        raise DomainError(f"gamma must be nonnegative, got {gamma}")
    e = np.asarray(e, dtype=float)
    z = np.abs(e) + 1j * gamma
    root2 = z * z - delta * delta
    with np.errstate(divide="ignore", invalid="ignore"):
        w = z / np.sqrt(root2)
        n = np.real(w)
    # |E| = Delta at Gamma = 0 gives 0/0; clamp the one-sided limit.
    n = np.where(np.isfinite(n), n, DOS_CLAMP)
    n = np.clip(n, 0.0, DOS_CLAMP)
    if n.ndim == 0:
        return float(n)
    return n


def _coherence_parts(e, delta: float, gamma: float):
    """Real/imaginary parts of the two coherence functions at energy e.

    Evaluated at |e| + i*gamma on the principal branch and extended by
    parity: returns (n, a_odd, p_odd, b_even) with
      n      = Re[z / sqrt(z^2 - D^2)]           (even, the DOS)
      a_odd  = sgn(e) * (-Im[z / sqrt(z^2-D^2)]) (odd)
      p_odd  = sgn(e) * Re[D / sqrt(z^2 - D^2)]  (odd, pair DOS)
      b_even = -Im[D / sqrt(z^2 - D^2)]          (even)
    For gamma = 0 these reduce to the textbook BCS kernels with the
    above/below-gap support split.
    """
    e = np.asarray(e, dtype=float)
    sign = np.where(e >= 0.0, 1.0, -1.0)
    z = np.abs(e) + 1j * gamma
    with np.errstate(divide="ignore", invalid="ignore"):
        root = np.sqrt(z * z - delta * delta)
        w = z / root
        v = delta / root
    n = np.clip(np.where(np.isfinite(np.real(w)), np.real(w), DOS_CLAMP), 0.0, DOS_CLAMP)
    a = np.where(np.isfinite(np.imag(w)), -np.imag(w), DOS_CLAMP)
    p = np.where(np.isfinite(np.real(v)), np.real(v), DOS_CLAMP)
    b = np.where(np.isfinite(np.imag(v)), -np.imag(v), DOS_CLAMP)
    return n, sign * a, sign * p, b


def _tanh_half(x, kt: float):
    """tanh(x / 2 k_B T), with the T = 0 sign limit."""
    if kt <= 0:
        return np.sign(x)
    return np.tanh(np.asarray(x) / (2.0 * kt))


_GL_COARSE = np.polynomial.legendre.leggauss(16)
_GL_FINE = np.polynomial.legendre.leggauss(32)


def _gl(f, a, b, rule):
    x, w = rule
    h = 0.5 * (b - a)
    return h * float(np.dot(w, f(0.5 * (a + b) + h * x)))


def _adaptive_panel(f, a, b, tol, max_depth=16):
    """Nested Gauss-Legendre with bisection; vectorized integrand."""
    total = 0.0
    stack = [(a, b, max_depth)]
    while stack:
        lo, hi, depth = stack.pop()
        coarse = _gl(f, lo, hi, _GL_COARSE)
        fine = _gl(f, lo, hi, _GL_FINE)
        err = abs(fine - coarse)
        if err <= tol or hi - lo < 1e-14 * (abs(hi) + abs(lo) + 1.0):
            total += fine
            continue
        if depth == 0:
            raise NumericsError(
                f"quadrature panel [{lo}, {hi}] did not converge (err={err:.3e}, tol={tol:.3e})"
            )
        mid = 0.5 * (lo + hi)
        stack.append((lo, mid, depth - 1))
        stack.append((mid, hi, depth - 1))
    return total


def _integrate(f, a, b, tol, singular_left=False, singular_right=False):
    """Integrate a vectorized kernel over [a, b].

    Inverse-square-root endpoint singularities (the Gamma = 0 gap edges)
    are removed by the substitution E = edge +- u^2 before the adaptive
    Gauss-Legendre pass.
    """
    if b <= a:
        return 0.0
    if singular_left and singular_right:
        mid = 0.5 * (a + b)
        return _integrate(f, a, mid, tol / 2, singular_left=True) + _integrate(
            f, mid, b, tol / 2, singular_right=True
        )
    if singular_left:
        span = np.sqrt(b - a)
        return _adaptive_panel(lambda u: 2.0 * u * f(a + u * u), 0.0, span, tol)
    if singular_right:
        span = np.sqrt(b - a)
        return _adaptive_panel(lambda u: 2.0 * u * f(b - u * u), 0.0, span, tol)
    return _adaptive_panel(f, a, b, tol)


def _integrate_tail(f, start, sign, tol):
    """Map E = start/s, s in (0, 1], for kernels decaying at least as 1/E^3."""

    def g(s):
        e = start / s
        return f(sign * e) * start / (s * s)

    return _adaptive_panel(g, 1e-9, 1.0, tol)


def _split_points(lo, hi, interior):
    pts = sorted(p for p in set(interior) if lo < p < hi)
    edges = [lo] + pts + [hi]
    return list(zip(edges[:-1], edges[1:]))


def _sigma_norm(hw: float, delta: float, gamma: float, kt: float, epsrel: float = 1e-7):
    """sigma1/sigma_n and sigma2/sigma_n by quadrature of the DOS kernels.

    Integrals run over all quasiparticle energies with the occupation
    factors f(E) - f(E + hw) (absorptive part) and tanh((E + hw)/2kT)
    (reactive part); the domain is split at the gap edges +-Delta and
    +-Delta - hw where the Gamma = 0 kernels have integrable singularities.
    """
    if delta <= 0:
        return 1.0, 0.0

    def occ_diff(e):
        return 0.5 * (_tanh_half(e + hw, kt) - _tanh_half(e, kt))

    def kern1(e):
        n, _, p, _ = _coherence_parts(e, delta, gamma)
        n2, _, p2, _ = _coherence_parts(e + hw, delta, gamma)
        return occ_diff(e) * (n * n2 + p * p2)

    def kern2(e):
        _, a, _, b = _coherence_parts(e, delta, gamma)
        n2, _, p2, _ = _coherence_parts(e + hw, delta, gamma)
        return _tanh_half(e + hw, kt) * (a * n2 + b * p2)

    # Gap edges in E (kernel at E) and shifted edges (kernel at E + hw)
    sing = {-delta, delta, -delta - hw, delta - hw} if gamma == 0.0 else set()
    edges = [-delta, delta, -delta - hw, delta - hw, 0.0, -hw]

    # Occupation differences die off on the kT scale beyond the gap edges
    tail = delta + hw + 40.0 * max(kt, hw / 40.0, delta / 40.0)
    scale1 = max(1.0, np.pi * delta / max(hw, 1e-300))
    tol1 = epsrel * scale1 / 16.0
    s1 = 0.0
    for a, b in _split_points(-tail, tail, edges):
        s1 += _integrate(kern1, a, b, tol1, singular_left=a in sing, singular_right=b in sing)

    inner = 3.0 * delta + hw + 10.0 * kt
    tol2 = epsrel * scale1 / 16.0
    s2 = 0.0
    for a, b in _split_points(-inner, inner, edges):
        s2 += _integrate(kern2, a, b, tol2, singular_left=a in sing, singular_right=b in sing)
    if gamma > 0:
        # 1/E^3 tails carry weight only in the broadened case
        s2 += _integrate_tail(kern2, inner, 1.0, tol2)
        s2 += _integrate_tail(kern2, inner, -1.0, tol2)

    return s1 / hw, s2 / hw


def mb_conductivity(m: MaterialState, omega: float, t: float) -> ComplexConductivity:
    """Complex conductivity sigma/sigma_n of the film at (omega, T).

    The quasiparticle and pair kernels use the broadened density of states
    when m.gamma_ratio > 0 (Gamma = gamma_ratio * Delta(T)); for
    gamma_ratio = 0 the quadratures reduce to the standard two-fluid BCS
    result. Normal state (T >= T_c) returns (1, 0).
    """
    if omega <= 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if t < 0:
        raise DomainError(f"temperature must be nonnegative, got {t}")
    delta = gap_at_temperature(m, t)
    if delta <= 0.0:
        return ComplexConductivity(1.0, 0.0, omega, t)
    gamma = m.gamma_ratio * delta
    s1, s2 = _sigma_norm(HBAR * omega, delta, gamma, K_B * t)
    return ComplexConductivity(float(s1), float(s2), omega, t)


def sheet_kinetic_inductance(m: MaterialState, omega: float, t: float) -> float:
    """Kinetic sheet inductance L_sq = R_sheet / (omega * sigma2/sigma_n) [pH/sq].

    Diverges toward T_c as the superfluid response closes; T >= T_c is a
    domain error.
    """
    if t >= m.t_c:
        raise DomainError(f"no superfluid response at t={t} >= t_c={m.t_c}")
    c = mb_conductivity(m, omega, t)
    if c.sigma2_norm <= 0:
        raise NumericsError(f"nonpositive sigma2 at omega={omega}, t={t}")
    return float(m.r_sheet / (omega * c.sigma2_norm) * 1e12)
