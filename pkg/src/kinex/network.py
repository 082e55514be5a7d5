"""Forward electrodynamics of a segmented nanowire transmission line.

Per-unit-length line parameters are assembled from the material response
(kinetic sheet inductance, quasiparticle loss), the bias-current
nonlinearity, vortex dynamics under a perpendicular field, and a TLS loss
tangent. Segments cascade as ABCD matrices between two series coupling
capacitors into a matched through line, yielding the two-port scattering
parameters versus frequency at each (I, T, B) working point.

Unit conventions: segment lengths in um, per-length inductance in pH/um,
per-length capacitance in fF/um, coupling capacitance in fF, currents in
uA, fields in T, frequency grids in GHz (angular frequencies in rad/s).
Series impedance is Ohm/um, shunt admittance S/um, so gamma is 1/um.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import material as mat
from .constants import HBAR, K_B
from .depairing import DepairingModel, idep_at_temperature, lk_ratio
from .errors import DomainError, NumericsError
from .material import MaterialState, gap_at_temperature

__all__ = [
    "BiasPoint",
    "VortexParams",
    "TlsParams",
    "Segment",
    "DeviceModel",
    "SweepRecord",
    "LineParameters",
    "vortex_resistivity",
    "line_parameters",
    "abcd_line",
    "abcd_series_capacitor",
    "cascade",
    "abcd_to_s",
    "simulate_s21",
    "device_depairing_current",
]


@dataclass(frozen=True, order=True)
class BiasPoint:
    """One working point of the device: DC current [uA], T [K], field [T]."""

    current: float = 0.0
    temperature: float = 0.0
    field: float = 0.0

    def __post_init__(self):
        if self.current < 0:
            raise DomainError(f"current must be nonnegative, got {self.current}")
        if self.temperature < 0:
            raise DomainError(f"temperature must be nonnegative, got {self.temperature}")
        if self.field < 0:
            raise DomainError(f"field must be nonnegative, got {self.field}")


@dataclass(frozen=True)
class VortexParams:
    """Vortex response: depinning frequency [GHz], flux-flow resistivity
    scale [Ohm*nm per tesla], upper critical field [T]."""

    depinning_freq: float = 3.0
    flux_flow_scale: float = 0.05
    b_c2: float = 15.0

    def __post_init__(self):
        for name in ("depinning_freq", "flux_flow_scale", "b_c2"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")


@dataclass(frozen=True)
class TlsParams:
    """Two-level-system loss: zero-T loss tangent and its quote frequency [GHz]."""

    tan_delta0: float = 0.0
    omega_ref: float = 6.0

    def __post_init__(self):
        if self.tan_delta0 < 0:
            raise DomainError(f"tan_delta0 must be nonnegative, got {self.tan_delta0}")
        if self.omega_ref <= 0:
            raise DomainError(f"omega_ref must be positive, got {self.omega_ref}")


@dataclass(frozen=True)
class Segment:
    """One homogeneous stretch of the nanowire line.

    length in um; squares_per_length defaults to 1/width. fluence is
    bookkeeping metadata for provenance of the disorder state.
    """

    length: float
    material: MaterialState
    depairing: DepairingModel
    fluence: float = 0.0
    l_geo: float = 0.4
    c_shunt: float = 0.05
    squares_per_length: float | None = None

    def __post_init__(self):
        if self.length <= 0:
            raise DomainError(f"length must be positive, got {self.length}")
        if self.l_geo < 0:
            raise DomainError(f"l_geo must be nonnegative, got {self.l_geo}")
        if self.c_shunt <= 0:
            raise DomainError(f"c_shunt must be positive, got {self.c_shunt}")
        if self.squares_per_length is None:
            # width is in nm, lengths in um
            object.__setattr__(self, "squares_per_length", 1e3 / self.material.width)
        if self.squares_per_length <= 0:
            raise DomainError("squares_per_length must be positive")


@dataclass(frozen=True)
class DeviceModel:
    """Ordered segments between two identical series coupling capacitors."""

    segments: tuple[Segment, ...]
    coupling_cap: float = 3.0
    z_ref: float = 50.0
    vortex: VortexParams = field(default_factory=VortexParams)
    tls: TlsParams = field(default_factory=TlsParams)

    def __post_init__(self):
        if not self.segments:
            raise DomainError("device needs at least one segment")
        object.__setattr__(self, "segments", tuple(self.segments))
        if self.coupling_cap <= 0:
            raise DomainError(f"coupling_cap must be positive, got {self.coupling_cap}")
        if self.z_ref <= 0:
            raise DomainError(f"z_ref must be positive, got {self.z_ref}")


@dataclass(frozen=True)
class SweepRecord:
    """A complex two-port spectrum at one bias point.

    freqs is a strictly ascending grid in GHz, s21 the matching complex
    transmission, meta tags the provenance ('simulated' or 'measured').
    """

    freqs: np.ndarray
    s21: np.ndarray
    bias: BiasPoint
    meta: str = "simulated"

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype=float)
        s21 = np.asarray(self.s21, dtype=complex)
        if freqs.ndim != 1 or s21.shape != freqs.shape:
            raise DomainError("freqs and s21 must be 1-d arrays of equal length")
        if freqs.size and not np.all(np.diff(freqs) > 0):
            raise DomainError("freqs must be strictly ascending")
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "s21", s21)


@dataclass(frozen=True)
class LineParameters:
    """Per-unit-length series impedance [Ohm/um] and shunt admittance [S/um]."""

    z_series: complex
    y_shunt: complex

    @property
    def gamma(self) -> complex:
        g = np.sqrt(self.z_series * self.y_shunt)
        return complex(g if g.real >= 0 else -g)

    @property
    def z_char(self) -> complex:
        return complex(np.sqrt(self.z_series / self.y_shunt))


def vortex_resistivity(v: VortexParams, b: float, omega: float) -> complex:
    """Complex flux-flow resistivity contribution [Ohm*nm].

    rho_v = rho_ff(b) / (1 - i w0/w) with rho_ff linear in the field (the
    vortex areal density is b / Phi0); dissipative above the depinning
    frequency w0, reactive below it.
    """
    if b < 0:
        raise DomainError(f"field must be nonnegative, got {b}")
    if omega <= 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if b == 0.0:
        return 0.0 + 0.0j
    omega0 = 2.0 * np.pi * v.depinning_freq * 1e9
    return complex(v.flux_flow_scale * b / (1.0 - 1j * omega0 / omega))


def _tls_loss_tangent(tls: TlsParams | None, omega: float, t: float) -> float:
    if tls is None or tls.tan_delta0 == 0.0:
        return 0.0
    if t <= 0:
        return tls.tan_delta0
    return tls.tan_delta0 * float(np.tanh(HBAR * omega / (2.0 * K_B * t)))


def _segment_response(seg: Segment, bias: BiasPoint, omega: float):
    """Kinetic inductance per length [pH/um] and quasiparticle loss tangent.

    The inductance follows L_sq(omega, T) * lk_ratio(I/I_dep(T)) exactly;
    the loss channel evaluates sigma1/sigma2 at a bias-suppressed gap
    Delta_eff = Delta(T) * sqrt(L_k(0)/L_k(I)), tying quasiparticle
    generation to the superfluid-density suppression near depairing.
    """
    m = seg.material
    t = bias.temperature
    if t >= m.t_c:
        raise DomainError(f"temperature {t} K at or above segment t_c {m.t_c} K")
    idep = idep_at_temperature(seg.depairing, t)
    if bias.current >= idep:
        raise DomainError(
            f"bias {bias.current} uA at or beyond depairing current {idep:.4g} uA"
        )
    ratio = lk_ratio(seg.depairing, bias.current / idep)

    delta = gap_at_temperature(m, t)
    kt = K_B * t
    gamma = m.gamma_ratio * delta
    s1, s2 = mat._sigma_norm(HBAR * omega, delta, gamma, kt)
    if s2 <= 0:
        raise NumericsError(f"nonpositive sigma2 for segment at omega={omega}")
    l_sq = m.r_sheet / (omega * s2) * 1e12  # pH/sq
    l_kin = seg.squares_per_length * l_sq * ratio

    if ratio > 1.0:
        delta_eff = delta / np.sqrt(ratio)
        s1_eff, s2_eff = mat._sigma_norm(HBAR * omega, delta_eff, m.gamma_ratio * delta_eff, kt)
        qp_tan = s1_eff / s2_eff
    else:
        qp_tan = s1 / s2
    return l_kin, qp_tan


def line_parameters(
    seg: Segment,
    bias: BiasPoint,
    omega: float,
    vortex: VortexParams | None = None,
    tls: TlsParams | None = None,
) -> LineParameters:
    """Per-unit-length series impedance and shunt admittance of a segment.

    Series inductance is l_geo plus the biased kinetic term; series
    resistance collects the quasiparticle channel (sigma1), the vortex
    flux-flow channel, and the TLS loss tangent applied to the reactive
    part. Shunt admittance is the purely capacitive i omega c_shunt.
    """
    if omega <= 0:
        raise DomainError(f"omega must be positive, got {omega}")
    l_kin, qp_tan = _segment_response(seg, bias, omega)
    l_total = seg.l_geo + l_kin  # pH/um
    x_series = omega * l_total * 1e-12  # Ohm/um
    r_qp = omega * l_kin * 1e-12 * qp_tan

    r_v = 0.0
    x_v = 0.0
    if vortex is not None and bias.field > 0.0:
        if bias.field >= vortex.b_c2:
            raise DomainError(f"field {bias.field} T at or above b_c2 {vortex.b_c2} T")
        rho = vortex_resistivity(vortex, bias.field, omega)
        area = seg.material.width * seg.material.thickness  # nm^2
        # Ohm*nm / nm^2 = Ohm/nm = 1e3 Ohm/um
        r_v = rho.real / area * 1e3
        x_v = rho.imag / area * 1e3

    r_tls = _tls_loss_tangent(tls, omega, bias.temperature) * x_series

    z = complex(r_qp + r_v + r_tls, x_series + x_v)
    y = 1j * omega * seg.c_shunt * 1e-15  # S/um
    return LineParameters(z_series=z, y_shunt=y)


def abcd_line(gamma: complex, z_char: complex, length: float) -> np.ndarray:
    """ABCD matrix of a uniform line: cosh/sinh form, det = 1."""
    if length < 0:
        raise DomainError(f"length must be nonnegative, got {length}")
    gl = gamma * length
    ch, sh = np.cosh(gl), np.sinh(gl)
    return np.array([[ch, z_char * sh], [sh / z_char, ch]], dtype=complex)


def abcd_series_capacitor(c: float, omega: float) -> np.ndarray:
    """ABCD matrix of a series capacitor, c in fF."""
    if c <= 0:
        raise DomainError(f"capacitance must be positive, got {c}")
    if omega <= 0:
        raise DomainError(f"omega must be positive, got {omega}")
    b = 1.0 / (1j * omega * c * 1e-15)
    return np.array([[1.0, b], [0.0, 1.0]], dtype=complex)


def cascade(matrices: Sequence[np.ndarray]) -> np.ndarray:
    """Left-to-right product of ABCD matrices (port 1 side first)."""
    mats = list(matrices)
    if not mats:
        raise ValueError("cascade needs at least one matrix")
    out = np.asarray(mats[0], dtype=complex)
    for m in mats[1:]:
        out = out @ np.asarray(m, dtype=complex)
    return out


def abcd_to_s(m: np.ndarray, z_ref: float) -> np.ndarray:
    """Standard ABCD -> S conversion against a real reference impedance."""
    if z_ref <= 0:
        raise DomainError(f"z_ref must be positive, got {z_ref}")
    a, b, c, d = m[..., 0, 0], m[..., 0, 1], m[..., 1, 0], m[..., 1, 1]
    b_n = b / z_ref
    c_n = c * z_ref
    denom = a + b_n + c_n + d
    if np.any(denom == 0):
        raise NumericsError("singular ABCD -> S denominator")
    s = np.empty(np.shape(denom) + (2, 2), dtype=complex)
    s[..., 0, 0] = (a + b_n - c_n - d) / denom
    s[..., 0, 1] = 2.0 * (a * d - b * c) / denom
    s[..., 1, 0] = 2.0 / denom
    s[..., 1, 1] = (-a + b_n - c_n + d) / denom
    return s


def device_depairing_current(dev: DeviceModel, t: float) -> float:
    """Device-level depairing bias: the minimum over segments at T."""
    return min(idep_at_temperature(s.depairing, t) for s in dev.segments)


# Number of frequency nodes at which the (slowly varying) material response
# is sampled before interpolation onto the full grid.
_RESPONSE_NODES = 12


def _abcd_line_array(gamma: np.ndarray, z_char: np.ndarray, length: float) -> np.ndarray:
    gl = gamma * length
    ch, sh = np.cosh(gl), np.sinh(gl)
    out = np.empty(gamma.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = ch
    out[..., 0, 1] = z_char * sh
    out[..., 1, 0] = sh / z_char
    out[..., 1, 1] = ch
    return out


def simulate_s21(dev: DeviceModel, bias: BiasPoint, freqs: Sequence[float]) -> SweepRecord:
    """Complex S21 of the full cascade over a frequency grid [GHz].

    The kinetic response of each segment is sampled at a handful of
    frequency nodes and interpolated (it varies on the scale of the gap
    frequency, far wider than any sweep window); the cascade itself is
    evaluated exactly per frequency point. Deterministic, |S21| <= 1 for
    passive parameter sets.
    """
    freqs = np.asarray(freqs, dtype=float)
    if freqs.ndim != 1 or freqs.size < 2:
        raise DomainError("freqs must be a 1-d grid with at least two points")
    if not np.all(np.diff(freqs) > 0):
        raise DomainError("freqs must be strictly ascending")
    omegas = 2.0 * np.pi * freqs * 1e9

    nodes = np.linspace(omegas[0], omegas[-1], _RESPONSE_NODES)
    seg_profiles = []
    response_cache: dict = {}
    for idx, seg in enumerate(dev.segments):
        key = (seg.material, seg.depairing, seg.squares_per_length)
        if key not in response_cache:
            try:
                samples = [_segment_response(seg, bias, w) for w in nodes]
            except DomainError as err:
                raise DomainError(f"segment {idx}: {err}") from err
            response_cache[key] = (
                np.interp(omegas, nodes, [s[0] for s in samples]),
                np.interp(omegas, nodes, [s[1] for s in samples]),
            )
        l_kin, qp_tan = response_cache[key]
        seg_profiles.append((seg, l_kin, qp_tan))

    tls_tan = np.array([_tls_loss_tangent(dev.tls, w, bias.temperature) for w in nodes])
    tls_tan = np.interp(omegas, nodes, tls_tan)

    chain = None
    cap = np.empty((omegas.size, 2, 2), dtype=complex)
    cap[:, 0, 0] = 1.0
    cap[:, 0, 1] = 1.0 / (1j * omegas * dev.coupling_cap * 1e-15)
    cap[:, 1, 0] = 0.0
    cap[:, 1, 1] = 1.0

    chain = cap
    for seg, l_kin, qp_tan in seg_profiles:
        l_total = seg.l_geo + l_kin
        x_series = omegas * l_total * 1e-12
        r = omegas * l_kin * 1e-12 * qp_tan + tls_tan * x_series
        x_extra = np.zeros_like(x_series)
        if bias.field > 0.0:
            if bias.field >= dev.vortex.b_c2:
                raise DomainError(
                    f"field {bias.field} T at or above b_c2 {dev.vortex.b_c2} T"
                )
            area = seg.material.width * seg.material.thickness
            omega0 = 2.0 * np.pi * dev.vortex.depinning_freq * 1e9
            rho = dev.vortex.flux_flow_scale * bias.field / (1.0 - 1j * omega0 / omegas)
            r = r + rho.real / area * 1e3
            x_extra = rho.imag / area * 1e3
        z = r + 1j * (x_series + x_extra)
        y = 1j * omegas * seg.c_shunt * 1e-15
        gamma = np.sqrt(z * y)
        gamma = np.where(gamma.real >= 0, gamma, -gamma)
        z_char = np.sqrt(z / y)
        chain = np.einsum("fij,fjk->fik", chain, _abcd_line_array(gamma, z_char, seg.length))
    chain = np.einsum("fij,fjk->fik", chain, cap)

    s = abcd_to_s(chain, dev.z_ref)
    return SweepRecord(freqs=freqs, s21=s[:, 1, 0], bias=bias, meta="simulated")
