"""Inverse spectroscopy: locate, fit, and track resonances in complex spectra.

A resonance is modeled as a complex Lorentzian transmission peak riding on
a linear complex baseline,

    S21(f) = a + b (f - fc) + A e^{i phi} / (1 + 2 i Q (f - f0) / f0),

fit by damped least squares on the stacked real/imaginary residuals. When
the magnitude contrast in the window falls below the damping threshold the
resonance is instead located from the inflection of the unwrapped phase,
which keeps a sharp signature long after the magnitude dip has washed out.
Branch tracking assigns fits across a bias sweep by nearest frequency with
a continuity threshold and records merge events.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, linear_sum_assignment
from scipy.signal import find_peaks as _scipy_find_peaks
from scipy.signal import peak_widths as _scipy_peak_widths

from .errors import DomainError, FitError
from .network import BiasPoint, SweepRecord

__all__ = [
    "SweepRecord",
    "PeakWindow",
    "ResonanceFit",
    "BranchTrack",
    "find_peaks",
    "fit_resonance",
    "track_branches",
    "delta_f_meas",
]

log = logging.getLogger(__name__)

# Magnitude contrast below which the phase route takes over
DAMPING_THRESHOLD = 0.05
# Window half-width in estimated linewidths around each peak
WINDOW_LINEWIDTHS = 5.0
# Minimum samples a fit window must contain
MIN_WINDOW_SAMPLES = 15


@dataclass(frozen=True)
class PeakWindow:
    """Candidate resonance window [f_lo, f_hi] around a magnitude peak."""

    center: float
    f_lo: float
    f_hi: float
    prominence: float


@dataclass(frozen=True)
class ResonanceFit:
    """Extracted parameters of one mode at one sweep point.

    f0 and the linewidth f0/q_total are in GHz; amplitude is the fitted
    peak (or phase-swing) amplitude; phase_slope is the baseline phase
    slope in rad/GHz; method records which route produced f0.
    """

    f0: float
    q_total: float
    amplitude: float
    phase_slope: float
    rms_residual: float
    method: str = "magnitude"

    def __post_init__(self):
        if self.q_total <= 0:
            raise DomainError(f"q_total must be positive, got {self.q_total}")
        if self.rms_residual < 0:
            raise DomainError("rms_residual must be nonnegative")
        if self.method not in ("magnitude", "phase"):
            raise DomainError(f"unknown fit method {self.method!r}")

    @property
    def linewidth(self) -> float:
        return self.f0 / self.q_total


@dataclass
class BranchTrack:
    """One mode followed across a bias sweep."""

    branch_id: str
    points: list[tuple[BiasPoint, ResonanceFit]] = field(default_factory=list)
    merged_from: BiasPoint | None = None

    def f0_series(self):
        return [(b, fit.f0) for b, fit in self.points]


def find_peaks(sweep: SweepRecord, min_prominence: float) -> list[PeakWindow]:
    """Local |S21| maxima with at least the given prominence.

    Each peak gets a window of +-5 estimated linewidths (half-prominence
    width), widened if needed to hold the minimum sample count and clipped
    to the grid. Windows are ordered by frequency.
    """
    mag = np.abs(sweep.s21)
    if mag.size < 3:
        return []
    idx, props = _scipy_find_peaks(mag, prominence=min_prominence)
    if idx.size == 0:
        return []
    df = float(np.median(np.diff(sweep.freqs)))
    widths = _scipy_peak_widths(mag, idx, rel_height=0.5)[0] * df
    out = []
    for i, w, prom in zip(idx, widths, props["prominences"]):
        half = max(WINDOW_LINEWIDTHS * w, (MIN_WINDOW_SAMPLES // 2 + 1) * df)
        center = float(sweep.freqs[i])
        out.append(
            PeakWindow(
                center=center,
                f_lo=max(float(sweep.freqs[0]), center - half),
                f_hi=min(float(sweep.freqs[-1]), center + half),
                prominence=float(prom),
            )
        )
    return out


def _lorentzian_model(params, f, fc):
    f0, q, re_a, im_a, re_b, im_b, amp, phi = params
    base = (re_a + 1j * im_a) + (re_b + 1j * im_b) * (f - fc)
    res = amp * np.exp(1j * phi) / (1.0 + 2j * q * (f - f0) / f0)
    return base + res


def _fit_magnitude(freqs, s21):
    mag = np.abs(s21)
    fc = 0.5 * (freqs[0] + freqs[-1])
    n_edge = max(2, freqs.size // 6)
    edge = np.r_[s21[:n_edge], s21[-n_edge:]]
    a0 = complex(np.mean(edge))
    i_pk = int(np.argmax(np.abs(s21 - a0)))
    f0_0 = freqs[i_pk]
    peak = s21[i_pk] - a0
    # half-maximum width of the background-subtracted magnitude
    resid_mag = np.abs(s21 - a0)
    half = resid_mag[i_pk] / 2.0
    above = np.flatnonzero(resid_mag >= half)
    fwhm = max(freqs[above[-1]] - freqs[above[0]], 2.0 * (freqs[1] - freqs[0]))
    q0 = max(f0_0 / fwhm, 1.0)
    b0 = (np.mean(s21[-n_edge:]) - np.mean(s21[:n_edge])) / (freqs[-1] - freqs[0])

    x0 = np.array(
        [f0_0, q0, a0.real, a0.imag, b0.real, b0.imag, float(np.abs(peak)), float(np.angle(peak))]
    )
    scale = max(np.max(mag), 1e-12)

    def resid(p):
        r = _lorentzian_model(p, freqs, fc) - s21
        return np.concatenate([r.real, r.imag]) / scale

    lo = [freqs[0], 1.0, -np.inf, -np.inf, -np.inf, -np.inf, 0.0, -2 * np.pi]
    hi = [freqs[-1], 1e9, np.inf, np.inf, np.inf, np.inf, np.inf, 2 * np.pi]
    sol = least_squares(
        resid, x0, bounds=(lo, hi), method="trf", x_scale="jac",
        xtol=1e-12, ftol=1e-12, gtol=1e-12, max_nfev=200 * (len(x0) + 1),
    )
    if sol.status == 0:
        raise FitError(
            "resonance fit did not converge",
            {"nfev": sol.nfev, "cost": sol.cost, "window": (freqs[0], freqs[-1])},
        )
    f0, q, re_a, im_a, re_b, im_b, amp, phi = sol.x
    base_at_f0 = (re_a + 1j * im_a) + (re_b + 1j * im_b) * (f0 - fc)
    denom = np.abs(base_at_f0) ** 2
    slope = float(((re_b + 1j * im_b) * np.conj(base_at_f0)).imag / denom) if denom > 0 else 0.0
    rms = float(np.sqrt(np.mean(np.abs(_lorentzian_model(sol.x, freqs, fc) - s21) ** 2)))
    return ResonanceFit(
        f0=float(f0), q_total=float(q), amplitude=float(amp),
        phase_slope=slope, rms_residual=rms, method="magnitude",
    )


def _phase_design(f, fc, f0, q):
    """Design matrix of the phase perturbation model.

    A weak resonance on a strong baseline perturbs the transmitted phase by
    a Lorentzian (absorptive) plus dispersive term; the baseline phase is
    linear across the window. Columns: 1, (f - fc), absorptive, dispersive.
    """
    x = 2.0 * q * (f - f0) / f0
    den = 1.0 + x * x
    return np.column_stack([np.ones_like(f), f - fc, 1.0 / den, -x / den])


def _fit_phase(freqs, s21):
    phase = np.unwrap(np.angle(s21))
    fc = 0.5 * (freqs[0] + freqs[-1])
    grad = np.gradient(phase, freqs)
    base_slope = float(np.median(grad))
    i_infl = int(np.argmax(np.abs(grad - base_slope)))
    f0_0 = float(freqs[i_infl])
    span = freqs[-1] - freqs[0]
    q0 = max(f0_0 / (span / 5.0), 1.0)

    def profiled(p):
        f0, logq = p
        design = _phase_design(freqs, fc, f0, np.exp(logq))
        coef, *_ = np.linalg.lstsq(design, phase, rcond=None)
        return design @ coef - phase

    lo = [freqs[0], 0.0]
    hi = [freqs[-1], np.log(1e9)]
    sol = least_squares(
        profiled, np.array([f0_0, np.log(q0)]), bounds=(lo, hi), method="trf",
        x_scale="jac", xtol=1e-12, ftol=1e-12, gtol=1e-12, max_nfev=200 * 3,
    )
    if sol.status == 0:
        raise FitError(
            "phase fit did not converge",
            {"nfev": sol.nfev, "cost": sol.cost, "window": (freqs[0], freqs[-1])},
        )
    f0, q = float(sol.x[0]), float(np.exp(sol.x[1]))
    design = _phase_design(freqs, fc, f0, q)
    coef, *_ = np.linalg.lstsq(design, phase, rcond=None)
    model = design @ coef
    rms = float(np.sqrt(np.mean((model - phase) ** 2)))
    swing = float(np.hypot(coef[2], coef[3]))
    return ResonanceFit(
        f0=f0, q_total=q, amplitude=swing,
        phase_slope=float(coef[1]), rms_residual=rms, method="phase",
    )


def fit_resonance(sweep: SweepRecord, window: PeakWindow) -> ResonanceFit:
    """Fit one resonance inside a window.

    Magnitude route: damped least squares of the complex Lorentzian-plus-
    baseline model. If the magnitude contrast in the window is below the
    damping threshold (5% of the local baseline level) the resonance is
    taken from the unwrapped-phase inflection instead and method='phase'.
    """
    sel = (sweep.freqs >= window.f_lo) & (sweep.freqs <= window.f_hi)
    freqs = sweep.freqs[sel]
    s21 = sweep.s21[sel]
    if freqs.size < MIN_WINDOW_SAMPLES:
        raise ValueError(
            f"window [{window.f_lo}, {window.f_hi}] holds {freqs.size} samples, "
            f"needs at least {MIN_WINDOW_SAMPLES}"
        )
    mag = np.abs(s21)
    n_edge = max(2, freqs.size // 6)
    baseline = float(np.median(np.r_[mag[:n_edge], mag[-n_edge:]]))
    contrast = (np.max(mag) - baseline) / max(baseline, 1e-12)
    if contrast < DAMPING_THRESHOLD:
        return _fit_phase(freqs, s21)
    return _fit_magnitude(freqs, s21)


def _continuity_threshold(fit: ResonanceFit) -> float:
    return max(3.0 * fit.linewidth, 0.02 * fit.f0)


class _Branch:
    __slots__ = ("points", "merged_from", "alive")

    def __init__(self, bias, fit):
        self.points = [(bias, fit)]
        self.merged_from = None
        self.alive = True

    @property
    def last(self):
        return self.points[-1][1]


def track_branches(
    fits: list[tuple[BiasPoint, list[ResonanceFit]]],
) -> list[BranchTrack]:
    """Assign per-bias resonance fits to continuous branches.

    Nearest-frequency assignment (optimal for up to four concurrent modes,
    greedy beyond) under the continuity threshold max(3 linewidths, 2% of
    f0). Merges are recorded when two assigned branches land within one
    linewidth of each other, or when a branch loses its peak within the
    continuity threshold of a surviving branch (coalescence); the
    surviving branch continues alone. Labels are ordered by f0 at the
    branch's first appearance: 'lo', 'hi', then 'm2', 'm3', ...
    """
    order = [b.current for b, _ in fits]
    if order != sorted(order):
        raise ValueError("bias points must be sorted ascending in current")

    branches: list[_Branch] = []
    for bias, fit_list in fits:
        cands = sorted(fit_list, key=lambda f: f.f0)
        active = [br for br in branches if br.alive]
        if not active:
            for f in cands:
                branches.append(_Branch(bias, f))
            continue
        if not cands:
            continue

        assigned = _assign(active, cands)

        taken = set(assigned.values())
        for br, ci in assigned.items():
            br.points.append((bias, cands[ci]))
        matched = [br for br in active if br in assigned]
        unmatched = [br for br in active if br not in assigned]

        # coalescence: a branch whose peak vanished near a surviving branch
        for br in unmatched:
            near = None
            for other in matched:
                if abs(br.last.f0 - other.last.f0) <= _continuity_threshold(other.last):
                    near = other
                    break
            br.alive = False
            if near is not None:
                br.merged_from = bias
        # direct merge: two live branches within one linewidth
        merged_pairs = []
        for i, bi in enumerate(matched):
            for bj in matched[i + 1 :]:
                lw = max(bi.last.linewidth, bj.last.linewidth)
                if abs(bi.last.f0 - bj.last.f0) <= lw and bj.alive and bi.alive:
                    merged_pairs.append((bi, bj))
        for keep, drop in merged_pairs:
            drop.points.pop()
            drop.merged_from = bias
            drop.alive = False

        for ci, f in enumerate(cands):
            if ci not in taken:
                branches.append(_Branch(bias, f))

    branches.sort(key=lambda br: (br.points[0][0].current, br.points[0][1].f0))
    labels = ["lo", "hi"] + [f"m{i}" for i in range(2, len(branches))]
    out = []
    for label, br in zip(labels, branches):
        out.append(BranchTrack(branch_id=label, points=br.points, merged_from=br.merged_from))
    return out


def _assign(active: list[_Branch], cands: list[ResonanceFit]) -> dict:
    """Map branches to candidate indices minimizing total |delta f0|."""
    n_a, n_c = len(active), len(cands)
    cost = np.full((n_a, n_c), 1e9)
    for i, br in enumerate(active):
        thr = _continuity_threshold(br.last)
        for j, f in enumerate(cands):
            d = abs(br.last.f0 - f.f0)
            if d <= thr:
                cost[i, j] = d
    assigned: dict = {}
    if n_a <= 4 and n_c <= 4:
        rows, cols = linear_sum_assignment(cost)
        for i, j in zip(rows, cols):
            if cost[i, j] < 1e9:
                assigned[active[i]] = j
    else:
        pairs = sorted(
            ((cost[i, j], i, j) for i in range(n_a) for j in range(n_c)),
            key=lambda t: t[0],
        )
        used_r, used_c = set(), set()
        for c, i, j in pairs:
            if c >= 1e9 or i in used_r or j in used_c:
                continue
            used_r.add(i)
            used_c.add(j)
            assigned[active[i]] = j
    return assigned


def delta_f_meas(tracks: list[BranchTrack]) -> list[tuple[BiasPoint, float]]:
    """Detuning f_hi - f_lo versus bias from the two primary branches.

    Biases where either branch is missing are omitted with a diagnostic;
    if fewer than two branches exist anywhere the series is empty.
    """
    by_id = {t.branch_id: t for t in tracks}
    lo, hi = by_id.get("lo"), by_id.get("hi")
    if lo is None or hi is None:
        log.warning("delta_f_meas: fewer than two branches present, empty series")
        return []
    lo_map = {b: f.f0 for b, f in lo.points}
    hi_map = {b: f.f0 for b, f in hi.points}
    out = []
    for bias in sorted(set(lo_map) | set(hi_map)):
        if bias in lo_map and bias in hi_map:
            out.append((bias, max(hi_map[bias] - lo_map[bias], 0.0)))
        else:
            log.info("delta_f_meas: branch missing at bias %s, point omitted", bias)
    return out
