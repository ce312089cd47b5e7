"""Transverse beam dynamics in a flat-mirror resonator with phase/loss gratings.

Per round trip the intracavity field picks up free paraxial diffraction over
the mirror spacing L and one pass through a pair of thin gratings,

    psi_{n+1}(x) = exp[-i*theta1(x) - theta2(x)] F^{-1} e^{-i (L/k0) k^2} F psi_n,

    theta1 = A cos(2*pi*x/a),   theta2 = A*lam*(1 - sin(2*pi*x/a)),

with k0 = 2*pi/wavelength.  On the grating harmonics k_l = 2*pi*l/a the free
factor equals exp(-2*pi*i*beta*l^2) with beta = wavelength*L/a^2, and the
transmission factors into exp(-gamma) * exp(-i V(x)/hbar) with gamma = A*lam,
so each round trip is exp(-gamma) times one rotor kick: mirror spacing set to
a fraction of the Talbot length L_T = a^2/wavelength dials in the kinetic
parameter beta = L/L_T.

Far-field (focal-plane) intensity lives on X = (wavelength*f/2pi)*k and falls
into peaks spaced wavelength*f/a that map the rotor's momentum populations.

Sign conventions: the forward transform kernel is exp(-i*k*x) (numpy fft),
under which free propagation multiplies spectra by exp(-i*(L/k0)*k^2); the
pair is fixed by the zero-grating Gaussian diffraction law and tested there.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import dynamics, model
from .errors import MismatchedParams, WindowOverflow

WINDOW_GUARD_TOL = 1e-8
WINDOW_GUARD_BAND = 0.05  # outer fraction of the grid watched by the guard
DEFAULT_SAMPLES_PER_PERIOD = 16
DEFAULT_EXTENT_WAISTS = 12.0


@dataclass(frozen=True)
class CavityConfig:
    """Physical-unit description of the resonator; lengths in meters."""

    grating_amplitude: float  # phase depth A (radians)
    loss_ratio: float  # lam = loss depth / phase depth, in [0, 1)
    grating_period: float
    wavelength: float
    mirror_spacing: float
    lens_focal: float
    beam_waist: float
    grid_extent: float
    grid_points: int
    round_trips: int = 20

    def __post_init__(self):
        if not 0.0 <= self.loss_ratio < 1.0:
            raise ValueError(f"loss ratio must be in [0, 1), got {self.loss_ratio}")
        for name in (
            "grating_period",
            "wavelength",
            "mirror_spacing",
            "lens_focal",
            "beam_waist",
            "grid_extent",
        ):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if self.grid_points & (self.grid_points - 1):
            raise ValueError("grid_points must be a power of two")
        if self.grid_extent < 6.0 * self.beam_waist:
            raise ValueError("grid extent must cover at least 6 beam waists")
        if self.dx > self.grating_period / 16.0:
            raise ValueError("need at least 16 grid samples per grating period")

    @classmethod
    def from_beta(
        cls,
        beta,
        grating_amplitude,
        loss_ratio,
        grating_period,
        wavelength,
        lens_focal,
        beam_waist,
        round_trips=20,
        samples_per_period=DEFAULT_SAMPLES_PER_PERIOD,
        extent_waists=DEFAULT_EXTENT_WAISTS,
    ):
        """Build a config with the mirror spacing set to beta * Talbot length."""
        mirror_spacing = beta * grating_period**2 / wavelength
        extent = extent_waists * beam_waist
        points = model.next_pow2(
            math.ceil(extent / grating_period * samples_per_period)
        )
        return cls(
            grating_amplitude=grating_amplitude,
            loss_ratio=loss_ratio,
            grating_period=grating_period,
            wavelength=wavelength,
            mirror_spacing=mirror_spacing,
            lens_focal=lens_focal,
            beam_waist=beam_waist,
            grid_extent=extent,
            grid_points=points,
            round_trips=round_trips,
        )

    @property
    def beta(self):
        return self.wavelength * self.mirror_spacing / self.grating_period**2

    @property
    def gamma(self):
        """Uniform per-trip loss exponent A*lam from the grating offset."""
        return self.grating_amplitude * self.loss_ratio

    @property
    def talbot_length(self):
        return self.grating_period**2 / self.wavelength

    @property
    def peak_spacing(self):
        """Far-field order spacing wavelength * f / a."""
        return self.wavelength * self.lens_focal / self.grating_period

    @property
    def dx(self):
        return self.grid_extent / self.grid_points

    @property
    def x(self):
        n = self.grid_points
        return (np.arange(n) - n // 2) * self.dx


@dataclass(frozen=True)
class TransverseField:
    """Complex field samples on the config's x grid after `trip` round trips."""

    values: np.ndarray
    trip: int


def gaussian_input(config):
    """Broad Gaussian excitation exp(-x^2/w0^2) at trip 0."""
    x = config.x
    return TransverseField(
        np.exp(-(x**2) / config.beam_waist**2).astype(complex), trip=0
    )


class _CavityPlan:
    """Precomputed propagation phase, grating transmission and guard mask."""

    def __init__(self, config):
        self.config = config
        x = config.x
        k = 2.0 * np.pi * np.fft.fftfreq(config.grid_points, d=config.dx)
        k0 = 2.0 * np.pi / config.wavelength
        self.propagation = np.exp(-1j * (config.mirror_spacing / k0) * k * k)
        theta1 = config.grating_amplitude * np.cos(2.0 * np.pi * x / config.grating_period)
        theta2 = config.grating_amplitude * config.loss_ratio * (
            1.0 - np.sin(2.0 * np.pi * x / config.grating_period)
        )
        self.transmission = np.exp(-1j * theta1 - theta2)
        self.guard = np.abs(x) > (0.5 - WINDOW_GUARD_BAND) * config.grid_extent

    def step(self, values):
        out = np.fft.ifft(np.fft.fft(values) * self.propagation)
        out *= self.transmission
        return out

    def edge_fraction(self, values):
        intensity = np.abs(values) ** 2
        total = intensity.sum()
        if total == 0.0:
            return 0.0
        return float(intensity[self.guard].sum() / total)


def _check_window(plan, values, trip):
    frac = plan.edge_fraction(values)
    if frac > WINDOW_GUARD_TOL:
        raise WindowOverflow(
            f"{frac:.2e} of the power sits in the outer {WINDOW_GUARD_BAND:.0%} "
            f"of the window at trip {trip}; widen the grid"
        )


def roundtrip(fld, config, plan=None):
    """One round trip: free diffraction, then the grating transmission."""
    if plan is None:
        plan = _CavityPlan(config)
    out = plan.step(fld.values)
    _check_window(plan, out, fld.trip + 1)
    return TransverseField(out, fld.trip + 1)


@dataclass(frozen=True)
class PeakRecord:
    order: int
    position: float  # X of the intensity maximum inside the order window
    power: float  # intensity integrated over half a spacing each side


@dataclass(frozen=True)
class FarField:
    """Focal-plane intensity; positions X = (wavelength*f/2pi) * k, ascending.

    Intensity is normalized so that its integral over X equals the near-field
    power integral (Parseval), and order peaks carry their integrated power.
    """

    positions: np.ndarray
    intensity: np.ndarray
    spacing: float
    peaks: tuple

    def total_power(self):
        dxf = self.positions[1] - self.positions[0]
        return float(self.intensity.sum() * dxf)

    def peak_power(self, order):
        for p in self.peaks:
            if p.order == order:
                return p.power
        return 0.0

    def moments(self):
        """(mean, std) of X over the full window, in units of the spacing."""
        dxf = self.positions[1] - self.positions[0]
        weight = self.intensity * dxf
        total = weight.sum()
        mean = float((self.positions * weight).sum() / total)
        var = float(((self.positions - mean) ** 2 * weight).sum() / total)
        return mean / self.spacing, math.sqrt(max(var, 0.0)) / self.spacing


def far_field(fld, config):
    """Fourier-plane intensity of a field with per-order integrated powers."""
    n = config.grid_points
    dx = config.dx
    transform = dx * np.fft.fftshift(np.fft.fft(fld.values))
    k = 2.0 * np.pi * np.fft.fftshift(np.fft.fftfreq(n, d=dx))
    scale = config.wavelength * config.lens_focal
    positions = (scale / (2.0 * np.pi)) * k
    intensity = np.abs(transform) ** 2 / scale
    spacing = config.peak_spacing
    dxf = positions[1] - positions[0]
    l_max = int(math.floor((positions[-1] - spacing / 2.0) / spacing))
    peaks = []
    for order in range(-l_max, l_max + 1):
        center = order * spacing
        window = np.abs(positions - center) < spacing / 2.0
        power = float(intensity[window].sum() * dxf)
        pos = float(positions[window][np.argmax(intensity[window])])
        peaks.append(PeakRecord(order=order, position=pos, power=power))
    return FarField(
        positions=positions, intensity=intensity, spacing=spacing, peaks=tuple(peaks)
    )


@dataclass(frozen=True)
class UnitReport:
    """Derived physical quantities for a cavity configuration."""

    talbot_length: float
    mirror_spacing: float
    beta: float
    gamma: float
    peak_spacing: float
    beam_waist: float
    waist_over_period: float
    wavelength: float
    grating_period: float
    lens_focal: float

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def physical_units(config):
    return UnitReport(
        talbot_length=config.talbot_length,
        mirror_spacing=config.mirror_spacing,
        beta=config.beta,
        gamma=config.gamma,
        peak_spacing=config.peak_spacing,
        beam_waist=config.beam_waist,
        waist_over_period=config.beam_waist / config.grating_period,
        wavelength=config.wavelength,
        grating_period=config.grating_period,
        lens_focal=config.lens_focal,
    )


@dataclass
class CavityRun:
    """Per-trip decay record of an initial excitation.

    power is the near-field power integral; mean_x and std_x are far-field
    moments in units of the peak spacing.  near_intensity holds |psi(x)|^2 at
    trip 0 and at the final trip.
    """

    config: CavityConfig
    trips: np.ndarray
    power: np.ndarray
    mean_x: np.ndarray
    std_x: np.ndarray
    far_fields: list
    near_intensity: dict = field(default_factory=dict)


def run_decay(config, initial=None):
    """Iterate round trips from a (default Gaussian) excitation, recording
    power decay and far-field moments."""
    plan = _CavityPlan(config)
    fld = gaussian_input(config) if initial is None else initial
    _check_window(plan, fld.values, fld.trip)
    n_trips = config.round_trips
    trips = np.arange(n_trips + 1)
    power = np.empty(n_trips + 1)
    mean_x = np.empty(n_trips + 1)
    std_x = np.empty(n_trips + 1)
    far_fields = []
    near = {}
    for n in range(n_trips + 1):
        if n > 0:
            fld = TransverseField(plan.step(fld.values), n)
            _check_window(plan, fld.values, n)
        power[n] = float((np.abs(fld.values) ** 2).sum() * config.dx)
        ff = far_field(fld, config)
        far_fields.append(ff)
        mean_x[n], std_x[n] = ff.moments()
        if n in (0, n_trips):
            near[n] = np.abs(fld.values) ** 2
    return CavityRun(
        config=config,
        trips=trips,
        power=power,
        mean_x=mean_x,
        std_x=std_x,
        far_fields=far_fields,
        near_intensity=near,
    )


def matched_rotor_series(config, n_trips=None, n_sites=80):
    """Momentum-space kick dynamics matched to a cavity config (delta input),
    with per-kick snapshots for the equivalence comparison."""
    if n_trips is None:
        n_trips = config.round_trips
    params = model.RotorParams(
        kick_strength=config.grating_amplitude,
        nonhermiticity=config.loss_ratio,
        beta=config.beta,
        n_sites=n_sites,
    )
    return dynamics.evolve(params, n_trips, snapshot_kicks=range(n_trips + 1))


@dataclass(frozen=True)
class EquivalenceReport:
    """Per-trip comparison of far-field peak powers against rotor predictions.

    Powers are normalized to the trip-0 near-field total; the rotor reference
    for order l at trip n is |psi_l(n)|^2 * exp(-2*gamma*n).  Only peaks whose
    normalized power exceeds power_floor enter max_relative_error (the floor
    is applied on the trip-0-normalized scale, the same scale the reference
    lives on).  centroid_distance compares far-field mean X (spacing units)
    with the rotor mean momentum.
    """

    trips: np.ndarray
    worst_relative_error: np.ndarray
    centroid_distance: np.ndarray
    power_floor: float
    compared_peaks: int

    @property
    def max_relative_error(self):
        return float(self.worst_relative_error.max())

    @property
    def max_centroid_distance(self):
        return float(np.abs(self.centroid_distance).max())


def rotor_equivalence(run, series, power_floor=0.01):
    """Check that the cavity reproduces the rotor populations trip by trip."""
    config = run.config
    params = series.params
    if abs(params.kick_strength - config.grating_amplitude) > 1e-12:
        raise MismatchedParams("kick strength does not match grating amplitude")
    if abs(params.nonhermiticity - config.loss_ratio) > 1e-12:
        raise MismatchedParams("non-Hermiticity does not match loss ratio")
    if abs(params.beta - config.beta) > 1e-9 * config.beta:
        raise MismatchedParams(
            f"kinetic parameter mismatch: rotor {params.beta}, cavity {config.beta}"
        )
    n_trips = min(run.trips[-1], series.kicks[-1])
    missing = [n for n in range(n_trips + 1) if n not in series.snapshots]
    if missing:
        raise MismatchedParams(
            f"rotor series lacks snapshots at trips {missing[:5]}; evolve with "
            "snapshot_kicks=range(n_trips + 1)"
        )
    ns = params.n_sites
    gamma = config.gamma
    p0 = run.power[0]
    trips = np.arange(n_trips + 1)
    worst = np.zeros(n_trips + 1)
    centroid = np.zeros(n_trips + 1)
    compared = 0
    for n in trips:
        reference = series.snapshots[n] * math.exp(-2.0 * gamma * n)
        ff = run.far_fields[n]
        for peak in ff.peaks:
            if abs(peak.order) > ns:
                continue
            measured = peak.power / p0
            if measured <= power_floor:
                continue
            ref = reference[peak.order + ns]
            if ref == 0.0:
                raise MismatchedParams(
                    f"cavity holds power in order {peak.order} at trip {n} "
                    "where the rotor predicts none"
                )
            worst[n] = max(worst[n], abs(measured - ref) / ref)
            compared += 1
        rotor_mean = series.mean_l[n]
        centroid[n] = run.mean_x[n] - rotor_mean
    return EquivalenceReport(
        trips=trips,
        worst_relative_error=worst,
        centroid_distance=centroid,
        power_floor=power_floor,
        compared_peaks=compared,
    )
