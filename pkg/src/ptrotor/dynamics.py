"""Kick-by-kick evolution in momentum space and its observables.

One kick applies, in order, the kinetic phases psi_l *= exp(-2*pi*i*beta*l^2)
and then the kick factor exp(-i V(x)/hbar), evaluated by transforming to a
uniform x grid, multiplying pointwise and transforming back.  The grid is
oversized (next power of two >= 4*(2*Ns+1)) so the convolution is exact for
the retained band; the result is truncated back to l in [-Ns, Ns], matching
the dense-matrix route elementwise.

No renormalization is ever applied: the growth or decay of the norm P(n) is
the PT-breaking observable.  A spill guard aborts evolution when population
reaches the truncation edge, converting silent aliasing into a hard error.
"""

from dataclasses import dataclass, field

import numpy as np

from . import model
from .errors import DegenerateFit, SpillExceeded

SPILL_TOL = 1e-8
SPILL_BAND = 0.9  # guard watches |l| > SPILL_BAND * n_sites
DEFAULT_SNAPSHOT_KICKS = (0, 5, 10, 20, 50, 100, 500, 1000)


@dataclass(frozen=True)
class MomentumState:
    """Momentum amplitudes psi_l, l in [-Ns, Ns], after kick_count kicks."""

    amplitudes: np.ndarray
    kick_count: int

    @property
    def n_sites(self):
        return (self.amplitudes.size - 1) // 2

    @property
    def momenta(self):
        ns = self.n_sites
        return np.arange(-ns, ns + 1)

    def norm(self):
        return float(np.sum(np.abs(self.amplitudes) ** 2))


def initial_state(params):
    """Zero-momentum initial condition psi_l = delta_{l,0}."""
    amplitudes = np.zeros(2 * params.n_sites + 1, dtype=complex)
    amplitudes[params.n_sites] = 1.0
    return MomentumState(amplitudes, kick_count=0)


class _Propagator:
    """Precomputed phases and grid layout for repeated kicks."""

    def __init__(self, params):
        ns = params.n_sites
        self.momenta = np.arange(-ns, ns + 1)
        self.kinetic = model.free_phase(params, self.momenta)
        self.grid = model.next_pow2(4 * (2 * ns + 1))
        x = np.arange(self.grid) / self.grid
        self.kick_factor = np.exp(-1j * model.potential_value(x, params))
        self.scatter = self.momenta % self.grid
        self.edge = np.abs(self.momenta) > SPILL_BAND * ns
        self._spectrum = np.zeros(self.grid, dtype=complex)

    def step(self, amplitudes):
        spec = self._spectrum
        spec[:] = 0.0
        spec[self.scatter] = amplitudes * self.kinetic
        field_x = np.fft.ifft(spec)
        field_x *= self.kick_factor
        return np.fft.fft(field_x)[self.scatter]

    def spill_fraction(self, amplitudes):
        intensity = np.abs(amplitudes) ** 2
        total = intensity.sum()
        if total == 0.0:
            return 0.0
        return float(intensity[self.edge].sum() / total)


def kick_step(state, params, spill_tol=SPILL_TOL):
    """Apply one kick period to a state (one-shot; evolve() reuses phases)."""
    prop = _Propagator(params)
    out = prop.step(state.amplitudes)
    spill = prop.spill_fraction(out)
    if spill > spill_tol:
        raise SpillExceeded(
            f"{spill:.2e} of the norm sits beyond {SPILL_BAND:.0%} of the lattice "
            f"after kick {state.kick_count + 1}; increase n_sites"
        )
    return MomentumState(out, state.kick_count + 1)


@dataclass
class ObservableSeries:
    """Per-kick norm P, mean momentum, and spreads, plus optional snapshots.

    spread is the centered standard deviation sqrt(<(l-<l>)^2>) and
    raw_spread the uncentered sqrt(<l^2>); both use norm-normalized moments.
    snapshots maps kick number -> |psi_l|^2, states (when kept) -> psi_l.
    """

    kicks: np.ndarray
    norm: np.ndarray
    mean_l: np.ndarray
    spread: np.ndarray
    raw_spread: np.ndarray
    params: model.RotorParams
    snapshots: dict = field(default_factory=dict)
    states: dict | None = None


def _moments(momenta, amplitudes):
    intensity = np.abs(amplitudes) ** 2
    total = intensity.sum()
    mean = float((momenta * intensity).sum() / total)
    var = float(((momenta - mean) ** 2 * intensity).sum() / total)
    raw = float((momenta.astype(float) ** 2 * intensity).sum() / total)
    return float(total), mean, np.sqrt(max(var, 0.0)), np.sqrt(max(raw, 0.0))


def evolve(
    params,
    n_kicks,
    initial=None,
    snapshot_kicks=None,
    keep_states=False,
    spill_tol=SPILL_TOL,
):
    """Iterate the kick map, recording observables after every kick.

    snapshot_kicks defaults to the subset of DEFAULT_SNAPSHOT_KICKS within
    range; pass an explicit iterable (possibly empty) to override.
    """
    if n_kicks < 0:
        raise ValueError("n_kicks must be >= 0")
    prop = _Propagator(params)
    if initial is None:
        amplitudes = initial_state(params).amplitudes
    else:
        amplitudes = np.asarray(initial.amplitudes, dtype=complex).copy()
        if amplitudes.size != 2 * params.n_sites + 1:
            raise ValueError("initial state size does not match n_sites")
    if snapshot_kicks is None:
        snapshot_kicks = [n for n in DEFAULT_SNAPSHOT_KICKS if n <= n_kicks]
    wanted = set(int(n) for n in snapshot_kicks)

    kicks = np.arange(n_kicks + 1)
    norm = np.empty(n_kicks + 1)
    mean_l = np.empty(n_kicks + 1)
    spread = np.empty(n_kicks + 1)
    raw_spread = np.empty(n_kicks + 1)
    snapshots = {}
    states = {} if keep_states else None

    momenta = prop.momenta
    for n in range(n_kicks + 1):
        if n > 0:
            amplitudes = prop.step(amplitudes)
            spill = prop.spill_fraction(amplitudes)
            if spill > spill_tol:
                raise SpillExceeded(
                    f"{spill:.2e} of the norm sits beyond {SPILL_BAND:.0%} of the "
                    f"lattice after kick {n}; increase n_sites"
                )
        norm[n], mean_l[n], spread[n], raw_spread[n] = _moments(momenta, amplitudes)
        if n in wanted:
            snapshots[n] = np.abs(amplitudes) ** 2
        if keep_states:
            states[n] = amplitudes.copy()
    return ObservableSeries(
        kicks=kicks,
        norm=norm,
        mean_l=mean_l,
        spread=spread,
        raw_spread=raw_spread,
        params=params,
        snapshots=snapshots,
        states=states,
    )


def spreading_exponent(series, window):
    """Least-squares slope of log<dl> versus log n over kicks in window.

    0.5 marks the amplified-resonance diffusion law, 1.0 ballistic Hermitian
    spreading, ~0 dynamical localization.  A window touching zero spread (or
    kick 0) has no defined log-log slope.
    """
    lo, hi = window
    mask = (series.kicks >= lo) & (series.kicks <= hi)
    n = series.kicks[mask]
    dl = series.spread[mask]
    if n.size < 2 or (n <= 0).any():
        raise DegenerateFit(f"window {window} leaves {n.size} usable kicks")
    # spreads at the rounding floor (exact revivals) have no log-log slope
    if (dl <= 1e-9).any():
        raise DegenerateFit("spread vanishes inside the fit window")
    slope = np.polyfit(np.log(n.astype(float)), np.log(dl), 1)[0]
    return float(slope)
