"""Dimensionless model of a rotor kicked by a PT-symmetric complex crystal.

Conventions used throughout the package:

* time is counted in kick periods, so quasi-energies appear as the phase
  eps*T of the one-period propagator with T = 1;
* momentum is the integer harmonic index l of exp(2*pi*i*l*x/a);
* position x is measured in units of the crystal period a;
* the kick potential, in units of hbar, is

      V(x)/hbar = K * [cos(2*pi*x) + i*lam*sin(2*pi*x)],

  with kick strength K > 0 and non-Hermiticity 0 <= lam < 1.

Between kicks the kinetic factor multiplies psi_l by exp(-2*pi*i*beta*l^2),
so the whole dynamics depends on (K, lam, beta) only.

For lam < 1 the potential is a displaced cosine,

    V(x)/hbar = k0 * cos(2*pi*x - i*y),   k0 = K*sqrt(1 - lam^2),
    y = atanh(lam),

which turns exp(-i*V/hbar) into a Bessel series: its spatial harmonics are
W_n = (-i)^n * J_n(k0) * exp(n*y).  The sampling (FFT) route and this closed
form are implemented independently so each can serve as an oracle for the
other.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.special

from .errors import NotCoprime, TailNotDecayed

# Kick-coefficient tails must fall below this at the ends of the table.
DROP_TOL = 1e-12
# x-grid points per retained harmonic when sampling exp(-i V/hbar).
OVERSAMPLE = 8
# exp() argument cap for the Bessel route; J_n underflows to zero long
# before n*y reaches this for any kick strength of interest.
_EXP_CAP = 700.0


def next_pow2(n):
    """Smallest power of two >= n."""
    return 1 << max(int(n) - 1, 0).bit_length()


@dataclass(frozen=True)
class RotorParams:
    """Dimensionless rotor parameters.

    beta is stored reduced to (0, 1]: the kinetic phase exp(-2*pi*i*beta*l^2)
    is invariant under beta -> beta + 1, and beta = 1 (the main quantum
    resonance, equivalent to the excluded 0) is kept representable.  The
    value passed in is recorded unchanged in beta_raw.  beta_rational, when
    set, states that beta equals numer/denom exactly and enables exact
    phase reduction and band-structure computations.
    """

    kick_strength: float
    nonhermiticity: float
    beta: float
    n_sites: int = 1000
    beta_raw: float | None = None
    beta_rational: tuple[int, int] | None = None

    def __post_init__(self):
        if not self.kick_strength > 0.0:
            raise ValueError(f"kick strength must be positive, got {self.kick_strength}")
        if not 0.0 <= self.nonhermiticity < 1.0:
            raise ValueError(
                f"non-Hermiticity must lie in [0, 1), got {self.nonhermiticity}"
            )
        if int(self.n_sites) < 1:
            raise ValueError(f"n_sites must be >= 1, got {self.n_sites}")
        object.__setattr__(self, "n_sites", int(self.n_sites))
        if self.beta_raw is None:
            object.__setattr__(self, "beta_raw", float(self.beta))
        reduced = float(self.beta) - math.floor(self.beta)
        if reduced == 0.0:
            reduced = 1.0
        object.__setattr__(self, "beta", reduced)
        if self.beta_rational is not None:
            numer, denom = (int(v) for v in self.beta_rational)
            _validate_rational(numer, denom)
            object.__setattr__(self, "beta_rational", (numer, denom))
            if abs(self.beta - numer / denom) > 1e-15:
                raise ValueError(
                    f"beta={self.beta} does not match beta_rational={numer}/{denom}"
                )

    @classmethod
    def from_rational(cls, numer, denom, kick_strength, nonhermiticity=0.0, n_sites=1000):
        """Parameters with an exactly rational beta = numer/denom."""
        numer, denom = int(numer), int(denom)
        _validate_rational(numer, denom)
        return cls(
            kick_strength=kick_strength,
            nonhermiticity=nonhermiticity,
            beta=numer / denom,
            n_sites=n_sites,
            beta_rational=(numer, denom),
        )


def _validate_rational(numer, denom):
    if denom < 1 or not 1 <= numer <= denom:
        raise ValueError(f"rational beta needs 1 <= N <= M, got {numer}/{denom}")
    if math.gcd(numer, denom) != 1:
        raise NotCoprime(f"{numer}/{denom} is not a reduced fraction")


@dataclass(frozen=True)
class GaugeForm:
    """Hermitian-equivalent form of the complex cosine.

    k0_scaled is the displaced-cosine amplitude K*sqrt(1-lam^2) (in units of
    hbar) and y = atanh(lam) is the imaginary displacement 2*pi*x0/a.
    """

    k0_scaled: float
    y: float


def gauge_form(params):
    """Map (K, lam) to the displaced-cosine gauge (k0_scaled, y)."""
    lam = params.nonhermiticity
    return GaugeForm(
        k0_scaled=params.kick_strength * math.sqrt(1.0 - lam * lam),
        y=math.atanh(lam),
    )


def potential_value(x_over_a, params):
    """Kick potential V(x)/hbar at position x/a; PT symmetric, V(-x) = conj V(x)."""
    theta = 2.0 * np.pi * np.asarray(x_over_a)
    return params.kick_strength * (
        np.cos(theta) + 1j * params.nonhermiticity * np.sin(theta)
    )


def free_phase(params, momenta):
    """Kinetic factor exp(-2*pi*i*beta*l^2) on integer momenta.

    The phase argument is reduced modulo 1 before exponentiation; for
    rational beta the reduction is done in exact integer arithmetic, so the
    main resonance (beta = 1) and the antiresonance (beta = 1/2) come out
    bit-exact.
    """
    l = np.asarray(momenta)
    if params.beta_rational is not None:
        numer, denom = params.beta_rational
        frac = (numer * (l.astype(np.int64) ** 2 % denom)) % denom
        return np.exp(-2j * np.pi * (frac / denom))
    return np.exp(-2j * np.pi * np.mod(params.beta * l.astype(float) ** 2, 1.0))


@dataclass(frozen=True)
class KickCoefficients:
    """Spatial harmonics of the one-kick factor and of the potential.

    values[n + n_max] is W_n, the coefficient of exp(2*pi*i*n*x) in
    exp(-i V(x)/hbar).  potential_fourier holds the harmonics of V(x)/hbar
    itself, which are nonzero only at n = +-1 for the sinusoidal crystal:
    V_{+1} = K(1+lam)/2 and V_{-1} = K(1-lam)/2.
    """

    values: np.ndarray
    potential_fourier: np.ndarray
    n_max: int

    @property
    def orders(self):
        return np.arange(-self.n_max, self.n_max + 1)

    def coefficient(self, n):
        """W_n (scalar or array n)."""
        return self.values[np.asarray(n) + self.n_max]


def default_n_max(params):
    """Tail-safe table half-width: Bessel coefficients decay past k0, widened
    by the exp(n*y) gauge factor for lam > 0."""
    g = gauge_form(params)
    return max(32, int(math.ceil(4.0 * params.kick_strength * math.exp(g.y))))


def _potential_fourier(params, n_max):
    v = np.zeros(2 * n_max + 1, dtype=complex)
    k = params.kick_strength
    lam = params.nonhermiticity
    v[n_max + 1] = 0.5 * k * (1.0 + lam)
    v[n_max - 1] = 0.5 * k * (1.0 - lam)
    return v


def _check_tail(values, n_max, route):
    tail = max(abs(values[0]), abs(values[-1]))
    if tail > DROP_TOL:
        raise TailNotDecayed(
            f"|W_(+-{n_max})| = {tail:.3e} exceeds {DROP_TOL:.0e} ({route} route); "
            "increase n_max"
        )


def kick_coefficients(params, n_max=None):
    """Harmonics W_n of exp(-i V(x)/hbar) by uniform sampling and FFT.

    The sampling grid carries at least OVERSAMPLE points per retained
    harmonic, so aliasing onto the returned band sits at the analytic decay
    floor of the coefficients themselves.
    """
    if n_max is None:
        n_max = default_n_max(params)
    n_max = int(n_max)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    grid = next_pow2(OVERSAMPLE * (2 * n_max + 1))
    x = np.arange(grid) / grid
    samples = np.exp(-1j * potential_value(x, params))
    spectrum = np.fft.fft(samples) / grid
    orders = np.arange(-n_max, n_max + 1)
    values = spectrum[orders % grid]
    _check_tail(values, n_max, "sampling")
    return KickCoefficients(values, _potential_fourier(params, n_max), n_max)


def kick_coefficients_bessel(params, n_max=None):
    """Closed-form harmonics W_n = (-i)^n J_n(k0) exp(n*y).

    Independent of the sampling route; used as its oracle.  Where J_n has
    underflowed to zero the product is forced to zero so the growth factor
    cannot manufacture inf*0.
    """
    if n_max is None:
        n_max = default_n_max(params)
    n_max = int(n_max)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    g = gauge_form(params)
    orders = np.arange(-n_max, n_max + 1)
    jn = scipy.special.jv(orders, g.k0_scaled)
    growth = np.exp(np.minimum(orders * g.y, _EXP_CAP))
    values = np.power(-1j, np.mod(orders, 4)) * np.where(jn == 0.0, 0.0, jn * growth)
    _check_tail(values, n_max, "Bessel")
    return KickCoefficients(values, _potential_fourier(params, n_max), n_max)
