"""One-period propagator in momentum space and its quasi-energy spectrum.

The truncated propagator on momenta l, n in [-n_sites, n_sites] is the dense
complex matrix

    U[l, n] = W_{l-n} * exp(-2*pi*i*beta*n^2),

with W the kick harmonics from :mod:`ptrotor.model`.  Eigenphases eps*T =
i*Log(mu) of its eigenvalues mu (principal branch, Re in (-pi, pi]) give the
quasi-energies; |mu| != 1 signals PT breaking.

Truncation artifacts: U is exactly similar to the Hermitian-equivalent matrix
with kick strength K*sqrt(1-lam^2) through D = diag(exp(y*l)).  While
cond(D) = exp(2*y*n_sites) stays below ~1e16 the computed spectrum therefore
remains near-real regardless of the physics; beyond that the pseudospectrum
takes over and reproduces the infinite-lattice behavior.  In the localized
(generic irrational beta) regime the complex eigenvalues appear first in
edge-localized truncation modes, which :func:`filter_edge_states` flags.  At
quantum resonances (rational beta) every eigenvector skin-piles at one edge
instead; the exact description there is the band structure of
:func:`resonance_bands`, which :func:`pt_threshold` uses automatically.
"""

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from . import model
from .errors import (
    AllFiltered,
    EigenFailure,
    InsufficientCoefficients,
    NonMonotoneDetector,
    ZeroVector,
)

DEFAULT_EDGE_FRACTION = 0.1
DEFAULT_ETA = 1e-4
DEFAULT_LAMBDA_TOL = 1e-3
DEFAULT_BRACKET = (0.0, 0.995)


@dataclass(frozen=True)
class FloquetMatrix:
    """Dense one-period propagator; entries[l, n] with l, n in [-Ns, Ns]."""

    entries: np.ndarray
    params: model.RotorParams

    @property
    def momenta(self):
        ns = self.params.n_sites
        return np.arange(-ns, ns + 1)


def build_floquet_matrix(params, coefficients=None):
    """Assemble U[l, n] = W_{l-n} exp(-2*pi*i*beta*n^2).

    Every difference l - n in [-2*Ns, 2*Ns] must be covered by the
    coefficient table, so n_max >= 2*Ns is required.
    """
    ns = params.n_sites
    if coefficients is None:
        n_max = max(model.default_n_max(params), 2 * ns)
        coefficients = model.kick_coefficients(params, n_max)
    if coefficients.n_max < 2 * ns:
        raise InsufficientCoefficients(
            f"need n_max >= {2 * ns}, coefficient table has {coefficients.n_max}"
        )
    l = np.arange(-ns, ns + 1)
    diff = l[:, None] - l[None, :]
    entries = coefficients.values[diff + coefficients.n_max] * model.free_phase(
        params, l
    )[None, :]
    return FloquetMatrix(entries, params)


def participation_ratio(eigvec):
    """R = (sum |phi|^2)^2 / sum |phi|^4; 1 for a single site, N for uniform."""
    intensity = np.abs(np.asarray(eigvec)) ** 2
    total = intensity.sum()
    if total == 0.0:
        raise ZeroVector("participation ratio of the zero vector")
    return float(total * total / np.sum(intensity * intensity))


@dataclass(frozen=True)
class QuasiEnergySpectrum:
    """Eigen-data of a truncated propagator, sorted by Re(eps*T).

    eigenvectors[:, j] belongs to eps_t[j] and is normalized to unit total
    intensity.  center is the intensity-weighted mean momentum, residuals the
    2-norm eigenpair defects ||U v - mu v||.  edge_flagged is all-False until
    :func:`filter_edge_states` marks truncation-edge modes.
    """

    eps_t: np.ndarray
    eigenvectors: np.ndarray
    participation: np.ndarray
    center: np.ndarray
    edge_flagged: np.ndarray
    residuals: np.ndarray
    params: model.RotorParams

    @property
    def n_modes(self):
        return self.eps_t.size

    @property
    def momenta(self):
        ns = self.params.n_sites
        return np.arange(-ns, ns + 1)


def _principal_eps(mu):
    """eps*T = i Log(mu) with Re(eps*T) in (-pi, pi]."""
    eps = 1j * np.log(mu)
    re = eps.real.copy()
    re[re == -np.pi] = np.pi
    return re + 1j * eps.imag


def quasi_energy_spectrum(matrix, compute_residuals=True):
    """Eigen-decompose the propagator and package modes with diagnostics.

    The matrix is non-normal for lam > 0, so eigenpair residuals are kept
    alongside the spectrum; inspect them before trusting individual modes.
    """
    u = matrix.entries
    try:
        mu, vec = scipy.linalg.eig(u, check_finite=False)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise EigenFailure(
            f"dense eigensolver failed ({exc}); try a smaller n_sites*y"
        ) from exc
    eps = _principal_eps(mu)
    order = np.lexsort((eps.imag, eps.real))
    eps = eps[order]
    vec = vec[:, order]
    mu = mu[order]

    intensity = np.abs(vec) ** 2
    totals = intensity.sum(axis=0)
    vec = vec / np.sqrt(totals)[None, :]
    intensity = intensity / totals[None, :]
    l = matrix.momenta
    center = l @ intensity
    participation = 1.0 / np.sum(intensity * intensity, axis=0)
    if compute_residuals:
        defect = u @ vec - vec * mu[None, :]
        residuals = np.linalg.norm(defect, axis=0)
    else:
        residuals = np.full(eps.size, np.nan)
    return QuasiEnergySpectrum(
        eps_t=eps,
        eigenvectors=vec,
        participation=participation,
        center=center,
        edge_flagged=np.zeros(eps.size, dtype=bool),
        residuals=residuals,
        params=matrix.params,
    )


def filter_edge_states(spectrum, edge_fraction=DEFAULT_EDGE_FRACTION):
    """Flag truncation-edge modes (kept in the record, excluded from averages).

    A mode is flagged when its center sits in the outer edge_fraction of the
    lattice or when more than half of its intensity does.  The buffer
    edge_fraction * n_sites should exceed the kick coupling bandwidth
    (~4*K*exp(y) sites); below that, boundary-affected modes leak through the
    filter and the unflagged averages pick up truncation noise.
    """
    if not 0.0 < edge_fraction < 1.0:
        raise ValueError(f"edge_fraction must be in (0, 1), got {edge_fraction}")
    ns = spectrum.params.n_sites
    cut = (1.0 - edge_fraction) * ns
    l = spectrum.momenta
    intensity = np.abs(spectrum.eigenvectors) ** 2
    edge_weight = intensity[np.abs(l) > cut].sum(axis=0)
    flagged = (np.abs(spectrum.center) > cut) | (edge_weight > 0.5)
    if flagged.all():
        raise AllFiltered(
            "every mode is edge-flagged; n_sites too small, or the spectrum "
            "is skin-effect dominated (rational beta with loss/gain)"
        )
    return replace(spectrum, edge_flagged=flagged)


def mean_im_quasienergy(spectrum):
    """Mean |Im eps*T| over unflagged modes: the PT-breaking detector."""
    keep = ~spectrum.edge_flagged
    if not keep.any():
        raise AllFiltered("no unflagged modes to average over")
    return float(np.abs(spectrum.eps_t.imag[keep]).mean())


@dataclass(frozen=True)
class ThresholdEstimate:
    """Order-of-magnitude bound, not a prediction: localized modes survive the
    imaginary displacement while y < 1/xi_L, giving lam ~ 4/K^2."""

    lambda_scale: float
    localization_length: float


def estimate_threshold_small_lambda(params):
    k = params.kick_strength
    return ThresholdEstimate(lambda_scale=4.0 / k**2, localization_length=k**2 / 4.0)


@dataclass(frozen=True)
class BandStructure:
    """Quasi-energy bands at rational beta = numer/denom.

    eps_t[iq, :] are the denom eigenphases of the reduced denom x denom
    propagator block at Bloch number q_grid[iq], principal branch, sorted by
    real part.
    """

    numer: int
    denom: int
    q_grid: np.ndarray
    eps_t: np.ndarray
    params: model.RotorParams

    def mean_abs_im(self):
        return float(np.abs(self.eps_t.imag).mean())


def resonance_bands(params, q_count=201, coefficients=None):
    """M quasi-energy bands over q in [-pi/M, pi/M) for beta = N/M.

    The reduced block is S[l, n](q) = T_{(l-n) mod M}(q) * exp(-2*pi*i*beta*n^2)
    with T_r(q) = sum over table orders j = r (mod M) of W_j exp(-i*q*j); the
    order sum is truncated where the kick harmonics have decayed.
    """
    if params.beta_rational is None:
        raise ValueError(
            "resonance_bands needs an exactly rational beta; construct the "
            "parameters with RotorParams.from_rational"
        )
    numer, denom = params.beta_rational
    if coefficients is None:
        coefficients = model.kick_coefficients(params)
    orders = coefficients.orders
    kinetic = model.free_phase(params, np.arange(denom))
    residue_masks = [orders % denom == r for r in range(denom)]
    q_grid = -np.pi / denom + (2.0 * np.pi / denom) * np.arange(q_count) / q_count
    eps = np.empty((q_count, denom), dtype=complex)
    row, col = np.indices((denom, denom))
    res_index = (row - col) % denom
    for iq, q in enumerate(q_grid):
        wq = coefficients.values * np.exp(-1j * q * orders)
        t = np.array([wq[mask].sum() for mask in residue_masks])
        block = t[res_index] * kinetic[None, :]
        try:
            mu = scipy.linalg.eigvals(block, check_finite=False)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
            raise EigenFailure(f"band eigensolve failed at q={q}") from exc
        e = _principal_eps(mu)
        eps[iq] = e[np.lexsort((e.imag, e.real))]
    return BandStructure(numer=numer, denom=denom, q_grid=q_grid, eps_t=eps, params=params)


@dataclass(frozen=True)
class ThresholdResult:
    """Outcome of a PT-threshold search.

    status is "bracketed" when the detector crossing was bisected,
    "broken_at_origin" when the smallest probed lam already exceeds eta
    (lambda_pt = bracket start), and "unbroken" when no probe exceeded eta
    (lambda_pt = bracket end, a sentinel meaning >= that value).
    """

    lambda_pt: float
    status: str
    eta: float
    bracket: tuple[float, float]
    scan: tuple  # (lam, mean|Im eps*T|) pairs, sorted by lam


def matrix_detector(template, edge_fraction=DEFAULT_EDGE_FRACTION):
    """mean|Im eps*T| over unflagged modes of the truncated propagator."""

    def detect(lam):
        params = replace(template, nonhermiticity=lam)
        spectrum = quasi_energy_spectrum(build_floquet_matrix(params))
        return mean_im_quasienergy(filter_edge_states(spectrum, edge_fraction))

    return detect


def band_detector(template, q_count=64):
    """mean|Im eps*T| over the exact band spectrum (rational beta only)."""

    def detect(lam):
        params = replace(template, nonhermiticity=lam)
        return resonance_bands(params, q_count).mean_abs_im()

    return detect


def _bisect_indicator(scan_points, detect, eta, tol):
    """Refine between the last sub-eta and first super-eta scan points."""
    values = [v for _, v in scan_points]
    lams = [lam for lam, _ in scan_points]
    indicator = [v > eta for v in values]
    if sorted(indicator) != indicator:
        raise NonMonotoneDetector(
            "detector is not monotone across the probed bracket", scan=scan_points
        )
    if indicator[0]:
        return lams[0], "broken_at_origin"
    if not indicator[-1]:
        return lams[-1], "unbroken"
    lo = max(lam for lam, v in scan_points if v <= eta)
    hi = min(lam for lam, v in scan_points if v > eta)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        val = detect(mid)
        scan_points.append((mid, val))
        if val > eta:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi), "bracketed"


def pt_threshold(
    template,
    eta=DEFAULT_ETA,
    lambda_tol=DEFAULT_LAMBDA_TOL,
    bracket=DEFAULT_BRACKET,
    coarse_points=5,
    edge_fraction=DEFAULT_EDGE_FRACTION,
    band_q_count=64,
    detector=None,
):
    """Smallest lam (to lambda_tol) whose detector exceeds eta.

    template fixes (K, beta, n_sites); its non-Hermiticity field is swept.
    For exactly rational beta the detector defaults to the band spectrum,
    which is free of truncation skin-effect artifacts; otherwise the
    edge-filtered truncated-matrix average is used.  A coarse scan over the
    bracket establishes monotonicity before bisection.
    """
    lo, hi = bracket
    if not 0.0 <= lo < hi < 1.0:
        raise ValueError(f"bracket must satisfy 0 <= lo < hi < 1, got {bracket}")
    if detector is None:
        if template.beta_rational is not None:
            detector = band_detector(template, band_q_count)
        else:
            detector = matrix_detector(template, edge_fraction)
    probes = np.linspace(lo, hi, max(int(coarse_points), 2))
    scan_points = [(float(lam), float(detector(float(lam)))) for lam in probes]
    lambda_pt, status = _bisect_indicator(scan_points, detector, eta, lambda_tol)
    scan_points.sort()
    return ThresholdResult(
        lambda_pt=float(lambda_pt),
        status=status,
        eta=eta,
        bracket=(lo, hi),
        scan=tuple(scan_points),
    )
