"""Closed-form analytics at the main quantum resonance beta = 1.

At beta = 1 the kinetic factor is the identity on integer momenta and one
kick is a pure convolution with the kick harmonics; the dynamics is a
tight-binding hop with asymmetric amplitudes (K/2)(1 +- lam) = (k0/2)e^{+-y},
an imaginary-gauge lattice.  Its single quasi-energy band is

    eps(q) = k0 * cos(q + i*y)
           = k0 cosh(y) cos(q) - i k0 sinh(y) sin(q),

per kick.  Im eps peaks at q0 = -pi/2 where the group velocity is
v_g = k0 cosh(y) = K exactly and the curvature eps'' = -i k0 sinh(y) = -i*K*lam
is purely imaginary.  These functions provide independent oracles for the
split-step evolution: the exact integral solution evaluated by periodic
trapezoid quadrature, and the long-time Gaussian saddle profile.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import model
from .errors import QuadratureUnresolved

_MAX_NODES = 2**23


def _require_main_resonance(params):
    if params.beta != 1.0:
        raise ValueError(
            f"main-resonance analytics need beta = 1, got beta = {params.beta}"
        )


@dataclass(frozen=True)
class Dispersion:
    """Single-band dispersion samples and saddle data (per kick)."""

    q_grid: np.ndarray
    eps_t: np.ndarray
    q0: float
    group_velocity: float
    curvature: complex
    max_growth: float
    params: model.RotorParams


def band_value(params, q):
    """eps(q) = k0 cos(q + i y) per kick, for scalar or array q."""
    g = model.gauge_form(params)
    return g.k0_scaled * np.cos(np.asarray(q) + 1j * g.y)


def dispersion(params, q_count=513):
    """Evaluate the beta = 1 band on a uniform q grid over [-pi, pi)."""
    _require_main_resonance(params)
    g = model.gauge_form(params)
    q_grid = -np.pi + 2.0 * np.pi * np.arange(q_count) / q_count
    return Dispersion(
        q_grid=q_grid,
        eps_t=band_value(params, q_grid),
        q0=-np.pi / 2.0,
        group_velocity=g.k0_scaled * math.cosh(g.y),
        curvature=-1j * g.k0_scaled * math.sinh(g.y),
        max_growth=g.k0_scaled * math.sinh(g.y),
        params=params,
    )


def _start_nodes(params, n_kicks):
    g = model.gauge_form(params)
    oscillations = n_kicks * params.kick_strength * math.exp(g.y)
    return 16 * int(math.ceil(oscillations / math.pi)) + 64


def exact_resonance_state(params, n_kicks, rel_tol=1e-10, max_nodes=_MAX_NODES):
    """psi_l(n) = (1/2pi) int dq exp(i q l - i eps(q) n) on l in [-Ns, Ns].

    The integrand is periodic and entire, so the uniform trapezoid rule is
    spectrally accurate; nodes are doubled until no amplitude moves by more
    than rel_tol (relative to the profile peak, which also covers entries at
    the underflow floor).
    """
    _require_main_resonance(params)
    if n_kicks < 0:
        raise ValueError("n_kicks must be >= 0")
    ns = params.n_sites
    l = np.arange(-ns, ns + 1)
    nodes = model.next_pow2(max(_start_nodes(params, n_kicks), 2 * ns + 2))
    previous = None
    while nodes <= max_nodes:
        q = -np.pi + 2.0 * np.pi * np.arange(nodes) / nodes
        integrand = np.exp(-1j * band_value(params, q) * n_kicks)
        coeff = np.fft.ifft(integrand)
        psi = np.power(-1.0, np.abs(l)) * coeff[l % nodes]
        if previous is not None:
            scale = np.abs(psi).max()
            if np.abs(psi - previous).max() <= rel_tol * scale:
                return psi
        previous = psi
        nodes *= 2
    raise QuadratureUnresolved(
        f"amplitudes still moving after {nodes // 2} quadrature nodes"
    )


def asymptotic_profile(params, momenta, n_kicks):
    """Long-time saddle form of |psi_l(n)|^2: an amplified drifting Gaussian.

        |psi_l|^2 ~ exp(2*Im eps(q0)*n) / (2*pi*|eps''|*n)
                    * exp(-(l - v_g n)^2 / (|eps''| n))

    Valid for n >> 1 near the profile peak; Gaussian tails are outside the
    saddle approximation.  Convergence is slow: the neglected cubic phase of
    the band decays only like 1/sqrt(n), so pointwise peak errors are still
    tens of percent for n of a few hundred, while integrated masses agree to
    well under a percent.  The overall amplification overflows float64 once
    2*max_growth*n exceeds ~709.
    """
    _require_main_resonance(params)
    if n_kicks < 1:
        raise ValueError("asymptotic profile needs n_kicks >= 1")
    d = dispersion(params, q_count=3)
    l = np.asarray(momenta, dtype=float)
    curv = abs(d.curvature)
    if curv == 0.0:  # Hermitian limit: saddle width degenerates
        raise ValueError("asymptotic profile requires lam > 0 (|eps''| > 0)")
    gauss = np.exp(-((l - d.group_velocity * n_kicks) ** 2) / (curv * n_kicks))
    return np.exp(2.0 * d.max_growth * n_kicks) / (2.0 * np.pi * curv * n_kicks) * gauss
