"""Figure rendering for the CLI report paths (PNG alongside each CSV)."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_DPI = 150


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def plot_spectrum(spectrum, path):
    """Re and Im quasi-energies by mode index; edge-flagged modes greyed."""
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.6))
    idx = np.arange(spectrum.n_modes)
    keep = ~spectrum.edge_flagged
    for ax, values, label in (
        (axes[0], spectrum.eps_t.real, r"Re $\epsilon T$"),
        (axes[1], spectrum.eps_t.imag, r"Im $\epsilon T$"),
    ):
        ax.plot(idx[~keep], values[~keep], ".", ms=2, color="0.8", label="edge-flagged")
        ax.plot(idx[keep], values[keep], ".", ms=2, color="C0", label="retained")
        ax.set_xlabel("mode index")
        ax.set_ylabel(label)
    axes[0].legend(loc="best", fontsize=8)
    return _save(fig, path)


def plot_threshold(results, path):
    """Detector scans per beta and, when several, the threshold curve."""
    n = len(results)
    if n > 1:
        fig, axes = plt.subplots(1, 2, figsize=(9, 3.6))
        ax_scan, ax_curve = axes
    else:
        fig, ax_scan = plt.subplots(figsize=(5, 3.6))
        ax_curve = None
    for two_pi_beta, res in results:
        scan = np.asarray(res.scan)
        ax_scan.semilogy(
            scan[:, 0],
            np.maximum(scan[:, 1], 1e-18),
            ".-",
            label=rf"$2\pi\beta={two_pi_beta:g}$",
        )
    ax_scan.axhline(results[0][1].eta, color="k", ls=":", lw=1)
    ax_scan.set_xlabel(r"$\lambda$")
    ax_scan.set_ylabel(r"mean $|\mathrm{Im}\,\epsilon T|$")
    ax_scan.legend(fontsize=7)
    if ax_curve is not None:
        xs = [tpb for tpb, _ in results]
        ys = [res.lambda_pt for _, res in results]
        ax_curve.plot(xs, ys, "o-")
        ax_curve.set_xlabel(r"$2\pi\beta$")
        ax_curve.set_ylabel(r"$\lambda_{PT}$")
    return _save(fig, path)


def plot_bands(bands, path):
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.6))
    for m in range(bands.denom):
        axes[0].plot(bands.q_grid, bands.eps_t[:, m].real, ".", ms=2)
        axes[1].plot(bands.q_grid, bands.eps_t[:, m].imag, ".", ms=2)
    axes[0].set_ylabel(r"Re $\epsilon T$")
    axes[1].set_ylabel(r"Im $\epsilon T$")
    for ax in axes:
        ax.set_xlabel("q")
    fig.suptitle(f"{bands.denom} quasi-energy bands", fontsize=10)
    return _save(fig, path)


def plot_evolution(series, path):
    fig, axes = plt.subplots(2, 2, figsize=(9, 6.5))
    n = series.kicks
    axes[0, 0].semilogy(n, series.norm)
    axes[0, 0].set_ylabel("P(n)")
    axes[0, 1].plot(n, series.mean_l)
    axes[0, 1].set_ylabel(r"$\langle l \rangle$")
    axes[1, 0].plot(n, series.spread)
    axes[1, 0].set_ylabel(r"$\langle \Delta l \rangle$")
    for ax in (axes[0, 0], axes[0, 1], axes[1, 0]):
        ax.set_xlabel("kick n")
    ax = axes[1, 1]
    ns = series.params.n_sites
    momenta = np.arange(-ns, ns + 1)
    for kick in sorted(series.snapshots):
        profile = series.snapshots[kick]
        total = profile.sum()
        if total > 0:
            ax.semilogy(momenta, np.maximum(profile / total, 1e-30), lw=0.8, label=f"n={kick}")
    ax.set_ylim(1e-12, 1.5)
    ax.set_xlabel("l")
    ax.set_ylabel(r"$|\psi_l|^2$ (normalized)")
    if series.snapshots:
        ax.legend(fontsize=6)
    return _save(fig, path)


def plot_resonance(disp, momenta, exact_abs2, asymptotic_abs2, n_kicks, path):
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.6))
    axes[0].plot(disp.q_grid, disp.eps_t.real, label="Re")
    axes[0].plot(disp.q_grid, disp.eps_t.imag, label="Im")
    axes[0].axvline(disp.q0, color="k", ls=":", lw=1)
    axes[0].set_xlabel("q")
    axes[0].set_ylabel(r"$\epsilon(q)T$")
    axes[0].legend(fontsize=8)
    axes[1].semilogy(momenta, np.maximum(exact_abs2, 1e-300), label="exact")
    axes[1].semilogy(momenta, np.maximum(asymptotic_abs2, 1e-300), "--", label="asymptotic")
    peak = exact_abs2.max()
    axes[1].set_ylim(peak * 1e-8, peak * 3)
    axes[1].set_xlabel("l")
    axes[1].set_ylabel(rf"$|\psi_l({n_kicks})|^2$")
    axes[1].legend(fontsize=8)
    return _save(fig, path)


def plot_cavity(run, path):
    fig, axes = plt.subplots(2, 2, figsize=(9, 6.5))
    spacing = run.config.peak_spacing
    ff_final = run.far_fields[-1]
    axes[0, 0].plot(ff_final.positions / spacing, ff_final.intensity)
    axes[0, 0].set_xlabel(r"$X / (\lambda_0 f / a)$")
    axes[0, 0].set_ylabel(f"far-field intensity, trip {run.trips[-1]}")
    orders = [p.order for p in ff_final.peaks]
    lim = max(5, min(50, max(abs(o) for o in orders))) if orders else 5
    axes[0, 0].set_xlim(-lim, lim)
    axes[0, 1].plot(run.trips, run.mean_x, "o-", ms=3)
    axes[0, 1].set_ylabel(r"$\langle X \rangle / (\lambda_0 f/a)$")
    axes[1, 0].plot(run.trips, run.std_x, "o-", ms=3)
    axes[1, 0].set_ylabel(r"$\langle \Delta X \rangle / (\lambda_0 f/a)$")
    axes[1, 1].semilogy(run.trips, run.power / run.power[0])
    axes[1, 1].set_ylabel("power (trip-0 units)")
    for ax in (axes[0, 1], axes[1, 0], axes[1, 1]):
        ax.set_xlabel("round trip n")
    return _save(fig, path)
