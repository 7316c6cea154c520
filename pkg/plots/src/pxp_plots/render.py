"""Figure builders, one per scenario kind.

Every builder takes the run directory and a matplotlib figure and fills it
from the CSV/JSON artifacts alone. Rendering is deterministic: fixed style,
no timestamps, stable SVG ids.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .contract import (ContractError, prefixed_columns, read_json,
                       read_manifest, read_table)

plt.rcParams.update({
    "svg.hashsalt": "driven-pxp-plots",
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
})


def _render_micromotion(run_dir: Path, fig):
    micro = read_table(run_dir, "micromotion.csv", ["time", "density"])
    strobe = read_table(run_dir, "stroboscopic.csv", ["time", "density"])
    ax = fig.subplots()
    ax.plot(micro["time"], micro["density"], color="black", lw=0.8,
            label="micromotion")
    ax.plot(strobe["time"], strobe["density"], "o-", color="crimson", ms=3,
            lw=1.2, label="stroboscopic")
    ax.set_xlabel("time")
    ax.set_ylabel(r"Rydberg density $\langle n \rangle$")
    ax.legend(loc="best")
    ax.set_title("Micromotion vs stroboscopic density")


def _render_entanglement(run_dir: Path, fig):
    series = read_table(run_dir, "series.csv",
                        ["time", "density", "staggered", "qfi_density",
                         "ghz_fidelity"])
    corr = read_table(run_dir, "correlations.csv", ["time", "i", "j", "value"])
    axes = fig.subplots(1, 3)
    t = series["time"]
    axes[0].plot(t, series["density"], color="tab:blue", label="density")
    axes[0].plot(t, np.abs(series["staggered"]), color="tab:red",
                 label="|staggered|")
    axes[0].set_xlabel("time")
    axes[0].legend(loc="best")
    axes[0].set_title("Order melting")

    times = sorted(set(corr["time"]))
    t_pick = times[-1]
    sel = [k for k, tv in enumerate(corr["time"]) if tv == t_pick]
    L = int(max(corr["i"])) + 1
    mat = np.zeros((L, L))
    for k in sel:
        mat[int(corr["i"][k]), int(corr["j"][k])] = corr["value"][k]
    im = axes[1].imshow(mat, cmap="RdBu_r", vmin=-1, vmax=1)
    axes[1].set_title(f"connected zz at t={t_pick:.1f}")
    axes[1].grid(False)
    fig.colorbar(im, ax=axes[1], fraction=0.046)

    axes[2].plot(t, series["ghz_fidelity"], color="tab:purple",
                 label="GHZ fidelity")
    ax2 = axes[2].twinx()
    ax2.plot(t, series["qfi_density"], color="tab:green", alpha=0.7,
             label="QFI density")
    axes[2].axhline(0.5, color="gray", lw=0.8, ls="--")
    axes[2].set_xlabel("time")
    axes[2].set_title("GHZ / QFI growth")
    axes[2].legend(loc="upper left")
    ax2.legend(loc="lower right")


def _render_domainwall(run_dir: Path, fig):
    table = read_table(run_dir, "domainwall.csv",
                       ["k", "dispersion", "delta", "lambda_abs"])
    axes = fig.subplots(1, 2)
    axes[0].plot(table["k"], table["dispersion"], label=r"$-2h\cos k$")
    axes[0].plot(table["k"], table["delta"], label=r"pair offset $\delta(k)$")
    axes[0].axhline(0.0, color="gray", lw=0.8)
    axes[0].set_xlabel("k")
    axes[0].legend(loc="best")
    axes[0].set_title("Domain-wall bands")
    axes[1].plot(table["k"], table["lambda_abs"], color="tab:orange")
    axes[1].set_xlabel("k")
    axes[1].set_ylabel(r"$|\lambda(k)|$")
    axes[1].set_title("Vacuum coupling")


def _render_phase_diagram(run_dir: Path, fig):
    table = read_table(run_dir, "phase_diagram.csv", ["n0", "K", "J_over_h"])
    meta = read_json(run_dir, "solver.json")
    ax = fig.subplots()
    jh = np.asarray(table["J_over_h"])
    K = np.asarray(table["K"])
    ax.plot(jh, K, color="black", lw=1.5, label="Luttinger parameter")
    for thresh in meta.get("K_thresholds", [0.5, 0.125]):
        ax.axhline(thresh, color="tab:orange", lw=0.8, ls="--")
        ax.annotate(f"K = {thresh}", (jh.min(), thresh),
                    textcoords="offset points", xytext=(4, 3), fontsize=8)
    lo, hi = meta.get("J_over_h_boundaries", [-3.0, 6.0])
    ax.axvspan(jh.min() - 0.5, lo, color="tab:blue", alpha=0.15)
    ax.axvspan(hi, jh.max() + 0.5, color="tab:red", alpha=0.15)
    ax.axvline(lo, color="tab:blue", lw=1.0)
    ax.axvline(hi, color="tab:red", lw=1.0)
    ax.set_xlabel("J / h")
    ax.set_ylabel("K")
    ax.set_title("Ground-state phase diagram (g = 0)")
    ax.legend(loc="best")


def _render_gamma_sweep(run_dir: Path, fig):
    table = read_table(run_dir, "gamma_sweep.csv",
                       ["gamma", "J", "h", "peak_qfi", "resonant"])
    axes = fig.subplots(2, 1, sharex=True)
    gam = np.asarray(table["gamma"])
    axes[0].plot(gam, table["peak_qfi"], "o-", color="tab:green")
    axes[0].set_ylabel("peak QFI density")
    res = np.asarray(table["resonant"]) > 0.5
    if res.any():
        axes[0].axvspan(gam[res].min(), gam[res].max(), color="tab:green",
                        alpha=0.12)
    J = np.asarray(table["J"])
    h = np.asarray(table["h"])
    axes[1].plot(gam, J - 2 * h, color="tab:blue", label="J - 2h")
    axes[1].fill_between(gam, -4 * np.abs(h), 4 * np.abs(h), color="tab:blue",
                         alpha=0.12, label="resonance window")
    axes[1].set_xlabel(r"$\gamma$")
    axes[1].legend(loc="best")


def _render_distances(run_dir: Path, fig):
    table = read_table(run_dir, "distances.csv", ["time", "p_z2", "p_z2p"])
    pl_cols = prefixed_columns(table, "P_l")
    if not pl_cols:
        raise ContractError("distances.csv lacks P_l* columns")
    axes = fig.subplots(1, 2)
    t = table["time"]
    axes[0].plot(t, table["p_z2"], label=r"$p_{Z_2}$")
    axes[0].plot(t, table["p_z2p"], label=r"$p_{Z_2'}$")
    axes[0].set_xlabel("time")
    axes[0].legend(loc="best")
    axes[0].set_title("Néel populations")
    mat = np.array([table[c] for c in pl_cols])
    im = axes[1].imshow(mat, aspect="auto", origin="lower", cmap="magma",
                        extent=(min(t), max(t), 1, len(pl_cols)))
    axes[1].set_xlabel("time")
    axes[1].set_ylabel("wall-pair distance l")
    axes[1].grid(False)
    fig.colorbar(im, ax=axes[1], fraction=0.046, label="P(l)")


def _render_hardware(run_dir: Path, fig):
    table = read_table(run_dir, "heatmaps.csv",
                       ["cycle", "site", "value", "model_tag"],
                       text_columns=("model_tag",))
    tags = sorted(set(table["model_tag"]))
    if len(tags) != 2:
        raise ContractError(f"expected two model tags, found {tags}")
    axes = fig.subplots(1, 2, sharey=True)
    for ax, tag in zip(axes, tags):
        sel = [k for k, t in enumerate(table["model_tag"]) if t == tag]
        cycles = int(max(table["cycle"][k] for k in sel)) + 1
        sites = int(max(table["site"][k] for k in sel)) + 1
        mat = np.zeros((cycles, sites))
        for k in sel:
            mat[int(table["cycle"][k]), int(table["site"][k])] = table["value"][k]
        im = ax.imshow(mat, aspect="auto", origin="lower", cmap="viridis",
                       vmin=0.0, vmax=1.0)
        ax.set_title(tag)
        ax.set_xlabel("site")
        ax.grid(False)
        fig.colorbar(im, ax=ax, fraction=0.046, label=r"$\langle n_i \rangle$")
    axes[0].set_ylabel("Floquet cycle")


def _render_coherence(run_dir: Path, fig):
    table = read_table(run_dir, "coherence_grid.csv",
                       ["tau", "epsilon", "h_t_c"])
    summary = read_json(run_dir, "summary.json")
    taus = sorted(set(table["tau"]))
    epss = sorted(set(table["epsilon"]))
    grid = np.full((len(taus), len(epss)), np.nan)
    for tau, eps, value in zip(table["tau"], table["epsilon"], table["h_t_c"]):
        grid[taus.index(tau), epss.index(eps)] = value
    ax = fig.subplots()
    im = ax.imshow(grid, aspect="auto", origin="lower", cmap="cividis",
                   extent=(min(epss), max(epss), min(taus), max(taus)))
    am = summary.get("argmax", {})
    if "epsilon" in am and "tau" in am:
        ax.plot(am["epsilon"], am["tau"], "r*", ms=14,
                label=f"max h t_c = {am.get('h_t_c', float('nan')):.2f}")
        ax.legend(loc="best")
    ax.set_xlabel(r"$|\epsilon|$")
    ax.set_ylabel(r"$\tau$")
    ax.grid(False)
    fig.colorbar(im, ax=ax, label=r"$h\, t_c$")
    ax.set_title("Coherence-time landscape")


def _render_effective(run_dir: Path, fig):
    payload = read_json(run_dir, "effective_report.json")
    coeffs = payload.get("coefficients")
    if not coeffs:
        raise ContractError("effective_report.json lacks 'coefficients'")
    ax = fig.subplots()
    names = ["J", "h", "g"]
    values = [coeffs[n] for n in names]
    ax.bar(names, values, color=["tab:blue", "tab:green", "tab:red"])
    ax.axhline(0.0, color="black", lw=0.8)
    dists = payload.get("operator_distances", {})
    lines = [f"{k} = {v:.3e}" for k, v in dists.items() if v is not None]
    ax.set_title("Engineered coefficients\n" + "; ".join(lines), fontsize=9)


RENDERERS = {
    "fig1b-micromotion": (_render_micromotion, (7.0, 4.0)),
    "fig2-entanglement": (_render_entanglement, (12.0, 3.6)),
    "fig3a-domainwall": (_render_domainwall, (9.0, 3.8)),
    "fig3c-phase-diagram": (_render_phase_diagram, (6.5, 4.5)),
    "figS2-gamma-sweep": (_render_gamma_sweep, (6.5, 5.5)),
    "figS3-distances": (_render_distances, (9.5, 4.0)),
    "fig4-hardware": (_render_hardware, (8.5, 4.0)),
    "figS4-coherence-sweep": (_render_coherence, (6.5, 4.8)),
    "effective-report": (_render_effective, (5.5, 4.0)),
}

KINDS = tuple(RENDERERS)


def render(run_dir: str | Path, kind: str | None = None,
           out_dir: str | Path | None = None) -> list[Path]:
    """Render a run directory to <kind>.png and <kind>.svg.

    The kind defaults to the manifest's scenario. Output files appear only
    on success (rendered to a temporary file, then moved into place).
    """
    run_dir = Path(run_dir)
    if kind is None:
        kind = read_manifest(run_dir)["scenario"]
    if kind not in RENDERERS:
        raise ContractError(
            f"no renderer for kind {kind!r}; known kinds: {', '.join(KINDS)}")
    builder, size = RENDERERS[kind]
    out_dir = Path(out_dir) if out_dir else run_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    fig = plt.figure(figsize=size)
    try:
        builder(run_dir, fig)
        fig.set_layout_engine("tight")
        written = []
        for ext, meta in (("png", {}), ("svg", {"Date": None})):
            final = out_dir / f"{kind}.{ext}"
            tmp_fd, tmp_name = tempfile.mkstemp(suffix=f".{ext}",
                                                dir=str(out_dir))
            os.close(tmp_fd)
            try:
                fig.savefig(tmp_name, format=ext, metadata=meta)
                os.replace(tmp_name, final)
            except Exception:
                os.unlink(tmp_name)
                raise
            written.append(final)
        return written
    finally:
        plt.close(fig)
