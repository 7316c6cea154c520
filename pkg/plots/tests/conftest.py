"""Synthetic run directories exercising the documented CSV/JSON contract."""

import csv
import json
import math

import pytest


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path, payload):
    path.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n",
                    encoding="utf-8")


def _manifest(run_dir, scenario, outputs):
    _write_json(run_dir / "manifest.json", {
        "scenario": scenario, "completed": True, "outputs": outputs,
        "config": {"scenario": scenario},
    })


def make_run_dir(tmp_path, scenario):
    run_dir = tmp_path / scenario
    run_dir.mkdir(parents=True, exist_ok=True)
    L = 8
    times = [0.25 * n for n in range(24)]

    if scenario == "fig1b-micromotion":
        rows = [[t, 0.5 + 0.3 * math.sin(3 * t)] for t in times]
        _write_csv(run_dir / "micromotion.csv", ["time", "density"], rows)
        strobe = [[t, 0.5 - 0.002 * t] for t in times[::4]]
        _write_csv(run_dir / "stroboscopic.csv", ["time", "density"], strobe)
        _manifest(run_dir, scenario, ["micromotion.csv", "stroboscopic.csv"])

    elif scenario == "fig2-entanglement":
        rows = [[t, 0.48, math.exp(-0.1 * t) * math.cos(t), 0.4 * t,
                 0.5 + 0.02 * t] for t in times]
        _write_csv(run_dir / "series.csv",
                   ["time", "density", "staggered", "qfi_density",
                    "ghz_fidelity"], rows)
        corr = []
        for t in (times[0], times[-1]):
            for i in range(L):
                for j in range(L):
                    corr.append([t, i, j, (-1.0) ** (i - j) * min(t / 6, 1)])
        _write_csv(run_dir / "correlations.csv", ["time", "i", "j", "value"],
                   corr)
        _manifest(run_dir, scenario, ["series.csv", "correlations.csv"])

    elif scenario == "fig3a-domainwall":
        rows = [[k / 30 * math.pi, -2 * math.cos(k / 30 * math.pi),
                 0.2 - 0.27 * math.cos(k / 30 * math.pi),
                 abs(math.sin(k / 30 * math.pi)), 0.0, 0.1, -1.0, 0.0]
                for k in range(31)]
        _write_csv(run_dir / "domainwall.csv",
                   ["k", "dispersion", "delta", "lambda_abs", "lambda_re",
                    "lambda_im", "S_re", "S_im"], rows)
        _write_json(run_dir / "couplings.json",
                    {"J": 0.22, "h": 0.068, "g": -0.017})
        _manifest(run_dir, scenario, ["domainwall.csv", "couplings.json"])

    elif scenario == "fig3c-phase-diagram":
        rows = [[0.02 + 0.46 * x / 20, x / 10, 1.0 - 0.75 * x / 20,
                 -3 + 9 * x / 20, -0.4] for x in range(21)]
        _write_csv(run_dir / "phase_diagram.csv",
                   ["n0", "U0", "K", "J_over_h", "E"], rows)
        _write_json(run_dir / "solver.json", {
            "K_thresholds": [0.5, 0.125],
            "J_over_h_boundaries": [-3.0, 6.0], "quad_n": 64,
            "self_convergence_K_at_quarter": 1e-9,
        })
        _manifest(run_dir, scenario, ["phase_diagram.csv", "solver.json"])

    elif scenario == "figS2-gamma-sweep":
        rows = [[0.5 + 0.1 * k, 0.1 + 0.02 * k, 0.068, -0.017,
                 1 if 2 <= k <= 8 else 0,
                 8.0 * math.exp(-((k - 5) / 3) ** 2), 0.05, 0.47]
                for k in range(11)]
        _write_csv(run_dir / "gamma_sweep.csv",
                   ["gamma", "J", "h", "g", "resonant", "peak_qfi",
                    "min_abs_staggered", "mean_density"], rows)
        series = [[0.5 + 0.1 * k, t, 0.1 * t, 0.5, 0.48]
                  for k in range(11) for t in times[:5]]
        _write_csv(run_dir / "gamma_series.csv",
                   ["gamma", "time", "qfi_density", "staggered", "density"],
                   series)
        _manifest(run_dir, scenario, ["gamma_sweep.csv", "gamma_series.csv"])

    elif scenario == "figS3-distances":
        header = ["time", "p_z2", "p_z2p", "pair_weight"] + \
            [f"P_l{l}" for l in range(1, L)]
        rows = []
        for t in times:
            dist = [math.exp(-abs(l - t) / 2) for l in range(1, L)]
            norm = sum(dist) or 1.0
            rows.append([t, math.exp(-0.2 * t), 0.1, 0.3] +
                        [d / norm for d in dist])
        _write_csv(run_dir / "distances.csv", header, rows)
        _manifest(run_dir, scenario, ["distances.csv"])

    elif scenario == "fig4-hardware":
        rows = []
        for tag in ("pxp_delta", "vdw_gaussian"):
            speed = 0.5 if tag == "pxp_delta" else 0.6
            for cycle in range(12):
                for site in range(12):
                    d = min(site, 12 - site)
                    rows.append([cycle, site,
                                 math.exp(-max(d - speed * cycle, 0.0)), tag])
        _write_csv(run_dir / "heatmaps.csv",
                   ["cycle", "site", "value", "model_tag"], rows)
        _write_json(run_dir / "metrics.json",
                    {"metrics": {"max_blockade_violation": 0.01}})
        _manifest(run_dir, scenario, ["heatmaps.csv", "metrics.json"])

    elif scenario == "figS4-coherence-sweep":
        rows = []
        for tau in (2.0, 3.0, 4.0, 5.0):
            for eps in (0.1, 0.3, 0.5):
                htc = 8 * math.exp(-((tau - 3.5) ** 2 + (eps - 0.35) ** 2))
                rows.append([tau, eps, eps * tau / 32, 60.0, htc, 1e-3])
        _write_csv(run_dir / "coherence_grid.csv",
                   ["tau", "epsilon", "h", "t_c", "h_t_c", "fit_residual"],
                   rows)
        _write_json(run_dir / "summary.json", {
            "argmax": {"tau": 3.0, "epsilon": 0.3, "h_t_c": 7.5,
                       "index": [1, 1]},
            "t_star": 94.2, "L": 16, "failures": [],
        })
        _manifest(run_dir, scenario, ["coherence_grid.csv", "summary.json"])

    elif scenario == "effective-report":
        _write_json(run_dir / "effective_report.json", {
            "coefficients": {"J": 0.2246, "h": 0.068, "g": -0.0169},
            "operator_distances": {"closed_form_vs_magnus1_frobenius": 0.05},
            "validity_warnings": [],
        })
        _manifest(run_dir, scenario, ["effective_report.json"])

    else:
        raise ValueError(scenario)
    return run_dir


@pytest.fixture
def synthetic_run(tmp_path):
    return lambda scenario: make_run_dir(tmp_path, scenario)
