"""End-to-end tests of the command-line tool.

The binary path comes from the RND_CLI environment variable (set by the
test harness).  Numeric output is printed with 17 significant digits, so a
text round-trip through CSV or stdout is bitwise-exact and the tests can
compare CLI results against the Python module without tolerances.
"""

import math
import os
import subprocess

import numpy as np
import pytest

import rnd

CLI = os.environ.get("RND_CLI")

pytestmark = pytest.mark.skipif(not CLI, reason="RND_CLI not set")


def run_cli(*args, expect=0):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True, timeout=240)
    assert proc.returncode == expect, (
        f"exit {proc.returncode} != {expect}\nstdout:\n{proc.stdout}\nstderr:\n{proc.stderr}"
    )
    return proc


def parse_kv(stdout):
    out = {}
    for line in stdout.splitlines():
        if "=" in line:
            key, _, value = line.partition("=")
            out[key] = value
    return out


def write_points_csv(path, points):
    with open(path, "w", newline="") as handle:
        for row in np.atleast_2d(points):
            handle.write(",".join(format(v, ".17g") for v in row) + "\n")


def read_csv_rows(path):
    with open(path, "r") as handle:
        lines = [line.rstrip("\n").rstrip("\r") for line in handle]
    trailers = [line for line in lines if line.startswith("#")]
    body = [line for line in lines if line and not line.startswith("#")]
    return body[0], [line.split(",") for line in body[1:]], trailers


@pytest.fixture
def gaussian_samples(tmp_path):
    stream = np.random.default_rng(2024)
    xp = stream.normal(size=(40, 1))
    xq = 0.8 * stream.normal(size=(35, 1))
    p_csv = tmp_path / "p.csv"
    q_csv = tmp_path / "q.csv"
    write_points_csv(p_csv, xp)
    write_points_csv(q_csv, xq)
    return xp, xq, str(p_csv), str(q_csv)


# ---------------------------------------------------------------------------
# estimate


def test_estimate_full_matches_module(gaussian_samples, tmp_path):
    xp, xq, p_csv, q_csv = gaussian_samples
    out_dir = tmp_path / "out_full"
    proc = run_cli(
        "estimate", p_csv, q_csv,
        "--mode", "full", "--alpha", "0.5",
        "--kernel", "gaussian", "--bandwidth", "1.0",
        "--out", str(out_dir),
    )
    kv = parse_kv(proc.stdout)
    assert float(kv["alpha"]) == 0.5
    assert kv["mode"] == "full"
    assert int(kv["m"]) == 40
    assert int(kv["kernel_evals"]) == 40 * 40 + 40 * 35
    assert int(kv["solver_flops"]) == 40**3 // 3
    assert os.path.exists(kv["model"])

    # the saved model must agree bitwise with an in-process fit on the same data
    spec = rnd.KernelSpec.gaussian(d=1, sigma=1.0)
    want = rnd.fit_full(spec, xp, xq, 0.5)
    got = rnd.load_model(kv["model"])
    assert np.array_equal(np.asarray(got.c), np.asarray(want.c))
    assert got.c_prime == want.c_prime
    probe_max = float(np.max(np.abs(np.asarray(rnd.evaluate(want, xp)))))
    assert float(kv["max_abs_beta_on_probe"]) == probe_max


def test_estimate_nystrom_fixed_subsample(gaussian_samples, tmp_path):
    _, _, p_csv, q_csv = gaussian_samples
    out_dir = tmp_path / "out_nys"
    proc = run_cli(
        "estimate", p_csv, q_csv,
        "--mode", "nystrom", "--subsample", "5", "--alpha", "0.3",
        "--seed", "9", "--out", str(out_dir),
    )
    kv = parse_kv(proc.stdout)
    assert kv["mode"] == "nystrom"
    assert int(kv["m"]) == 5
    assert int(kv["kernel_evals"]) == 2 * 5 * 5
    assert int(kv["solver_flops"]) == 5**3 // 3 + 5 * 5
    model = rnd.load_model(kv["model"])
    assert model.mode == rnd.FitMode.nystrom
    assert model.n_full == 40 and model.m_full == 35
    assert len(np.asarray(model.c)) == 5


def test_estimate_huge_alpha_flattens_estimate(gaussian_samples, tmp_path):
    _, _, p_csv, q_csv = gaussian_samples
    proc = run_cli(
        "estimate", p_csv, q_csv,
        "--mode", "full", "--alpha", "1e6",
        "--out", str(tmp_path / "out_flat"),
    )
    kv = parse_kv(proc.stdout)
    assert float(kv["max_abs_beta_on_probe"]) <= 1e-3


# ---------------------------------------------------------------------------
# evaluate


def test_evaluate_round_trips_model_bitwise(gaussian_samples, tmp_path):
    xp, xq, p_csv, q_csv = gaussian_samples
    out_dir = tmp_path / "fit"
    kv = parse_kv(
        run_cli(
            "estimate", p_csv, q_csv,
            "--mode", "full", "--alpha", "0.25",
            "--out", str(out_dir),
        ).stdout
    )

    probes = np.linspace(-2.0, 2.0, 17).reshape(-1, 1)
    probes_csv = tmp_path / "probes.csv"
    write_points_csv(probes_csv, probes)
    eval_dir = tmp_path / "eval"
    kv2 = parse_kv(
        run_cli(
            "evaluate", str(probes_csv), "--model", kv["model"], "--out", str(eval_dir)
        ).stdout
    )
    assert int(kv2["points"]) == 17

    header, rows, _ = read_csv_rows(kv2["out"])
    assert header == "beta"
    got = np.array([float(r[0]) for r in rows])
    model = rnd.load_model(kv["model"])
    want = np.asarray(rnd.evaluate(model, probes))
    assert np.array_equal(got, want)


def test_evaluate_missing_model_fails(tmp_path):
    probes_csv = tmp_path / "probes.csv"
    write_points_csv(probes_csv, np.zeros((3, 1)))
    proc = subprocess.run(
        [CLI, "evaluate", str(probes_csv), "--model", str(tmp_path / "no_such.json")],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 1
    assert "error:" in proc.stderr


# ---------------------------------------------------------------------------
# effdim


def test_effdim_profile_contract(gaussian_samples, tmp_path):
    xp, _, p_csv, _ = gaussian_samples
    out_dir = tmp_path / "effdim"
    kv = parse_kv(run_cli("effdim", p_csv, "--out", str(out_dir)).stdout)

    header, rows, trailers = read_csv_rows(kv["out"])
    assert header == "alpha,n_eff,n_inf"
    assert len(rows) == 20  # default grid size
    alphas = np.array([float(r[0]) for r in rows])
    n_eff = np.array([float(r[1]) for r in rows])
    n_inf = np.array([float(r[2]) for r in rows])
    assert np.all(np.diff(alphas) > 0)
    assert np.all(np.diff(n_eff) <= 1e-12)  # nonincreasing in alpha
    assert np.all(n_inf >= n_eff - 1e-12)

    star_trailer = [t for t in trailers if t.startswith("# alpha_star=")]
    assert len(star_trailer) == 1
    star = float(star_trailer[0].split("=", 1)[1])
    assert float(kv["alpha_star"]) == star
    spec = rnd.KernelSpec.gaussian(d=1, sigma=1.0)
    assert star == rnd.alpha_star(spec, xp)  # bitwise: same code, same data
    assert alphas[0] == pytest.approx(star / 10.0, rel=1e-12)
    assert alphas[-1] == 1.0


# ---------------------------------------------------------------------------
# convergence


def test_convergence_small_grid(tmp_path):
    cfg = tmp_path / "conv.toml"
    cfg.write_text("[grid]\nsizes = 40 80\nseeds = 1 2 3\n")
    out_dir = tmp_path / "conv"
    proc = run_cli(
        "convergence", "--config", str(cfg),
        "--mc-points", "2000", "--subsample", "20",
        "--out", str(out_dir),
    )
    kv = parse_kv(proc.stdout)
    assert int(kv["rows"]) == 6
    slope = float(kv["slope"])
    assert math.isfinite(slope)

    header, rows, trailers = read_csv_rows(kv["out"])
    assert header == "n,m,seed,alpha,m_sub,l2p_error,fit_flops,error"
    assert len(rows) == 8  # 6 per-seed rows + 2 median rows
    median_rows = [r for r in rows if r[2] == "median"]
    assert len(median_rows) == 2
    assert all(r[7] == "" for r in rows)  # no errors recorded
    slope_trailer = [t for t in trailers if t.startswith("# slope=")]
    assert len(slope_trailer) == 1
    assert float(slope_trailer[0].split("=", 1)[1]) == slope

    # fixed subsample of 20: the per-fit flop ledger is exact and size-free
    for r in rows:
        if r[2] != "median":
            assert int(r[4]) == 20
            assert int(r[6]) == 2 * 20 * 20 + 20**3 // 3 + 20 * 20


def test_convergence_failure_sets_exit_code(tmp_path):
    cfg = tmp_path / "bad.toml"
    cfg.write_text(
        "[kernel]\nfamily = polynomial\ndegree = 1\noffset = 1.0\ndomain_radius = 0.01\n"
        "[grid]\nsizes = 40\nseeds = 1 2\n"
    )
    out_dir = tmp_path / "bad"
    proc = run_cli(
        "convergence", "--config", str(cfg),
        "--mc-points", "500", "--subsample", "10",
        "--out", str(out_dir),
        expect=2,
    )
    kv = parse_kv(proc.stdout)
    _, rows, _ = read_csv_rows(kv["out"])
    data_rows = [r for r in rows if r[2] != "median"]
    assert data_rows and all("domain" in r[7] for r in data_rows)


def test_unknown_config_key_is_rejected(tmp_path):
    cfg = tmp_path / "typo.toml"
    cfg.write_text("[kernel]\nflavor = gaussian\n")
    proc = subprocess.run(
        [CLI, "convergence", "--config", str(cfg)],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 1
    assert "config: unknown key 'kernel.flavor'" in proc.stderr


# ---------------------------------------------------------------------------
# bench


def test_bench_small_sweep(tmp_path):
    cfg = tmp_path / "bench.toml"
    cfg.write_text("[bench]\nnystrom_sizes = 64 128\nfull_sizes = 32 64\n")
    out_dir = tmp_path / "bench"
    proc = run_cli("bench", "--config", str(cfg), "--out", str(out_dir))
    kv = parse_kv(proc.stdout)

    header, rows, trailers = read_csv_rows(kv["out"])
    assert header == "n,m_sub,mode,kernel_evals,solver_flops,wall_seconds,error"
    assert len(rows) == 4
    by_key = {(r[0], r[2]): r for r in rows}
    # m = ceil(sqrt(n) log n): 64 -> 34, 128 -> 55; ledgers are exact integers
    assert int(by_key[("64", "nystrom")][3]) == 2 * 34 * 34
    assert int(by_key[("64", "nystrom")][4]) == 34**3 // 3 + 34 * 34
    assert int(by_key[("128", "nystrom")][3]) == 2 * 55 * 55
    assert int(by_key[("32", "full")][3]) == 2 * 32 * 32
    assert int(by_key[("32", "full")][4]) == 32**3 // 3
    assert int(by_key[("64", "full")][4]) == 64**3 // 3

    trailer_map = {}
    for t in trailers:
        key, _, value = t[2:].partition("=")
        trailer_map[key] = float(value)
    assert trailer_map["nystrom_exponent"] == float(kv["nystrom_exponent"])
    assert trailer_map["full_exponent"] == float(kv["full_exponent"])
    # exact power laws cubed-vs-squared: full is steeper than the subsampled path
    assert trailer_map["full_exponent"] > trailer_map["nystrom_exponent"]
