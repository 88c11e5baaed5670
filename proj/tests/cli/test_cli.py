#!/usr/bin/env python3
"""CLI contract test: artifact shapes, determinism, exit codes.

Usage: test_cli.py /path/to/latspec
Runs the binary in throwaway directories; no network, no fixed paths.
"""

import json
import pathlib
import subprocess
import sys
import tempfile

CLI = None

SMALL_CONFIG = {
    "grid": {"n": 8, "cap": 16, "eval_n": 4, "tiny_n": 3},
    "sweeps": {
        "k_list": [[0, 0, 0], [1.5707963267948966, 0, 0], [1.0, -0.5, 0.3]],
        "K_list": [[0, 0, 0], [0.5, 0, 0]],
        "z_list": [0.5, 2.0],
    },
}


def run(*args, config=None, cwd=None):
    cmd = [CLI] + list(args)
    if config is not None:
        cfg_path = pathlib.Path(cwd) / "config.json"
        cfg_path.write_text(json.dumps(config))
        cmd += ["--config", str(cfg_path)]
    return subprocess.run(cmd, capture_output=True, text=True, cwd=cwd, timeout=300)


def check(condition, message):
    if not condition:
        print(f"FAILED: {message}", file=sys.stderr)
        sys.exit(1)


def test_lambda0(tmp):
    proc = run("lambda0", "--out", tmp, "--json", cwd=tmp)
    check(proc.returncode == 0, f"lambda0 exited {proc.returncode}: {proc.stderr}")
    summary = json.loads(proc.stdout)
    artifact = json.loads((pathlib.Path(tmp) / "lambda0.json").read_text())
    for doc in (summary, artifact):
        check(
            set(doc) == {"lambda0", "half_slope", "full_slope", "residual"},
            f"unexpected lambda0 keys: {sorted(doc)}",
        )
        check(abs(doc["lambda0"] - 1.0062378251027815) < 1e-10, "lambda0 value drifted")
        check(doc["residual"] <= 1e-12, "lambda0 residual too large")


def test_dispersion_determinism(tmp):
    out1, out2 = str(pathlib.Path(tmp) / "a"), str(pathlib.Path(tmp) / "b")
    for out in (out1, out2):
        proc = run("dispersion", "--out", out, config=SMALL_CONFIG, cwd=tmp)
        check(proc.returncode == 0, f"dispersion exited {proc.returncode}: {proc.stderr}")
    csv1 = (pathlib.Path(out1) / "dispersion.csv").read_bytes()
    csv2 = (pathlib.Path(out2) / "dispersion.csv").read_bytes()
    check(csv1 == csv2, "dispersion.csv is not byte-identical across reruns")

    lines = csv1.decode().splitlines()
    check(lines[0].startswith("# config_hash: 0x"), f"bad hash line: {lines[0]}")
    check(len(lines[0]) == len("# config_hash: 0x") + 16, "hash is not 16 hex digits")
    check(lines[1] == "kx,ky,kz,e_min,has_bound,z", f"bad header: {lines[1]}")
    check(len(lines) == 2 + 3, "expected one row per k")
    row0 = lines[2].split(",")
    check(row0[4] == "1" and abs(float(row0[5])) <= 1e-8, "k=0 resonance row wrong")
    row1 = lines[3].split(",")
    check(abs(float(row1[5]) - 0.494450609662766) < 1e-8, "z(pi/2,0,0) drifted")


def test_tau_and_count_tiny(tmp):
    proc = run("tau", "--out", tmp, config=SMALL_CONFIG, cwd=tmp)
    check(proc.returncode == 0, f"tau exited {proc.returncode}: {proc.stderr}")
    lines = (pathlib.Path(tmp) / "tau.csv").read_text().splitlines()
    check(lines[1] == "Kx,Ky,Kz,tau,branch,band_min,band_max", f"bad header: {lines[1]}")
    check(len(lines) == 2 + 2, "expected one row per K")
    first = lines[2].split(",")
    check(abs(float(first[3])) <= 1e-6, "tau(0) should be ~0 at resonance coupling")
    check(first[4] in ("two-body-branch", "band-bottom"), f"bad branch: {first[4]}")

    proc = run("count-tiny", "--out", tmp, config=SMALL_CONFIG, cwd=tmp)
    check(proc.returncode == 0, f"count-tiny exited {proc.returncode}: {proc.stderr}")
    lines = (pathlib.Path(tmp) / "count_tiny.csv").read_text().splitlines()
    check(lines[1] == "Kx,Ky,Kz,z,n_direct,n_bs", f"bad header: {lines[1]}")
    check(len(lines) == 2 + 4, "expected K_list x z_list rows")
    for row in lines[2:]:
        cells = row.split(",")
        check(cells[4] == cells[5], f"count identity broken in row: {row}")


def test_exit_codes(tmp):
    proc = run("lambda0", "--config", "no_such_file.json", cwd=tmp)
    check(proc.returncode == 2, f"missing config should exit 2, got {proc.returncode}")

    proc = run("lambda0", config={"grid": {"bogus": 1}}, cwd=tmp)
    check(proc.returncode == 2, f"unknown key should exit 2, got {proc.returncode}")
    check("config error" in proc.stderr, f"stderr should name the config error: {proc.stderr}")

    proc = run("dispersion", config={"sweeps": {"k_list": []}}, cwd=tmp)
    check(proc.returncode == 2, f"empty sweep should exit 2, got {proc.returncode}")

    proc = run("no-such-command", cwd=tmp)
    check(proc.returncode == 2, f"bad subcommand should exit 2, got {proc.returncode}")

    proc = run("--help", cwd=tmp)
    check(proc.returncode == 0, "--help should exit 0")
    check("lambda0" in proc.stdout, "--help should list subcommands")

    # Aliased grid (nearest neighbor on n = 2) is a numerical precondition
    # failure at run time, not a config shape problem: exit 3.
    bad = {"grid": {"n": 2, "cap": 2}, "potential": {"type": "nearest_neighbor"}}
    proc = run("resonance", "--out", tmp, config=bad, cwd=tmp)
    check(proc.returncode == 3, f"aliasing should exit 3, got {proc.returncode}")
    check("numerical failure" in proc.stderr, f"stderr should flag it: {proc.stderr}")


def main():
    global CLI
    if len(sys.argv) != 2:
        print("usage: test_cli.py /path/to/latspec", file=sys.stderr)
        return 2
    CLI = sys.argv[1]
    for test in (
        test_lambda0,
        test_dispersion_determinism,
        test_tau_and_count_tiny,
        test_exit_codes,
    ):
        with tempfile.TemporaryDirectory() as tmp:
            test(tmp)
            print(f"ok: {test.__name__}")
    print("cli contract: all checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
