#!/usr/bin/env python3
"""End-to-end checks for the crd executable on the shipped configs."""

import argparse
import csv
import json
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema

failures = []


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def run(crd, command, config, out, *extra):
    proc = subprocess.run([crd, command, "-c", str(config), "-o", str(out), "-q", *extra],
                          capture_output=True, text=True)
    return proc.returncode


def fresh(work, name):
    path = work / name
    shutil.rmtree(path, ignore_errors=True)
    return path


def validate_report(schema, path, label):
    try:
        jsonschema.validate(json.loads(path.read_text()), schema)
        check(True, f"{label}: report.json matches the schema")
    except (jsonschema.ValidationError, OSError, ValueError) as e:
        check(False, f"{label}: report.json matches the schema ({e})")


def frame_header(path):
    with path.open() as f:
        return next(csv.reader(f))


def same_outputs(a, b, label):
    names = sorted(p.name for p in a.iterdir() if p.name != "meta.json")
    check(names == sorted(p.name for p in b.iterdir() if p.name != "meta.json"), f"{label}: same file set on rerun")
    for n in names:
        check((a / n).read_bytes() == (b / n).read_bytes(), f"{label}: {n} byte-identical on rerun")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--crd", required=True)
    ap.add_argument("--configs", required=True, type=Path)
    ap.add_argument("--schema", required=True, type=Path)
    ap.add_argument("--work", required=True, type=Path)
    args = ap.parse_args()
    args.work.mkdir(parents=True, exist_ok=True)
    schema = json.loads(args.schema.read_text())
    cfg = args.configs

    out = fresh(args.work, "analyze")
    check(run(args.crd, "analyze", cfg / "coupled_2d.ini", out) == 0, "analyze coupled_2d exits 0")
    validate_report(schema, out / "report.json", "analyze")
    report = json.loads((out / "report.json").read_text())
    check(report["h0"]["pass"] is True, "analyze: H0 holds for coupled_2d")

    out = fresh(args.work, "heat")
    check(run(args.crd, "simulate", cfg / "heat_1d.ini", out) == 0, "simulate heat_1d exits 0")
    validate_report(schema, out / "report.json", "heat")
    frames = sorted(out.glob("frame_*.csv"))
    check(len(frames) == 6, f"heat: 6 frames written (got {len(frames)})")
    check(frame_header(frames[0]) == ["x", "u1"], "heat: frame header is x,u1")
    diag = list(csv.DictReader((out / "diagnostics.csv").open()))
    check(len(diag) == len(frames), "heat: one diagnostics row per frame")
    # Decay of the first Dirichlet mode: exp(-t).
    l2 = [float(r["l2_u1"]) for r in diag]
    check(all(b < a for a, b in zip(l2, l2[1:])), "heat: L2 norm decreases")
    ratio = l2[-1] / l2[0]
    check(abs(ratio - 2.718281828459045 ** -1.0) < 1e-6, f"heat: L2 ratio matches exp(-1) (got {ratio:.9f})")
    meta = json.loads((out / "meta.json").read_text())
    check(meta["command"] == "simulate" and meta["scheme"]["steps"] == 100, "heat: meta.json records the run")

    out = fresh(args.work, "coupled")
    again = fresh(args.work, "coupled_again")
    check(run(args.crd, "simulate", cfg / "coupled_2d.ini", out) == 0, "simulate coupled_2d exits 0")
    check(run(args.crd, "simulate", cfg / "coupled_2d.ini", again) == 0, "simulate coupled_2d rerun exits 0")
    check(frame_header(out / "frame_000000.csv") == ["x", "y", "u1", "u2"], "coupled: frame header is x,y,u1,u2")
    same_outputs(out, again, "coupled")

    out = fresh(args.work, "kouachi")
    check(run(args.crd, "kouachi", cfg / "kouachi.ini", out) == 0, "kouachi preset exits 0")
    validate_report(schema, out / "report.json", "kouachi")
    check(frame_header(out / "frame_000000.csv") == ["x", "u1", "u2", "Q"], "kouachi: frame header carries Q")
    meta = json.loads((out / "meta.json").read_text())
    k = meta.get("kouachi", {})
    check(k.get("mean_dominance") is True, "kouachi: mean dominance recorded")
    check(k.get("balance_max_drift", 1.0) < 1e-6, f"kouachi: balance drift small ({k.get('balance_max_drift')})")

    out = fresh(args.work, "stationary")
    check(run(args.crd, "stationary", cfg / "stationary.ini", out) == 0, "stationary exits 0")
    bound = json.loads((out / "bound.json").read_text())
    check(bound["satisfied"] is True, "stationary: a-priori bound satisfied")
    check(bound["residual_norm"] < 1e-8, f"stationary: residual small ({bound['residual_norm']:.3e})")
    check(frame_header(out / "solution.csv") == ["x", "u1", "u2"], "stationary: solution header")

    out = fresh(args.work, "zero")
    check(run(args.crd, "analyze", cfg / "zero_matrix.ini", out) == 2, "zero matrix exits 2")
    err = json.loads((out / "error.json").read_text()) if (out / "error.json").exists() else {}
    check(err.get("kind") == "ZeroMatrix", f"zero matrix: error kind ZeroMatrix (got {err.get('kind')})")
    check(err.get("exit_status") == 2, "zero matrix: error.json records exit status 2")

    out = fresh(args.work, "missing")
    check(run(args.crd, "analyze", args.work / "does_not_exist.ini", out) != 0, "missing config fails")

    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
