#!/usr/bin/env python3
"""Runs gamma2lab analyze over a small corpus and validates every report
against docs/report.schema.json."""

import argparse
import json
import pathlib
import subprocess
import sys

import jsonschema


def run(tool, *args):
    proc = subprocess.run([tool, *args], capture_output=True, text=True)
    if proc.returncode != 0:
        sys.exit(f"{' '.join(args)}: exit {proc.returncode}\n{proc.stderr}")
    return proc.stdout


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--tool", required=True)
    ap.add_argument("--schema", required=True)
    ap.add_argument("--tmp", required=True)
    args = ap.parse_args()

    tmp = pathlib.Path(args.tmp)
    tmp.mkdir(parents=True, exist_ok=True)
    schema = json.loads(pathlib.Path(args.schema).read_text())
    validator = jsonschema.Draft202012Validator(schema)

    inputs = {
        "pmodp.bmx": ["pmodp", "--q", "3", "--p", "5"],
        "random.bmx": ["random", "--m", "40", "--n", "40", "--density", "0.2", "--seed", "3"],
        "wide.bmx": ["random", "--m", "6", "--n", "30", "--density", "0.3", "--seed", "4"],
        "boxes.json": ["boxes", "--n", "12", "--d", "2", "--seed", "5"],
        "dominance.json": ["dominance", "--n", "10", "--s", "2", "--t", "2", "--seed", "6"],
    }
    flag_sets = [[], ["--exact"], ["--exact", "--disc", "--blocky"], ["--disc", "--no-timings"]]

    checked = 0
    for name, gen in inputs.items():
        path = tmp / name
        run(args.tool, "gen", *gen, "--out", str(path))
        for flags in flag_sets:
            report = json.loads(run(args.tool, "analyze", str(path), *flags))
            errors = sorted(validator.iter_errors(report), key=lambda e: list(e.path))
            if errors:
                for e in errors:
                    print(f"{name} {flags}: {list(e.path)}: {e.message}", file=sys.stderr)
                sys.exit(1)
            checked += 1
    print(f"{checked} reports valid")


if __name__ == "__main__":
    main()
