"""Runs every subcommand once, validates the JSON against the schema and
checks exit codes, config files and sweeps."""
import json
import os
import subprocess
import sys
import tempfile

import jsonschema

cli, schema_path = sys.argv[1], sys.argv[2]
schema = json.load(open(schema_path))
failures = []


def run(args, expect=(0,)):
    r = subprocess.run([cli] + args, capture_output=True, text=True)
    if r.returncode not in expect:
        failures.append(f"{' '.join(args)}: exit {r.returncode}, stderr {r.stderr.strip()[:200]}")
    return r


def check_doc(path, command):
    doc = json.load(open(path))
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as e:
        failures.append(f"{command}: schema: {e.message}")
    if doc["command"] != command:
        failures.append(f"{command}: command field is {doc['command']}")
    return doc


with tempfile.TemporaryDirectory() as d:
    j = lambda name: os.path.join(d, name)
    cases = [
        ("constants", ["--p", "2", "--N", "3", "--alpha0", "1"]),
        ("weight", ["--p", "2", "--N", "3", "--R", "inf", "--grid", "20"]),
        ("moser-seq", ["--R", "inf", "--alpha-ratio", "1.1", "--k-max", "4"]),
        ("maximize", ["--restarts", "0", "--nodes", "800"]),
        ("transplant", ["--count", "4"]),
        ("transplant", ["--mode", "beta", "--beta", "0.5", "--count", "4"]),
        ("solve-elliptic", ["--tol", "1e-8", "--grid", "50"]),
        ("solve-elliptic", ["--nl", "f4", "--k", "1", "--beta-exp", "1", "--nl-alpha", "1",
                            "--bracket", "0.1,2", "--mp-level"]),
        ("rayleigh", ["--grid", "200"]),
    ]
    for i, (cmd, args) in enumerate(cases):
        out, csv = j(f"{i}.json"), j(f"{i}.csv")
        run([cmd] + args + ["--out", out, "--csv", csv], expect=(0, 2))
        if os.path.exists(out):
            check_doc(out, cmd)
            header = open(csv).readline().strip().split(",")
            if not header or not header[0]:
                failures.append(f"{cmd}: empty CSV header")
        else:
            failures.append(f"{cmd}: no output written")

    doc = json.load(open(j("1.json")))
    if doc["config"]["R"] != "inf":
        failures.append("R = inf not serialized as \"inf\"")
    if doc["timing"] is not None:
        failures.append("timing present without --timing")
    run(["constants", "--timing", "--out", j("t.json")])
    if json.load(open(j("t.json")))["timing"] is None:
        failures.append("--timing did not record timing")

    # invalid input exits 1 and writes nothing
    run(["constants", "--p", "5", "--N", "3", "--out", j("bad.json")], expect=(1,))
    if os.path.exists(j("bad.json")):
        failures.append("invalid run left an output file")
    run(["maximize", "--no-such-flag"], expect=(1,))
    run(["--help"], expect=(0,))

    # config section, with a flag overriding it
    with open(j("cfg.toml"), "w") as f:
        f.write("[constants]\np = 2.5\nN = 4\n")
    run(["--config", j("cfg.toml"), "constants", "--N", "5", "--out", j("cfg.json")])
    cfg = json.load(open(j("cfg.json")))["config"]
    if cfg["p"] != 2.5 or cfg["N"] != 5:
        failures.append(f"config file handling: {cfg}")

    # sweep writes one document per value, identical to the single runs
    run(["constants", "--sweep", "p=1.5:0.5:2.5", "--out", j("sw.json")])
    for v in ("1.5", "2", "2.5"):
        path = j(f"sw_p{v}.json")
        if not os.path.exists(path):
            failures.append(f"sweep output {path} missing")
            continue
        run(["constants", "--p", v, "--out", j(f"single_{v}.json")])
        if open(path).read() != open(j(f"single_{v}.json")).read():
            failures.append(f"sweep value {v} differs from the single run")

for f in failures:
    print("FAIL", f)
print("ok" if not failures else f"{len(failures)} failures")
sys.exit(1 if failures else 0)
