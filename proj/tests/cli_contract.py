"""End-to-end contract checks for the polypin command-line tool.

Usage: cli_contract.py <polypin executable> <schemas directory>
"""

import csv
import io
import json
import os
import subprocess
import sys
import tempfile

import jsonschema

EXE, SCHEMAS = sys.argv[1], sys.argv[2]
failures = []


def run(*args, env=None):
    return subprocess.run([EXE, *args], capture_output=True, env=env, timeout=1200)


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def schema(name):
    with open(os.path.join(SCHEMAS, name + ".schema.json")) as fh:
        return json.load(fh)


def validates(doc, name):
    try:
        jsonschema.validate(doc, schema(name))
        return True
    except jsonschema.ValidationError as e:
        print("     ", e.message)
        return False


def json_case(name, args, schema_name):
    first = run(*args)
    check(first.returncode == 0, f"{name}: exit 0")
    doc = json.loads(first.stdout)
    check(validates(doc, schema_name), f"{name}: output validates against {schema_name}.schema.json")
    second = run(*args)
    check(first.stdout == second.stdout, f"{name}: byte-identical re-run")
    return doc


def csv_case(name, args, header):
    first = run(*args)
    check(first.returncode == 0, f"{name}: exit 0")
    text = first.stdout.decode()
    check(text.splitlines()[0] == header, f"{name}: CSV header '{header}'")
    rows = list(csv.reader(io.StringIO(text)))
    check(all(len(r) == len(rows[0]) for r in rows), f"{name}: rectangular CSV")
    check(first.stdout == run(*args).stdout, f"{name}: byte-identical re-run")
    return rows


# Every JSON-emitting command validates against its published schema.
doc = json_case("phase TH1", ["phase", "--a", "0.4", "--b", "0.1"], "phase")
check(doc["classification"]["label"] == "TH1_LOCALIZED", "phase --a 0.4 --b 0.1 is TH1_LOCALIZED")
doc = json_case("phase BC1", ["phase", "--a", "0.3", "--b", "0.3", "--beta", "1", "--n", "100000"], "phase")
check(doc["classification"]["label"] == "BC1_DIAGONAL", "phase BC1 label")
check(abs(doc["prediction"]["constant"] - 0.99) < 0.01, "phase BC1 kappa(1) close to 0.99")
doc = json_case("phase R3", ["phase", "--a", "0.6", "--b", "0.7"], "phase")
check(doc["classification"]["label"] == "R3_SRW", "phase --a 0.6 --b 0.7 is R3_SRW")
json_case("free-energy", ["free-energy", "--t", "40", "--delta", "0.1"], "free_energy")
json_case("free-energy point", ["free-energy", "--a", "0.4", "--b", "0.1", "--n", "10000"], "free_energy")
json_case("renewal", ["renewal", "--t", "20", "--delta", "0.2"], "renewal")
json_case("sample json", ["sample", "--t", "8", "--delta", "0.3", "--n", "200", "--samples", "50",
                          "--format", "json"], "sample")
json_case("experiment", ["experiment", "--a", "0.3", "--b", "0.3", "--n", "2000", "--samples", "300",
                         "--seed", "4"], "experiment")
doc = json_case("verify-bounds", ["verify-bounds", "--t", "8,16,32", "--k-max", "20"], "verify_bounds")
check([r["T"] for r in doc["rows"]] == [8, 16, 32], "verify-bounds has one row per T")

# CSV outputs carry their header rows.
csv_case("renewal dump", ["renewal", "--t", "20", "--delta", "0.2", "--dump"], "n,f,u")
rows = csv_case("sample csv", ["sample", "--a", "0.45", "--b", "0.35", "--beta", "1", "--n", "1000000",
                               "--samples", "10000", "--seed", "7"],
                "sample_id,S_N,tau_last,L,m,visited_other")
check(len(rows) == 10001, "sample csv has one row per sample")
csv_case("experiment csv", ["experiment", "--a", "0.3", "--b", "0.3", "--n", "2000", "--samples", "300",
                            "--format", "csv"], "name,statistic,threshold,verdict")
csv_case("verify-bounds csv", ["verify-bounds", "--t", "8,16", "--k-max", "5", "--format", "csv"],
         "T,max_ratio,arg_k,arg_n,fitted_C,fitted_C_prime,max_ratio_constrained")
csv_case("phase csv", ["phase", "--a", "0.4", "--b", "0.1", "--format", "csv"], "a,b,label,sub_tag")

# Thread count never changes the output.
one = run("sample", "--t", "10", "--delta", "0.2", "--n", "2000", "--samples", "2000", "--threads", "1")
four = run("sample", "--t", "10", "--delta", "0.2", "--n", "2000", "--samples", "2000", "--threads", "4")
check(one.stdout == four.stdout, "sample output independent of --threads")
env = dict(os.environ, POLYPIN_THREADS="3")
check(run("sample", "--t", "10", "--delta", "0.2", "--n", "2000", "--samples", "2000", env=env).stdout
      == one.stdout, "POLYPIN_THREADS fallback accepted, output unchanged")

with tempfile.TemporaryDirectory() as tmp:
    # Files are written atomically and identical to stdout.
    out = os.path.join(tmp, "s.csv")
    r = run("sample", "--t", "10", "--delta", "0.2", "--n", "2000", "--samples", "2000", "--out", out)
    check(r.returncode == 0 and r.stdout == b"", "--out writes nothing to stdout")
    with open(out, "rb") as fh:
        check(fh.read() == one.stdout, "--out file equals stdout output")
    check(os.listdir(tmp) == ["s.csv"], "no temporary files left behind")

    # Config round trip: saving and reloading reproduces the run exactly.
    cfg = os.path.join(tmp, "cfg.json")
    direct = run("experiment", "--a", "2/5", "--b", "0.1", "--n", "4000", "--samples", "200", "--seed", "9",
                 "--save-config", cfg)
    with open(cfg) as fh:
        saved = json.load(fh)
    check(validates(saved, "run_config"), "saved config validates against run_config.schema.json")
    check(saved["a"] == "2/5" and saved["seed"] == 9, "saved config keeps exponent text and seed")
    again = run("--config", cfg)
    check(again.returncode == 0 and again.stdout == direct.stdout, "run from --config reproduces the output")
    cfg2 = os.path.join(tmp, "cfg2.json")
    run("--config", cfg, "--save-config", cfg2)
    with open(cfg) as a, open(cfg2) as b:
        check(json.load(a) == json.load(b), "config round-trips losslessly")

    # Parameter errors exit with 2 and leave no output behind.
    bad = os.path.join(tmp, "bad.csv")
    r = run("sample", "--t", "7", "--delta", "0.1", "--n", "10", "--out", bad)
    check(r.returncode == 2, "odd T is a parameter error (exit 2)")
    check(not os.path.exists(bad), "no partial output on error")
    check(run("phase", "--a", "0.4").returncode == 2, "missing --b exits 2")
    check(run("nonsense").returncode == 2, "unknown subcommand exits 2")
    check(run("phase", "--a", "0.4", "--b", "0.1", "--format", "xml").returncode == 2, "bad format exits 2")
    check(run("experiment", "--a", "0.3", "--b", "0.1", "--n", "4000000").returncode == 3,
          "guardrail breach is reported as infeasible (exit 3)")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
