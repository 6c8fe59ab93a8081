"""Command-line front end.

Every subcommand reads its parameters from (lowest to highest precedence)
built-in defaults, an optional JSON config file, and command-line flags.
Results are written as CSV (stdout unless ``--out`` is given) ending in a
``# config-hash=<sha256>`` line; ``--svg`` adds a deterministic chart.

Exit codes: 0 success, 2 configuration error, 3 numerical error,
4 acceptance failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .report import config_hash, csv_text, fmt, svg_chart
from .symbolic import ConvergenceError, EmptySubshiftError, IncidenceMatrix, SymbolicPoint, load_forbidden

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_ACCEPTANCE = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


# -- parameter parsing --------------------------------------------------------------------

def parse_matrix(spec) -> IncidenceMatrix:
    if isinstance(spec, list):
        return IncidenceMatrix.from_array(spec)
    if not isinstance(spec, str):
        raise ConfigError(f"matrix: cannot interpret {spec!r}")
    if spec in ("full2", "golden"):
        return IncidenceMatrix.full(2) if spec == "full2" else IncidenceMatrix.golden_mean()
    if spec.startswith("full:"):
        return IncidenceMatrix.full(int(spec[5:]))
    if spec.lstrip().startswith("["):
        return IncidenceMatrix.from_array(json.loads(spec))
    path = Path(spec)
    if not path.exists():
        raise ConfigError(f"matrix: no such file or built-in name {spec!r}")
    doc = json.loads(path.read_text())
    return IncidenceMatrix.from_array(doc) if isinstance(doc, list) else IncidenceMatrix.from_dict(doc)


def parse_potential(spec, a: IncidenceMatrix):
    from .potential import Potential

    if isinstance(spec, (int, float)):
        return Potential.constant(a, float(spec))
    if not isinstance(spec, str):
        raise ConfigError(f"potential: cannot interpret {spec!r}")
    kind, _, arg = spec.partition(":")
    if kind == "const":
        return Potential.constant(a, float(arg))
    if kind == "symbols":
        return Potential.from_symbol_values(a, [float(v) for v in arg.split(",")])
    path = Path(spec)
    if path.exists():
        doc = json.loads(path.read_text())
        table = {tuple(int(c) for c in w): float(v) for w, v in doc["table"].items()}
        return Potential(a, int(doc["order"]), table, positive=min(table.values()) > 0)
    raise ConfigError(f"potential: expected const:<c>, symbols:<v0,v1,...> or a JSON file, got {spec!r}")


def parse_measure(spec: str, a: IncidenceMatrix):
    from .measures import MarkovMeasure
    from .thermo import parry_measure

    if spec == "parry":
        return parry_measure(a)
    kind, _, arg = spec.partition(":")
    if kind == "bernoulli":
        return MarkovMeasure.bernoulli([float(v) for v in arg.split(",")], a)
    path = Path(spec)
    if path.exists():
        return MarkovMeasure.from_json(path.read_text(), a)
    raise ConfigError(f"measure: expected parry, bernoulli:<p0,p1,...> or a JSON file, got {spec!r}")


def parse_point(spec: str) -> SymbolicPoint:
    """``"pre|period"`` with digits, e.g. ``"01|001"``; ``"|01"`` is purely periodic."""
    pre, sep, per = spec.partition("|")
    if not sep:
        pre, per = "", spec
    try:
        return SymbolicPoint(tuple(int(c) for c in pre), tuple(int(c) for c in per))
    except ValueError as exc:
        raise ConfigError(f"point: {exc}") from None


def float_list(v) -> list[float]:
    if isinstance(v, (int, float)):
        return [float(v)]
    if isinstance(v, list):
        return [float(x) for x in v]
    return [float(x) for x in str(v).split(",") if x.strip()]


def int_pair(v) -> tuple[int, int]:
    vals = v if isinstance(v, list) else str(v).split(",")
    if len(vals) != 2:
        raise ConfigError(f"expected two integers, got {v!r}")
    return int(vals[0]), int(vals[1])


def threads() -> int:
    raw = os.environ.get("ALPHADIM_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"ALPHADIM_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


def grid_map(fn: Callable, items: Sequence) -> list:
    """Map over a parameter grid with a bounded pool; results keep grid order."""
    n = min(threads(), max(1, len(items)))
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# -- commands -----------------------------------------------------------------------------------

DEFAULTS: dict[str, dict] = {
    "entropy": {"matrix": "full2", "system": None, "alpha": "0", "eps": math.exp(-1), "n": None, "n_min": 1, "M": 1 << 16, "seed": 0},
    "dimension": {"matrix": "full2", "sub": None, "kind": "hausdorff", "depth": 30, "alpha": "0", "phi": "const:1",
                  "eps": math.exp(-1), "scales": "20,40"},
    "pressure": {"matrix": "full2", "h": "const:0", "alpha": "0", "eps": math.exp(-1), "scales": "20,40", "method": "cover"},
    "bowen-root": {"matrix": "full2", "phi": "const:1", "alpha": "0", "eps": math.exp(-1), "scales": "20,40", "method": "transfer"},
    "local-entropy": {"matrix": "full2", "measure": "bernoulli:0.5,0.5", "point": "|01", "alpha": "0", "phi": "const:1",
                      "eps": math.exp(-1), "n": 10000, "samples": 0, "seed": 0},
    "spectrum": {"matrix": "full2", "g": "symbols:0,1", "alpha": "0", "levels": None, "count": 21},
    "neutralized": {"matrix": "full2", "system": None, "eps": "0.5,0.25,0.125", "n": None, "M": 1 << 16, "seed": 0},
    "double-limit": {"matrix": "full2", "system": None, "alpha": "1,0.5,0.25", "eps": "0.3678794412,0.1353352832,0.0497870684",
                     "n": 200, "M": 1 << 16, "seed": 0},
    "ratio": {"systems": "full2,golden,doubling", "alpha": "0,0.5,1", "eps": 0.2, "n": 200, "M": 1 << 14, "seed": 0},
    "verify": {"suite": "all"},
}


def _target(cfg):
    if cfg.get("system"):
        from .estimators import make_system
        return make_system(cfg["system"], int(cfg["M"]))
    return parse_matrix(cfg["matrix"])


def cmd_entropy(cfg):
    from .estimators import alpha_entropy_estimate
    from .geometry import alpha_entropy_sft

    alphas = float_list(cfg["alpha"])
    target = _target(cfg)
    rows, series, notes = [], {}, []
    if isinstance(target, IncidenceMatrix):
        n_hi = int(cfg["n"] or 200)
        res = grid_map(lambda al: alpha_entropy_sft(target, al, float(cfg["eps"]), (int(cfg["n_min"]), n_hi)), alphas)
        for al, s in zip(alphas, res):
            rows += [(al, n, e, t, g) for n, e, t, g in s.rows()]
            series[f"alpha={fmt(al)}"] = (s.ns, s.estimates)
            notes.append(f"alpha={fmt(al)}: estimate {fmt(s.limit)} at n={int(s.ns[-1])}, "
                         f"extrapolated {fmt(s.extrapolated)}, target {fmt(s.target)}")
        return ["alpha", "n", "estimate", "target", "gap"], rows, series, notes
    res = grid_map(lambda al: alpha_entropy_estimate(target, al, float(cfg["eps"]), (int(cfg["n_min"]), int(cfg["n"] or 14)),
                                                     int(cfg["M"]), int(cfg["seed"])), alphas)
    for al, e in zip(alphas, res):
        rows += [(al, n, v, e.slope) for n, v in e.rows()]
        series[f"alpha={fmt(al)}"] = (e.ns, e.log_sizes)
        notes.append(f"alpha={fmt(al)}: slope {fmt(e.slope)} over n={e.fit_ns.tolist()}")
    return ["alpha", "n", "log_spanning_size", "slope"], rows, series, notes


def cmd_dimension(cfg):
    from .caratheodory import CoverProblem, critical_exponent
    from .geometry import hausdorff_dimension_sft

    a = parse_matrix(cfg["matrix"])
    sub = load_forbidden(cfg["sub"]) if cfg.get("sub") else None
    if cfg["kind"] == "hausdorff":
        d = hausdorff_dimension_sft(a, sub, int(cfg["depth"]))
        return ["kind", "depth", "dimension"], [("hausdorff", int(cfg["depth"]), d)], {}, [f"Hausdorff exponent {fmt(d)}"]
    if cfg["kind"] != "bs":
        raise ConfigError("dimension: kind must be 'hausdorff' or 'bs'")
    phi = parse_potential(cfg["phi"], a)
    n_min, n_max = int_pair(cfg["scales"])
    alphas = float_list(cfg["alpha"])
    vals = grid_map(lambda al: critical_exponent(
        CoverProblem(a, sub, 0.0, float(cfg["eps"]), al, n_min, n_max, phi), tol=1e-9), alphas)
    rows = [(al, n_min, n_max, v) for al, v in zip(alphas, vals)]
    return (["alpha", "n_min", "n_max", "dimension"], rows, {"dimension": (alphas, vals)},
            [f"alpha={fmt(al)}: cover exponent {fmt(v)}" for al, v in zip(alphas, vals)])


def cmd_pressure(cfg):
    from .caratheodory import pressure_value, transfer_pressure

    a = parse_matrix(cfg["matrix"])
    h = parse_potential(cfg["h"], a)
    n_min, n_max = int_pair(cfg["scales"])
    alphas = float_list(cfg["alpha"])
    if cfg["method"] == "transfer":
        vals = [transfer_pressure(a, al, h) for al in alphas]
    elif cfg["method"] == "cover":
        vals = grid_map(lambda al: pressure_value(a, al, h, float(cfg["eps"]), n_min, n_max), alphas)
    else:
        raise ConfigError("pressure: method must be 'cover' or 'transfer'")
    rows = [(al, cfg["method"], v) for al, v in zip(alphas, vals)]
    return (["alpha", "method", "pressure"], rows, {"pressure": (alphas, vals)},
            [f"alpha={fmt(al)}: pressure {fmt(v)}" for al, v in zip(alphas, vals)])


def cmd_bowen_root(cfg):
    from .caratheodory import bs_dimension_report

    a = parse_matrix(cfg["matrix"])
    phi = parse_potential(cfg["phi"], a)
    alphas = float_list(cfg["alpha"])
    method = cfg["method"]
    tol = 1e-10 if method == "transfer" else 1e-6
    res = grid_map(lambda al: bs_dimension_report(a, al, phi, float(cfg["eps"]), int_pair(cfg["scales"]),
                                                  method, tol=tol), alphas)
    rows = [(al, method, r.root) for al, r in zip(alphas, res)]
    series = {f"alpha={fmt(al)}": (r.grid_t, r.grid_pressure) for al, r in zip(alphas, res)}
    return (["alpha", "method", "root"], rows, series,
            [f"alpha={fmt(al)}: Bowen root {fmt(r.root)}" for al, r in zip(alphas, res)])


def cmd_local_entropy(cfg):
    from .measures import integrated_bk_entropy, local_bk_entropy_empirical, local_bk_entropy_exact

    a = parse_matrix(cfg["matrix"])
    mu = parse_measure(cfg["measure"], a)
    phi = parse_potential(cfg["phi"], a)
    x = parse_point(cfg["point"])
    eps, n = float(cfg["eps"]), int(cfg["n"])
    rows, notes = [], []
    for al in float_list(cfg["alpha"]):
        ex = local_bk_entropy_exact(mu, x, al, phi, eps)
        em = local_bk_entropy_empirical(mu, x, al, phi, eps, n)
        row = [al, ex, em, "", ""]
        if int(cfg["samples"]) > 0:
            mc = integrated_bk_entropy(mu, al, phi, int(cfg["samples"]), int(cfg["seed"]))
            row[3:] = [mc.mean, mc.stderr]
        rows.append(tuple(row))
        notes.append(f"alpha={fmt(al)}: exact {fmt(ex)}, empirical at n={n} {fmt(em)}")
    return ["alpha", "exact", "empirical", "integrated_mean", "integrated_stderr"], rows, {}, notes


def cmd_spectrum(cfg):
    from .thermo import level_set_entropy

    a = parse_matrix(cfg["matrix"])
    g = parse_potential(cfg["g"], a)
    levels = float_list(cfg["levels"]) if cfg.get("levels") else sorted(set(np.linspace(g.min, g.max, int(cfg["count"])).tolist()))
    rows, series = [], {}
    for al in float_list(cfg["alpha"]):
        pts = grid_map(lambda s: level_set_entropy(a, g, float(s), al), levels)
        rows += [(al, p.s, p.entropy, p.t_star, p.alpha_scaled, p.empty) for p in pts]
        ok = [p for p in pts if not p.empty]
        series[f"alpha={fmt(al)}"] = ([p.s for p in ok], [p.alpha_scaled for p in ok])
    return ["alpha", "s", "entropy", "t_star", "alpha_scaled", "empty"], rows, series, [f"{len(rows)} spectrum points"]


def cmd_neutralized(cfg):
    from .estimators import extrapolate_to_zero, neutralized_entropy_estimate

    target = _target(cfg)
    epss = float_list(cfg["eps"])
    n_range = (1, int(cfg["n"])) if cfg.get("n") else None
    ests = grid_map(lambda e: neutralized_entropy_estimate(target, e, n_range, int(cfg["M"]), int(cfg["seed"])), epss)
    slopes = [e.slope for e in ests]
    lim = extrapolate_to_zero(epss, slopes)
    rows = [(e, s) for e, s in zip(epss, slopes)] + [(0.0, lim)]
    return (["eps", "slope"], rows, {"slope": (epss, slopes)},
            [f"eps -> 0 extrapolation {fmt(lim)}"])


def cmd_double_limit(cfg):
    from .estimators import double_limit_experiment

    d = double_limit_experiment(_target(cfg), float_list(cfg["alpha"]), float_list(cfg["eps"]),
                                int(cfg["n"]), int(cfg["M"]), int(cfg["seed"]))
    rows = [(al, e, d.table[i, j]) for i, al in enumerate(d.alpha_grid) for j, e in enumerate(d.eps_grid)]
    rows += [(0.0, e, v) for e, v in zip(d.eps_grid, d.alpha_limits)]
    series = {f"eps={fmt(e)}": (list(d.alpha_grid), d.table[:, j]) for j, e in enumerate(d.eps_grid)}
    return (["alpha", "eps", "entropy"], rows, series,
            [f"corner {fmt(d.corner)}, classical {fmt(d.classical)}, ordering ok: {d.ordering_ok}"])


def cmd_ratio(cfg):
    from .estimators import make_system, ratio_probe

    systems = {}
    for name in str(cfg["systems"]).split(","):
        name = name.strip()
        try:
            systems[name] = parse_matrix(name)
        except ConfigError:
            systems[name] = make_system(name, int(cfg["M"]))
    rows_ = ratio_probe(systems, float_list(cfg["alpha"]), float(cfg["eps"]), int(cfg["n"]), int(cfg["M"]), int(cfg["seed"]))
    rows = [(r.system, r.alpha, r.h_alpha, r.h, r.ratio) for r in rows_]
    series = {}
    for r in rows_:
        xs, ys = series.setdefault(r.system, ([], []))
        xs.append(r.alpha)
        ys.append(r.ratio)
    return ["system", "alpha", "h_alpha", "h", "ratio"], rows, series, [f"{len(rows)} ratios (evidence only)"]


COMMANDS = {
    "entropy": cmd_entropy, "dimension": cmd_dimension, "pressure": cmd_pressure, "bowen-root": cmd_bowen_root,
    "local-entropy": cmd_local_entropy, "spectrum": cmd_spectrum, "neutralized": cmd_neutralized,
    "double-limit": cmd_double_limit, "ratio": cmd_ratio,
}


# -- argument parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="alphadim", description="alpha-Bowen entropy, dimension and pressure experiments")
    p.add_argument("--config", help="JSON config file; flags override its values")
    sub = p.add_subparsers(dest="command")

    def common(sp, *names):
        for name in names:
            flag = "--" + name.replace("_", "-")
            sp.add_argument(flag, dest=name, default=None)
        sp.add_argument("--out", default=None, help="CSV output path (default stdout)")
        sp.add_argument("--svg", default=None, help="optional SVG chart path")

    common(sub.add_parser("entropy", help="alpha-entropy of an SFT or a built-in map"),
           "matrix", "system", "alpha", "eps", "n", "n_min", "M", "seed")
    common(sub.add_parser("dimension", help="Hausdorff or alpha-BS dimension by cover DP"),
           "matrix", "sub", "kind", "depth", "alpha", "phi", "eps", "scales")
    common(sub.add_parser("pressure", help="alpha-pressure of a potential"),
           "matrix", "h", "alpha", "eps", "scales", "method")
    common(sub.add_parser("bowen-root", help="root of t -> P(-t phi)"),
           "matrix", "phi", "alpha", "eps", "scales", "method")
    common(sub.add_parser("local-entropy", help="local alpha-Brin-Katok entropy"),
           "matrix", "measure", "point", "alpha", "phi", "eps", "n", "samples", "seed")
    common(sub.add_parser("spectrum", help="level-set entropy spectrum of Birkhoff averages"),
           "matrix", "g", "alpha", "levels", "count")
    common(sub.add_parser("neutralized", help="neutralized entropy and its eps -> 0 limit"),
           "matrix", "system", "eps", "n", "M", "seed")
    common(sub.add_parser("double-limit", help="alpha -> 0 then eps -> 0 table"),
           "matrix", "system", "alpha", "eps", "n", "M", "seed")
    common(sub.add_parser("ratio", help="h^alpha / h across systems"),
           "systems", "alpha", "eps", "n", "M", "seed")
    v = sub.add_parser("verify", help="run the acceptance suite")
    v.add_argument("--suite", default=None, choices=["sft", "estimators", "properties", "all"])
    return p


def resolve_config(args: argparse.Namespace) -> dict:
    file_cfg = {}
    if args.config:
        try:
            file_cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config: cannot read {args.config}: {exc}") from None
        if not isinstance(file_cfg, dict):
            raise ConfigError("config: top level must be a JSON object")
    command = args.command or file_cfg.get("command")
    if command not in DEFAULTS:
        raise ConfigError(f"command: expected one of {sorted(DEFAULTS)}, got {command!r}")
    allowed = set(DEFAULTS[command]) | {"command", "out", "svg"}
    unknown = sorted(set(file_cfg) - allowed)
    if unknown:
        raise ConfigError(f"config: unknown field(s) for {command}: {', '.join(unknown)}")
    cfg = {**DEFAULTS[command], **file_cfg, "command": command}
    for key, val in vars(args).items():
        if key not in ("config", "command") and val is not None:
            cfg[key] = val
    return cfg


def execute(cfg: dict, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    command = cfg["command"]
    if command == "verify":
        from .acceptance import run_suite

        results = run_suite(cfg["suite"], echo=lambda line: print(line, file=stdout))
        failed = [r.number for r in results if not r.passed]
        print(f"{len(results) - len(failed)}/{len(results)} criteria passed", file=stdout)
        return EXIT_ACCEPTANCE if failed else EXIT_OK
    header, rows, series, notes = COMMANDS[command](cfg)
    text = csv_text(header, rows, config_hash(cfg))
    if cfg.get("out"):
        Path(cfg["out"]).write_text(text)
    else:
        stdout.write(text)
    if cfg.get("svg"):
        Path(cfg["svg"]).write_text(svg_chart(series, command, header[1] if len(header) > 1 else "x", header[-1]))
    for line in notes:
        print(f"{command}: {line}", file=stderr)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"alphadim: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return execute(cfg)
    except ConfigError as exc:
        print(f"alphadim: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, EmptySubshiftError, ArithmeticError, ValueError, RuntimeError, MemoryError) as exc:
        print(f"alphadim {cfg['command']}: numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def idempotence_check():
    """Run one persisted config twice and compare the artifact bytes."""
    import io

    from .properties import Check

    with tempfile.TemporaryDirectory() as tmp:
        cfg_path = Path(tmp) / "run.json"
        cfg_path.write_text(json.dumps({"command": "entropy", "matrix": "golden", "alpha": "0,0.5", "n": 60,
                                        "out": str(Path(tmp) / "a.csv"), "svg": str(Path(tmp) / "a.svg")}))
        outs = []
        for _ in range(2):
            cfg = resolve_config(build_parser().parse_args(["--config", str(cfg_path)]))
            execute(cfg, stdout=io.StringIO(), stderr=io.StringIO())
            outs.append((Path(tmp, "a.csv").read_bytes(), Path(tmp, "a.svg").read_bytes()))
        same = outs[0] == outs[1]
        last = outs[0][0].decode().rstrip("\n").splitlines()[-1]
        tagged = last.startswith("# config-hash=") and len(last) == len("# config-hash=") + 64
    return Check("CLI reruns are byte-identical and hash-tagged", same and tagged, last[:30])


if __name__ == "__main__":
    sys.exit(main())
