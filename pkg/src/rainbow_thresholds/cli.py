"""Batch experiment runner: one subcommand per solver, JSON configs, CSV out.

Exit codes: 0 on success, 2 when a requested verification fails (a spread
bound violated, a chain inequality broken), 1 on input errors.  All
randomness flows from the single master seed of the run; identical configs
produce byte-identical CSV files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

from .covers import (
    check_cover_certificate,
    lp_min_cover_cost,
    min_cover_cost_integer,
    solve_q,
    solve_qf,
)
from .coupling import chain_hit_estimates, exact_hybrid_hit
from .errors import RainbowError
from .families import (
    IncreasingFamily,
    MultiHypergraph,
    as_hypergraph,
    ell,
    family_of,
    read_hypergraph,
    write_hypergraph,
)
from .generators import (
    complete_graph,
    complete_hypergraph,
    ell_cycles,
    hamilton_cycles,
    perfect_matchings,
    power_hamilton,
    random_family,
    single_edge,
    sunflower,
)
from .lift import lift_rainbow, pad_lift, verify_lift_spiro, verify_lift_spread
from .spread import SpreadProfile, check_spiro, check_spread, optimal_spread
from .thresholds import NOT_ATTAINED, solve_pc, solve_pc_k

TASKS = ("threshold", "q", "qf", "spread", "lift", "couple", "generate", "chain-check")


@dataclass
class ExperimentConfig:
    task: str
    params: dict = field(default_factory=dict)

    @property
    def seed(self) -> int:
        return int(self.params.get("seed") or 0)

    def get(self, key, default=None):
        return self.params.get(key, default)


@dataclass
class ExperimentResult:
    columns: list[str]
    rows: list[dict]
    ok: bool = True


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def emit_csv(rows: list[dict], columns: list[str], path=None) -> None:
    """Write rows in a stable column order with 12-significant-digit floats."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
    text = buf.getvalue()
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# Instance loading: a file in the hypergraph text format or a generator spec.
# ---------------------------------------------------------------------------


def instance_from_spec(spec: str, seed: int) -> tuple[str, MultiHypergraph]:
    kind, _, arg = spec.partition(":")
    args = [int(a) for a in arg.split(",")] if arg else []
    if kind == "single_edge":
        return spec, as_hypergraph(single_edge(*args))
    if kind == "sunflower":
        return spec, as_hypergraph(sunflower(*args))
    if kind == "random":
        return spec, as_hypergraph(random_family(*args, seed=seed))
    if kind == "hamilton":
        return spec, hamilton_cycles(*args)
    if kind == "ell_cycles":
        return spec, ell_cycles(*args)
    if kind == "matchings":
        host = complete_graph(args[0]) if len(args) == 1 else complete_hypergraph(*args)
        return spec, perfect_matchings(host)
    if kind == "power":
        return spec, power_hamilton(*args)
    raise RainbowError(f"unknown generator spec {spec!r}")


def load_instance(config: ExperimentConfig) -> tuple[str, MultiHypergraph]:
    path = config.get("input")
    spec = config.get("family")
    if (path is None) == (spec is None):
        raise RainbowError("provide exactly one of --input FILE or --family SPEC")
    if path is not None:
        return str(path), read_hypergraph(path)
    return instance_from_spec(spec, config.seed)


def _family(h: MultiHypergraph) -> IncreasingFamily:
    return family_of(h)


# ---------------------------------------------------------------------------
# Tasks.
# ---------------------------------------------------------------------------


def _run_threshold(config) -> ExperimentResult:
    name, h = load_instance(config)
    fam = _family(h)
    tol = float(config.get("tol") or 1e-9)
    k = config.get("k")
    pc = solve_pc(fam, tol)
    row = {
        "name": name,
        "n": fam.ground.n,
        "edges": len(fam.minimal_edges),
        "ell": ell(fam),
        "p_c": pc.value,
        "p_c_k": None,
        "attained": None,
    }
    if k is not None:
        res = solve_pc_k(fam, int(k), tol)
        row["p_c_k"] = res.value
        row["attained"] = res.attained
    cols = ["name", "n", "edges", "ell", "p_c", "p_c_k", "attained"]
    return ExperimentResult(cols, [row])


def _run_cover(config, fractional: bool) -> ExperimentResult:
    name, h = load_instance(config)
    fam = _family(h)
    tol = float(config.get("tol") or 1e-6)
    res = solve_qf(fam, tol) if fractional else solve_q(fam, tol)
    solver = lp_min_cover_cost if fractional else min_cover_cost_integer
    cost, cover = solver(fam, res.value)
    checks = check_cover_certificate(fam, cover)
    witness_path = config.get("witness")
    if witness_path:
        with open(witness_path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(cover.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    row = {
        "name": name,
        "value": res.value,
        "lo": res.bracket[0],
        "hi": res.bracket[1],
        "tol": res.tol,
        "method": res.method,
        "cost_at_value": cost,
        "certificate_ok": checks["ok"],
    }
    cols = list(row.keys())
    return ExperimentResult(cols, [row], ok=checks["ok"])


def _parse_profile(text: str) -> SpreadProfile:
    parts = [p.strip() for p in text.split(",")]
    return SpreadProfile(float(parts[0]), tuple(int(p) for p in parts[1:]))


def _run_spread(config) -> ExperimentResult:
    name, h = load_instance(config)
    cert = optimal_spread(h)
    rows = [
        {
            "name": name,
            "check": "kappa_star",
            "value": cert.kappa,
            "ok": True,
            "witness": "|".join(cert.witness.labels),
        }
    ]
    ok = True
    if config.get("kappa") is not None:
        passed, witness = check_spread(h, float(config.get("kappa")))
        rows.append(
            {
                "name": name,
                "check": "kappa",
                "value": float(config.get("kappa")),
                "ok": passed,
                "witness": "" if witness is None else "|".join(witness.labels),
            }
        )
        ok = ok and passed
    if config.get("spiro") is not None:
        profile = _parse_profile(str(config.get("spiro")))
        passed, witness = check_spiro(h, profile)
        detail = ""
        if witness is not None:
            s, j, mj = witness
            detail = "|".join(s.labels) + (f";j={j};M_j={mj}" if j is not None else "")
        rows.append(
            {
                "name": name,
                "check": "spiro",
                "value": profile.q,
                "ok": passed,
                "witness": detail,
            }
        )
        ok = ok and passed
    cols = ["name", "check", "value", "ok", "witness"]
    return ExperimentResult(cols, rows, ok=ok)


def _run_lift(config) -> ExperimentResult:
    name, h = load_instance(config)
    k = int(config.get("k"))
    r = int(config.get("r") or h.r)
    hp = lift_rainbow(h, k)
    hpp = pad_lift(hp, r)
    row = {
        "name": name,
        "k": k,
        "r": r,
        "base_total": h.total,
        "lifted_total": hp.total,
        "padded_total": hpp.total,
        "spread_ok": None,
        "spread_worst": None,
        "spiro_ok": None,
        "spiro_worst": None,
    }
    ok = True
    if config.get("verify_spread") is not None:
        kappa = optimal_spread(h).kappa
        report = verify_lift_spread(h, hpp, kappa, int(config.get("verify_spread")))
        row["spread_ok"] = report.ok
        row["spread_worst"] = report.worst_ratio
        ok = ok and report.ok
    if config.get("verify_spiro") is not None:
        profile = _parse_profile(str(config.get("verify_spiro")))
        report = verify_lift_spiro(
            h,
            hpp,
            profile,
            depth=config.get("depth") and int(config.get("depth")),
            enforce_min_kappa=not bool(config.get("allow_small_kappa")),
        )
        row["spiro_ok"] = report.ok
        row["spiro_worst"] = report.worst_ratio
        ok = ok and report.ok
    return ExperimentResult(list(row.keys()), [row], ok=ok)


def _run_couple(config) -> ExperimentResult:
    name, h = load_instance(config)
    k = int(config.get("k"))
    p = float(config.get("p"))
    samples = int(config.get("samples") or 10_000)
    seed = config.seed
    estimates = chain_hit_estimates(h, k, p, samples, seed)
    exact = bool(config.get("exact"))
    rows = []
    for i, est in enumerate(estimates):
        row = {
            "name": name,
            "i": i,
            "estimate": est.estimate,
            "stderr": est.stderr,
            "samples": est.samples,
            "seed": est.seed,
            "exact": exact_hybrid_hit(h, k, p, i) if exact else None,
        }
        rows.append(row)
    cols = ["name", "i", "estimate", "stderr", "samples", "seed", "exact"]
    return ExperimentResult(cols, rows)


def _run_generate(config) -> ExperimentResult:
    name, h = load_instance(config)
    out = config.get("out")
    if out is None:
        raise RainbowError("generate requires --out FILE")
    write_hypergraph(h, out)
    row = {"name": name, "out": str(out), "edges": len(h.edges), "total": h.total}
    return ExperimentResult(list(row.keys()), [row])


def _run_chain_check(config) -> ExperimentResult:
    count = int(config.get("count") or 10)
    n = int(config.get("n") or 6)
    max_edges = int(config.get("max_edges") or 4)
    max_size = int(config.get("max_size") or 3)
    tol = float(config.get("tol") or 1e-6)
    seed = config.seed
    kmax = int(config.get("kmax") or 6)
    slack = 2.0 * tol
    rows = []
    ok = True
    for idx in range(count):
        fam = random_family(n, max_edges, max_size, seed, stream=idx)
        lf = ell(fam)
        q = solve_q(fam, tol)
        qf = solve_qf(fam, tol)
        pc = solve_pc(fam)
        for k in range(lf, max(lf, kmax) + 1):
            pck = solve_pc_k(fam, k)
            chain_ok = (
                q.value <= qf.value + slack
                and qf.value <= pc.value + slack
                and (pck.attained == NOT_ATTAINED or pc.value <= pck.value + slack)
            )
            ok = ok and chain_ok
            rows.append(
                {
                    "family": f"random:{n},{max_edges},{max_size}#{idx}",
                    "n": n,
                    "edges": len(fam.minimal_edges),
                    "ell": lf,
                    "k": k,
                    "q": q.value,
                    "qf": qf.value,
                    "pc": pc.value,
                    "pck": pck.value,
                    "attained": pck.attained,
                    "ratio_qf_q": qf.value / q.value if q.value else None,
                    "ok": chain_ok,
                }
            )
    cols = [
        "family", "n", "edges", "ell", "k",
        "q", "qf", "pc", "pck", "attained", "ratio_qf_q", "ok",
    ]
    return ExperimentResult(cols, rows, ok=ok)


_RUNNERS = {
    "threshold": _run_threshold,
    "q": lambda c: _run_cover(c, fractional=False),
    "qf": lambda c: _run_cover(c, fractional=True),
    "spread": _run_spread,
    "lift": _run_lift,
    "couple": _run_couple,
    "generate": _run_generate,
    "chain-check": _run_chain_check,
}


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    if config.task not in _RUNNERS:
        raise RainbowError(f"unknown task {config.task!r}")
    return _RUNNERS[config.task](config)


# ---------------------------------------------------------------------------
# Argument parsing.
# ---------------------------------------------------------------------------


def _add_common(sub):
    sub.add_argument("--config", help="JSON file with task parameters")
    sub.add_argument("--seed", type=int, help="master seed for stochastic tasks")
    sub.add_argument("--out", help="CSV output path (default: stdout)")
    sub.add_argument("--input", help="hypergraph text file")
    sub.add_argument("--family", help="generator spec, e.g. single_edge:3")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rainbow-thresholds",
        description="Threshold, cover, spread, lift, and coupling experiments.",
    )
    subs = parser.add_subparsers(dest="task", required=True)

    s = subs.add_parser("threshold", help="solve p_c (and p_c^k with --k)")
    _add_common(s)
    s.add_argument("--k", type=int)
    s.add_argument("--tol", type=float)

    for taskname, helptext in (("q", "integer-cover threshold"), ("qf", "fractional-cover threshold")):
        s = subs.add_parser(taskname, help=helptext)
        _add_common(s)
        s.add_argument("--tol", type=float)
        s.add_argument("--witness", help="write the cover certificate as JSON")

    s = subs.add_parser("spread", help="optimal spread and spread checks")
    _add_common(s)
    s.add_argument("--kappa", type=float)
    s.add_argument("--spiro", help="profile as q,r1,r2,...")

    s = subs.add_parser("lift", help="rainbow lift construction and verification")
    _add_common(s)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--r", type=int)
    s.add_argument("--verify-spread", dest="verify_spread", type=int, metavar="DEPTH")
    s.add_argument("--verify-spiro", dest="verify_spiro", metavar="PROFILE")
    s.add_argument("--depth", type=int)
    s.add_argument("--allow-small-kappa", dest="allow_small_kappa", action="store_true")

    s = subs.add_parser("couple", help="hybrid chain estimates")
    _add_common(s)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--samples", type=int)
    s.add_argument("--exact", action="store_true")

    s = subs.add_parser("generate", help="write a generated hypergraph file")
    _add_common(s)

    s = subs.add_parser("chain-check", help="q <= qf <= pc <= pck on a random corpus")
    _add_common(s)
    s.add_argument("--count", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--max-edges", dest="max_edges", type=int)
    s.add_argument("--max-size", dest="max_size", type=int)
    s.add_argument("--kmax", type=int)
    s.add_argument("--tol", type=float)

    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    params: dict = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        params.update(loaded)
    for key, value in vars(args).items():
        if key in ("config", "task"):
            continue
        if value is not None and value is not False:
            params[key] = value
    task = params.pop("task", args.task)
    return ExperimentConfig(task, params)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        result = run_experiment(config)
    except (RainbowError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if config.task != "generate":
        emit_csv(result.rows, result.columns, config.get("out"))
    return 0 if result.ok else 2


if __name__ == "__main__":
    sys.exit(main())
