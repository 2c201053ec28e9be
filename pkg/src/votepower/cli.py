"""Command-line front end tying the library together.

Runs are file-driven and reproducible: every flag mirrors a JSON config
key one-to-one (``--emit-dir`` <-> ``"emit_dir"``), explicit flags
override config values, and any command that samples requires an
explicit seed.  Reals are printed as 12-significant-digit decimals plus
the exact rational whenever the computation was exact; oversized
rationals are withheld and their bit size shown instead.

Exit codes: 0 success; 2 invalid input, with a diagnostic naming the
offending field or path; 3 a result failed its own internal re-check
(indicates a bug, never expected in normal use).
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .boolfn import WeightedMajority, load_function, majority, save_function
from .bounds import BoundInput, bound_lin, bound_prob, verify_tightness
from .classify import classify
from .exceptions import InvalidInput, VerificationFailed, VotepowerError
from .ising import TreeParams, bp_exact, claim2_bound, mc_mu_m
from .measures import (
    AllSame,
    Product,
    TMixture,
    expect,
    load_measure,
    measure_to_dict,
    sample,
    save_measure,
    tmixture_win_prob,
)
from .power import power_report
from .rationals import ExactRatio, decimal_str, format_rational, parse_rational

EXACT_PRINT_BITS = 2048

_FIELDS = (
    "command",
    "function",
    "measure",
    "p",
    "q",
    "delta",
    "r",
    "eps",
    "n",
    "samples",
    "seed",
    "method",
    "family",
    "emit_dir",
    "out",
    "format",
)


@dataclass(frozen=True)
class RunConfig:
    """One fully merged run: config file values overlaid by flags."""

    command: str
    function: str = None
    measure: str = None
    p: object = None
    q: object = None
    delta: object = None
    r: object = None
    eps: object = None
    n: object = None
    samples: object = None
    seed: object = None
    method: str = None
    family: str = None
    emit_dir: str = None
    out: str = None
    format: str = "table"


# ---------------------------------------------------------------------------
# value parsing (config values and flag strings take the same path)

def _as_list(value):
    if isinstance(value, (list, tuple)):
        return list(value)
    if isinstance(value, str):
        return [part.strip() for part in value.split(",") if part.strip()]
    return [value]


def _rats(value, field):
    try:
        return [parse_rational(v) for v in _as_list(value)]
    except InvalidInput as exc:
        raise InvalidInput(f"{field}: {exc}") from exc


def _ints(value, field):
    out = []
    for part in _as_list(value):
        if isinstance(part, str) and ".." in part:
            lo, _, hi = part.partition("..")
            try:
                lo, hi = int(lo), int(hi)
            except ValueError:
                raise InvalidInput(f"{field}: bad range {part!r}") from None
            if hi < lo:
                raise InvalidInput(f"{field}: empty range {part!r}")
            out.extend(range(lo, hi + 1))
            continue
        if isinstance(part, float) and not part.is_integer():
            raise InvalidInput(f"{field}: expected an integer, got {part!r}")
        try:
            out.append(int(part))
        except (TypeError, ValueError):
            raise InvalidInput(f"{field}: expected an integer, got {part!r}") from None
    return out


def _one(values, field):
    if len(values) != 1:
        raise InvalidInput(f"{field}: expected a single value, got {len(values)}")
    return values[0]


def _sampling(cfg):
    """(samples, seed) or (None, None); a seed is mandatory to sample."""
    if cfg.samples is None:
        return None, None
    samples = _one(_ints(cfg.samples, "samples"), "samples")
    if samples < 1:
        raise InvalidInput(f"samples: must be >= 1, got {samples}")
    if cfg.seed is None:
        raise InvalidInput("seed: required when samples is set")
    return samples, _one(_ints(cfg.seed, "seed"), "seed")


# ---------------------------------------------------------------------------
# cell formatting

def _exact_pair(v):
    """(rational string or None, bit size); never reduces oversized ratios."""
    if isinstance(v, ExactRatio):
        bits = v.num.bit_length() + v.den.bit_length()
        if bits > EXACT_PRINT_BITS:
            return None, bits
        fr = v.as_fraction()
    else:
        fr = Fraction(v)
    bits = fr.numerator.bit_length() + fr.denominator.bit_length()
    if bits > EXACT_PRINT_BITS:
        return None, bits
    return format_rational(fr), bits


def _cell_text(v):
    if v is None:
        return "-"
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return decimal_str(v)
    s, bits = _exact_pair(v)
    dec = decimal_str(v)
    return f"{dec} ({s})" if s is not None else f"{dec} (exact: {bits} bits)"


def _cell_json(v):
    if v is None or isinstance(v, (str, bool, int)):
        return v
    if isinstance(v, float):
        return {"decimal": decimal_str(v)}
    s, bits = _exact_pair(v)
    out = {"decimal": decimal_str(v)}
    if s is not None:
        out["exact"] = s
    else:
        out["exact_bits"] = bits
    return out


def _render(cfg, columns, rows):
    if (cfg.format or "table") == "structured":
        doc = {
            "command": cfg.command,
            "columns": list(columns),
            "rows": [
                {c: _cell_json(v) for c, v in zip(columns, row)} for row in rows
            ],
        }
        return json.dumps(doc, indent=2) + "\n"
    cells = [list(columns)] + [[_cell_text(v) for v in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    return (
        "\n".join(
            "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
            for row in cells
        )
        + "\n"
    )


# ---------------------------------------------------------------------------
# commands

def _require(cfg, *fields):
    for field in fields:
        if getattr(cfg, field) is None:
            raise InvalidInput(f"{field}: required for {cfg.command}")


def _cmd_power(cfg: RunConfig) -> str:
    _require(cfg, "function")
    f = load_function(cfg.function)
    if cfg.measure is not None:
        mu = load_measure(cfg.measure)
    else:
        mu = Product((Fraction(1, 2),) * f.n)
    report = power_report(f, mu)
    if (cfg.format or "table") == "structured":
        return json.dumps({"command": "power", **report.to_dict()}, indent=2) + "\n"
    return report.to_table() + "\n"


def _cmd_classify(cfg: RunConfig) -> str:
    _require(cfg, "function")
    f = load_function(cfg.function)
    res = classify(f)
    verdict = "WeightedMajority" if res.is_weighted_majority else "NotWeightedMajority"
    artifacts = {}
    if cfg.emit_dir is not None:
        os.makedirs(cfg.emit_dir, exist_ok=True)
        if res.is_weighted_majority:
            path = os.path.join(cfg.emit_dir, "weights.json")
            save_function(WeightedMajority(res.weights, res.tie_table), path)
            artifacts["weights_file"] = path
        else:
            path = os.path.join(cfg.emit_dir, "witness_measure.json")
            save_measure(res.witness, path)
            artifacts["measure_file"] = path
    tau = "infinite" if res.tau_infinite else res.tau
    if (cfg.format or "table") == "structured":
        doc = {
            "command": "classify",
            "n": res.n,
            "tau": _cell_json(tau),
            "verdict": verdict,
        }
        if res.is_weighted_majority:
            doc["weights"] = [format_rational(w) for w in res.weights]
            doc["tie_table"] = sorted(
                ["".join(map(str, x)), v] for x, v in res.tie_table.items()
            )
        else:
            doc["witness_measure"] = measure_to_dict(res.witness)
            doc["witness_mean"] = _cell_json(res.witness_mean)
            doc["witness_effects"] = [_cell_json(e) for e in res.witness_effects]
            doc["null_conditioned"] = list(res.null_conditioned)
        if artifacts:
            doc["artifacts"] = artifacts
        return json.dumps(doc, indent=2) + "\n"
    lines = [
        f"n:       {res.n}",
        f"tau:     {_cell_text(tau)}",
        f"verdict: {verdict}",
    ]
    if res.is_weighted_majority:
        lines.append("weights: " + " ".join(format_rational(w) for w in res.weights))
        if res.tie_table:
            lines.append(f"ties:    {len(res.tie_table)} tie-table entries")
    else:
        lines.append(f"witness_mean:    {_cell_text(res.witness_mean)}")
        lines.append(
            "witness_effects: " + " ".join(_cell_text(e) for e in res.witness_effects)
        )
        if res.null_conditioned:
            lines.append(
                "null_conditioned: "
                + ",".join(str(k) for k in res.null_conditioned)
            )
    for key, path in sorted(artifacts.items()):
        lines.append(f"{key}: {path}")
    return "\n".join(lines) + "\n"


def _cmd_bounds(cfg: RunConfig) -> str:
    _require(cfg, "p", "q", "delta")
    ps = _rats(cfg.p, "p")
    qs = _rats(cfg.q, "q")
    ds = _rats(cfg.delta, "delta")
    tight = cfg.n is not None or cfg.r is not None
    if tight and (cfg.n is None or cfg.r is None):
        raise InvalidInput("n and r must be given together for the tightness columns")
    columns = ["p", "q", "delta", "bound_prob", "bound_lin"]
    if tight:
        n = _one(_ints(cfg.n, "n"), "n")
        r = _one(_ints(cfg.r, "r"), "r")
        columns += ["lp_min", "closed_form"]
    rows = []
    for p, q, d in itertools.product(ps, qs, ds):
        bi = BoundInput(p, q, d)
        row = [p, q, d, bound_prob(bi), bound_lin(bi)]
        if tight:
            tr = verify_tightness(p, d, n, r)
            row += [tr.lp_min, tr.closed_form]
        rows.append(row)
    return _render(cfg, columns, rows)


def _cmd_ising(cfg: RunConfig) -> str:
    _require(cfg, "r", "eps", "delta")
    rs = _ints(cfg.r, "r")
    eps = _one(_rats(cfg.eps, "eps"), "eps")
    delta = _one(_rats(cfg.delta, "delta"), "delta")
    method = cfg.method or "auto"
    if method not in ("auto", "exact", "float"):
        raise InvalidInput(f"method: must be auto, exact or float, got {method!r}")
    samples, seed = _sampling(cfg)
    columns = [
        "r",
        "eps",
        "delta",
        "mu_m",
        "method",
        "mc_estimate",
        "mc_stderr",
        "backend",
        "claim1_bound",
        "claim2_stated",
        "claim2_proof",
    ]
    rows = []
    for r in rs:
        tp = TreeParams(r, eps, delta)
        bp = bp_exact(tp, method)
        mu = bp.mu_m if bp.method == "exact" else float(bp.mu_m)
        est = err = back = None
        if samples is not None:
            mc = mc_mu_m(tp, samples, seed)
            est, err, back = mc.estimate, mc.stderr, mc.backend
        c2 = claim2_bound(r, eps)
        rows.append(
            [
                r,
                eps,
                delta,
                mu,
                bp.method,
                est,
                err,
                back,
                (1 + delta) / 2,
                c2.stated,
                c2.proof_form,
            ]
        )
    return _render(cfg, columns, rows)


def _mc_win(mu, n, samples, seed):
    """Monte Carlo majority win rate and its binomial stderr."""
    if samples is None:
        return None, None
    votes = sample(mu, samples, seed).astype(np.int64).sum(axis=1)
    est = float(np.mean(2 * votes > n))
    return est, math.sqrt(est * (1.0 - est) / samples)


def _cmd_simulate(cfg: RunConfig) -> str:
    _require(cfg, "family", "n")
    if cfg.family not in ("tmixture", "allsame"):
        raise InvalidInput(f"family: must be tmixture or allsame, got {cfg.family!r}")
    ns = _ints(cfg.n, "n")
    samples, seed = _sampling(cfg)
    param = "eps" if cfg.family == "tmixture" else "p"
    other = "p" if param == "eps" else "eps"
    if getattr(cfg, other) is not None:
        raise InvalidInput(f"{other}: not a knob of family {cfg.family!r}")
    _require(cfg, param)
    params = _rats(getattr(cfg, param), param)
    columns = ["family", "n", param, "win_prob", "ceiling", "mc_estimate", "mc_stderr"]
    rows = []
    for n, v in itertools.product(ns, params):
        if cfg.family == "tmixture":
            win = tmixture_win_prob(n, v)
            ceiling = Fraction(1, 2) / (1 - v)
            mu = TMixture(n, v)
        else:
            mu = AllSame(n, v)
            win = expect(mu, majority(n), cap=n)
            ceiling = None
        est, err = _mc_win(mu, n, samples, seed)
        rows.append([cfg.family, n, v, win, ceiling, est, err])
    return _render(cfg, columns, rows)


_COMMANDS = {
    "power": _cmd_power,
    "classify": _cmd_classify,
    "bounds": _cmd_bounds,
    "ising": _cmd_ising,
    "simulate": _cmd_simulate,
}


# ---------------------------------------------------------------------------
# argument plumbing

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="votepower",
        description="Voting power, weighted-majority classification, "
        "aggregation bounds and broadcast-tree experiments.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name, help_text, *opts):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON file of defaults; flags override it")
        for flag, help_opt, extra in opts:
            p.add_argument(flag, help=help_opt, **extra)
        p.add_argument("--out", help="write the report to this file, not stdout")
        p.add_argument(
            "--format",
            choices=("table", "structured"),
            help="table (default) or structured JSON",
        )
        return p

    fn = ("--function", "function JSON file", {})
    cmd(
        "power",
        "per-variable influence/effect/Banzhaf/Shapley-Shubik report",
        fn,
        ("--measure", "measure JSON file (default: uniform product)", {}),
    )
    cmd(
        "classify",
        "weighted-majority dichotomy with witness artifacts",
        fn,
        ("--emit-dir", "write weights.json or witness_measure.json here",
         {"dest": "emit_dir"}),
    )
    cmd(
        "bounds",
        "aggregation lower bounds, optionally with the tightness LP",
        ("--p", "success marginal(s), comma separated", {}),
        ("--q", "threshold(s), comma separated", {}),
        ("--delta", "total effect share(s), comma separated", {}),
        ("--n", "voter count for the tightness columns", {}),
        ("--r", "threshold numerator for the tightness columns (q = r/n)", {}),
    )
    cmd(
        "ising",
        "broadcast-tree sweep: exact mean, MC estimate, claim bounds",
        ("--r", "tree depth(s): int, list or lo..hi range", {}),
        ("--eps", "edge flip probability", {}),
        ("--delta", "leaf resample probability", {}),
        ("--method", "mean computation", {"choices": ("auto", "exact", "float")}),
        ("--samples", "Monte Carlo sample count", {}),
        ("--seed", "RNG seed (required with --samples)", {}),
    )
    cmd(
        "simulate",
        "majority win probability under the counterexample measures",
        ("--family", "measure family", {"choices": ("tmixture", "allsame")}),
        ("--n", "voter count(s), comma separated", {}),
        ("--eps", "mixture floor(s), tmixture only", {}),
        ("--p", "consensus probability(ies), allsame only", {}),
        ("--samples", "Monte Carlo sample count", {}),
        ("--seed", "RNG seed (required with --samples)", {}),
    )
    return ap


def _merge(args: argparse.Namespace) -> RunConfig:
    ns = vars(args)
    merged = {}
    if args.config is not None:
        if not os.path.isfile(args.config):
            raise InvalidInput(f"config: file not found: {args.config}")
        with open(args.config) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InvalidInput(f"config: {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise InvalidInput("config: top level must be a JSON object")
        allowed = (set(ns) - {"config"}) | {"command"}
        for key, val in data.items():
            if key not in allowed:
                raise InvalidInput(
                    f"config: field {key!r} is not accepted by command "
                    f"{args.command!r}"
                )
            merged[key] = val
        if merged.get("command", args.command) != args.command:
            raise InvalidInput(
                f"config: command {merged['command']!r} does not match "
                f"{args.command!r}"
            )
    for key, val in ns.items():
        if key != "config" and val is not None:
            merged[key] = val
    merged["command"] = args.command
    if merged.get("format") is None:
        merged["format"] = "table"
    if merged["format"] not in ("table", "structured"):
        raise InvalidInput(f"format: must be table or structured, got "
                           f"{merged['format']!r}")
    return RunConfig(**{f: merged.get(f) for f in _FIELDS})


def _check_paths(cfg: RunConfig):
    for field in ("function", "measure"):
        path = getattr(cfg, field)
        if path is not None and not os.path.isfile(path):
            raise InvalidInput(f"{field}: file not found: {path}")
    if cfg.out is not None:
        parent = os.path.dirname(os.path.abspath(cfg.out))
        if not os.path.isdir(parent):
            raise InvalidInput(f"out: directory does not exist: {parent}")
    if cfg.emit_dir is not None and os.path.exists(cfg.emit_dir):
        if not os.path.isdir(cfg.emit_dir):
            raise InvalidInput(f"emit_dir: not a directory: {cfg.emit_dir}")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _merge(args)
        _check_paths(cfg)
        text = _COMMANDS[cfg.command](cfg)
        if cfg.out is not None:
            with open(cfg.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except VerificationFailed as exc:
        print(f"error: internal verification failed: {exc}", file=sys.stderr)
        return 3
    except (VotepowerError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
