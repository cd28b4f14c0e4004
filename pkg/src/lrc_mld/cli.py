"""Command-line interface.

Every run echoes its fully resolved configuration as JSON to stderr, which is
sufficient to reproduce the output bit-exactly. Exit codes: 0 success, 1
runtime refusal (invalid structure, exceeded budget, infeasible parameters),
2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bounds, code_model, montecarlo
from .channel import ChannelSpec
from .montecarlo import (
    AbstractSource,
    BudgetExceeded,
    ExperimentConfig,
    SimplexSource,
)


def _echo_config(args: argparse.Namespace) -> None:
    resolved = {k: v for k, v in sorted(vars(args).items()) if not k.startswith("_")}
    resolved.pop("func", None)
    print("config: " + json.dumps(resolved, default=str), file=sys.stderr)


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _channel_from_args(args, for_ber: bool) -> ChannelSpec:
    kind = args.channel
    if kind in ("bsc", "bec"):
        if args.p is None:
            raise SystemExit2("--p is required for bsc/bec channels")
        return ChannelSpec.bsc(args.p) if kind == "bsc" else ChannelSpec.bec(args.p)
    if for_ber:
        raise SystemExit2("BER estimation supports bsc/bec channels only")
    if args.w is None:
        raise SystemExit2("--w is required for fixed-weight channels")
    if kind == "fixed-error":
        return ChannelSpec.fixed_error(args.w)
    return ChannelSpec.fixed_erasure(args.w)


class SystemExit2(Exception):
    """Usage error discovered after argparse (maps to exit code 2)."""


def _source_from_args(args):
    if getattr(args, "abstract", False):
        if args.r is None or args.t is None:
            raise SystemExit2("--abstract needs --r and --t")
        return AbstractSource(r=args.r, t=args.t)
    if getattr(args, "infile", None) is None:
        raise SystemExit2("either --in PATH or --abstract --r R --t T is required")
    rs, kind = code_model.load_structure(args.infile)
    if kind.startswith("simplex(m="):
        try:
            return SimplexSource(m=int(kind[len("simplex(m="):-1]))
        except ValueError:
            pass
    return _FileSource(rs, kind)


class _FileSource:
    """Structure loaded from JSON; behaves like the built-in sources."""

    def __init__(self, rs, kind):
        self._rs = rs
        self.kind = kind
        self.n, self.r, self.t = rs.n, rs.r, rs.t

    def label(self) -> str:
        return f"file|{self.kind}|n={self.n}|r={self.r}|t={self.t}"

    def structure(self):
        return self._rs


# ---------------------------------------------------------------------------
# Subcommand handlers

def _cmd_construct_simplex(args) -> int:
    spec = code_model.simplex_spec(args.m)
    code_model.save_structure(args.out, spec.structure, kind=spec.kind)
    return 0


def _cmd_construct_synthetic(args) -> int:
    spec = code_model.synthetic_spec(args.n, args.r, args.t, args.seed)
    code_model.save_structure(args.out, spec.structure, kind=spec.kind)
    return 0


def _cmd_validate(args) -> int:
    with open(args.infile) as fh:
        data = json.load(fh)
    rs, violations, _kind = code_model.structure_from_dict(data)
    for v in violations:
        print(v)
    if violations:
        print(f"{len(violations)} violation(s)", file=sys.stderr)
        return 1
    print("valid")
    return 0


def _cmd_bounds(args) -> int:
    r, t, p, n, c = args.r, args.t, args.p, args.n, args.c
    out: list[tuple[str, object]] = []

    def bound_line(name: str, bv: bounds.BoundValue) -> None:
        out.append((name, f"{bv.value:.17g} (log2 = {bv.log2_value:.17g})"))

    which = args.which
    if args.channel == "bsc":
        if which in (None, "chernoff"):
            bound_line("chernoff", bounds.chernoff_bit_bound_bsc(p, r, t))
        if which in (None, "exact"):
            bound_line("exact", bounds.exact_bit_failure_bsc(p, r, t))
        if which == "union" or (which is None and n is not None):
            if n is None:
                raise SystemExit2("--n is required for the union bound")
            bound_line("union", bounds.union_bler_bound(n, bounds.chernoff_bit_bound_bsc(p, r, t)))
        if which in (None, "kl"):
            out.append(("kl_rate_nats", f"{bounds.kl_rate(bounds.vote_probs(p, r).correct):.17g}"))
        if which == "threshold" or (which is None and c is not None):
            if n is None or c is None:
                raise SystemExit2("threshold needs --n and --c")
            out.append(("threshold_weight", f"{bounds.bsc_weight_threshold(n, r, t, c):.17g}"))
    elif args.channel == "bec":
        if which == "chernoff":
            raise SystemExit2("the exponential bound applies to the BSC; BEC has an exact formula")
        if which == "kl":
            raise SystemExit2("the KL decay rate applies to the BSC vote bias")
        if which in (None, "exact"):
            bound_line("exact", bounds.exact_bit_failure_bec(p, r, t))
        if which == "union" or (which is None and n is not None):
            if n is None:
                raise SystemExit2("--n is required for the union bound")
            bound_line("union", bounds.union_bler_bound(n, bounds.exact_bit_failure_bec(p, r, t)))
        if which == "threshold" or (which is None and c is not None):
            if n is None or c is None:
                raise SystemExit2("threshold needs --n and --c")
            out.append(("threshold_weight", f"{bounds.bec_weight_threshold(n, r, t, c):.17g}"))
    if which in (None, "worstcase"):
        erasures, errors = bounds.availability_worst_case(t)
        out.append(("worstcase", f"erasures={erasures} errors={errors}"))
    for name, text in out:
        print(f"{name} = {text}")
    return 0


def _cmd_simulate_ber(args) -> int:
    source = _source_from_args(args)
    channel = _channel_from_args(args, for_ber=True)
    config = ExperimentConfig(
        source=source, channel=channel, trials=args.trials,
        master_seed=args.seed, estimator=args.estimator, target="ber",
    )
    res = montecarlo.estimate_ber(config, threads=args.threads)
    row = montecarlo.ber_result_row(res)
    _write(args.out, montecarlo.rows_to_csv([row], montecarlo.BER_HEADER))
    return 0


def _cmd_simulate_bler(args) -> int:
    source = _source_from_args(args)
    if isinstance(source, AbstractSource):
        raise SystemExit2("block simulation needs --in PATH (a real structure)")
    channel = _channel_from_args(args, for_ber=False)
    config = ExperimentConfig(
        source=source, channel=channel, trials=args.trials,
        master_seed=args.seed, target="bler",
    )
    res = montecarlo.estimate_bler(config, threads=args.threads)
    row = montecarlo.ber_result_row(res)
    _write(args.out, montecarlo.rows_to_csv([row], montecarlo.BER_HEADER))
    return 0


def _cmd_simulate_weight_sweep(args) -> int:
    source = _source_from_args(args)
    if isinstance(source, AbstractSource):
        raise SystemExit2("weight sweeps need --in PATH (a real structure)")
    weights = [int(w) for w in args.weights.split(",") if w]
    rows = montecarlo.weight_sweep(
        source, args.kind, weights, args.trials, args.seed, threads=args.threads,
    )
    _write(args.out, montecarlo.rows_to_csv(rows, montecarlo.SWEEP_HEADER))
    return 0


def _cmd_oracle_weight(args) -> int:
    rs, _kind = code_model.load_structure(args.infile)
    count, total = montecarlo.exhaustive_oracle(rs, args.kind, args.w)
    print(f"{count}/{total} = {count / total:.17g}")
    return 0


def _cmd_figure1(args) -> int:
    rows = montecarlo.figure1_experiment(
        nexp_min=args.nexp_min, nexp_max=args.nexp_max, trials=args.trials,
        master_seed=args.seed, threads=args.threads,
    )
    _write(args.out, montecarlo.rows_to_csv(rows, montecarlo.BER_HEADER))
    return 0


def _cmd_figure2(args) -> int:
    rows = montecarlo.figure2_computation(nexp_min=args.nexp_min, nexp_max=args.nexp_max)
    _write(args.out, montecarlo.rows_to_csv(rows, montecarlo.FIG2_HEADER))
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrc-mld",
        description="Majority-logic decoding of binary LRCs: constructions, bounds, simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    construct = sub.add_parser("construct", help="emit a recovery-structure JSON")
    csub = construct.add_subparsers(dest="what", required=True)
    simplex = csub.add_parser("simplex")
    simplex.add_argument("--m", type=int, required=True)
    simplex.add_argument("--out", required=True)
    simplex.set_defaults(func=_cmd_construct_simplex)
    synth = csub.add_parser("synthetic")
    synth.add_argument("--n", type=int, required=True)
    synth.add_argument("--r", type=int, required=True)
    synth.add_argument("--t", type=int, required=True)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out", required=True)
    synth.set_defaults(func=_cmd_construct_synthetic)

    validate = sub.add_parser("validate", help="check a structure JSON")
    validate.add_argument("--in", dest="infile", required=True)
    validate.set_defaults(func=_cmd_validate)

    bnd = sub.add_parser("bounds", help="closed-form failure probabilities")
    bnd.add_argument("--channel", choices=["bsc", "bec"], required=True)
    bnd.add_argument("--p", type=float, required=True)
    bnd.add_argument("--r", type=int, required=True)
    bnd.add_argument("--t", type=int, required=True)
    bnd.add_argument("--n", type=int)
    bnd.add_argument("--c", type=float)
    bnd.add_argument(
        "--which", choices=["chernoff", "exact", "union", "kl", "worstcase", "threshold"],
    )
    bnd.set_defaults(func=_cmd_bounds)

    sim = sub.add_parser("simulate", help="Monte Carlo estimation")
    ssub = sim.add_subparsers(dest="what", required=True)

    def add_sim_common(p, ber: bool):
        p.add_argument("--in", dest="infile")
        if ber:
            p.add_argument("--abstract", action="store_true")
            p.add_argument("--r", type=int)
            p.add_argument("--t", type=int)
        p.add_argument(
            "--channel", required=True,
            choices=["bsc", "bec"] if ber else ["bsc", "bec", "fixed-error", "fixed-erasure"],
        )
        p.add_argument("--p", type=float)
        if not ber:
            p.add_argument("--w", type=int)
        p.add_argument("--trials", type=int, default=10 ** 5)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", default="1")
        p.add_argument("--out", required=True)

    ber = ssub.add_parser("ber")
    add_sim_common(ber, ber=True)
    ber.add_argument("--estimator", choices=["bitlevel", "parity_shortcut"], default="bitlevel")
    ber.set_defaults(func=_cmd_simulate_ber)
    bler = ssub.add_parser("bler")
    add_sim_common(bler, ber=False)
    bler.set_defaults(func=_cmd_simulate_bler)
    sweep = ssub.add_parser("weight-sweep")
    sweep.add_argument("--in", dest="infile", required=True)
    sweep.add_argument("--kind", choices=["error", "erasure"], required=True)
    sweep.add_argument("--weights", required=True, help="comma-separated weights")
    sweep.add_argument("--trials", type=int, default=10 ** 4)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--threads", default="1")
    sweep.add_argument("--out", required=True)
    sweep.set_defaults(func=_cmd_simulate_weight_sweep)

    oracle = sub.add_parser("oracle", help="exhaustive pattern enumeration")
    osub = oracle.add_subparsers(dest="what", required=True)
    ow = osub.add_parser("weight")
    ow.add_argument("--in", dest="infile", required=True)
    ow.add_argument("--kind", choices=["error", "erasure"], required=True)
    ow.add_argument("--w", type=int, required=True)
    ow.set_defaults(func=_cmd_oracle_weight)

    fig1 = sub.add_parser("figure1", help="empirical-vs-bound BER curves (CSV)")
    fig1.add_argument("--out", required=True)
    fig1.add_argument("--trials", type=int, default=10 ** 5)
    fig1.add_argument("--nexp-min", type=int, default=6)
    fig1.add_argument("--nexp-max", type=int, default=14)
    fig1.add_argument("--seed", type=int, default=0)
    fig1.add_argument("--threads", default="1")
    fig1.set_defaults(func=_cmd_figure1)

    fig2 = sub.add_parser("figure2", help="union-bound block-failure curves (CSV)")
    fig2.add_argument("--out", required=True)
    fig2.add_argument("--nexp-min", type=int, default=6)
    fig2.add_argument("--nexp-max", type=int, default=30)
    fig2.set_defaults(func=_cmd_figure2)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", None) is not None and args.threads != "auto":
        try:
            args.threads = int(args.threads)
        except ValueError:
            parser.error("--threads must be an integer or 'auto'")
    _echo_config(args)
    try:
        return args.func(args)
    except SystemExit2 as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (bounds.ParameterError, code_model.InfeasibleParameters, BudgetExceeded,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
