"""Command-line front end.

    cohfrac state gen --kind mcms --d 4 --p 0.5 --out state.json
    cohfrac measure state.json --measures cf,cr,cl1,mu,gap
    cohfrac simulate --dims 4,5,6 --samples 500 --seed 3 --out gaps.csv
    cohfrac verify --suite theorem3 --samples 500

Exit status: 0 success, 1 validation error, 2 numerical failure.
"""

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from .experiments import SUITES, SimulationError, run_gap_simulation, run_suite, summarize, write_csv
from .experiments.simulation import fmt
from .linalg import ValidationError
from .measures import CfConfig, CrConfig, DomainError, SdpError, c_l1, coherence_fraction, mu_d, robustness
from .states import (
    maximally_coherent,
    mcms_state,
    mub_mixed_state,
    pure_state,
    random_density,
    read_density,
    state_to_json,
    write_state,
)

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2
MEASURES = ("cf", "cr", "cl1", "mu", "gap")
THREADS_ENV = "COHFRAC_THREADS"

log = logging.getLogger("cohfrac")


class UsageError(ValidationError):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _check(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("optimizer / solver overrides")
    g.add_argument("--cf-seed", type=int, default=0, help="seed for random optimizer starts (default 0)")
    g.add_argument("--cf-starts", type=int, default=None,
                   help="random starts for C_F (default max(50, 20*(d-1)))")
    g.add_argument("--cf-max-iter", type=int, default=500, help="ascent iterations per start (default 500)")
    g.add_argument("--sdp-gap-tol", type=float, default=1e-9,
                   help="stop the barrier method once d*mu falls below this (default 1e-9)")
    g.add_argument("--sdp-max-newton", type=int, default=100,
                   help="Newton steps allowed per barrier weight (default 100)")


def _configs(args) -> tuple[CfConfig, CrConfig]:
    _check(args.cf_seed >= 0, "--cf-seed must be >= 0")
    _check(args.cf_starts is None or args.cf_starts >= 1, "--cf-starts must be >= 1")
    _check(args.cf_max_iter >= 1, "--cf-max-iter must be >= 1")
    _check(0 < args.sdp_gap_tol <= 1e-3, "--sdp-gap-tol must lie in (0, 1e-3]")
    _check(args.sdp_max_newton >= 1, "--sdp-max-newton must be >= 1")
    return (CfConfig(seed=args.cf_seed, n_starts=args.cf_starts, max_iter=args.cf_max_iter),
            CrConfig(gap_tol=args.sdp_gap_tol, max_newton=args.sdp_max_newton))


def build_parser() -> argparse.ArgumentParser:
    parser = Parser(prog="cohfrac", description="Quantum coherence fraction and robustness of coherence.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    state = sub.add_parser("state", help="state files")
    state_sub = state.add_subparsers(dest="state_command", required=True, parser_class=Parser)
    gen = state_sub.add_parser("gen", help="write a JSON state file")
    gen.add_argument("--kind", required=True, choices=["pure", "mcms", "random", "mub-mixed"])
    gen.add_argument("--d", type=int, help="dimension (mcms, random, or pure without --amps)")
    gen.add_argument("--p", type=float, help="MCMS mixing weight in [0, 1]")
    gen.add_argument("--seed", type=int, default=0, help="seed for --kind random")
    gen.add_argument("--amps", type=_float_list, help="pure-state amplitude moduli, comma separated")
    gen.add_argument("--phases", type=_float_list, help="pure-state phases in radians")
    gen.add_argument("--normalize", action="store_true", help="rescale --amps to unit norm")
    gen.add_argument("--basis", type=int, help="qutrit MUB index 1..3 for mub-mixed")
    gen.add_argument("--evals", type=_float_list, help="three eigenvalues for mub-mixed")
    gen.add_argument("--out", default="-", help="output path (default stdout)")

    meas = sub.add_parser("measure", help="evaluate coherence measures of a state file")
    meas.add_argument("input", help="JSON state file")
    meas.add_argument("--measures", default=",".join(MEASURES),
                      help=f"comma-separated subset of {{{','.join(MEASURES)}}}")
    meas.add_argument("--json", dest="json_out", help="also write the report as JSON to this path ('-' for stdout)")
    _add_solver_flags(meas)

    sim = sub.add_parser("simulate", help="random-state gap simulation, CSV output")
    sim.add_argument("--dims", type=_int_list, required=True, help="comma-separated dimensions in 2..16")
    sim.add_argument("--samples", type=int, default=1000, help="states per dimension (default 1000)")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", default="-", help="CSV path (default stdout; summary then goes to stderr)")
    sim.add_argument("--threads", type=int, default=None, help=f"worker processes (default ${THREADS_ENV} or 1)")
    _add_solver_flags(sim)

    ver = sub.add_parser("verify", help="run a verification suite")
    ver.add_argument("--suite", required=True, help=f"one of {', '.join(SUITES)}")
    ver.add_argument("--samples", type=int, default=None, help="samples (suite-specific default)")
    ver.add_argument("--seed", type=int, default=0)
    _add_solver_flags(ver)
    return parser


def _emit_text(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_state_gen(args) -> int:
    kind = args.kind
    if kind == "mcms":
        _check(args.d is not None and args.d >= 1, "--d >= 1 is required for mcms")
        _check(args.p is not None, "--p is required for mcms")
        state = mcms_state(args.d, args.p)
    elif kind == "random":
        _check(args.d is not None and args.d >= 2, "--d >= 2 is required for random")
        _check(args.seed >= 0, "--seed must be >= 0")
        state = random_density(args.d, args.seed)
    elif kind == "mub-mixed":
        _check(args.basis is not None, "--basis is required for mub-mixed")
        _check(args.evals is not None, "--evals is required for mub-mixed")
        state = mub_mixed_state(args.basis, args.evals)
    else:
        if args.amps is None:
            _check(args.d is not None and args.d >= 1, "pure states need --amps or --d")
            state = maximally_coherent(args.d, args.phases)
        else:
            amps = np.asarray(args.amps, dtype=float)
            _check(np.all(amps >= 0), "--amps are moduli and must be nonnegative")
            if args.normalize:
                _check(np.linalg.norm(amps) > 0, "--amps must not all be zero")
                amps = amps / np.linalg.norm(amps)
            phases = np.zeros_like(amps) if args.phases is None else np.asarray(args.phases, dtype=float)
            _check(phases.shape == amps.shape, "--phases must match --amps in length")
            state = pure_state(amps * np.exp(1j * phases))
    if args.out == "-":
        sys.stdout.write(json.dumps(state_to_json(state), indent=1) + "\n")
    else:
        try:
            write_state(args.out, state)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from exc
    return EXIT_OK


def cmd_measure(args) -> int:
    wanted = [m.strip() for m in args.measures.split(",") if m.strip()]
    unknown = sorted(set(wanted) - set(MEASURES))
    _check(not unknown and bool(wanted), f"unknown measures {unknown}; choose from {', '.join(MEASURES)}")
    cf_config, cr_config = _configs(args)
    try:
        rho = read_density(args.input)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from exc
    d = rho.shape[0]
    report: dict = {"dim": d}
    lines = [f"state: {args.input} (d={d})"]
    cf_rep = cr_rep = None
    if "cf" in wanted or "gap" in wanted:
        cf_rep = coherence_fraction(rho, cf_config)
    if "cr" in wanted or "gap" in wanted:
        cr_rep = robustness(rho, cr_config)
    for m in wanted:
        if m == "cf":
            phases = [fmt(t) for t in cf_rep.optimal_phases]
            lines.append(f"cf   {fmt(cf_rep.value)}  phases=[{', '.join(phases)}] starts={cf_rep.starts_used}")
            report["cf"] = {"value": cf_rep.value, "optimal_phases": cf_rep.optimal_phases.tolist(),
                            "starts_used": cf_rep.starts_used, "best_objective_f": cf_rep.best_objective_f}
        elif m == "cr":
            lines.append(f"cr   {fmt(cr_rep.value)}  normalized={fmt(cr_rep.normalized)} "
                         f"duality_gap={fmt(cr_rep.duality_gap)}")
            report["cr"] = {"value": cr_rep.value, "normalized": cr_rep.normalized,
                            "duality_gap": cr_rep.duality_gap, "sigma_diag": cr_rep.sigma_diag.tolist()}
        elif m == "cl1":
            v = c_l1(rho)
            lines.append(f"cl1  {fmt(v)}  normalized={fmt((1 + v) / d)}")
            report["cl1"] = {"value": v, "normalized": (1 + v) / d}
        elif m == "mu":
            v = mu_d(rho)
            lines.append(f"mu   {fmt(v)}")
            report["mu"] = {"value": v}
        elif m == "gap":
            v = (cr_rep.normalized - cf_rep.value) / cr_rep.normalized
            lines.append(f"gap  {fmt(v)}")
            report["gap"] = {"value": v}
    print("\n".join(lines))
    if args.json_out:
        _emit_text(json.dumps(report, indent=1) + "\n", args.json_out)
    return EXIT_OK


def format_summary(summaries) -> str:
    rows = [f"{'dim':>4} {'n':>7} {'max_gap':>20} {'mean_gap':>20} {'negative':>9} {'errors':>7}"]
    for s in summaries:
        rows.append(f"{s.dim:>4} {s.n:>7} {fmt(s.max_gap):>20} {fmt(s.mean_gap):>20} "
                    f"{s.negative_count:>9} {s.error_count:>7}")
    return "\n".join(rows) + "\n"


def cmd_simulate(args) -> int:
    cf_config, cr_config = _configs(args)
    _check(bool(args.dims) and all(2 <= d <= 16 for d in args.dims), "--dims must lie in 2..16")
    _check(args.samples >= 1, "--samples must be >= 1")
    _check(args.seed >= 0, "--seed must be >= 0")
    threads = args.threads if args.threads is not None else _default_threads()
    _check(threads >= 1, "--threads must be >= 1")
    records = run_gap_simulation(args.dims, args.samples, args.seed, cf_config, cr_config, threads)
    summary = format_summary(summarize(records))
    if args.out == "-":
        write_csv(records, sys.stdout)
        sys.stderr.write(summary)
    else:
        try:
            with open(args.out, "w", newline="") as fh:
                write_csv(records, fh)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from exc
        sys.stdout.write(summary)
    return EXIT_OK


def cmd_verify(args) -> int:
    cf_config, cr_config = _configs(args)
    _check(args.samples is None or args.samples >= 1, "--samples must be >= 1")
    report = run_suite(args.suite, args.samples, args.seed, cf_config, cr_config)
    print("\n".join(report.lines()))
    print(f"suite {args.suite}: {'PASS' if report.passed else 'FAIL'}")
    return EXIT_OK if report.passed else EXIT_NUMERICAL


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help/--version or a usage error
        return exc.code if isinstance(exc.code, int) else EXIT_VALIDATION
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handlers = {"state": cmd_state_gen, "measure": cmd_measure, "simulate": cmd_simulate, "verify": cmd_verify}
    try:
        return handlers[args.command](args)
    except (ValidationError, DomainError) as exc:
        print(f"cohfrac: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SdpError, SimulationError, np.linalg.LinAlgError) as exc:
        print(f"cohfrac: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
