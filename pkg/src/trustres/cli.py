"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 oracle atom limit
exceeded, 4 I/O error.  Diagnostics go to stderr; data goes to the file named
by ``-o`` (``-`` means stdout).
"""
from __future__ import annotations

import argparse
import sys

from . import generators
from .bench import GenSpec, emit_csv, emit_svg, fit_scaling_exponent, run_benchmark
from .bulk import bulk_resolve, load_poss, poss_to_csv
from .engine import resolve, resolve_all_keys
from .errors import DomainTooLarge, InsufficientData, ValidationError
from .network import dumps_network, load_network
from .oracle import DEFAULT_ATOM_LIMIT, oracle_resolve
from .result import results_to_csv
from .verify import run_verify

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_LIMIT, EXIT_IO = 0, 1, 2, 3, 4

NETWORK_FORMAT = """\
network files are UTF-8 JSON:
  {"users": ["u1", ...],
   "mappings": [{"target": "u2", "source": "u1", "priority": 1}, ...],
   "beliefs": [{"user": "u1", "key": "k1", "value": "a"}, ...]}
unknown fields are rejected."""

RESULT_FORMAT = """\
result files are CSV with header user,key,value,certain: one row per possible
value, certain is true when it is the user's only possible value.  A leading
line '# no_stable_solution' marks an instance without any stable solution."""

POSS_FORMAT = """\
belief and output tables are CSV with header X,K,V (user, object key, value)."""

BENCH_FORMAT = """\
bench CSV header: suite,family,n_users,n_mappings,n_objects,conflict_fraction,
trials,elapsed_mean_s,elapsed_min_s,elapsed_max_s.  --raw writes per-trial
times as suite,family,trial,elapsed_s.  --svg writes a log-log chart."""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _parser() -> argparse.ArgumentParser:
    fmt = argparse.RawDescriptionHelpFormatter
    p = _Parser(prog="trustres", description="Conflict resolution in trust networks.",
                epilog=NETWORK_FORMAT, formatter_class=fmt)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate a workload", epilog=NETWORK_FORMAT + "\n" + POSS_FORMAT,
                         formatter_class=fmt)
    kinds = gen.add_subparsers(dest="family", required=True, parser_class=_Parser)
    g = kinds.add_parser("cycles", help="disconnected 4-user oscillator clusters", epilog=NETWORK_FORMAT,
                         formatter_class=fmt)
    g.add_argument("--clusters", type=int, required=True, help="number of clusters")
    g = kinds.add_parser("scalefree", help="preferential-attachment network", epilog=NETWORK_FORMAT,
                         formatter_class=fmt)
    g.add_argument("--nodes", type=int, required=True, help="number of users")
    g.add_argument("--edges-per-node", type=int, default=2, help="links per arriving user (default 2)")
    g.add_argument("--belief-fraction", type=float, default=0.5, help="share of users with a belief (default 0.5)")
    g.add_argument("--sample", type=float, default=1.0, help="keep this fraction of mappings (default 1.0)")
    g = kinds.add_parser("nested", help="quadratic worst-case ladder", epilog=NETWORK_FORMAT,
                         formatter_class=fmt)
    g.add_argument("--users", type=int, required=True, help="number of users (>= 8)")
    g = kinds.add_parser("bulkload", help="beliefs table for the fixed 7-user topology", epilog=POSS_FORMAT,
                         formatter_class=fmt)
    g.add_argument("--objects", type=int, required=True, help="number of object keys")
    g.add_argument("--conflict-fraction", type=float, default=0.0, help="share of keys whose believers disagree")
    g.add_argument("--topology-out", help="also write the topology network JSON here")
    for name, g in kinds.choices.items():
        g.add_argument("--seed", type=int, default=0, help="64-bit PRNG seed (default 0)")
        g.add_argument("-o", "--output", required=True, help="output file, '-' for stdout")

    r = sub.add_parser("resolve", help="possible and certain values with the polynomial algorithm",
                       epilog=NETWORK_FORMAT + "\n" + RESULT_FORMAT, formatter_class=fmt)
    r.add_argument("--network", required=True, help="network JSON file")
    r.add_argument("--key", help="key to resolve (default: every key with beliefs)")
    r.add_argument("-o", "--output", required=True, help="result CSV, '-' for stdout")

    o = sub.add_parser("oracle", help="same output computed by stable-model enumeration",
                       epilog=NETWORK_FORMAT + "\n" + RESULT_FORMAT, formatter_class=fmt)
    o.add_argument("--network", required=True, help="network JSON file")
    o.add_argument("--key", required=True, help="key to resolve")
    o.add_argument("--atom-limit", type=int, default=DEFAULT_ATOM_LIMIT,
                   help=f"refuse programs with more atoms (default {DEFAULT_ATOM_LIMIT}, 0 = no limit)")
    o.add_argument("-o", "--output", required=True, help="result CSV, '-' for stdout")

    b = sub.add_parser("bulk", help="resolve many objects over one belief-free topology",
                       epilog=NETWORK_FORMAT + "\n" + POSS_FORMAT, formatter_class=fmt)
    b.add_argument("--topology", required=True, help="network JSON without beliefs")
    b.add_argument("--beliefs", required=True, help="X,K,V beliefs CSV")
    b.add_argument("-o", "--output", required=True, help="X,K,V output CSV, '-' for stdout")

    be = sub.add_parser("bench", help="time a workload sweep", epilog=BENCH_FORMAT, formatter_class=fmt)
    be.add_argument("suite", choices=["ra", "oracle", "bulk"])
    be.add_argument("--family", choices=["cycles", "scalefree", "nested", "bulk"],
                    help="workload family (default: cycles, or bulk for the bulk suite)")
    be.add_argument("--sizes", required=True,
                    help="comma-separated sizes: clusters, nodes, users or objects depending on family")
    be.add_argument("--conflict-fraction", type=float, default=0.0, help="bulk family only")
    be.add_argument("--trials", type=int, default=20, help="timed runs per size (default 20)")
    be.add_argument("--seed", type=int, default=0, help="64-bit PRNG seed (default 0)")
    be.add_argument("--atom-limit", type=int, default=0, help="oracle atom limit (default 0 = none)")
    be.add_argument("--interleave", action="store_true",
                    help="alternate between sizes every trial (for comparing sizes as ratios)")
    be.add_argument("-o", "--output", required=True, help="bench CSV")
    be.add_argument("--raw", help="per-trial times CSV")
    be.add_argument("--svg", help="log-log chart")

    v = sub.add_parser("verify", help="check the algorithm against the oracle on small instances")
    v.add_argument("--seed", type=int, default=0, help="seed for the random part (default 0)")
    v.add_argument("--random", type=int, default=1000, help="random instances (default 1000)")
    v.add_argument("--no-grid", action="store_true", help="skip the systematic grid")
    return p


def _write(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


_SIZE_PARAM = {"cycles": "n_clusters", "scalefree": "n_nodes", "nested": "n_users", "bulk": "n_objects"}


def _cmd_gen(a) -> int:
    if a.family == "cycles":
        _write(dumps_network(generators.gen_cycle_clusters(a.clusters, a.seed)), a.output)
    elif a.family == "scalefree":
        net = generators.gen_scale_free(a.nodes, a.edges_per_node, a.seed, belief_fraction=a.belief_fraction)
        _write(dumps_network(generators.sample_edges(net, a.sample, a.seed)), a.output)
    elif a.family == "nested":
        _write(dumps_network(generators.gen_nested_cycles(a.users, a.seed)), a.output)
    else:
        table = generators.gen_bulk_workload(a.objects, a.conflict_fraction, a.seed)
        _write(poss_to_csv(table), a.output)
        if a.topology_out:
            _write(dumps_network(generators.bulk_topology()), a.topology_out)
    return EXIT_OK


def _cmd_resolve(a) -> int:
    net = load_network(a.network)
    results = [resolve(net, a.key)] if a.key is not None else resolve_all_keys(net)
    _write(results_to_csv(results), a.output)
    return EXIT_OK


def _cmd_oracle(a) -> int:
    net = load_network(a.network)
    result = oracle_resolve(net, a.key, a.atom_limit or None)
    _write(results_to_csv([result]), a.output)
    return EXIT_OK


def _cmd_bulk(a) -> int:
    out = bulk_resolve(load_network(a.topology), load_poss(a.beliefs))
    _write(poss_to_csv(out), a.output)
    return EXIT_OK


def _cmd_bench(a) -> int:
    family = a.family or ("bulk" if a.suite == "bulk" else "cycles")
    try:
        sizes = [int(s) for s in a.sizes.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"--sizes must be comma-separated integers, got {a.sizes!r}") from None
    specs = []
    for n in sizes:
        params = {_SIZE_PARAM[family]: n}
        if family == "bulk":
            params["conflict_fraction"] = a.conflict_fraction
        specs.append(GenSpec(family, params, a.seed))
    records = run_benchmark(a.suite, specs, a.trials, a.atom_limit or None, a.interleave)
    emit_csv(records, a.output, a.raw)
    if a.svg:
        emit_svg(records, a.svg, f"{a.suite} on {family}")
    for r in records:
        print(f"{r.family}: size {r.size}, mean {r.elapsed:.6g} s", file=sys.stderr)
    try:
        fit = fit_scaling_exponent(records)
        print(f"scaling exponent {fit.exponent:.3f} (R^2 {fit.r_squared:.3f})", file=sys.stderr)
    except InsufficientData as exc:
        print(f"no scaling fit: {exc}", file=sys.stderr)
    return EXIT_OK


def _cmd_verify(a) -> int:
    report = run_verify(a.seed, a.random, grid=not a.no_grid)
    for net, got, want in report.mismatches[:5]:
        print(f"mismatch on {dumps_network(net).strip()}\n  algorithm: {got}\n  oracle:    {want}", file=sys.stderr)
    print(f"checked {report.checked} instances, {len(report.mismatches)} mismatches", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_INVALID


COMMANDS = {"gen": _cmd_gen, "resolve": _cmd_resolve, "oracle": _cmd_oracle,
            "bulk": _cmd_bulk, "bench": _cmd_bench, "verify": _cmd_verify}


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except DomainTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
