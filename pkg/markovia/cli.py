"""markovia - command-line front end for the verifiers."""

import argparse
import sys
import time
from collections.abc import Callable, Sequence
from typing import Any

import numpy as np
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from .config import RunConfig, Settings, load_json_config
from .counterexamples import (
    ma_shift_verdicts,
    parity_from_config,
    parity_verdicts,
    theta_shift_from_config,
    theta_shift_verdicts,
)
from .discrete import (
    chain_dcp_report,
    chain_from_config,
    ising_convergence_report,
    ising_exact,
    ising_from_config,
    marginal_consistency,
    random_chain_spec,
)
from .errors import ConfigError, MarkoviaError
from .gaussian import (
    DecayEnvelope,
    conditional_convergence,
    model_from_config,
    verify_gaussian_conditions,
)
from .graph import explicit_graph, graph_from_config
from .graphoid import (
    Axiom,
    MarkovProperty,
    check_axiom,
    check_markov,
    equivalence_audit,
    pairwise_graph,
    random_edge_potential_pmf,
    random_positive_pmf,
    relation_from_config,
    relation_from_discrete,
)
from .log import configure_logging, get_logger
from .parallel import ordered_map
from .report import DiagnosticReport, Verdict, merge_reports
from .serialize import read_report, write_csv, write_report

logger = get_logger(__name__)

console = Console()

ITEM_COLUMNS = ["item", "verdict", "detail"]

# Fixed CSV columns and the trace each command writes.
CSV_COLUMNS: dict[str, list[str]] = {
    "check-graphoid": ITEM_COLUMNS,
    "check-markov": ITEM_COLUMNS,
    "audit-equivalence": ITEM_COLUMNS,
    "gaussian-verify": ["n", "lambda_min", "lambda_max", "max_row_sum"],
    "gaussian-converge": ["n", "delta_cond_cov", "delta_coef", "cond_var_min"],
    "ising-exact": ["state", "probability"],
    "ising-converge": ["n", "v", "f_m", "alpha", "beta", "bound_ok"],
    "chain-dcp": ["trial", "m", "n_prime", "variance", "bound"],
    "counterexample": ["example", "param", "statistic", "value"],
    "merge-reports": ITEM_COLUMNS,
}

_TRACES = {
    "gaussian-verify": "eigen",
    "gaussian-converge": "convergence",
    "ising-exact": "ising_exact",
    "ising-converge": "ising",
    "chain-dcp": "dcp",
}

_VERDICT_STYLE = {
    Verdict.PASS: "green",
    Verdict.SUPPORTED: "green",
    Verdict.INCONCLUSIVE: "yellow",
    Verdict.FAIL: "red",
    Verdict.REFUTED: "red",
}


def print_report(report: DiagnosticReport) -> None:
    """Display the checks of a report as a table."""
    table = Table(
        title=report.name,
        show_header=True,
        header_style="bold",
        show_lines=False,
    )
    table.add_column("Check", style="white", overflow="fold")
    table.add_column("Verdict", no_wrap=True)
    table.add_column("Anchor", style="cyan", no_wrap=True)
    table.add_column("Detail", overflow="fold")

    section = None
    for check in report.checks:
        if check.section and check.section != section:
            if section is not None:
                table.add_section()
            section = check.section
        style = _VERDICT_STYLE[check.verdict]
        table.add_row(
            escape(check.name),
            f"[{style}]{check.verdict.value}[/{style}]",
            check.anchor,
            escape(check.detail),
        )

    console.print(table)
    style = _VERDICT_STYLE[report.verdict]
    console.print(
        f"[bold]Verdict: [{style}]{report.verdict.value}[/{style}] "
        f"({len(report.checks)} checks, {len(report.failures())} failing)[/bold]"
    )
    for note in report.notes:
        console.print(f"[dim]{escape(note)}[/dim]")


def _item_rows(report: DiagnosticReport) -> list[dict[str, Any]]:
    return [
        {"item": c.name, "verdict": c.verdict.value, "detail": c.detail} for c in report.checks
    ]


def csv_rows(command: str, report: DiagnosticReport) -> list[dict[str, Any]]:
    """Trace rows for a command's CSV file."""
    if command == "counterexample":
        return [
            row
            for rows in report.traces.values()
            for row in rows
            if "statistic" in row
        ]
    key = _TRACES.get(command)
    if key is None:
        return _item_rows(report)
    return report.traces.get(key, [])


# -- model files ---------------------------------------------------------------


def _require_model(config: RunConfig) -> str:
    if not config.model:
        raise ConfigError(f"{config.command} needs --model")
    return config.model


def _relation(config: RunConfig, settings: Settings) -> tuple[Any, Any]:
    """Relation from --model plus its nested graph (None when absent)."""
    data = load_json_config(_require_model(config), "relation")
    relation = relation_from_config(data, settings, config.seed)
    graph = graph_from_config(data["graph"]) if "graph" in data else None
    return relation, graph


# -- commands ------------------------------------------------------------------


def cmd_check_graphoid(config: RunConfig, settings: Settings) -> DiagnosticReport:
    relation, _ = _relation(config, settings)
    axioms = config.options.get("axiom") or [a.value for a in Axiom]
    report = DiagnosticReport(
        name=f"graphoid axioms on {relation.name}",
        anchor="graphoid.axioms",
        tolerance=settings.discrete_tol,
    )
    for label in axioms:
        result = check_axiom(
            relation,
            Axiom.parse(label),
            cap=settings.axiom_cap,
            sample=config.options.get("sample"),
            seed=config.seed,
            all_partitions=bool(config.options.get("all_partitions")),
        )
        report.checks.append(result.to_check())
    return report


def cmd_check_markov(config: RunConfig, settings: Settings) -> DiagnosticReport:
    relation, graph = _relation(config, settings)
    if graph is None:
        graph = pairwise_graph(relation)
        logger.info("no graph in %s; using the pairwise graph", config.model)
    properties = config.options.get("property") or [p.value for p in MarkovProperty]
    report = DiagnosticReport(name=f"markov properties on {relation.name}", anchor="markov")
    for label in properties:
        report.absorb(check_markov(relation, graph, label))
    return report


def cmd_audit_equivalence(config: RunConfig, settings: Settings) -> DiagnosticReport:
    if config.model:
        relation, graph = _relation(config, settings)
        return equivalence_audit(relation, graph or pairwise_graph(relation), settings)

    n = int(config.options.get("n") or 4)
    trials = int(config.options.get("trials") or 1)
    kind = config.options.get("pmf") or "random"
    if not 2 <= n <= settings.axiom_cap:
        raise ConfigError(f"--n must lie in 2..{settings.axiom_cap}, got {n}")
    if trials < 1:
        raise ConfigError(f"--trials must be positive, got {trials}")
    seeds = np.random.SeedSequence(config.seed).spawn(trials)

    def trial(k: int) -> DiagnosticReport:
        rng = np.random.default_rng(seeds[k])
        if kind == "edge-potential":
            edges = [
                (i, j)
                for i in range(1, n + 1)
                for j in range(i + 1, n + 1)
                if rng.random() < 0.5
            ]
            pmf = random_edge_potential_pmf(n, edges, rng)
            graph = explicit_graph(edges, range(1, n + 1))
        else:
            pmf = random_positive_pmf(n, rng)
            graph = None
        relation = relation_from_discrete(pmf, settings.discrete_tol)
        return equivalence_audit(relation, graph or pairwise_graph(relation), settings)

    report = DiagnosticReport(
        name=f"equivalence audit ({kind}, n={n})",
        anchor="equivalence",
        tolerance=settings.discrete_tol,
    )
    for k, audit in enumerate(ordered_map(trial, range(trials), settings)):
        broken = audit.failures()
        report.add(
            f"trial {k}",
            audit.verdict,
            detail=f"{len(audit.checks)} checks"
            if not broken
            else "; ".join(f"{c.name}: {c.detail}" for c in broken),
            witnesses=[w for c in broken for w in c.witnesses][:20],
        )
    return report


def _covariance(config: RunConfig) -> tuple[Any, dict[str, Any]]:
    data = load_json_config(_require_model(config), "covariance")
    return model_from_config(data), data


def cmd_gaussian_verify(config: RunConfig, settings: Settings) -> DiagnosticReport:
    model, data = _covariance(config)
    sizes = config.sizes or tuple(data.get("sizes", (10, 20, 40)))
    envelope = DecayEnvelope.from_config(data["envelope"]) if "envelope" in data else None
    eps = data.get("eps", 0.5)
    return verify_gaussian_conditions(
        model,
        sizes,
        envelope=envelope,
        K=int(data.get("K", 200)),
        eps=tuple(eps) if isinstance(eps, list) else (float(eps),),
        settings=settings,
    )


def cmd_gaussian_converge(config: RunConfig, settings: Settings) -> DiagnosticReport:
    model, _ = _covariance(config)
    a = config.options.get("a") or (1,)
    steps = int(config.options.get("steps") or (config.sizes[-1] if config.sizes else 30))
    b_order = [i for i in range(1, steps + len(a) + 1) if i not in a][:steps]
    target = float(config.options.get("target") or 1e-6)
    trace = conditional_convergence(model, a, b_order, steps, target, settings.condition_cap)

    report = DiagnosticReport(
        name=f"conditional convergence for {model.variant}",
        anchor="gaussian.conditional",
        tolerance=target,
    )
    settled = trace.first_below()
    report.add(
        "conditional pair settles",
        trace.verdict,
        detail=f"differences below {target:g} from step {settled}"
        if settled is not None
        else f"differences still above {target:g} after {steps} steps",
        first_below=settled,
    )
    floor = min(r["cond_var_min"] for r in trace.rows)
    report.add(
        "conditional variance stays positive",
        floor > settings.gaussian_tol,
        detail=f"smallest conditional variance {floor:.6g}",
        cond_var_min=floor,
    )
    report.traces["convergence"] = trace.rows
    return report


def _ising(config: RunConfig) -> Any:
    return ising_from_config(load_json_config(_require_model(config), "ising"))


def cmd_ising_exact(config: RunConfig, settings: Settings) -> DiagnosticReport:
    model = _ising(config)
    n = int(config.options.get("n") or model.size or 8)
    pmf = ising_exact(model, n, settings)
    report = DiagnosticReport(
        name=f"ising exact on {model.name}", anchor="ising.exact", tolerance=1e-10
    )
    total = float(pmf.sum())
    report.add(
        "normalized",
        abs(total - 1) <= 1e-12 and float(pmf.min()) > 0,
        detail=f"{len(pmf)} states, total {total:.15g}, min {float(pmf.min()):.3g}",
    )
    mm = min(2, n)
    gap = marginal_consistency(model, mm, n, settings)
    report.add(
        "f_m identity",
        gap <= 1e-10,
        anchor="ising.identity",
        detail=f"first-{mm} marginal gap {gap:.3g}",
        max_gap=gap,
    )
    report.traces["ising_exact"] = [
        {
            "state": "".join(str((s >> k) & 1) for k in range(n)),
            "probability": float(p),
        }
        for s, p in enumerate(pmf)
    ]
    return report


def cmd_ising_converge(config: RunConfig, settings: Settings) -> DiagnosticReport:
    model = _ising(config)
    mm = int(config.options.get("m") or 2)
    n_max = int(config.options.get("nmax") or 12)
    return ising_convergence_report(model, mm, n_max, settings)


def cmd_chain_dcp(config: RunConfig, settings: Settings) -> DiagnosticReport:
    rng = np.random.default_rng(config.seed)
    data = load_json_config(config.model, "chain") if config.model else {}
    n = int(config.options.get("n") or data.get("length", 12))
    spec = chain_from_config(data) if data else random_chain_spec(rng, n)
    trials = int(config.options.get("trials") or 50)
    return chain_dcp_report(spec, n, trials, rng, settings)


def cmd_counterexample(config: RunConfig, settings: Settings) -> DiagnosticReport:
    example = config.options["example"]
    options = config.options
    if example == "parity":
        data = load_json_config(config.model, "parity") if config.model else {}
        spec = parity_from_config(data)
        if options.get("M") is not None:
            spec = spec.truncated(options["M"])
        return parity_verdicts(spec, settings)

    data = load_json_config(config.model, "theta_shift") if config.model else {}
    data = {**data, "base": "ma" if example == "ma-shift" else "iid"}
    for key in ("weight", "alpha", "n"):
        if options.get(key) is not None:
            data[key] = options[key]
    spec = theta_shift_from_config(data)
    if example == "ma-shift":
        return ma_shift_verdicts(spec, settings)
    return theta_shift_verdicts(spec, settings)


def report_merge(paths: Sequence[str]) -> DiagnosticReport:
    """Merge report files; the verdict is the worst constituent."""
    if not paths:
        raise ConfigError("merge-reports needs at least one report")
    return merge_reports([read_report(p) for p in paths])


def cmd_merge_reports(config: RunConfig, settings: Settings) -> DiagnosticReport:
    return report_merge(config.options.get("paths") or [])


COMMANDS: dict[str, Callable[[RunConfig, Settings], DiagnosticReport]] = {
    "check-graphoid": cmd_check_graphoid,
    "check-markov": cmd_check_markov,
    "audit-equivalence": cmd_audit_equivalence,
    "gaussian-verify": cmd_gaussian_verify,
    "gaussian-converge": cmd_gaussian_converge,
    "ising-exact": cmd_ising_exact,
    "ising-converge": cmd_ising_converge,
    "chain-dcp": cmd_chain_dcp,
    "counterexample": cmd_counterexample,
    "merge-reports": cmd_merge_reports,
}


def run(config: RunConfig) -> int:
    """Execute one command and write its artifacts; returns the exit status."""
    started = time.perf_counter()
    settings = config.settings()
    handler = COMMANDS.get(config.command)
    if handler is None:
        raise ConfigError(f"unknown command {config.command!r}")

    # Step 1: run the verifier
    console.print(f"[bold]Running {config.command}...[/bold]")
    report = handler(config, settings)
    if config.command != "merge-reports":
        report.seed = config.seed

    # Step 2: display the checks
    console.print()
    print_report(report)

    # Step 3: machine-readable artifacts
    if config.out:
        write_report(report, config.out, started)
        console.print(f"Report written to {escape(config.out)}")
    if config.csv:
        write_csv(config.csv, CSV_COLUMNS[config.command], csv_rows(config.command, report))
        console.print(f"Trace written to {escape(config.csv)}")

    return report.verdict.exit_code


# -- argument parsing ----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _sizes(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be comma-separated integers, got {text!r}")
    if not sizes or min(sizes) < 1:
        raise argparse.ArgumentTypeError(f"sizes must be positive integers, got {text!r}")
    return sizes


def _indices(text: str) -> tuple[int, ...]:
    return _sizes(text)


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    """Parse command line arguments."""
    common = _Parser(add_help=False)
    common.add_argument("--model", help="JSON model file")
    common.add_argument("--tol", type=float, help="override both CI tolerances")
    common.add_argument("--sizes", type=_sizes, default=(), help="comma-separated sizes, e.g. 9,25,49")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--out", help="write the JSON report here")
    common.add_argument("--csv", help="write the command's trace as CSV here")
    common.add_argument("--verbose", action="store_true", default=False, help="debug logging on stderr")

    parser = _Parser(
        prog="markovia",
        description="Verify graphical Markov properties, Gaussian decay conditions and "
        "Ising convergence, and reproduce the classic counterexamples.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exit status: 0 pass, 2 failure, 3 inconclusive, 1 usage or config error.

Examples:
    %(prog)s audit-equivalence --pmf random --n 4 --trials 100 --seed 7
    %(prog)s gaussian-verify --model configs/lattice_v1.json --sizes 9,25,49
    %(prog)s ising-converge --model configs/chain_summable.json --m 2 --nmax 16 --csv f.csv
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("check-graphoid", parents=[common], help="check the graphoid axioms")
    p.add_argument("--axiom", action="append", choices=[a.value for a in Axiom], help="axiom label (repeatable)")
    p.add_argument("--sample", type=int, help="random instantiations above the exhaustive cap")
    p.add_argument("--all-partitions", action="store_true", default=False, help="check P5* over every set partition")

    p = sub.add_parser("check-markov", parents=[common], help="check P*, L* and G* against a graph")
    p.add_argument("--property", action="append", choices=[m.value for m in MarkovProperty], help="property (repeatable)")

    p = sub.add_parser("audit-equivalence", parents=[common], help="audit G* ⇒ L* ⇒ P* ⇒ G*")
    p.add_argument("--pmf", choices=["random", "edge-potential"], default="random", help="random pmf family")
    p.add_argument("--n", type=int, default=4, help="number of binary variables")
    p.add_argument("--trials", type=int, default=1, help="number of random pmfs")

    sub.add_parser("gaussian-verify", parents=[common], help="eigenvalue and g_n evidence")

    p = sub.add_parser("gaussian-converge", parents=[common], help="trace conditional Gaussian pairs")
    p.add_argument("--a", type=_indices, help="target indices, e.g. 1,2 (default 1)")
    p.add_argument("--steps", type=int, help="conditioning prefixes to trace (default 30)")
    p.add_argument("--target", type=float, help="Cauchy tolerance (default 1e-6)")

    p = sub.add_parser("ising-exact", parents=[common], help="exact Ising table by enumeration")
    p.add_argument("--n", type=int, help="number of nodes kept")

    p = sub.add_parser("ising-converge", parents=[common], help="f_m(v, n) convergence diagnostics")
    p.add_argument("--m", type=int, default=2, help="prefix length")
    p.add_argument("--nmax", type=int, default=12, help="largest truncation")

    p = sub.add_parser("chain-dcp", parents=[common], help="decorrelation of a two-state chain")
    p.add_argument("--n", type=int, help="coordinates in the truncation (default 12)")
    p.add_argument("--trials", type=int, default=50, help="random draws")

    p = sub.add_parser("counterexample", parents=[common], help="reproduce a counterexample")
    p.add_argument("example", choices=["parity", "theta-shift", "ma-shift"])
    p.add_argument("--M", type=int, help="parity truncation")
    p.add_argument("--weight", type=float, help="mixture weight P(θ = 1)")
    p.add_argument("--alpha", type=float, help="MA coefficient")
    p.add_argument("--n", type=int, help="mixture truncation")

    p = sub.add_parser("merge-reports", parents=[common], help="merge JSON reports")
    p.add_argument("paths", nargs="+", help="report files")

    return parser.parse_args(argv)


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point for markovia."""
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1

    configure_logging(args.verbose)
    try:
        return run(RunConfig.from_namespace(args))
    except MarkoviaError as e:
        console.print(f"[red]Error: {escape(str(e))}[/red]")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
