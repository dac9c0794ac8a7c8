"""
Main entry point for the crypto API misuse analyzer.

    python main.py analyze app.tir [--rules 1,4-7] [--format json]
    python main.py analyze --manifest project.manifest --jobs 4
    python main.py bench data/bench --rules 1,2,3,11,14,16
"""

import argparse
import logging
import sys

import config
from core.backward import SlicingCriterion, format_slice
from core.callgraph import call_sites_of, dump_call_graph
from core.parser import TirError, parse_signature
from core.project import ManifestError
from core.report import emit_report
from core.runner import ConfigError, RunConfig, load_root, plan_roots, run
from core.session import AnalysisSession
from rules.registry import Severity, describe_rules, parse_rule_list

logger = logging.getLogger(__name__)


class ExitCode:
    CLEAN = 0
    FINDINGS = 1
    ERROR = 2


def _write(data: bytes) -> None:
    sys.stdout.buffer.write(data)
    sys.stdout.flush()


def _build_config(args) -> RunConfig:
    return RunConfig(
        files=list(args.files),
        manifest=args.manifest,
        rules=parse_rule_list(args.rules) if args.rules else list(range(1, 17)),
        depth=args.depth,
        refine=not args.no_refine,
        budget=args.budget,
        output_format=args.format,
        fail_on=Severity(args.fail_on),
        jobs=args.jobs,
        check_client_trusted=args.check_client_trusted or config.ANALYZER_CHECK_CLIENT_TRUSTED,
        include_tests=args.include_tests,
        refine_breakdown=args.refine_breakdown,
        structured_logs=args.log_json or config.ANALYZER_STRUCTURED_LOGS,
    )


def _dump(cfg: RunConfig, args) -> None:
    for root in plan_roots(cfg):
        program = load_root(cfg, root)
        session = AnalysisSession(program, root=root, depth=cfg.depth)
        if root is not None:
            _write(f"# root {root}\n".encode("utf-8"))
        if args.dump_callgraph:
            _write(dump_call_graph(session.graph).encode("utf-8"))
        if args.dump_slice:
            text, _, param = args.dump_slice.rpartition("#")
            if not text or not param.isdigit():
                raise ConfigError(f"--dump-slice expects <signature>#<paramIndex>, got {args.dump_slice!r}")
            api = parse_signature(text)
            for site in call_sites_of(session.graph, api):
                _write(f"# {site}\n".encode("utf-8"))
                results = session.slicer.inter(SlicingCriterion.inter_param(site, [int(param)]))
                _write(format_slice(results).encode("utf-8"))


def cmd_analyze(args) -> int:
    if args.list_rules:
        _write(describe_rules().encode("utf-8"))
        return ExitCode.CLEAN
    cfg = _build_config(args)
    if args.dump_callgraph or args.dump_slice:
        _dump(cfg, args)
        return ExitCode.CLEAN
    report = run(cfg)
    _write(emit_report(report, cfg.output_format))
    return ExitCode.FINDINGS if report.exit_code() else ExitCode.CLEAN


def cmd_bench(args) -> int:
    from bench.report import print_score_report, score_report_json, write_markdown_report
    from bench.runner import run_bench

    cfg = RunConfig(
        files=[],
        rules=parse_rule_list(args.rules) if args.rules else list(range(1, 17)),
        depth=args.depth,
        refine=not args.no_refine,
        output_format=args.format,
    )
    score = run_bench(args.corpus, cfg)
    if args.format == "json":
        _write(score_report_json(score).encode("utf-8"))
    else:
        print_score_report(score)
    if args.markdown:
        write_markdown_report(score, args.markdown)
    return ExitCode.CLEAN


def parse_args(argv=None):
    """Parse command-line arguments."""
    parser = argparse.ArgumentParser(
        description="Static detector for cryptographic API misuse in TIR programs",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exit codes:
  0  no findings at or above --fail-on
  1  findings at or above --fail-on
  2  parse, manifest or configuration error
        """,
    )
    parser.add_argument("--log-level", default=config.LOG_LEVEL, help="Logging level (default: %(default)s)")
    parser.add_argument("--log-json", action="store_true", help="Emit structured JSON-lines events on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="Analyze TIR files or a subproject manifest")
    analyze.add_argument("files", nargs="*", help=".tir files (ignored with --manifest)")
    analyze.add_argument("--manifest", help="Subproject manifest file")
    analyze.add_argument("--rules", help="Rule subset, e.g. 1,4-7,16")
    analyze.add_argument("--depth", type=int, default=config.ANALYZER_DEPTH, help="Orthogonal exploration depth")
    analyze.add_argument("--no-refine", action="store_true", help="Report candidates without refinements")
    analyze.add_argument("--refine-breakdown", action="store_true", help="Show per-refinement removal counts")
    analyze.add_argument("--jobs", type=int, default=config.ANALYZER_JOBS, help="Root subprojects analyzed in parallel")
    analyze.add_argument("--budget", type=float, help="Time budget per root subproject, in seconds")
    analyze.add_argument("--format", choices=["text", "json"], default="text")
    analyze.add_argument("--fail-on", choices=["H", "M", "L"], default="L",
                         help="Lowest severity that makes the exit code 1")
    analyze.add_argument("--dump-callgraph", action="store_true", help="Print the call graph and exit")
    analyze.add_argument("--dump-slice", metavar="CRITERION", help="Print slices for <signature>#<paramIndex> and exit")
    analyze.add_argument("--list-rules", action="store_true", help="Print the rule registry and exit")
    analyze.add_argument("--check-client-trusted", action="store_true", help="Also check checkClientTrusted (rule 5)")
    analyze.add_argument("--include-tests", action="store_true", help="Analyze root subprojects marked test")
    analyze.set_defaults(handler=cmd_analyze)

    bench = sub.add_parser("bench", help="Score the analyzer on a benchmark corpus")
    bench.add_argument("corpus", help="Corpus directory (e.g. data/bench)")
    bench.add_argument("--rules", help="Rule subset, e.g. 1,2,3,11,14,16")
    bench.add_argument("--depth", type=int, default=config.ANALYZER_DEPTH)
    bench.add_argument("--no-refine", action="store_true")
    bench.add_argument("--format", choices=["text", "json"], default="text")
    bench.add_argument("--markdown", metavar="PATH", help="Also write a Markdown report")
    bench.set_defaults(handler=cmd_bench)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        format="[%(asctime)s] %(levelname)s %(name)s: %(message)s",
        datefmt="%H:%M:%S",
        stream=sys.stderr,
        force=True,
    )
    try:
        return args.handler(args)
    except (TirError, ManifestError, ConfigError, ValueError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return ExitCode.ERROR


if __name__ == "__main__":
    sys.exit(main())
