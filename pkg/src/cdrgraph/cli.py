"""Pipeline orchestration and the command-line interface.

Subcommands: synth, ingest, build, stats, overlap, jaccard, census,
reciprocity, all. Analysis subcommands accept either raw CDRs (--cdrs) or a
previously exported graph snapshot (--graph); running `ingest` and then an
analysis on its snapshot produces the same reports as the one-shot `all`.

Exit codes: 0 success, 1 usage or configuration error, 2 data error (parse
errors past the configured threshold, malformed snapshot, I/O failure while
processing).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .connectivity import component_stats
from .graph import build_multigraph, read_edge_csv, write_edge_csv
from .ingest import FilterConfig, IngestStats, ParseError, ingest
from .overlap import (
    CENSUS_BASES,
    DIRECTIONS,
    jaccard_distribution,
    link_label_census,
    node_set_overlap,
)
from .reciprocity import reciprocity_report
from .reports import (
    ReportSet,
    census_payload,
    ingest_payload,
    inventory_payload,
    jaccard_summary_payload,
    overlap_payload,
    reciprocity_payload,
    stats_payload,
    write_histogram_csv,
    write_jaccard_csv,
    write_json,
)
from .synth import SynthConfig, generate_cdrs, write_cdr_csv

JACCARD_MEASURES = ("phi_cs", "phi_sc", "coefficient")


class ConfigError(Exception):
    """Invalid configuration or usage; maps to exit code 1."""


class DataError(Exception):
    """Input data failed validation past tolerance; maps to exit code 2."""


@dataclass
class RunConfig:
    """Everything one pipeline run needs.

    Exactly one of cdr_path / graph_path must be set; both are resolved and
    checked for existence at validation time.
    """

    cdr_path: Path | None = None
    graph_path: Path | None = None
    out_dir: Path = Path("reports")
    header: bool = False
    filter: FilterConfig = field(default_factory=FilterConfig)
    max_parse_error_fraction: float = 0.0
    jaccard_directions: tuple[str, ...] = ("out", "in")
    census_basis: str = "directed_pairs"
    run_stats: bool = True
    run_overlap: bool = True
    run_jaccard: bool = True
    run_census: bool = True
    run_reciprocity: bool = True

    def validate(self) -> None:
        if (self.cdr_path is None) == (self.graph_path is None):
            raise ConfigError("exactly one of --cdrs and --graph must be given")
        for path in (self.cdr_path, self.graph_path):
            if path is not None and not Path(path).is_file():
                raise ConfigError(f"input file not found: {path}")
        if not 0.0 <= self.max_parse_error_fraction <= 1.0:
            raise ConfigError("max_parse_error_fraction must lie in [0, 1]")
        for direction in self.jaccard_directions:
            if direction not in DIRECTIONS:
                raise ConfigError(f"unknown jaccard direction {direction!r}")
        if self.census_basis not in CENSUS_BASES:
            raise ConfigError(f"unknown census basis {self.census_basis!r}")

    def config_echo(self) -> dict:
        # Semantic settings only: no paths, so reports stay byte-stable
        # across working directories.
        return {
            "min_call_total_duration": self.filter.min_call_total_duration,
            "min_interactions": self.filter.min_interactions,
            "drop_zero_duration_calls": self.filter.drop_zero_duration_calls,
            "directed_significance": self.filter.directed_significance,
            "allowed_nodes_count": (
                len(self.filter.allowed_nodes)
                if self.filter.allowed_nodes is not None
                else None
            ),
            "max_parse_error_fraction": self.max_parse_error_fraction,
            "header": self.header,
            "jaccard_directions": list(self.jaccard_directions),
            "census_basis": self.census_basis,
        }


def run_pipeline(cfg: RunConfig) -> ReportSet:
    """Ingest (or load), build, analyze, and write all requested reports.

    Identical inputs and config produce byte-identical artifacts. Every file
    written is listed, with its sha256, in the final inventory.json.
    """
    cfg.validate()
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    echo = cfg.config_echo()
    result = ReportSet(out_dir=out_dir)

    def emit(name: str) -> Path:
        result.artifacts.append(name)
        return out_dir / name

    if cfg.cdr_path is not None:
        stats = IngestStats()
        errors = "skip" if cfg.max_parse_error_fraction > 0 else "raise"
        try:
            filtered = ingest(
                cfg.cdr_path, cfg.filter, header=cfg.header, errors=errors, stats=stats
            )
        except ParseError as exc:
            raise DataError(str(exc)) from exc
        if stats.parse_errors > cfg.max_parse_error_fraction * stats.records_read:
            raise DataError(
                f"{stats.parse_errors} parse errors in {stats.records_read} records "
                f"exceeds the allowed fraction {cfg.max_parse_error_fraction}"
            )
        g = build_multigraph(filtered)
        result.ingest_stats = stats
        write_json(emit("ingest_summary.json"), ingest_payload(stats, echo))
    else:
        try:
            g = read_edge_csv(cfg.graph_path)
        except ValueError as exc:
            raise DataError(f"bad graph snapshot: {exc}") from exc

    write_edge_csv(g, emit("graph.csv"))

    if cfg.run_stats:
        result.table_stats = component_stats(g)
        write_json(emit("stats.json"), stats_payload(result.table_stats, echo))
    if cfg.run_overlap:
        result.overlap = node_set_overlap(g)
        write_json(emit("overlap.json"), overlap_payload(result.overlap, echo))
    if cfg.run_jaccard:
        for direction in cfg.jaccard_directions:
            dist = jaccard_distribution(g, direction)
            result.jaccard[direction] = dist
            write_jaccard_csv(emit(f"jaccard_{direction}.csv"), dist)
            for measure in JACCARD_MEASURES:
                write_histogram_csv(
                    emit(f"jaccard_{direction}_hist_{measure}.csv"), dist, measure
                )
        write_json(
            emit("jaccard_summary.json"),
            jaccard_summary_payload(result.jaccard, echo),
        )
    if cfg.run_census:
        result.census = link_label_census(g, cfg.census_basis)
        write_json(emit("census.json"), census_payload(result.census, echo))
    if cfg.run_reciprocity:
        result.reciprocity = reciprocity_report(g)
        write_json(emit("reciprocity.json"), reciprocity_payload(result.reciprocity, echo))

    write_json(out_dir / "inventory.json", inventory_payload(out_dir, result.artifacts))
    result.artifacts.append("inventory.json")
    return result


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


class _UsageError(Exception):
    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the exit-code contract wants 1.
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


# Config-file keys recognized for pipeline subcommands; flags override file.
_CONFIG_KEYS = {
    "cdrs": str,
    "graph": str,
    "out_dir": str,
    "header": bool,
    "min_call_duration": int,
    "min_interactions": int,
    "drop_zero_duration_calls": bool,
    "directed_significance": bool,
    "allowed_nodes_file": str,
    "max_parse_error_fraction": float,
    "direction": str,
    "basis": str,
}

_TRUE_TOKENS = {"true", "yes", "1", "on"}
_FALSE_TOKENS = {"false", "no", "0", "off"}


def _load_config_file(path: Path) -> dict:
    """Parse `key = value` lines; # starts a comment, blank lines ignored."""
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    values: dict[str, object] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, _, raw_value = line.partition("=")
        key = key.strip()
        raw_value = raw_value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        kind = _CONFIG_KEYS[key]
        if kind is bool:
            token = raw_value.lower()
            if token in _TRUE_TOKENS:
                values[key] = True
            elif token in _FALSE_TOKENS:
                values[key] = False
            else:
                raise ConfigError(f"{path}:{lineno}: expected a boolean, got {raw_value!r}")
        else:
            try:
                values[key] = kind(raw_value)
            except ValueError:
                raise ConfigError(
                    f"{path}:{lineno}: bad value {raw_value!r} for {key}"
                ) from None
    return values


def _add_pipeline_args(parser: argparse.ArgumentParser, *, jaccard: bool, census: bool) -> None:
    parser.add_argument("--cdrs", help="input CDR CSV (sender,receiver,start_time,duration,channel)")
    parser.add_argument("--graph", help="input graph snapshot CSV from a previous run")
    parser.add_argument("--out-dir", help="directory for reports (default: reports)")
    parser.add_argument("--config", help="key = value config file; flags override it")
    parser.add_argument("--header", action="store_true", default=None,
                        help="skip one header line in the CDR input")
    parser.add_argument("--min-call-duration", type=int, metavar="SECONDS",
                        help="strict lower bound on total call seconds per pair (default 60)")
    parser.add_argument("--min-interactions", type=int, metavar="N",
                        help="strict lower bound on interactions per pair (default 3)")
    parser.add_argument("--keep-zero-duration-calls", action="store_true", default=None,
                        help="keep zero-duration call records instead of dropping them")
    parser.add_argument("--directed-significance", action="store_true", default=None,
                        help="evaluate significance per directed edge instead of per pair")
    parser.add_argument("--allowed-nodes-file", metavar="FILE",
                        help="restrict records to node ids listed one per line")
    parser.add_argument("--max-parse-error-fraction", type=float, metavar="F",
                        help="tolerated fraction of malformed lines (default 0)")
    if jaccard:
        parser.add_argument("--direction", metavar="LIST",
                            help="comma list of jaccard directions: out,in,all (default out,in)")
    if census:
        parser.add_argument("--basis", choices=("directed", "unordered"),
                            help="census basis (default directed)")


def _pick(args: argparse.Namespace, file_cfg: dict, arg_key: str, file_key: str, default):
    value = getattr(args, arg_key, None)
    if value is not None:
        return value
    if file_key in file_cfg:
        return file_cfg[file_key]
    return default


def _build_run_config(args: argparse.Namespace, toggles: dict[str, bool]) -> RunConfig:
    file_cfg = _load_config_file(Path(args.config)) if getattr(args, "config", None) else {}

    allowed_nodes = None
    allowed_file = _pick(args, file_cfg, "allowed_nodes_file", "allowed_nodes_file", None)
    if allowed_file:
        path = Path(allowed_file)
        if not path.is_file():
            raise ConfigError(f"allowed-nodes file not found: {path}")
        allowed_nodes = frozenset(
            line.strip() for line in path.read_text(encoding="utf-8").splitlines() if line.strip()
        )

    if getattr(args, "keep_zero_duration_calls", None):
        drop_zero = False
    elif "drop_zero_duration_calls" in file_cfg:
        drop_zero = bool(file_cfg["drop_zero_duration_calls"])
    else:
        drop_zero = True

    try:
        filter_cfg = FilterConfig(
            min_call_total_duration=_pick(args, file_cfg, "min_call_duration", "min_call_duration", 60),
            min_interactions=_pick(args, file_cfg, "min_interactions", "min_interactions", 3),
            drop_zero_duration_calls=drop_zero,
            directed_significance=bool(
                _pick(args, file_cfg, "directed_significance", "directed_significance", False)
            ),
            allowed_nodes=allowed_nodes,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    directions_raw = _pick(args, file_cfg, "direction", "direction", "out,in")
    directions = tuple(tok.strip() for tok in str(directions_raw).split(",") if tok.strip())

    basis_raw = _pick(args, file_cfg, "basis", "basis", "directed")
    basis = {"directed": "directed_pairs", "unordered": "unordered_pairs"}.get(str(basis_raw))
    if basis is None:
        raise ConfigError(f"unknown census basis {basis_raw!r}")

    cdr = _pick(args, file_cfg, "cdrs", "cdrs", None)
    graph = _pick(args, file_cfg, "graph", "graph", None)
    out_dir = _pick(args, file_cfg, "out_dir", "out_dir", "reports")

    return RunConfig(
        cdr_path=Path(cdr) if cdr else None,
        graph_path=Path(graph) if graph else None,
        out_dir=Path(out_dir),
        header=bool(_pick(args, file_cfg, "header", "header", False)),
        filter=filter_cfg,
        max_parse_error_fraction=float(
            _pick(args, file_cfg, "max_parse_error_fraction", "max_parse_error_fraction", 0.0)
        ),
        jaccard_directions=directions,
        census_basis=basis,
        **toggles,
    )


_SUBCOMMAND_TOGGLES = {
    "ingest": dict(run_stats=False, run_overlap=False, run_jaccard=False,
                   run_census=False, run_reciprocity=False),
    "build": dict(run_stats=False, run_overlap=False, run_jaccard=False,
                  run_census=False, run_reciprocity=False),
    "stats": dict(run_stats=True, run_overlap=False, run_jaccard=False,
                  run_census=False, run_reciprocity=False),
    "overlap": dict(run_stats=False, run_overlap=True, run_jaccard=False,
                    run_census=False, run_reciprocity=False),
    "jaccard": dict(run_stats=False, run_overlap=False, run_jaccard=True,
                    run_census=False, run_reciprocity=False),
    "census": dict(run_stats=False, run_overlap=False, run_jaccard=False,
                   run_census=True, run_reciprocity=False),
    "reciprocity": dict(run_stats=False, run_overlap=False, run_jaccard=False,
                        run_census=False, run_reciprocity=True),
    "all": dict(run_stats=True, run_overlap=True, run_jaccard=True,
                run_census=True, run_reciprocity=True),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cdrgraph",
                     description="Two-channel CDR multigraph analysis")
    parser.add_argument("--version", action="version", version=f"cdrgraph {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")

    synth = sub.add_parser("synth", help="generate a seeded synthetic CDR file")
    synth.add_argument("--users", type=int, default=1000)
    synth.add_argument("--mean-degree", type=float, default=4.0)
    synth.add_argument("--p-both", type=float, default=0.3)
    synth.add_argument("--p-call-only", type=float, default=0.5)
    synth.add_argument("--p-sms-only", type=float, default=0.2)
    synth.add_argument("--p-reciprocal", type=float, default=0.5)
    synth.add_argument("--activity", type=float, default=5.0)
    synth.add_argument("--duration-mean", type=float, default=90.0)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--no-guarantee-significance", action="store_true",
                       help="do not force planted pairs past the significance filter")
    synth.add_argument("--out", required=True, help="CDR CSV output path")
    synth.add_argument("--truth", help="ground-truth JSON sidecar (default: OUT.truth.json)")

    for name, help_text in (
        ("ingest", "parse, clean, filter CDRs; write snapshot + summary"),
        ("build", "load CDRs or a snapshot; write the canonical snapshot"),
        ("stats", "component statistics block"),
        ("overlap", "node-set overlap report"),
        ("jaccard", "per-node layer Jaccard distributions"),
        ("census", "link-label census"),
        ("reciprocity", "reciprocity and dyad census report"),
        ("all", "full pipeline: every report plus inventory"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_pipeline_args(p, jaccard=name in ("jaccard", "all"),
                           census=name in ("census", "all"))
    return parser


def _cmd_synth(args: argparse.Namespace) -> int:
    try:
        cfg = SynthConfig(
            n_users=args.users,
            mean_degree=args.mean_degree,
            p_both=args.p_both,
            p_call_only=args.p_call_only,
            p_sms_only=args.p_sms_only,
            p_reciprocal=args.p_reciprocal,
            activity=args.activity,
            duration_mean=args.duration_mean,
            seed=args.seed,
            guarantee_significance=not args.no_guarantee_significance,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    records, truth = generate_cdrs(cfg)
    written = write_cdr_csv(records, out)
    truth_path = Path(args.truth) if args.truth else out.with_suffix(out.suffix + ".truth.json")
    write_json(truth_path, {"tool_version": __version__, "seed": cfg.seed, **truth.to_dict()})
    print(f"wrote {written} records to {out} (truth: {truth_path})")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help()
            return 0
        if args.command == "synth":
            return _cmd_synth(args)
        cfg = _build_run_config(args, _SUBCOMMAND_TOGGLES[args.command])
        result = run_pipeline(cfg)
        print(f"wrote {len(result.artifacts)} artifacts to {result.out_dir}")
        return 0
    except _UsageError as exc:
        print(exc.message, file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"cdrgraph: config error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"cdrgraph: data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cdrgraph: i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
