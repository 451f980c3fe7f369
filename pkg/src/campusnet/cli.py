"""Command-line interface.

Focused subcommands (``ingest`` through ``tetra``) print TSV tables to
stdout for one institution; ``analyze`` writes the full per-institution
bundle and ``batch`` processes a directory of institutions and writes
the cross-institution tables and figures. Global flags may also be set
in a ``key=value`` config file passed with ``--config``; explicit flags
win over the file.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .community import detect_all, modularity
from .errors import CampusNetError
from .graph import extract_views, load_network
from .pipeline import (PipelineConfig, analyze_institution, batch,
                       institution_name, load_config_file,
                       _assortativity_stage, _compare_stage,
                       _regression_stage, _tetra_stage)

log = logging.getLogger("campusnet")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="campusnet",
        description="Attributed friendship-network analysis pipeline.")
    parser.add_argument("--config", metavar="FILE",
                        help="key=value settings file; flags override it")
    parser.add_argument("--seed", type=int, default=None,
                        help="random seed for seeded detectors (default 42)")
    parser.add_argument("--workers", type=int, default=None,
                        help="parallel institutions in batch mode (default 1)")
    parser.add_argument("--out-dir", default=None,
                        help="output directory (default runs)")
    parser.add_argument("--exclude-missing", action="store_const", const=True,
                        default=None,
                        help="drop Missing codes instead of treating them "
                             "as a category")
    parser.add_argument("--dyad-guard", type=int, default=None, metavar="N",
                        help="skip dyad models on views above N nodes "
                             "(default 10000; 0 lifts the guard)")
    parser.add_argument("--zoom-year", action="store_const", const=True,
                        default=None,
                        help="add a zoomed year-vertex panel to figures")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="log progress to stderr")

    sub = parser.add_subparsers(dest="command", required=True)

    def institution_command(name, help_text, func):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("node_file", help="<institution>_nodes.tsv")
        p.add_argument("edge_file", help="<institution>_edges.tsv")
        p.set_defaults(func=func)
        return p

    institution_command("ingest", "parse and validate one institution",
                        cmd_ingest)
    institution_command("views", "extract the four standard views", cmd_views)
    institution_command("assort", "attribute assortativity per view",
                        cmd_assort)
    institution_command("communities", "run the six community detectors",
                        cmd_communities)
    institution_command("compare", "score partitions against attributes",
                        cmd_compare)
    institution_command("regress", "fit the dyad models", cmd_regress)
    institution_command("tetra", "tetrahedral summaries per view", cmd_tetra)
    institution_command("analyze", "full pipeline, write the result bundle",
                        cmd_analyze)

    p = sub.add_parser("batch", help="analyze every institution in a directory")
    p.add_argument("input_dir", help="directory of *_nodes.tsv/*_edges.tsv")
    p.set_defaults(func=cmd_batch)
    return parser


def _build_config(args):
    settings = {}
    if args.config:
        settings.update(load_config_file(args.config))
    for key, attr in (("seed", "seed"), ("workers", "workers"),
                      ("out_dir", "out_dir"),
                      ("exclude_missing", "exclude_missing"),
                      ("dyad_guard", "dyad_guard"),
                      ("zoom_year", "zoom_year")):
        value = getattr(args, attr)
        if value is not None:
            settings[key] = value
    return PipelineConfig(**settings)


def _print_tsv(header, rows):
    sys.stdout.write("\t".join(header) + "\n")
    for row in rows:
        sys.stdout.write("\t".join(str(c) for c in row) + "\n")


def _load(args):
    name = institution_name(args.node_file)
    log.info("loading %s", name)
    net = load_network(args.node_file, args.edge_file)
    return name, net


def cmd_ingest(args, cfg):
    name, net = _load(args)
    _print_tsv(("institution", "nodes", "edges"), [(name, net.n, net.m)])
    return 0


def cmd_views(args, cfg):
    name, net = _load(args)
    views = extract_views(net)
    _print_tsv(("institution", "view", "nodes", "edges"),
               [(name, kind, v.n, v.m) for kind, v in views.items()])
    return 0


def cmd_assort(args, cfg):
    name, net = _load(args)
    views = extract_views(net)
    rows = _assortativity_stage(name, views, cfg)
    _print_tsv(("institution", "view", "attribute", "r"), rows)
    return 0


def _detect(views, cfg):
    partitions = {}
    for kind, view in views.items():
        if view.is_empty:
            partitions[kind] = []
        else:
            log.info("detecting communities on %s (n=%d)", kind, view.n)
            partitions[kind] = detect_all(view, seed=cfg.seed)
    return partitions


def cmd_communities(args, cfg):
    name, net = _load(args)
    views = extract_views(net)
    partitions = _detect(views, cfg)
    rows = []
    for kind, view in views.items():
        for p in partitions[kind]:
            rows.append((name, kind, p.method, p.n_communities,
                         "%.10g" % modularity(view, p).q))
    _print_tsv(("institution", "view", "method", "communities", "q"), rows)
    return 0


def cmd_compare(args, cfg):
    name, net = _load(args)
    views = extract_views(net)
    partitions = _detect(views, cfg)
    rows, max_rows, _ = _compare_stage(name, views, partitions, cfg)
    _print_tsv(("institution", "view", "method", "attribute", "rand", "z"),
               rows)
    for row in max_rows:
        log.info("max z: %s", "\t".join(str(c) for c in row))
    return 0


def cmd_regress(args, cfg):
    name, net = _load(args)
    views = extract_views(net)
    fits, report = _regression_stage(name, views, cfg, manifest=None)
    rows = []
    for institution, kind, fit in fits:
        for i, term in enumerate(fit.feature_names):
            rows.append((institution, kind, fit.estimator, term,
                         "%.10g" % fit.theta[i], "%.10g" % fit.std_errors[i]))
    _print_tsv(("institution", "view", "estimator", "term", "estimate", "se"),
               rows)
    for kind, entry in report.items():
        status = entry.get("status")
        if status in ("skipped", "empty"):
            print("note: %s view %s (%s)" % (kind, status,
                                             entry.get("reason", "no edges")),
                  file=sys.stderr)
    return 0


def cmd_tetra(args, cfg):
    name, net = _load(args)
    views = extract_views(net)
    partitions = _detect(views, cfg)
    _, _, comparisons = _compare_stage(name, views, partitions, cfg)
    _, summary_rows, _ = _tetra_stage(name, views, comparisons)
    _print_tsv(("institution", "view", "center_x", "center_y", "center_z",
                "proj_u", "proj_v", "max_distance", "size_bin",
                "year_distance"), summary_rows)
    return 0


def cmd_analyze(args, cfg):
    result = analyze_institution(args.node_file, args.edge_file, cfg)
    _print_tsv(("institution", "view", "nodes", "edges"), result.views_meta)
    print("bundle: %s" % result.out_dir, file=sys.stderr)
    return 0


def cmd_batch(args, cfg):
    result = batch(args.input_dir, cfg)
    rows = [(r.name, "ok") for r in result.results]
    rows += [(name, "error: %s" % msg) for name, msg in result.failures]
    rows.sort()
    _print_tsv(("institution", "status"), rows)
    print("bundle: %s" % result.out_dir, file=sys.stderr)
    return 1 if result.failures else 0


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s")
    try:
        cfg = _build_config(args)
        return args.func(args, cfg)
    except CampusNetError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
