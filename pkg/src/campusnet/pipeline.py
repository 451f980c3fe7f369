"""End-to-end analysis runs: one institution or a directory of them.

`analyze_institution` loads one node/edge file pair, extracts the four
views, and runs every stage (assortativity, the six-detector community
battery, attribute scoring, tetrahedral summaries, dyad models), writing
a result bundle under the output directory. `batch` does this for every
``*_nodes.tsv`` / ``*_edges.tsv`` pair in a directory, then writes
cross-institution tables, the per-view SVG figures, and coefficient box
plots. Outputs are deterministic: rerunning with the same inputs, seed,
and configuration reproduces every TSV, JSON, and SVG byte for byte.
Wall-clock timings, which cannot be deterministic, go to a separate
``timings.log``.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .community import detect_all, modularity
from .compare import score_against_attributes
from .dyad import build_design, coefficient_summary, fit_ergm_mple, fit_logistic
from .errors import CampusNetError, DegenerateInputError
from .figures import render_tetra_figure
from .graph import SCORED_ATTRIBUTES, VIEW_KINDS, extract_views, load_network
from .mixing import assortativity, mixing_matrix
from .tetrahedron import project_year_view, summarize_runs, tetra_point

__all__ = ["PipelineConfig", "RunManifest", "InstitutionResult", "BatchResult",
           "analyze_institution", "batch", "load_config_file", "institution_name"]

_ASSORT_ATTRIBUTES = ("gender",) + SCORED_ATTRIBUTES

_NA = "NA"


@dataclass
class PipelineConfig:
    """Run settings shared by the CLI and the library entry points."""

    seed: int = 42
    workers: int = 1
    out_dir: str = "runs"
    exclude_missing: bool = False
    dyad_guard: int = 10_000
    zoom_year: bool = False

    def guard_limit(self):
        """Effective node guard; 0 disables it."""
        return None if self.dyad_guard == 0 else self.dyad_guard


_CONFIG_TYPES = {"seed": int, "workers": int, "out_dir": str,
                 "exclude_missing": bool, "dyad_guard": int,
                 "zoom_year": bool}
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def load_config_file(path):
    """Parse a ``key=value`` config file into a dict of settings.

    Blank lines and ``#`` comments are ignored. Keys match the
    `PipelineConfig` fields; unknown keys and unparsable values raise
    ValueError.
    """
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError("%s:%d: expected key=value" % (path, lineno))
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _CONFIG_TYPES:
                raise ValueError("%s:%d: unknown setting %r (known: %s)"
                                 % (path, lineno, key,
                                    ", ".join(sorted(_CONFIG_TYPES))))
            kind = _CONFIG_TYPES[key]
            if kind is bool:
                if value.lower() in _TRUE:
                    out[key] = True
                elif value.lower() in _FALSE:
                    out[key] = False
                else:
                    raise ValueError("%s:%d: expected a boolean for %s"
                                     % (path, lineno, key))
            elif kind is int:
                try:
                    out[key] = int(value)
                except ValueError:
                    raise ValueError("%s:%d: expected an integer for %s"
                                     % (path, lineno, key)) from None
            else:
                out[key] = value
    return out


@dataclass
class RunManifest:
    """Deterministic record of one institution run."""

    institution: str
    node_file: str
    edge_file: str
    sha256_nodes: str
    sha256_edges: str
    seed: int
    exclude_missing: bool
    dyad_guard: int
    package_version: str
    stages: list = field(default_factory=list)
    outputs: list = field(default_factory=list)

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


@dataclass
class InstitutionResult:
    """Everything one institution contributes to the batch outputs."""

    name: str
    out_dir: str
    views_meta: list
    assort_rows: list
    compare_rows: list
    compare_max_rows: list
    tetra_point_rows: list
    tetra_rows: list
    figure_points: dict
    fits: list
    manifest: RunManifest


@dataclass
class BatchResult:
    out_dir: str
    results: list
    failures: list
    files: list


def institution_name(node_path):
    """Institution name from a ``<name>_nodes.tsv`` path."""
    stem = Path(node_path).name
    for suffix in (".tsv", ".txt"):
        if stem.endswith(suffix):
            stem = stem[:-len(suffix)]
            break
    if stem.endswith("_nodes"):
        stem = stem[:-len("_nodes")]
    return stem


def _fmt(x):
    if x is None:
        return _NA
    x = float(x)
    if not math.isfinite(x):
        return _NA
    return "%.10g" % x


def _write_tsv(path, header, rows):
    lines = ["\t".join(header)]
    for row in rows:
        lines.append("\t".join(str(c) for c in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _sha256(path):
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    if isinstance(obj, np.ndarray):
        return _json_safe(obj.tolist())
    return obj


def _write_json(path, obj):
    Path(path).write_text(
        json.dumps(_json_safe(obj), indent=2, sort_keys=True) + "\n",
        encoding="utf-8")


class _StageClock:
    def __init__(self):
        self.entries = []

    def run(self, name, fn):
        start = time.perf_counter()
        result = fn()
        self.entries.append((name, time.perf_counter() - start))
        return result

    def log_text(self):
        lines = ["stage\tseconds"]
        lines += ["%s\t%.3f" % (name, secs) for name, secs in self.entries]
        return "\n".join(lines) + "\n"


def analyze_institution(node_path, edge_path, config=None):
    """Run the full per-institution pipeline and write its bundle.

    Returns
    -------
    InstitutionResult

    Raises
    ------
    GraphFormatError
        If the inputs do not parse; nothing is written in that case.
    """
    cfg = config or PipelineConfig()
    name = institution_name(node_path)
    clock = _StageClock()

    net = clock.run("ingest", lambda: load_network(node_path, edge_path))
    views = clock.run("views", lambda: extract_views(net))

    out_dir = Path(cfg.out_dir) / name
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "partitions").mkdir(exist_ok=True)

    manifest = RunManifest(
        institution=name,
        node_file=Path(node_path).name,
        edge_file=Path(edge_path).name,
        sha256_nodes=_sha256(node_path),
        sha256_edges=_sha256(edge_path),
        seed=cfg.seed,
        exclude_missing=cfg.exclude_missing,
        dyad_guard=cfg.dyad_guard,
        package_version=__version__,
    )
    manifest.stages.append({"stage": "ingest", "status": "ok",
                            "nodes": net.n, "edges": net.m})

    views_meta = [(name, kind, view.n, view.m) for kind, view in views.items()]
    empty_kinds = [kind for kind, view in views.items() if view.is_empty]
    manifest.stages.append({
        "stage": "views", "status": "ok",
        "empty": empty_kinds,
        "sizes": {kind: [view.n, view.m] for kind, view in views.items()}})

    assort_rows = clock.run(
        "assortativity", lambda: _assortativity_stage(name, views, cfg))
    manifest.stages.append({"stage": "assortativity", "status": "ok"})

    partitions = clock.run(
        "communities",
        lambda: _community_stage(name, views, cfg, out_dir, manifest))

    compare_rows, compare_max_rows, comparisons = clock.run(
        "compare", lambda: _compare_stage(name, views, partitions, cfg))
    manifest.stages.append({"stage": "compare", "status": "ok"})

    tetra_point_rows, tetra_rows, figure_points = clock.run(
        "tetra", lambda: _tetra_stage(name, views, comparisons))
    manifest.stages.append({"stage": "tetra", "status": "ok"})

    fits, regression_report = clock.run(
        "regression", lambda: _regression_stage(name, views, cfg, manifest))

    def write_outputs():
        _write_tsv(out_dir / "views.tsv",
                   ("institution", "view", "nodes", "edges"), views_meta)
        _write_tsv(out_dir / "assortativity.tsv",
                   ("institution", "view", "attribute", "r"), assort_rows)
        _write_tsv(out_dir / "compare.tsv",
                   ("institution", "view", "method", "attribute", "rand", "z"),
                   compare_rows)
        _write_tsv(out_dir / "compare_max.tsv",
                   ("institution", "view", "attribute", "max_z", "best_method"),
                   compare_max_rows)
        _write_tsv(out_dir / "tetra_points.tsv",
                   ("institution", "view", "method", "z_major", "z_residence",
                    "z_year", "z_high_school", "x", "y", "z", "zeroed"),
                   tetra_point_rows)
        _write_tsv(out_dir / "tetra.tsv",
                   ("institution", "view", "center_x", "center_y", "center_z",
                    "proj_u", "proj_v", "max_distance", "size_bin",
                    "year_distance"), tetra_rows)
        _write_json(out_dir / "communities.json", _communities_report(views, partitions))
        _write_json(out_dir / "regression.json", regression_report)
        _write_json(out_dir / "summary.json", {
            "institution": name,
            "views": {kind: {"nodes": view.n, "edges": view.m}
                      for kind, view in views.items()},
            "seed": cfg.seed,
            "exclude_missing": cfg.exclude_missing,
        })

    clock.run("outputs", write_outputs)
    manifest.outputs = sorted(
        str(p.relative_to(out_dir)) for p in out_dir.rglob("*") if p.is_file()
        if p.name not in ("manifest.json", "timings.log"))
    (out_dir / "manifest.json").write_text(manifest.to_json(), encoding="utf-8")
    (out_dir / "timings.log").write_text(clock.log_text(), encoding="utf-8")

    return InstitutionResult(
        name=name, out_dir=str(out_dir), views_meta=views_meta,
        assort_rows=assort_rows, compare_rows=compare_rows,
        compare_max_rows=compare_max_rows,
        tetra_point_rows=tetra_point_rows, tetra_rows=tetra_rows,
        figure_points=figure_points, fits=fits, manifest=manifest)


def _assortativity_stage(name, views, cfg):
    rows = []
    for kind, view in views.items():
        for attribute in _ASSORT_ATTRIBUTES:
            value = None
            if not view.is_empty:
                try:
                    mm = mixing_matrix(view, attribute,
                                       exclude_missing=cfg.exclude_missing)
                    value = assortativity(mm)
                except DegenerateInputError:
                    value = None
            rows.append((name, kind, attribute, _fmt(value)))
    return rows


def _community_stage(name, views, cfg, out_dir, manifest):
    partitions = {}
    detail = {}
    for kind, view in views.items():
        if view.is_empty:
            partitions[kind] = []
            detail[kind] = "empty"
            continue
        parts = detect_all(view, seed=cfg.seed)
        partitions[kind] = parts
        detail[kind] = {p.method: p.n_communities for p in parts}
        for p in parts:
            rows = sorted(zip(view.labels, p.assignment.tolist()))
            _write_tsv(out_dir / "partitions" / ("%s_%s.tsv" % (kind, p.method)),
                       ("id", "community"), rows)
    manifest.stages.append({"stage": "communities", "status": "ok",
                            "detail": detail})
    return partitions


def _communities_report(views, partitions):
    report = {}
    for kind, view in views.items():
        if view.is_empty:
            report[kind] = {"status": "empty"}
            continue
        entry = {}
        for p in partitions[kind]:
            entry[p.method] = {"q": modularity(view, p).q,
                               "communities": p.n_communities}
        report[kind] = entry
    return report


def _compare_stage(name, views, partitions, cfg):
    rows, max_rows, comparisons = [], [], {}
    for kind, view in views.items():
        if view.is_empty:
            for attribute in SCORED_ATTRIBUTES:
                max_rows.append((name, kind, attribute, _NA, _NA))
            comparisons[kind] = None
            continue
        comparison = score_against_attributes(
            view, partitions[kind], exclude_missing=cfg.exclude_missing)
        comparisons[kind] = comparison
        for quad in comparison.quads:
            for attribute in SCORED_ATTRIBUTES:
                rows.append((name, kind, quad.method, attribute,
                             _fmt(quad.rand[attribute]), _fmt(quad.z[attribute])))
        for attribute in SCORED_ATTRIBUTES:
            best = comparison.best_method.get(attribute, _NA)
            max_rows.append((name, kind, attribute,
                             _fmt(comparison.max_z[attribute]), best))
    return rows, max_rows, comparisons


def _tetra_stage(name, views, comparisons):
    point_rows, summary_rows = [], []
    figure_points = {}
    for kind, view in views.items():
        figure_points[kind] = None
        if view.is_empty or comparisons[kind] is None:
            summary_rows.append((name, kind) + (_NA,) * 8)
            continue
        points = []
        for quad in comparisons[kind].quads:
            try:
                point = tetra_point(quad)
            except DegenerateInputError:
                point = None
            points.append(point)
            if point is None:
                point_rows.append((name, kind, quad.method) + (_NA,) * 7 + ("all",))
            else:
                point_rows.append(
                    (name, kind, quad.method)
                    + tuple(_fmt(v) for v in point.z_norm)
                    + tuple(_fmt(v) for v in point.x)
                    + (",".join(point.zeroed) if point.zeroed else "-",))
        if any(p is None for p in points) or len(points) != 6:
            summary_rows.append((name, kind) + (_NA,) * 8)
            continue
        summary = summarize_runs(points)
        proj = project_year_view(summary.center)
        summary_rows.append(
            (name, kind)
            + tuple(_fmt(v) for v in summary.center)
            + tuple(_fmt(v) for v in proj)
            + (_fmt(summary.max_distance), str(summary.size_bin),
               _fmt(summary.year_distance)))
        figure_points[kind] = (float(proj[0]), float(proj[1]),
                               summary.size_bin, summary.year_distance)
    return point_rows, summary_rows, figure_points


def _regression_stage(name, views, cfg, manifest=None):
    limit = cfg.guard_limit()
    fits = []
    report = {}
    detail = {}
    for kind, view in views.items():
        if view.is_empty:
            report[kind] = {"status": "empty"}
            detail[kind] = "empty"
            continue
        if limit is not None and view.n > limit:
            report[kind] = {"status": "skipped",
                            "reason": "view has %d nodes, guard is %d"
                                      % (view.n, limit)}
            detail[kind] = "guarded"
            continue
        entry = {"status": "ok"}
        for key, with_triangle, fitter in (
                ("logistic", False, fit_logistic),
                ("ergm_mple", True, fit_ergm_mple)):
            try:
                design = build_design(view, with_triangle=with_triangle,
                                      max_nodes=None)
                fit = fitter(design, drop_nonidentifiable=True)
                entry[key] = fit.as_dict()
                fits.append((name, kind, fit))
            except CampusNetError as exc:
                entry[key] = {"error": str(exc)}
        report[kind] = entry
        detail[kind] = "ok"
    if manifest is not None:
        manifest.stages.append({"stage": "regression", "status": "ok",
                                "detail": detail})
    return fits, report


def _analyze_checked(args):
    node_path, edge_path, cfg = args
    name = institution_name(node_path)
    try:
        return name, analyze_institution(node_path, edge_path, cfg), None
    except Exception as exc:  # recorded per institution, batch continues
        return name, None, "%s: %s" % (type(exc).__name__, exc)


def batch(input_dir, config=None):
    """Analyze every institution in a directory and aggregate the results.

    Institutions are ``<name>_nodes.tsv`` plus ``<name>_edges.tsv`` pairs.
    Per-institution failures (parse errors, missing partner files) are
    recorded in the batch manifest and do not stop the rest. With
    ``config.workers > 1`` institutions run in parallel; outputs do not
    depend on scheduling.

    Returns
    -------
    BatchResult
    """
    cfg = config or PipelineConfig()
    input_dir = Path(input_dir)
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    tasks = []
    failures = []
    node_files = sorted(input_dir.glob("*_nodes.tsv"))
    for node_path in node_files:
        edge_path = node_path.with_name(
            node_path.name.replace("_nodes.tsv", "_edges.tsv"))
        if not edge_path.exists():
            failures.append((institution_name(node_path),
                             "missing edge file %s" % edge_path.name))
            continue
        tasks.append((str(node_path), str(edge_path), cfg))
    if not tasks and not failures:
        raise ValueError("no *_nodes.tsv files under %s" % input_dir)

    results = []
    if cfg.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(_analyze_checked, tasks))
    else:
        outcomes = [_analyze_checked(t) for t in tasks]
    for name, result, error in outcomes:
        if error is None:
            results.append(result)
        else:
            failures.append((name, error))
    results.sort(key=lambda r: r.name)
    failures.sort()

    files = _write_batch_outputs(out_dir, cfg, results, failures)
    return BatchResult(out_dir=str(out_dir), results=results,
                       failures=failures, files=files)


def _write_batch_outputs(out_dir, cfg, results, failures):
    files = []

    def emit_tsv(filename, header, rows):
        _write_tsv(out_dir / filename, header, rows)
        files.append(filename)

    emit_tsv("views.tsv", ("institution", "view", "nodes", "edges"),
             [row for r in results for row in r.views_meta])
    emit_tsv("assortativity.tsv", ("institution", "view", "attribute", "r"),
             [row for r in results for row in r.assort_rows])
    emit_tsv("compare.tsv",
             ("institution", "view", "method", "attribute", "rand", "z"),
             [row for r in results for row in r.compare_rows])
    emit_tsv("compare_max.tsv",
             ("institution", "view", "attribute", "max_z", "best_method"),
             [row for r in results for row in r.compare_max_rows])
    emit_tsv("tetra.tsv",
             ("institution", "view", "center_x", "center_y", "center_z",
              "proj_u", "proj_v", "max_distance", "size_bin", "year_distance"),
             [row for r in results for row in r.tetra_rows])

    for kind in VIEW_KINDS:
        rows = []
        for r in results:
            fp = r.figure_points.get(kind)
            if fp is not None:
                rows.append((r.name, fp[0], fp[1], fp[2], fp[3]))
        svg = render_tetra_figure(rows, kind, zoom=cfg.zoom_year)
        filename = "figure_%s.svg" % kind.lower()
        (out_dir / filename).write_text(svg, encoding="utf-8")
        files.append(filename)

    box_rows = []
    for estimator in ("logistic-mle", "ergm-mple"):
        fits = [f for r in results for f in r.fits
                if f[2].estimator == estimator]
        if len(fits) < 2:
            continue
        for stats in coefficient_summary(fits):
            outliers = "|".join("%s:%s" % (inst, _fmt(v))
                                for inst, v in stats.outliers) or "-"
            box_rows.append((estimator, stats.view, stats.coefficient,
                             stats.count, _fmt(stats.median), _fmt(stats.q1),
                             _fmt(stats.q3), _fmt(stats.whisker_low),
                             _fmt(stats.whisker_high), outliers))
    emit_tsv("regression_boxplot.tsv",
             ("estimator", "view", "coefficient", "count", "median", "q1",
              "q3", "whisker_low", "whisker_high", "outliers"), box_rows)

    batch_manifest = {
        "package_version": __version__,
        "seed": cfg.seed,
        "exclude_missing": cfg.exclude_missing,
        "dyad_guard": cfg.dyad_guard,
        "zoom_year": cfg.zoom_year,
        "institutions": {r.name: "ok" for r in results},
        "failures": {name: message for name, message in failures},
        "files": sorted(files),
    }
    _write_json(out_dir / "batch_manifest.json", batch_manifest)
    files.append("batch_manifest.json")
    return sorted(files)
