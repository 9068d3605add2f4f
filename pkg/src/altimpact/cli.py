"""Command-line orchestration of the pipeline.

Subcommands mirror the pipeline stages: harvest resolves DOIs and gathers
indicators into a knowledge graph; analyze produces summary statistics,
density curves and correlation tables; select runs the geometric and
composite-score selections; assess cross-tabulates selections with expert
quality scores; report chains all four. Exit codes: 0 success, 1 hard
error, 2 partial failure.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import logging
import os
import sys
from dataclasses import dataclass, field

from . import assess as assess_mod
from . import hierarchy, ingest, kgraph, reporting, selection, stats
from .errors import (
    AltimpactError,
    DegenerateDistribution,
    MalformedCsv,
    MissingChecklists,
    MissingKg,
    MissingSelections,
)
from .harvest import (
    FixtureAltmetricsBackend,
    FixtureCitationBackend,
    FixtureResolver,
    FixtureStore,
    LiveIndicatorBackend,
    LiveResolver,
    resolve_doi,
    run_pipeline,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARTIAL = 2

DEFAULT_WINDOW_START = dt.date(2020, 1, 15)
DEFAULT_WINDOW_END = dt.date(2020, 2, 24)

STANDARD_SET_NAMES = {s.name: s for s in selection.STANDARD_SETS}

CATEGORY_ALIASES = {c.lower(): c for c in hierarchy.CATEGORY_ORDER}

SUBGRAPH_FILTERS = (
    ("kg_m_s", (hierarchy.MENTIONS, hierarchy.SOCIAL_MEDIA)),
    ("kg_m_c", (hierarchy.MENTIONS, hierarchy.CITATIONS)),
    ("kg_s_c", (hierarchy.SOCIAL_MEDIA, hierarchy.CITATIONS)),
    ("kg_m_s_c", (hierarchy.MENTIONS, hierarchy.SOCIAL_MEDIA,
                  hierarchy.CITATIONS)),
)

DRILLDOWN_R = 0.6


@dataclass
class RunConfig:
    """Everything a pipeline invocation needs."""

    sample_path: str | None = None
    fixture_path: str | None = None
    resolver_path: str | None = None
    live: bool = False
    out_dir: str = "out"
    window: tuple = (DEFAULT_WINDOW_START, DEFAULT_WINDOW_END)
    quantile: float = 0.95
    indicator_sets: list = field(
        default_factory=lambda: list(selection.STANDARD_SETS))
    geometric_pairs: list = field(
        default_factory=lambda: list(selection.STANDARD_PAIRS))
    checklists_path: str | None = None
    workers: int = 1

    def validate(self):
        if self.live == bool(self.fixture_path):
            raise ValueError("configure exactly one of --fixture and --live")
        if not 0.0 < self.quantile < 1.0:
            raise ValueError("quantile must lie in (0, 1)")


def _parse_category(token: str) -> str:
    cat = CATEGORY_ALIASES.get(token.strip().lower())
    if cat is None:
        raise ValueError("unknown category %r" % token)
    return cat


def parse_pairs(text: str) -> list:
    """Parse --pairs: "Citations:SocialMedia,Mentions:SocialMedia"."""
    pairs = []
    for chunk in text.split(","):
        parts = chunk.split(":")
        if len(parts) != 2:
            raise ValueError("bad pair %r (want CatA:CatB)" % chunk)
        pairs.append((_parse_category(parts[0]), _parse_category(parts[1])))
    return pairs


def parse_sets(text: str) -> list:
    """Parse --sets: standard names or custom "name=CatA+CatB" groups."""
    sets = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if "=" in chunk:
            name, body = chunk.split("=", 1)
            cats = tuple(_parse_category(t) for t in body.split("+"))
            sets.append(selection.IndicatorSet(name.strip(), cats))
        elif chunk in STANDARD_SET_NAMES:
            sets.append(STANDARD_SET_NAMES[chunk])
        else:
            raise ValueError("unknown indicator set %r" % chunk)
    return sets


def _read_bytes(path) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _load_sample(config: RunConfig) -> ingest.SampleSet:
    data = _read_bytes(config.sample_path)
    return ingest.parse_sample(data, config.window)


def _build_backends(config: RunConfig):
    """Return (resolver, citation_backend, altmetrics_backend)."""
    if config.live:
        return (LiveResolver(), LiveIndicatorBackend("citations"),
                LiveIndicatorBackend("altmetrics"))
    store = FixtureStore.from_path(config.fixture_path)
    resolver_path = config.resolver_path
    if resolver_path is None:
        candidate = os.path.join(os.path.dirname(config.fixture_path),
                                 "resolver.json")
        resolver_path = candidate if os.path.exists(candidate) else None
    if resolver_path:
        resolver = FixtureResolver.from_path(resolver_path)
    else:
        logger.warning("no resolver table found; trusting sample DOIs")
        resolver = _TrustingResolver(config)
    return (resolver, FixtureCitationBackend(store),
            FixtureAltmetricsBackend(store))


class _TrustingResolver:
    """Fallback resolver that echoes the DOI recorded in the sample."""

    def __init__(self, config: RunConfig):
        sample = _load_sample(config)
        self.table = {}
        for rec in sample.records:
            if rec.doi:
                key = "%s|%s" % ((rec.first_author or "").lower(),
                                 rec.title.lower())
                self.table[key] = rec.doi

    def resolve(self, first_author, title):
        from .errors import ResolutionFailed
        key = "%s|%s" % ((first_author or "").lower(), title.lower())
        doi = self.table.get(key)
        if doi is None:
            raise ResolutionFailed("no DOI recorded for %r" % title)
        return doi


def _kg_path(config: RunConfig) -> str:
    return os.path.join(config.out_dir, "kg.triples")


def _load_kg(config: RunConfig) -> kgraph.KnowledgeGraph:
    path = _kg_path(config)
    if not os.path.exists(path):
        raise MissingKg("no knowledge graph at %s; run harvest first" % path)
    kg = kgraph.parse_triples(_read_bytes(path))
    if not kg.article_index:
        raise MissingKg("knowledge graph at %s is empty" % path)
    return kg


def cmd_harvest(config: RunConfig) -> int:
    """Resolve, gather, and persist observations plus the graph."""
    try:
        sample = _load_sample(config)
    except OSError as exc:
        logger.error("cannot read sample: %s", exc)
        return EXIT_ERROR
    except AltimpactError as exc:
        logger.error("sample rejected: %s", exc)
        return EXIT_ERROR
    for warning in ingest.validate_sample(sample):
        logger.info("sample warning: %s %s: %s", warning.local_id,
                    warning.kind, warning.message)
    try:
        resolver, cit_backend, alt_backend = _build_backends(config)
    except (OSError, AltimpactError) as exc:
        logger.error("backend setup failed: %s", exc)
        return EXIT_ERROR

    article_dois = []
    for record in sample.records:
        try:
            article_dois.append(resolve_doi(record, resolver))
        except AltimpactError:
            continue
    observations, failures = run_pipeline(
        sample, resolver, cit_backend, alt_backend,
        max_workers=config.workers)
    kg = kgraph.populate(observations, article_dois=article_dois)

    reporting.write_json(
        os.path.join(config.out_dir, "observations.json"),
        [{"doi": o.doi, "category": o.category, "metric": o.metric,
          "source": o.source, "value": o.value,
          "known_hierarchy": o.known_hierarchy} for o in observations])
    reporting.write_json(
        os.path.join(config.out_dir, "failures.json"),
        [{"local_id": f.local_id, "doi": f.doi, "stage": f.stage,
          "reason": f.reason} for f in failures])
    reporting.atomic_write_bytes(_kg_path(config),
                                 kgraph.serialize(kg, "triples"))
    reporting.atomic_write_bytes(os.path.join(config.out_dir, "kg.json"),
                                 kgraph.serialize(kg, "json"))
    logger.info("harvested %d observations over %d articles (%d failures)",
                len(observations), len(kg.article_index), len(failures))
    return EXIT_PARTIAL if failures else EXIT_OK


def _metric_vectors(kg: kgraph.KnowledgeGraph):
    """Per-metric value vectors over all articles (absent = 0)."""
    papers = kg.articles()
    vectors = {}
    for entry in hierarchy.KNOWN_HIERARCHY:
        vec = [kgraph.metric_value(kg, doi, entry.metric, entry.source)
               for doi in papers]
        vectors[(entry.category, entry.metric, entry.source)] = vec
    return papers, vectors


def _write_kde_csv(path, values, label):
    try:
        curve = stats.kde_grid(values)
    except (DegenerateDistribution, AltimpactError) as exc:
        logger.info("skipping density of %s: %s", label, exc)
        return
    reporting.write_csv(path, ["x", "density"],
                        zip(curve.eval_points, curve.densities))


def cmd_analyze(config: RunConfig) -> int:
    """Summaries, density curves, correlations, subgraph correlations."""
    try:
        kg = _load_kg(config)
    except MissingKg as exc:
        logger.error(str(exc))
        return EXIT_ERROR
    matrix = kgraph.to_matrix(kg)
    analysis_dir = os.path.join(config.out_dir, "analysis")

    papers, vectors = _metric_vectors(kg)
    summary_rows = []
    for (category, metric, _source), vec in vectors.items():
        stat = stats.summary(vec)
        summary_rows.append((category, metric, stat["max"], stat["mean"],
                             stat["median"]))
    reporting.write_csv(os.path.join(analysis_dir, "summary.csv"),
                        ["category", "metric", "max", "mean", "median"],
                        summary_rows)

    kde_dir = os.path.join(analysis_dir, "kde")
    for category in matrix.categories:
        column = [float(v) for v in matrix.column(category)]
        base = "category_%s" % reporting.slug(category)
        _write_kde_csv(os.path.join(kde_dir, base + "_abs.csv"),
                       column, category)
        try:
            zs = stats.zscores(column, category)
            _write_kde_csv(os.path.join(kde_dir, base + "_z.csv"),
                           list(zs.scores), category + " z")
        except DegenerateDistribution as exc:
            logger.info("skipping z density of %s: %s", category, exc)
    for (category, metric, _source), vec in vectors.items():
        base = "metric_%s" % reporting.slug(metric)
        _write_kde_csv(os.path.join(kde_dir, base + "_abs.csv"),
                       [float(v) for v in vec], metric)
        try:
            zs = stats.zscores([float(v) for v in vec], metric)
            _write_kde_csv(os.path.join(kde_dir, base + "_z.csv"),
                           list(zs.scores), metric + " z")
        except DegenerateDistribution as exc:
            logger.info("skipping z density of %s: %s", metric, exc)

    cat_rows = []
    strong_pairs = []
    cats = matrix.categories
    for i in range(len(cats)):
        for j in range(i + 1, len(cats)):
            a, b = cats[i], cats[j]
            try:
                res = stats.pearson(matrix.column(a), matrix.column(b))
            except AltimpactError as exc:
                logger.info("skipping correlation %s-%s: %s", a, b, exc)
                continue
            cat_rows.append((a, b, res.r, res.n, res.p_value,
                             res.standard_error))
            if res.r > DRILLDOWN_R:
                strong_pairs.append((a, b))
    reporting.write_csv(
        os.path.join(analysis_dir, "correlations_categories.csv"),
        ["category_a", "category_b", "r", "n", "p_value", "standard_error"],
        cat_rows)

    by_category = {}
    for (category, _metric, source), vec in vectors.items():
        by_category.setdefault(category, []).append((source, vec))
    for a, b in strong_pairs:
        rows = []
        for source_a, vec_a in by_category.get(a, []):
            for source_b, vec_b in by_category.get(b, []):
                try:
                    res = stats.pearson(vec_a, vec_b)
                except AltimpactError as exc:
                    logger.info("skipping correlation %s-%s: %s",
                                source_a, source_b, exc)
                    continue
                rows.append((source_a, source_b, res.r, res.n, res.p_value,
                             res.standard_error))
        name = "correlations_sources_%s_%s.csv" % (reporting.slug(a),
                                                   reporting.slug(b))
        reporting.write_csv(os.path.join(analysis_dir, name),
                            ["source_a", "source_b", "r", "n", "p_value",
                             "standard_error"], rows)

    size_rows = []
    for label, filter_cats in SUBGRAPH_FILTERS:
        sub = kgraph.zero_filtered_subgraph(kg, filter_cats)
        size_rows.append((label, "+".join(filter_cats),
                          len(sub.article_index)))
        sub_matrix = kgraph.to_matrix(sub)
        rows = []
        for i in range(len(filter_cats)):
            for j in range(i + 1, len(filter_cats)):
                a, b = filter_cats[i], filter_cats[j]
                try:
                    res = stats.pearson(sub_matrix.column(a),
                                        sub_matrix.column(b))
                except AltimpactError as exc:
                    logger.info("skipping %s correlation %s-%s: %s",
                                label, a, b, exc)
                    continue
                rows.append((a, b, res.r, res.n, res.p_value,
                             res.standard_error))
        reporting.write_csv(
            os.path.join(analysis_dir, "correlations_subgraph_%s.csv"
                         % label),
            ["category_a", "category_b", "r", "n", "p_value",
             "standard_error"], rows)
    reporting.write_csv(os.path.join(analysis_dir, "subgraphs.csv"),
                        ["subgraph", "categories", "articles"], size_rows)
    return EXIT_OK


def cmd_select(config: RunConfig) -> int:
    """Geometric and composite-score selections plus plot data."""
    try:
        kg = _load_kg(config)
    except MissingKg as exc:
        logger.error(str(exc))
        return EXIT_ERROR
    matrix = kgraph.to_matrix(kg)
    select_dir = os.path.join(config.out_dir, "selection")
    results = []
    errors = []

    for indicator_set in config.indicator_sets:
        try:
            results.append(selection.select_by_set(matrix, indicator_set,
                                                   config.quantile))
        except AltimpactError as exc:
            errors.append({"method": "CIS_%s" % indicator_set.name,
                           "error": str(exc)})
    for cat_a, cat_b in config.geometric_pairs:
        try:
            results.append(selection.geometric_select(matrix, cat_a, cat_b,
                                                      config.quantile))
        except AltimpactError as exc:
            errors.append({"method": selection.pair_label(cat_a, cat_b),
                           "error": str(exc)})

    dates = {}
    if config.sample_path:
        try:
            sample = _load_sample(config)
            resolver, _cit, _alt = _build_backends(config)
            for rec in sample.records:
                try:
                    dates[resolve_doi(rec, resolver)] = rec.publication_date
                except AltimpactError:
                    continue
        except (OSError, AltimpactError) as exc:
            logger.info("no publication dates for timelines: %s", exc)

    for res in results:
        path = os.path.join(select_dir, "method_%s.csv" % res.label)
        if res.method == "geometric":
            ta, tb = res.threshold
            rows = [(doi, za, zb, ta, tb, doi in res.selected)
                    for doi, (za, zb) in sorted(res.scores.items())]
            reporting.write_csv(path, ["doi", "z_a", "z_b", "threshold_a",
                                       "threshold_b", "selected"], rows)
            scatter = os.path.join(select_dir,
                                   "scatter_%s.csv" % res.label)
            reporting.write_csv(scatter, ["doi", "z_a", "z_b"],
                                [(doi, za, zb) for doi, (za, zb)
                                 in sorted(res.scores.items())])
        else:
            (t,) = res.threshold
            rows = [(doi, s, t, doi in res.selected)
                    for doi, s in sorted(res.scores.items())]
            reporting.write_csv(path, ["doi", "score", "threshold",
                                       "selected"], rows)
            if dates:
                timeline = [(doi, dates.get(doi).isoformat()
                             if dates.get(doi) else "", s, t)
                            for doi, s in sorted(res.scores.items())]
                reporting.write_csv(
                    os.path.join(select_dir, "timeline_%s.csv" % res.label),
                    ["doi", "publication_date", "score", "threshold"],
                    timeline)

    labels, rows = selection.selection_matrix(results)
    matrix_rows = []
    for doi, flags in rows:
        matrix_rows.append([doi] + [flags[label] for label in labels])
    reporting.write_csv(os.path.join(select_dir, "selection_matrix.csv"),
                        ["doi"] + labels, matrix_rows)
    if errors:
        reporting.write_json(os.path.join(select_dir, "errors.json"), errors)
        logger.warning("%d selection method(s) failed", len(errors))
        return EXIT_PARTIAL
    return EXIT_OK


def _read_selection_matrix(config: RunConfig):
    path = os.path.join(config.out_dir, "selection", "selection_matrix.csv")
    if not os.path.exists(path):
        raise MissingSelections("no selection matrix at %s; run select first"
                                % path)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "doi":
            raise MissingSelections("malformed selection matrix at %s" % path)
        labels = header[1:]
        rows = []
        for row in reader:
            flags = {label: cell == "true"
                     for label, cell in zip(labels, row[1:])}
            rows.append((row[0], flags))
    return labels, rows


def cmd_assess(config: RunConfig) -> int:
    """Cross-tabulate selections with expert quality scores."""
    try:
        labels, rows = _read_selection_matrix(config)
    except MissingSelections as exc:
        logger.error(str(exc))
        return EXIT_ERROR
    if not config.checklists_path or not os.path.exists(
            config.checklists_path):
        logger.error("no checklist file (--checklists) at %r",
                     config.checklists_path)
        return EXIT_ERROR
    try:
        checklists = assess_mod.read_checklists(
            _read_bytes(config.checklists_path))
        verdicts, threshold = assess_mod.consensus_verdicts(checklists)
    except (OSError, AltimpactError) as exc:
        logger.error("cannot score checklists: %s", exc)
        return EXIT_ERROR

    journals = {}
    if config.sample_path and os.path.exists(config.sample_path):
        try:
            sample = _load_sample(config)
            resolver, _cit, _alt = _build_backends(config)
            for rec in sample.records:
                try:
                    journals[resolve_doi(rec, resolver)] = rec.journal or ""
                except AltimpactError:
                    continue
        except (OSError, AltimpactError) as exc:
            logger.info("no journal names for the report: %s", exc)

    annotated = assess_mod.quality_report(labels, rows, verdicts)
    out_rows = []
    for doi, marks in annotated:
        verdict = verdicts.get(doi)
        score = verdict.score if verdict else ""
        out_rows.append([doi, journals.get(doi, ""), score]
                        + [marks[label] for label in labels])
    reporting.write_csv(os.path.join(config.out_dir, "quality_report.csv"),
                        ["doi", "journal", "strobe_score"] + labels,
                        out_rows)
    logger.info("quality threshold %.6g; %d papers assessed", threshold,
                len(verdicts))
    return EXIT_OK


def cmd_report(config: RunConfig) -> int:
    """Run harvest, analyze, select, and assess in sequence."""
    worst = EXIT_OK
    for step in (cmd_harvest, cmd_analyze, cmd_select, cmd_assess):
        code = step(config)
        if code == EXIT_ERROR:
            return EXIT_ERROR
        worst = max(worst, code)
    return worst


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="altimpact",
        description="Harvest scholarly impact indicators, build a knowledge "
                    "graph, and select candidate impactful papers.")
    parser.add_argument("--verbose", "-v", action="store_true",
                        help="log progress details")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, sample_required=False):
        p.add_argument("--sample", required=sample_required,
                       help="sample CSV path")
        p.add_argument("--fixture", help="indicator fixture JSON path")
        p.add_argument("--resolver",
                       help="resolver table JSON (default: resolver.json "
                            "next to the fixture)")
        p.add_argument("--live", action="store_true",
                       help="use live HTTP backends (URLs from environment)")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--quantile", type=float, default=0.95)
        p.add_argument("--sets", help="indicator sets, e.g. "
                                      "C,A,I,Iprime,Aprime or x=Citations+Usage")
        p.add_argument("--pairs", help="geometric pairs, e.g. "
                                       "Citations:SocialMedia,...")
        p.add_argument("--window-start", default=str(DEFAULT_WINDOW_START))
        p.add_argument("--window-end", default=str(DEFAULT_WINDOW_END))
        p.add_argument("--checklists", help="expert checklist CSV path")
        p.add_argument("--workers", type=int, default=1,
                       help="parallel harvest workers")

    for name, helptext, needs_sample in (
            ("harvest", "resolve DOIs and gather indicators", True),
            ("analyze", "summaries, densities, correlations", False),
            ("select", "geometric and composite-score selection", False),
            ("assess", "cross-tabulate selections with quality scores",
             False),
            ("report", "run the whole pipeline", True)):
        p = sub.add_parser(name, help=helptext)
        common(p, sample_required=needs_sample)
    return parser


def config_from_args(args) -> RunConfig:
    config = RunConfig(
        sample_path=args.sample,
        fixture_path=args.fixture,
        resolver_path=args.resolver,
        live=bool(args.live),
        out_dir=args.out,
        window=(dt.date.fromisoformat(args.window_start),
                dt.date.fromisoformat(args.window_end)),
        quantile=args.quantile,
        checklists_path=args.checklists,
        workers=args.workers,
    )
    if args.sets:
        config.indicator_sets = parse_sets(args.sets)
    if args.pairs:
        config.geometric_pairs = parse_pairs(args.pairs)
    return config


COMMANDS = {
    "harvest": cmd_harvest,
    "analyze": cmd_analyze,
    "select": cmd_select,
    "assess": cmd_assess,
    "report": cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = config_from_args(args)
        config.validate()
    except (ValueError, AltimpactError) as exc:
        logger.error(str(exc))
        return EXIT_ERROR
    try:
        return COMMANDS[args.command](config)
    except AltimpactError as exc:
        logger.error(str(exc))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
