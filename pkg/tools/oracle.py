#!/usr/bin/env python3
"""Straight-line reference calculator for corpus expectations.

Reads a sample CSV, an indicator fixture JSON, and optionally a STROBE
checklist CSV, then computes every aggregate the analysis pipeline is
expected to produce: per-metric and per-category summary statistics,
per-source article counts, z-score and CIS quantile thresholds, selected
paper sets, pairwise correlations with Student-t p-values, zero-filtered
subgraph sizes and correlations, and STROBE quality verdicts.

Everything here is computed directly from the definitions with the
standard library only -- no numpy, no scipy, and no imports from the
package under test. The output JSON is frozen as the expected-value
fixture for the acceptance suite, so this script must stay independent
of the code it checks.

Usage:
    python tools/oracle.py --sample data/sample.csv --fixture data/indicators.json \
        [--resolver data/resolver.json] [--strobe data/strobe.csv] --out expected.json
"""

import argparse
import csv
import json
import math
import statistics
import sys

CATEGORIES = ["Citations", "Captures", "Mentions", "SocialMedia", "Usage"]

# (category, metric, source) rows of the known hierarchy.
HIERARCHY = [
    ("Citations", "Citation Count", "Scopus"),
    ("Captures", "Readers", "Mendeley"),
    ("Mentions", "Blog Mentions", "Blog"),
    ("Mentions", "News Mentions", "News"),
    ("Mentions", "Q&A Site Mentions", "Stack Exchange"),
    ("Mentions", "References", "Wikipedia"),
    ("SocialMedia", "Shares, Likes & Comments", "Facebook"),
    ("SocialMedia", "Tweets", "Twitter"),
    ("Usage", "Abstract Views", "Digital Commons"),
]

SOURCES = [row[2] for row in HIERARCHY]

INDICATOR_SETS = {
    "C": ["Citations"],
    "A": ["Captures", "Mentions", "SocialMedia", "Usage"],
    "I": ["Citations", "Captures", "Mentions", "SocialMedia", "Usage"],
    "Iprime": ["Citations", "Mentions", "SocialMedia"],
    "Aprime": ["Mentions", "SocialMedia"],
}

GEOMETRIC_PAIRS = [
    ("Citations", "SocialMedia"),
    ("Citations", "Mentions"),
    ("SocialMedia", "Mentions"),
]

SUBGRAPH_FILTERS = [
    ["Mentions", "SocialMedia"],
    ["Citations", "Mentions"],
    ["Citations", "SocialMedia"],
    ["Citations", "Mentions", "SocialMedia"],
]


def normalize_doi(raw):
    return raw.strip().lower()


def read_sample(path, resolver_path=None):
    """Return the ordered list of resolved DOIs in the sample."""
    resolver = {}
    if resolver_path:
        with open(resolver_path, encoding="utf-8") as fh:
            resolver = {k.lower(): normalize_doi(v) for k, v in json.load(fh).items()}
    dois = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            authors = [a.strip() for a in row["authors"].split(";") if a.strip()]
            first_author = authors[0] if authors else ""
            key = (first_author + "|" + row["title"].strip()).lower()
            if key in resolver:
                dois.append(resolver[key])
            elif row["doi"].strip():
                dois.append(normalize_doi(row["doi"]))
            else:
                raise SystemExit("unresolvable record id=%s" % row["id"])
    if len(set(dois)) != len(dois):
        raise SystemExit("duplicate DOIs after resolution")
    return sorted(dois)


def read_fixture(path):
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return {normalize_doi(doi): entry for doi, entry in raw.items()}


def metric_value(entry, category, metric, source):
    """Value for one hierarchy row in one fixture entry; None when absent."""
    if entry is None:
        return None
    if category == "Citations":
        count = entry.get("citation_count")
        return count if count is not None else None
    for alt in entry.get("altmetrics", []):
        if alt["category"] == category and alt["metric"] == metric and alt["source"] == source:
            return alt["value"]
    return None


def build_vectors(dois, fixture):
    """Per-metric and per-category value vectors, absent filled with 0."""
    metric_vectors = {}
    for category, metric, source in HIERARCHY:
        values = []
        present = []
        for doi in dois:
            v = metric_value(fixture.get(doi), category, metric, source)
            present.append(v is not None)
            values.append(v if v is not None else 0)
        metric_vectors[(category, metric, source)] = (values, present)
    category_vectors = {}
    for cat in CATEGORIES:
        totals = [0] * len(dois)
        for (category, _metric, _source), (values, _p) in metric_vectors.items():
            if category == cat:
                totals = [t + v for t, v in zip(totals, values)]
        category_vectors[cat] = totals
    return metric_vectors, category_vectors


def summary(values):
    return {
        "max": max(values),
        "mean": math.fsum(values) / len(values),
        "median": statistics.median(values),
    }


def pstdev(values):
    mean = math.fsum(values) / len(values)
    return math.sqrt(math.fsum((v - mean) ** 2 for v in values) / len(values))


def zscores(values):
    mean = math.fsum(values) / len(values)
    sd = pstdev(values)
    if sd == 0:
        raise SystemExit("degenerate vector in z-score computation")
    return [(v - mean) / sd for v in values]


def quantile(values, q):
    """Linear interpolation between order statistics at position (n-1)*q."""
    s = sorted(values)
    pos = (len(s) - 1) * q
    lo = int(math.floor(pos))
    frac = pos - lo
    if lo + 1 >= len(s):
        return s[-1]
    return s[lo] + (s[lo + 1] - s[lo]) * frac


def _betacf(a, b, x):
    """Continued fraction for the regularized incomplete beta (Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 500):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            return h
    raise SystemExit("incomplete beta continued fraction failed to converge")


def betainc_reg(a, b, x):
    """Regularized incomplete beta I_x(a, b)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    front = math.exp(
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log(1.0 - x)
    )
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_two_sided_p(t, df):
    """Two-sided Student-t tail probability."""
    return betainc_reg(df / 2.0, 0.5, df / (df + t * t))


def pearson(x, y):
    n = len(x)
    if n != len(y) or n < 3:
        raise SystemExit("pearson needs equal-length vectors, n >= 3")
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = math.fsum((a - mx) ** 2 for a in x)
    syy = math.fsum((b - my) ** 2 for b in y)
    if sxx == 0 or syy == 0:
        raise SystemExit("constant vector in correlation")
    r = sxy / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        p = 0.0
    else:
        t = r * math.sqrt((n - 2) / (1.0 - r * r))
        p = t_two_sided_p(t, n - 2)
    se = math.sqrt((1.0 - r * r) / (n - 2))
    return {"r": r, "p": p, "n": n, "se": se}


def pair_key(a, b, order):
    return "|".join(sorted([a, b], key=order.index))


def correlation_table(names, vectors, order):
    out = {}
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            va, vb = vectors[a], vectors[b]
            if pstdev(va) == 0 or pstdev(vb) == 0:
                continue
            out[pair_key(a, b, order)] = pearson(va, vb)
    return out


def selection_methods(dois, category_vectors, q):
    """Thresholds plus selected-DOI sets for every CIS and geometric method."""
    z = {cat: zscores(category_vectors[cat]) for cat in CATEGORIES}

    z_q = {cat: quantile(z[cat], q) for cat in CATEGORIES}

    cis_values = {}
    for name, cats in INDICATOR_SETS.items():
        cis_values[name] = [
            math.fsum(z[c][k] for c in cats) / len(cats) for k in range(len(dois))
        ]
    cis_q = {name: quantile(vals, q) for name, vals in cis_values.items()}

    selections = {}
    for name, vals in cis_values.items():
        t = cis_q[name]
        selections["cis_" + name] = sorted(
            doi for doi, v in zip(dois, vals) if v >= t
        )
    for cat_a, cat_b in GEOMETRIC_PAIRS:
        ta, tb = z_q[cat_a], z_q[cat_b]
        selected = [
            doi for doi, za, zb in zip(dois, z[cat_a], z[cat_b])
            if za >= ta and zb >= tb
        ]
        selections["geo_%s_%s" % (cat_a, cat_b)] = sorted(selected)

    return z_q, cis_q, cis_values, selections


def read_strobe(path):
    """Consensus checklist scores keyed by DOI."""
    scores = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            if row["reviewer"] != "consensus":
                continue
            checked = sum(int(row["item_%d" % i]) for i in range(1, 23))
            scores[normalize_doi(row["doi"])] = checked / 22.0
    return scores


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sample", required=True)
    ap.add_argument("--fixture", required=True)
    ap.add_argument("--resolver")
    ap.add_argument("--strobe")
    ap.add_argument("--quantile", type=float, default=0.95)
    ap.add_argument("--out", required=True)
    args = ap.parse_args(argv)

    dois = read_sample(args.sample, args.resolver)
    fixture = read_fixture(args.fixture)
    metric_vectors, category_vectors = build_vectors(dois, fixture)

    metric_stats = {
        "%s|%s|%s" % key: summary(values)
        for key, (values, _present) in metric_vectors.items()
    }
    category_stats = {cat: summary(category_vectors[cat]) for cat in CATEGORIES}

    source_counts = {}
    for (category, metric, source), (_values, present) in metric_vectors.items():
        source_counts[source] = sum(present)

    z_q, cis_q, cis_values, selections = selection_methods(
        dois, category_vectors, args.quantile
    )

    category_correlations = correlation_table(
        CATEGORIES, category_vectors, CATEGORIES
    )
    source_vectors = {
        source: metric_vectors[(category, metric, source)][0]
        for category, metric, source in HIERARCHY
    }
    source_correlations = correlation_table(SOURCES, source_vectors, SOURCES)

    subgraphs = {}
    for cats in SUBGRAPH_FILTERS:
        kept = [
            k for k in range(len(dois))
            if all(category_vectors[c][k] > 0 for c in cats)
        ]
        sub_vectors = {
            c: [category_vectors[c][k] for k in kept] for c in cats
        }
        subgraphs[",".join(cats)] = {
            "size": len(kept),
            "dois": sorted(dois[k] for k in kept),
            "correlations": correlation_table(cats, sub_vectors, CATEGORIES),
        }

    matrix_dois = sorted(set().union(*selections.values())) if selections else []
    selection_matrix = {
        doi: {method: doi in sel for method, sel in selections.items()}
        for doi in matrix_dois
    }

    result = {
        "n_papers": len(dois),
        "quantile": args.quantile,
        "metric_stats": metric_stats,
        "category_stats": category_stats,
        "source_counts": source_counts,
        "z_q95": z_q,
        "cis_q95": cis_q,
        "selections": selections,
        "category_correlations": category_correlations,
        "source_correlations": source_correlations,
        "subgraphs": subgraphs,
        "selection_matrix": selection_matrix,
    }

    if args.strobe:
        scores = read_strobe(args.strobe)
        threshold = quantile(list(scores.values()), 0.75)
        strong = {doi: score >= threshold for doi, score in scores.items()}
        quality_matrix = {}
        for doi in matrix_dois:
            row = {}
            for method, sel in selections.items():
                if doi not in sel:
                    row[method] = ""
                elif doi not in scores:
                    row[method] = "unassessed"
                elif strong[doi]:
                    row[method] = "+"
                else:
                    row[method] = "•"
            quality_matrix[doi] = row
        result["strobe"] = {
            "threshold": threshold,
            "scores": scores,
            "strong": strong,
            "quality_matrix": quality_matrix,
        }

    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(result, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print("wrote %s (%d papers)" % (args.out, len(dois)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
