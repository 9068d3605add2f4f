#!/usr/bin/env python3
"""Deterministic constructor for the bundled 212-paper example corpus.

The corpus is synthetic but engineered: metric values are assigned so that
the pipeline's aggregate outputs land on predetermined targets (summary
statistics, per-source support counts, zero-filtered subgraph sizes,
quantile thresholds, selection memberships, and pairwise correlation
values). Construction happens in phases:

1. roster        -- 212 paper records with ids, DOIs, journals, dates
2. assignment    -- explicit values for structurally constrained papers,
                    banded background generation with exact sum allocation
3. tuning        -- fixed-point placement of quantile boundary papers and
                    composite-score dial papers from realized sigmas
4. optimize      -- correlation tuning via constraint-filtered local moves
5. emit          -- sample.csv, indicators.json, resolver.json, strobe.csv

Every hard constraint is re-verified after each optimizer move; the script
aborts loudly if any invariant cannot be satisfied. Run tools/oracle.py on
the emitted files afterwards to freeze expected values for the test suite.
"""

import csv
import json
import math
import os
import random
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
import oracle  # reference definitions: quantile, pearson, zscores

HERE = os.path.dirname(os.path.abspath(__file__))
DATA_DIR = os.path.join(os.path.dirname(HERE), "data")

N = 212
METRICS = ["cit", "rdr", "blg", "nws", "qa", "wik", "fb", "tw", "use"]
CATEGORY_OF = {
    "cit": "Citations", "rdr": "Captures", "blg": "Mentions", "nws": "Mentions",
    "qa": "Mentions", "wik": "Mentions", "fb": "SocialMedia", "tw": "SocialMedia",
    "use": "Usage",
}

SUMS = {
    "cit": 346, "rdr": 358, "blg": 201, "nws": 1897, "qa": 10, "wik": 12,
    "fb": 123397, "tw": 96960, "use": 15,
}
SUPPORTS = {
    "cit": 40, "rdr": 13, "blg": 43, "nws": 72, "qa": 8, "wik": 8,
    "fb": 67, "tw": 157, "use": 1,
}
MAXES = {
    "cit": 82, "rdr": 161, "blg": 22, "nws": 253, "qa": 3, "wik": 4,
    "fb": 33043, "tw": 14409, "use": 15,
}

CIS_SETS = {
    "C": ["Citations"],
    "A": ["Captures", "Mentions", "SocialMedia", "Usage"],
    "I": ["Citations", "Captures", "Mentions", "SocialMedia", "Usage"],
    "Iprime": ["Citations", "Mentions", "SocialMedia"],
    "Aprime": ["Mentions", "SocialMedia"],
}
GEO_PAIRS = [("Citations", "SocialMedia"), ("Citations", "Mentions"),
             ("SocialMedia", "Mentions")]

SPECIALS = {
    "J1": ("10.1001/jama.2020.0757", "JAMA"),
    "J2": ("10.1001/jama.2020.1585", "JAMA"),
    "M1": ("10.1002/jmv.25678", "Med Virology"),
    "M2": ("10.1002/jmv.25681", "Med Virology"),
    "M3": ("10.1002/jmv.25682", "Med Virology"),
    "I1": ("10.1016/j.ijid.2020.01.009", "IJID"),
    "I2": ("10.1016/j.ijid.2020.01.050", "IJID"),
    "L3": ("10.1016/S0140-6736(20)30154-9", "Lancet"),
    "L1": ("10.1016/S0140-6736(20)30183-5", "Lancet"),
    "L2": ("10.1016/S0140-6736(20)30185-9", "Lancet"),
    "L4": ("10.1016/S0140-6736(20)30211-7", "Lancet"),
    "L5": ("10.1016/S0140-6736(20)30260-9", "Lancet"),
    "N2": ("10.1056/NEJMc2001468", "NEJM"),
    "N3": ("10.1056/NEJMoa2001017", "NEJM"),
    "N1": ("10.1056/NEJMoa2001191", "NEJM"),
    "N4": ("10.1056/NEJMoa2001316", "NEJM"),
}

# columns: cis_C, cis_A, cis_I, cis_Iprime, cis_Aprime, geo_cs, geo_cm, geo_sm
PATTERN = {
    "J1": (1, 1, 1, 1, 1, 1, 0, 0),
    "J2": (0, 1, 1, 1, 1, 0, 0, 1),
    "M1": (1, 0, 1, 0, 0, 0, 0, 0),
    "M2": (1, 0, 0, 0, 0, 0, 0, 0),
    "M3": (0, 1, 1, 1, 1, 0, 0, 1),
    "I1": (1, 1, 1, 0, 0, 0, 0, 0),
    "I2": (1, 0, 0, 0, 0, 0, 0, 0),
    "L3": (1, 1, 1, 1, 1, 1, 1, 1),
    "L1": (1, 1, 1, 1, 1, 1, 1, 1),
    "L2": (1, 0, 0, 0, 0, 0, 0, 0),
    "L4": (1, 1, 1, 1, 1, 1, 1, 1),
    "L5": (0, 1, 1, 1, 1, 0, 0, 1),
    "N2": (1, 1, 1, 1, 1, 1, 1, 1),
    "N3": (1, 0, 0, 1, 1, 1, 1, 1),
    "N1": (0, 1, 1, 1, 1, 0, 0, 1),
    "N4": (0, 1, 0, 1, 1, 0, 0, 0),
}
METHOD_KEYS = ["cis_C", "cis_A", "cis_I", "cis_Iprime", "cis_Aprime",
               "geo_Citations_SocialMedia", "geo_Citations_Mentions",
               "geo_SocialMedia_Mentions"]

# paper expected to sit just below (s200) and just above (s201) each
# method threshold; guards keep optimizer moves from stealing these slots
BOUNDARY_GUARDS = {
    "cis_C": ("*c3*", "L2"),
    "cis_A": ("M1", "L4"),
    "cis_I": ("N3", "J2"),
    "cis_Iprime": ("I1", "N4"),
    "cis_Aprime": ("Ba", "N3"),
}

R_TARGETS = {
    ("cat", "Citations", "Mentions"): 0.63,
    ("cat", "Citations", "SocialMedia"): 0.69,
    ("cat", "Mentions", "SocialMedia"): 0.81,
    ("src", "tw", "blg"): 0.84,
    ("src", "tw", "nws"): 0.83,
    ("src", "fb", "cit"): 0.69,
    ("src", "fb", "nws"): 0.69,
    ("src", "fb", "blg"): 0.62,
    ("src", "nws", "cit"): 0.63,
    ("sub_mc", "Citations", "Mentions"): 0.67,
    ("sub_sc", "Citations", "SocialMedia"): 0.70,
    ("sub_ms", "Mentions", "SocialMedia"): 0.80,
    ("sub_msc", "Citations", "Mentions"): 0.67,
    ("sub_msc", "Citations", "SocialMedia"): 0.67,
    ("sub_msc", "Mentions", "SocialMedia"): 0.82,
}
T_TARGETS = {
    "z_Citations": 0.27, "z_SocialMedia": 1.11, "z_Mentions": 1.75,
    "cis_C": 0.27, "cis_A": 1.07, "cis_I": 1.03,
    "cis_Iprime": 1.09, "cis_Aprime": 1.27,
}

R_TOL_BUILD = 0.012
T_TOL_BUILD = 0.008


class Corpus:
    """Mutable value table plus class/role bookkeeping during construction."""

    def __init__(self):
        self.tags = []
        self.values = {m: [0] * N for m in METRICS}
        self.klass = [""] * N
        self.role = {}
        self.frozen = set()
        self.knobs = {}

    def idx(self, tag):
        return self.role[tag]

    def set_val(self, tag, metric, v):
        self.values[metric][self.idx(tag)] = v

    def get(self, tag, metric):
        return self.values[metric][self.idx(tag)]

    def category_vector(self, cat):
        out = [0] * N
        for m in METRICS:
            if CATEGORY_OF[m] == cat:
                col = self.values[m]
                out = [a + b for a, b in zip(out, col)]
        return out

    def mentions(self, tag):
        k = self.idx(tag)
        return sum(self.values[m][k] for m in ("blg", "nws", "qa", "wik"))

    def social(self, tag):
        k = self.idx(tag)
        return self.values["fb"][k] + self.values["tw"][k]


# ---------------------------------------------------------------------------
# evaluation


def evaluate(c):
    cats = {cat: c.category_vector(cat) for cat in oracle.CATEGORIES}
    z = {cat: oracle.zscores(cats[cat]) for cat in oracle.CATEGORIES}
    zq = {cat: oracle.quantile(z[cat], 0.95) for cat in oracle.CATEGORIES}

    cis = {}
    for name, members in CIS_SETS.items():
        cis[name] = [sum(z[m][k] for m in members) / len(members) for k in range(N)]
    cisq = {name: oracle.quantile(v, 0.95) for name, v in cis.items()}

    selected = {}
    for name in CIS_SETS:
        t = cisq[name]
        selected["cis_" + name] = {k for k in range(N) if cis[name][k] >= t}
    for a, b in GEO_PAIRS:
        ta, tb = zq[a], zq[b]
        selected["geo_%s_%s" % (a, b)] = {
            k for k in range(N) if z[a][k] >= ta and z[b][k] >= tb
        }

    def corr(x, y):
        return oracle.pearson(x, y)["r"]

    r = {}
    r[("cat", "Citations", "Mentions")] = corr(cats["Citations"], cats["Mentions"])
    r[("cat", "Citations", "SocialMedia")] = corr(cats["Citations"], cats["SocialMedia"])
    r[("cat", "Mentions", "SocialMedia")] = corr(cats["Mentions"], cats["SocialMedia"])
    for key_a, key_b in [("tw", "blg"), ("tw", "nws"), ("fb", "cit"),
                         ("fb", "nws"), ("fb", "blg"), ("nws", "cit")]:
        r[("src", key_a, key_b)] = corr(c.values[key_a], c.values[key_b])

    subs = {}
    for name, need in [("sub_ms", ("Mentions", "SocialMedia")),
                       ("sub_mc", ("Citations", "Mentions")),
                       ("sub_sc", ("Citations", "SocialMedia")),
                       ("sub_msc", ("Citations", "Mentions", "SocialMedia"))]:
        kept = [k for k in range(N) if all(cats[cat][k] > 0 for cat in need)]
        subs[name] = kept
        for i, a in enumerate(need):
            for b in need[i + 1:]:
                r[(name, a, b)] = corr([cats[a][k] for k in kept],
                                       [cats[b][k] for k in kept])

    thresholds = {"z_" + cat: zq[cat] for cat in oracle.CATEGORIES}
    thresholds.update({"cis_" + name: cisq[name] for name in CIS_SETS})
    return {"cats": cats, "z": z, "cis": cis, "r": r, "thresholds": thresholds,
            "selected": selected, "subsizes": {k: len(v) for k, v in subs.items()}}


def hard_violations(c, ev):
    bad = []
    for m in METRICS:
        col = c.values[m]
        if sum(col) != SUMS[m]:
            bad.append("sum %s = %d != %d" % (m, sum(col), SUMS[m]))
        if max(col) != MAXES[m]:
            bad.append("max %s = %d != %d" % (m, max(col), MAXES[m]))
        if sum(1 for v in col if v > 0) != SUPPORTS[m]:
            bad.append("support %s = %d != %d"
                       % (m, sum(1 for v in col if v > 0), SUPPORTS[m]))
        if min(col) < 0:
            bad.append("negative %s" % m)
    tw = sorted(c.values["tw"])
    if (tw[105], tw[106]) != (29, 30):
        bad.append("tweets median pair %s" % str((tw[105], tw[106])))
    so = sorted(ev["cats"]["SocialMedia"])
    if (so[105], so[106]) != (36, 37):
        bad.append("social median pair %s" % str((so[105], so[106])))
    for m in ["cit", "rdr", "blg", "nws", "qa", "wik", "fb", "use"]:
        col = sorted(c.values[m])
        if col[105] != 0 or col[106] != 0:
            bad.append("median %s nonzero" % m)
    for name, want in [("sub_ms", 68), ("sub_mc", 25), ("sub_sc", 39),
                       ("sub_msc", 25)]:
        if ev["subsizes"][name] != want:
            bad.append("subgraph %s = %d != %d" % (name, ev["subsizes"][name], want))
    for mi, mk in enumerate(METHOD_KEYS):
        want = {c.idx(tag) for tag, row in PATTERN.items() if row[mi]}
        got = ev["selected"][mk]
        if got != want:
            extra = [c.tags[k] for k in got - want]
            missing = [c.tags[k] for k in want - got]
            bad.append("method %s extra=%s missing=%s" % (mk, extra, missing))
    for key, want in T_TARGETS.items():
        got = ev["thresholds"][key]
        if abs(got - want) > T_TOL_BUILD:
            bad.append("threshold %s = %.4f (want %.2f)" % (key, got, want))
    # boundary slot guards: the planned papers must hold the ranks adjacent
    # to each composite threshold, with clearance on both sides
    for name, (below_tag, above_tag) in BOUNDARY_GUARDS.items():
        short = name.split("_", 1)[1]
        scores = ev["cis"][short]
        mi = METHOD_KEYS.index(name)
        sel = {c.idx(tag) for tag, row in PATTERN.items() if row[mi]}
        non = [k for k in range(N) if k not in sel]
        top_non = max(non, key=lambda k: scores[k])
        low_sel = min(sel, key=lambda k: scores[k])
        if above_tag != c.tags[low_sel]:
            bad.append("guard %s: lowest selected is %s not %s"
                       % (name, c.tags[low_sel], above_tag))
        if below_tag == "*c3*":
            if abs(scores[top_non] - max(
                    scores[k] for k in non)) > 1e-12:
                pass
        elif below_tag != c.tags[top_non]:
            bad.append("guard %s: highest unselected is %s not %s"
                       % (name, c.tags[top_non], below_tag))
        runner = sorted((scores[k] for k in non), reverse=True)[1]
        if scores[top_non] - runner < 0.015 and below_tag != "*c3*":
            bad.append("guard %s: runner-up too close (%.4f vs %.4f)"
                       % (name, scores[top_non], runner))
    # z-quantile boundary guards for Mentions / SocialMedia
    for cat, below_tag, above_tags in [
            ("Mentions", "J1", ("N3",)),
            ("SocialMedia", "Bs", ("Xs", "N3", "N2"))]:
        vals = ev["z"][cat]
        order = sorted(range(N), key=lambda k: vals[k])
        below, above = order[-12], order[-11]
        if c.tags[below] != below_tag:
            bad.append("boundary %s: rank-12 is %s not %s"
                       % (cat, c.tags[below], below_tag))
        if c.tags[above] not in above_tags:
            bad.append("boundary %s: rank-11 is %s not in %s"
                       % (cat, c.tags[above], above_tags))
        runner = vals[order[-13]]
        if vals[below] - runner < 0.02:
            bad.append("boundary %s: rank-13 too close" % cat)
    return bad


def r_cost(ev):
    cost = 0.0
    for key, want in R_TARGETS.items():
        d = abs(ev["r"][key] - want)
        excess = max(0.0, d - 0.006)
        cost += excess * excess
    return cost


def r_report(ev):
    lines = []
    for key, want in sorted(R_TARGETS.items(), key=str):
        got = ev["r"][key]
        flag = "" if abs(got - want) <= R_TOL_BUILD else "  <-- off"
        lines.append("  %-42s want %.2f got %.4f%s" % (str(key), want, got, flag))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# construction


def build_roster(c):
    tags = list(SPECIALS)
    plan = [
        ("Xs", "ms", 1),       # top-11 social filler (selected by no method)
        ("Ym", "ms", 1),       # top-11 mentions filler
        ("Ba", "ms", 1),       # composite A' boundary paper
        ("Bs", "s", 1),        # social z boundary paper
        ("ms", "ms", 35),      # mentions+social background
        ("cms", "cms", 17),    # citations+mentions+social background
        ("cs", "cs", 11),      # citations+social background
        ("s_low", "s", 46),    # tweet low band
        ("s_band", "s", 5),    # tweets+facebook, totals 30..36
        ("s_mid", "s", 23),    # mid social-only (s_mid00 is tw=30/fb=7)
        ("m_only", "m", 12),   # mentions only
        ("cap", "cap", 5),     # captures only
        ("c_only", "c", 1),    # citations only
        ("empty", "none", 37), # no indicators at all
    ]
    for stem, klass, count in plan:
        for i in range(count):
            tags.append(stem if count == 1 else "%s%02d" % (stem, i))
    assert len(tags) == N, len(tags)
    c.tags = tags
    c.role = {tag: i for i, tag in enumerate(tags)}
    for stem, klass, count in plan:
        for i in range(count):
            tag = stem if count == 1 else "%s%02d" % (stem, i)
            c.klass[c.role[tag]] = klass
    for tag in SPECIALS:
        c.klass[c.role[tag]] = "special"


def assign_citations(c):
    spec = {"L1": 82, "L3": 26, "L4": 24, "N2": 23, "J1": 22, "I2": 18,
            "M1": 18, "M2": 17, "N3": 16, "I1": 14, "L2": 4}
    for tag, v in spec.items():
        c.set_val(tag, "cit", v)
    bg = [3] * 25 + [2] * 3 + [1]
    holders = (["cms%02d" % i for i in range(17)]
               + ["cs%02d" % i for i in range(11)] + ["c_only"])
    assert len(holders) == len(bg)
    for tag, v in zip(holders, bg):
        c.set_val(tag, "cit", v)
    assert sum(c.values["cit"]) == SUMS["cit"]


# blog components for specials; news supplies the rest of each M total
SPECIAL_BLOG = {
    "N2": 22, "L1": 22, "N4": 10, "N1": 15, "L3": 10, "L4": 8, "J2": 8,
    "M3": 6, "Ym": 5, "L5": 6, "N3": 9, "J1": 7, "Ba": 6, "Xs": 8,
}
# knob table: searchable structural parameters for the engineered papers.
# "fb_max_holder" names the paper carrying the maximum facebook value; the
# M_* knobs are mention totals, S_* social totals for non-dial papers,
# tw_* the fixed tweet component under each paper's social total, off_*
# the mention-tier offsets above the rank-12 value, and dial_* the
# composite-score placements used by the threshold tuner.
DEFAULT_KNOBS = {
    "fb_max_holder": "L3",
    "M_L1": 253, "M_N1": 125,
    "S_L1": 18000, "S_N1": 19500, "S_N2": 6050, "S_M3": 17900,
    "tw_L1": 9000, "tw_N2": 4350, "tw_M3": 2600, "tw_L5": 5400,
    "tw_J2": 7000, "tw_J1": 5200, "tw_L4": 3900, "tw_L3": 3900,
    "tw_N3": 4700, "tw_Bs": 4200, "tw_Ba": 2500,
    "off_M3": 10, "off_L5": 16, "off_J2": 30, "off_L4": 34, "off_L3": 36,
    "dial_J1_A": 1.200, "dial_L3_A": 1.180, "dial_J2_I": 1.100,
    "dial_L5_I": 1.130,
    "S_J1": 16100, "C_I1": 14, "dial_N4": 5.0,
    "blg_L1": 22, "blg_L3": 10, "blg_Xs": 8, "blg_Ym": 5,
}
KNOB_BOUNDS = {
    "M_L1": (80, 274), "M_N1": (80, 268),
    "S_L1": (6500, 43000), "S_N1": (15500, 48000), "S_N2": (5900, 31500),
    "S_M3": (8000, 30000), "S_J1": (10000, 17000),
    "C_I1": (9, 14), "dial_N4": (3.8, 5.2),
    "tw_L1": (300, 14000), "tw_N2": (300, 14300), "tw_M3": (300, 14000),
    "tw_L5": (300, 14000), "tw_J2": (300, 14000), "tw_J1": (300, 14000),
    "tw_L4": (300, 14000), "tw_L3": (300, 14000), "tw_N3": (300, 14000),
    "tw_Bs": (300, 5200), "tw_Ba": (300, 5200),
    "off_M3": (8, 68), "off_L5": (8, 68), "off_J2": (8, 68),
    "off_L4": (8, 68), "off_L3": (8, 178),
    "dial_J1_A": (1.170, 1.450), "dial_L3_A": (1.170, 1.450),
    "dial_J2_I": (1.085, 1.400), "dial_L5_I": (1.105, 1.450),
    "blg_L1": (8, 22), "blg_L3": (4, 10), "blg_Xs": (8, 19),
    "blg_Ym": (5, 14),
}
HOLDER_CHOICES = ("L1", "L3", "N1", "M3")
FB_MAX = 33043

STATIC_M = {"N2": 278, "Xs": 20}
BASE_M_OFFSETS = {"J1": 0, "N3": 4, "Ym": 8, "Ba": -6}
TIER_TAGS = ("M3", "L5", "J2", "L4", "L3")


class TuneError(RuntimeError):
    pass


def _offsets(c):
    off = dict(BASE_M_OFFSETS)
    for tag in TIER_TAGS:
        off[tag] = c.knobs["off_" + tag]
    return off


def assign_mentions(c):
    c.set_val("I1", "wik", 4)
    c.set_val("L2", "qa", 3)
    c.set_val("N2", "qa", 1)
    c.set_val("N2", "wik", 2)
    for tag in STATIC_M:
        _set_mentions_total(c, tag, STATIC_M[tag])
    _set_mentions_total(c, "L1", c.knobs["M_L1"])
    _set_mentions_total(c, "N1", c.knobs["M_N1"])
    base = 70
    for tag, off in _offsets(c).items():
        _set_mentions_total(c, tag, base + off)
    _set_mentions_total(c, "N4", 182)

    ms = ["ms%02d" % i for i in range(35)]
    cms = ["cms%02d" % i for i in range(17)]
    m_only = ["m_only%02d" % i for i in range(12)]
    nws_holders = cms + ms[:31] + m_only[:10]             # 58 background
    blg_holders = ms[20:35] + cms[:10] + m_only[10:12] + ms[:2]  # 29 background
    qa_holders = m_only[:3] + ms[31:34]                   # 6 background
    wik_holders = cms[10:14] + ms[34:35] + m_only[3:4]    # 6 background
    assert len(set(nws_holders)) == SUPPORTS["nws"] - 14
    assert len(set(blg_holders)) == SUPPORTS["blg"] - 14
    assert len(set(qa_holders)) == SUPPORTS["qa"] - 2
    assert len(set(wik_holders)) == SUPPORTS["wik"] - 2

    for tag in qa_holders:
        c.values["qa"][c.idx(tag)] += 1
    for tag in wik_holders:
        c.values["wik"][c.idx(tag)] += 1
    assert sum(c.values["qa"]) == SUMS["qa"]
    assert sum(c.values["wik"]) == SUMS["wik"]

    rem_blg = SUMS["blg"] - sum(c.values["blg"])
    k = len(blg_holders)
    vals = _ramp(rem_blg, k, low=1, high=8)
    for tag, v in zip(blg_holders, vals):
        c.values["blg"][c.idx(tag)] += v
    assert sum(c.values["blg"]) == SUMS["blg"]

    rem_nws = SUMS["nws"] - sum(c.values["nws"])
    vals = _ramp(rem_nws, len(nws_holders), low=1, high=45)
    for tag, v in zip(nws_holders, vals):
        c.values["nws"][c.idx(tag)] += v
    assert sum(c.values["nws"]) == SUMS["nws"]


def _ramp(total, k, low, high):
    """k integers in [low, high] with an exact sum, skewed descending."""
    assert low * k <= total <= high * k, (total, k, low, high)
    vals = [low] * k
    pool = total - low * k
    i = 0
    while pool > 0:
        add = min(high - vals[i % k], pool, max(1, (high - low) // 2))
        vals[i % k] += add
        pool -= add
        i += 1
    return sorted(vals, reverse=True)


def _set_mentions_total(c, tag, total):
    """Set a special's mention total by adjusting its news component."""
    k = c.idx(tag)
    blg = c.knobs.get("blg_" + tag, SPECIAL_BLOG.get(tag, 0))
    c.values["blg"][k] = blg
    other = c.values["qa"][k] + c.values["wik"][k]
    nws = total - blg - other
    if not 0 <= nws <= MAXES["nws"]:
        raise TuneError("mention total out of range: %s -> nws %d" % (tag, nws))
    c.values["nws"][k] = nws


def assign_captures(c):
    c.set_val("I1", "rdr", 161)
    c.set_val("M1", "rdr", 59)
    holders = (["cap%02d" % i for i in range(5)]
               + ["s_mid%02d" % i for i in range(1, 4)]
               + ["m_only%02d" % i for i in range(3)])
    vals = [22, 19, 17, 15, 14, 12, 11, 10, 8, 6, 4]
    assert len(vals) == len(holders)
    for tag, v in zip(holders, vals):
        c.set_val(tag, "rdr", v)
    _repair_sum(c, "rdr", CAP_POOL)


def assign_usage(c):
    c.set_val("I1", "use", 15)


# fixed tweet components: dial and knob solves adjust facebook on top.
# A sentinel marks tweet-only papers whose facebook must stay zero.
TW_ONLY = 10 ** 9
STATIC_TW = {
    "N1": 14409, "Xs": 5750, "N4": 650, "Ym": TW_ONLY, "M1": TW_ONLY,
    "M2": TW_ONLY, "I2": TW_ONLY, "L2": TW_ONLY, "I1": TW_ONLY,
}
STATIC_S = {"Xs": 5750, "Ym": 700, "M1": 100, "M2": 80, "I2": 50,
            "L2": 45, "N4": 1050}


def _tw_of(c, tag):
    if tag in STATIC_TW:
        return STATIC_TW[tag]
    return c.knobs["tw_" + tag]


def assign_social(c):
    for tag, s_total in STATIC_S.items():
        _set_social_total(c, tag, s_total)
    apply_social_knobs(c)
    for tag, guess in [("J2", 15000), ("J1", 14150), ("L4", 9200),
                       ("L3", 9950), ("N3", 5713), ("I1", 2762),
                       ("Ba", 3710), ("Bs", 5251), ("L5", 16550)]:
        if tag != c.knobs["fb_max_holder"]:
            _set_social_total(c, tag, guess)

    low = ["s_low%02d" % i for i in range(46)]
    low_vals = [29, 28, 26, 25, 24, 22, 21, 20, 19, 18, 17, 16, 15, 14, 13,
                12, 11, 10, 9, 8, 7, 6, 5, 4, 3, 2, 1, 1, 2, 3, 4, 5, 6, 7,
                8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19]
    for tag, v in zip(low, low_vals):
        c.set_val(tag, "tw", v)
    band = ["s_band%02d" % i for i in range(5)]
    for tag, (t, f) in zip(band, [(25, 11), (22, 10), (20, 13), (21, 10),
                                  (20, 10)]):
        c.set_val(tag, "tw", t)
        c.set_val(tag, "fb", f)
    c.set_val("s_mid00", "tw", 30)
    c.set_val("s_mid00", "fb", 7)

    holders = (["s_mid%02d" % i for i in range(1, 23)]
               + ["ms%02d" % i for i in range(35)]
               + ["cms%02d" % i for i in range(17)]
               + ["cs%02d" % i for i in range(11)])
    rem_tw = SUMS["tw"] - sum(c.values["tw"])
    k = len(holders)
    base = [38] * k
    pool = rem_tw - 38 * k
    assert pool >= 0, pool
    ramp = [2600, 2200, 1900, 1700, 1500, 1300, 1200, 1000, 900, 800, 700,
            650, 600, 550, 500, 450, 400, 380, 350, 320, 300, 280, 260, 240,
            220, 200, 180, 160, 150, 140, 130, 120, 110, 100]
    gi = 0
    for i in range(k):
        if pool <= 0:
            break
        add = min(ramp[gi] if gi < len(ramp) else 25, pool)
        base[i] += add
        pool -= add
        gi += 1
    base[-1] += pool
    for tag, v in zip(holders, base):
        c.set_val(tag, "tw", v)

    fb_holders = (["ms%02d" % i for i in range(24)]
                  + ["cms%02d" % i for i in range(12)]
                  + ["cs%02d" % i for i in range(8)]
                  + ["s_mid%02d" % i for i in range(1, 5)])
    rem_fb = SUMS["fb"] - sum(c.values["fb"])
    fb_vals = _ramp(rem_fb, len(fb_holders), low=20, high=1500)
    for tag, v in zip(fb_holders, fb_vals):
        c.set_val(tag, "fb", v)
    assert sum(c.values["tw"]) == SUMS["tw"]
    assert sum(c.values["fb"]) == SUMS["fb"]


def apply_social_knobs(c):
    """Apply the social-total knobs and pin the facebook maximum."""
    holder = c.knobs["fb_max_holder"]
    for tag in ("L1", "N1", "N2", "M3", "J1"):
        if tag != holder:
            _set_social_total(c, tag, c.knobs["S_" + tag])
    if holder == "N1":
        _set_social_total(c, holder, FB_MAX + STATIC_TW["N1"])
    else:
        _set_social_total(c, holder, FB_MAX + _tw_of(c, holder))


def _set_social_total(c, tag, total):
    """Set a special's social total, keeping its tweet component fixed."""
    k = c.idx(tag)
    twv = _tw_of(c, tag)
    fb = total - twv
    if fb < 0:
        twv, fb = total, 0
    c.values["tw"][k] = twv
    c.values["fb"][k] = fb


# slack pools: background rows that absorb sum drift during tuning
NWS_POOL = [("cms%02d" % i) for i in range(17)] + [("ms%02d" % i) for i in range(20)]
TW_POOL = ["s_mid%02d" % i for i in range(4, 23)] + ["ms%02d" % i for i in range(25, 35)]
FB_POOL = (["ms%02d" % i for i in range(24)]
           + ["cms%02d" % i for i in range(12)]
           + ["empty26", "ms32", "empty13", "m_only03", "m_only10",
              "cs02", "cms14", "empty32", "ms24"])
CAP_POOL = (["cap%02d" % i for i in range(5)]
            + ["s_mid%02d" % i for i in range(1, 4)]
            + ["m_only%02d" % i for i in range(3)])
BLG_POOL = ["cms13", "s_mid14", "cs07", "s_mid17", "m_only05", "m_only07",
            "cms00", "cms01", "cs01", "cs06", "cs09", "empty03", "empty04",
            "empty08", "empty18", "empty21", "empty24", "empty34",
            "m_only00", "m_only10", "ms05", "ms07", "ms13", "ms27", "ms34",
            "s_mid04", "s_mid06", "s_mid08", "s_mid11"]
POOL_BOUNDS = {"nws": (1, 45), "tw": (38, 3400), "fb": (40, 1600),
               "rdr": (1, 45), "blg": (1, 9)}


def _repair_sum(c, metric, pool):
    """Restore the column sum using the slack pool.

    Always moves mass on the largest eligible pool row: rows resting at the
    floor stay pinned (they anchor the median region) and zero rows are never
    promoted, so the support count cannot drift.
    """
    delta = SUMS[metric] - sum(c.values[metric])
    lo, hi = POOL_BOUNDS[metric]
    col = c.values[metric]
    guard = 0
    while delta != 0:
        if delta > 0:
            cand = [c.idx(t) for t in pool if 0 < col[c.idx(t)] < hi]
        else:
            cand = [c.idx(t) for t in pool if col[c.idx(t)] > lo]
        if not cand:
            raise TuneError("sum repair stuck: %s delta=%d" % (metric, delta))
        k = max(cand, key=lambda j: col[j])
        if delta > 0:
            add = min(hi - col[k], delta)
            col[k] += add
            delta -= add
        else:
            take = min(col[k] - lo, -delta)
            col[k] -= take
            delta += take
        guard += 1
        if guard > 10000:
            raise TuneError("sum repair stuck: %s delta=%d" % (metric, delta))


# ---------------------------------------------------------------------------
# fixed-point tuning


def _stats(col):
    mu = sum(col) / len(col)
    return mu, oracle.pstdev(col)


def tune_mentions(c):
    """Place the rank-11/12 mention totals so the z quantile lands on 1.75.

    The rank-12 value (J1) moves on an integer grid whose z step exceeds the
    tolerance band, so after placing the boundary pair the large N4 total is
    adjusted to trim the population sigma onto the exact target.
    """
    target = T_TARGETS["z_Mentions"]
    offsets = _offsets(c)
    for _ in range(40):
        mu, sd = _stats(_mention_totals(c))
        base = int(round(mu + target * sd - 0.45 * 4))  # rank-12, gap of 4
        for tag, off in offsets.items():
            _set_mentions_total(c, tag, base + off)
        _set_mentions_total(c, "N4", int(round(mu + c.knobs["dial_N4"] * sd)))
        _repair_sum(c, "blg", BLG_POOL)
        _repair_sum(c, "nws", NWS_POOL)
        mu, sd = _stats(_mention_totals(c))
        err = (base + 1.8 - mu) / sd - target
        if abs(err) <= 0.0025:
            return
        # integer placement alone is too coarse: shape the background news
        # spread (sum-preserving) until the sigma matches the boundary
        sd_want = (base + 1.8 - mu) / target
        _trim_sumsq(c, "nws", NWS_POOL, 212.0 * (sd_want * sd_want + mu * mu)
                    - _sumsq_outside(c, NWS_POOL), 1, 45)
    raise TuneError("mentions boundary did not converge")


def _sumsq_outside(c, pool):
    """Sum of squared mention totals for rows outside the given pool."""
    pool_idx = {c.idx(tag) for tag in pool}
    return sum(v * v for k, v in enumerate(_mention_totals(c))
               if k not in pool_idx)


def _trim_sumsq(c, metric, pool, want_pool_sumsq, lo, hi):
    """Transfer units inside the pool to steer its mention-total sum of
    squares toward the target without changing the pool sum."""
    idx = [c.idx(tag) for tag in pool]
    totals = _mention_totals(c)
    col = c.values[metric]
    for _ in range(4000):
        cur = sum(totals[k] * totals[k] for k in idx)
        diff = want_pool_sumsq - cur
        if abs(diff) < 2 * (hi - lo):
            return
        order = sorted(idx, key=lambda k: totals[k])
        if diff > 0:
            a, b = order[0], order[-1]          # spread apart
            if col[a] <= lo or col[b] >= hi:
                inner = [k for k in order if lo < col[k]]
                outer = [k for k in order if col[k] < hi]
                if not inner or not outer or inner[-1] == outer[0]:
                    return
                a, b = inner[0], outer[-1]
                if a == b or col[a] <= lo or col[b] >= hi:
                    return
        else:
            a = order[-1]                       # squeeze together
            takers = [k for k in order if col[k] >= max(lo, 1) and col[k] < hi]
            if not takers:
                return
            b = takers[0]
            if col[a] <= lo or totals[a] <= totals[b]:
                return
        col[a] -= 1
        col[b] += 1
        totals[a] -= 1
        totals[b] += 1


def _mention_totals(c):
    cols = [c.values[m] for m in ("blg", "nws", "qa", "wik")]
    return [sum(vals) for vals in zip(*cols)]


def _social_totals(c):
    return [f + t for f, t in zip(c.values["fb"], c.values["tw"])]


def tune_social_boundary(c):
    """Solve the rank-12 social total (Bs) so the z quantile lands on 1.11."""
    for _ in range(4):
        col = _social_totals(c)
        mu, sd = _stats(col)
        want_raw = mu + T_TARGETS["z_SocialMedia"] * sd
        sel = ["L1", "N1", "M3", "L5", "J2", "J1", "L4", "L3", "N3", "N2", "Xs"]
        s201 = min(c.social(tag) for tag in sel)
        bs = int(round((want_raw - 0.45 * s201) / 0.55))
        if not bs < s201 - 60:
            raise TuneError("social boundary infeasible: bs=%d s201=%d"
                            % (bs, s201))
        _set_social_total(c, "Bs", bs)
        _repair_sum(c, "tw", TW_POOL)
        _repair_sum(c, "fb", FB_POOL)


def _zmaps(c):
    cats = {cat: c.category_vector(cat) for cat in oracle.CATEGORIES}
    stats = {cat: _stats(cats[cat]) for cat in cats}
    return cats, stats


def _cis_of(c, stats, tag, members):
    total = 0.0
    for cat in members:
        mu, sd = stats[cat]
        val = {"Citations": c.get(tag, "cit"),
               "Captures": c.get(tag, "rdr"),
               "Mentions": c.mentions(tag),
               "SocialMedia": c.social(tag),
               "Usage": c.get(tag, "use")}[cat]
        total += (val - mu) / sd
    return total / len(members)


def _solve_social_for(c, stats, tag, members, target):
    """Social total giving this paper the target composite score."""
    mu_s, sd_s = stats["SocialMedia"]
    partial = 0.0
    for cat in members:
        if cat == "SocialMedia":
            continue
        mu, sd = stats[cat]
        val = {"Citations": c.get(tag, "cit"),
               "Captures": c.get(tag, "rdr"),
               "Mentions": c.mentions(tag),
               "Usage": c.get(tag, "use")}[cat]
        partial += (val - mu) / sd
    need_z = target * len(members) - partial
    return int(round(mu_s + need_z * sd_s))


def tune_cis_dials(c):
    """Solve dial papers' values so composite thresholds land on target."""
    A = CIS_SETS["A"]
    I = CIS_SETS["I"]
    IP = CIS_SETS["Iprime"]
    AP = CIS_SETS["Aprime"]
    holder = c.knobs["fb_max_holder"]
    for _ in range(4):
        cats, stats = _zmaps(c)
        # upper selected papers with clearance above their thresholds
        _set_social_total(c, "J2", _solve_social_for(
            c, stats, "J2", I, c.knobs["dial_J2_I"]))
        _set_social_total(c, "L5", _solve_social_for(
            c, stats, "L5", I, c.knobs["dial_L5_I"]))
        _set_social_total(c, "J1", _solve_social_for(
            c, stats, "J1", A, c.knobs["dial_J1_A"]))
        if holder != "L3":
            _set_social_total(c, "L3", _solve_social_for(
                c, stats, "L3", A, c.knobs["dial_L3_A"]))
        cats, stats = _zmaps(c)
        # rank-12 of A: M1 via its readers count (integer grid), near 1.03
        best = None
        for rdr in range(40, 80):
            old = c.get("M1", "rdr")
            c.set_val("M1", "rdr", rdr)
            mu2, sd2 = _stats(c.category_vector("Captures"))
            tmp_stats = dict(stats)
            tmp_stats["Captures"] = (mu2, sd2)
            a_val = _cis_of(c, tmp_stats, "M1", A)
            i_val = _cis_of(c, tmp_stats, "M1", I)
            c.set_val("M1", "rdr", old)
            if i_val < 1.065 or a_val > 1.052:
                continue
            d = abs(a_val - 1.030)
            if best is None or d < best[0]:
                best = (d, rdr, a_val)
        if best is None:
            raise TuneError("no feasible readers count for the A dial")
        c.set_val("M1", "rdr", best[1])
        _repair_sum(c, "rdr", CAP_POOL)
        cats, stats = _zmaps(c)
        m1_a = _cis_of(c, stats, "M1", A)
        # rank-11 of A: L4 solves the threshold equation exactly
        l4_target = (T_TARGETS["cis_A"] - 0.55 * m1_a) / 0.45
        _set_social_total(c, "L4", _solve_social_for(c, stats, "L4", A, l4_target))
        cats, stats = _zmaps(c)
        # rank-12 of I: N3 solves against J2's realized score
        j2_i = _cis_of(c, stats, "J2", I)
        n3_target = (T_TARGETS["cis_I"] - 0.45 * j2_i) / 0.55
        _set_social_total(c, "N3", _solve_social_for(c, stats, "N3", I, n3_target))
        cats, stats = _zmaps(c)
        # rank-12 of I': I1 solves against N4's realized score
        n4_ip = _cis_of(c, stats, "N4", IP)
        i1_target = (T_TARGETS["cis_Iprime"] - 0.45 * n4_ip) / 0.55
        _set_social_total(c, "I1", _solve_social_for(c, stats, "I1", IP, i1_target))
        cats, stats = _zmaps(c)
        # rank-12 of A': Ba solves against the lowest selected A' score
        ap_sel = min(_cis_of(c, stats, tag, AP)
                     for tag, row in PATTERN.items() if row[4])
        ba_target = (T_TARGETS["cis_Aprime"] - 0.45 * ap_sel) / 0.55
        _set_social_total(c, "Ba", _solve_social_for(c, stats, "Ba", AP, ba_target))
        _repair_sum(c, "tw", TW_POOL)
        _repair_sum(c, "fb", FB_POOL)


def tune(c, verbose=False):
    for outer in range(10):
        tune_mentions(c)
        tune_social_boundary(c)
        tune_cis_dials(c)
        ev = evaluate(c)
        bad = hard_violations(c, ev)
        if not bad:
            if verbose:
                print("tuning converged after %d passes" % (outer + 1))
            return ev
    if verbose:
        print("tuning did not fully converge; remaining violations:")
        for b in bad:
            print("  -", b)
    raise TuneError("tuning failed: %s" % "; ".join(bad[:4]))


# ---------------------------------------------------------------------------
# correlation optimizer


# per-metric bounds for background transfer moves; a destination row's
# social total also stays below the z boundary region
BG_MOVE_BOUNDS = {"tw": (38, 4500), "fb": (1, 4500), "nws": (1, 45),
                  "blg": (1, 8)}


def _snapshot(c):
    return ({m: list(col) for m, col in c.values.items()}, dict(c.knobs))


def _restore(c, snap):
    vals, knobs = snap
    for m in METRICS:
        c.values[m][:] = vals[m]
    c.knobs.clear()
    c.knobs.update(knobs)


def _bg_move(c, rng, movable):
    """Mutate background rows; return False if no move was made."""
    m = rng.choice(["tw", "fb", "nws", "blg", "cit", "rdr", "tw", "fb"])
    col = c.values[m]
    a, b = rng.sample(movable, 2)
    if m in ("cit", "rdr"):
        if col[a] == col[b] or (col[a] == 0) != (col[b] == 0):
            return False
        col[a], col[b] = col[b], col[a]
        return True
    lo, hi = BG_MOVE_BOUNDS[m]
    if col[a] <= lo or col[b] < lo:
        return False
    delta = rng.choice([1, 2, 3, 5, 8, 13, 21, 40, 70, 120, 250])
    delta = min(delta, col[a] - lo, hi - col[b])
    if delta <= 0:
        return False
    if m in ("tw", "fb"):
        s_b = c.values["tw"][b] + c.values["fb"][b] + delta
        if s_b > 4800:
            return False
    col[a] -= delta
    col[b] += delta
    return True


SWAP_CHOICES = ["nws", "tw", "fb", "blg", "cit", "nws", "tw", "cit",
                "fb", "nws"]


def _swap_move(c, rng, movable):
    """Exchange two rows' values in one metric.

    A swap keeps every per-metric marginal (sum, support count, value
    multiset, and hence all quantile slots) exactly intact; only the
    cross-metric alignment and, for zero swaps, the joint-support classes
    can change. Zero swaps are proposed rarely because most violate the
    subgraph size guards downstream.
    """
    m = rng.choice(SWAP_CHOICES)
    col = c.values[m]
    a, b = rng.sample(movable, 2)
    if col[a] == col[b]:
        return False
    if ((col[a] == 0) != (col[b] == 0)) and rng.random() < 0.8:
        return False
    if m in ("tw", "fb"):
        sa = c.values["tw"][a] + c.values["fb"][a] - col[a] + col[b]
        sb = c.values["tw"][b] + c.values["fb"][b] - col[b] + col[a]
        if max(sa, sb) > 4800:
            return False
    col[a], col[b] = col[b], col[a]
    return True


def _knob_move(c, rng):
    name = rng.choice([k for k in c.knobs if k != "fb_max_holder"])
    lo, hi = KNOB_BOUNDS[name]
    cur = c.knobs[name]
    if name == "dial_N4":
        step = rng.choice([0.05, 0.1, 0.2, 0.4])
    elif name.startswith("dial_"):
        step = rng.choice([0.005, 0.01, 0.02, 0.04])
    elif name == "C_I1":
        step = rng.choice([1, 2])
    elif name.startswith("off_"):
        step = rng.choice([2, 4, 8, 16, 32])
    elif name.startswith("blg_"):
        step = rng.choice([1, 2])
    elif name.startswith("M_"):
        step = rng.choice([4, 8, 16, 32])
    else:
        step = rng.choice([80, 200, 500, 1200, 2500])
    nxt = cur + (step if rng.random() < 0.5 else -step)
    nxt = max(lo, min(hi, nxt))
    if nxt == cur:
        return False
    c.knobs[name] = nxt
    return True


def optimize(c, rng, rounds):
    snap0 = _snapshot(c)
    try:
        apply_knobs(c)
        ev = tune(c)
    except TuneError as exc:
        # a converged state can oscillate one rounding unit when re-tuned;
        # fall back to scoring it untouched
        print("initial tune skipped (%s); evaluating state as loaded" % exc)
        _restore(c, snap0)
        ev = evaluate(c)
        if hard_violations(c, ev):
            raise
    cost = r_cost(ev)
    print("initial correlation cost %.6f" % cost)
    print(r_report(ev))
    unlocked = {c.idx(tag) for tag in UNLOCKED_SPECIALS}
    movable = [k for k in range(N)
               if (k not in c.frozen and c.klass[k] != "special")
               or k in unlocked]
    accepted = tried = 0
    snap = _snapshot(c)
    best_snap, best_cost = snap, cost
    t_hot = float(os.environ.get("CORPUS_T_HOT", "3e-4"))
    t_cold = float(os.environ.get("CORPUS_T_COLD", "2e-6"))
    for step in range(rounds):
        if best_cost <= 1e-9:
            break
        temp = t_hot * (t_cold / t_hot) ** (step / max(1, rounds - 1))
        if step % 2000 == 1999:
            print("  step %d: cost %.6f best %.6f temp %.2e "
                  "(%d accepted / %d tried)"
                  % (step + 1, cost, best_cost, temp, accepted, tried))
        kind = rng.random()
        needs_tune = False
        if kind < 0.33:
            moved = _bg_move(c, rng, movable)
        elif kind < 0.83:
            moved = _swap_move(c, rng, movable)
        elif kind < 0.98:
            moved = _knob_move(c, rng)
            needs_tune = True
        else:
            choices = [h for h in HOLDER_CHOICES
                       if h != c.knobs["fb_max_holder"]]
            c.knobs["fb_max_holder"] = rng.choice(choices)
            moved = True
            needs_tune = True
        if not moved:
            continue
        tried += 1
        try:
            # value moves leave every knob-derived figure in place, so the
            # guard suite alone decides their feasibility; knob moves must
            # re-derive the named-row structure first
            if needs_tune:
                apply_knobs(c)
                ev2 = tune(c)
            else:
                ev2 = evaluate(c)
        except TuneError:
            _restore(c, snap)
            continue
        if hard_violations(c, ev2):
            _restore(c, snap)
            continue
        cost2 = r_cost(ev2)
        take = cost2 <= cost + 1e-12
        if not take and temp > 0:
            take = rng.random() < math.exp(-(cost2 - cost) / temp)
        if take:
            cost = cost2
            accepted += 1
            snap = _snapshot(c)
            if cost < best_cost:
                best_cost = cost
                best_snap = snap
        else:
            _restore(c, snap)
    _restore(c, best_snap)
    ev = evaluate(c)
    print("after optimize: cost %.6f, %d moves accepted, knobs:"
          % (best_cost, accepted))
    print("  " + ", ".join("%s=%s" % kv for kv in sorted(c.knobs.items())))
    print(r_report(ev))
    return ev


def apply_knobs(c):
    """Re-apply all knob-driven structural values."""
    ci1 = c.knobs["C_I1"]
    c.values["cit"][c.idx("I1")] = ci1
    c.values["cit"][c.idx("L4")] = 24 + (14 - ci1)
    for tag, total in STATIC_M.items():
        _set_mentions_total(c, tag, total)
    _set_mentions_total(c, "L1", c.knobs["M_L1"])
    _set_mentions_total(c, "N1", c.knobs["M_N1"])
    _repair_sum(c, "blg", BLG_POOL)
    _repair_sum(c, "nws", NWS_POOL)
    apply_social_knobs(c)
    _repair_sum(c, "tw", TW_POOL)
    _repair_sum(c, "fb", FB_POOL)


UNLOCKED_SPECIALS = ("M1", "M2", "I2")


def freeze_roles(c):
    for tag in list(SPECIALS) + ["Xs", "Ym", "Ba", "Bs", "s_mid00"]:
        if tag in UNLOCKED_SPECIALS:
            continue
        c.frozen.add(c.idx(tag))
    for i in range(46):
        c.frozen.add(c.idx("s_low%02d" % i))
    for i in range(5):
        c.frozen.add(c.idx("s_band%02d" % i))


# ---------------------------------------------------------------------------
# emission

TITLE_HEADS = [
    "Clinical features of", "Early transmission dynamics of",
    "Genomic characterisation of", "Epidemiological analysis of",
    "A familial cluster of", "Estimating the reproduction number of",
    "Imported cases of", "Modelling the spread of",
    "Diagnostic performance for", "Radiological findings in",
    "Therapeutic options for", "Public health response to",
]
TITLE_TAILS = [
    "novel coronavirus pneumonia in Wuhan", "the 2019-nCoV outbreak in Hubei",
    "SARS-CoV-2 infection in returning travellers",
    "coronavirus disease in mainland China",
    "the novel coronavirus epidemic", "2019-nCoV in household contacts",
    "COVID-19 in hospitalised patients",
    "the coronavirus outbreak aboard repatriation flights",
]
SURNAMES = ["Chen", "Li", "Wang", "Zhang", "Liu", "Huang", "Guan", "Zhou",
            "Xu", "Rossi", "Bianchi", "Smith", "Johnson", "Kim", "Sato",
            "Tanaka", "Silva", "Muller", "Dubois", "Novak"]
INITIALS = ["J", "W", "Y", "L", "H", "X", "M", "A", "R", "S", "T", "K"]
BG_JOURNALS = [
    "J Clin Virol", "Emerg Microbes Infect", "Eurosurveillance", "J Travel Med",
    "Int J Epidemiol", "Clin Infect Dis", "J Hosp Infect", "Virol Sin",
    "BMC Infect Dis", "Epidemiol Infect", "J Infect Public Health",
    "Travel Med Infect Dis",
]

METRIC_FIELD = {
    "cit": ("Citations", "Citation Count", "Scopus"),
    "rdr": ("Captures", "Readers", "Mendeley"),
    "blg": ("Mentions", "Blog Mentions", "Blog"),
    "nws": ("Mentions", "News Mentions", "News"),
    "qa": ("Mentions", "Q&A Site Mentions", "Stack Exchange"),
    "wik": ("Mentions", "References", "Wikipedia"),
    "fb": ("SocialMedia", "Shares, Likes & Comments", "Facebook"),
    "tw": ("SocialMedia", "Tweets", "Twitter"),
    "use": ("Usage", "Abstract Views", "Digital Commons"),
}

CONSENSUS_CHECKED = {
    "L3": 22, "L4": 21, "N4": 21, "I2": 20, "L5": 20,
    "L1": 20, "N2": 18, "J1": 18, "N3": 17, "N1": 16, "J2": 15,
    "M3": 15, "I1": 14, "M1": 13, "M2": 12, "L2": 11,
}


STATE_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                          "corpus_state.json")


def dump_state(c, path=STATE_PATH):
    """Persist metric values and knobs so emit can rerun without search."""
    doc = {"knobs": c.knobs,
           "values": {m: list(c.values[m]) for m in METRICS}}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_state(c, path=STATE_PATH):
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    c.knobs = dict(DEFAULT_KNOBS)
    c.knobs.update(doc["knobs"])
    for m in METRICS:
        vals = doc["values"][m]
        assert len(vals) == N, (m, len(vals))
        c.values[m] = [int(v) for v in vals]


def emit(c, rng=None):
    rng = random.Random(7071)
    os.makedirs(DATA_DIR, exist_ok=True)
    dois, journals = {}, {}
    for tag, (doi, journal) in SPECIALS.items():
        dois[tag] = doi
        journals[tag] = journal
    serial = 0
    for tag in c.tags:
        if tag in dois:
            continue
        serial += 1
        journal = BG_JOURNALS[serial % len(BG_JOURNALS)]
        slug = journal.lower().replace(" ", "")[:6]
        dois[tag] = "10.5555/%s.2020.%04d" % (slug, serial)
        journals[tag] = journal

    def title_for(k):
        return "%s %s (cohort %d)" % (TITLE_HEADS[k % len(TITLE_HEADS)],
                                      TITLE_TAILS[(k * 7 + 3) % len(TITLE_TAILS)],
                                      k + 1)

    def authors_for(k):
        n_auth = 2 + (k * 5) % 5
        return "; ".join(
            "%s %s" % (SURNAMES[(k * 3 + j * 11) % len(SURNAMES)],
                       INITIALS[(k + j) % len(INITIALS)])
            for j in range(n_auth))

    def date_for(k):
        day = max((k * 17 + 11) % 41, k % 29)
        return ("2020-01-%02d" % (15 + day)) if day <= 16 else \
               ("2020-02-%02d" % (day - 16))

    rows = []
    for k, tag in enumerate(c.tags):
        doi_cell = dois[tag]
        if tag == "L1":
            doi_cell = "10.1016/s0140-6736(20)30183-x"  # typo; resolver fixes it
        if tag in ("ms00", "cap00"):
            doi_cell = ""
        rows.append({
            "id": "a%03d" % (k + 1),
            "authors": authors_for(k),
            "title": title_for(k),
            "doi": doi_cell,
            "publication_date": date_for(k),
            "journal": journals[tag],
        })

    with open(os.path.join(DATA_DIR, "sample.csv"), "w", newline="",
              encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=["id", "authors", "title", "doi",
                                           "publication_date", "journal"])
        w.writeheader()
        for row in rows:
            w.writerow(row)

    resolver = {}
    for k, tag in enumerate(c.tags):
        first_author = rows[k]["authors"].split(";")[0].strip()
        key = ("%s|%s" % (first_author, rows[k]["title"])).lower()
        resolver[key] = dois[tag].lower()
    with open(os.path.join(DATA_DIR, "resolver.json"), "w", encoding="utf-8") as fh:
        json.dump(resolver, fh, indent=2, sort_keys=True)
        fh.write("\n")

    fixture = {}
    for k, tag in enumerate(c.tags):
        entry = {"citation_count": None, "altmetrics": []}
        if c.values["cit"][k] > 0:
            entry["citation_count"] = c.values["cit"][k]
        for m in ["rdr", "blg", "nws", "qa", "wik", "fb", "tw", "use"]:
            v = c.values[m][k]
            if v > 0:
                cat, metric, source = METRIC_FIELD[m]
                entry["altmetrics"].append({"category": cat, "metric": metric,
                                            "source": source, "value": v})
        fixture[dois[tag].lower()] = entry
    with open(os.path.join(DATA_DIR, "indicators.json"), "w",
              encoding="utf-8") as fh:
        json.dump(fixture, fh, indent=2, sort_keys=True)
        fh.write("\n")

    strobe_rows = []
    for tag, checked in sorted(CONSENSUS_CHECKED.items()):
        doi = dois[tag]
        items = [1] * checked + [0] * (22 - checked)
        rng.shuffle(items)
        flips_a = rng.sample(range(22), rng.choice([0, 1, 2]))
        flips_b = rng.sample(range(22), rng.choice([0, 1, 2, 3]))
        a_items = [1 - v if i in flips_a else v for i, v in enumerate(items)]
        b_items = [1 - v if i in flips_b else v for i, v in enumerate(items)]
        for reviewer, vals in [("expert_a", a_items), ("expert_b", b_items),
                               ("consensus", items)]:
            row = {"doi": doi, "reviewer": reviewer}
            row.update({"item_%d" % (i + 1): v for i, v in enumerate(vals)})
            strobe_rows.append(row)
    fieldnames = ["doi", "reviewer"] + ["item_%d" % i for i in range(1, 23)]
    with open(os.path.join(DATA_DIR, "strobe.csv"), "w", newline="",
              encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=fieldnames)
        w.writeheader()
        for row in strobe_rows:
            w.writerow(row)
    print("emitted sample.csv, resolver.json, indicators.json, strobe.csv in",
          DATA_DIR)


def main():
    rng = random.Random(20200124)
    c = Corpus()
    c.knobs = dict(DEFAULT_KNOBS)
    build_roster(c)
    assign_citations(c)
    assign_mentions(c)
    assign_captures(c)
    assign_usage(c)
    assign_social(c)
    freeze_roles(c)

    state = os.environ.get("CORPUS_STATE", STATE_PATH)
    rounds_env = os.environ.get("CORPUS_OPT_ROUNDS")
    if os.path.exists(state) and rounds_env != "-1":
        print("loading tuned state from", state)
        load_state(c, state)
        rounds = int(rounds_env or "0")
        ev = optimize(c, rng, rounds) if rounds > 0 else evaluate(c)
    else:
        ev = tune(c, verbose=True)
        print("== thresholds after tuning ==")
        for key in sorted(T_TARGETS):
            print("  %-14s want %.2f got %.4f" %
                  (key, T_TARGETS[key], ev["thresholds"][key]))
        print("  subsizes:", ev["subsizes"])
        rounds = int(rounds_env or "60000")
        ev = optimize(c, rng, rounds)

    bad = hard_violations(c, ev)
    if bad:
        for b in bad:
            print("  -", b)
        raise SystemExit(1)
    dump_state(c)
    emit(c)
    off = [str(k) for k, want in R_TARGETS.items()
           if abs(ev["r"][k] - want) > R_TOL_BUILD]
    if off:
        print("correlations still off:", ", ".join(off))
        raise SystemExit(2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
