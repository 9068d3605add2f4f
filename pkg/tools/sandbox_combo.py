"""What-if scorer: apply a hand-built edit combo to the saved state."""

import random

import build_corpus as bc


def fresh():
    c = bc.Corpus()
    c.knobs = dict(bc.DEFAULT_KNOBS)
    bc.build_roster(c)
    bc.assign_citations(c)
    bc.assign_mentions(c)
    bc.assign_captures(c)
    bc.assign_usage(c)
    bc.assign_social(c)
    bc.freeze_roles(c)
    bc.load_state(c)
    return c


def report(c, title):
    ev = bc.evaluate(c)
    bad = bc.hard_violations(c, ev)
    print("==", title, "cost %.6f" % bc.r_cost(ev),
          "violations:", len(bad))
    for b in bad[:12]:
        print("   -", b)
    print(bc.r_report(ev))
    return ev, bad


def tw_profile(c, tags):
    for t in tags:
        k = c.idx(t)
        print("  %-8s cit %4d  m %4d  tw %6d fb %6d  s %6d" % (
            t, c.values["cit"][k],
            c.values["nws"][k] + c.values["blg"][k] + c.values["qa"][k]
            + c.values["wik"][k],
            c.values["tw"][k], c.values["fb"][k],
            c.values["tw"][k] + c.values["fb"][k]))


def main():
    c = fresh()
    report(c, "baseline")

    # --- combo A ---
    # 1) social capacity on the three citation-only papers (tw via the
    #    largest pure-social background rows, fb via support migration)
    donors = sorted((k for k in range(bc.N)
                     if c.klass[k] in ("s_low", "s_mid", "social")
                     and c.values["cit"][k] == 0
                     and c.values["nws"][k] + c.values["blg"][k]
                     + c.values["qa"][k] + c.values["wik"][k] == 0),
                    key=lambda k: -c.values["tw"][k])
    print("top tw donors:", [(c.tags[k], c.values["tw"][k])
                             for k in donors[:8]])
    need = 0
    for tag, target in (("M1", 4100), ("M2", 4080), ("I2", 4050)):
        k = c.idx(tag)
        need += target - c.values["tw"][k]
        c.values["tw"][k] = target
    taken = 0
    for k in donors:
        room = c.values["tw"][k] - 200
        step = min(room, need - taken)
        if step <= 0:
            continue
        c.values["tw"][k] -= step
        taken += step
        if taken >= need:
            break
    print("tw moved:", taken, "of", need)

    # fb: zero three small carriers, grant the freed support, fund the mass
    fb_rows = sorted((k for k in range(bc.N)
                      if c.values["fb"][k] > 0 and c.klass[k] != "special"),
                     key=lambda k: c.values["fb"][k])
    freed = 0
    for k in fb_rows[:3]:
        freed += c.values["fb"][k]
        c.values["fb"][k] = 0
    grant = 2600
    need_fb = grant * 3 - freed
    for tag in ("M1", "M2", "I2"):
        c.values["fb"][c.idx(tag)] = grant
    taken = 0
    for k in reversed(fb_rows[3:]):
        room = c.values["fb"][k] - 20
        step = min(room, need_fb - taken)
        if step <= 0:
            continue
        c.values["fb"][k] -= step
        taken += step
        if taken >= need_fb:
            break
    print("fb moved:", taken, "of", need_fb, "freed:", freed)

    # 2) knob package: mention reshaping + social concentration
    c.knobs["off_L3"] = 130
    c.knobs["dial_N4"] = 4.2
    c.knobs["S_J1"] = 11000
    c.knobs["S_N2"] = 30100
    c.knobs["tw_N2"] = 14200

    tw_profile(c, ("M1", "M2", "I2", "J1", "N2", "L3", "L4", "N4"))
    try:
        bc.apply_knobs(c)
        bc.tune(c)
        print("tune converged")
    except bc.TuneError as exc:
        print("TuneError:", exc)
    tw_profile(c, ("M1", "M2", "I2", "J1", "N2", "L3", "L4", "N4"))
    report(c, "combo A")


if __name__ == "__main__":
    main()
