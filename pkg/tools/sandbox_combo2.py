"""What-if scorer, round two: balanced donors and knob package."""

import build_corpus as bc
from sandbox_combo import fresh, report, tw_profile


def show_pools(c):
    fb_pool = [(t, c.values["fb"][c.idx(t)]) for t in bc.FB_POOL]
    print("FB_POOL sum", sum(v for _t, v in fb_pool),
          "min", min(v for _t, v in fb_pool),
          "max", max(v for _t, v in fb_pool))
    rdr_rows = [(c.tags[k], c.values["rdr"][k]) for k in range(bc.N)
                if c.values["rdr"][k] > 0]
    print("rdr rows:", sorted(rdr_rows, key=lambda kv: -kv[1]))


def main():
    c = fresh()
    show_pools(c)

    # 1) move the big reader value off M1 so its composite-score margin
    #    opens up (readers feed no correlation target)
    cap_rows = sorted(((c.values["rdr"][k], k) for k in range(bc.N)
                       if c.values["rdr"][k] > 0
                       and c.klass[k] not in ("special",)
                       and k not in c.frozen),
                      key=lambda vk: vk[0])
    v_small, k_small = cap_rows[0]
    k_m1 = c.idx("M1")
    print("rdr swap: M1(59) <-> %s(%d)" % (c.tags[k_small], v_small))
    c.values["rdr"][k_m1], c.values["rdr"][k_small] = (
        v_small, c.values["rdr"][k_m1])

    # 2) facebook grants on the citation-only papers, support-preserving
    grants = {"M1": 3400, "M2": 3450, "I2": 3420}
    fb_rows = sorted((k for k in range(bc.N)
                      if c.values["fb"][k] > 0 and c.klass[k] != "special"
                      and k not in c.frozen),
                     key=lambda k: c.values["fb"][k])
    freed = 0
    for k in fb_rows[:3]:
        freed += c.values["fb"][k]
        c.values["fb"][k] = 0
    need_fb = sum(grants.values()) - freed
    for tag, grant in grants.items():
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
    print("fb: granted %d, freed %d, pool drained %d (want %d)"
          % (sum(grants.values()), freed, taken, need_fb))

    # 3) tweet bumps funded by the boundary-row split knobs
    tw_bumps = {"M1": 1200, "M2": 1200, "I2": 1200}
    for tag, bump in tw_bumps.items():
        c.values["tw"][c.idx(tag)] += bump
    c.knobs["tw_Bs"] = 300     # frees 1500
    c.knobs["tw_Ba"] = 430     # frees 2110

    # 4) knob package
    c.knobs["S_J1"] = 13500
    c.knobs["S_M3"] = 9800
    c.knobs["S_N2"] = 27500
    c.knobs["off_L3"] = 100
    c.knobs["dial_N4"] = 4.3
    c.knobs["C_I1"] = 12

    try:
        bc.apply_knobs(c)
        bc.tune(c)
        print("tune converged")
    except bc.TuneError as exc:
        print("TuneError:", exc)
    tw_profile(c, ("M1", "M2", "I2", "I1", "J1", "N2", "M3", "L3", "L4",
                   "N4"))
    report(c, "combo B")


if __name__ == "__main__":
    main()
