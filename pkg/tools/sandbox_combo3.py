"""What-if scorer, round three: slot-aware grants with knob-side funding."""

import build_corpus as bc
from sandbox_combo import fresh, report, tw_profile


def zinfo(c):
    import statistics
    out = {}
    for name, col in (("cit", c.values["cit"]),
                      ("rdr", c.values["rdr"]),
                      ("s", [c.values["tw"][k] + c.values["fb"][k]
                             for k in range(bc.N)])):
        mu = sum(col) / bc.N
        sd = (sum(v * v for v in col) / bc.N - mu * mu) ** 0.5
        out[name] = (mu, sd)
    return out


def main():
    c = fresh()

    # knob package first so the repairs see the freed mass
    c.knobs["dial_N4"] = 4.3
    c.knobs["S_J1"] = 13500
    c.knobs["S_M3"] = 10500
    c.knobs["S_N2"] = 26500
    c.knobs["off_L3"] = 100
    c.knobs["C_I1"] = 12
    c.knobs["tw_Bs"] = 300
    c.knobs["tw_Ba"] = 1620

    try:
        bc.apply_knobs(c)
    except bc.TuneError as exc:
        print("apply_knobs failed:", exc)
        return

    stats = zinfo(c)
    print("mu/sd:", {k: (round(v[0], 3), round(v[2 - 2], 3)) if False
                     else (round(v[0], 2), round(v[1], 2))
                     for k, v in stats.items()})

    # grants: social mass on the citation-only papers, with the reader
    # compensation keeping M1 exactly on its composite-score slot
    mu_s, sd_s = stats["s"]
    mu_r, sd_r = stats["rdr"]
    grants = {"M1": (900, 2400), "M2": (900, 3000), "I2": (850, 2400)}
    for tag, (tw_g, fb_g) in grants.items():
        k = c.idx(tag)
        c.values["tw"][k] += tw_g
        c.values["fb"][k] += fb_g

    k_m1 = c.idx("M1")
    s_m1_old = 100
    s_m1_new = c.values["tw"][k_m1] + c.values["fb"][k_m1]
    dz_s = (s_m1_new - s_m1_old) / sd_s
    drop = round(dz_s * sd_r)
    k_cap = c.idx("cap02")
    print("M1 social %d -> %d; dz_s %.3f; rdr 59 -> %d (cap02 %d -> %d)"
          % (s_m1_old, s_m1_new, dz_s, 59 - drop,
             c.values["rdr"][k_cap], c.values["rdr"][k_cap] + drop))
    c.values["rdr"][k_m1] = 59 - drop
    c.values["rdr"][k_cap] += drop

    # rebalance the sums through the slack pools
    try:
        bc._repair_sum(c, "tw", bc.TW_POOL)
        bc._repair_sum(c, "fb", bc.FB_POOL)
    except bc.TuneError as exc:
        print("repair failed:", exc)

    try:
        bc.tune(c)
        print("tune converged")
    except bc.TuneError as exc:
        print("TuneError:", exc)
    tw_profile(c, ("M1", "M2", "I2", "I1", "J1", "N2", "M3", "L3", "L4",
                   "N4", "Bs", "Ba"))
    report(c, "combo C")


if __name__ == "__main__":
    main()
