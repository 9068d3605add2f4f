"""Dump the loaded corpus row-by-row for lever planning."""

import build_corpus as bc
from sandbox_combo import fresh


def main():
    c = fresh()
    print("knobs:", {k: c.knobs[k] for k in sorted(c.knobs)})
    print()
    hdr = ("tag", "cls", "frz", "cit", "rdr", "use",
           "blg", "nws", "qa", "wik", "m", "tw", "fb", "s")
    print(("%-9s %-4s %-3s" + " %6s" * 11) % hdr)
    rows = []
    for k in range(bc.N):
        m = sum(c.values[x][k] for x in ("blg", "nws", "qa", "wik"))
        s = c.values["tw"][k] + c.values["fb"][k]
        rows.append((c.tags[k], c.klass[k], "F" if k in c.frozen else "",
                     c.values["cit"][k], c.values["rdr"][k],
                     c.values["use"][k], c.values["blg"][k],
                     c.values["nws"][k], c.values["qa"][k],
                     c.values["wik"][k], m, c.values["tw"][k],
                     c.values["fb"][k], s))
    rows.sort(key=lambda r: -r[-1])
    for r in rows:
        print(("%-9s %-4s %-3s" + " %6d" * 11) % r)


if __name__ == "__main__":
    main()
