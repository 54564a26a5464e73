"""
Dephasing budget of a nitrogen-rich sample
==========================================

Break down 1/T2* by mechanism and see what double-quantum sensing and bath
driving buy back.
"""

import nvsk

sample = nvsk.DiamondSample.build(10.0)
print("derived values:", ", ".join(sample.defaults_used))

for basis, drive in (("SQ", False), ("DQ", False), ("DQ", True)):
    bud = nvsk.total_budget(sample, basis=basis, bath_drive=drive)
    print(f"\n{basis} drive={drive}: T2* = {bud.total_t2star_s * 1e6:.3f} us,"
          f" dominant {bud.dominant}")
    for name, rate in sorted(bud.entries.items(), key=lambda kv: -kv[1]):
        if rate:
            print(f"  {name:>18s} {rate:12.4g} 1/s")

# isotopic purification only pays once nitrogen is low
for c13 in (10700, 1000, 10):
    s = sample.replace(c13_ppm=c13)
    print(f"13C {c13:>6} ppm -> T2* {nvsk.total_budget(s).total_t2star_s * 1e6:.3f} us")
