"""Write reduction and per-iteration objective timings for n = 2, 4, 8 to benchmarks/report.json."""

import os

from cbnorm.bench import benchmark_report

out = os.path.join(os.path.dirname(os.path.abspath(__file__)), "report.json")
rows = benchmark_report((2, 4, 8), iterations=20, path=out)
print(f"{'n':>3} {'p':>4} {'reduction [s]':>14} {'step 4 / it [s]':>16}")
for r in rows:
    print(f"{r['n']:>3} {r['p']:>4} {r['reduction_s']:>14.4g} {r['step4_per_iteration_s']:>16.4g}")
print(f"report written to {out}")
