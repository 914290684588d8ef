"""Recompute a reference table and inspect its cells.

The same functionality is exposed as ``fccs table T2`` on the command line.
"""
from fccs.tables import TABLES, run_table

for tid, spec in TABLES.items():
    print(f"{tid:>4}{' (expensive)' if spec.expensive else '':13} {spec.caption}")

result = run_table("T2")
for cell in result.cells[:4]:
    print(cell.params, f"{cell.computed:.3g} vs {cell.expected:.3g}", cell.policy, cell.passed)
print("all cells within tolerance:", result.passed)
