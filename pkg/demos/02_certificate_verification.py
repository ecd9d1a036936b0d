"""Certificate verification: the bundled 5-coloring of 1..160.

A lower-bound certificate is just a partition of 1..n whose blocks all
pass the sum-free check; verification is a quadratic scan per block, so
even the n = 160 record certificate checks in milliseconds.
"""

import json
import time

from schurlab import certificate_from_dict, data_path, verify_coloring

data = json.loads(data_path("s5_exoo.json").read_text())
coloring, constraint = certificate_from_dict(data)

print(f"certificate: K = {coloring.K}, n = {coloring.n}, rule = {constraint.describe()}")
for k, block in enumerate(coloring.blocks(), start=1):
    print(f"  block {k} ({len(block)} values): {block[:8]} ...")

t0 = time.perf_counter()
report = verify_coloring(coloring, constraint)
dt = (time.perf_counter() - t0) * 1000
print(f"\nsum-free: {report.valid}  (checked in {dt:.1f} ms)")

# tampering is caught with an explicit witness triple
bad = dict(data)
bad["blocks"] = [list(b) for b in data["blocks"]]
bad["blocks"][0].remove(160)
bad["blocks"][4].append(160)
coloring_bad, _ = certificate_from_dict(bad)
report_bad = verify_coloring(coloring_bad, constraint)
print(f"after moving 160 into block 5: valid = {report_bad.valid}")
print(f"first witnesses: {report_bad.violations[:3]}")
