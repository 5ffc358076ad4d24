"""
Running the verification harness
================================
"""

import json
from qhat import verify

report = verify()
for entry in report.entries:
    print(f"{entry.check:26s} {entry.status.upper()}")
print(report.failures, "failures")

# the report is deterministic; timings only on request
data = json.loads(report.dumps())
print("fixture hash:", data["fixture_hash"][:16], "seed:", data["seed"])
print("slowest checks:", sorted(report.timings().items(), key=lambda kv: -kv[1])[:3])
