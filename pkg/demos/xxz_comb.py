"""XXZ chain cut into odd and even sites.

Here ground states on the same side of Δ = 1 never intercept; only pairs
straddling the transition do.  The classifier labels this pattern CaseII
and the closest intercepting pair pins the critical region.
"""

from elocc import classify_pattern, critical_region, interception_table, parse_model, split_index, sweep
from elocc.reduction import comb

N = 10
table = interception_table(sweep(parse_model("xxz"), "delta", (0.4, 1.6, 0.1), N, comb(N)))
print(table.to_csv_text("delta", tenths=True))

split = split_index(table.labels, 1.0)
cls = classify_pattern(table, split)
print("pattern:", cls.pattern.value, cls.crossing_fraction)
print("critical region:", critical_region(table, cls, split))
