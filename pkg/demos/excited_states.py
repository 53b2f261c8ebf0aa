"""First excited versus ground state of the Ising chain.

In the paramagnet the excited state's Rényi curve lies above the ground
state's everywhere, so it can be converted to the ground state with a
catalyst; in the ferromagnet the curves cross.
"""

import math

from elocc import parse_model, renyi_entropy, sweep
from elocc.monotones import elocc_verdict
from elocc.reduction import half_chain

res = sweep(parse_model("ising"), "g", (0.5, 1.5, 0.1), 10, half_chain(10), with_excited=True)
for p in res.points:
    if p.degenerate:
        print(f"g={p.value:.1f}  ground level degenerate, skipped")
        continue
    v = elocc_verdict(p.excited, p.schmidt)
    gap = renyi_entropy(p.excited, math.inf) - renyi_entropy(p.schmidt, math.inf)
    crossings = ", ".join(f"{a:.3f}" for a in v.crossings)
    print(f"g={p.value:.1f}  {v.direction.value:<12} S_inf gap {gap:+.3f}  {crossings}")
