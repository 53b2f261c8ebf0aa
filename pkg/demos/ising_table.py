"""Interception table of transverse-field Ising ground states near g = 1.

Neighbouring ground states on the ferromagnetic side have crossing Rényi
curves; on the paramagnetic side they do not.  The table below shows the
smallest crossing α for every pair, rounded up to 0.1.
"""

from elocc import interception_table, parse_model, sweep
from elocc.reduction import half_chain

N = 10
result = sweep(parse_model("ising"), "g", (0.94, 1.04, 0.01), N, half_chain(N))
table = interception_table(result)
print(table.to_csv_text("g", tenths=True))

# full precision is kept internally
print("cell(0.94, 0.95) =", round(table.cell(0.94, 0.95), 4))
for g, p in zip(result.values[::5], result.spectra[::5]):
    print(f"g={g:.2f}  leading Schmidt weights {p.coeffs[:3].round(4)}")
