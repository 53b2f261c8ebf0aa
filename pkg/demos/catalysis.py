"""Two states that LOCC cannot connect, and a catalyst that fixes it."""

import numpy as np

from elocc import (
    elocc_verdict,
    locc_convertible,
    normalize_descending,
    renyi_entropy,
    tensor_product,
    verify_catalyst,
)

psi = normalize_descending([0.4, 0.4, 0.1, 0.1])
psi_p = normalize_descending([0.5, 0.25, 0.25, 0.0])   # the zero weight is dropped

# Majorization fails both ways: the tail sums cross.
print("psi  -> psi' by LOCC:", locc_convertible(psi, psi_p))
print("psi' -> psi  by LOCC:", locc_convertible(psi_p, psi))

# The Rényi curves do not cross, so a shared entangled ancilla can help.
for alpha in (0.0, 0.5, 1.0, 2.0, np.inf):
    print(f"  S_{alpha:<4} psi={renyi_entropy(psi, alpha):.4f}  psi'={renyi_entropy(psi_p, alpha):.4f}")
print("Rényi verdict:", elocc_verdict(psi, psi_p).direction.value)

phi = normalize_descending([0.6, 0.4])
print("Lambda :", tensor_product(psi, phi).coeffs.round(4))
print("Lambda':", tensor_product(psi_p, phi).coeffs.round(4))
print("with catalyst:", verify_catalyst(psi, psi_p, phi))

# a catalyst is not guaranteed; a maximally entangled qubit pair does nothing here
print("with (0.5, 0.5):", verify_catalyst(psi, psi_p, normalize_descending([0.5, 0.5])))
