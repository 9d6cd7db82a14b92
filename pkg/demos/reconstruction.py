"""Any table of coefficients in the open disc, together with a positive
diagonal, determines a positive definite kernel; extraction inverts it."""

import numpy as np

from spherekernel import VerblunskyTable, reconstruct_kernel, verblunsky_table

rng = np.random.default_rng(7)
N = 9
gamma = np.zeros((N + 1, N + 1), dtype=complex)
iu = np.triu_indices(N + 1, 1)
r = 0.9 * np.sqrt(rng.uniform(size=len(iu[0])))
gamma[iu] = r * np.exp(2j * np.pi * rng.uniform(size=len(iu[0])))
diag = rng.uniform(0.5, 2.0, size=N + 1)

K = reconstruct_kernel(diag, VerblunskyTable(N, 2, gamma))
print("smallest eigenvalue  ", np.linalg.eigvalsh(K.entries).min())
print("re-extraction error  ", np.abs(verblunsky_table(K).gamma - gamma).max())
print("diagonal error       ", np.abs(K.entries.diagonal().real - diag).max())
