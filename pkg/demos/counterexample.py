"""The weight 2|z1|^2 on the sphere of C^2: every Verblunsky coefficient
vanishes, yet the entropy bound sits strictly below the Christoffel limit."""

import math

from spherekernel import counterexample_report

rep = counterexample_report(27)
print(f"max |gamma|          {rep.max_gamma:.2e}")
print(f"prod (1 - |gamma|^2) {rep.szego_quantity:.15f}")
print(f"lambda_27(0)         {rep.lambda_upper:.15f}")
print(f"exp(entropy)         {rep.entropy_rhs:.15f}  (2/e = {2 / math.e:.15f})")
print(f"quadrature entropy   {rep.extras['entropy_rhs_quadrature']:.15f}")
print(f"gap                  {rep.gap:.15f}  (1 - 2/e = {1 - 2 / math.e:.15f})")
print(f"verdict              {rep.verdict}")
