"""Adding a point mass raises every Christoffel value but leaves the entropy
bound alone. Here the excess over 1/2 comes out as 1/((n+1)(n+2)), well
under the competitor bound (1 + 1/(n+1))/2."""

from spherekernel import MeasureSpec, Polynomial, WeightSpec, kernel_window, lambda_n_via_inverse, preset

mu = preset("atom-demo")
half = MeasureSpec(2, WeightSpec(0.5, Polynomial.constant(2)))
K_mu, K_half = kernel_window(mu, 65), kernel_window(half, 65)
print(" n   lambda_n(0; mu)     lambda_n(0; sigma/2)  bound (1 + 1/(n+1))/2")
for n in range(11):
    a, b = lambda_n_via_inverse(K_mu, n, (0, 0)), lambda_n_via_inverse(K_half, n, (0, 0))
    print(f"{n:2d}  {a:.15f}   {b:.15f}     {0.5 * (1 + 1 / (n + 1)):.15f}")
