"""On the circle the table reduces to classical Schur parameters; compare the
first row with the closed form -3 2^(n+1) / (4^(n+2) - 1) and watch the
Christoffel values close in on exp(entropy) = 4/5."""

from spherekernel import kernel_window, lambda_tail_bracket, preset, verblunsky_table

spec = preset("circle-demo")
row = verblunsky_table(kernel_window(spec, 12)).row0()
print(" n   gamma_{0,n}            closed form")
for n in range(1, 13):
    closed = -3 * 2**n / (4 ** (n + 1) - 1)
    print(f"{n:2d}  {row[n].real: .15e}  {closed: .15e}")

print("\n N   lambda_N(0)          width")
for N in (1, 2, 5, 10, 20):
    br = lambda_tail_bracket(spec, (0,), N)
    print(f"{N:2d}  {br.upper:.15f}  {br.width:.3e}")
