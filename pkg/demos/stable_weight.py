"""A weight |g|^2 with g stable on the closed ball: the hypothesis certificate
holds with f = g(0)/g and the bracket closes, so equality is certified."""

from spherekernel import candidate_f_from_g, check_sv_hypothesis, preset, stable_check, summary_report

for name in ("stable-demo", "shifted-disc"):
    spec = preset(name)
    g = spec.weight.g
    slack = check_sv_hypothesis(spec, candidate_f_from_g(g))
    rep = summary_report(spec, 27)
    print(f"{name}: min|g| on ball ~ {stable_check(g):.4f}, slack {slack:.2e}, "
          f"lambda_27(0) {rep.lambda_upper:.12f}, exp(entropy) {rep.entropy_rhs:.12f}, verdict {rep.verdict}")
