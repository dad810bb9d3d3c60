"""Tour of the nine (e, ell) rescaling pairs and their convexity criteria.

The composed-convexity machinery needs ell'/ell'' convex; surviving
arbitrary (non-normalized) traces additionally needs ell'/ell'' = gamma*t.
Exactly four catalog pairs are homogeneous, and the log-log pair loses
ratio convexity past t = e.
"""

import math

from tracelab import catalog, check_homogeneity, check_ratio_convexity, ratio_phi

pairs = catalog(p=2.0, alpha=1.0)

print(f"{'pair':24s} {'ratio convex':>12s} {'homogeneous':>12s} {'gamma':>8s}")
for pair in pairs:
    conv = check_ratio_convexity(pair, 801)
    hom = check_homogeneity(pair, 801)
    gamma = f"{hom.gamma:+.3f}" if hom.gamma is not None else "-"
    print(f"{pair.name:24s} {str(conv.convex_on_domain):>12s} {str(hom.homogeneous):>12s} {gamma:>8s}")

log_pair = pairs[0]
print("\nphi(t) = -ell'/ell'' for the log pair is the identity:",
      [round(ratio_phi(log_pair, t), 6) for t in (0.5, 1.0, 3.0)])

loglog = pairs[5]
print(f"\nlog-log pair validity window: {loglog.ell_domain}")
ok = check_ratio_convexity(loglog, 801)
print(f"  on (1, e]: convex = {ok.convex_on_domain}")
beyond = check_ratio_convexity(loglog, 2001, window=(1.05, 10.0))
print(f"  extended to (1, 10]: convex = {beyond.convex_on_domain}, "
      f"worst point t = {beyond.worst_point:.3f} (> e = {math.e:.3f})")
