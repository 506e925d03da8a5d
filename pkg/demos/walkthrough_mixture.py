"""
A sampler that never leaves one mode
====================================

The 3D mixture ``0.25 N(5, S) + 0.75 N(-5, S)`` with correlation 0.9
is hard for a single random-walk chain with a small step: it settles in
the mode it finds first and never crosses. Every metric picks this up.
"""

import os

import numpy as np

from samplebench import collapse_repeats, default_metrics, get_target, metropolis_hastings, run_benchmark, sample_iid
from samplebench.plots import plot_overview
from samplebench.samplers import MHConfig

OUT = os.path.join("demo_out", "mixture")
os.makedirs(OUT, exist_ok=True)

target = get_target("Mixture-Normal-3D-r0.9")
m, n = 20, 500

cfg = MHConfig(n_steps=60_000, n_chains=1, proposal_std=0.5, seed=3)
chain = collapse_repeats(metropolis_hastings(target, cfg))

# share of the chain's weight in the positive mode, versus 0.25 for the target
w = chain.weight_array
print("positive-mode weight", round(float(w[chain.points.sum(axis=1) > 0].sum() / w.sum()), 3))

ref, usr, summary = run_benchmark(target, default_metrics(), m, n, chain, seed=0)
for row in summary:
    print(f"{row.metric:22s} z={row.z:+8.2f}  {row.band}")
print("largest |z|", round(summary.max_abs_z, 1), "passed:", summary.passed)

plot_overview(summary, os.path.join(OUT, "overview.svg"), title="single chain, step 0.5")

###############################################################################
# The same target from IID draws, for contrast.
_, _, ok = run_benchmark(target, default_metrics(), m, n, sample_iid(target, m * n, seed=9), seed=0)
print("IID user samples, largest |z|", np.round(ok.max_abs_z, 2))
