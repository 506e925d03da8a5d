"""Random-walk Metropolis-Hastings reference sampler.

Deliberately plain: fixed isotropic Gaussian proposal, no adaptation.
It exists so that full benchmark runs are reproducible without an
external sampling framework, including runs where the sampler is known
to mix badly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ParameterError, ProgressError
from .samples import SampleBatch
from .seeding import child_seed
from .targets import Target

INIT_RETRIES = 1000
_NOISE_BLOCK = 4096


@dataclass(frozen=True)
class MHConfig:
    n_steps: int = 10**5
    n_chains: int = 1
    proposal_std: float = 1.0
    burn_in: Optional[int] = None  # None -> 10% of n_steps
    seed: int = 0
    init: Optional[tuple[float, ...]] = None  # start every chain here instead of a uniform draw

    def __post_init__(self):
        if self.n_steps < 1 or self.n_chains < 1:
            raise ParameterError("n_steps and n_chains must be positive")
        if not self.proposal_std > 0:
            raise ParameterError(f"proposal_std must be positive, got {self.proposal_std}")
        if not 0 <= self.n_burn_in < self.n_steps:
            raise ParameterError(f"burn_in={self.n_burn_in} must lie in [0, n_steps={self.n_steps})")

    @property
    def n_burn_in(self) -> int:
        return self.n_steps // 10 if self.burn_in is None else int(self.burn_in)


@dataclass(frozen=True)
class MHRun:
    states: np.ndarray  # (n_chains, n_steps - burn_in, d)
    logdensities: np.ndarray  # (n_chains, n_steps - burn_in)
    acceptance_rate: np.ndarray  # per chain, over all n_steps iterations

    def to_batch(self, source: str = "mh") -> SampleBatch:
        c, s, d = self.states.shape
        return SampleBatch(self.states.reshape(c * s, d), None, self.logdensities.reshape(c * s), source)


def _initial_point(target: Target, rng: np.random.Generator) -> tuple[np.ndarray, float]:
    lo = np.array([b[0] for b in target.bounds])
    hi = np.array([b[1] for b in target.bounds])
    for _ in range(INIT_RETRIES):
        x = lo + (hi - lo) * rng.random(target.dim)
        lp = target.log_density(x)
        if np.isfinite(lp):
            return x, lp
    raise ProgressError(f"no finite log-density point found in {INIT_RETRIES} draws inside the bounds of {target.name!r}")


def run_metropolis_hastings(target: Target, cfg: MHConfig) -> MHRun:
    """Run ``cfg.n_chains`` independent chains in lockstep.

    Chain ``c`` draws all of its randomness from its own generator seeded
    with ``child_seed(cfg.seed, c, "mh-chain")``, so the result does not
    depend on how chains are scheduled.
    """
    d = target.dim
    C = cfg.n_chains
    rngs = [np.random.default_rng(child_seed(cfg.seed, c, "mh-chain")) for c in range(C)]

    x = np.empty((C, d))
    lp = np.empty(C)
    for c, rng in enumerate(rngs):
        if cfg.init is not None:
            x[c] = np.asarray(cfg.init, dtype=float)
            lp[c] = target.log_density(x[c])
            if not np.isfinite(lp[c]):
                raise ParameterError("log-density is not finite at the supplied initial point")
        else:
            x[c], lp[c] = _initial_point(target, rng)

    burn = cfg.n_burn_in
    keep = cfg.n_steps - burn
    states = np.empty((C, keep, d))
    lds = np.empty((C, keep))
    accepted = np.zeros(C, dtype=np.int64)

    step = 0
    while step < cfg.n_steps:
        blk = min(_NOISE_BLOCK, cfg.n_steps - step)
        noise = np.stack([r.standard_normal((blk, d)) for r in rngs], axis=1) * cfg.proposal_std
        log_u = np.stack([np.log(r.random(blk)) for r in rngs], axis=1)
        for t in range(blk):
            prop = x + noise[t]
            lp_prop = target._logpdf(prop)
            acc = log_u[t] < lp_prop - lp
            if acc.any():
                x = np.where(acc[:, None], prop, x)
                lp = np.where(acc, lp_prop, lp)
                accepted += acc
            k = step + t - burn
            if k >= 0:
                states[:, k] = x
                lds[:, k] = lp
        step += blk

    return MHRun(states, lds, accepted / cfg.n_steps)


def metropolis_hastings(target: Target, cfg: MHConfig) -> SampleBatch:
    """Chain-major concatenation of all post-burn-in states, unit weights."""
    return run_metropolis_hastings(target, cfg).to_batch(source=f"mh:{target.name}")
