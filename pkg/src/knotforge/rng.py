"""Deterministic random numbers.

Python-level operations (jitter, random reflections, component swaps)
use numpy's PCG64 seeded per call.  The relaxation thermal force runs
inside compiled kernels, which carry their own splitmix64 state (see
kernels.splitmix_next); both are reproducible from integer seeds.
"""

import numpy as np

MASK64 = (1 << 64) - 1


def splitmix64(state):
    """Advance a splitmix64 state, returning (new_state, 64-bit output)."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def derive_seed(seed, salt):
    """Derive an independent child seed from (seed, salt)."""
    _, a = splitmix64((seed ^ (salt * 0x9E3779B97F4A7C15)) & MASK64)
    return a


def generator(seed):
    return np.random.Generator(np.random.PCG64(seed & MASK64))


def uniform_ball(rng, n, radius):
    """n independent vectors uniform in the closed ball of given radius."""
    out = np.empty((n, 3))
    k = 0
    while k < n:
        cand = rng.uniform(-1.0, 1.0, size=(2 * (n - k) + 8, 3))
        good = cand[np.einsum("ij,ij->i", cand, cand) <= 1.0]
        take = min(len(good), n - k)
        out[k:k + take] = good[:take]
        k += take
    return out * radius


def random_unit_vector(rng):
    v = uniform_ball(rng, 1, 1.0)[0]
    norm = np.linalg.norm(v)
    while norm < 1e-12:
        v = uniform_ball(rng, 1, 1.0)[0]
        norm = np.linalg.norm(v)
    return v / norm


def random_directions(seed, n):
    """n seeded unit vectors, used by projection-sampling oracles."""
    rng = generator(seed)
    vecs = rng.normal(size=(n, 3))
    norms = np.linalg.norm(vecs, axis=1)
    bad = norms < 1e-12
    while bad.any():
        vecs[bad] = rng.normal(size=(int(bad.sum()), 3))
        norms = np.linalg.norm(vecs, axis=1)
        bad = norms < 1e-12
    return vecs / norms[:, None]
