"""Seeded random instances: distributions, kernels, subsets.

Everything is driven by numpy SeedSequence spawning so a top-level seed fixes
the whole stream, and all masses are produced as exact dyadic rationals
(integer numerators over a power-of-two denominator).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .entropy import JointDistribution, Kernel

MASS_DENOM = 2**16
KERNEL_DENOM = 2**12


def spawn_rngs(seed, count):
    return [np.random.default_rng(ss) for ss in np.random.SeedSequence(seed).spawn(count)]


def random_distribution(rng, arity, alphabet_sizes, support_size, heavy_tail=False):
    """Random joint distribution with exact dyadic masses on a random support.

    heavy_tail squares the raw weights before quantizing, pushing mass onto a
    few atoms so dyadic splitting sees many occupied levels.
    """
    total = 1
    for s in alphabet_sizes:
        total *= s
    support_size = min(support_size, total)
    flat = rng.choice(total, size=support_size, replace=False)
    tuples = []
    for f in flat:
        t = []
        for s in reversed(alphabet_sizes):
            t.append(int(f % s))
            f //= s
        tuples.append(tuple(reversed(t)))
    raw = rng.random(support_size) + 1e-3
    if heavy_tail:
        raw = raw**4
    weights = raw / raw.sum()
    masses = np.floor(weights * MASS_DENOM).astype(np.int64)
    masses[masses == 0] = 1
    gap = MASS_DENOM - int(masses.sum())
    masses[int(np.argmax(masses))] += gap
    if masses.min() <= 0:
        masses = np.maximum(masses, 0)
        keep = masses > 0
        tuples = [t for t, k in zip(tuples, keep) if k]
        masses = masses[keep]
        gap = MASS_DENOM - int(masses.sum())
        masses[int(np.argmax(masses))] += gap
    atoms = {
        t: Fraction(int(m), MASS_DENOM)
        for t, m in zip(tuples, masses)
        if m > 0
    }
    return JointDistribution(atoms, alphabets=[range(s) for s in alphabet_sizes])


def random_kernel(rng, atom_keys, width, deterministic=False):
    """Random kernel over the given source atoms, dyadic rows summing to one."""
    rows = {}
    for key in atom_keys:
        if deterministic or width == 1:
            j = int(rng.integers(0, width))
            row = [Fraction(0)] * width
            row[j] = Fraction(1)
        else:
            counts = rng.multinomial(KERNEL_DENOM, [1.0 / width] * width)
            row = [Fraction(int(c), KERNEL_DENOM) for c in counts]
        rows[key] = row
    return Kernel(rows)


def random_subset(rng, universe_size, size):
    picked = rng.choice(universe_size, size=size, replace=False)
    return tuple(sorted(int(v) for v in picked))
