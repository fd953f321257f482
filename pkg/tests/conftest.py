"""Shared helpers: monomial enumeration and seeded random algebra objects."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from moyal import scalars
from moyal.linalg import Matrix
from moyal.poly import Poly, pair_space, phase_space, sigma_space


def monomials(space, max_total_degree):
    """All monomials over `space` of total degree <= max_total_degree."""
    width = len(space)
    out = []
    for exps in itertools.product(range(max_total_degree + 1), repeat=width):
        if sum(exps) <= max_total_degree:
            out.append(Poly.monomial(space, exps))
    return out


def monomial_tuples(space, count, max_sum_degree):
    """All `count`-tuples of monomials whose degrees sum to <= max_sum_degree."""
    width = len(space)
    singles = [
        exps
        for exps in itertools.product(range(max_sum_degree + 1), repeat=width)
        if sum(exps) <= max_sum_degree
    ]
    for combo in itertools.product(singles, repeat=count):
        if sum(sum(e) for e in combo) <= max_sum_degree:
            yield tuple(Poly.monomial(space, e) for e in combo)


def random_coefficient(rng: random.Random, mu_degree=1, allow_i=True):
    """A small random nonzero mu-polynomial coefficient."""
    while True:
        total = scalars.ZERO
        for k in range(mu_degree + 1):
            if rng.random() < 0.6:
                continue
            re = Fraction(rng.randint(-3, 3))
            im = Fraction(rng.randint(-1, 1)) if allow_i and rng.random() < 0.3 else Fraction(0)
            if re or im:
                total = total + scalars.Coefficient.mu_power(
                    k, scalars.GaussRational(re, im)
                )
        if total:
            return total


def random_poly(rng: random.Random, space, max_degree, terms=3, **kw):
    """A random sparse polynomial with small coefficients."""
    width = len(space)
    out = Poly.zero(space)
    for _ in range(terms):
        exps = [0] * width
        budget = rng.randint(0, max_degree)
        for _ in range(budget):
            exps[rng.randrange(width)] += 1
        out = out + Poly.monomial(space, tuple(exps), random_coefficient(rng, **kw))
    return out


def random_gauge_chi(rng: random.Random, n, max_degree, terms=3, **kw):
    """A random chi on sigma space with no constant and no linear part."""
    width = 2 * n
    sp = sigma_space(n)
    out = Poly.zero(sp)
    for _ in range(terms):
        degree = rng.randint(2, max(2, max_degree))
        exps = [0] * width
        for _ in range(degree):
            exps[rng.randrange(width)] += 1
        out = out + Poly.monomial(sp, tuple(exps), random_coefficient(rng, **kw))
    return out


def random_antisymmetric(rng: random.Random, size, **kw):
    """A random antisymmetric matrix with small mu-polynomial entries."""
    rows = [[scalars.ZERO] * size for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            if rng.random() < 0.7:
                c = random_coefficient(rng, **kw)
                rows[i][j] = c
                rows[j][i] = -c
    return Matrix(rows)
