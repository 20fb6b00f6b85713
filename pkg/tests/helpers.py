"""Seeded random value generators shared across the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

from logdiff.polyring import Poly
from logdiff.weyl import Derivation, DiffOp


def random_monomial(rng: random.Random, nvars: int, max_degree: int) -> tuple[int, ...]:
    exps = [0] * nvars
    for _ in range(rng.randint(0, max_degree)):
        exps[rng.randrange(nvars)] += 1
    return tuple(exps)


def random_poly(rng: random.Random, nvars: int, max_degree: int = 2,
                max_terms: int = 3, nonzero: bool = False) -> Poly:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        terms[random_monomial(rng, nvars, max_degree)] = rng.randint(-4, 4)
    p = Poly(nvars, terms)
    if nonzero and not p:
        return Poly.constant(nvars, rng.choice([-2, -1, 1, 2, 3]))
    return p


def random_diffop(rng: random.Random, nvars: int, max_order: int = 2,
                  max_degree: int = 2, max_terms: int = 3) -> DiffOp:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        beta = random_monomial(rng, nvars, max_order)
        coeff = random_poly(rng, nvars, max_degree)
        if coeff:
            terms[beta] = coeff
    return DiffOp(nvars, terms)


def random_derivation(rng: random.Random, nvars: int, max_degree: int = 2) -> Derivation:
    return Derivation(tuple(random_poly(rng, nvars, max_degree) for _ in range(nvars)))


def random_word_operator(rng: random.Random, thetas, nvars: int,
                         max_len: int = 3, max_words: int = 3,
                         coeff_degree: int = 2) -> DiffOp:
    """A sum of words: polynomial coefficients times products of generators."""
    op = DiffOp.zero(nvars)
    for _ in range(rng.randint(1, max_words)):
        length = rng.randint(0, max_len)
        letters = sorted(rng.randint(1, len(thetas)) for _ in range(length))
        w = DiffOp.from_poly(random_poly(rng, nvars, coeff_degree, nonzero=True))
        for i in letters:
            w = w * thetas[i - 1].as_diffop()
        op = op + w
    return op


def eval_poly(f: Poly, point) -> Fraction:
    """Independent polynomial evaluation at a rational point."""
    total = Fraction(0)
    for mono, coeff in f.terms.items():
        value = Fraction(coeff)
        for e, x in zip(mono, point):
            value *= Fraction(x) ** e
        total += value
    return total
