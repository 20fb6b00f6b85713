"""Operators tangent to an arrangement and their decomposition into words.

Tangency is membership in every truncated idealizer: u is tangent up to t
when u * f^t lands in f^t * Diff for each defining form f (or for the full
defining polynomial) and every power up to t.  Over a free arrangement any
tangent operator is a polynomial combination of products of basis tangent
derivations; ``decompose`` computes that combination level by level, and
``transport`` realizes the weaker statement that a large enough power of
the defining polynomial pushes an arbitrary operator into such words.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

from .arrangement import Arrangement, SaitoBasis
from .jacobian import commutator_value_matrix, product_family
from .linalg import determinant, multiplicity_product, sym_indices
from .polyring import NotDivisibleError, Poly, coordinates, exact_divide
from .weyl import Derivation, DiffOp, in_right_ideal, iterated_commutator


@dataclass(frozen=True)
class Word:
    """One summand: a polynomial coefficient times a product of generators.

    The word lists 1-based generator indices in weakly increasing order;
    the empty word is a pure polynomial summand.
    """

    coeff: Poly
    word: tuple[int, ...]

    def __post_init__(self):
        if not self.coeff:
            raise ValueError("word coefficient must be nonzero")
        if any(self.word[i] > self.word[i + 1] for i in range(len(self.word) - 1)):
            raise ValueError("word indices must be weakly increasing")


@dataclass(frozen=True)
class Decomposition:
    """A sum of words over a fixed tuple of generator derivations."""

    words: tuple[Word, ...]
    generators: tuple[Derivation, ...]

    def __post_init__(self):
        for w in self.words:
            if any(not 1 <= i <= len(self.generators) for i in w.word):
                raise ValueError("word index out of range for the generators")


class DecompositionError(Exception):
    """Structured failure: the operator is not a word combination at a level."""

    def __init__(self, message: str, level: int | None = None,
                 index: tuple[int, ...] | None = None):
        super().__init__(message)
        self.level = level
        self.index = index


def is_tangent(u: DiffOp, arr: Arrangement, t_max: int) -> bool:
    """Truncated per-form idealizer test for t in 1..t_max.

    This checks u * a^t in a^t * Diff for every defining form a.  The full
    tangency condition quantifies over all t; callers choose the cutoff.
    """
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    if u.nvars != arr.dim:
        raise ValueError("operator over a different ambient dimension")
    for form in arr.forms:
        fp = form.as_poly()
        for t in range(1, t_max + 1):
            if not in_right_ideal(u * fp ** t, fp, t):
                return False
    return True


def is_tangent_q(u: DiffOp, arr: Arrangement, t_max: int) -> bool:
    """Same truncated test through powers of the defining polynomial."""
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    if u.nvars != arr.dim:
        raise ValueError("operator over a different ambient dimension")
    return all(in_right_ideal(u * arr.q ** t, arr.q, t) for t in range(1, t_max + 1))


@dataclass(frozen=True)
class TangencyRow:
    """One (form, power) cell of the tangency table, with a witness on failure."""

    form_index: int
    t: int
    ok: bool
    witness: tuple[tuple[int, ...], Poly] | None = None


def tangency_table(u: DiffOp, arr: Arrangement, t_max: int) -> list[TangencyRow]:
    """Per-form, per-power results; failures carry the offending coefficient."""
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    rows = []
    for i, form in enumerate(arr.forms, start=1):
        fp = form.as_poly()
        for t in range(1, t_max + 1):
            prod = u * fp ** t
            witness = None
            ft = fp ** t
            for beta in sorted(prod.terms, key=lambda b: (sum(b), b)):
                try:
                    exact_divide(prod.terms[beta], ft)
                except NotDivisibleError:
                    witness = (beta, prod.terms[beta])
                    break
            rows.append(TangencyRow(i, t, witness is None, witness))
    return rows


def _word_operator(ops: Sequence[DiffOp], word: Sequence[int], nvars: int) -> DiffOp:
    out = DiffOp.one(nvars)
    for i in word:
        out = out * ops[i - 1]
    return out


def reassemble(dec: Decomposition) -> DiffOp:
    """Expand the word sum back into one normally ordered operator."""
    if not dec.generators:
        raise ValueError("decomposition carries no generators")
    nvars = dec.generators[0].nvars
    ops = [g.as_diffop() for g in dec.generators]
    out = DiffOp.zero(nvars)
    for w in dec.words:
        out = out + w.coeff * _word_operator(ops, w.word, nvars)
    return out


def transport(u: DiffOp, arr: Arrangement) -> Decomposition:
    """Represent Q^C(p+1,2) * u as words in the generators Q*d_1 .. Q*d_l.

    Peels the top normal-form layer of u: multiplying by Q^p turns each
    top term into a word in the Q-scaled partials up to lower-order error,
    which is handled recursively with the matching extra power of Q.
    Reassembling the result gives Q^C(p+1,2) * u exactly, where p is the
    order of u.
    """
    if u.nvars != arr.dim:
        raise ValueError("operator over a different ambient dimension")
    if not u:
        raise ValueError("the zero operator has no transport representation")
    n = arr.dim
    generators = tuple(
        Derivation(tuple(arr.q if j == i else Poly.zero(n) for j in range(n)))
        for i in range(n)
    )
    gen_ops = [g.as_diffop() for g in generators]

    def rec(v: DiffOp) -> list[Word]:
        p = v.order
        if p == 0:
            return [Word(v.value_at_one(), ())]
        qc = arr.q ** comb(p, 2)
        words = []
        remainder = arr.q ** p * v
        for beta in sorted(v.terms, key=lambda b: (sum(b), b), reverse=True):
            if sum(beta) != p:
                continue
            word = tuple(i for i in range(1, n + 1) for _ in range(beta[i - 1]))
            coeff = v.terms[beta]
            words.append(Word(qc * coeff, word))
            remainder = remainder - coeff * _word_operator(gen_ops, word, n)
        if remainder:
            p2 = remainder.order
            assert p2 is not None and p2 <= p - 1, "transport must drop the order"
            deficit = arr.q ** (comb(p, 2) - comb(p2 + 1, 2))
            words.extend(Word(deficit * w.coeff, w.word) for w in rec(remainder))
        return words

    return Decomposition(tuple(rec(u)), generators)


def decompose(u: DiffOp, arr: Arrangement, basis: SaitoBasis,
              coords: Sequence[Poly] | None = None,
              t_max: int | None = None,
              check_tangency: bool = True) -> Decomposition:
    """Write a tangent operator as words in the basis derivations.

    Works down one order level at a time.  At level p, the coefficient of
    the word at index k is read off a higher Jacobian: substituting u for
    the k-th entry of the basis product family makes the Jacobian equal
    (multiplicity product) * scalar^E * Q^E times that coefficient, with
    E = C(p+dim-1, dim).  Exact division extracts it; subtracting the
    recovered words must strictly drop the order.  Failure of either step
    is reported as a DecompositionError naming the level and index: that is
    the certificate that u is not a word combination, even if it slipped
    through the truncated tangency pre-check.
    """
    n = arr.dim
    if u.nvars != n:
        raise ValueError("operator over a different ambient dimension")
    fs = tuple(coords) if coords is not None else coordinates(n)
    if len(fs) != n:
        raise ValueError("need one coordinate polynomial per variable")
    thetas = basis.thetas

    if not u:
        return Decomposition((), thetas)

    if check_tangency and u.order >= 1:
        cutoff = t_max if t_max is not None else u.order
        if not is_tangent(u, arr, cutoff):
            raise DecompositionError(
                f"operator fails the tangency test at t_max = {cutoff}"
            )

    # Scalar of the ordinary Jacobian for this coordinate tuple; equals the
    # certified basis scalar when coords are the standard coordinates.
    base1 = determinant(commutator_value_matrix(fs, product_family(thetas, 1)))
    try:
        quot = exact_divide(base1, arr.q)
    except NotDivisibleError:
        quot = None
    if quot is None or not quot or quot.degree != 0:
        raise ValueError(
            "basis Jacobian is not a nonzero scalar multiple of the defining polynomial"
        )
    lam = quot.constant_term()

    words: list[Word] = []
    cur = u
    while cur and cur.order >= 1:
        p = cur.order
        idxs = sym_indices(n, p)
        exponent = comb(p + n - 1, n)
        divisor = arr.q ** exponent * (multiplicity_product(n, p) * lam ** exponent)
        fam = product_family(thetas, p)
        base_entries = fam.entries
        base_rows = commutator_value_matrix(fs, fam)
        u_row = [
            iterated_commutator(cur, [fs[j - 1] for j in jdx]).value_at_one()
            for jdx in idxs
        ]
        level_words: list[tuple[Poly, tuple[int, ...], DiffOp]] = []
        for pos, k in enumerate(idxs):
            rows = [u_row if i == pos else base_rows[i] for i in range(len(idxs))]
            jac = determinant(rows)
            if not jac:
                continue
            try:
                coeff = exact_divide(jac, divisor)
            except NotDivisibleError:
                raise DecompositionError(
                    f"level {p}, index {k}: Jacobian is not divisible by the "
                    "scaled power of the defining polynomial; the operator is "
                    "not a word combination at this level",
                    level=p, index=k,
                ) from None
            if coeff:
                level_words.append((coeff, k, base_entries[pos]))
        nxt = cur
        for coeff, _k, op in level_words:
            nxt = nxt - coeff * op
        if nxt and nxt.order >= p:
            raise DecompositionError(
                f"level {p}: subtracting the recovered words did not lower the "
                "order; the operator is not a word combination at this level",
                level=p,
            )
        words.extend(Word(coeff, k) for coeff, k, _op in level_words)
        cur = nxt
    if cur:
        words.append(Word(cur.value_at_one(), ()))
    return Decomposition(tuple(words), thetas)


def decomposition_to_json(dec: Decomposition) -> list[dict]:
    """Stable JSON form: longest words first, then lexicographic order."""
    from .exprparse import render

    ordered = sorted(dec.words, key=lambda w: (-len(w.word), w.word))
    return [{"coeff": render(w.coeff), "word": list(w.word)} for w in ordered]
