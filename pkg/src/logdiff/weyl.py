"""Differential operators with polynomial coefficients, in normal form.

An operator is stored as a finite map from partial-derivative exponent
tuples to nonzero polynomial coefficients, with coefficients on the left:
``sum_b f_b d^b``.  Products are normal-ordered through the generalized
Leibniz rule, so the commutation relation ``d_i * f = f * d_i + df/dx_i``
holds identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from math import comb
from typing import Mapping, Sequence

from .polyring import Monomial, Poly, Scalar, divides_power


class DiffOp:
    """Normally ordered differential operator over the polynomial ring."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, Poly] | None = None):
        if nvars < 1:
            raise ValueError("need at least one variable")
        clean: dict[Monomial, Poly] = {}
        if terms:
            for beta, coeff in terms.items():
                beta = tuple(beta)
                if len(beta) != nvars or any(e < 0 for e in beta):
                    raise ValueError(f"bad derivative exponent tuple {beta}")
                if coeff.nvars != nvars:
                    raise ValueError("coefficient over a different ambient dimension")
                if coeff:
                    clean[beta] = coeff
        self.nvars = nvars
        self.terms = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> DiffOp:
        return cls(nvars)

    @classmethod
    def one(cls, nvars: int) -> DiffOp:
        return cls.from_poly(Poly.one(nvars))

    @classmethod
    def from_poly(cls, f: Poly) -> DiffOp:
        return cls(f.nvars, {(0,) * f.nvars: f})

    @classmethod
    def partial(cls, nvars: int, index: int) -> DiffOp:
        """The operator d<index> (1-based index)."""
        if not 1 <= index <= nvars:
            raise ValueError(f"partial index {index} out of range 1..{nvars}")
        beta = tuple(1 if i == index - 1 else 0 for i in range(nvars))
        return cls(nvars, {beta: Poly.one(nvars)})

    # -- queries ------------------------------------------------------------

    @property
    def order(self) -> int | None:
        """Maximal derivative order present, or None for the zero operator."""
        if not self.terms:
            return None
        return max(sum(b) for b in self.terms)

    def value_at_one(self) -> Poly:
        """The operator applied to 1, i.e. the pure polynomial part."""
        return self.terms.get((0,) * self.nvars, Poly.zero(self.nvars))

    def apply(self, f: Poly) -> Poly:
        """Evaluate the operator on a polynomial."""
        if f.nvars != self.nvars:
            raise ValueError("polynomial over a different ambient dimension")
        out = Poly.zero(self.nvars)
        for beta, coeff in self.terms.items():
            df = f.diff_multi(beta)
            if df:
                out = out + coeff * df
        return out

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> DiffOp | None:
        if isinstance(other, DiffOp):
            if self.nvars != other.nvars:
                raise ValueError("mixed ambient dimensions")
            return other
        if isinstance(other, Poly):
            if self.nvars != other.nvars:
                raise ValueError("mixed ambient dimensions")
            return DiffOp.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return DiffOp.from_poly(Poly.constant(self.nvars, other))
        return None

    def __add__(self, other) -> DiffOp:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for beta, coeff in other.terms.items():
            s = out.get(beta)
            s = coeff if s is None else s + coeff
            if s:
                out[beta] = s
            else:
                out.pop(beta, None)
        return DiffOp(self.nvars, out)

    __radd__ = __add__

    def __sub__(self, other) -> DiffOp:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> DiffOp:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __neg__(self) -> DiffOp:
        return DiffOp(self.nvars, {b: -c for b, c in self.terms.items()})

    def __mul__(self, other) -> DiffOp:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[Monomial, Poly] = {}
        for beta, f in self.terms.items():
            for gamma, g in other.terms.items():
                # d^beta g = sum over delta <= beta of C(beta, delta)
                # (d^delta g) d^(beta-delta); delta capped by the degrees of g.
                caps = tuple(min(b, d) for b, d in zip(beta, g.degrees()))
                for delta in cartesian(*(range(c + 1) for c in caps)):
                    dg = g.diff_multi(delta)
                    if not dg:
                        continue
                    mult = 1
                    for b, d in zip(beta, delta):
                        mult *= comb(b, d)
                    key = tuple(b - d + c for b, d, c in zip(beta, delta, gamma))
                    term = f * dg
                    if mult != 1:
                        term = term * mult
                    acc = out.get(key)
                    acc = term if acc is None else acc + term
                    if acc:
                        out[key] = acc
                    else:
                        out.pop(key, None)
        return DiffOp(self.nvars, out)

    def __rmul__(self, other) -> DiffOp:
        # Polynomials and scalars multiply coefficients on the left directly.
        if isinstance(other, (int, Fraction)):
            return DiffOp(self.nvars, {b: c * other for b, c in self.terms.items()})
        if isinstance(other, Poly):
            if self.nvars != other.nvars:
                raise ValueError("mixed ambient dimensions")
            return DiffOp(self.nvars, {b: other * c for b, c in self.terms.items()})
        return NotImplemented

    def __pow__(self, n: int) -> DiffOp:
        if not isinstance(n, int) or n < 0:
            raise ValueError("operator power needs a non-negative integer exponent")
        out = DiffOp.one(self.nvars)
        for _ in range(n):
            out = out * self
        return out

    # -- protocol -----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (Poly, int, Fraction)):
            try:
                other = self._coerce(other)
            except ValueError:
                return False
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __str__(self) -> str:
        from .exprparse import render

        return render(self)

    def __repr__(self) -> str:
        return f"DiffOp({self!s}, nvars={self.nvars})"


@dataclass(frozen=True)
class Derivation:
    """A first-order operator with no constant part: sum_i coeffs[i] * d_i."""

    coeffs: tuple[Poly, ...]

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        if not coeffs:
            raise ValueError("derivation needs at least one coefficient")
        n = coeffs[0].nvars
        if len(coeffs) != n or any(c.nvars != n for c in coeffs):
            raise ValueError("derivation needs one coefficient per variable")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    @classmethod
    def from_diffop(cls, u: DiffOp) -> Derivation:
        coeffs = [Poly.zero(u.nvars) for _ in range(u.nvars)]
        for beta, c in u.terms.items():
            if sum(beta) != 1:
                raise ValueError("operator is not a derivation")
            coeffs[beta.index(1)] = c
        return cls(tuple(coeffs))

    def as_diffop(self) -> DiffOp:
        n = self.nvars
        terms = {}
        for i, c in enumerate(self.coeffs):
            if c:
                terms[tuple(1 if j == i else 0 for j in range(n))] = c
        return DiffOp(n, terms)

    def apply(self, f: Poly) -> Poly:
        out = Poly.zero(self.nvars)
        for i, c in enumerate(self.coeffs, start=1):
            if c:
                out = out + c * f.diff(i)
        return out

    def homogeneous_degree(self) -> int | None:
        """Common degree of the nonzero coefficients, or None.

        None means the derivation is zero or its coefficients fail to be
        homogeneous of one common degree.
        """
        degs = set()
        for c in self.coeffs:
            if c:
                if not c.is_homogeneous():
                    return None
                degs.add(c.degree)
        if len(degs) != 1:
            return None
        return degs.pop()

    def __str__(self) -> str:
        from .exprparse import render

        return render(self.as_diffop())


def commutator(u: DiffOp, v) -> DiffOp:
    """[u, v] = uv - vu, with polynomials and scalars coerced."""
    w = u._coerce(v)
    if w is None:
        raise TypeError(f"cannot commute a DiffOp with {type(v).__name__}")
    return u * w - w * u


def iterated_commutator(u: DiffOp, fs: Sequence[Poly]) -> DiffOp:
    """Bracket u with each polynomial in turn; the empty list returns u."""
    out = u
    for f in fs:
        out = commutator(out, f)
    return out


def value_at_one_expansion(u: DiffOp, fs: Sequence[Poly]) -> Poly:
    """Inclusion-exclusion form of iterated_commutator(u, fs).value_at_one().

    Computed as sum over subsets J of (-1)^|J| * prod(fs[J]) * u(prod(fs
    outside J)), entirely through polynomial application; kept independent
    of the bracket recursion so the two routes can cross-check each other.
    """
    n = u.nvars
    p = len(fs)
    out = Poly.zero(n)
    for mask in range(1 << p):
        inside = Poly.one(n)
        outside = Poly.one(n)
        bits = 0
        for j in range(p):
            if mask >> j & 1:
                inside = inside * fs[j]
                bits += 1
            else:
                outside = outside * fs[j]
        term = inside * u.apply(outside)
        out = out - term if bits % 2 else out + term
    return out


def principal_symbol(u: DiffOp) -> Poly:
    """Top-order part of u as a polynomial in 2l variables.

    Variables 1..l are the coordinates, variables l+1..2l stand for the
    corresponding partials; the result is homogeneous of degree order(u)
    in the second block.  Undefined (ValueError) for the zero operator.
    """
    p = u.order
    if p is None:
        raise ValueError("the zero operator has no principal symbol")
    n = u.nvars
    terms: dict[Monomial, Scalar] = {}
    for beta, coeff in u.terms.items():
        if sum(beta) == p:
            for mono, c in coeff.terms.items():
                terms[mono + beta] = c
    return Poly(2 * n, terms)


def in_right_ideal(u: DiffOp, f: Poly, t: int) -> bool:
    """True iff u lies in f**t * Diff, i.e. f**t divides every coefficient.

    Operators form a free left module over the polynomial ring on the
    normal-form basis, so membership is coefficientwise divisibility.
    """
    if not f:
        raise ValueError("divisor must be nonzero")
    if t < 0:
        raise ValueError("power must be non-negative")
    if t == 0:
        return True
    ft = f ** t
    return all(divides_power(ft, 1, coeff) for coeff in u.terms.values())
