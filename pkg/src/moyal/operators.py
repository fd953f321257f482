"""Noncommutative polynomial operators and the symmetric-ordering correspondence.

This module is the package's independent verification path: operator algebra
here is pure rewriting with the canonical commutation relation and never
touches the bidifferential star-product machinery, so agreement between the
two routes is a genuine cross-check.

Operators are polynomials in qh1..qhn, ph1..phn with

    [qh_i, ph_j] = 2*mu * delta_ij          (the dictionary i*hbar = 2*mu),

stored in canonical order: within every word all qh's stand to the left of
all ph's.  `nc_mul` restores canonical order with the closed-form rewriting

    ph^b qh^c = sum_j (-2*mu)^j binom(b, j) binom(c, j) j!  qh^(c-j) ph^(b-j),

applied independently in each dimension.

The symmetric-ordering (Weyl) correspondence is realized as q-left-of-p
substitution composed with the ordering-transition operator
exp(-mu * sum_i d/dq_i d/dp_i); its inverse uses the opposite sign.  The
composition is validated against brute-force word symmetrization in the test
suite.
"""

from __future__ import annotations

from math import comb, factorial

from . import scalars
from .errors import DimensionMismatchError
from .poly import DiffOp, Poly, phase_space
from .star import phase_dimension

Exponents = tuple[int, ...]


class NCPoly:
    """A canonically ordered noncommutative polynomial in qh, ph.

    terms maps (q-exponents + p-exponents) words to nonzero coefficients.
    """

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: dict[Exponents, scalars.Coefficient]):
        self.n = n
        self.terms = terms
        self._hash = None

    @classmethod
    def zero(cls, n: int) -> "NCPoly":
        return cls(n, {})

    @classmethod
    def identity(cls, n: int) -> "NCPoly":
        return cls(n, {(0,) * (2 * n): scalars.ONE})

    @classmethod
    def word(cls, n: int, exps: Exponents, coeff=scalars.ONE) -> "NCPoly":
        if not coeff:
            return cls(n, {})
        return cls(n, {tuple(exps): coeff})

    @classmethod
    def generator(cls, n: int, name: str) -> "NCPoly":
        """qh<i> or ph<i>."""
        kind, idx = name[:2], int(name[2:])
        if kind not in ("qh", "ph") or not 1 <= idx <= n:
            raise ValueError(f"unknown generator {name!r}")
        exps = [0] * (2 * n)
        exps[(idx - 1) if kind == "qh" else (n + idx - 1)] = 1
        return cls.word(n, tuple(exps))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.n, frozenset(self.terms.items())))
            self._hash = h
        return h

    def __add__(self, other: "NCPoly") -> "NCPoly":
        self._check(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = terms.get(exps)
            coeff = coeff if acc is None else acc + coeff
            if coeff:
                terms[exps] = coeff
            else:
                del terms[exps]
        return NCPoly(self.n, terms)

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + other.scale(scalars.MINUS_ONE)

    def scale(self, coeff: scalars.Coefficient) -> "NCPoly":
        if not coeff:
            return NCPoly(self.n, {})
        return NCPoly(self.n, {e: c * coeff for e, c in self.terms.items()})

    def _check(self, other: "NCPoly"):
        if self.n != other.n:
            raise DimensionMismatchError("operator dimensions disagree")

    def __str__(self):
        if not self.terms:
            return "0"
        names = [f"qh{i}" for i in range(1, self.n + 1)] + [
            f"ph{i}" for i in range(1, self.n + 1)
        ]
        parts = []
        for exps, coeff in sorted(
            self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0]))
        ):
            mono = "*".join(
                nm if e == 1 else f"{nm}^{e}" for nm, e in zip(names, exps) if e
            )
            if not mono:
                parts.append(str(coeff))
            elif coeff == scalars.ONE:
                parts.append(mono)
            elif coeff == scalars.MINUS_ONE:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{coeff.as_factor()}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"NCPoly(n={self.n}, {self})"


def _word_product(n: int, w1: Exponents, w2: Exponents, coeff):
    """Multiply canonical words: yields (word, coefficient) pieces."""
    a, b = w1[:n], w1[n:]
    c, d = w2[:n], w2[n:]
    minus_two_mu = scalars.MU.scale_int(-2)
    pieces = [((), scalars.ONE)]
    for i in range(n):
        new_pieces = []
        for js, cf in pieces:
            for j in range(min(b[i], c[i]) + 1):
                f = comb(b[i], j) * comb(c[i], j) * factorial(j)
                new_pieces.append((js + (j,), cf * (minus_two_mu**j).scale_int(f)))
        pieces = new_pieces
    for js, cf in pieces:
        word = tuple(a[i] + c[i] - js[i] for i in range(n)) + tuple(
            b[i] + d[i] - js[i] for i in range(n)
        )
        yield word, cf * coeff


def nc_mul(x: NCPoly, y: NCPoly) -> NCPoly:
    """The operator product, rewritten to canonical (q-left) order. Exact."""
    x._check(y)
    n = x.n
    terms: dict[Exponents, scalars.Coefficient] = {}
    for w1, c1 in x.terms.items():
        for w2, c2 in y.terms.items():
            for word, coeff in _word_product(n, w1, w2, c1 * c2):
                acc = terms.get(word)
                coeff = coeff if acc is None else acc + coeff
                if coeff:
                    terms[word] = coeff
                else:
                    del terms[word]
    return NCPoly(n, terms)


def _transition_op(n: int, sign: int) -> DiffOp:
    """exp generator sign*mu * sum_i d/dq_i d/dp_i on phase space."""
    space = phase_space(n)
    terms = {}
    for i in range(n):
        exps = [0] * (2 * n)
        exps[i] = 1
        exps[n + i] = 1
        terms[tuple(exps)] = scalars.MU.scale_int(sign)
    return DiffOp(Poly(space, terms))


def weyl_quantize(f: Poly) -> NCPoly:
    """The symmetric-ordering operator image of a phase-space polynomial.

    Computed as q-left substitution of exp(-mu sum d/dq d/dp) f; linear, and
    maps 1 to the identity operator.
    """
    n = phase_dimension(f.space)
    shifted = _transition_op(n, -1).apply_exp(f)
    return NCPoly(n, dict(shifted.terms))


def weyl_symbol(op: NCPoly) -> Poly:
    """The two-sided inverse of weyl_quantize on polynomials."""
    space = phase_space(op.n)
    raw = Poly(space, dict(op.terms))
    return _transition_op(op.n, +1).apply_exp(raw)
