"""Sparse multivariate polynomials over Q(i)(mu), plus differential operators.

A polynomial is a mapping from exponent tuples to nonzero Coefficient values
over a fixed, named variable space.  All values are immutable after
construction and every operation is a pure function, so the whole layer is
safe to use concurrently.

The spaces used elsewhere in the package:

  * phase space, dimension n: variables q1..qn, p1..pn (z-coordinates);
  * sigma space: u1..u2n, the Fourier-dual coordinates, index-aligned with z;
  * pair space: u1..u2n, v1..v2n, the two kernel slots;
  * triple space: u, v, w blocks, used for cocycle and Jacobi defects.

Differential operators are polynomials whose exponents are read as partial
derivative multi-orders against an index-aligned target space.  The
substitution sigma -> -i d/dz turns a sigma-space polynomial into such an
operator (each plane wave e^{i sigma.z} is an eigenvector of -i d/dz with
eigenvalue sigma).  Exponentials of such operators terminate exactly on
polynomials because every generator term of positive degree strictly lowers
the target's total degree.

A configurable total-degree guard (default 64) makes runaway computations
fail fast instead of exhausting memory.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable

from . import scalars
from .errors import (
    DegreeGuardError,
    NonterminatingSeriesError,
    PoleAtMuZeroError,
    SpaceMismatchError,
)
from .scalars import Coefficient, GaussRational

Exponents = tuple[int, ...]

_degree_guard = 64


def set_degree_guard(bound: int) -> None:
    """Set the global total-degree bound for products (default 64)."""
    global _degree_guard
    if bound < 1:
        raise ValueError("degree guard must be positive")
    _degree_guard = bound


def get_degree_guard() -> int:
    return _degree_guard


class Space:
    """An immutable, ordered list of variable names."""

    __slots__ = ("names", "index")

    def __init__(self, names: Iterable[str]):
        self.names = tuple(names)
        self.index = {name: k for k, name in enumerate(self.names)}
        if len(self.index) != len(self.names):
            raise ValueError("duplicate variable names")

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        if not isinstance(other, Space):
            return NotImplemented
        return self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Space({', '.join(self.names)})"


def phase_space(n: int) -> Space:
    """z = (q1..qn, p1..pn)."""
    return Space([f"q{i}" for i in range(1, n + 1)] + [f"p{i}" for i in range(1, n + 1)])


def sigma_space(n: int) -> Space:
    """One sigma slot: u1..u2n, index-aligned with phase space."""
    return Space([f"u{i}" for i in range(1, 2 * n + 1)])


def pair_space(n: int) -> Space:
    """Two sigma slots u, v — the domain of product/bracket kernels."""
    return Space(
        [f"u{i}" for i in range(1, 2 * n + 1)] + [f"v{i}" for i in range(1, 2 * n + 1)]
    )


def triple_space(n: int) -> Space:
    """Three sigma slots u, v, w — the domain of cocycle and Jacobi defects."""
    return Space(
        [f"u{i}" for i in range(1, 2 * n + 1)]
        + [f"v{i}" for i in range(1, 2 * n + 1)]
        + [f"w{i}" for i in range(1, 2 * n + 1)]
    )


def _term_sort_key(exps: Exponents):
    # Graded order, highest degree first, then lexicographic descending.
    return (-sum(exps), tuple(-e for e in exps))


class Poly:
    """A sparse polynomial: {exponent tuple: nonzero Coefficient} over a Space."""

    __slots__ = ("space", "terms", "_hash")

    def __init__(self, space: Space, terms: dict[Exponents, Coefficient]):
        # Trusted constructor: `terms` must already be clean (no zeros).
        self.space = space
        self.terms = terms
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_terms(cls, space: Space, items) -> "Poly":
        terms: dict[Exponents, Coefficient] = {}
        for exps, coeff in items:
            exps = tuple(exps)
            if len(exps) != len(space):
                raise SpaceMismatchError(
                    f"exponent tuple {exps} does not fit a {len(space)}-variable space"
                )
            acc = terms.get(exps)
            coeff = coeff if acc is None else acc + coeff
            if coeff:
                terms[exps] = coeff
            else:
                terms.pop(exps, None)
        return cls(space, terms)

    @classmethod
    def zero(cls, space: Space) -> "Poly":
        return cls(space, {})

    @classmethod
    def constant(cls, space: Space, coeff: Coefficient) -> "Poly":
        if not coeff:
            return cls(space, {})
        return cls(space, {(0,) * len(space): coeff})

    @classmethod
    def one(cls, space: Space) -> "Poly":
        return cls.constant(space, scalars.ONE)

    @classmethod
    def variable(cls, space: Space, name: str) -> "Poly":
        idx = space.index.get(name)
        if idx is None:
            raise SpaceMismatchError(f"unknown variable {name!r} in {space!r}")
        exps = [0] * len(space)
        exps[idx] = 1
        return cls(space, {tuple(exps): scalars.ONE})

    @classmethod
    def monomial(cls, space: Space, exps: Exponents, coeff: Coefficient = scalars.ONE) -> "Poly":
        if not coeff:
            return cls(space, {})
        return cls(space, {tuple(exps): coeff})

    # -- basic queries -----------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.space, frozenset(self.terms.items())))
            self._hash = h
        return h

    def total_degree(self) -> int:
        """Maximum term degree; the zero polynomial has degree -1."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def constant_term(self) -> Coefficient:
        return self.terms.get((0,) * len(self.space), scalars.ZERO)

    def sorted_terms(self) -> list[tuple[Exponents, Coefficient]]:
        return sorted(self.terms.items(), key=lambda kv: _term_sort_key(kv[0]))

    def leading_term(self) -> tuple[Exponents, Coefficient]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exps = min(self.terms, key=_term_sort_key)
        return exps, self.terms[exps]

    # -- ring operations ---------------------------------------------------

    def _check_space(self, other: "Poly"):
        if self.space != other.space:
            raise SpaceMismatchError(
                f"mismatched variable spaces: {self.space!r} vs {other.space!r}"
            )

    def __add__(self, other: "Poly") -> "Poly":
        self._check_space(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = terms.get(exps)
            coeff = coeff if acc is None else acc + coeff
            if coeff:
                terms[exps] = coeff
            else:
                del terms[exps]
        return Poly(self.space, terms)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(self.space, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        self._check_space(other)
        if not self.terms or not other.terms:
            return Poly(self.space, {})
        if self.total_degree() + other.total_degree() > _degree_guard:
            raise DegreeGuardError(
                f"product degree would exceed the guard ({_degree_guard}); "
                "raise it with set_degree_guard or MOYAL_MAX_DEGREE"
            )
        terms: dict[Exponents, Coefficient] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(map(int.__add__, e1, e2))
                c = c1 * c2
                acc = terms.get(exps)
                c = c if acc is None else acc + c
                if c:
                    terms[exps] = c
                else:
                    terms.pop(exps, None)
        return Poly(self.space, terms)

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative polynomial power")
        out = Poly.one(self.space)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def scale(self, coeff: Coefficient) -> "Poly":
        if not coeff:
            return Poly(self.space, {})
        return Poly(self.space, {e: c * coeff for e, c in self.terms.items()})

    def scale_fraction(self, q: Fraction) -> "Poly":
        if not q:
            return Poly(self.space, {})
        return Poly(self.space, {e: c.scale_fraction(q) for e, c in self.terms.items()})

    # -- calculus ----------------------------------------------------------

    def differentiate(self, var: str | int, order: int = 1) -> "Poly":
        """Exact partial derivative of the given order with respect to one variable."""
        if order < 0:
            raise ValueError("derivative order must be nonnegative")
        idx = self.space.index.get(var) if isinstance(var, str) else var
        if idx is None or not 0 <= idx < len(self.space):
            raise SpaceMismatchError(f"unknown variable {var!r} in {self.space!r}")
        if order == 0:
            return self
        terms: dict[Exponents, Coefficient] = {}
        for exps, coeff in self.terms.items():
            e = exps[idx]
            if e < order:
                continue
            factor = math.perm(e, order)
            new = list(exps)
            new[idx] = e - order
            terms[tuple(new)] = coeff.scale_int(factor)
        return Poly(self.space, terms)

    # -- structure ---------------------------------------------------------

    def map_exponents(self, fn: Callable[[Exponents], Exponents], space: Space) -> "Poly":
        """Reindex terms through `fn`, summing collisions (used for embeddings)."""
        terms: dict[Exponents, Coefficient] = {}
        for exps, coeff in self.terms.items():
            new = fn(exps)
            acc = terms.get(new)
            coeff = coeff if acc is None else acc + coeff
            if coeff:
                terms[new] = coeff
            else:
                terms.pop(new, None)
        return Poly(space, terms)

    def embed(self, space: Space, positions: tuple[int, ...]) -> "Poly":
        """Inject into a larger space; variable k of self goes to positions[k]."""
        width = len(space)

        def fn(exps: Exponents) -> Exponents:
            new = [0] * width
            for k, e in enumerate(exps):
                new[positions[k]] = e
            return tuple(new)

        return self.map_exponents(fn, space)

    def substitute(self, images: list["Poly"], space: Space) -> "Poly":
        """Substitute variable k by images[k]; all images live over `space`."""
        if len(images) != len(self.space):
            raise SpaceMismatchError("one image polynomial per variable is required")
        out = Poly.zero(space)
        power_cache: dict[tuple[int, int], Poly] = {}
        for exps, coeff in self.terms.items():
            term = Poly.constant(space, coeff)
            for k, e in enumerate(exps):
                if not e:
                    continue
                key = (k, e)
                pw = power_cache.get(key)
                if pw is None:
                    pw = images[k] ** e
                    power_cache[key] = pw
                term = term * pw
            out = out + term
        return out

    def homogeneous_component(self, degree: int) -> "Poly":
        return Poly(
            self.space, {e: c for e, c in self.terms.items() if sum(e) == degree}
        )

    def truncate_degree(self, max_degree: int) -> "Poly":
        return Poly(
            self.space, {e: c for e, c in self.terms.items() if sum(e) <= max_degree}
        )

    def block_component(self, blocks: tuple[range, ...], degrees: tuple[int, ...]) -> "Poly":
        """Terms whose degree within each index block matches `degrees` exactly."""
        out = {}
        for exps, coeff in self.terms.items():
            if all(sum(exps[i] for i in blk) == d for blk, d in zip(blocks, degrees)):
                out[exps] = coeff
        return Poly(self.space, out)

    def evaluate(self, values: list[Coefficient]) -> Coefficient:
        """Full evaluation at a point with Coefficient coordinates."""
        if len(values) != len(self.space):
            raise SpaceMismatchError("one value per variable is required")
        total = scalars.ZERO
        for exps, coeff in self.terms.items():
            term = coeff
            for v, e in zip(values, exps):
                if e:
                    term = term * v**e
            total = total + term
        return total

    def mu_zero(self) -> "Poly":
        """Substitute mu = 0 in every coefficient; raises at a pole."""
        terms: dict[Exponents, Coefficient] = {}
        for exps, coeff in self.terms.items():
            try:
                g = coeff.eval_at_mu_zero()
            except PoleAtMuZeroError:
                raise PoleAtMuZeroError(
                    f"pole at mu = 0 in the term {format_term(self.space, exps, coeff)}",
                    term=format_term(self.space, exps, coeff),
                ) from None
            if g:
                terms[exps] = Coefficient.make(
                    scalars.MuPoly.const(g), scalars.MU_POLY_ONE
                )
        return Poly(self.space, terms)

    def mu_components(self) -> dict[int, "Poly"]:
        """Split by mu-power; every coefficient must be polynomial in mu."""
        buckets: dict[int, dict[Exponents, Coefficient]] = {}
        for exps, coeff in self.terms.items():
            for k, g in coeff.mu_monomials().items():
                buckets.setdefault(k, {})[exps] = Coefficient.make(
                    scalars.MuPoly.const(g), scalars.MU_POLY_ONE
                )
        return {k: Poly(self.space, terms) for k, terms in sorted(buckets.items())}

    # -- rendering ---------------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly[{', '.join(self.space.names)}]({self})"


def format_term(space: Space, exps: Exponents, coeff: Coefficient) -> str:
    mono = "*".join(
        name if e == 1 else f"{name}^{e}"
        for name, e in zip(space.names, exps)
        if e
    )
    if not mono:
        return str(coeff)
    if coeff == scalars.ONE:
        return mono
    if coeff == scalars.MINUS_ONE:
        return f"-{mono}"
    return f"{coeff.as_factor()}*{mono}"


def format_poly(poly: Poly) -> str:
    if not poly.terms:
        return "0"
    parts = [format_term(poly.space, e, c) for e, c in poly.sorted_terms()]
    return " + ".join(parts).replace("+ -", "- ")


def divide_exact(dividend: Poly, divisor: Poly) -> tuple[Poly, Poly]:
    """Single-divisor multivariate division: dividend = q*divisor + r.

    No term of r is divisible by the leading term of the divisor, so when the
    divisor divides the dividend exactly the remainder is zero and the
    quotient is unique.
    """
    if divisor.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    dividend._check_space(divisor)
    lead_exps, lead_coeff = divisor.leading_term()
    quotient = Poly.zero(dividend.space)
    remainder_terms: dict[Exponents, Coefficient] = {}
    work = dividend
    while work.terms:
        exps, coeff = work.leading_term()
        if all(e >= l for e, l in zip(exps, lead_exps)):
            q_exps = tuple(e - l for e, l in zip(exps, lead_exps))
            q = Poly.monomial(work.space, q_exps, coeff / lead_coeff)
            quotient = quotient + q
            work = work - q * divisor
        else:
            remainder_terms[exps] = coeff
            work = Poly(work.space, {e: c for e, c in work.terms.items() if e != exps})
    return quotient, Poly(dividend.space, remainder_terms)


class DiffOp:
    """A constant-coefficient differential operator against an aligned target.

    The exponent tuple of each term is the multi-order of partial derivatives;
    the arity must match the target space.  Operators built from sigma-space
    polynomials carry the scale rule sigma -> -i d/dz, i.e. every term is
    multiplied by (-i)^(total order).
    """

    __slots__ = ("poly",)

    def __init__(self, poly: Poly):
        self.poly = poly

    @classmethod
    def from_sigma_poly(cls, sigma_poly: Poly) -> "DiffOp":
        """Apply the sigma -> -i d/dz rule to a sigma-space polynomial."""
        terms = {
            exps: coeff * scalars.neg_i_power(sum(exps))
            for exps, coeff in sigma_poly.terms.items()
        }
        return cls(Poly(sigma_poly.space, terms))

    def _check_arity(self, target: Poly):
        if len(self.poly.space) != len(target.space):
            raise SpaceMismatchError(
                "operator arity does not match the target space"
            )

    def apply_once(self, target: Poly) -> Poly:
        """One application of the operator (a single derivation-polynomial pass)."""
        self._check_arity(target)
        terms: dict[Exponents, Coefficient] = {}
        for d_exps, d_coeff in self.poly.terms.items():
            for t_exps, t_coeff in target.terms.items():
                factor = 1
                for t, d in zip(t_exps, d_exps):
                    if d:
                        if t < d:
                            factor = 0
                            break
                        factor *= math.perm(t, d)
                if not factor:
                    continue
                exps = tuple(t - d for t, d in zip(t_exps, d_exps))
                c = (d_coeff * t_coeff).scale_int(factor)
                acc = terms.get(exps)
                c = c if acc is None else acc + c
                if c:
                    terms[exps] = c
                else:
                    terms.pop(exps, None)
        return Poly(target.space, terms)

    def apply_exp(self, target: Poly) -> Poly:
        """Apply exp of the operator: sum_k D^k(target) / k!, exactly.

        The generator must have a zero constant term; every remaining term
        strictly lowers the target degree, so the series terminates.
        """
        if self.poly.constant_term():
            raise NonterminatingSeriesError(
                "exponential of an operator with a constant term does not "
                "terminate on polynomials; factor the constant out first"
            )
        result = target
        term = target
        k = 1
        while term.terms:
            term = self.apply_once(term).scale_fraction(Fraction(1, k))
            result = result + term
            k += 1
        return result

    def __repr__(self):
        return f"DiffOp({self.poly})"
