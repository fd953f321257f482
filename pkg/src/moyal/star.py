"""Generalized star products and brackets on phase-space polynomials.

Conventions (fixed package-wide, pinned by the q*p fixture below):

  * phase space z = (q1..qn, p1..pn); sigma = (u1..u2n) is index-aligned
    with z under the pairing sigma.z = sum_i u_i z_i;
  * J is the canonical symplectic matrix [[0, I], [-I, 0]], and the wedge
    of two sigma slots is  sigma' ^ sigma = J_ij v_i u_j;
  * a product kernel is exp(b) with
        b(sigma, sigma') = chi(sigma) + chi(sigma') - chi(sigma + sigma')
                           + sigma'^T M sigma,
    chi a polynomial with chi(0) = 0 and M an antisymmetric matrix;
  * the Moyal kernel is chi = 0, M = mu*J; with it  q1 * p1 = q1*p1 + mu,
    matching the operator normalisation [q, p] = 2*mu = i*hbar.

On polynomial symbols the product is the terminating bidifferential series
obtained by substituting sigma -> -i d/dz acting on the left factor and
sigma' -> -i d/dz acting on the right factor in b, exponentiating, and
merging the two slots pointwise.  Plane waves e^{i sigma.z} are eigenvectors
of -i d/dz, so this realizes multiplication of Fourier transforms by exp(b)
exactly, term by term.

The bracket divides the commutator by 2*mu in the scalar field; division is
formal, and poles only surface when the classical limit is taken.

The ordering-change map `u_map` applies exp(chi(-i d/dz)) to a symbol.  It
is an exact isomorphism intertwining the kernel (chi, M) with (0, M), and is
inverted by -chi.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import scalars
from .errors import DegreeGuardError, DimensionMismatchError, SpaceMismatchError
from .linalg import Matrix
from .poly import (
    DiffOp,
    Poly,
    Space,
    get_degree_guard,
    pair_space,
    phase_space,
    sigma_space,
)

Exponents = tuple[int, ...]


def phase_dimension(space: Space) -> int:
    """The n with space == phase_space(n), or raise."""
    n, rem = divmod(len(space), 2)
    if rem or space != phase_space(n):
        raise SpaceMismatchError(f"{space!r} is not a phase space")
    return n


@dataclass(frozen=True)
class StarKernel:
    """An exp-of-polynomial product kernel (chi, M) on 2n-dimensional sigma space.

    chi must vanish at 0 (the kernel is gauge-normalized to B(0, 0) = 1) and
    M must be antisymmetric.  Every such kernel has an exponent that is an
    exact additive 2-cocycle, so its star product is associative.
    """

    n: int
    chi: Poly
    m: Matrix

    def __post_init__(self):
        if self.chi.space != sigma_space(self.n):
            raise SpaceMismatchError("chi must live on sigma space u1..u2n")
        if self.chi.constant_term():
            raise ValueError("chi must vanish at sigma = 0")
        if self.m.nrows != 2 * self.n or self.m.ncols != 2 * self.n:
            raise DimensionMismatchError("M must be 2n x 2n")
        if not self.m.is_antisymmetric:
            raise ValueError("M must be antisymmetric")

    @staticmethod
    def moyal(n: int) -> "StarKernel":
        """chi = 0, M = mu*J: the symmetric-ordering kernel."""
        return StarKernel(
            n, Poly.zero(sigma_space(n)), Matrix.canonical_symplectic(n, scalars.MU)
        )

    @staticmethod
    def standard(n: int) -> "StarKernel":
        """chi = mu * sum_i u_i u_{n+i}, M = mu*J."""
        sp = sigma_space(n)
        chi = Poly.zero(sp)
        for i in range(n):
            exps = [0] * (2 * n)
            exps[i] = 1
            exps[n + i] = 1
            chi = chi + Poly.monomial(sp, tuple(exps), scalars.MU)
        return StarKernel(n, chi, Matrix.canonical_symplectic(n, scalars.MU))

    def exponent(self) -> Poly:
        """b(sigma, sigma') over pair space: coboundary of chi plus sigma'^T M sigma."""
        return coboundary(self.chi) + bilinear_pair_poly(self.m, self.n)


def coboundary(chi: Poly) -> Poly:
    """chi(sigma) + chi(sigma') - chi(sigma + sigma') over pair space."""
    two_n = len(chi.space)
    if two_n % 2:
        raise SpaceMismatchError("chi must live on an even-dimensional sigma space")
    n = two_n // 2
    pair = pair_space(n)
    first = chi.embed(pair, tuple(range(two_n)))
    second = chi.embed(pair, tuple(range(two_n, 2 * two_n)))
    images = [
        Poly.variable(pair, f"u{i}") + Poly.variable(pair, f"v{i}")
        for i in range(1, two_n + 1)
    ]
    summed = chi.substitute(images, pair)
    return first + second - summed


def bilinear_pair_poly(m: Matrix, n: int) -> Poly:
    """sigma'^T M sigma = sum_ij M_ij v_i u_j as a pair-space polynomial."""
    pair = pair_space(n)
    terms = {}
    two_n = 2 * n
    for i in range(two_n):
        for j in range(two_n):
            c = m[i, j]
            if c:
                exps = [0] * (2 * two_n)
                exps[j] += 1  # u_j
                exps[two_n + i] += 1  # v_i
                terms[tuple(exps)] = c
    return Poly(pair, terms)


def _tensor_space(n: int) -> Space:
    names = [f"zl{i}" for i in range(1, 2 * n + 1)] + [
        f"zr{i}" for i in range(1, 2 * n + 1)
    ]
    return Space(names)


@lru_cache(maxsize=None)
def _tensor_diffop(kernel: StarKernel) -> DiffOp:
    # b's u-block differentiates the left slot, the v-block the right slot.
    b = kernel.exponent()
    reindexed = Poly(_tensor_space(kernel.n), dict(b.terms))
    return DiffOp.from_sigma_poly(reindexed)


@lru_cache(maxsize=None)
def _star_monomials(kernel: StarKernel, f_exps: Exponents, g_exps: Exponents) -> Poly:
    n = kernel.n
    tensor = _tensor_space(n)
    target = Poly.monomial(tensor, f_exps + g_exps, scalars.ONE)
    applied = _tensor_diffop(kernel).apply_exp(target)
    width = 2 * n
    return applied.map_exponents(
        lambda e: tuple(a + b for a, b in zip(e[:width], e[width:])), phase_space(n)
    )


def star(f: Poly, g: Poly, kernel: StarKernel) -> Poly:
    """The star product of two phase-space polynomials under the given kernel."""
    space = phase_space(kernel.n)
    if f.space != space or g.space != space:
        raise DimensionMismatchError(
            f"operands must live on phase space of dimension n={kernel.n}"
        )
    if f.total_degree() + g.total_degree() > get_degree_guard():
        raise DegreeGuardError(
            f"star operand degrees exceed the guard ({get_degree_guard()})"
        )
    out = Poly.zero(space)
    for ef, cf in f.terms.items():
        for eg, cg in g.terms.items():
            out = out + _star_monomials(kernel, ef, eg).scale(cf * cg)
    return out


def bracket(f: Poly, g: Poly, kernel: StarKernel) -> Poly:
    """(f*g - g*f) / (2*mu): the bracket induced by the star product.

    The division happens in the scalar field; a kernel whose commutator does
    not carry a factor of mu simply produces 1/mu coefficients, and any pole
    surfaces later in `classical_limit`.
    """
    comm = star(f, g, kernel) - star(g, f, kernel)
    return comm.scale((scalars.MU * 2).inverse())


def poisson(f: Poly, g: Poly) -> Poly:
    """The canonical Poisson bracket sum_i (df/dq_i dg/dp_i - df/dp_i dg/dq_i)."""
    if f.space != g.space:
        raise SpaceMismatchError("operands live on different spaces")
    n = phase_dimension(f.space)
    out = Poly.zero(f.space)
    for i in range(n):
        qi, pi = i, n + i
        out = out + f.differentiate(qi) * g.differentiate(pi)
        out = out - f.differentiate(pi) * g.differentiate(qi)
    return out


def classical_limit(f: Poly) -> Poly:
    """Substitute mu = 0 in all coefficients; raises PoleAtMuZeroError on a pole."""
    return f.mu_zero()


def u_map(f: Poly, chi: Poly) -> Poly:
    """Apply the ordering-change map exp(chi(-i d/dz)) to a phase-space polynomial.

    chi lives on sigma space (index-aligned with z) and must vanish at 0.
    The map intertwines star products: applied to a product taken with kernel
    (chi, M) it yields the product of the mapped factors taken with (0, M),
    and u_map(., -chi) is its exact inverse.
    """
    if chi.constant_term():
        raise ValueError("chi must have zero constant term")
    if len(chi.space) != len(f.space):
        raise DimensionMismatchError("chi arity does not match the phase space")
    op = DiffOp.from_sigma_poly(Poly(f.space, dict(chi.terms)))
    return op.apply_exp(f)
