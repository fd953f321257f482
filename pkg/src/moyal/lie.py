"""Bracket-kernel analysis: Lie axioms, normal-form fitting, classification.

A bracket kernel is a polynomial A over pair space (slots u = sigma,
v = sigma'), defining the bilinear operation whose bidifferential realization
applies A(-i d/dz (x) -i d/dz) once to f (x) g and merges the slots.  The
kernel defines a Lie bracket annihilating constants when

    A(u, v) = -A(v, u),                         (antisymmetry)
    A(u, v+w) A(v, w) + cyclic = 0,             (Jacobi)
    A(0, v) = 0.                                (constants)

Because entire kernels can only enter exactly as polynomial truncations,
Jacobi checks report their defect both by mu-order and by total degree: a
degree-T truncation of a valid kernel has a defect supported in total degree
> T + 2, and mu-truncations (e.g. of the hyperbolic-sine kernel) leave a
defect that vanishes at mu = 0.  Both patterns are reported as expected
truncation defects rather than violations.

Convention sheet (pinned by the Moyal fixture, see tests): with the bracket
kernel of the symmetric-ordering product, the first-slot derivative matrix is

    omega_ij := d/du_i A(0, sigma')|_linear = coefficient of u_i v_j,

and omega = -M/mu where M is the product kernel's antisymmetric matrix; in
particular omega = -J for the Moyal/hyperbolic-sine family.

Nondegenerate kernels are fitted degreewise to the normal form

    A = exp(chi(u) + chi(v) - chi(u+v)) * h(w),   w = sum omega_ij u_i v_j,

with gauge-fixed chi and h'(0) = 1 (w is read off A itself, which absorbs
the only scale freedom of the pair (omega, h)).  The odd series h is then
classified: h'' = mu^2 h termwise forces either c*sinh(mu*x) (mu^2 != 0) or
c*x, the only generating functions compatible with Jacobi.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from . import scalars
from .errors import MoyalError, SpaceMismatchError
from .linalg import Matrix, Vector
from .poly import DiffOp, Exponents, Poly, divide_exact, pair_space, phase_space, sigma_space, triple_space
from .star import StarKernel, phase_dimension


class LieKernelError(MoyalError):
    """A structural extraction step failed; carries a witness monomial."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class RawLieKernel:
    """A candidate bracket kernel over pair space."""

    n: int
    a: Poly

    def __post_init__(self):
        if self.a.space != pair_space(self.n):
            raise SpaceMismatchError("A must live on pair space u1..u2n, v1..v2n")


def slot_swap(p: Poly, n: int) -> Poly:
    width = 2 * n
    return p.map_exponents(lambda e: e[width:] + e[:width], p.space)


def exp_truncated(p: Poly, max_degree: int) -> Poly:
    """exp(p) truncated at total degree max_degree; p must have no constant term."""
    if p.constant_term():
        raise ValueError("exponent must have zero constant term")
    out = Poly.one(p.space)
    power = Poly.one(p.space)
    k = 1
    while True:
        power = (power * p).truncate_degree(max_degree).scale_fraction(Fraction(1, k))
        if power.is_zero:
            return out
        out = out + power
        k += 1


# ---------------------------------------------------------------------------
# Axioms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LieAxiomReport:
    """Outcome of the antisymmetry / Jacobi / constants checks."""

    antisymmetry_witness: tuple[Exponents, scalars.Coefficient] | None
    constants_witness: tuple[Exponents, scalars.Coefficient] | None
    jacobi_status: str  # "exact" | "truncation-defect" | "violation"
    jacobi_witness: tuple[Exponents, scalars.Coefficient] | None
    defect_mu_orders: dict[int, str] | None
    defect_degree_range: tuple[int, int] | None
    truncation_degree: int | None

    @property
    def antisymmetric(self) -> bool:
        return self.antisymmetry_witness is None

    @property
    def constants_annihilate(self) -> bool:
        return self.constants_witness is None

    @property
    def passed(self) -> bool:
        return (
            self.antisymmetric
            and self.constants_annihilate
            and self.jacobi_status in ("exact", "truncation-defect")
        )


def jacobi_defect(raw: RawLieKernel) -> Poly:
    """A(u,v+w)A(v,w) + A(v,w+u)A(w,u) + A(w,u+v)A(u,v) over triple space."""
    n = raw.n
    width = 2 * n
    tri = triple_space(n)
    a = raw.a
    zeros = (0,) * width

    u_vars = [Poly.variable(tri, f"u{i}") for i in range(1, width + 1)]
    v_vars = [Poly.variable(tri, f"v{i}") for i in range(1, width + 1)]
    w_vars = [Poly.variable(tri, f"w{i}") for i in range(1, width + 1)]

    a_u_vw = a.substitute(u_vars + [v + w for v, w in zip(v_vars, w_vars)], tri)
    a_vw = a.map_exponents(lambda e: zeros + e, tri)
    a_v_wu = a.substitute(v_vars + [w + u for w, u in zip(w_vars, u_vars)], tri)
    a_wu = a.map_exponents(lambda e: e[width:] + zeros + e[:width], tri)
    a_w_uv = a.substitute(w_vars + [u + v for u, v in zip(u_vars, v_vars)], tri)
    a_uv = a.map_exponents(lambda e: e + zeros, tri)

    return a_u_vw * a_vw + a_v_wu * a_wu + a_w_uv * a_uv


def lie_axiom_check(
    raw: RawLieKernel, truncation_degree: int | None = None
) -> LieAxiomReport:
    """Check the Lie axioms exactly, reporting Jacobi defects per mu-order.

    A nonzero Jacobi defect is downgraded from "violation" to
    "truncation-defect" when it vanishes at mu = 0, or when
    `truncation_degree` is given and the defect lives entirely above total
    degree truncation_degree + 2 (the signature of a truncated valid kernel).
    """
    n = raw.n
    a = raw.a

    anti = a + slot_swap(a, n)
    anti_witness = None if anti.is_zero else anti.sorted_terms()[0]

    width = 2 * n
    const_witness = None
    for exps, coeff in a.sorted_terms():
        if sum(exps[:width]) == 0:
            const_witness = (exps, coeff)
            break

    defect = jacobi_defect(raw)
    if defect.is_zero:
        status, jac_witness, mu_orders, degree_range = "exact", None, None, None
    else:
        jac_witness = defect.sorted_terms()[0]
        degrees = [sum(e) for e in defect.terms]
        degree_range = (min(degrees), max(degrees))
        try:
            mu_orders = {
                k: str(part) for k, part in sorted(defect.mu_components().items())
            }
        except ValueError:
            mu_orders = None
        vanishes_at_zero = False
        try:
            vanishes_at_zero = defect.mu_zero().is_zero
        except MoyalError:
            pass
        above_truncation = (
            truncation_degree is not None and degree_range[0] > truncation_degree + 2
        )
        status = (
            "truncation-defect" if (vanishes_at_zero or above_truncation) else "violation"
        )
    return LieAxiomReport(
        antisymmetry_witness=anti_witness,
        constants_witness=const_witness,
        jacobi_status=status,
        jacobi_witness=jac_witness,
        defect_mu_orders=mu_orders,
        defect_degree_range=degree_range,
        truncation_degree=truncation_degree,
    )


# ---------------------------------------------------------------------------
# Omega extraction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OmegaData:
    omega: Matrix
    rank: int
    kernel_basis: list[Vector]

    @property
    def nondegenerate(self) -> bool:
        return not self.kernel_basis


def extract_omega(raw: RawLieKernel) -> OmegaData:
    """Read omega_ij from the part of A linear in the first slot at zero.

    Requires A(0, sigma') = 0.  The first-slot-linear part must be linear in
    the second slot and antisymmetric; any offending term is raised as a
    witness.
    """
    n = raw.n
    width = 2 * n
    a = raw.a
    rows = [[scalars.ZERO] * width for _ in range(width)]
    for exps, coeff in a.sorted_terms():
        u_deg = sum(exps[:width])
        v_deg = sum(exps[width:])
        if u_deg == 0:
            raise LieKernelError(
                f"A(0, sigma') != 0: term {Poly.monomial(a.space, exps, coeff)}",
                witness=(exps, coeff),
            )
        if u_deg == 1 and v_deg != 1:
            raise LieKernelError(
                "first-slot derivative at zero is not linear in the second "
                f"slot: term {Poly.monomial(a.space, exps, coeff)}",
                witness=(exps, coeff),
            )
        if u_deg == 1 and v_deg == 1:
            i = exps.index(1)
            j = exps.index(1, width) - width
            rows[i][j] = coeff
    omega = Matrix(rows)
    if not omega.is_antisymmetric:
        raise LieKernelError("omega is not antisymmetric", witness=omega)
    return OmegaData(
        omega=omega, rank=omega.rank(), kernel_basis=omega.nullspace()
    )


def bilinear_first_slot_poly(omega: Matrix, n: int) -> Poly:
    """w = sum_ij omega_ij u_i v_j over pair space."""
    pair = pair_space(n)
    width = 2 * n
    terms = {}
    for i in range(width):
        for j in range(width):
            c = omega[i, j]
            if c:
                exps = [0] * (2 * width)
                exps[i] += 1
                exps[width + j] += 1
                terms[tuple(exps)] = c
    return Poly(pair, terms)


# ---------------------------------------------------------------------------
# Generating-function classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HClass:
    """Classification of an odd coefficient list a1, a3, a5, ...

    tag "sinh":    h = c*sinh(mu_*x); reported as (mu_squared, scale = c*mu_)
                   to stay inside the field without square roots.
    tag "linear":  h = c*x; scale = c.
    tag "zero":    h identically zero.
    tag "neither": the recurrence a_{k+2}(k+1)(k+2) = mu^2 a_k fails at
                   witness_index (expected vs found recorded).
    """

    tag: str
    mu_squared: scalars.Coefficient | None = None
    scale: scalars.Coefficient | None = None
    witness_index: int | None = None
    expected: scalars.Coefficient | None = None
    found: scalars.Coefficient | None = None


def classify_h(series: Sequence[scalars.Coefficient]) -> HClass:
    """Classify an odd-coefficient list against h'' = mu^2 * h.

    The list gives a1, a3, a5, ... up to the truncation order.  A leading
    zero with any nonzero follower is unclassifiable (a generating function
    with h'(0) = 0 is identically zero).
    """
    series = list(series)
    if not series:
        raise ValueError("empty coefficient list")
    a1 = series[0]
    if not a1:
        for idx, ak in enumerate(series[1:], start=1):
            if ak:
                return HClass(
                    tag="neither",
                    witness_index=2 * idx + 1,
                    expected=scalars.ZERO,
                    found=ak,
                )
        return HClass(tag="zero")
    if len(series) == 1:
        return HClass(tag="linear", scale=a1)
    mu2 = (series[1].scale_int(6)) / a1
    for idx in range(1, len(series) - 1):
        k = 2 * idx + 1
        expected = mu2 * series[idx] / scalars.Coefficient.from_int((k + 1) * (k + 2))
        if series[idx + 1] != expected:
            return HClass(
                tag="neither",
                witness_index=k + 2,
                expected=expected,
                found=series[idx + 1],
            )
    if not mu2:
        return HClass(tag="linear", scale=a1)
    return HClass(tag="sinh", mu_squared=mu2, scale=a1)


# ---------------------------------------------------------------------------
# Structured kernels and the fitting pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StructuredLieKernel:
    """A bracket kernel in normal form: coboundary dressing times h(w)."""

    n: int
    chi: Poly
    omega: Matrix
    h_series: tuple[scalars.Coefficient, ...]

    def __post_init__(self):
        if self.chi.space != sigma_space(self.n):
            raise SpaceMismatchError("chi must live on sigma space")
        if not self.omega.is_antisymmetric:
            raise ValueError("omega must be antisymmetric")

    def expand(self, truncation_degree: int) -> RawLieKernel:
        """The kernel as a polynomial, truncated at the given total degree."""
        from .star import coboundary

        w = bilinear_first_slot_poly(self.omega, self.n)
        hw = Poly.zero(w.space)
        for idx, coeff in enumerate(self.h_series):
            power = 2 * idx + 1
            if 2 * power > truncation_degree and idx > 0:
                break
            if coeff:
                hw = hw + (w**power).scale(coeff)
        dress = exp_truncated(coboundary(self.chi), truncation_degree)
        return RawLieKernel(
            self.n, (dress * hw).truncate_degree(truncation_degree)
        )


@dataclass(frozen=True)
class CenterGenerator:
    generator: Poly
    verified: bool


@dataclass(frozen=True)
class Theorem2Report:
    """Everything the classification pipeline established about a kernel."""

    n: int
    fit_degree: int
    status: str  # "moyal-class" | "poisson-class" | "degenerate" | "neither" | "axioms-failed"
    axioms: LieAxiomReport
    omega: Matrix | None = None
    rank: int | None = None
    kernel_basis: list[Vector] = field(default_factory=list)
    chi: Poly | None = None
    h_series: tuple[scalars.Coefficient, ...] | None = None
    h_class: HClass | None = None
    residual_witness: tuple[Exponents, scalars.Coefficient] | None = None
    failure: str | None = None
    center_generators: list[CenterGenerator] = field(default_factory=list)
    isomorphism_note: str | None = None

    @property
    def passed(self) -> bool:
        return self.status in ("moyal-class", "poisson-class", "degenerate")


def _fit_structured(
    a: Poly, n: int, w: Poly, fit_degree: int
) -> tuple[Poly, list[scalars.Coefficient], tuple | None]:
    """Degreewise solve of A = exp(coboundary chi) * h(w) up to fit_degree.

    Returns (chi, h_series, residual_witness); a non-None witness means the
    input is not of normal form at this degree and the other outputs are
    partial.  h is normalized with h'(0) = 1, the scale being carried by w.
    """
    from .star import coboundary

    width = 2 * n
    sig = sigma_space(n)
    chi = Poly.zero(sig)
    found: dict[int, scalars.Coefficient] = {1: scalars.ONE}
    a_cut = a.truncate_degree(fit_degree)

    def reconstruction() -> Poly:
        hw = Poly.zero(w.space)
        for power, coeff in found.items():
            if coeff:
                hw = hw + (w**power).truncate_degree(fit_degree).scale(coeff)
        return (exp_truncated(coboundary(chi), fit_degree) * hw).truncate_degree(
            fit_degree
        )

    u_block = range(0, width)
    v_block = range(width, 2 * width)

    for d in range(3, fit_degree + 1):
        residual = (a_cut - reconstruction()).homogeneous_component(d)
        if residual.is_zero:
            if d % 2 == 0 and (d // 2) % 2 == 1 and d >= 6:
                found[d // 2] = scalars.ZERO
            continue
        if d >= 4:
            e_part = residual.block_component((u_block, v_block), (2, d - 2))
            if not e_part.is_zero:
                quotient, rem = divide_exact(e_part, w)
                if not rem.is_zero:
                    return chi, _series_list(found), rem.sorted_terms()[0]
                gradient = [Poly.zero(sig) for _ in range(width)]
                for exps, coeff in quotient.terms.items():
                    if sum(exps[:width]) != 1:
                        return chi, _series_list(found), (exps, coeff)
                    i = exps.index(1)
                    gradient[i] = gradient[i] + Poly.monomial(
                        sig, exps[width:], -coeff
                    )
                chi_new = Poly.zero(sig)
                for i in range(width):
                    if gradient[i].terms:
                        shift = [0] * width
                        shift[i] = 1
                        chi_new = chi_new + gradient[i].map_exponents(
                            lambda e, s=tuple(shift): tuple(
                                a + b for a, b in zip(e, s)
                            ),
                            sig,
                        )
                chi = chi + chi_new.scale_fraction(Fraction(1, d - 2))
                residual = (a_cut - reconstruction()).homogeneous_component(d)
        if d % 2 == 0 and (d // 2) % 2 == 1 and d >= 6:
            k = d // 2
            wk = (w**k).homogeneous_component(d)
            if residual.is_zero:
                found[k] = scalars.ZERO
                continue
            lead_exps, lead_coeff = wk.leading_term()
            cand = residual.terms.get(lead_exps)
            if cand is None:
                return chi, _series_list(found), residual.sorted_terms()[0]
            ratio = cand / lead_coeff
            if residual != wk.scale(ratio):
                diff = residual - wk.scale(ratio)
                return chi, _series_list(found), diff.sorted_terms()[0]
            found[k] = ratio
        elif not residual.is_zero:
            return chi, _series_list(found), residual.sorted_terms()[0]

    final = (a_cut - reconstruction()).truncate_degree(fit_degree)
    if not final.is_zero:  # pragma: no cover - the degree loop should catch it
        return chi, _series_list(found), final.sorted_terms()[0]
    return chi, _series_list(found), None


def _series_list(found: dict[int, scalars.Coefficient]):
    max_k = max(found)
    ks = [k for k in range(1, max_k + 1) if k % 2 == 1]
    return [found.get(k, scalars.ZERO) for k in ks]


def apply_bracket_kernel(raw: RawLieKernel, f: Poly, g: Poly) -> Poly:
    """One bidifferential application of the kernel to a pair of symbols."""
    from .star import _tensor_space

    n = raw.n
    space = phase_space(n)
    if f.space != space or g.space != space:
        raise SpaceMismatchError("operands must live on the kernel's phase space")
    tensor = _tensor_space(n)
    op = DiffOp.from_sigma_poly(Poly(tensor, dict(raw.a.terms)))
    width = 2 * n
    out = Poly.zero(space)
    for ef, cf in f.terms.items():
        for eg, cg in g.terms.items():
            target = Poly.monomial(tensor, ef + eg, cf * cg)
            applied = op.apply_once(target)
            out = out + applied.map_exponents(
                lambda e: tuple(x + y for x, y in zip(e[:width], e[width:])), space
            )
    return out


def bracket_kernel_of(kernel: StarKernel, truncation_degree: int) -> RawLieKernel:
    """The bracket kernel (exp(b) - swap) / (2 mu) of a product kernel, truncated."""
    b = kernel.exponent()
    eb = exp_truncated(b, truncation_degree)
    swapped = slot_swap(eb, kernel.n)
    half_inv_mu = (scalars.MU * 2).inverse()
    return RawLieKernel(kernel.n, (eb - swapped).scale(half_inv_mu))


def center_generators_from_kernel(
    raw: RawLieKernel,
    kernel_basis: list[Vector],
    max_degree: int,
    verify_degree: int,
) -> list[CenterGenerator]:
    """Monomials in the coordinates dual to Ker omega, bracket-verified."""
    from itertools import combinations_with_replacement, product

    n = raw.n
    space = phase_space(n)
    duals = []
    for vec in kernel_basis:
        form = Poly.zero(space)
        for idx, coeff in enumerate(vec):
            if coeff:
                exps = [0] * len(space)
                exps[idx] = 1
                form = form + Poly.monomial(space, tuple(exps), coeff)
        duals.append(form)
    candidates = [Poly.one(space)]
    for degree in range(1, max_degree + 1):
        for combo in combinations_with_replacement(range(len(duals)), degree):
            prod = Poly.one(space)
            for k in combo:
                prod = prod * duals[k]
            candidates.append(prod)
    monomials = [
        Poly.monomial(space, exps)
        for exps in product(range(verify_degree + 1), repeat=2 * n)
        if sum(exps) <= verify_degree
    ]
    out = []
    for cand in candidates:
        verified = all(
            apply_bracket_kernel(raw, cand, g).is_zero
            and apply_bracket_kernel(raw, g, cand).is_zero
            for g in monomials
        )
        out.append(CenterGenerator(generator=cand, verified=verified))
    return out


def theorem2_pipeline(
    raw: RawLieKernel,
    fit_degree: int,
    center_degree: int = 2,
    verify_degree: int | None = None,
) -> Theorem2Report:
    """Classify a bracket kernel up to the given fit degree.

    Nondegenerate omega: fit the coboundary dressing and the odd generating
    series degreewise, classify the series, and verify the reconstruction
    reproduces the kernel exactly through fit_degree.  Degenerate omega:
    enumerate and verify center generators instead.
    """
    axioms = lie_axiom_check(raw, truncation_degree=fit_degree)
    if not axioms.passed:
        return Theorem2Report(
            n=raw.n,
            fit_degree=fit_degree,
            status="axioms-failed",
            axioms=axioms,
            failure="antisymmetry/Jacobi/constants check failed",
        )
    try:
        omega_data = extract_omega(raw)
    except LieKernelError as err:
        return Theorem2Report(
            n=raw.n,
            fit_degree=fit_degree,
            status="neither",
            axioms=axioms,
            failure=str(err),
        )
    if not omega_data.nondegenerate:
        gens = center_generators_from_kernel(
            raw,
            omega_data.kernel_basis,
            center_degree,
            center_degree if verify_degree is None else verify_degree,
        )
        return Theorem2Report(
            n=raw.n,
            fit_degree=fit_degree,
            status="degenerate",
            axioms=axioms,
            omega=omega_data.omega,
            rank=omega_data.rank,
            kernel_basis=omega_data.kernel_basis,
            center_generators=gens,
            isomorphism_note=(
                "omega is degenerate: the kernel-dual coordinates generate a "
                "nontrivial center; no product-type normal form applies"
            ),
        )
    w = bilinear_first_slot_poly(omega_data.omega, raw.n)
    chi, series, witness = _fit_structured(raw.a, raw.n, w, fit_degree)
    if witness is not None:
        return Theorem2Report(
            n=raw.n,
            fit_degree=fit_degree,
            status="neither",
            axioms=axioms,
            omega=omega_data.omega,
            rank=omega_data.rank,
            chi=chi,
            residual_witness=witness,
            failure="kernel is not of coboundary-dressed h(w) form at this degree",
        )
    h_class = classify_h(series)
    if h_class.tag == "sinh":
        status = "moyal-class"
        note = (
            "isomorphic to the hyperbolic-sine bracket: the ordering-change "
            "map built from chi removes the dressing"
        )
    elif h_class.tag == "linear":
        status = "poisson-class"
        note = (
            "isomorphic to the canonical antisymmetric-form bracket: the "
            "ordering-change map built from chi removes the dressing"
        )
    else:
        status = "neither"
        note = None
    return Theorem2Report(
        n=raw.n,
        fit_degree=fit_degree,
        status=status,
        axioms=axioms,
        omega=omega_data.omega,
        rank=omega_data.rank,
        chi=chi,
        h_series=tuple(series),
        h_class=h_class,
        isomorphism_note=note,
    )


# ---------------------------------------------------------------------------
# Bidifferential coefficient table (configuration dimension 1)
# ---------------------------------------------------------------------------


def bidiff_coefficients(
    raw: RawLieKernel, rmax: int, smax: int
) -> dict[tuple[int, int, int, int], scalars.Coefficient]:
    """The coefficient table of the bracket as a double derivative series.

    Entry (r, j, s, k) multiplies (d_q^j d_p^(r-j) f) (d_q^k d_p^(s-k) g) in
    the expansion of the bracket; it equals binom(r,j) binom(s,k) (-i)^(r+s)
    times the corresponding derivative of A at zero.  Only n = 1 is
    supported.
    """
    if raw.n != 1:
        raise ValueError("the coefficient table is defined for n = 1 only")
    a = raw.a
    table: dict[tuple[int, int, int, int], scalars.Coefficient] = {}
    for r in range(rmax + 1):
        for j in range(r + 1):
            for s in range(smax + 1):
                for k in range(s + 1):
                    coeff = a.terms.get((j, r - j, k, s - k), scalars.ZERO)
                    if coeff:
                        fact = (
                            comb(r, j)
                            * comb(s, k)
                            * factorial(j)
                            * factorial(r - j)
                            * factorial(k)
                            * factorial(s - k)
                        )
                        coeff = coeff.scale_int(fact) * scalars.neg_i_power(r + s)
                    table[(r, j, s, k)] = coeff
    return table


def reconstruct_bracket(
    table: dict[tuple[int, int, int, int], scalars.Coefficient], f: Poly, g: Poly
) -> Poly:
    """Evaluate the bracket of two symbols from a coefficient table (n = 1).

    The table entries carry the binomial-times-derivative normalization, so
    the double series reads  sum b_{rj,sk}/(r! s!) (d^j_q d^(r-j)_p f)(...g).
    """
    if phase_dimension(f.space) != 1 or f.space != g.space:
        raise SpaceMismatchError("table reconstruction expects n = 1 symbols")
    out = Poly.zero(f.space)
    for (r, j, s, k), coeff in table.items():
        if not coeff:
            continue
        df = f.differentiate(0, j).differentiate(1, r - j)
        if df.is_zero:
            continue
        dg = g.differentiate(0, k).differentiate(1, s - k)
        if dg.is_zero:
            continue
        out = out + (df * dg).scale(coeff).scale_fraction(
            Fraction(1, factorial(r) * factorial(s))
        )
    return out
