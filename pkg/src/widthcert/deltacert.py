"""Certification pipeline for the extremal hollow tetrahedron.

The model: a tetrahedron with vertex coordinates in Q(sqrt2), hollow for an
affine lattice spanned by one lattice point per facet, attaining lattice
width 2 + sqrt2 in seven dual directions at once.  Moving the four facet
points by a perturbation vector t (eight free coordinates after the facet
coplanarity constraints) moves the lattice; the pipeline certifies that the
width of the tetrahedron strictly drops for every small nonzero t, and
produces an explicit neighborhood radius in symmetry-adapted coordinates.

Everything here is exact.  The only approximate-looking outputs are the
certified rational lower bounds of radii, which are one-sided by
construction; displayed 5-decimal figures are rounded separately and are
presentation only.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .exactnum import QS2_ONE, QS2_ZERO, QSqrt2, SQRT2
from .exactlinalg import (
    PolyMatrix,
    QMatrix,
    adjugate_poly,
    det_field,
    det_poly,
    inverse_field,
    is_negative_definite,
    kernel_basis,
    rank,
    restrict_quadratic_form,
    spans_same_space,
)
from .mvpoly import MvPoly, UniPoly, cauchy_companion, companion_root_enclosure
from .widthlab import (
    AffineLattice,
    Functional,
    Polytope,
    barycentric_coordinates,
    dual_lattice,
    facet_hyperplanes,
    hollow_check,
    lattice_width,
)

NVARS = 8
WIDTH_VALUE = QSqrt2(2, 1)  # the width being defended: 2 + sqrt2


class CertificationError(AssertionError):
    """A structural check of the model failed (implementation bug signal)."""


# ---------------------------------------------------------------------------
# fixed model data
# ---------------------------------------------------------------------------

_A_VERTICES = (
    (QSqrt2(2, 1), QSqrt2(0, 1), QSqrt2(2, 1)),
    (QSqrt2(0, -1), QSqrt2(2, 1), QSqrt2(-2, -1)),
    (QSqrt2(-2, -1), QSqrt2(0, -1), QSqrt2(2, 1)),
    (QSqrt2(0, 1), QSqrt2(-2, -1), QSqrt2(-2, -1)),
)

_FACET_POINTS = (
    (-1, -1, -1),
    (1, -1, 1),
    (1, 1, -1),
    (-1, 1, 1),
)

#: integer dual-basis coefficient vectors of the seven width-attaining
#: directions (with respect to the lattice basis built from the facet points)
_DUAL_INT_VECTORS = (
    (1, 1, 1),
    (1, 0, 0),
    (0, 0, 1),
    (0, 1, 0),
    (0, 1, 1),
    (1, 0, 1),
    (1, 1, 0),
)

#: index pairs (i, j) with difference-body vertex a_i - a_j attaining the
#: width for the first six directions; the seventh direction ties at two
#: vertex pairs and is excluded from the perturbation analysis (no loss of
#: generality: its width stays >= the minimum of the others near t = 0)
_ATTAINMENT_PAIRS = ((0, 3), (2, 3), (1, 2), (0, 1), (0, 2), (1, 3))

_MULTIPLIERS = (QS2_ONE, QS2_ONE, QS2_ONE, QS2_ONE, SQRT2, SQRT2)


@dataclass(frozen=True)
class DeltaModel:
    """Fixed data of the extremal configuration."""

    vertices: tuple
    facet_points: tuple
    dual_int_vectors: tuple
    attainment_diffs: tuple
    multipliers: tuple
    lattice: AffineLattice
    polytope: Polytope


def build_delta_model(check: bool = True) -> DeltaModel:
    """Construct the model constants and (by default) verify every structural
    invariant: facet incidences, hollowness, the exact width with exactly
    seven attaining directions, and their match with the dual-basis vectors.
    """
    a = tuple(tuple(QSqrt2.coerce(x) for x in v) for v in _A_VERTICES)
    p = tuple(tuple(QSqrt2.coerce(x) for x in v) for v in _FACET_POINTS)
    basis = tuple(
        tuple(p[j][k] - p[0][k] for k in range(3)) for j in (3, 1, 2)
    )
    lattice = AffineLattice(p[0], basis)
    poly = Polytope(a)
    diffs = tuple(
        tuple(a[i][k] - a[j][k] for k in range(3)) for i, j in _ATTAINMENT_PAIRS
    )
    model = DeltaModel(
        vertices=a,
        facet_points=p,
        dual_int_vectors=_DUAL_INT_VECTORS,
        attainment_diffs=diffs,
        multipliers=_MULTIPLIERS,
        lattice=lattice,
        polytope=poly,
    )
    if check:
        _check_model(model)
    return model


def _check_model(model: DeltaModel):
    # each facet point lies strictly inside the facet opposite the same-index vertex
    facets = facet_hyperplanes(model.polytope)
    for i in range(4):
        if facets[i](model.facet_points[i]).sign() != 0:
            raise CertificationError(f"facet point {i} is off its facet plane")
        bary = barycentric_coordinates(model.facet_points[i], model.polytope)
        if bary[i].sign() != 0:
            raise CertificationError(f"facet point {i} has nonzero coordinate on its vertex")
        if any(bary[j].sign() <= 0 for j in range(4) if j != i):
            raise CertificationError(f"facet point {i} is not interior to its facet")

    result = hollow_check(model.polytope, model.lattice)
    if not result.hollow:
        raise CertificationError(f"model polytope is not hollow: witness {result.witness}")

    wr = lattice_width(model.polytope, model.lattice)
    if wr.width != WIDTH_VALUE:
        raise CertificationError(f"lattice width is {wr.width}, expected {WIDTH_VALUE}")
    if len(wr.minimizers) != 7:
        raise CertificationError(f"expected 7 width minimizers, got {len(wr.minimizers)}")
    duals = dual_lattice(model.lattice)
    expected = {
        Functional([
            sum((duals[k].coeffs[r] * u[k] for k in range(3)), QS2_ZERO)
            for r in range(3)
        ]).canonical_sign()
        for u in model.dual_int_vectors
    }
    if set(wr.minimizers) != expected:
        raise CertificationError("width minimizers do not match the dual-basis vectors")

    grads = [hp.gradient_at_zero() for hp in build_h_polys(perturbation_ring(model), model)]
    combo = [QS2_ZERO] * NVARS
    for lam, g in zip(model.multipliers, grads):
        for k in range(NVARS):
            combo[k] = combo[k] + lam * g[k]
    if any(combo):
        raise CertificationError("multiplier combination of gradients is not zero")


# ---------------------------------------------------------------------------
# perturbation polynomials
# ---------------------------------------------------------------------------


class PerturbationRing:
    """Polynomial model of the perturbed lattice basis.

    Free variables (t_11, t_12, t_21, t_22, t_31, t_32, t_41, t_42): the
    first two displacement coordinates of each facet point.  The third
    coordinates are eliminated by keeping each moved point on its facet
    plane; the elimination forms are derived from the facet normals.
    """

    def __init__(self, model: DeltaModel):
        self.model = model
        facets = facet_hyperplanes(model.polytope)
        self.elimination: list[MvPoly] = []
        for i in range(4):
            n = facets[i].normal
            if not n[2]:
                raise CertificationError("facet normal has zero third coordinate")
            t1 = MvPoly.variable(2 * i, NVARS)
            t2 = MvPoly.variable(2 * i + 1, NVARS)
            inv = n[2].inverse()
            self.elimination.append(
                t1.scale(-n[0] * inv) + t2.scale(-n[1] * inv)
            )
        points = [self.perturbed_point(i) for i in range(4)]
        rows = []
        for j in (3, 1, 2):
            rows.append([points[j][k] - points[0][k] for k in range(3)])
        self.matrix = PolyMatrix(rows)
        if self.matrix.evaluate([QS2_ZERO] * NVARS) != model.lattice.basis_matrix():
            raise CertificationError("perturbation matrix does not restrict to the lattice basis")
        self.adjugate = adjugate_poly(self.matrix)
        self.det = det_poly(self.matrix, method="laplace")

    def perturbed_point(self, i: int) -> list[MvPoly]:
        base = self.model.facet_points[i]
        return [
            MvPoly.constant(base[0], NVARS) + MvPoly.variable(2 * i, NVARS),
            MvPoly.constant(base[1], NVARS) + MvPoly.variable(2 * i + 1, NVARS),
            MvPoly.constant(base[2], NVARS) + self.elimination[i],
        ]


def build_h_polys(ring: PerturbationRing, model: DeltaModel) -> list[MvPoly]:
    """The six degree-3 deficit polynomials: directional width times the
    basis determinant, shifted so the value at t = 0 is zero.  Positivity of
    h_i near 0 is equivalent to direction i still giving width >= 2+sqrt2."""
    out = []
    for idx in range(6):
        v = model.attainment_diffs[idx]
        u = model.dual_int_vectors[idx]
        acc = MvPoly.zero(NVARS)
        for r in range(3):
            for c in range(3):
                if u[c]:
                    acc = acc + ring.adjugate[r, c].scale(v[r] * u[c])
        h = acc - ring.det.scale(WIDTH_VALUE)
        if h.constant_term():
            raise CertificationError(f"deficit polynomial {idx} does not vanish at 0")
        if h.degree() != 3:
            raise CertificationError(f"deficit polynomial {idx} has degree {h.degree()}")
        out.append(h)
    return out


def check_dependence(grads: list[list[QSqrt2]], multipliers) -> bool:
    """Exact test that the multiplier combination of the gradients vanishes
    and that the gradients span a rank-5 space."""
    combo = [QS2_ZERO] * len(grads[0])
    for lam, g in zip(multipliers, grads):
        for k in range(len(g)):
            combo[k] = combo[k] + QSqrt2.coerce(lam) * g[k]
    if any(combo):
        return False
    return rank(grads) == 5


def linear_parts(h_polys: list[MvPoly], multipliers) -> list[MvPoly]:
    return [h.scale(lam).graded_part(1) for h, lam in zip(h_polys, multipliers)]


def quadratic_parts(h_polys: list[MvPoly], multipliers) -> list[MvPoly]:
    return [h.scale(lam).graded_part(2) for h, lam in zip(h_polys, multipliers)]


def build_h_aggregate(h_polys: list[MvPoly], multipliers, c: Fraction) -> MvPoly:
    """Multiplier-weighted aggregate sum((c - l_i) * lam_i * h_i); its
    gradient at 0 vanishes because the l_i sum to zero."""
    c = Fraction(c)
    if c <= 0:
        raise ValueError("aggregate weight c must be positive")
    total = MvPoly.zero(NVARS)
    for h, lam in zip(h_polys, multipliers):
        weighted = h.scale(lam)
        l_part = weighted.graded_part(1)
        factor = MvPoly.constant(c, NVARS) - l_part
        total = total + factor * weighted
    if any(x for x in total.gradient_at_zero()):
        raise CertificationError("aggregate gradient at 0 is not zero")
    return total


def quadratic_form_hessian(p: MvPoly) -> QMatrix:
    """Constant Hessian matrix of the degree-2 part of p."""
    q = p.graded_part(2)
    entries = [[QS2_ZERO] * NVARS for _ in range(NVARS)]
    for m, coeff in q.terms.items():
        support = [i for i, e in enumerate(m) if e]
        if len(support) == 1:
            i = support[0]
            entries[i][i] = entries[i][i] + 2 * coeff
        else:
            i, j = support
            entries[i][j] = entries[i][j] + coeff
            entries[j][i] = entries[j][i] + coeff
    return QMatrix(entries)


#: the six gradient vectors of the deficit polynomials at 0, pinned as
#: published: row i is (integer part vector, sqrt2 part vector) with the
#: scale factors (4, 2) for the first four rows and (8, 8) for the last two
_GRADIENT_TABLE = (
    (4, (-1, 1, -1, -2, 0, 0, -2, 1), 2, (-2, 0, 1, -1, 0, 0, -3, 1)),
    (4, (-2, 1, 0, 0, 1, 2, 1, 1), 2, (-1, -1, 0, 0, 1, 3, 0, 2)),
    (4, (0, 0, 2, -1, 1, -1, 1, 2), 2, (0, 0, 3, -1, 2, 0, -1, 1)),
    (4, (-1, -2, -1, -1, 2, -1, 0, 0), 2, (-1, -3, 0, -2, 1, 1, 0, 0)),
    (8, (1, 0, -1, 0, -1, 0, 1, 0), 8, (1, 0, 0, 0, -1, 0, 0, 0)),
    (8, (0, 1, 0, 1, 0, -1, 0, -1), 8, (0, 0, 0, 1, 0, 0, 0, -1)),
)


def expected_gradients() -> list[list[QSqrt2]]:
    """The pinned gradient table as exact vectors."""
    out = []
    for s_rat, rat, s_irr, irr in _GRADIENT_TABLE:
        out.append([QSqrt2(s_rat * a, s_irr * b) for a, b in zip(rat, irr)])
    return out


#: kernel parametrization of the common null space of the six gradients,
#: pinned as published; the computed kernel must span the same space
KERNEL_PARAMETRIZATION = (
    (QS2_ONE, QS2_ZERO, QS2_ZERO, QS2_ZERO,
     QSqrt2(0, Fraction(1, 2)), QSqrt2(0, Fraction(1, 2)),
     QSqrt2(0, Fraction(-1, 2)), QSqrt2(-1, Fraction(1, 2))),
    (QS2_ZERO, QS2_ONE, QS2_ZERO, QSqrt2(0, -1),
     QSqrt2(1, Fraction(-1, 2)), QSqrt2(1, Fraction(-1, 2)),
     QSqrt2(0, Fraction(1, 2)), QSqrt2(1, Fraction(-3, 2))),
    (QS2_ZERO, QS2_ZERO, QS2_ONE, QSqrt2(-1),
     QSqrt2(1, -1), QS2_ONE, QS2_ZERO, QSqrt2(0, -1)),
)


@dataclass(frozen=True)
class LocalCertificate:
    c: Fraction
    gradients_match_published: bool
    dependence_ok: bool
    gradient_rank: int
    kernel_dim: int
    kernel_matches: bool
    restricted_hessian: QMatrix
    restricted_negative_definite: bool
    full_hessian_negative_definite: bool

    @property
    def verdict(self) -> bool:
        return (
            self.gradients_match_published
            and self.dependence_ok
            and self.gradient_rank == 5
            and self.kernel_dim == 3
            and self.kernel_matches
            and self.restricted_negative_definite
            and self.full_hessian_negative_definite
        )


def local_maximality_certificate(c: Fraction, pipeline: "Pipeline | None" = None) -> LocalCertificate:
    """Second-order certificate that t = 0 is an isolated solution of the
    six deficit inequalities.

    The quadratic form restricted to the gradients' kernel is normalized by
    the unperturbed basis determinant, which rescales the deficit polynomials
    back to actual width differences (their multiplier combination has no
    linear part, so the normalization is exactly that constant).
    """
    c = Fraction(c)
    if c <= 0:
        raise ValueError("c must be positive")
    pl = pipeline or get_pipeline()
    grads = [h.gradient_at_zero() for h in pl.h_polys]
    grads_published = grads == expected_gradients()
    dep = check_dependence(grads, pl.model.multipliers)
    kern = kernel_basis(grads)
    matches = spans_same_space(kern, KERNEL_PARAMETRIZATION)

    q_sum = MvPoly.zero(NVARS)
    for q in quadratic_parts(pl.h_polys, pl.model.multipliers):
        q_sum = q_sum + q
    det0 = det_field(pl.model.lattice.basis_matrix())
    hq = quadratic_form_hessian(q_sum.scale(det0.inverse()))
    restricted = restrict_quadratic_form(hq, KERNEL_PARAMETRIZATION)

    h_aggregate = build_h_aggregate(pl.h_polys, pl.model.multipliers, c)
    full_h = quadratic_form_hessian(h_aggregate)

    return LocalCertificate(
        c=c,
        gradients_match_published=grads_published,
        dependence_ok=dep,
        gradient_rank=rank(grads),
        kernel_dim=len(kern),
        kernel_matches=matches,
        restricted_hessian=restricted,
        restricted_negative_definite=is_negative_definite(restricted),
        full_hessian_negative_definite=is_negative_definite(full_h),
    )


# ---------------------------------------------------------------------------
# symmetry-adapted coordinates
# ---------------------------------------------------------------------------


class SCoords:
    """The 8x8 change to the symmetry-adapted facet coordinates
    (s^h_1, s^v_1, ..., s^h_4, s^v_4) and its exact inverse.

    Per facet, s^v is the barycentric coordinate of the moved point along the
    facet's middle vertex and s^h the difference of the two outer ones, so an
    L_infty ball in s is a direct product of squares drawn on the facets.
    """

    def __init__(self):
        quarter = Fraction(1, 4)
        r2m1 = QSqrt2(-1, 1)   # sqrt2 - 1
        onemr2 = QSqrt2(1, -1)  # 1 - sqrt2
        one = QS2_ONE
        neg = -QS2_ONE
        zero = QS2_ZERO
        blocks = (
            ((r2m1, neg), (neg, onemr2)),
            ((one, r2m1), (r2m1, neg)),
            ((onemr2, one), (one, r2m1)),
            ((neg, onemr2), (onemr2, one)),
        )
        rows = []
        for bi, block in enumerate(blocks):
            for r in range(2):
                row = [zero] * NVARS
                for cc in range(2):
                    row[2 * bi + cc] = block[r][cc] * quarter
                rows.append(row)
        self.s_from_t = QMatrix(rows)
        self.t_from_s = inverse_field(self.s_from_t)

    def to_s(self, p: MvPoly) -> MvPoly:
        """Rewrite a polynomial in t as a polynomial in s (substitute t = T s)."""
        return p.substitute_linear(self.t_from_s.rows)

    def to_t(self, p: MvPoly) -> MvPoly:
        return p.substitute_linear(self.s_from_t.rows)

    def s_of_facet_displacement(self, i: int, t1, t2) -> tuple[QSqrt2, QSqrt2]:
        """(s^h_i, s^v_i) of an in-facet displacement (t_i1, t_i2)."""
        t1, t2 = QSqrt2.coerce(t1), QSqrt2.coerce(t2)
        sh = self.s_from_t.rows[2 * i][2 * i] * t1 + self.s_from_t.rows[2 * i][2 * i + 1] * t2
        sv = self.s_from_t.rows[2 * i + 1][2 * i] * t1 + self.s_from_t.rows[2 * i + 1][2 * i + 1] * t2
        return sh, sv


@dataclass(frozen=True)
class SymmetryCheck:
    vertex_cycle_ok: bool
    facet_point_cycle_ok: bool
    elimination_equivariant: bool
    s_shift_is_pair_rotation: bool

    @property
    def verdict(self) -> bool:
        return (
            self.vertex_cycle_ok
            and self.facet_point_cycle_ok
            and self.elimination_equivariant
            and self.s_shift_is_pair_rotation
        )


def _rotary_reflection(v):
    """Order-4 symmetry of the configuration: (x, y, z) -> (-y, x, -z)."""
    return (-v[1], v[0], -v[2])


def symmetry_check(pipeline: "Pipeline | None" = None) -> SymmetryCheck:
    """Verify the order-4 symmetry: vertices and facet points advance
    cyclically, the facet-plane eliminations are equivariant, and the induced
    map on s-coordinates is the cyclic shift of the four (s^h, s^v) pairs
    (a shift by two places in the flat coordinate vector)."""
    pl = pipeline or get_pipeline()
    model = pl.model
    vertex_ok = all(
        _rotary_reflection(model.vertices[i]) == model.vertices[(i + 1) % 4]
        for i in range(4)
    )
    point_ok = all(
        _rotary_reflection(model.facet_points[i]) == model.facet_points[(i + 1) % 4]
        for i in range(4)
    )

    # induced action on the free displacement coordinates:
    # block i+1 of the image is (-t_i2, t_i1)
    perm = [[QS2_ZERO] * NVARS for _ in range(NVARS)]
    for i in range(4):
        j = (i + 1) % 4
        perm[2 * j][2 * i + 1] = -QS2_ONE
        perm[2 * j + 1][2 * i] = QS2_ONE
    P = QMatrix(perm)

    # eliminations must transform like the third coordinate: z -> -z
    elim_ok = True
    for i in range(4):
        j = (i + 1) % 4
        image = pl.ring.elimination[j].substitute_linear(P.rows)
        if image != -pl.ring.elimination[i]:
            elim_ok = False

    # conjugate to s coordinates and compare to the pair shift
    PS = pl.scoords.s_from_t.matmul(P).matmul(pl.scoords.t_from_s)
    shift = [[QS2_ZERO] * NVARS for _ in range(NVARS)]
    for i in range(4):
        j = (i + 1) % 4
        shift[2 * j][2 * i] = QS2_ONE
        shift[2 * j + 1][2 * i + 1] = QS2_ONE
    shift_ok = PS == QMatrix(shift)

    return SymmetryCheck(
        vertex_cycle_ok=vertex_ok,
        facet_point_cycle_ok=point_ok,
        elimination_equivariant=elim_ok,
        s_shift_is_pair_rotation=shift_ok,
    )


# ---------------------------------------------------------------------------
# pipeline cache
# ---------------------------------------------------------------------------


class Pipeline:
    """One-time construction of everything the condition bounds share."""

    def __init__(self):
        self.model = build_delta_model(check=False)
        self.ring = perturbation_ring(self.model)
        self.h_polys = build_h_polys(self.ring, self.model)
        self.scoords = SCoords()
        self.linear_s = [
            self.scoords.to_s(l)
            for l in linear_parts(self.h_polys, self.model.multipliers)
        ]
        self.adjugate_s = self.ring.adjugate.map_entries(self.scoords.to_s)


_RING_CACHE: dict[int, PerturbationRing] = {}
_PIPELINE: Pipeline | None = None


def perturbation_ring(model: DeltaModel) -> PerturbationRing:
    key = id(model)
    if key not in _RING_CACHE:
        _RING_CACHE[key] = PerturbationRing(model)
    return _RING_CACHE[key]


def get_pipeline() -> Pipeline:
    global _PIPELINE
    if _PIPELINE is None:
        _PIPELINE = Pipeline()
    return _PIPELINE


# ---------------------------------------------------------------------------
# decimal formatting (exact integer arithmetic; no floats)
# ---------------------------------------------------------------------------


def format_decimals(x: Fraction, places: int = 5, mode: str = "round") -> str:
    """Fixed-point decimal string of a rational.  mode="round" rounds half
    away from zero; mode="trunc" rounds toward zero."""
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    x = abs(x)
    scaled = x * 10**places
    if mode == "round":
        n = (scaled.numerator * 2 + scaled.denominator) // (2 * scaled.denominator)
    elif mode == "trunc":
        n = scaled.numerator // scaled.denominator
    else:
        raise ValueError(f"unknown mode {mode!r}")
    digits = str(n).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def truncate_rational(x: Fraction, places: int = 7) -> Fraction:
    """Largest multiple of 10^-places that is <= x (for x >= 0)."""
    scale = 10**places
    return Fraction((x.numerator * scale) // x.denominator, scale)


def _display_5(lo: Fraction, hi: Fraction) -> str:
    """Rounded 5-decimal display of a value known to lie in [lo, hi]; the
    enclosure must be tight enough that both ends agree."""
    out = format_decimals(lo, 5, "round")
    if format_decimals(hi, 5, "round") != out:
        raise CertificationError("enclosure too wide for a 5-decimal display")
    return out


# ---------------------------------------------------------------------------
# the four condition bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadiusBound:
    """One certified neighborhood radius: a rational lower bound `certified`
    on the true threshold, a tight enclosure of that threshold, and the
    rounded table figure."""

    label: str
    certified: Fraction
    enclosure_lo: Fraction
    enclosure_hi: Fraction
    display: str
    detail: dict = field(default_factory=dict)


def det_orientation_bound() -> RadiusBound:
    """Condition (i): the perturbed basis determinant keeps its sign.

    The exact threshold is (sqrt2 - 1)/4: each facet point stays inside the
    open middle triangle of its facet as long as its (s^h, s^v) pair moves
    less than that, and any four points from the middle triangles span a
    tetrahedron with the same orientation.  The four corners of the closed
    square of that radius around the base point are verified against the
    middle triangle's inequalities.
    """
    pl = get_pipeline()
    radius = QSqrt2(Fraction(-1, 4), Fraction(1, 4))  # (sqrt2 - 1)/4

    # all four facet points sit at the same (s^h, s^v) by symmetry; verify
    base = None
    for i in range(4):
        pt = pl.model.facet_points[i]
        sh, sv = pl.scoords.s_of_facet_displacement(i, pt[0], pt[1])
        if base is None:
            base = (sh, sv)
        elif (sh, sv) != base:
            raise CertificationError("facet points have differing facet coordinates")
    assert base is not None
    sh0, sv0 = base
    if (sh0, sv0) != (QSqrt2(Fraction(1, 2), Fraction(-1, 4)), QSqrt2(0, Fraction(1, 4))):
        raise CertificationError("unexpected base facet coordinates")

    corners_ok = []
    for ds in (-radius, radius):
        for dv in (-radius, radius):
            sh, sv = sh0 + ds, sv0 + dv
            ok = (
                (QSqrt2(Fraction(1, 2)) - sv).sign() >= 0
                and (sv + sh).sign() >= 0
                and (sv - sh).sign() >= 0
            )
            corners_ok.append(ok)
    if not all(corners_ok):
        raise CertificationError("middle-triangle corner check failed")

    enc = radius.enclosure(Fraction(1, 10**9))
    certified = truncate_rational(enc.lo, 7)
    return RadiusBound(
        label="(i)",
        certified=certified,
        enclosure_lo=enc.lo,
        enclosure_hi=enc.hi,
        display=_display_5(enc.lo, enc.hi),
        detail={"exact": str(radius), "corners_checked": len(corners_ok)},
    )


_LINEAR_SUM_SMALL = QSqrt2(112, 64)
_LINEAR_SUM_LARGE = QSqrt2(192, 128)


def linear_bound(c: Fraction) -> RadiusBound:
    """Condition (ii): the six linear forms stay below c.

    The L_infty distance from the origin to {l = c} is c over the sum of
    absolute coefficient values; the sums are verified to be exactly
    112 + 64*sqrt2 (first four forms) and 192 + 128*sqrt2 (last two), so the
    binding radius is c / (192 + 128*sqrt2).
    """
    c = Fraction(c)
    if c <= 0:
        raise ValueError("c must be positive")
    pl = get_pipeline()
    sums = []
    for ls in pl.linear_s:
        total = QS2_ZERO
        for coeff in ls.terms.values():
            total = total + abs(coeff)
        sums.append(total)
    if sums[:4] != [_LINEAR_SUM_SMALL] * 4 or sums[4:] != [_LINEAR_SUM_LARGE] * 2:
        raise CertificationError("linear coefficient sums do not match the pinned values")
    exact = QSqrt2.coerce(c) / _LINEAR_SUM_LARGE
    enc = exact.enclosure(Fraction(1, 10**9))
    certified = truncate_rational(enc.lo, 7)
    return RadiusBound(
        label="(ii)",
        certified=certified,
        enclosure_lo=enc.lo,
        enclosure_hi=enc.hi,
        display=_display_5(enc.lo, enc.hi),
        detail={"exact": str(exact), "coefficient_sums": [str(s) for s in sums]},
    )


def attainment_bound(tol: Fraction = Fraction(1, 10**9)) -> RadiusBound:
    """Condition (iii): each of the six directions keeps attaining its width
    at the designated difference-body vertex.

    6 directions x 11 competing vertices give 66 quadratic comparisons; each
    is positive at 0 (verified exactly) and stays positive inside the ball
    whose radius is the unique positive root of its coefficient companion.
    Returns the minimum over all 66.
    """
    pl = get_pipeline()
    polys = attainment_polynomials(pl)
    if len(polys) != 66:
        raise CertificationError(f"expected 66 comparison polynomials, got {len(polys)}")
    best: tuple[Fraction, Fraction] | None = None
    for poly in polys:
        const = poly.constant_term()
        if const.sign() <= 0:
            raise CertificationError("comparison polynomial not positive at 0")
        lo, hi = companion_root_enclosure(cauchy_companion(poly), tol)
        if best is None or lo < best[0]:
            best = (lo, hi)
    assert best is not None
    lo, hi = best
    return RadiusBound(
        label="(iii)",
        certified=truncate_rational(lo, 7),
        enclosure_lo=lo,
        enclosure_hi=hi,
        display=_display_5(lo, hi),
        detail={"count": len(polys)},
    )


def attainment_polynomials(pipeline: Pipeline | None = None) -> list[MvPoly]:
    """The 66 quadratics (v_i - v) . adj(M)(s) . u_i over competing
    difference-body vertices v."""
    pl = pipeline or get_pipeline()
    model = pl.model
    vertices = list(model.attainment_diffs) + [
        tuple(-x for x in v) for v in model.attainment_diffs
    ]
    out = []
    for idx in range(6):
        vi = model.attainment_diffs[idx]
        u = model.dual_int_vectors[idx]
        for w in vertices:
            if w == vi:
                continue
            diff = [vi[r] - w[r] for r in range(3)]
            acc = MvPoly.zero(NVARS)
            for r in range(3):
                for cc in range(3):
                    if u[cc]:
                        acc = acc + pl.adjugate_s[r, cc].scale(diff[r] * u[cc])
            out.append(acc)
    return out


def hessian_matrix_s(c: Fraction, pipeline: Pipeline | None = None) -> PolyMatrix:
    """Second-derivative matrix of the aggregate (derivatives in t), with
    entries rewritten in s; entries are quadratic polynomials."""
    pl = pipeline or get_pipeline()
    h_aggregate = build_h_aggregate(pl.h_polys, pl.model.multipliers, c)
    hess_t = PolyMatrix(h_aggregate.hessian())
    return hess_t.map_entries(pl.scoords.to_s)


def hessian_bound(c: Fraction, tol: Fraction = Fraction(1, 10**9)) -> RadiusBound:
    """Condition (iv): the aggregate's second-derivative matrix stays
    negative definite.

    It is negative definite at 0 (checked), so by continuity it remains so
    on any connected neighborhood where its determinant never vanishes; the
    coefficient-companion root of the degree-16 determinant polynomial gives
    such a neighborhood.  This is the expensive step; the determinant is
    computed by the certified modular engine.
    """
    c = Fraction(c)
    cert = local_maximality_certificate(c)
    if not cert.full_hessian_negative_definite:
        raise ValueError(f"aggregate Hessian is not negative definite at 0 for c={c}")
    matrix = hessian_matrix_s(c)
    det = det_poly(matrix, method="modular")
    const = det.constant_term()
    if const.sign() <= 0:
        raise CertificationError("Hessian determinant at 0 is not positive")
    lo, hi = companion_root_enclosure(cauchy_companion(det), tol)
    return RadiusBound(
        label="(iv)",
        certified=truncate_rational(lo, 7),
        enclosure_lo=lo,
        enclosure_hi=hi,
        display=_display_5(lo, hi),
        detail={"det_degree": det.degree(), "det_terms": len(det.terms)},
    )


def hessian_section_bound(c: Fraction, keep_vars: int = 4,
                          tol: Fraction = Fraction(1, 10**9)) -> RadiusBound:
    """Smoke-mode variant of the Hessian condition: restricts to the section
    where the last 8 - keep_vars coordinates are zero.  NOT a certifying
    bound for the full neighborhood (a section cannot see all directions);
    only positivity and stability of the reduced computation are meaningful.
    """
    c = Fraction(c)
    matrix = hessian_matrix_s(c)

    def section(p: MvPoly) -> MvPoly:
        terms = {}
        for m, coeff in p.terms.items():
            if any(m[i] for i in range(keep_vars, NVARS)):
                continue
            terms[m[:keep_vars]] = coeff
        return MvPoly(keep_vars, terms)

    reduced = matrix.map_entries(section)
    det = det_poly(reduced, method="modular")
    if det.constant_term().sign() <= 0:
        raise CertificationError("sectioned Hessian determinant at 0 is not positive")
    lo, hi = companion_root_enclosure(cauchy_companion(det), tol)
    return RadiusBound(
        label="(iv-section)",
        certified=truncate_rational(lo, 7),
        enclosure_lo=lo,
        enclosure_hi=hi,
        display=_display_5(lo, hi),
        detail={"non_certifying": True, "kept_vars": keep_vars},
    )


# ---------------------------------------------------------------------------
# full certificate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertificateReport:
    c: Fraction
    local: LocalCertificate
    symmetry: SymmetryCheck
    bounds: dict
    overall: Fraction
    overall_display: str
    barycentric: Fraction
    barycentric_display: str
    hessian_included: bool
    elapsed_seconds: float

    @property
    def verdict(self) -> bool:
        return self.local.verdict and self.symmetry.verdict and self.overall > 0

    def to_kv(self) -> str:
        pairs = {
            "c": str(self.c),
            "verdict": "pass" if self.verdict else "fail",
            "local_verdict": "pass" if self.local.verdict else "fail",
            "symmetry_verdict": "pass" if self.symmetry.verdict else "fail",
            "hessian_included": "true" if self.hessian_included else "false",
            "overall_certified": str(self.overall),
            "overall_display": self.overall_display,
            "barycentric_certified": str(self.barycentric),
            "barycentric_display": self.barycentric_display,
        }
        for key, bound in self.bounds.items():
            if bound is None:
                pairs[f"radius_{key}"] = "skipped"
            else:
                pairs[f"radius_{key}_certified"] = str(bound.certified)
                pairs[f"radius_{key}_display"] = bound.display
        return "".join(f"{k}={v}\n" for k, v in sorted(pairs.items()))

    def to_json(self) -> str:
        data = {
            "c": str(self.c),
            "verdict": self.verdict,
            "local": {
                "gradients_match_published": self.local.gradients_match_published,
                "dependence_ok": self.local.dependence_ok,
                "gradient_rank": self.local.gradient_rank,
                "kernel_dim": self.local.kernel_dim,
                "kernel_matches": self.local.kernel_matches,
                "restricted_negative_definite": self.local.restricted_negative_definite,
                "full_hessian_negative_definite": self.local.full_hessian_negative_definite,
            },
            "symmetry": {
                "vertex_cycle_ok": self.symmetry.vertex_cycle_ok,
                "facet_point_cycle_ok": self.symmetry.facet_point_cycle_ok,
                "elimination_equivariant": self.symmetry.elimination_equivariant,
                "s_shift_is_pair_rotation": self.symmetry.s_shift_is_pair_rotation,
            },
            "bounds": {
                key: None if bound is None else {
                    "certified": str(bound.certified),
                    "display": bound.display,
                    "detail": {k: str(v) for k, v in bound.detail.items()},
                }
                for key, bound in self.bounds.items()
            },
            "overall": {"certified": str(self.overall), "display": self.overall_display},
            "barycentric": {"certified": str(self.barycentric), "display": self.barycentric_display},
            "hessian_included": self.hessian_included,
        }
        return json.dumps(data, sort_keys=True, indent=2)


def certify(c: Fraction, with_hessian: bool = False,
            tol: Fraction = Fraction(1, 10**9)) -> CertificateReport:
    """Run the complete neighborhood certification for a given weight c.

    Without `with_hessian` the expensive degree-16 determinant condition is
    skipped and the overall radius covers the other three conditions only.
    """
    c = Fraction(c)
    start = time.monotonic()
    local = local_maximality_certificate(c)
    sym = symmetry_check()
    bounds = {
        "i": det_orientation_bound(),
        "ii": linear_bound(c),
        "iii": attainment_bound(tol),
        "iv": hessian_bound(c, tol) if with_hessian else None,
    }
    present = [b for b in bounds.values() if b is not None]
    binding = min(present, key=lambda b: b.certified)
    overall = binding.certified
    overall_enc = (binding.enclosure_lo, binding.enclosure_hi)
    barycentric = overall / 2
    report = CertificateReport(
        c=c,
        local=local,
        symmetry=sym,
        bounds=bounds,
        overall=overall,
        overall_display=_display_5(*overall_enc),
        barycentric=barycentric,
        barycentric_display=_display_5(overall_enc[0] / 2, overall_enc[1] / 2),
        hessian_included=with_hessian,
        elapsed_seconds=time.monotonic() - start,
    )
    return report
