"""Sparse multivariate polynomials over Q(sqrt2), plus the univariate
coefficient-companion machinery that turns a polynomial's coefficients into a
certified lower bound on the size of its smallest zero.

Polynomials are immutable maps from exponent tuples to nonzero QSqrt2
coefficients; equality is term-map equality, and the canonical serialization
orders terms by graded lexicographic order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactnum import QS2_ONE, QS2_ZERO, QSqrt2

Monomial = tuple[int, ...]


def total_degree(m: Monomial) -> int:
    return sum(m)


def graded_lex_key(m: Monomial):
    """Sort key for the graded lexicographic term order."""
    return (sum(m), tuple(-e for e in m))


class MvPoly:
    """Sparse polynomial in `nvars` variables over QSqrt2."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, QSqrt2] | None = None):
        clean: dict[Monomial, QSqrt2] = {}
        if terms:
            for m, c in terms.items():
                if len(m) != nvars:
                    raise ValueError(f"monomial {m} does not have {nvars} exponents")
                if any(e < 0 for e in m):
                    raise ValueError(f"negative exponent in monomial {m}")
                c = QSqrt2.coerce(c)
                if c:
                    clean[tuple(m)] = c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MvPoly is immutable")

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "MvPoly":
        return MvPoly(nvars)

    @staticmethod
    def constant(c, nvars: int) -> "MvPoly":
        return MvPoly(nvars, {(0,) * nvars: QSqrt2.coerce(c)})

    @staticmethod
    def variable(i: int, nvars: int, coeff=QS2_ONE) -> "MvPoly":
        e = [0] * nvars
        e[i] = 1
        return MvPoly(nvars, {tuple(e): QSqrt2.coerce(coeff)})

    @staticmethod
    def linear_form(coeffs: Sequence, constant=QS2_ZERO) -> "MvPoly":
        n = len(coeffs)
        terms: dict[Monomial, QSqrt2] = {}
        for i, c in enumerate(coeffs):
            c = QSqrt2.coerce(c)
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        constant = QSqrt2.coerce(constant)
        if constant:
            terms[(0,) * n] = constant
        return MvPoly(n, terms)

    # -- ring operations --------------------------------------------------------

    def _check_compatible(self, other: "MvPoly"):
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: "MvPoly") -> "MvPoly":
        self._check_compatible(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, QS2_ZERO) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return MvPoly(self.nvars, terms)

    def __neg__(self) -> "MvPoly":
        return MvPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "MvPoly") -> "MvPoly":
        return self + (-other)

    def __mul__(self, other: "MvPoly") -> "MvPoly":
        self._check_compatible(other)
        terms: dict[Monomial, QSqrt2] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = terms.get(m, QS2_ZERO) + c1 * c2
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        return MvPoly(self.nvars, terms)

    def __pow__(self, n: int) -> "MvPoly":
        if n < 0:
            raise ValueError("negative polynomial power")
        out = MvPoly.constant(1, self.nvars)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c) -> "MvPoly":
        c = QSqrt2.coerce(c)
        if not c:
            return MvPoly.zero(self.nvars)
        return MvPoly(self.nvars, {m: cc * c for m, cc in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, MvPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- structure ---------------------------------------------------------------

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def graded_part(self, d: int) -> "MvPoly":
        return MvPoly(self.nvars, {m: c for m, c in self.terms.items() if sum(m) == d})

    def constant_term(self) -> QSqrt2:
        return self.terms.get((0,) * self.nvars, QS2_ZERO)

    def coefficient(self, m: Monomial) -> QSqrt2:
        return self.terms.get(tuple(m), QS2_ZERO)

    def partial(self, i: int) -> "MvPoly":
        terms: dict[Monomial, QSqrt2] = {}
        for m, c in self.terms.items():
            if m[i] == 0:
                continue
            e = list(m)
            coeff = c * e[i]
            e[i] -= 1
            terms[tuple(e)] = terms.get(tuple(e), QS2_ZERO) + coeff
        return MvPoly(self.nvars, terms)

    def gradient(self) -> list["MvPoly"]:
        return [self.partial(i) for i in range(self.nvars)]

    def gradient_at_zero(self) -> list[QSqrt2]:
        out = [QS2_ZERO] * self.nvars
        for m, c in self.terms.items():
            if sum(m) == 1:
                out[m.index(1)] = c
        return out

    def hessian(self) -> list[list["MvPoly"]]:
        firsts = self.gradient()
        return [[firsts[i].partial(j) for j in range(self.nvars)] for i in range(self.nvars)]

    def evaluate(self, point: Sequence) -> QSqrt2:
        pt = [QSqrt2.coerce(x) for x in point]
        if len(pt) != self.nvars:
            raise ValueError("evaluation point has wrong dimension")
        powers: list[list[QSqrt2]] = [[QS2_ONE] for _ in range(self.nvars)]
        total = QS2_ZERO
        for m, c in self.terms.items():
            v = c
            for i, e in enumerate(m):
                if e:
                    cache = powers[i]
                    while len(cache) <= e:
                        cache.append(cache[-1] * pt[i])
                    v = v * cache[e]
            total = total + v
        return total

    def substitute_linear(self, matrix: Sequence[Sequence], offset: Sequence | None = None) -> "MvPoly":
        """Compose with an affine change of variables: returns p(A*x + b).

        `matrix` is nvars x nvars (row i gives the expansion of old variable i
        in the new variables); degree never increases.
        """
        n = self.nvars
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ValueError("substitution matrix must be square of matching dimension")
        if offset is None:
            offset = [QS2_ZERO] * n
        images = [
            MvPoly.linear_form([QSqrt2.coerce(matrix[i][j]) for j in range(n)],
                               QSqrt2.coerce(offset[i]))
            for i in range(n)
        ]
        # cache powers of each image to keep repeated exponents cheap
        powers: list[list[MvPoly]] = [[MvPoly.constant(1, n)] for _ in range(n)]
        result = MvPoly.zero(n)
        for m, c in self.terms.items():
            term = MvPoly.constant(c, n)
            for i, e in enumerate(m):
                if not e:
                    continue
                cache = powers[i]
                while len(cache) <= e:
                    cache.append(cache[-1] * images[i])
                term = term * cache[e]
            result = result + term
        return result

    # -- serialization -------------------------------------------------------------

    def serialize(self) -> str:
        """Canonical text form: one `e1 e2 ... en : coeff` line per term in
        graded lexicographic order."""
        lines = [f"nvars {self.nvars}"]
        for m in sorted(self.terms, key=graded_lex_key):
            lines.append(" ".join(str(e) for e in m) + " : " + str(self.terms[m]))
        return "\n".join(lines) + "\n"

    @staticmethod
    def deserialize(text: str) -> "MvPoly":
        from .polyfile import parse_scalar  # deferred: avoids import cycle

        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("nvars "):
            raise ValueError("serialized polynomial must start with 'nvars <n>'")
        nvars = int(lines[0].split()[1])
        terms: dict[Monomial, QSqrt2] = {}
        for ln in lines[1:]:
            mono_part, _, coeff_part = ln.partition(":")
            m = tuple(int(tok) for tok in mono_part.split())
            terms[m] = parse_scalar(coeff_part.strip())
        return MvPoly(nvars, terms)

    def __repr__(self):
        if not self.terms:
            return f"MvPoly.zero({self.nvars})"
        parts = []
        for m in sorted(self.terms, key=graded_lex_key):
            mono = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}"
                            for i, e in enumerate(m) if e)
            c = str(self.terms[m])
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# Univariate polynomials and the coefficient companion bound
# ---------------------------------------------------------------------------


class UniPoly:
    """Dense univariate polynomial over QSqrt2, coefficients by ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = [QSqrt2.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, x) -> QSqrt2:
        x = QSqrt2.coerce(x)
        total = QS2_ZERO
        for c in reversed(self.coeffs):
            total = total * x + c
        return total

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)!r})"


def cauchy_companion(f: MvPoly) -> UniPoly:
    """Collapse a multivariate polynomial into the univariate comparison
    polynomial whose unique positive root bounds the size of f's zeros.

    Coefficient of degree j is the sum of |c| over all total-degree-j terms
    (absolute value taken in QSqrt2 as a real number); the constant term is
    -|f(0)|, which must be nonzero.
    """
    const = f.constant_term()
    if not const:
        raise ValueError("companion bound requires a nonzero constant term")
    degree = f.degree()
    out = [QS2_ZERO] * (degree + 1)
    for m, c in f.terms.items():
        out[sum(m)] = out[sum(m)] + abs(c)
    out[0] = -abs(const)
    return UniPoly(out)


def companion_root_lower_bound(f0: UniPoly, tol: Fraction = Fraction(1, 10**7)) -> Fraction:
    """Certified rational lower bound on the unique positive root of f0.

    Requires the single-sign-change shape produced by `cauchy_companion`
    (negative constant term, non-negative higher coefficients, at least one
    positive); this is verified.  Returns r with f0(r) < 0, hence r below the
    root, with the root within `tol` above r.
    """
    lo_bracket, hi_bracket = _companion_bracket(f0)
    lo, hi = lo_bracket, hi_bracket
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if f0.evaluate(mid).sign() < 0:
            lo = mid
        else:
            hi = mid
    return lo


def companion_root_enclosure(f0: UniPoly, tol: Fraction = Fraction(1, 10**7)) -> tuple[Fraction, Fraction]:
    """Bracket [lo, hi] around the unique positive root with hi - lo <= tol
    and f0(lo) < 0 <= f0(hi)."""
    lo, hi = _companion_bracket(f0)
    tol = Fraction(tol)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if f0.evaluate(mid).sign() < 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _companion_bracket(f0: UniPoly) -> tuple[Fraction, Fraction]:
    coeffs = f0.coeffs
    if len(coeffs) < 2:
        raise ValueError("companion polynomial must have positive degree")
    if coeffs[0].sign() >= 0:
        raise ValueError("companion polynomial must have negative constant term")
    non_const_signs = [c.sign() for c in coeffs[1:]]
    if any(s < 0 for s in non_const_signs):
        raise ValueError("companion polynomial has a negative non-constant coefficient")
    if all(s == 0 for s in non_const_signs):
        raise ValueError("companion polynomial has no positive coefficient")
    # start from 1 + (sum of non-constant coefficients)/|constant| and grow
    # until the value is verifiably positive; the growth loop terminates
    # because the leading coefficient is positive
    total = QS2_ZERO
    for c in coeffs[1:]:
        total = total + c
    ratio = (total / abs(coeffs[0])).enclosure(Fraction(1, 4))
    hi = 1 + ratio.hi
    while f0.evaluate(hi).sign() <= 0:
        hi = 2 * hi + 1
    return Fraction(0), hi


# convenience alias matching the operation's role
positive_root_lower_bound = companion_root_lower_bound
