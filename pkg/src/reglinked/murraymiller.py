"""Reduction of a coupled first-order q-difference system to a single
higher-order equation for one chosen component.

The pipeline is: permute the target component first, triangularize the
coefficient matrix by conjugating with one-special-row transforms (with a
deterministic smallest-index swap rule), then back-substitute the rows to
eliminate every component but the first, and finally bring the equation to
a normal form (lowest shift at index zero, denominators cleared, common
polynomial factor removed, leading coefficient one when it is constant).
"""

from __future__ import annotations

from dataclasses import dataclass

from .linked import QDifferenceSystem
from .qalgebra import (
    BiPoly, RationalFunction, RfMatrix, bipoly_div_exact, bipoly_gcd,
    bipoly_lcm, mat_inverse_T, mat_mul, parse_rational,
)


class TriangularizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class QDifferenceEquation:
    """sum_i coeffs[i](x, q) * F(x * q^(step*i)) = 0, with coeffs[0] != 0
    and coeffs[-1] != 0."""

    step: int
    coeffs: tuple[RationalFunction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("an equation needs at least one coefficient")
        if self.coeffs[0].is_zero() or self.coeffs[-1].is_zero():
            raise ValueError("equation coefficients must be trimmed")

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __str__(self):
        parts = [f"p{self.step * i}: {c}" for i, c in enumerate(self.coeffs)]
        return "\n".join(parts)


def reorder(sys: QDifferenceSystem, order) -> QDifferenceSystem:
    """Simultaneous row/column permutation to the given label order."""
    order = tuple(order)
    if sorted(order) != sorted(sys.labels):
        raise ValueError("order must be a permutation of the system labels")
    pos = {lab: sys.labels.index(lab) for lab in order}
    rows = [[sys.matrix[pos[r], pos[c]] for c in order] for r in order]
    return QDifferenceSystem(sys.step, order, RfMatrix(rows), sys.start)


def reorder_first(sys: QDifferenceSystem, target) -> QDifferenceSystem:
    """Move the target label to the front; the other rows keep their order."""
    if target not in sys.labels:
        raise ValueError(f"unknown label {target!r}")
    rest = tuple(lab for lab in sys.labels if lab != target)
    return reorder(sys, (target,) + rest)


def _assert_triangular_shape(p, s):
    # rows 0..s-2 must have a superdiagonal 1 and zeros beyond it
    one = RationalFunction.one()
    n = p.nrows
    for i in range(s - 1):
        if p[i, i + 1] != one:
            raise TriangularizationError(
                f"shape invariant violated: entry ({i},{i + 1}) is not 1")
        for j in range(i + 2, n):
            if not p[i, j].is_zero():
                raise TriangularizationError(
                    f"shape invariant violated: entry ({i},{j}) is not 0")


def triangularize(sys: QDifferenceSystem):
    """Run the triangularization loop; returns (l', P) where P is the full
    matrix at the moment of return and its top-left l' x l' block is the
    reduced system.

    Deterministic: when a swap is needed, the smallest admissible index is
    chosen.
    """
    n = len(sys.labels)
    p = sys.matrix
    m = sys.step
    for s in range(1, n + 1):
        _assert_triangular_shape(p, s)
        row = s - 1
        if all(p[row, j].is_zero() for j in range(s, n)):
            return s, p
        if p[row, s].is_zero():
            t = next((j for j in range(s + 1, n) if not p[row, j].is_zero()), None)
            if t is None:
                # unreachable: the all-zero test above would have returned
                raise TriangularizationError("no pivot available for the swap")
            entries = [list(r) for r in p.entries]
            entries[s], entries[t] = entries[t], entries[s]
            for r in entries:
                r[s], r[t] = r[t], r[s]
            p = RfMatrix(entries)
        t_rows = [[RationalFunction(1) if i == j else RationalFunction(0)
                   for j in range(n)] for i in range(n)]
        for j in range(s, n):
            t_rows[s][j] = p[row, j]
        t_mat = RfMatrix(t_rows)
        p = mat_mul(mat_mul(t_mat.shift_x(-m), p), mat_inverse_T(t_mat))
    raise TriangularizationError("loop left without returning")  # unreachable


def eliminate(l_prime: int, p: RfMatrix, step: int) -> QDifferenceEquation:
    """Back-substitute the triangularized system into a single equation for
    the first component.

    Row i (for i < l') rewrites component i+1 at any shift in terms of
    component i one step lower and components j <= i at the same shift;
    substituting from the last component down leaves shifts of the first
    component only.  The shift range is then re-based at zero (an x
    substitution), which makes the result representable with indices 0..L.
    """
    s = l_prime
    zero = RationalFunction.zero()
    terms = {(s - 1, 0): RationalFunction(-1)}
    for j in range(s):
        c = p[s - 1, j]
        if not c.is_zero():
            terms[(j, 1)] = terms.get((j, 1), zero) + c
    for comp in range(s - 1, 0, -1):
        row = comp - 1
        new = {}

        def add(key, val):
            if val.is_zero():
                return
            cur = new.get(key)
            new[key] = val if cur is None else cur + val

        for (j, k), c in terms.items():
            if j != comp:
                add((j, k), c)
                continue
            add((comp - 1, k - 1), c)
            for j2 in range(comp):
                coeff = p[row, j2]
                if coeff.is_zero():
                    continue
                add((j2, k), -(c * coeff.shift_x(step * (k - 1))))
        terms = {k: v for k, v in new.items() if not v.is_zero()}
    if any(j != 0 for j, _ in terms):
        raise TriangularizationError("elimination left more than one component")
    shifts = sorted(k for (_, k) in terms)
    if not shifts:
        raise TriangularizationError("elimination produced the trivial equation")
    kmin = shifts[0]
    coeffs = []
    for k in range(kmin, shifts[-1] + 1):
        c = terms.get((0, k), zero)
        coeffs.append(c.shift_x(-step * kmin))
    # the extreme shifts carry nonzero coefficients by construction, so the
    # list is already trimmed; the constructor enforces it
    return QDifferenceEquation(step, tuple(coeffs))


def normalize_equation(eq: QDifferenceEquation) -> QDifferenceEquation:
    """Canonical form: clear denominators, remove the common polynomial
    factor of all coefficients, and scale so that the leading coefficient
    is 1 when it is a constant (otherwise make its leading term positive).
    Idempotent."""
    common = BiPoly.const(1)
    for c in eq.coeffs:
        common = bipoly_lcm(common, c.den)
    nums = [c.num * bipoly_div_exact(common, c.den) for c in eq.coeffs]
    g = BiPoly()
    for p in nums:
        g = bipoly_gcd(g, p)
        if g.is_one():
            break
    if not g.is_one() and not g.is_zero():
        nums = [bipoly_div_exact(p, g) for p in nums]
    if nums[0].is_constant():
        c0 = nums[0].constant_value()
        coeffs = tuple(RationalFunction(p, c0) for p in nums)
    elif nums[0].leading_coefficient() < 0:
        coeffs = tuple(RationalFunction(-p) for p in nums)
    else:
        coeffs = tuple(RationalFunction(p) for p in nums)
    return QDifferenceEquation(eq.step, coeffs)


# ---------------------------------------------------------------------------
# structured text serialization
# ---------------------------------------------------------------------------

def equation_to_text(eq: QDifferenceEquation) -> str:
    lines = [f"step: {eq.step}"]
    for i, c in enumerate(eq.coeffs):
        lines.append(f"coeff {i}: {c}")
    return "\n".join(lines) + "\n"


def equation_from_text(text: str) -> QDifferenceEquation:
    step = None
    coeffs = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        key, _, value = line.partition(":")
        key = key.strip()
        value = value.strip()
        if key == "step":
            step = int(value)
        elif key.startswith("coeff "):
            coeffs[int(key[6:])] = parse_rational(value)
    if step is None:
        raise ValueError("missing step field")
    return QDifferenceEquation(step, tuple(coeffs[i] for i in range(len(coeffs))))
