"""Exact rational linear algebra and integer polynomials.

Everything here is exact: rationals are `fractions.Fraction`, matrices are
plain row-major lists of Fractions, and polynomials are coefficient lists
with the constant term first.  The only floating point lives in
`poly_roots_unit_circle`, which locates roots numerically after the
multiplicity structure has been extracted exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

RationalMatrix = Sequence[Sequence[Fraction]]


class ExactError(ValueError):
    """Raised when an exact computation is handed invalid input."""


# ---------------------------------------------------------------------------
# projective integer polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectivePoly:
    """Integer polynomial considered up to a positive scalar multiple.

    Coefficients are stored constant term first, with no trailing zeros,
    integer content 1 and positive leading coefficient.  Two polynomials
    that differ by a nonzero rational factor normalize to the same object,
    so `==` decides projective equality.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ExactError("zero polynomial not projective")
        if self.coeffs[-1] <= 0:
            raise ExactError("leading coefficient must be positive")
        if math.gcd(*self.coeffs) != 1:
            raise ExactError("coefficients must have content 1")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: Fraction | int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def line(self) -> str:
        """Single-line serialization: `poly: c0 c1 ... cD`."""
        return "poly: " + " ".join(str(c) for c in self.coeffs)

    @staticmethod
    def from_line(line: str) -> "ProjectivePoly":
        head, _, rest = line.partition(":")
        if head.strip() != "poly":
            raise ExactError(f"not a polynomial line: {line!r}")
        return poly_normalize([int(tok) for tok in rest.split()])

    def __str__(self) -> str:
        return self.line()


def poly_normalize(coeffs: Sequence[Fraction | int]) -> ProjectivePoly:
    """Normalize rational coefficients to the projective representative.

    Clears denominators, divides out the integer content and flips the
    global sign so the leading coefficient is positive.  Rejects the zero
    polynomial.
    """
    fracs = [Fraction(c) for c in coeffs]
    while fracs and fracs[-1] == 0:
        fracs.pop()
    if not fracs:
        raise ExactError("zero polynomial not projective")
    den = math.lcm(*(f.denominator for f in fracs))
    ints = [int(f * den) for f in fracs]
    content = math.gcd(*ints)
    ints = [c // content for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ProjectivePoly(tuple(ints))


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Product of two integer coefficient lists (constant term first)."""
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def poly_pow(a: Sequence[int], n: int) -> list[int]:
    out = [1]
    for _ in range(n):
        out = poly_mul(out, a)
    return out


def _deflate_linear(coeffs: list[int], root: int) -> list[int] | None:
    """Divide by (z - root) if it divides exactly, else None."""
    quot = [0] * (len(coeffs) - 1)
    carry = 0
    for i in range(len(coeffs) - 1, 0, -1):
        carry = coeffs[i] + root * carry
        quot[i - 1] = carry
    if coeffs[0] + root * carry != 0:
        return None
    return quot


# ---------------------------------------------------------------------------
# exact determinants and characteristic polynomials
# ---------------------------------------------------------------------------

def _check_square(m: RationalMatrix) -> int:
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise ExactError("matrix must be square and nonempty")
    return n


def _bareiss_det(rows: list[list[int]]) -> int:
    """Fraction-free Bareiss elimination; exact determinant of an int matrix."""
    n = len(rows)
    sign = 1
    prev = 1
    a = [row[:] for row in rows]
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            factor = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[-1][-1]


def det_exact(m: RationalMatrix) -> Fraction:
    """Exact determinant of a square rational matrix."""
    n = _check_square(m)
    scale = 1
    int_rows: list[list[int]] = []
    for row in m:
        den = math.lcm(*(Fraction(x).denominator for x in row))
        scale *= den
        int_rows.append([int(Fraction(x) * den) for x in row])
    if n == 1:
        return Fraction(int_rows[0][0], scale)
    return Fraction(_bareiss_det(int_rows), scale)


def charpoly_exact(m: RationalMatrix) -> list[Fraction]:
    """Exact characteristic polynomial det(uI - m), constant term first.

    Uses the Faddeev-LeVerrier recurrence; the result is monic of degree n.
    """
    n = _check_square(m)
    rows = [[Fraction(x) for x in row] for row in m]
    work = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    high_first = [Fraction(1)]
    for k in range(1, n + 1):
        work = [[sum(rows[i][t] * work[t][j] for t in range(n)) for j in range(n)]
                for i in range(n)]
        c = -sum(work[i][i] for i in range(n)) / k
        high_first.append(c)
        for i in range(n):
            work[i][i] += c
    return high_first[::-1]


def _interpolate(points: Sequence[int], values: Sequence[Fraction]) -> list[Fraction]:
    """Newton interpolation through (points[i], values[i]), monomial coefficients."""
    n = len(points)
    dd = [Fraction(v) for v in values]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (points[i] - points[i - j])
    coeffs = [Fraction(0)] * n
    basis = [Fraction(1)]
    for i in range(n):
        for t, b in enumerate(basis):
            coeffs[t] += dd[i] * b
        nxt = [Fraction(0)] * (len(basis) + 1)
        for t, b in enumerate(basis):
            nxt[t] -= points[i] * b
            nxt[t + 1] += b
        basis = nxt
    return coeffs


def polymat_det(entry_eval: Callable[[Fraction], RationalMatrix],
                size: int,
                degree_bound: int) -> ProjectivePoly:
    """Exact determinant of a polynomial matrix by evaluation-interpolation.

    `entry_eval(z0)` must return the size x size rational matrix at the
    sample point z0.  The determinant is evaluated exactly at degree_bound+1
    consecutive integers, interpolated, and certified at one extra point;
    a mismatch means the stated degree bound is wrong.
    """
    if degree_bound < 0:
        raise ExactError("degree bound must be nonnegative")
    start = -(degree_bound // 2)
    points = list(range(start, start + degree_bound + 2))
    values = []
    for z0 in points:
        m = entry_eval(Fraction(z0))
        if _check_square(m) != size:
            raise ExactError(f"entry_eval returned wrong size at z={z0}")
        values.append(det_exact(m))
    coeffs = _interpolate(points[:-1], values[:-1])
    check = Fraction(0)
    for c in reversed(coeffs):
        check = check * points[-1] + c
    if check != values[-1]:
        raise ExactError("degree bound violated")
    return poly_normalize(coeffs)


# ---------------------------------------------------------------------------
# square-free structure and unit-circle roots
# ---------------------------------------------------------------------------

def _fpoly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _fpoly_derivative(p: Sequence[Fraction]) -> list[Fraction]:
    return [i * c for i, c in enumerate(p)][1:]


def _fpoly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    rem = list(a)
    quot = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    inv_lead = 1 / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = rem[i + len(b) - 1] * inv_lead
        quot[i] = c
        if c:
            for j, bj in enumerate(b):
                rem[i + j] -= c * bj
    return _fpoly_trim(quot), _fpoly_trim(rem)


def _fpoly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    x, y = _fpoly_trim(list(a)), _fpoly_trim(list(b))
    while y:
        x, y = y, _fpoly_divmod(x, y)[1]
    return [c / x[-1] for c in x] if x else [Fraction(1)]


def _fpoly_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _fpoly_trim(out)


def squarefree_factors(coeffs: Sequence[int]) -> list[tuple[list[int], int]]:
    """Yun decomposition p = prod q_i^i with q_i square-free and coprime.

    Returns (integer-normalized factor, multiplicity) pairs for every
    nonconstant factor, in increasing multiplicity order.
    """
    p = _fpoly_trim([Fraction(c) for c in coeffs])
    if len(p) <= 1:
        return []
    dp = _fpoly_derivative(p)
    g = _fpoly_gcd(p, dp)
    if len(g) == 1:
        return [(list(poly_normalize(coeffs).coeffs), 1)]
    w, _ = _fpoly_divmod(p, g)
    y, _ = _fpoly_divmod(dp, g)
    z = _fpoly_sub(y, _fpoly_derivative(w))
    out: list[tuple[list[int], int]] = []
    i = 1
    while len(w) > 1:
        gi = _fpoly_gcd(w, z)
        if len(gi) > 1:
            out.append((list(poly_normalize(gi).coeffs), i))
        w, _ = _fpoly_divmod(w, gi)
        y, _ = _fpoly_divmod(z, gi)
        z = _fpoly_sub(y, _fpoly_derivative(w))
        i += 1
    return out


TWO_PI = 2.0 * math.pi


def poly_roots_unit_circle(p: ProjectivePoly,
                           tol: float = 1e-8,
                           cluster_tol: float = 1e-7) -> list[tuple[float, int]]:
    """All roots of p, certified to lie on |z| = 1, as (k, multiplicity).

    k = arg(z) mapped to (0, 2pi].  Roots z = 1 and z = -1 are deflated by
    exact trial division, so their multiplicities are exact.  Remaining
    multiplicities are extracted exactly by square-free decomposition;
    companion-matrix root finding is then only ever applied to simple
    roots, which keeps every root within `tol` of the unit circle.
    Raises ExactError if any root strays off the circle beyond tol.
    """
    coeffs = list(p.coeffs)
    found: list[tuple[float, int]] = []
    for root, k in ((1, TWO_PI), (-1, math.pi)):
        mult = 0
        while len(coeffs) > 1:
            quot = _deflate_linear(coeffs, root)
            if quot is None:
                break
            coeffs = quot
            mult += 1
        if mult:
            found.append((k, mult))
    if len(coeffs) > 1:
        for factor, mult in squarefree_factors(coeffs):
            for z in np.roots([float(c) for c in reversed(factor)]):
                if abs(abs(z) - 1.0) > tol:
                    raise ExactError(
                        f"root off unit circle: |z|={abs(z):.6g} for z={z:.6g}")
                theta = math.atan2(z.imag, z.real)
                k = theta if theta > 0 else theta + TWO_PI
                found.append((k, mult))
    found.sort()
    merged: list[tuple[float, int]] = []
    for k, mult in found:
        if merged and abs(k - merged[-1][0]) < cluster_tol:
            merged[-1] = (merged[-1][0], merged[-1][1] + mult)
        else:
            merged.append((k, mult))
    return merged
