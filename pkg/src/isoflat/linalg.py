"""Small exact linear algebra over Z and Q.

Matrices are lists of rows (lists of ``int`` or ``Fraction``).  Sizes in this
package are tiny (rank <= ~10), so plain Python is the right tool.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

Row = list
Matrix = list


def hnf_with_transform(rows: Matrix, ncols: int | None = None) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ rows == H`` (including
    zero rows at the bottom).  Nonzero rows of ``H`` have positive pivots,
    strictly increasing pivot columns, and entries above each pivot reduced
    into ``[0, pivot)``.
    """
    A = [list(map(int, r)) for r in rows]
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r >= m:
            break
        # Euclid on column c among rows r..m-1
        while True:
            nz = [i for i in range(r, m) if A[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[piv] = A[piv], A[r]
            U[r], U[piv] = U[piv], U[r]
            done = True
            for i in range(r + 1, m):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    if A[i][c]:
                        done = False
            if done:
                break
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        p = A[r][c]
        for i in range(r):
            q = A[i][c] // p
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return A, U


def hnf(rows: Matrix, ncols: int | None = None) -> Matrix:
    """Nonzero rows of the Hermite normal form, as a tuple of tuples."""
    H, _ = hnf_with_transform(rows, ncols)
    return tuple(tuple(row) for row in H if any(row))


def integer_kernel(rows: Matrix) -> Matrix:
    """Z-basis of the left kernel ``{u : u @ rows == 0}``."""
    if not rows:
        return []
    H, U = hnf_with_transform(rows)
    return [U[i] for i, row in enumerate(H) if not any(row)]


def solve_integer(rows: Matrix, target: Row) -> Row | None:
    """Integer ``u`` with ``u @ rows == target``, or ``None`` if none exists."""
    n = len(target)
    if not rows:
        return [] if not any(target) else None
    H, U = hnf_with_transform(rows, n)
    coeff = [0] * len(H)
    rest = list(map(int, target))
    for i, row in enumerate(H):
        if not any(row):
            break
        c = next(j for j, x in enumerate(row) if x)
        if rest[c] % row[c]:
            return None
        q = rest[c] // row[c]
        coeff[i] = q
        rest = [x - q * y for x, y in zip(rest, row)]
    if any(rest):
        return None
    # u = coeff @ U
    m = len(rows)
    return [sum(coeff[i] * U[i][j] for i in range(len(H))) for j in range(m)]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def mat_vec(A: Matrix, v: Row) -> Row:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def transpose(A: Matrix) -> Matrix:
    return [list(c) for c in zip(*A)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def clear_denominators(v) -> tuple[list[int], int]:
    """Return ``(w, m)`` with ``w = m * v`` integral and ``m > 0`` minimal."""
    v = [Fraction(x) for x in v]
    m = 1
    for x in v:
        m = lcm(m, x.denominator)
    return [int(x * m) for x in v], m


def rational_rref(rows: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over Q; returns ``(R, pivot_columns)``."""
    A = [[Fraction(x) for x in r] for r in rows]
    if not A:
        return [], []
    m, n = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        A[r] = [x / p for x in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A[:r], pivots


def rational_rank(rows: Matrix) -> int:
    return len(rational_rref(rows)[1])


def rational_nullspace(rows: Matrix, ncols: int) -> Matrix:
    """Q-basis of ``{x : rows @ x == 0}`` (right kernel)."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    R, piv = rational_rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, c in enumerate(piv):
            x[c] = -R[i][f]
        basis.append(x)
    return basis


def rational_solve(rows: Matrix, target: Row) -> Row | None:
    """Rational ``u`` with ``u @ rows == target`` or ``None``."""
    m = len(rows)
    if m == 0:
        return [] if not any(target) else None
    n = len(target)
    # columns of the augmented system: transpose(rows) u = target
    aug = [[Fraction(rows[i][j]) for i in range(m)] + [Fraction(target[j])] for j in range(n)]
    R, piv = rational_rref(aug)
    if m in piv:
        return None
    u = [Fraction(0)] * m
    for i, c in enumerate(piv):
        u[c] = R[i][m]
    return u


def rational_gcd(values) -> Fraction:
    """Positive generator of the subgroup of Q generated by ``values`` (0 if all zero)."""
    num = 0
    den = 1
    for v in values:
        v = Fraction(v)
        if v == 0:
            continue
        # gcd(a/b, c/e) = gcd(a*e, c*b) / (b*e), then reduce
        num, den = gcd(num * v.denominator, v.numerator * den), den * v.denominator
    if num == 0:
        return Fraction(0)
    return Fraction(num, den)


def extended_gcd_combination(values: list[Fraction]) -> list[int]:
    """Integers ``k`` with ``sum(k_i * values_i) == rational_gcd(values)``."""
    vals = [Fraction(v) for v in values]
    ints, _ = clear_denominators(vals)
    sol = solve_integer([[x] for x in ints], [gcd(*ints) if any(ints) else 0])
    return sol if sol is not None else [0] * len(vals)
