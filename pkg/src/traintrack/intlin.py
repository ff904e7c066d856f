"""Exact integer/rational linear algebra used by the lattice and spectral code.

Everything here works over Python ints and fractions.Fraction; floats appear
only in the numeric Perron-Frobenius estimate, which is always certified by
exact sign evaluations of the characteristic polynomial.
"""

from fractions import Fraction


def matrix_rank(rows):
    """Rank over the rationals, by fraction-free style Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    row = 0
    for col in range(cols):
        piv = next((r for r in range(row, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = m[row][col]
        for r in range(len(m)):
            if r != row and m[r][col] != 0:
                factor = m[r][col] / inv
                m[r] = [a - factor * b for a, b in zip(m[r], m[row])]
        row += 1
        rank += 1
        if row == len(m):
            break
    return rank


def det(rows):
    """Exact determinant (Fraction arithmetic, returned as Fraction)."""
    n = len(rows)
    m = [[Fraction(x) for x in row] for row in rows]
    sign = 1
    out = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        out *= m[col][col]
        inv = m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                factor = m[r][col] / inv
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return sign * out


def kernel_basis(rows, ncols):
    """Basis of the integer kernel {x : rows . x = 0} as a list of int vectors.

    Column-style Hermite reduction: apply unimodular column operations to the
    matrix until every column is either pivotal or zero; the corresponding
    columns of the accumulated transform are a basis of the kernel.  Because
    the transform is unimodular the basis is saturated (every integer point
    of the rational kernel is an integer combination of it) and each vector
    has content 1.
    """
    m = [list(map(int, row)) for row in rows]
    u = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def col(mat, j):
        return [mat[i][j] for i in range(len(mat))]

    def addmul(mat, dst, src, q):
        for i in range(len(mat)):
            mat[i][dst] += q * mat[i][src]

    def swap(mat, a, b):
        for i in range(len(mat)):
            mat[i][a], mat[i][b] = mat[i][b], mat[i][a]

    row = 0
    pivots = []
    for _ in range(len(m)):
        if row >= len(m):
            break
        # among columns right of the pivot block, clear row `row` by gcd steps
        active = [j for j in range(len(pivots), ncols)]
        while True:
            nz = [j for j in active if m[row][j] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda j: abs(m[row][j]))
            j0 = nz[0]
            for j in nz[1:]:
                q = m[row][j] // m[row][j0]
                addmul(m, j, j0, -q)
                addmul(u, j, j0, -q)
        nz = [j for j in range(len(pivots), ncols) if m[row][j] != 0]
        if nz:
            j0 = nz[0]
            tgt = len(pivots)
            if j0 != tgt:
                swap(m, j0, tgt)
                swap(u, j0, tgt)
            pivots.append(tgt)
        row += 1
    basis = []
    for j in range(len(pivots), ncols):
        if all(m[i][j] == 0 for i in range(len(m))):
            basis.append(tuple(col(u, j)))
    return basis


def mat_mul_vec(rows, vec):
    return [sum(a * b for a, b in zip(row, vec)) for row in rows]


def charpoly(block):
    """Monic characteristic polynomial coefficients, highest degree first.

    Faddeev-LeVerrier over Fractions; coefficients of an integer matrix are
    integers and are returned as ints.

    >>> charpoly([[2, 1], [1, 2]])
    [1, -4, 3]
    """
    n = len(block)
    a = [[Fraction(x) for x in row] for row in block]
    coeffs = [Fraction(1)]
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I
        prev = mk
        mk = [[sum(a[i][t] * prev[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            mk[i][i] += coeffs[-1]
        am = [[sum(a[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        c = -sum(am[i][i] for i in range(n)) / k
        coeffs.append(c)
    out = []
    for c in coeffs:
        assert c.denominator == 1, "characteristic polynomial of an integer matrix"
        out.append(int(c))
    return out


def poly_eval(coeffs, x):
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def is_permutation_matrix(block):
    """True when every row and every column contains a single 1, rest 0."""
    n = len(block)
    for row in block:
        if sum(row) != 1 or any(x not in (0, 1) for x in row):
            return False
    for j in range(n):
        if sum(block[i][j] for i in range(n)) != 1:
            return False
    return True


def pf_eigenvalue(block, tol=Fraction(1, 10**12)):
    """Largest real eigenvalue of an irreducible nonnegative integer matrix.

    Returns (float value, (lo, hi) Fractions bracketing it within tol).  The
    bracket is certified by exact sign changes of the characteristic
    polynomial; the float is only a convenient rounding of the bracket.

    For an irreducible nonnegative matrix the Perron root is the largest
    real root of the characteristic polynomial and is simple, and no real
    root exceeds it, so sign(p) is +1 strictly above it and -1 just below.
    """
    coeffs = charpoly(block)
    hi = Fraction(max(sum(row) for row in block) + 1)
    # p is monic, so p(hi) > 0; walk down in exact steps to find a sign change
    lo = hi
    step = Fraction(1)
    while poly_eval(coeffs, lo) > 0:
        lo -= step
        if lo < 0:
            # permutation-like block: largest root is 1 or below
            lo = Fraction(0)
            break
    if poly_eval(coeffs, lo) == 0:
        return float(lo), (lo, lo)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        v = poly_eval(coeffs, mid)
        if v == 0:
            return float(mid), (mid, mid)
        if v > 0:
            hi = mid
        else:
            lo = mid
    return float((lo + hi) / 2), (lo, hi)


def hnf_solve_membership(rows, vec):
    """Does the integer row span of ``rows`` contain ``vec``?  (Used in tests.)"""
    if not rows:
        return all(x == 0 for x in vec)
    # solve over Q then check integrality of the unique reduced solution via
    # exhaustive elimination; adequate for the small matrices in this package
    from fractions import Fraction as F

    m = [list(map(F, r)) + [F(0)] for r in rows]
    n = len(vec)
    aug = [[m[i][j] for j in range(n)] for i in range(len(rows))]
    # reduce [rows | I] style: find integer combo; do a simple HNF of rows
    work = [list(map(int, r)) for r in rows]
    combo = [[1 if i == j else 0 for j in range(len(rows))] for i in range(len(rows))]
    colp = 0
    rowp = 0
    pivots = []
    while rowp < len(work) and colp < n:
        nz = [i for i in range(rowp, len(work)) if work[i][colp] != 0]
        while len(nz) > 1:
            nz.sort(key=lambda i: abs(work[i][colp]))
            i0 = nz[0]
            for i in nz[1:]:
                q = work[i][colp] // work[i0][colp]
                work[i] = [a - q * b for a, b in zip(work[i], work[i0])]
                combo[i] = [a - q * b for a, b in zip(combo[i], combo[i0])]
            nz = [i for i in range(rowp, len(work)) if work[i][colp] != 0]
        if nz:
            i0 = nz[0]
            work[rowp], work[i0] = work[i0], work[rowp]
            combo[rowp], combo[i0] = combo[i0], combo[rowp]
            pivots.append((rowp, colp))
            rowp += 1
        colp += 1
    target = list(map(int, vec))
    for r, c in pivots:
        if work[r][c] == 0:
            continue
        if target[c] % work[r][c] != 0:
            return False
        q = target[c] // work[r][c]
        target = [a - q * b for a, b in zip(target, work[r])]
    return all(x == 0 for x in target)
