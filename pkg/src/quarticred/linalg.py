"""Small dense linear algebra over the tower, residue fields, and Z.

p-adic elimination pivots on minimal valuation (maximal norm), which keeps
multipliers integral for integral input and prevents spurious precision
loss.  Integer determinants use fraction-free Bareiss elimination.
"""

from .errors import DegenerateFrame


def det_int(rows):
    """Exact determinant of an integer matrix (Bareiss)."""
    a = [list(r) for r in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _pivot_min_val(a, k, n):
    """Position of the minimal-valuation entry in the trailing block."""
    best = None
    pos = None
    for i in range(k, n):
        for j in range(k, n):
            v = a[i][j].valuation
            if v is None:
                continue
            if best is None or v < best:
                best, pos = v, (i, j)
    return pos, best


def det_padic(ctx, rows):
    """Determinant over K by valuation-pivoted elimination.

    Returns a PadicElement; a zero-at-precision result means the matrix is
    singular at working precision.
    """
    a = [list(r) for r in rows]
    n = len(a)
    det = ctx.one()
    for k in range(n):
        pos, _ = _pivot_min_val(a, k, n)
        if pos is None:
            # all remaining entries are numerically zero
            prec = min(x.abs_precision for row in a[k:] for x in row[k:])
            return ctx.zero(min(prec * (n - k) + det_val_floor(det), ctx.precision))
        i, j = pos
        if i != k:
            a[k], a[i] = a[i], a[k]
            det = -det
        if j != k:
            for row in a:
                row[k], row[j] = row[j], row[k]
            det = -det
        piv = a[k][k]
        det = det * piv
        inv = piv.inv()
        for i in range(k + 1, n):
            f = a[i][k] * inv
            if f.valuation is None:
                continue
            for j in range(k + 1, n):
                a[i][j] = a[i][j] - f * a[k][j]
    return det


def det_val_floor(elem):
    v = elem.valuation
    return v if v is not None else elem.abs_precision


def det_residue(F, rows):
    """Determinant over a finite field."""
    a = [list(r) for r in rows]
    n = len(a)
    det = F.one()
    for k in range(n):
        piv_row = None
        for i in range(k, n):
            if not F.is_zero(a[i][k]):
                piv_row = i
                break
        if piv_row is None:
            return F.zero()
        if piv_row != k:
            a[k], a[piv_row] = a[piv_row], a[k]
            det = F.neg(det)
        piv = a[k][k]
        det = F.mul(det, piv)
        inv = F.inv(piv)
        for i in range(k + 1, n):
            f = F.mul(a[i][k], inv)
            if F.is_zero(f):
                continue
            for j in range(k + 1, n):
                a[i][j] = F.sub(a[i][j], F.mul(f, a[k][j]))
    return det


def solve_padic(ctx, rows, rhs, what="linear system"):
    """Solve a square system over K with valuation pivoting on rows.

    Raises DegenerateFrame when a pivot is zero at precision.
    """
    n = len(rows)
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    perm = list(range(n))
    for k in range(n):
        best, pos = None, None
        for i in range(k, n):
            v = a[i][k].valuation
            if v is None:
                continue
            if best is None or v < best:
                best, pos = v, i
        if pos is None:
            raise DegenerateFrame(f"singular {what} at working precision")
        a[k], a[pos] = a[pos], a[k]
        inv = a[k][k].inv()
        for i in range(k + 1, n):
            f = a[i][k] * inv
            if f.valuation is None:
                continue
            for j in range(k, n + 1):
                a[i][j] = a[i][j] - f * a[k][j]
    xs = [None] * n
    for k in range(n - 1, -1, -1):
        acc = a[k][n]
        for j in range(k + 1, n):
            acc = acc - a[k][j] * xs[j]
        xs[k] = acc * a[k][k].inv()
    return xs


def mat_mul(A, B):
    n, m, r = len(A), len(B[0]), len(B)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] * B[0][j]
            for k in range(1, r):
                acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(row)
    return out


def mat_vec(A, v):
    out = []
    for row in A:
        acc = row[0] * v[0]
        for k in range(1, len(v)):
            acc = acc + row[k] * v[k]
        out.append(acc)
    return out


def mat_inv3(ctx, A):
    """Inverse of a 3x3 matrix over K via the adjugate."""
    (a, b, c), (d, e, f), (g, h, i) = A
    co = [
        [e * i - f * h, c * h - b * i, b * f - c * e],
        [f * g - d * i, a * i - c * g, c * d - a * f],
        [d * h - e * g, b * g - a * h, a * e - b * d],
    ]
    det = a * co[0][0] + b * co[1][0] + c * co[2][0]
    if det.valuation is None:
        raise DegenerateFrame("3x3 matrix singular at working precision")
    dinv = det.inv()
    return [[co[r][s] * dinv for s in range(3)] for r in range(3)], det
