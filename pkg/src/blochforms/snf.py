"""Integer Smith normal form with unimodular transforms, plus homology.

Matrices are lists of int rows.  Sizes are small (boundary matrices of the
quotient cell complexes), so the classic pivot-by-least-absolute-value
reduction with explicit transform bookkeeping is plenty.
"""

from dataclasses import dataclass
from fractions import Fraction

from .linalg import solve


@dataclass
class SNFResult:
    diag: list      # invariant factors s_1 | s_2 | ... (nonzero ones)
    left: list      # U, rows x rows unimodular
    right: list     # V, cols x cols unimodular
    rank: int

    def reconstruct(self, rows, cols):
        d = [[0] * cols for _ in range(rows)]
        for i, s in enumerate(self.diag):
            d[i][i] = s
        return d


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _matmul_int(a, b):
    n, k = len(a), len(b)
    p = len(b[0]) if b else 0
    out = [[0] * p for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if c:
                bt = b[t]
                for j in range(p):
                    if bt[j]:
                        oi[j] += c * bt[j]
    return out


def smith_normal_form(m):
    """U * M * V = diag(s_1..s_r, 0...) with s_1 | s_2 | ...; U, V unimodular."""
    a = [list(map(int, row)) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = _identity(rows)
    v = _identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def addmul_row(dst, src, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def addmul_col(dst, src, c):
        for r in a:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        # pivot: least |entry| in the remaining block
        piv = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best):
                    best, piv = abs(x), (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        # clear row and column
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    addmul_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    addmul_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                break
        # divisibility: pivot must divide the rest of the block
        fixed = True
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % a[t][t]:
                    addmul_row(t, i, 1)
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    diag = [a[i][i] for i in range(t)]
    return SNFResult(diag, u, v, t)


def integer_kernel_basis(m, cols=None):
    """Basis of the saturated integer kernel lattice of M (column vectors)."""
    rows = len(m)
    if cols is None:
        cols = len(m[0]) if rows else 0
    if rows == 0 or cols == 0:
        return [[int(i == j) for i in range(cols)] for j in range(cols)]
    res = smith_normal_form(m)
    out = []
    for j in range(res.rank, cols):
        out.append([res.right[i][j] for i in range(cols)])
    return out


def image_basis(m):
    """Basis of the column-space lattice (as column vectors of length rows)."""
    rows = len(m)
    if rows == 0 or not m[0]:
        return []
    res = smith_normal_form(m)
    uinv_cols = _invert_unimodular(res.left)
    out = []
    for i in range(res.rank):
        col = [uinv_cols[r][i] * res.diag[i] for r in range(rows)]
        out.append(col)
    return out


def _invert_unimodular(u):
    n = len(u)
    sol = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        x = solve([list(map(Fraction, row)) for row in u], e)
        sol.append([int(c) for c in x])
    # columns of the inverse
    return [[sol[j][i] for j in range(n)] for i in range(n)]


def homology_of_pair(d_k, d_k1, num_k_cells):
    """H = ker(d_k) / im(d_{k+1}) for integer boundary matrices.

    d_k maps k-chains to (k-1)-chains (rows = (k-1)-cells, cols = k-cells);
    d_k1 likewise one level up (rows = k-cells).  Returns
    (betti, torsion list, generator chain vectors).
    """
    if num_k_cells == 0:
        return 0, [], []
    if d_k and len(d_k[0]) != num_k_cells:
        raise ValueError("d_k column count mismatch")
    kern = integer_kernel_basis(d_k, num_k_cells) if d_k else \
        [[int(i == j) for i in range(num_k_cells)] for j in range(num_k_cells)]
    if not kern:
        return 0, [], []
    img = image_basis(d_k1) if d_k1 else []
    if not img:
        return len(kern), [], kern
    # express image vectors in kernel coordinates (exact; d.d = 0 => integral)
    kmat = [[Fraction(kern[b][i]) for b in range(len(kern))]
            for i in range(num_k_cells)]
    coeff_cols = []
    for vec in img:
        x = solve(kmat, [Fraction(c) for c in vec])
        if x is None or any(c.denominator != 1 for c in x):
            raise ArithmeticError("image does not lie in the saturated kernel")
        coeff_cols.append([int(c) for c in x])
    coeff = [[coeff_cols[j][i] for j in range(len(coeff_cols))]
             for i in range(len(kern))]
    res = smith_normal_form(coeff)
    torsion = [s for s in res.diag if s not in (0, 1)]
    betti = len(kern) - res.rank
    # generators: rows of U^-1 give a basis adapted to the image filtration;
    # free generators = last `betti` basis vectors
    uinv = _invert_unimodular(res.left)
    gens = []
    for t in range(res.rank, len(kern)):
        col = [uinv[i][t] for i in range(len(kern))]
        chain = [sum(col[b] * kern[b][i] for b in range(len(kern)))
                 for i in range(num_k_cells)]
        gens.append(chain)
    return betti, torsion, gens
