"""Row reduction and friends over a FieldSpec, on plain lists of element indices."""

from __future__ import annotations

from .gf import FieldDomainError, FieldSpec


def rref(F: FieldSpec, rows) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    M = [list(r) for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    add, mul, neg, inv = F.add, F.mul, F.neg, F.inv
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        row = M[r]
        s = inv[row[c]]
        if s != 1:
            row = M[r] = [mul[s][x] for x in row]
        for i in range(len(M)):
            if i != r:
                f = M[i][c]
                if f:
                    nf = neg[f]
                    Mi = M[i]
                    M[i] = [add[a][mul[nf][b]] if b else a for a, b in zip(Mi, row)]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(F: FieldSpec, rows) -> int:
    return len(rref(F, rows)[1])


def nullspace(F: FieldSpec, rows, ncols: int) -> list[list[int]]:
    """Basis of {v : row . v = 0 for every row}."""
    R, pivots = rref(F, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(R, pivots):
            v[pc] = F.neg[row[f]]
        basis.append(v)
    return basis


def solve(F: FieldSpec, columns, target):
    """Coefficients c with sum(c_i * columns[i]) == target, or None.

    Returns None also when the columns are dependent (solution not unique).
    """
    n = len(columns)
    m = len(target)
    aug = [[columns[j][i] for j in range(n)] + [target[i]] for i in range(m)]
    R, pivots = rref(F, aug)
    if n in pivots or len(pivots) != n:
        return None
    sol = [0] * n
    for row, pc in zip(R, pivots):
        sol[pc] = row[n]
    return sol


def transpose(A):
    return [list(col) for col in zip(*A)]


def mat_mul(F: FieldSpec, A, B):
    add, mul = F.add, F.mul
    Bt = list(zip(*B))
    out = []
    for row in A:
        out_row = []
        for col in Bt:
            s = 0
            for a, b in zip(row, col):
                if a and b:
                    s = add[s][mul[a][b]]
            out_row.append(s)
        out.append(out_row)
    return out


def mat_vec(F: FieldSpec, A, v):
    add, mul = F.add, F.mul
    out = []
    for row in A:
        s = 0
        for a, b in zip(row, v):
            if a and b:
                s = add[s][mul[a][b]]
        out.append(s)
    return out


def identity(n: int):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_inv(F: FieldSpec, A):
    n = len(A)
    aug = [list(row) + e for row, e in zip(A, identity(n))]
    R, pivots = rref(F, aug)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise FieldDomainError("matrix is singular")
    return [row[n:] for row in R]


def det(F: FieldSpec, A) -> int:
    M = [list(r) for r in A]
    n = len(M)
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = F.neg[d]
        d = F.mul[d][M[c][c]]
        s = F.inv[M[c][c]]
        for i in range(c + 1, n):
            f = F.mul[M[i][c]][s]
            if f:
                nf = F.neg[f]
                M[i] = [F.add[a][F.mul[nf][b]] for a, b in zip(M[i], M[c])]
    return d
