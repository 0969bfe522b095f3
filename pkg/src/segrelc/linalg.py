"""Exact dense linear algebra over a Field (rank, nullspace, span membership)."""

from __future__ import annotations

from .algebra import QQ, Field


def row_echelon(rows: list[list], field: Field = QQ) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    F = field
    m = [[F(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.mul(x, inv) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: list[list], field: Field = QQ) -> int:
    if not rows or not rows[0]:
        return 0
    return len(row_echelon(rows, field)[1])


def nullspace(rows: list[list], ncols: int, field: Field = QQ) -> list[list]:
    """Basis of {v : rows * v = 0} as a list of column vectors."""
    F = field
    if not rows:
        return [[F.one if i == j else F.zero for i in range(ncols)] for j in range(ncols)]
    red, pivots = row_echelon(rows, F)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [F.zero] * ncols
        v[f] = F.one
        for row, p in zip(red, pivots):
            v[p] = F.neg(row[f])
        basis.append(v)
    return basis


def in_span(vector: list, vectors: list[list], field: Field = QQ) -> bool:
    if all(x == 0 for x in vector):
        return True
    if not vectors:
        return False
    return rank(vectors + [vector], field) == rank(vectors, field)


def complement_basis(sub: list[list], ambient: list[list], field: Field = QQ) -> list[list]:
    """Vectors from ``ambient`` extending a basis of span(sub) to span(sub + ambient)."""
    chosen: list[list] = []
    current = rank(sub, field) if sub else 0
    for v in ambient:
        trial = sub + chosen + [v]
        r = rank(trial, field)
        if r > current:
            chosen.append(v)
            current = r
    return chosen
