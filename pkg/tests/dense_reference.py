# SPDX-FileCopyrightText: Copyright (C) 2025 Akshat Kotpalliwar (alias IntegerAlex) <inquiry.akshatkotpalliwar@gmail.com>
# SPDX-License-Identifier: GPL-3.0-only

"""Naive dense Smith normal form, used as an oracle for the sparse one."""


def _smallest_nonzero(A, t):
    best = None
    for i in range(t, len(A)):
        for j in range(t, len(A[0])):
            if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                best = (i, j)
    return best


def _swap_rows(A, i, k):
    A[i], A[k] = A[k], A[i]


def _swap_cols(A, j, k):
    for row in A:
        row[j], row[k] = row[k], row[j]


def dense_invariant_factors(dense):
    """Positive invariant factors s1 | s2 | ... of an integer matrix given as lists."""
    A = [list(row) for row in dense]
    if not A or not A[0]:
        return []
    rows, cols = len(A), len(A[0])
    factors = []
    t = 0
    while t < min(rows, cols):
        found = _smallest_nonzero(A, t)
        if found is None:
            break
        _swap_rows(A, t, found[0])
        _swap_cols(A, t, found[1])
        while True:
            p = A[t][t]
            for i in range(t + 1, rows):
                q = A[i][t] // p
                for j in range(t, cols):
                    A[i][j] -= q * A[t][j]
            for j in range(t + 1, cols):
                q = A[t][j] // p
                for i in range(t, rows):
                    A[i][j] -= q * A[i][t]
            leftover = [(i, t) for i in range(t + 1, rows) if A[i][t]]
            leftover += [(t, j) for j in range(t + 1, cols) if A[t][j]]
            if leftover:
                i, j = min(leftover, key=lambda pos: abs(A[pos[0]][pos[1]]))
                _swap_rows(A, t, i)
                _swap_cols(A, t, j)
                continue
            bad = [i for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % p]
            if bad:
                for j in range(t, cols):
                    A[t][j] += A[bad[0]][j]
                continue
            break
        factors.append(abs(A[t][t]))
        t += 1
    return factors
