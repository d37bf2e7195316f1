"""Signatures of rational symmetric forms.

The main route diagonalizes by congruence over the rationals.  The check
route counts positive and negative eigenvalues of the characteristic
polynomial with Sturm sequences, one square-free factor at a time.
"""
from __future__ import annotations

from fractions import Fraction


class FormError(ValueError):
    pass


def _as_matrix(rows) -> list[list[Fraction]]:
    A = [[Fraction(v) for v in r] for r in rows]
    n = len(A)
    if any(len(r) != n for r in A):
        raise FormError("form must be a square matrix")
    for i in range(n):
        for j in range(i):
            if A[i][j] != A[j][i]:
                raise FormError("form must be symmetric")
    return A


def signature_of_form(rows) -> int:
    """Positive minus negative entries of a congruent diagonal form."""
    A = _as_matrix(rows)
    n = len(A)
    sig = 0
    for i in range(n):
        if A[i][i] == 0:
            j = next((j for j in range(i + 1, n) if A[j][j] != 0), None)
            if j is not None:
                A[i], A[j] = A[j], A[i]
                for r in A:
                    r[i], r[j] = r[j], r[i]
            else:
                j = next((j for j in range(i + 1, n) if A[i][j] != 0), None)
                if j is None:
                    continue  # null direction
                # e_i + e_j is anisotropic when both diagonal entries vanish
                for k in range(n):
                    A[i][k] += A[j][k]
                for k in range(n):
                    A[k][i] += A[k][j]
        p = A[i][i]
        for r in range(i + 1, n):
            c = A[r][i] / p
            if c:
                for k in range(n):
                    A[r][k] -= c * A[i][k]
                for k in range(n):
                    A[k][r] -= c * A[k][i]
        sig += 1 if p > 0 else -1
    return sig


# polynomials: coefficient lists, lowest degree first


def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _sub(p, q):
    n = max(len(p), len(q))
    return _trim([(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)])


def _divmod(p, q):
    p = list(p)
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 1)
    while len(p) >= len(q) and p:
        c = p[-1] / q[-1]
        d = len(p) - len(q)
        quot[d] = c
        for i, b in enumerate(q):
            p[i + d] -= c * b
        _trim(p)
    return _trim(quot), p


def _gcd(p, q):
    while q:
        p, q = q, _divmod(p, q)[1]
    return [c / p[-1] for c in p] if p else p


def _deriv(p):
    return _trim([i * p[i] for i in range(1, len(p))])


def characteristic_polynomial(rows) -> list[Fraction]:
    """``det(x I - A)`` by the Faddeev-LeVerrier recurrence."""
    A = _as_matrix(rows)
    n = len(A)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M <- A M + c_{n-k+1} I
        AM = [[sum(A[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            AM[i][i] += coeffs[n - k + 1]
        M = AM
        trace = sum(sum(A[i][t] * M[t][i] for t in range(n)) for i in range(n))
        coeffs[n - k] = -trace / k
    return coeffs


def _sign_at(p, x):
    """Sign of ``p`` at ``x``; ``x`` may be +-inf."""
    if not p:
        return 0
    if x in (float("inf"), float("-inf")):
        lead = p[-1]
        deg = len(p) - 1
        s = 1 if lead > 0 else -1
        return s if x > 0 or deg % 2 == 0 else -s
    v = sum(c * x**i for i, c in enumerate(p))
    return (v > 0) - (v < 0)


def _sturm_roots(p, lo, hi) -> int:
    """Distinct real roots of square-free ``p`` in ``(lo, hi)``, neither end a root."""
    seq = [p, _deriv(p)]
    while seq[-1]:
        r = _divmod(seq[-2], seq[-1])[1]
        seq.append([-c for c in r])
    seq.pop()

    def changes(x):
        signs = [s for s in (_sign_at(q, x) for q in seq) if s]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    return changes(lo) - changes(hi)


def _squarefree_parts(p):
    """Yun's decomposition: ``p = prod q_i ** i`` with square-free ``q_i``."""
    parts = []
    a = _gcd(p, _deriv(p))
    b = _divmod(p, a)[0]
    c = _divmod(_deriv(p), a)[0]
    d = _sub(c, _deriv(b))
    i = 1
    while len(b) > 1:
        q = _gcd(b, d)
        parts.append((i, q))
        b = _divmod(b, q)[0]
        c = _divmod(d, q)[0]
        d = _sub(c, _deriv(b))
        i += 1
    return parts


def sturm_signature(rows) -> int:
    """Signature from eigenvalue signs of the characteristic polynomial."""
    p = characteristic_polynomial(rows)
    if len(p) == 1:
        return 0
    while p and p[0] == 0:  # zero eigenvalues carry no sign
        p = p[1:]
    if len(p) == 1:
        return 0
    pos = neg = 0
    for mult, q in _squarefree_parts(p):
        if len(q) > 1:
            pos += mult * _sturm_roots(q, Fraction(0), float("inf"))
            neg += mult * _sturm_roots(q, float("-inf"), Fraction(0))
    return pos - neg


def e8_form() -> list[list[int]]:
    """Cartan matrix of E8: a chain of seven nodes with an eighth on the third."""
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)]
    A = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in edges:
        A[i][j] = A[j][i] = -1
    return A
