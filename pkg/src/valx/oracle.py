"""Independent count of the irreducible factors of phi over Q_p.

This module deliberately shares no code with the chain machinery.  It builds
a p-maximal order of the etale algebra A = Q[x]/(phi) by the Round 2
algorithm (p-radical, then its multiplier ring, until stable) and counts the
maximal ideals above p as the dimension of the Frobenius-fixed subspace of
O/pO.  That number equals the number of irreducible factors of phi over Q_p.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .basefield import BaseField
from .poly import Poly


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _integral_monic(coeffs: list[Fraction]) -> list[int]:
    """Coefficients of ``m^n phi(x / m)`` for an m making them integral."""
    n = len(coeffs) - 1
    m = 1
    for c in coeffs:
        m = _lcm(m, c.denominator)
    out = [coeffs[i] * m ** (n - i) for i in range(n + 1)]
    assert all(c.denominator == 1 for c in out)
    return [int(c) for c in out]


class _Algebra:
    """Q[x]/(phi) with elements as coefficient vectors on 1, x, ..., x^(n-1)."""

    def __init__(self, phi: list[int]):
        self.phi = phi
        self.n = len(phi) - 1

    def mul(self, a, b):
        n = self.n
        prod = [Fraction(0)] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if c:
                prod[k] = Fraction(0)
                for i in range(n):
                    prod[k - n + i] -= c * self.phi[i]
        return prod[:n]

    def power(self, a, e: int):
        result = [Fraction(1)] + [Fraction(0)] * (self.n - 1)
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result


def _inverse(mat):
    n = len(mat)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _coords(vec, inv):
    n = len(inv)
    return [sum(vec[i] * inv[i][j] for i in range(n)) for j in range(n)]


def _kernel_mod_p(rows, p: int) -> list[list[int]]:
    """Basis of ``{u : u * M = 0}`` over GF(p) for the matrix with the given rows."""
    n = len(rows)
    m = len(rows[0]) if rows else 0
    # solve M^T u = 0: column-reduce via row reduction of M^T
    mat = [[rows[i][j] % p for i in range(n)] for j in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = pow(mat[r][c], -1, p)
        mat[r] = [v * inv % p for v in mat[r]]
        for i in range(m):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        u = [0] * n
        u[fc] = 1
        for i, pc in enumerate(pivots):
            u[pc] = (-mat[i][fc]) % p
        basis.append(u)
    return basis


def _hnf(rows: list[list[int]]) -> list[list[int]]:
    """Row Hermite normal form basis of the Z-lattice spanned by integer rows (full rank)."""
    rows = [r[:] for r in rows if any(r)]
    n = len(rows[0])
    out = []
    for c in range(n):
        # gcd-combine all rows with nonzero entry in column c
        active = [r for r in rows if r[c]]
        rest = [r for r in rows if not r[c]]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[c]))
            a = active[0]
            new = [a]
            for r in active[1:]:
                q = r[c] // a[c]
                rr = [x - q * y for x, y in zip(r, a)]
                if rr[c]:
                    new.append(rr)
                elif any(rr):
                    rest.append(rr)
            active = new
        if not active:
            raise ArithmeticError("lattice is not of full rank")
        piv = active[0]
        if piv[c] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        rows = rest
    # reduce above-diagonal entries
    for i in range(len(out)):
        for j in range(i):
            q = out[j][i] // out[i][i]
            if q:
                out[j] = [x - q * y for x, y in zip(out[j], out[i])]
    return out


def _det_int(mat) -> Fraction:
    n = len(mat)
    m = [[Fraction(v) for v in row] for row in mat]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] / m[c][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def _frobenius_matrix(alg: _Algebra, basis, inv, p: int):
    rows = []
    for b in basis:
        c = _coords(alg.power(b, p), inv)
        rows.append([int(v) % p for v in c])
    return rows


def _mat_mul_mod(a, b, p):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) % p for j in range(n)] for i in range(n)]


def _p_maximal_basis(alg: _Algebra, p: int):
    n = alg.n
    basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    while True:
        inv = _inverse(basis)
        frob = _frobenius_matrix(alg, basis, inv, p)
        # radical of O/pO = kernel of Frobenius^j with p^j >= n
        power = frob
        j = 1
        while p**j < n:
            power = _mat_mul_mod(power, frob, p)
            j += 1
        ker = _kernel_mod_p(power, p)
        gens = [list(u) for u in ker] + [[p * int(i == k) for k in range(n)] for i in range(n)]
        rad = _hnf(gens)  # coordinates in the current basis
        rad_elems = [[sum(Fraction(r[i]) * basis[i][t] for i in range(n)) for t in range(n)] for r in rad]
        rad_inv = _inverse(rad_elems)
        # U = {x in O : x * I subset p I}, as kernel of x -> (x * rad_k mod p I)
        rows = []
        for b in basis:
            row = []
            for r in rad_elems:
                c = _coords(alg.mul(b, r), rad_inv)
                row.extend(int(v) for v in c)
            rows.append(row)
        kerU = _kernel_mod_p(rows, p)
        ugens = [list(u) for u in kerU] + [[p * int(i == k) for k in range(n)] for i in range(n)]
        U = _hnf(ugens)
        index = _det_int(U)
        # new order = U / p; its index over O is p^n / det(U)
        if index == p**n:
            return basis, inv
        basis = [[sum(Fraction(u[i], p) * basis[i][t] for i in range(n)) for t in range(n)] for u in U]


def oracle_extension_count(K: BaseField, phi, precision: int = 50) -> int:
    """Number of irreducible factors of squarefree ``phi`` over Q_p.

    Exact: no p-adic truncation is involved, so ``precision`` is accepted
    for interface compatibility only.
    """
    if K.kind != "qp":
        raise ValueError("the oracle only handles p-adic bases")
    phi = phi if isinstance(phi, Poly) else Poly(K, phi)
    phi = phi.monic()
    if phi.gcd(phi.derivative()).degree > 0:
        raise ValueError("the oracle needs a squarefree polynomial")
    p = K.p
    coeffs = _integral_monic([Fraction(c) for c in phi.coeffs])
    alg = _Algebra(coeffs)
    if alg.n == 1:
        return 1
    basis, inv = _p_maximal_basis(alg, p)
    frob = _frobenius_matrix(alg, basis, inv, p)
    n = alg.n
    shifted = [[(frob[i][j] - int(i == j)) % p for j in range(n)] for i in range(n)]
    return len(_kernel_mod_p(shifted, p))
