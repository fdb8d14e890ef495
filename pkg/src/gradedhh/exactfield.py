"""Exact dense linear algebra over a prime field F_p.

Conventions used by the whole package:

* a "matrix" is a 2-d ``numpy.int64`` array with entries in ``0..p-1``,
  row-major, and a "vector" is a 1-d array; maps act on column vectors
  from the left,
* every operation is exact and deterministic; "canonical" always means
  the unique object produced by the reduced row echelon form (RREF),
* the modulus satisfies ``2 <= p < 2**31`` so that single products fit in
  64-bit integers; matrix products with long inner dimensions are chunked
  (or run through exact float64 BLAS when safe) to avoid overflow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

# a float64 matmul is exact while every accumulated sum stays below 2**53
_FLOAT_SAFE = 2**53
_INT_SAFE = 2**62


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """Arithmetic mod a prime p, with canonical representatives 0..p-1."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not isinstance(p, (int, np.integer)) or not (2 <= p < 2**31):
            raise ValidationError(f"modulus must satisfy 2 <= p < 2**31, got {p!r}")
        if not _is_prime(int(p)):
            raise ValidationError(f"modulus {p} is not prime")
        self.p = int(p)

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    # -- element / array construction -------------------------------------

    def arr(self, data) -> np.ndarray:
        """Copy ``data`` into an int64 array reduced mod p."""
        return np.array(data, dtype=np.int64) % self.p

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.p - 2, self.p)

    # -- products ----------------------------------------------------------

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Exact a @ b mod p, chunking the inner dimension when needed."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        inner = a.shape[-1]
        if inner == 0:
            return np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
        bound = (self.p - 1) ** 2
        if inner * bound < _FLOAT_SAFE:
            prod = a.astype(np.float64) @ b.astype(np.float64)
            return prod.astype(np.int64) % self.p
        if inner * bound < _INT_SAFE:
            return (a @ b) % self.p
        chunk = max(1, _INT_SAFE // bound)
        out = np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
        for lo in range(0, inner, chunk):
            hi = min(lo + chunk, inner)
            out = (out + a[..., lo:hi] @ b[lo:hi]) % self.p
        return out

    def contract(self, subscripts: str, *ops: np.ndarray) -> np.ndarray:
        """np.einsum reduced mod p, guarding against int64 overflow."""
        ops = tuple(np.asarray(o, dtype=np.int64) for o in ops)
        terms = 1
        for o in ops:
            terms *= max(1, o.size)
        # crude but safe: every summand is < p**len(ops), counts < total size
        if terms and (self.p - 1) ** len(ops) * min(terms, 2**20) >= _INT_SAFE:
            raise ValidationError(
                f"modulus {self.p} too large for tensor contraction of this size"
            )
        return np.einsum(subscripts, *ops) % self.p

    def kronecker(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Kronecker product in row-major lexicographic basis order."""
        return np.kron(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) % self.p

    # -- elimination ---------------------------------------------------------

    def _inv_small(self, m: np.ndarray) -> np.ndarray:
        """Unblocked Gauss-Jordan inverse of a small square matrix."""
        p = self.p
        k = m.shape[0]
        aug = np.concatenate([m % p, self.eye(k)], axis=1)
        row = 0
        for col in range(k):
            piv = None
            for r in range(row, k):
                if aug[r, col] % p:
                    piv = r
                    break
            if piv is None:
                raise ValidationError("matrix is singular")
            if piv != row:
                aug[[row, piv]] = aug[[piv, row]]
            aug[row] = (aug[row] * self.inv(aug[row, col])) % p
            mask = aug[:, col] != 0
            mask[row] = False
            if mask.any():
                aug[mask] = (aug[mask] - np.outer(aug[mask, col], aug[row])) % p
            row += 1
        return aug[:, k:]

    def rref(self, mat: np.ndarray, block_size: int = 512):
        """Reduced row echelon form.

        Returns ``(R, pivots)`` where R is the unique RREF of ``mat`` and
        ``pivots`` is the ascending list of pivot columns.  Elimination is
        blocked by column panels: within a panel rows are reduced directly,
        and the trailing columns are updated with one exact matrix product
        per panel (final row = start row - coeffs @ final pivot rows, where
        the coefficients are the panel-start entries at the pivot columns).
        """
        p = self.p
        R = self.arr(mat)
        if R.ndim != 2:
            raise ValidationError("rref expects a 2-d array")
        rows, cols = R.shape
        pivots: list[int] = []
        if rows == 0 or cols == 0:
            return R, pivots
        pr = 0
        for c0 in range(0, cols, block_size):
            if pr >= rows:
                break
            c1 = min(c0 + block_size, cols)
            panel_start = R[:, c0:c1].copy()
            panel = panel_start.copy()
            is_piv = np.zeros(rows, dtype=bool)
            loc_cols: list[int] = []
            piv_rows: list[int] = []
            for lc in range(c1 - c0):
                cand = np.nonzero(panel[pr:, lc])[0]
                cand = [pr + int(c) for c in cand if not is_piv[pr + int(c)]]
                if not cand:
                    continue
                r = cand[0]
                panel[r] = (panel[r] * self.inv(panel[r, lc])) % p
                mask = panel[:, lc] != 0
                mask[r] = False
                if mask.any():
                    panel[mask] = (panel[mask] - np.outer(panel[mask, lc], panel[r])) % p
                is_piv[r] = True
                loc_cols.append(lc)
                piv_rows.append(r)
            if not piv_rows:
                continue
            k = len(piv_rows)
            if c1 < cols:
                start_piv = panel_start[piv_rows][:, loc_cols]
                transform = self._inv_small(start_piv)
                fp_trail = self.matmul(transform, R[piv_rows, c1:])
                beta = panel_start[:, loc_cols]
                R[:, c1:] = (R[:, c1:] - self.matmul(beta, fp_trail)) % p
                R[piv_rows, c1:] = fp_trail
            R[:, c0:c1] = panel
            others = [i for i in range(pr, rows) if not is_piv[i]]
            order = np.concatenate(
                [np.arange(pr), np.array(piv_rows, dtype=np.int64),
                 np.array(others, dtype=np.int64)]
            ) if (piv_rows or others) else np.arange(rows)
            R = R[order.astype(np.intp)]
            pivots.extend(c0 + lc for lc in loc_cols)
            pr += k
        return R, pivots

    def rank(self, mat: np.ndarray) -> int:
        return len(self.rref(mat)[1])

    def rref_transform(self, mat: np.ndarray):
        """RREF together with the row transform: returns (R, pivots, T) with
        T @ mat = R.  Used to solve many right-hand sides with one factorization."""
        m = self.arr(mat)
        rows, cols = m.shape
        aug, piv_all = self.rref(np.concatenate([m, self.eye(rows)], axis=1))
        pivots = [c for c in piv_all if c < cols]
        return aug[:, :cols], pivots, aug[:, cols:]

    def solve_factored(self, factorization, rhs: np.ndarray):
        """Solve mat @ x = rhs (rhs a vector or a matrix of columns) using the
        output of :meth:`rref_transform`.  Free variables are set to 0; returns
        None when any column is inconsistent."""
        R, pivots, T = factorization
        cols = R.shape[1]
        rank = len(pivots)
        vec = rhs.ndim == 1
        b = rhs[:, None] if vec else rhs
        tb = self.matmul(T, b)
        if (tb[rank:] != 0).any():
            return None
        x = self.zeros((cols, b.shape[1]))
        x[pivots] = tb[:rank]
        return x[:, 0] if vec else x

    def solve(self, mat: np.ndarray, rhs: np.ndarray):
        """Canonical solution of mat @ x = rhs (free variables 0), or None."""
        m = self.arr(mat)
        b = self.arr(rhs)
        if b.ndim != 1 or m.shape[0] != b.shape[0]:
            raise ValidationError(
                f"solve: incompatible shapes {m.shape} and {b.shape}"
            )
        R, piv = self.rref(np.concatenate([m, b[:, None]], axis=1))
        cols = m.shape[1]
        if cols in piv:
            return None
        x = self.zeros(cols)
        for j, pc in enumerate(piv):
            x[pc] = R[j, cols]
        return x

    def inverse(self, mat: np.ndarray):
        """Inverse of a square matrix, or None if singular."""
        m = self.arr(mat)
        n = m.shape[0]
        if m.shape[1] != n:
            raise ValidationError("inverse expects a square matrix")
        if n == 0:
            return m.copy()
        R, piv = self.rref(np.concatenate([m, self.eye(n)], axis=1))
        if piv[:n] != list(range(n)) or len(piv) < n:
            return None
        return R[:, n:]

    def kernel(self, mat: np.ndarray) -> "Subspace":
        """RREF basis of the right kernel {v : mat @ v = 0}."""
        m = self.arr(mat)
        R, piv = self.rref(m)
        cols = m.shape[1]
        free = [c for c in range(cols) if c not in set(piv)]
        basis = self.zeros((len(free), cols))
        for row, f in enumerate(free):
            basis[row, f] = 1
            for j, pc in enumerate(piv):
                basis[row, pc] = (-R[j, f]) % self.p
        return subspace_from_rows(self, basis, cols)

    def quotient(self, sub: "Subspace") -> "QuotientPresentation":
        """Quotient of the ambient space by ``sub``, with the transversal given
        by the non-pivot standard coordinates (deterministic)."""
        n = sub.ambient_dim
        piv = sub.pivots
        free = [c for c in range(n) if c not in set(piv)]
        q = len(free)
        transversal = self.zeros((q, n))
        projection = self.zeros((q, n))
        for a, f in enumerate(free):
            transversal[a, f] = 1
            projection[a, f] = 1
            for j, pc in enumerate(piv):
                projection[a, pc] = (-sub.basis[j, f]) % self.p
        section = transversal.T.copy()
        pres = QuotientPresentation(
            field=self, ambient_dim=n, sub=sub,
            transversal=transversal, projection=projection, section=section,
        )
        return pres


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace given by its unique RREF basis (rows)."""

    field: PrimeField
    ambient_dim: int
    basis: np.ndarray
    pivots: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        """Remainder of vec after subtracting its component in the subspace."""
        v = self.field.arr(vec)
        if self.dim == 0:
            return v
        coeff = v[list(self.pivots)]
        return (v - self.field.matmul(coeff[None, :], self.basis)[0]) % self.field.p

    def reduce_rows(self, mat: np.ndarray) -> np.ndarray:
        m = self.field.arr(mat)
        if self.dim == 0 or m.shape[0] == 0:
            return m
        coeff = m[:, list(self.pivots)]
        return (m - self.field.matmul(coeff, self.basis)) % self.field.p

    def contains(self, vec: np.ndarray) -> bool:
        return not self.reduce(vec).any()

    def contains_space(self, other: "Subspace") -> bool:
        return not self.reduce_rows(other.basis).any()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and np.array_equal(self.basis, other.basis)
        )

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} of F_{self.field.p}^{self.ambient_dim})"


def subspace_from_rows(field: PrimeField, rows, ambient_dim: int | None = None) -> Subspace:
    """Span of the given row vectors, as a canonical Subspace."""
    m = field.arr(rows)
    if m.ndim == 1:
        if m.size == 0 and ambient_dim is not None:
            m = m.reshape(0, ambient_dim)
        else:
            m = m[None, :]
    if m.ndim != 2:
        raise ValidationError("subspace_from_rows expects rows of vectors")
    if ambient_dim is not None and m.shape[1] != ambient_dim:
        raise ValidationError("row length does not match ambient_dim")
    R, piv = field.rref(m)
    return Subspace(field=field, ambient_dim=int(m.shape[1]),
                    basis=R[: len(piv)].copy(), pivots=tuple(piv))


@dataclass(frozen=True, eq=False)
class QuotientPresentation:
    """Presentation of ambient/sub with a chosen transversal.

    projection @ section = identity on the quotient and projection
    annihilates sub; section lifts quotient coordinates into the ambient
    space along the non-pivot standard coordinates.
    """

    field: PrimeField
    ambient_dim: int
    sub: Subspace
    transversal: np.ndarray
    projection: np.ndarray
    section: np.ndarray

    def __post_init__(self):
        f = self.field
        q = self.quotient_dim
        if not np.array_equal(f.matmul(self.projection, self.section), f.eye(q)):
            raise ValidationError("projection @ section is not the identity")
        if self.sub.dim and f.matmul(self.projection, self.sub.basis.T).any():
            raise ValidationError("projection does not annihilate the subspace")

    @property
    def quotient_dim(self) -> int:
        return self.ambient_dim - self.sub.dim

    def to_quotient(self, vec: np.ndarray) -> np.ndarray:
        return self.field.matmul(self.projection, self.field.arr(vec))

    def lift(self, qvec: np.ndarray) -> np.ndarray:
        return self.field.matmul(self.section, self.field.arr(qvec))
