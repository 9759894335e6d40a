"""Exact dense linear algebra over prime fields GF(p) and the rationals.

Everything downstream (path algebras, hom spaces, towers) reduces to the
primitives here: canonical-form matrices, Gaussian elimination, kernels,
minimal polynomials and just enough polynomial factorization to split
endomorphisms.  No floating point anywhere; GF(p) entries are reduced
residues in [0, p), rational entries are ``fractions.Fraction`` (always in
lowest terms with positive denominator).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

# int64 dot products stay exact as long as cols * (p-1)^2 < 2^63.
_MAX_PRIME = 1 << 25


class UnsupportedFieldError(ValueError):
    """Operation not available over the given field."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A computable base field: ``GF(p)`` for a prime p, or the rationals.

    ``p is None`` encodes the rationals.
    """

    p: Optional[int]

    def __post_init__(self):
        if self.p is not None:
            if not _is_prime(self.p):
                raise ValueError(f"{self.p} is not prime")
            if self.p > _MAX_PRIME:
                raise ValueError(f"prime {self.p} too large for exact int64 arithmetic")

    @staticmethod
    def prime(p: int) -> "FieldSpec":
        return FieldSpec(p)

    @staticmethod
    def rationals() -> "FieldSpec":
        return FieldSpec(None)

    @property
    def is_rationals(self) -> bool:
        return self.p is None

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __str__(self) -> str:
        return "Q" if self.p is None else f"GF({self.p})"

    # -- scalar operations ------------------------------------------------

    def coerce(self, x) -> object:
        if self.p is None:
            return Fraction(x)
        return int(x) % self.p

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def inv(self, x):
        if self.p is None:
            if x == 0:
                raise ZeroDivisionError("inverse of 0")
            return Fraction(1) / x
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(x, self.p - 2, self.p)

    # -- array plumbing ----------------------------------------------------

    @property
    def dtype(self):
        return object if self.p is None else np.int64

    def normalize(self, arr: np.ndarray) -> np.ndarray:
        """Reduce an ndarray to canonical entries (in place is fine)."""
        if self.p is None:
            return arr
        return arr % self.p

    def empty(self, rows: int, cols: int) -> np.ndarray:
        if self.p is None:
            a = np.empty((rows, cols), dtype=object)
            a[...] = Fraction(0)
            return a
        return np.zeros((rows, cols), dtype=np.int64)


QQ = FieldSpec.rationals()


def GF(p: int) -> FieldSpec:
    return FieldSpec.prime(p)


class Mat:
    """An immutable exact matrix over a :class:`FieldSpec`.

    Entries are stored row-major in a numpy array (int64 residues for GF(p),
    ``Fraction`` objects for Q).  All operations return new matrices in
    canonical form.
    """

    __slots__ = ("field", "a")

    def __init__(self, field: FieldSpec, array: np.ndarray, copy: bool = True):
        if array.ndim != 2:
            raise ValueError(f"expected 2-d array, got shape {array.shape}")
        a = np.array(array, dtype=field.dtype, copy=copy)
        a = field.normalize(a)
        a.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "a", a)

    def __setattr__(self, *args):
        raise AttributeError("Mat is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rows(field: FieldSpec, rows: Sequence[Sequence]) -> "Mat":
        rows = list(rows)
        if not rows:
            raise ValueError("from_rows needs at least one row; use zeros for empty shapes")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        a = field.empty(len(rows), ncols)
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                a[i, j] = field.coerce(x)
        return Mat(field, a, copy=False)

    @staticmethod
    def zeros(field: FieldSpec, rows: int, cols: int) -> "Mat":
        return Mat(field, field.empty(rows, cols), copy=False)

    @staticmethod
    def identity(field: FieldSpec, n: int) -> "Mat":
        a = field.empty(n, n)
        for i in range(n):
            a[i, i] = field.one
        return Mat(field, a, copy=False)

    # -- basic queries -----------------------------------------------------

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple:
        return self.a.shape

    @property
    def entries(self) -> tuple:
        return tuple(self.a.reshape(-1).tolist())

    def tolist(self) -> list:
        return [list(row) for row in self.a.tolist()]

    def is_zero(self) -> bool:
        return not np.any(self.a != self.field.zero)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def key(self) -> bytes:
        """Canonical hashable key (GF(p) only; used for orbit dedup)."""
        if self.field.is_rationals:
            raise UnsupportedFieldError("byte keys only defined over GF(p)")
        return self.a.astype(np.int64).tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.all(self.a == other.a))
        )

    def __hash__(self):
        return hash((self.field, self.shape, self.entries))

    def __repr__(self) -> str:
        return f"Mat({self.field}, {self.tolist()})"

    # -- arithmetic ----------------------------------------------------------

    def _check_same_field(self, other: "Mat"):
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other: "Mat") -> "Mat":
        self._check_same_field(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")
        return Mat(self.field, self.a + other.a, copy=False)

    def __sub__(self, other: "Mat") -> "Mat":
        self._check_same_field(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")
        return Mat(self.field, self.a - other.a, copy=False)

    def __neg__(self) -> "Mat":
        return Mat(self.field, -self.a, copy=False)

    def __matmul__(self, other: "Mat") -> "Mat":
        self._check_same_field(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return Mat.zeros(self.field, self.rows, other.cols)
        return Mat(self.field, np.dot(self.a, other.a), copy=False)

    def scale(self, c) -> "Mat":
        c = self.field.coerce(c)
        return Mat(self.field, self.a * c, copy=False)

    @property
    def T(self) -> "Mat":
        return Mat(self.field, self.a.T)

    def row(self, i: int) -> "Mat":
        return Mat(self.field, self.a[i : i + 1, :])

    def take_rows(self, idx: Sequence[int]) -> "Mat":
        if len(idx) == 0:
            return Mat.zeros(self.field, 0, self.cols)
        return Mat(self.field, self.a[list(idx), :])

    def take_cols(self, idx: Sequence[int]) -> "Mat":
        if len(idx) == 0:
            return Mat.zeros(self.field, self.rows, 0)
        return Mat(self.field, self.a[:, list(idx)])


def hstack(mats: Sequence[Mat]) -> Mat:
    mats = list(mats)
    if not mats:
        raise ValueError("hstack of nothing")
    field = mats[0].field
    rows = mats[0].rows
    if any(m.field != field or m.rows != rows for m in mats):
        raise ValueError("hstack needs equal fields and row counts")
    return Mat(field, np.hstack([m.a for m in mats]), copy=False)


def vstack(mats: Sequence[Mat]) -> Mat:
    mats = list(mats)
    if not mats:
        raise ValueError("vstack of nothing")
    field = mats[0].field
    cols = mats[0].cols
    if any(m.field != field or m.cols != cols for m in mats):
        raise ValueError("vstack needs equal fields and column counts")
    return Mat(field, np.vstack([m.a for m in mats]), copy=False)


def block_diag(field: FieldSpec, mats: Sequence[Mat]) -> Mat:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    a = field.empty(rows, cols)
    r = c = 0
    for m in mats:
        if m.field != field:
            raise ValueError("field mismatch in block_diag")
        a[r : r + m.rows, c : c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return Mat(field, a, copy=False)


def kron(x: Mat, y: Mat) -> Mat:
    x._check_same_field(y)
    if x.rows * y.rows == 0 or x.cols * y.cols == 0:
        return Mat.zeros(x.field, x.rows * y.rows, x.cols * y.cols)
    return Mat(x.field, np.kron(x.a, y.a), copy=False)


# ---------------------------------------------------------------------------
# Gaussian elimination
# ---------------------------------------------------------------------------


def _rref_inplace(field: FieldSpec, a: np.ndarray) -> list:
    """Reduce ``a`` to reduced row echelon form in place; return pivot columns."""
    m, n = a.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        # find a pivot in column c at row >= r
        piv = None
        for i in range(r, m):
            if a[i, c] != field.zero:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            a[[r, piv], :] = a[[piv, r], :]
        inv = field.inv(a[r, c])
        if inv != field.one:
            a[r, :] = field.normalize(a[r, :] * inv)
        col = a[:, c].copy()
        col[r] = field.zero
        nz = np.nonzero(col != field.zero)[0]
        if len(nz):
            a[nz, :] = field.normalize(a[nz, :] - np.outer(col[nz], a[r, :]))
        pivots.append(c)
        r += 1
    return pivots


def rref(A: Mat) -> tuple:
    """Reduced row echelon form.

    Returns ``(R, pivots)`` with ``R`` in canonical RREF and ``pivots`` the
    tuple of pivot column indices.
    """
    a = np.array(A.a, dtype=A.field.dtype, copy=True)
    pivots = _rref_inplace(A.field, a)
    return Mat(A.field, a, copy=False), tuple(pivots)


def rank(A: Mat) -> int:
    return len(rref(A)[1])


def null_space_cols(A: Mat) -> Mat:
    """Columns spanning the right kernel {x : A @ x = 0}."""
    R, pivots = rref(A)
    n = A.cols
    free = [c for c in range(n) if c not in pivots]
    field = A.field
    out = field.empty(n, len(free))
    for k, fc in enumerate(free):
        out[fc, k] = field.one
        for r, pc in enumerate(pivots):
            out[pc, k] = -R.a[r, fc]
    return Mat(field, out, copy=False)


def null_space_rows(A: Mat) -> Mat:
    """Rows spanning the left kernel {y : y @ A = 0}."""
    return null_space_cols(A.T).T


def solve(A: Mat, B: Mat) -> Optional[tuple]:
    """Solve ``A @ X = B`` exactly.

    Returns ``(particular, kernel_basis)`` where ``A @ particular == B`` and
    the columns of ``kernel_basis`` span ``{x : A @ x = 0}``; ``None`` iff the
    system is inconsistent.
    """
    if A.rows != B.rows:
        raise ValueError(f"row mismatch: A has {A.rows}, B has {B.rows}")
    A._check_same_field(B)
    field = A.field
    aug = np.hstack([np.array(A.a, dtype=field.dtype, copy=True), np.array(B.a, dtype=field.dtype, copy=True)])
    pivots = _rref_inplace(field, aug)
    n = A.cols
    if any(c >= n for c in pivots):
        return None
    part = field.empty(n, B.cols)
    for r, pc in enumerate(pivots):
        part[pc, :] = aug[r, n:]
    return Mat(field, part, copy=False), null_space_cols(A)


def solve_rows(X_times: Mat, B: Mat) -> Optional[tuple]:
    """Solve ``X @ X_times = B`` for row-style systems; transposed :func:`solve`."""
    res = solve(X_times.T, B.T)
    if res is None:
        return None
    part, ker = res
    return part.T, ker.T


def inverse(A: Mat) -> Optional[Mat]:
    if not A.is_square():
        raise ValueError("inverse of non-square matrix")
    res = solve(A, Mat.identity(A.field, A.rows))
    if res is None:
        return None
    part, ker = res
    if ker.cols != 0:
        return None
    return part


# ---------------------------------------------------------------------------
# Row spaces (subspaces are given by row-span matrices)
# ---------------------------------------------------------------------------


def row_basis(A: Mat) -> Mat:
    """Canonical basis (RREF nonzero rows) of the row space of A.

    Two matrices span the same subspace iff their ``row_basis`` results are
    equal, which makes this usable as a canonical form.
    """
    R, pivots = rref(A)
    return R.take_rows(range(len(pivots)))


def rows_contained(A: Mat, B: Mat) -> bool:
    """Is rowspace(A) contained in rowspace(B)?"""
    if A.rows == 0:
        return True
    return solve_rows(B, A) is not None


def coords_in_rows(B: Mat, X: Mat) -> Mat:
    """Coordinates C with C @ B == X; raises if X is not in rowspace(B)."""
    res = solve_rows(B, X)
    if res is None:
        raise ValueError("rows not contained in the span")
    return res[0]


def extend_row_basis(inner: Mat, outer: Mat) -> Mat:
    """Rows of ``outer``'s span completing a basis of ``inner`` inside it.

    Returns a matrix C such that rows(inner) + rows(C) is a basis of
    rowspace(outer); ``inner`` must be an independent set contained in
    rowspace(outer).
    """
    if not rows_contained(inner, outer):
        raise ValueError("inner span not contained in outer span")
    field = inner.field
    have = inner.rows
    target = rank(outer)
    picked = []
    cur = inner
    for i in range(outer.rows):
        if have + len(picked) == target:
            break
        cand = vstack([cur, outer.row(i)])
        if rank(cand) > cur.rows:
            picked.append(i)
            cur = cand
    return outer.take_rows(picked)


# ---------------------------------------------------------------------------
# Polynomials (coefficient lists, ascending degree)
# ---------------------------------------------------------------------------


def poly_trim(field: FieldSpec, f: list) -> list:
    while f and f[-1] == field.zero:
        f.pop()
    return f


def poly_deg(f: list) -> int:
    return len(f) - 1


def poly_add(field: FieldSpec, f: list, g: list) -> list:
    n = max(len(f), len(g))
    out = [field.zero] * n
    for i, c in enumerate(f):
        out[i] = field.coerce(out[i] + c)
    for i, c in enumerate(g):
        out[i] = field.coerce(out[i] + c)
    return poly_trim(field, out)

def poly_scale(field: FieldSpec, f: list, c) -> list:
    c = field.coerce(c)
    return poly_trim(field, [field.coerce(a * c) for a in f])


def poly_mul(field: FieldSpec, f: list, g: list) -> list:
    if not f or not g:
        return []
    out = [field.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == field.zero:
            continue
        for j, b in enumerate(g):
            out[i + j] = field.coerce(out[i + j] + a * b)
    return poly_trim(field, out)


def poly_divmod(field: FieldSpec, f: list, g: list) -> tuple:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    q = [field.zero] * max(0, len(f) - len(g) + 1)
    inv_lead = field.inv(g[-1])
    while len(f) >= len(g) and f:
        c = field.coerce(f[-1] * inv_lead)
        d = len(f) - len(g)
        q[d] = c
        for i, b in enumerate(g):
            f[d + i] = field.coerce(f[d + i] - c * b)
        poly_trim(field, f)
    return poly_trim(field, q), f


def poly_monic(field: FieldSpec, f: list) -> list:
    if not f:
        return f
    inv = field.inv(f[-1])
    return [field.coerce(c * inv) for c in f]


def poly_gcd(field: FieldSpec, f: list, g: list) -> list:
    f, g = list(f), list(g)
    while g:
        f, g = g, poly_divmod(field, f, g)[1]
    return poly_monic(field, f)


def poly_lcm(field: FieldSpec, f: list, g: list) -> list:
    if not f or not g:
        return []
    d = poly_gcd(field, f, g)
    return poly_monic(field, poly_mul(field, poly_divmod(field, f, d)[0], g))


def poly_derivative(field: FieldSpec, f: list) -> list:
    out = [field.coerce(i * f[i]) for i in range(1, len(f))]
    return poly_trim(field, out)


def poly_eval_scalar(field: FieldSpec, f: list, x):
    acc = field.zero
    for c in reversed(f):
        acc = field.coerce(acc * x + c)
    return acc


def poly_eval_mat(f: list, A: Mat) -> Mat:
    """Evaluate a polynomial at a square matrix (Horner)."""
    field = A.field
    n = A.rows
    acc = Mat.zeros(field, n, n)
    eye = Mat.identity(field, n)
    for c in reversed(f):
        acc = acc @ A + eye.scale(c)
    return acc


def poly_pow_mod(field: FieldSpec, base: list, e: int, mod: list) -> list:
    result = [field.one]
    base = poly_divmod(field, base, mod)[1]
    while e:
        if e & 1:
            result = poly_divmod(field, poly_mul(field, result, base), mod)[1]
        base = poly_divmod(field, poly_mul(field, base, base), mod)[1]
        e >>= 1
    return result


def squarefree_decomposition(field: FieldSpec, f: list) -> list:
    """Return [(g_i, i)] with f = lead * prod g_i^i, the g_i squarefree, coprime.

    Handles characteristic p (where f' can vanish) by p-th-root recursion;
    over the prime field the root of x^p is x.
    """
    f = poly_monic(field, list(f))
    if poly_deg(f) <= 0:
        return []
    p = field.characteristic
    d = poly_derivative(field, f)
    if not d:
        # f = h(x^p); over GF(p) coefficients are their own p-th roots
        h = [f[i] for i in range(0, len(f), p)]
        inner = squarefree_decomposition(field, h)
        return [(g, m * p) for (g, m) in inner]
    out = []
    c = poly_gcd(field, f, d)
    w = poly_divmod(field, f, c)[0]
    i = 1
    while poly_deg(w) > 0:
        y = poly_gcd(field, w, c)
        g = poly_divmod(field, w, y)[0]
        if poly_deg(g) > 0:
            out.append((g, i))
        w = y
        c = poly_divmod(field, c, y)[0]
        i += 1
    if poly_deg(c) > 0:
        # leftover p-th power part
        inner = squarefree_decomposition(field, c)
        for g, m in inner:
            out.append((g, m))
    return out


def _irreducibles_of_degree(field: FieldSpec, d: int):
    """Yield all monic irreducible polynomials of degree d over GF(p) (small p^d)."""
    p = field.p
    for code in range(p**d):
        coeffs = []
        x = code
        for _ in range(d):
            coeffs.append(x % p)
            x //= p
        f = coeffs + [1]
        if d == 1:
            yield f
            continue
        # irreducible iff no root for d<=3 is not enough in general; test by
        # trial division with smaller-degree irreducibles
        ok = True
        for e in range(1, d // 2 + 1):
            for g in _irreducibles_of_degree(field, e):
                if not poly_divmod(field, f, g)[1]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield f


def _equal_degree_split(field: FieldSpec, f: list, d: int, seed: int) -> list:
    """Split a product of distinct irreducibles all of degree d (Cantor-Zassenhaus)."""
    p = field.p
    if poly_deg(f) == d:
        return [f]
    if p**d <= 4096:
        # deterministic: trial division by every monic irreducible of degree d
        parts = []
        rem = f
        for g in _irreducibles_of_degree(field, d):
            if poly_deg(rem) < d:
                break
            q, r = poly_divmod(field, rem, g)
            if not r:
                parts.append(g)
                rem = q
        if poly_deg(rem) > 0:
            parts.append(rem)
        return parts
    rng = np.random.default_rng(seed)
    n = poly_deg(f)
    while True:
        r = [field.coerce(int(rng.integers(0, p))) for _ in range(n)] + [field.one]
        r = poly_trim(field, r)
        if poly_deg(r) < 1:
            continue
        if p == 2:
            t = list(r)
            acc = list(r)
            for _ in range(d - 1):
                acc = poly_pow_mod(field, acc, 2, f)
                t = poly_add(field, t, acc)
            g = poly_gcd(field, t, f)
        else:
            e = (p**d - 1) // 2
            t = poly_pow_mod(field, r, e, f)
            t = poly_add(field, t, [field.coerce(-1)])
            g = poly_gcd(field, t, f)
        if 0 < poly_deg(g) < poly_deg(f):
            left = _equal_degree_split(field, g, d, seed + 1)
            right = _equal_degree_split(field, poly_divmod(field, f, g)[0], d, seed + 2)
            return left + right


def factor_gfp(field: FieldSpec, f: list, seed: int = 0) -> list:
    """Full factorization over GF(p): returns [(irreducible monic, multiplicity)]."""
    if field.is_rationals:
        raise UnsupportedFieldError("factor_gfp requires a prime field")
    out = {}
    for g, mult in squarefree_decomposition(field, f):
        # distinct-degree factorization of the squarefree g
        h = [field.zero, field.one]  # x
        rem = list(g)
        d = 0
        while poly_deg(rem) > 0:
            d += 1
            if 2 * d > poly_deg(rem):
                out[tuple(rem)] = out.get(tuple(rem), 0) + mult
                break
            h = poly_pow_mod(field, h, field.p, rem)
            diff = poly_add(field, h, poly_scale(field, [field.zero, field.one], -1))
            part = poly_gcd(field, diff, rem)
            if poly_deg(part) > 0:
                for irr in _equal_degree_split(field, part, d, seed):
                    out[tuple(irr)] = out.get(tuple(irr), 0) + mult
                rem = poly_divmod(field, rem, part)[0]
                h = poly_divmod(field, h, rem)[1]
    return [(list(k), v) for k, v in sorted(out.items())]


def _int_divisors(n: int) -> list:
    n = abs(n)
    out = set()
    f = 1
    while f * f <= n:
        if n % f == 0:
            out.add(f)
            out.add(n // f)
        f += 1
    return sorted(out)


def rational_roots(f: list) -> list:
    """All rational roots of f over Q, as [(root, multiplicity)]."""
    field = QQ
    f = poly_trim(field, [Fraction(c) for c in f])
    if poly_deg(f) < 1:
        return []
    den = 1
    for c in f:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in f]
    while ints and ints[0] == 0:
        ints = ints[1:]
    roots = []
    if len(ints) < len(f):
        roots.append(Fraction(0))
    if len(ints) >= 2:
        a0, an = ints[0], ints[-1]
        cands = set()
        for num in _int_divisors(a0):
            for d in _int_divisors(an):
                cands.add(Fraction(num, d))
                cands.add(Fraction(-num, d))
        for r in sorted(cands):
            if poly_eval_scalar(field, f, r) == 0:
                roots.append(r)
    out = []
    for r in sorted(set(roots)):
        m = 0
        g = list(f)
        lin = [-r, Fraction(1)]
        while True:
            q, rem = poly_divmod(field, g, lin)
            if rem:
                break
            m += 1
            g = q
        out.append((r, m))
    return out


# ---------------------------------------------------------------------------
# Characteristic and minimal polynomials, integer diagonalizability
# ---------------------------------------------------------------------------


def charpoly(A: Mat) -> list:
    """Characteristic polynomial det(tI - A), ascending coefficients.

    Uses similarity reduction to Hessenberg form followed by the standard
    leading-minor recurrence; exact over any field (no divisions by integers,
    so safe in characteristic p).
    """
    if not A.is_square():
        raise ValueError("charpoly of non-square matrix")
    field = A.field
    n = A.rows
    if n == 0:
        return [field.one]
    h = np.array(A.a, dtype=field.dtype, copy=True)
    for j in range(n - 2):
        piv = None
        for i in range(j + 1, n):
            if h[i, j] != field.zero:
                piv = i
                break
        if piv is None:
            continue
        if piv != j + 1:
            h[[j + 1, piv], :] = h[[piv, j + 1], :]
            h[:, [j + 1, piv]] = h[:, [piv, j + 1]]
        inv = field.inv(h[j + 1, j])
        for i in range(j + 2, n):
            if h[i, j] == field.zero:
                continue
            factor = field.coerce(h[i, j] * inv)
            h[i, :] = field.normalize(h[i, :] - factor * h[j + 1, :])
            h[:, j + 1] = field.normalize(h[:, j + 1] + factor * h[:, i])
    # p_m = (t - h[m-1,m-1]) p_{m-1} - sum_k h[k-1,m-1] (prod subdiag) p_{k-1}
    polys = [[field.one]]
    for m in range(1, n + 1):
        lin = [field.coerce(-h[m - 1, m - 1]), field.one]
        p = poly_mul(field, lin, polys[m - 1])
        prod = field.one
        for k in range(m - 1, 0, -1):
            prod = field.coerce(prod * h[k, k - 1])
            if prod == field.zero:
                break
            coeff = field.coerce(h[k - 1, m - 1] * prod)
            if coeff == field.zero:
                continue
            p = poly_add(field, p, poly_scale(field, polys[k - 1], -coeff))
        polys.append(p)
    return polys[n]


def charpoly_coefficient(A: Mat, k: int) -> object:
    """Coefficient of t^(n-k) in det(tI - A); k-th elementary symmetric data."""
    cp = charpoly(A)
    n = A.rows
    if k > n:
        return A.field.zero
    return cp[n - k]


def minimal_polynomial(A: Mat) -> list:
    """Monic minimal polynomial of a square matrix (ascending coefficients).

    Computed as the lcm of the annihilators of the standard basis vectors
    (Krylov chains), which is exact over both field kinds.
    """
    if not A.is_square():
        raise ValueError("minimal polynomial of non-square matrix")
    n = A.rows
    field = A.field
    if n == 0:
        return [field.one]
    mu = [field.one]
    for i in range(n):
        # does mu already annihilate e_i?
        va = field.empty(1, n)
        va[0, i] = field.one
        v = Mat(field, va, copy=False)
        acc = Mat.zeros(field, 1, n)
        w = v
        for c in mu:
            acc = acc + w.scale(c)
            w = w @ A
        if acc.is_zero():
            continue
        # grow a Krylov chain for e_i
        chain = [v]
        w = v @ A
        while True:
            stacked = vstack(chain + [w])
            if rank(stacked) < len(chain) + 1:
                break
            chain.append(w)
            w = w @ A
        coords = coords_in_rows(vstack(chain), w)
        ann = [field.coerce(-coords.a[0, j]) for j in range(len(chain))] + [field.one]
        mu = poly_lcm(field, mu, ann)
        if poly_deg(mu) == n:
            break
    return mu


def integer_diagonalizable(A: Mat) -> Optional[tuple]:
    """Decide whether a rational square matrix is diagonalizable with integer
    eigenvalues.

    Returns ``(eigenvalues, eigenbasis)`` where eigenvalues is the ascending
    list with multiplicity and the columns of ``eigenbasis`` are grouped
    accordingly (``A @ basis_col = lambda * basis_col``); ``None`` when the
    minimal polynomial is not a product of distinct integer linear factors.
    """
    if not A.field.is_rationals:
        raise UnsupportedFieldError("integer_diagonalizable requires Q")
    if not A.is_square():
        raise ValueError("non-square matrix")
    n = A.rows
    if n == 0:
        return [], Mat.zeros(A.field, 0, 0)
    mu = minimal_polynomial(A)
    roots = rational_roots(mu)
    if any(m != 1 for (_, m) in roots):
        return None
    if sum(m for (_, m) in roots) != poly_deg(mu):
        return None
    if any(r.denominator != 1 for (r, _) in roots):
        return None
    eigenvalues = []
    cols = []
    for r, _ in roots:
        shifted = A - Mat.identity(A.field, n).scale(r)
        ker = null_space_cols(shifted)
        eigenvalues.extend([int(r)] * ker.cols)
        cols.append(ker)
    basis = hstack(cols) if cols else Mat.zeros(A.field, n, 0)
    if basis.cols != n:
        return None
    return eigenvalues, basis
