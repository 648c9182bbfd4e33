"""Exact arithmetic in Z/p^M: valuations, unit roots, Smith normal form.

Everything works with plain Python ints reduced mod p^M.  p-adic integers
only ever appear at this fixed finite precision; an "infinite" order found
at precision M is reported with the INF marker and a caveat flag, never
silently promoted to an exact statement.
"""

from __future__ import annotations

from dataclasses import dataclass

INF = float("inf")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PadicParams:
    """The prime p and the working precision M; arithmetic happens in Z/p^M."""

    p: int
    M: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.M < 1:
            raise ValueError(f"precision M must be >= 1, got {self.M}")
        object.__setattr__(self, "_modulus", self.p ** self.M)

    @property
    def modulus(self) -> int:
        return self._modulus


def nu_p(x: int, p: int) -> int:
    """p-adic valuation of a nonzero integer (exact, big-int loop)."""
    if x == 0:
        raise ValueError("valuation of zero undefined")
    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicInt:
    """An element of Z/p^M, stored as its canonical representative in [0, p^M)."""

    params: PadicParams
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.params.modulus)

    def _check(self, other: "PadicInt"):
        if self.params != other.params:
            raise ValueError("incompatible precisions")

    def __add__(self, other):
        self._check(other)
        return PadicInt(self.params, self.value + other.value)

    def __sub__(self, other):
        self._check(other)
        return PadicInt(self.params, self.value - other.value)

    def __mul__(self, other):
        self._check(other)
        return PadicInt(self.params, self.value * other.value)

    def __neg__(self):
        return PadicInt(self.params, -self.value)

    def __pow__(self, e: int):
        if e < 0:
            return unit_inverse(self) ** (-e)
        return PadicInt(self.params, pow(self.value, e, self.params.modulus))

    @property
    def is_unit(self) -> bool:
        return self.value % self.params.p != 0

    def valuation(self) -> int:
        """min(nu_p(value), M); the zero residue is reported as M."""
        if self.value == 0:
            return self.params.M
        return min(nu_p(self.value, self.params.p), self.params.M)

    def __repr__(self):
        return f"{self.value} (mod {self.params.p}^{self.params.M})"


def unit_inverse(x: PadicInt) -> PadicInt:
    """Inverse of a unit in Z/p^M."""
    if not x.is_unit:
        raise ValueError(f"not a unit mod {x.params.p}: {x.value}")
    return PadicInt(x.params, pow(x.value, -1, x.params.modulus))


def nth_root_one_unit(x: PadicInt, n: int) -> PadicInt:
    """The unique y with y^n = x, for gcd(n, p) = 1.

    For odd p requires x = 1 mod p and returns the root in 1 + pZ/p^M
    (raising to the n-th power is an automorphism of that group, so the
    root is y = x^(n^-1 mod p^(M-1))).  For p = 2 requires n odd and x a
    unit; n-th powering is then an automorphism of the whole unit group
    of order 2^(M-1).
    """
    p, M = x.params.p, x.params.M
    if n < 1 or n % p == 0:
        raise ValueError(f"root degree {n} not coprime to p = {p}")
    v = x.value
    if p == 2:
        if v % 2 == 0:
            raise ValueError("n-th root requires a unit")
        group_order = 2 ** (M - 1)
    else:
        if v % p != 1:
            raise ValueError("n-th root requires x = 1 mod p for odd p")
        group_order = p ** (M - 1)
    if group_order == 1:
        return PadicInt(x.params, v)
    e = pow(n, -1, group_order)
    return PadicInt(x.params, pow(v, e, x.params.modulus))


# ---------------------------------------------------------------------------
# small exact linear algebra mod p^M


def identity_matrix(k: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(k)] for i in range(k)]


def mat_mul(A, B, mod: int) -> list[list[int]]:
    rb = len(B)
    cb = len(B[0]) if rb else 0
    out = []
    for row in A:
        acc = [0] * cb
        for k, a in enumerate(row):
            if a:
                brow = B[k]
                for j in range(cb):
                    acc[j] += a * brow[j]
        out.append([v % mod for v in acc])
    return out


def mat_vec(A, v, mod: int) -> list[int]:
    return [sum(a * x for a, x in zip(row, v)) % mod for row in A]


def invert_matrix(A, params: PadicParams) -> list[list[int]]:
    """Inverse of a matrix whose determinant is a unit mod p^M (Gauss-Jordan)."""
    p, mod = params.p, params.modulus
    k = len(A)
    work = [list(row) + irow for row, irow in zip(A, identity_matrix(k))]
    for col in range(k):
        piv = next((i for i in range(col, k) if work[i][col] % p != 0), None)
        if piv is None:
            raise ValueError("matrix not invertible mod p")
        work[col], work[piv] = work[piv], work[col]
        inv = pow(work[col][col], -1, mod)
        work[col] = [v * inv % mod for v in work[col]]
        for i in range(k):
            if i != col and work[i][col]:
                f = work[i][col]
                work[i] = [(v - f * w) % mod for v, w in zip(work[i], work[col])]
    return [row[k:] for row in work]


@dataclass(frozen=True)
class SmithForm:
    """U * A * V = D over Z/p^M, with U, V of unit determinant.

    diag holds the diagonal of D: exact powers of p in ascending order of
    valuation, with 0 once the remaining block vanishes mod p^M.
    """

    params: PadicParams
    shape: tuple
    diag: tuple
    U: tuple
    V: tuple

    def kernel_columns(self) -> list[list[int]]:
        """Columns of V spanning the kernel as a Z_p-module at precision.

        Only diagonal entries that vanish mod p^M count: a nonzero p-power
        entry is injective on Z_p, so its finite mod-p^M pseudo-kernel is
        truncation noise, not a kernel of the underlying operator.
        """
        rows, cols = self.shape
        cols_out = []
        for j in range(cols):
            if j >= len(self.diag) or self.diag[j] == 0:
                cols_out.append([self.V[i][j] for i in range(cols)])
        return cols_out

    def cokernel_orders(self) -> list:
        """Orders of the cyclic summands of coker(A) on Z_p^rows, INF for full ones."""
        rows, cols = self.shape
        out = []
        for i in range(rows):
            if i >= len(self.diag) or self.diag[i] == 0:
                out.append(INF)
            else:
                e = nu_p(self.diag[i], self.params.p)
                if e > 0:
                    out.append(self.params.p ** e)
        return out


def smith_normal_form(matrix, params: PadicParams) -> SmithForm:
    """Smith normal form over the local ring Z/p^M.

    Pivots are chosen by minimal p-valuation, normalized to exact powers
    of p (the unit part is divided out), so the diagonal satisfies the
    divisibility chain and cokernel/kernel readings are immediate.
    """
    p, M, mod = params.p, params.M, params.modulus
    A = [[int(x) % mod for x in row] for row in matrix]
    r = len(A)
    c = len(A[0]) if r else 0
    if any(len(row) != c for row in A):
        raise ValueError("ragged matrix")
    U = identity_matrix(r)
    V = identity_matrix(c)
    diag = []
    for t in range(min(r, c)):
        best, bestv = None, M
        for i in range(t, r):
            for j in range(t, c):
                a = A[i][j]
                if a:
                    v = nu_p(a, p)
                    if v < bestv:
                        best, bestv = (i, j), v
            if best is not None and bestv == 0:
                break
        if best is None:
            diag.extend([0] * (min(r, c) - t))
            break
        i0, j0 = best
        if i0 != t:
            A[t], A[i0] = A[i0], A[t]
            U[t], U[i0] = U[i0], U[t]
        if j0 != t:
            for row in A:
                row[t], row[j0] = row[j0], row[t]
            for row in V:
                row[t], row[j0] = row[j0], row[t]
        piv = p ** bestv
        inv_unit = pow(A[t][t] // piv, -1, mod)
        A[t] = [v * inv_unit % mod for v in A[t]]
        U[t] = [v * inv_unit % mod for v in U[t]]
        for i in range(t + 1, r):
            x = A[i][t]
            if x:
                f = x // piv
                A[i] = [(v - f * w) % mod for v, w in zip(A[i], A[t])]
                U[i] = [(v - f * w) % mod for v, w in zip(U[i], U[t])]
        for j in range(t + 1, c):
            x = A[t][j]
            if x:
                f = x // piv
                for row in A:
                    row[j] = (row[j] - f * row[t]) % mod
                for row in V:
                    row[j] = (row[j] - f * row[t]) % mod
        diag.append(piv % mod)
    return SmithForm(
        params=params,
        shape=(r, c),
        diag=tuple(diag),
        U=tuple(tuple(row) for row in U),
        V=tuple(tuple(row) for row in V),
    )


@dataclass(frozen=True)
class CyclicDecomp:
    """A finite direct sum of cyclic p-groups, INF marking free-at-precision factors.

    Orders are powers of p sorted descending with INF entries first.  The
    precision_caveat flag records that INF factors were certified only at
    the working precision.
    """

    p: int
    orders: tuple = ()
    precision_caveat: bool = False

    def __post_init__(self):
        cleaned = []
        for o in self.orders:
            if o == INF:
                cleaned.append(INF)
                continue
            o = int(o)
            if o == 1:
                continue
            if o <= 0 or self.p ** nu_p(o, self.p) != o:
                raise ValueError(f"order {o} is not a power of p = {self.p}")
            cleaned.append(o)
        cleaned.sort(reverse=True)
        object.__setattr__(self, "orders", tuple(cleaned))
        if not any(o == INF for o in self.orders):
            object.__setattr__(self, "precision_caveat", False)

    @property
    def is_zero(self) -> bool:
        return not self.orders

    @property
    def free_rank(self) -> int:
        return sum(1 for o in self.orders if o == INF)

    def __str__(self):
        if not self.orders:
            return "0"
        parts = [f"Z_{self.p}" if o == INF else f"Z/{o}" for o in self.orders]
        s = " + ".join(parts)
        if self.precision_caveat:
            s += " [free part certified at precision only]"
        return s

    def to_json(self):
        return {
            "p": self.p,
            "orders": ["INF" if o == INF else o for o in self.orders],
            "precision_caveat": self.precision_caveat,
        }
