"""Truncated Witt vectors W(F_q) mod p^M on the Teichmuller power basis.

A ring is built from a monic lift f of a primitive irreducible polynomial
over F_p.  The Teichmuller lift w of the residue generator is computed by
iterating z -> z^q (which converges q-adically and stabilizes exactly at
precision M), the basis is changed to 1, w, ..., w^(n-1), and the Frobenius
lift sigma with sigma(w) = w^p is stored as an n x n matrix mod p^M.  On
this basis sigma has exact order n and w^(q-1) = 1 exactly, so all downstream
identities (S^n = p, Sx = sigma(x)S, ...) hold on the nose at precision.
"""

from __future__ import annotations

from functools import lru_cache

from morava.padic import PadicInt, PadicParams, invert_matrix, mat_mul, mat_vec, nu_p

# Monic lifts of Conway polynomials, coefficients lowest degree first.
# Every entry is verified irreducible and primitive mod p by the test suite.
DEFAULT_POLYS = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (5, 4): (2, 4, 4, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
    (7, 4): (3, 4, 5, 0, 1),
}


class PrecisionError(ArithmeticError):
    """An identity that must hold exactly at precision p^M failed."""


# ---------------------------------------------------------------------------
# polynomial helpers mod p (validation of defining polynomials)


def _pol_mul_mod(a, b, f, p):
    n = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for d in range(len(prod) - 1, n - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for i in range(n):
                prod[d - n + i] = (prod[d - n + i] - c * f[i]) % p
    out = prod[:n]
    out.extend([0] * (n - len(out)))
    return out


def _pol_pow(a, e, f, p):
    n = len(f) - 1
    result = [1] + [0] * (n - 1)
    base = list(a)
    while e:
        if e & 1:
            result = _pol_mul_mod(result, base, f, p)
        e >>= 1
        base = _pol_mul_mod(base, base, f, p)
    return result


def _prime_factors(m: int) -> set:
    out = set()
    d = 2
    while d * d <= m:
        while m % d == 0:
            out.add(d)
            m //= d
        d += 1
    if m > 1:
        out.add(m)
    return out


def _x_vector(n: int, f, p):
    if n == 1:
        return [(-f[0]) % p]
    return [0, 1] + [0] * (n - 2)


def validate_poly_mod_p(p: int, n: int, poly) -> tuple:
    """Check a monic degree-n polynomial is irreducible and primitive mod p.

    Returns the reduced coefficient tuple (lowest degree first).  Primitive
    means the residue of x generates F_q^* (order exactly q - 1), which is
    the property the Teichmuller generator inherits.
    """
    f = tuple(int(c) % p for c in poly)
    if len(f) != n + 1 or f[n] != 1:
        raise ValueError(f"need a monic degree-{n} polynomial, got {poly}")
    x = _x_vector(n, f, p)
    if n > 1:
        if _pol_pow(x, p ** n, f, p) != x:
            raise ValueError(f"{poly} is reducible mod {p}")
        for ell in _prime_factors(n):
            if _pol_pow(x, p ** (n // ell), f, p) == x:
                raise ValueError(f"{poly} is reducible mod {p}")
    one = [1] + [0] * (n - 1)
    q1 = p ** n - 1
    if q1 > 0:
        if _pol_pow(x, q1, f, p) != one:
            raise ValueError(f"{poly} is not primitive mod {p}")
        for ell in _prime_factors(q1):
            if _pol_pow(x, q1 // ell, f, p) == one:
                raise ValueError(f"{poly} is not primitive mod {p}")
    return f


# ---------------------------------------------------------------------------
# the residue field F_q


class Fq:
    """F_q = F_p[x]/(f) with discrete-log tables on the class of x.

    Elements are addressed by index sum(c_i p^i); the generator wb (the
    residue of the Teichmuller generator) has index p for n > 1.
    """

    def __init__(self, p: int, n: int, poly: tuple):
        self.p = p
        self.n = n
        self.poly = poly
        self.q = p ** n
        gen = _x_vector(n, poly, p)
        exp = [0] * max(self.q - 1, 1)
        log = [None] * self.q
        cur = [1] + [0] * (n - 1)
        for k in range(max(self.q - 1, 1)):
            idx = self._encode(cur)
            exp[k] = idx
            if log[idx] is None:
                log[idx] = k
            cur = _pol_mul_mod(cur, gen, poly, p)
        if self._encode(cur) != exp[0]:
            raise ValueError("generator order mismatch; polynomial not primitive")
        self.exp = exp
        self.log = log
        self.gen_idx = exp[1 % max(self.q - 1, 1)]
        self._trace_table = None

    def _encode(self, coeffs) -> int:
        idx = 0
        for c in reversed(coeffs):
            idx = idx * self.p + c
        return idx

    def _decode(self, idx: int) -> tuple:
        out = []
        for _ in range(self.n):
            idx, c = divmod(idx, self.p)
            out.append(c)
        return tuple(out)

    # index-level arithmetic -------------------------------------------------

    def add_idx(self, i: int, j: int) -> int:
        if self.p == 2:
            return i ^ j
        a, b = self._decode(i), self._decode(j)
        return self._encode([(x + y) % self.p for x, y in zip(a, b)])

    def neg_idx(self, i: int) -> int:
        if self.p == 2:
            return i
        return self._encode([(-x) % self.p for x in self._decode(i)])

    def mul_idx(self, i: int, j: int) -> int:
        if i == 0 or j == 0:
            return 0
        m = self.q - 1
        if m == 0:
            return i * j
        return self.exp[(self.log[i] + self.log[j]) % m]

    def pow_idx(self, i: int, e: int) -> int:
        if i == 0:
            if e == 0:
                return self._encode([1] + [0] * (self.n - 1))
            if e < 0:
                raise ZeroDivisionError("inverse of zero in F_q")
            return 0
        m = max(self.q - 1, 1)
        return self.exp[(self.log[i] * e) % m]

    def frob_idx(self, i: int, k: int = 1) -> int:
        return self.pow_idx(i, self.p ** (k % self.n if self.n else 1))

    def trace_idx(self, i: int) -> int:
        """Trace to F_p, returned as an int in [0, p)."""
        if self._trace_table is None:
            table = []
            for idx in range(self.q):
                acc = 0
                conj = idx
                for _ in range(self.n):
                    acc = self.add_idx(acc, conj)
                    conj = self.frob_idx(conj)
                coeffs = self._decode(acc)
                if any(coeffs[1:]):
                    raise PrecisionError("trace landed outside the prime field")
                table.append(coeffs[0])
            self._trace_table = table
        return self._trace_table[i]

    # element-level API ------------------------------------------------------

    def element(self, coeffs) -> "FqElem":
        coeffs = tuple(int(c) % self.p for c in coeffs)
        if len(coeffs) != self.n:
            raise ValueError(f"need {self.n} coefficients")
        return FqElem(self, self._encode(coeffs))

    def from_idx(self, idx: int) -> "FqElem":
        return FqElem(self, idx)

    @property
    def zero(self) -> "FqElem":
        return FqElem(self, 0)

    @property
    def one(self) -> "FqElem":
        return FqElem(self, self._encode([1] + [0] * (self.n - 1)))

    @property
    def gen(self) -> "FqElem":
        """The residue wb of the Teichmuller generator."""
        return FqElem(self, self.gen_idx)

    def elements(self):
        return (FqElem(self, i) for i in range(self.q))

    def __repr__(self):
        return f"F_{self.q}"


class FqElem:
    """An element of F_q in the power basis 1, wb, ..., wb^(n-1)."""

    __slots__ = ("field", "idx")

    def __init__(self, field: Fq, idx: int):
        self.field = field
        self.idx = idx

    @property
    def coeffs(self) -> tuple:
        return self.field._decode(self.idx)

    @property
    def is_zero(self) -> bool:
        return self.idx == 0

    def __bool__(self):
        return self.idx != 0

    def _check(self, other):
        if self.field is not other.field:
            raise ValueError("elements of different fields")

    def __add__(self, other):
        self._check(other)
        return FqElem(self.field, self.field.add_idx(self.idx, other.idx))

    def __sub__(self, other):
        self._check(other)
        return FqElem(self.field, self.field.add_idx(self.idx, self.field.neg_idx(other.idx)))

    def __neg__(self):
        return FqElem(self.field, self.field.neg_idx(self.idx))

    def __mul__(self, other):
        self._check(other)
        return FqElem(self.field, self.field.mul_idx(self.idx, other.idx))

    def __pow__(self, e: int):
        return FqElem(self.field, self.field.pow_idx(self.idx, e))

    def inverse(self):
        return self ** -1

    def frobenius(self, k: int = 1):
        return FqElem(self.field, self.field.frob_idx(self.idx, k))

    def trace(self) -> int:
        return self.field.trace_idx(self.idx)

    def __eq__(self, other):
        return isinstance(other, FqElem) and self.field is other.field and self.idx == other.idx

    def __hash__(self):
        return hash((id(self.field), self.idx))

    def __repr__(self):
        if self.idx == 0:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                pw = "wb" if i == 1 else f"wb^{i}"
                terms.append(pw if c == 1 else f"{c}*{pw}")
        return " + ".join(terms)


def fq_field(p: int, n: int, poly=None) -> Fq:
    """The residue field; instances are cached, so identity comparison works."""
    return _fq_field_cached(p, n, _normalize_poly(p, n, poly))


def _normalize_poly(p: int, n: int, poly) -> tuple:
    if poly is None:
        if (p, n) not in DEFAULT_POLYS:
            raise ValueError(
                f"no default polynomial for (p, n) = ({p}, {n}); supply a primitive irreducible one"
            )
        poly = DEFAULT_POLYS[(p, n)]
    return tuple(int(c) for c in poly)


@lru_cache(maxsize=None)
def _fq_field_cached(p: int, n: int, poly: tuple) -> Fq:
    f = validate_poly_mod_p(p, n, poly)
    return Fq(p, n, f)


# ---------------------------------------------------------------------------
# the Witt ring


def _power_table(top: tuple, n: int, mod: int) -> list:
    """Vectors for y^d, d = 0 .. 2n-2, given y^n = top in the power basis."""
    pows = [tuple(1 if i == d else 0 for i in range(n)) for d in range(n)]
    pows.append(tuple(c % mod for c in top))
    for _ in range(n - 2):
        prev = pows[-1]
        shifted = [0] + list(prev[: n - 1])
        carry = prev[n - 1]
        if carry:
            shifted = [(s + carry * t) % mod for s, t in zip(shifted, top)]
        pows.append(tuple(v % mod for v in shifted))
    return pows


def _vec_mul(a, b, pows, n, mod):
    prod = [0] * (2 * n - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    out = list(prod[:n])
    for d in range(n, 2 * n - 1):
        c = prod[d] % mod
        if c:
            red = pows[d]
            for i in range(n):
                out[i] += c * red[i]
    return tuple(v % mod for v in out)


def _vec_pow(a, e, pows, n, mod):
    result = tuple(1 if i == 0 else 0 for i in range(n))
    base = a
    while e:
        if e & 1:
            result = _vec_mul(result, base, pows, n, mod)
        e >>= 1
        base = _vec_mul(base, base, pows, n, mod)
    return result


class WittRing:
    """W(F_{p^n}) mod p^M on the basis 1, w, ..., w^(n-1), w Teichmuller."""

    def __init__(self, params, n, defining_poly, omega_pows, frobenius_matrix, fq):
        self.params = params
        self.n = n
        self.q = params.p ** n
        self.defining_poly = defining_poly
        self._omega_pows = omega_pows
        self.frobenius_matrix = frobenius_matrix
        self.fq = fq
        identity = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        sig = [identity]
        cur = identity
        for _ in range(n - 1):
            cur = mat_mul([list(r) for r in frobenius_matrix], cur, params.modulus)
            sig.append(cur)
        self._sigma_pows = [tuple(tuple(r) for r in m) for m in sig]
        self._teich_cache = {}

    # constructors ----------------------------------------------------------

    def from_coords(self, coords) -> "WittElem":
        coords = tuple(int(c) % self.params.modulus for c in coords)
        if len(coords) != self.n:
            raise ValueError(f"need {self.n} coordinates")
        return WittElem(self, coords)

    def from_int(self, c: int) -> "WittElem":
        return WittElem(self, (c % self.params.modulus,) + (0,) * (self.n - 1))

    def zero(self) -> "WittElem":
        return self.from_int(0)

    def one(self) -> "WittElem":
        return self.from_int(1)

    @property
    def omega(self) -> "WittElem":
        # for n = 1 the table entry at degree 1 is the Teichmuller scalar itself
        return WittElem(self, self._omega_pows[1])

    def apply_sigma(self, coords: tuple, k: int = 1) -> tuple:
        if k % self.n == 0:
            return coords
        mat = self._sigma_pows[k % self.n]
        return tuple(
            sum(mat[i][j] * coords[j] for j in range(self.n)) % self.params.modulus
            for i in range(self.n)
        )

    def __repr__(self):
        return f"W(F_{self.q}) mod {self.params.p}^{self.params.M}"


class WittElem:
    """An element of the truncated Witt ring, coordinates on the w-power basis."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring: WittRing, coords: tuple):
        self.ring = ring
        self.coords = coords

    def _check(self, other):
        if self.ring is not other.ring:
            raise ValueError("incompatible rings")

    def __add__(self, other):
        self._check(other)
        mod = self.ring.params.modulus
        return WittElem(self.ring, tuple((a + b) % mod for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        mod = self.ring.params.modulus
        return WittElem(self.ring, tuple((a - b) % mod for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        mod = self.ring.params.modulus
        return WittElem(self.ring, tuple((-a) % mod for a in self.coords))

    def __mul__(self, other):
        self._check(other)
        r = self.ring
        return WittElem(
            r, _vec_mul(self.coords, other.coords, r._omega_pows, r.n, r.params.modulus)
        )

    def scale(self, c: int) -> "WittElem":
        mod = self.ring.params.modulus
        return WittElem(self.ring, tuple(a * c % mod for a in self.coords))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        r = self.ring
        return WittElem(r, _vec_pow(self.coords, e, r._omega_pows, r.n, r.params.modulus))

    def __eq__(self, other):
        return isinstance(other, WittElem) and self.ring is other.ring and self.coords == other.coords

    def __hash__(self):
        return hash((id(self.ring), self.coords))

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def is_unit(self) -> bool:
        return not self.residue().is_zero

    def valuation(self) -> int:
        """min(nu_p) over coordinates, capped at M for the zero residue."""
        M, p = self.ring.params.M, self.ring.params.p
        return min((nu_p(c, p) if c else M for c in self.coords), default=M)

    def residue(self) -> FqElem:
        p = self.ring.params.p
        return self.ring.fq.element(tuple(c % p for c in self.coords))

    def frobenius(self, k: int = 1) -> "WittElem":
        return WittElem(self.ring, self.ring.apply_sigma(self.coords, k))

    def trace(self) -> PadicInt:
        """Sum of the n Frobenius conjugates; lands in Z_p exactly."""
        acc = self
        for k in range(1, self.ring.n):
            acc = acc + self.frobenius(k)
        if any(acc.coords[1:]):
            raise PrecisionError("trace not Galois-invariant at precision")
        return PadicInt(self.ring.params, acc.coords[0])

    def inverse(self) -> "WittElem":
        """Newton iteration y <- y(2 - xy) from a lift of the residue inverse."""
        r = self.residue()
        if r.is_zero:
            raise ValueError("not a unit in W")
        y = self.ring.from_coords(r.inverse().coeffs)
        one = self.ring.one()
        for _ in range(self.ring.params.M.bit_length() + 2):
            err = one - self * y
            if err.is_zero:
                break
            y = y + y * err
        if self * y != one:
            raise PrecisionError("unit inversion failed to converge")
        return y

    def div_exact_p(self) -> "WittElem":
        p = self.ring.params.p
        if any(c % p for c in self.coords):
            raise ValueError("not divisible by p")
        return WittElem(self.ring, tuple(c // p for c in self.coords))

    def teich_digits(self, count: int) -> list:
        """First `count` Teichmuller digits: w = sum_j teich(d_j) p^j."""
        if count > self.ring.params.M:
            raise ValueError("digit count exceeds precision")
        out = []
        w = self
        for _ in range(count):
            d = w.residue()
            out.append(d)
            w = (w - teichmuller(self.ring, d)).div_exact_p()
        return out

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                pw = "w" if i == 1 else f"w^{i}"
                terms.append(pw if c == 1 else f"{c}*{pw}")
        return " + ".join(terms) if terms else "0"


def teichmuller(ring: WittRing, x: FqElem) -> WittElem:
    """The Teichmuller lift: the unique y with y^q = y reducing to x."""
    if x.field is not ring.fq:
        raise ValueError("residue from a different field")
    cached = ring._teich_cache.get(x.idx)
    if cached is not None:
        return cached
    z = ring.from_coords(x.coeffs)
    for _ in range(ring.params.M + 2):
        nxt = z ** ring.q
        if nxt == z:
            break
        z = nxt
    else:
        raise PrecisionError("Teichmuller iteration did not stabilize")
    ring._teich_cache[x.idx] = z
    return z


def make_ring(p: int, n: int, M: int, poly=None) -> WittRing:
    """Build W(F_{p^n}) mod p^M.

    (p, n) must be in the default table, or `poly` a monic degree-n integer
    polynomial whose reduction mod p is irreducible and primitive.  Rings
    are cached, so equal parameters give the identical object.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return _make_ring_cached(p, n, M, _normalize_poly(p, n, poly))


@lru_cache(maxsize=None)
def _make_ring_cached(p: int, n: int, M: int, poly: tuple) -> WittRing:
    params = PadicParams(p, M)
    mod = params.modulus
    f_lift = tuple(int(c) % mod for c in poly)
    if len(f_lift) != n + 1 or f_lift[n] != 1:
        raise ValueError(f"need a monic degree-{n} polynomial, got {poly}")
    f_res = validate_poly_mod_p(p, n, f_lift)

    # arithmetic in the x-power basis of Z[x]/(f, p^M)
    f_top = tuple((-f_lift[i]) % mod for i in range(n))
    f_pows = _power_table(f_top, n, mod)
    if n == 1:
        z = (f_top[0],)
    else:
        z = tuple(1 if i == 1 else 0 for i in range(n))
    q = p ** n
    for _ in range(M + 2):
        nxt = _vec_pow(z, q, f_pows, n, mod)
        if nxt == z:
            break
        z = nxt
    else:
        raise PrecisionError("Teichmuller iteration did not stabilize")

    # change of basis to powers of the Teichmuller generator
    B = [[0] * n for _ in range(n)]
    zj = tuple(1 if i == 0 else 0 for i in range(n))
    cols = []
    for j in range(n):
        cols.append(zj)
        zj = _vec_mul(zj, z, f_pows, n, mod)
    omega_n = zj  # z^n in the x-basis
    for i in range(n):
        for j in range(n):
            B[i][j] = cols[j][i]
    B_inv = invert_matrix(B, params)
    c = mat_vec(B_inv, list(omega_n), mod)  # w^n = sum c_j w^j
    defining_poly = tuple([(-cj) % mod for cj in c] + [1])
    omega_pows = _power_table(tuple(c), n, mod)

    # Frobenius matrix: columns are coordinates of (w^p)^j
    wp = _vec_pow(omega_pows[1], p, omega_pows, n, mod)
    F = [[0] * n for _ in range(n)]
    col = tuple(1 if i == 0 else 0 for i in range(n))
    for j in range(n):
        for i in range(n):
            F[i][j] = col[i]
        col = _vec_mul(col, wp, omega_pows, n, mod)

    if tuple(cc % p for cc in defining_poly) != f_res:
        raise PrecisionError("basis change drifted mod p")
    fq = fq_field(p, n, f_res)
    ring = WittRing(params, n, defining_poly, omega_pows, tuple(tuple(r) for r in F), fq)

    # exactness checks: sigma^n = id and w^(q-1) = 1 on the nose
    Fn = mat_mul(
        [list(r) for r in ring.frobenius_matrix],
        [list(r) for r in ring._sigma_pows[n - 1]],
        mod,
    )
    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    if Fn != ident:
        raise PrecisionError("Frobenius matrix does not have exact order n")
    if ring.omega ** (q - 1) != ring.one():
        raise PrecisionError("Teichmuller generator order check failed")
    return ring
