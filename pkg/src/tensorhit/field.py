"""Exact arithmetic in prime fields GF(p) and extensions GF(p^k).

Element representation
----------------------
GF(p) elements are plain ints in ``[0, p)``.  GF(p^k) elements with k >= 2
are length-k tuples of ints: the coefficients of the residue polynomial in
the power basis ``1, x, ..., x^(k-1)``, constant term first.  All arithmetic
goes through the :class:`FieldCtx` owning the element.

Canonical enumeration
---------------------
Several constructions need "the first few field elements" and reproducible
builds need one fixed order.  We enumerate the nonzero elements by their
coefficient tuples in lexicographic order, comparing from the constant term
upward (so over GF(p) the enumeration is simply 1, 2, 3, ...).  The zero
element is skipped.  The same order drives modulus selection: an extension
is built on the lexicographically least monic irreducible polynomial of the
requested degree, which makes every derived construction byte-reproducible.

Order certification
-------------------
``find_element_of_order(ctx, b)`` returns the first enumerated element whose
multiplicative order is at least ``b``.  For small bounds this is certified
by direct power iteration (``g^t != 1`` for all ``t < b``).  For large
bounds, where iteration is hopeless, the exact order is computed from the
factorization of ``p^k - 1``; both methods decide the identical predicate,
so the selected element never depends on the code path.

Everything here is immutable after construction apart from memoized order
discoveries, which are write-once and race-benign; contexts may be shared
freely across threads and all element operations are pure.
"""

import itertools

from .errors import CompositeCharacteristic, FieldTooSmall, OrderUnreachable

Fel = int | tuple[int, ...]

# Above this bound, order checks switch from power iteration to exact order
# computation via the factored group order.
_POWER_ITERATION_LIMIT = 1_000_000


def _is_prime(n: int) -> bool:
    """Trial-division primality check; fine for desk-scale characteristics."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _is_probable_prime(n: int) -> bool:
    # Deterministic Miller-Rabin for n < 3.3e24 with the standard witness set.
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    import math

    for c in itertools.count(1):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise AssertionError("unreachable")


def _factorize(n: int) -> dict[int, int]:
    """Full factorization of n (trial division, then Pollard rho)."""
    factors: dict[int, int] = {}
    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.extend((d, m // d))
    return factors


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p), coefficients as lists (constant term first)
# ---------------------------------------------------------------------------


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_divmod(out, mod, p)[1]


def _poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = list(a)
    _poly_trim(a)
    db, db_lead = len(b) - 1, b[-1]
    inv_lead = pow(db_lead, p - 2, p)
    q = [0] * max(0, len(a) - db)
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        coeff = a[-1] * inv_lead % p
        q[shift] = coeff
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - coeff * bi) % p
        _poly_trim(a)
    return q, a


def _poly_powmod(a: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_divmod(a, mod, p)[1]
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    _poly_trim(a)
    _poly_trim(b)
    while b:
        a, b = b, _poly_divmod(a, b, p)[1]
    return a


def _is_irreducible(f: list[int], p: int) -> bool:
    """Rabin test: x^(p^k) = x mod f, and x^(p^(k/q)) - x coprime to f."""
    k = len(f) - 1
    x = [0, 1]
    frob = x  # x^(p^j) mod f, starting at j = 0
    powers = {}
    for j in range(1, k + 1):
        frob = _poly_powmod(frob, p, f, p)
        powers[j] = frob
    xk = list(powers[k])
    # x^(p^k) must reduce to x
    if _poly_trim([(c - d) % p for c, d in itertools.zip_longest(xk, x, fillvalue=0)]):
        return False
    for q in _factorize(k):
        h = list(powers[k // q])
        diff = _poly_trim(
            [(c - d) % p for c, d in itertools.zip_longest(h, x, fillvalue=0)]
        )
        g = _poly_gcd(f, diff, p) if diff else list(f)
        if len(g) - 1 != 0:
            return False
    return True


class FieldCtx:
    """A prime field GF(p) or extension GF(p^k) with exact arithmetic.

    Not constructed directly; use :func:`make_prime_field` and
    :func:`make_extension`.
    """

    def __init__(self, p: int, k: int, modulus: tuple[int, ...] | None):
        self.p = p
        self.k = k
        self.modulus = modulus  # monic, length k+1, None when k == 1
        self.size = p**k
        self.zero: Fel = 0 if k == 1 else (0,) * k
        self.one: Fel = 1 if k == 1 else (1,) + (0,) * (k - 1)
        self._order_memo: dict[int, Fel] = {}
        self._group_factors: dict[int, int] | None = None
        self.g: Fel | None = None  # highest-bound order discovery so far
        self.g_order_bound = 0
        if k > 1:
            # reduction table: x^(k+i) mod modulus, i in [0, k-1)
            assert modulus is not None and modulus[-1] == 1 and len(modulus) == k + 1
            red = []
            cur = [(-c) % p for c in modulus[:-1]]  # x^k
            red.append(tuple(cur))
            for _ in range(k - 2):
                cur = [0] + cur
                hi = cur.pop()  # coefficient of x^k
                cur = [(c + hi * r) % p for c, r in zip(cur, red[0])]
                red.append(tuple(cur))
            self._red = red

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, FieldCtx)
            and self.p == other.p
            and self.k == other.k
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"

    # -- arithmetic ---------------------------------------------------------

    def add(self, a: Fel, b: Fel) -> Fel:
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a: Fel, b: Fel) -> Fel:
        if self.k == 1:
            return (a - b) % self.p
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a: Fel) -> Fel:
        if self.k == 1:
            return -a % self.p
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a: Fel, b: Fel) -> Fel:
        p = self.p
        if self.k == 1:
            return a * b % p
        k = self.k
        conv = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    conv[i + j] += ai * bj
        out = [c % p for c in conv[:k]]
        for i in range(k - 1):
            hi = conv[k + i] % p
            if hi:
                red = self._red[i]
                for t in range(k):
                    out[t] = (out[t] + hi * red[t]) % p
        return tuple(out)

    def inv(self, a: Fel) -> Fel:
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero")
        p = self.p
        if self.k == 1:
            return pow(a, p - 2, p)
        # extended Euclid on polynomials
        r0, r1 = list(self.modulus), _poly_trim(list(a))
        s0, s1 = [0], [1]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1, p)
            r0, r1 = r1, r
            qs = [0] * (len(q) + len(s1) - 1) if q and s1 else []
            for i, qi in enumerate(q):
                if qi:
                    for j, sj in enumerate(s1):
                        qs[i + j] = (qs[i + j] + qi * sj) % p
            new_s = [
                (x - y) % p for x, y in itertools.zip_longest(s0, qs, fillvalue=0)
            ]
            s0, s1 = s1, _poly_trim(new_s)
        lead_inv = pow(r1[0], p - 2, p)
        out = [c * lead_inv % p for c in s1]
        out += [0] * (self.k - len(out))
        return tuple(out[: self.k])

    def pow(self, a: Fel, e: int) -> Fel:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.k == 1:
            return pow(a, e, self.p)
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def scalar(self, n: int) -> Fel:
        """Image of the integer n in the field (n mod p, embedded)."""
        if self.k == 1:
            return n % self.p
        return (n % self.p,) + (0,) * (self.k - 1)

    # -- enumeration and serialization ---------------------------------------

    def from_index(self, t: int) -> Fel:
        """Element number t in the lexicographic (constant-term-first) order."""
        if not 0 <= t < self.size:
            raise ValueError(f"index {t} out of range for {self!r}")
        if self.k == 1:
            return t
        digits = []
        for _ in range(self.k):
            digits.append(t % self.p)
            t //= self.p
        return tuple(reversed(digits))  # constant term is the major digit

    def nonzero_elements(self):
        """Canonical enumeration: all nonzero elements, lexicographic order."""
        for t in range(1, self.size):
            yield self.from_index(t)

    def first_elements(self, count: int) -> list[Fel]:
        """First ``count`` canonical nonzero elements."""
        if count > self.size - 1:
            raise FieldTooSmall(
                f"{self!r} has only {self.size - 1} nonzero elements, need {count}"
            )
        return list(itertools.islice(self.nonzero_elements(), count))

    def serialize(self, a: Fel) -> str:
        if self.k == 1:
            return str(a)
        return ",".join(str(c) for c in a)

    def parse(self, s: str) -> Fel:
        parts = [int(c) for c in s.split(",")]
        if len(parts) != self.k:
            raise ValueError(f"expected {self.k} coefficients, got {s!r}")
        if any(not 0 <= c < self.p for c in parts):
            raise ValueError(f"coefficient out of range in {s!r}")
        return parts[0] if self.k == 1 else tuple(parts)

    # -- multiplicative order -------------------------------------------------

    def _exact_order(self, a: Fel) -> int:
        if self._group_factors is None:
            self._group_factors = _factorize(self.size - 1)
        order = self.size - 1
        for q in self._group_factors:
            while order % q == 0 and self.pow(a, order // q) == self.one:
                order //= q
        return order

    def order_at_least(self, a: Fel, bound: int) -> bool:
        """Whether a has multiplicative order >= bound (a nonzero)."""
        if bound <= 1:
            return a != self.zero
        if bound <= _POWER_ITERATION_LIMIT:
            acc = a
            for _ in range(bound - 1):
                if acc == self.one:
                    return False
                acc = self.mul(acc, a)
            return True
        return self._exact_order(a) >= bound

    def element_of_order(self, min_order: int) -> Fel:
        """First canonical element of multiplicative order >= min_order."""
        if min_order > self.size - 1:
            raise OrderUnreachable(
                f"{self!r} has multiplicative group of size {self.size - 1}, "
                f"order {min_order} unreachable; extend the field"
            )
        memo = self._order_memo.get(min_order)
        if memo is not None:
            return memo
        for a in self.nonzero_elements():
            if self.order_at_least(a, min_order):
                self._order_memo[min_order] = a
                if min_order > self.g_order_bound:
                    self.g = a
                    self.g_order_bound = min_order
                return a
        raise AssertionError("cyclic group must contain a high-order element")


def make_prime_field(p: int) -> FieldCtx:
    """GF(p) for prime p."""
    if not _is_prime(p):
        raise CompositeCharacteristic(f"{p} is not prime")
    return FieldCtx(p, 1, None)


def lexicographically_least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Least monic irreducible of degree k over GF(p), constant-term-major order.

    Candidates with zero constant term are divisible by x, so the scan
    starts the constant term at 1; the remaining coefficients iterate in
    lexicographic order, which keeps the winner the overall lex-least.
    """
    for c0 in range(1, p):
        for tail in itertools.product(range(p), repeat=k - 1):
            f = [c0, *tail, 1]
            if _is_irreducible(f, p):
                return tuple(f)
    raise AssertionError(f"no irreducible of degree {k} over GF({p})")


def make_extension(base: FieldCtx, k: int) -> FieldCtx:
    """GF(p^k) over a degree-1 base, on the canonical irreducible modulus."""
    if base.k != 1:
        raise ValueError("extension base must be a prime field")
    if k < 2:
        raise ValueError("extension degree must be >= 2")
    modulus = lexicographically_least_irreducible(base.p, k)
    return FieldCtx(base.p, k, modulus)


def find_element_of_order(ctx: FieldCtx, min_order: int) -> Fel:
    """First canonical element with multiplicative order >= min_order."""
    return ctx.element_of_order(min_order)


def embed_as_matrix(ctx: FieldCtx, a: Fel) -> list[list[int]]:
    """Matrix of x -> a*x over the base field, in the power basis.

    Column c holds the coefficients of ``a * x^c``.  The map is an algebra
    homomorphism: it turns field addition and multiplication into matrix
    addition and multiplication.
    """
    if ctx.k == 1:
        return [[a]]
    cols = []
    cur = a
    for _ in range(ctx.k):
        cols.append(cur)
        # multiply by x: shift up and reduce
        shifted = (0,) + cur[:-1]
        hi = cur[-1]
        if hi:
            red = ctx._red[0]
            shifted = tuple((s + hi * r) % ctx.p for s, r in zip(shifted, red))
        cur = shifted
    return [[cols[c][r] for c in range(ctx.k)] for r in range(ctx.k)]
