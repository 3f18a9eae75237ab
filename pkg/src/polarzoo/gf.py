"""Exact arithmetic in GF(p^e).

Elements are integers 0..q-1: the element with polynomial-basis coordinates
c_0..c_{e-1} has index sum(c_i * p**i).  All heavy lifting goes through
exp/log tables, so every operation also has a vectorised numpy twin.
"""
from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

MAX_ORDER = 1 << 20
_ADD_TABLE_LIMIT = 1024
_CACHE: dict[tuple[int, int], "GF"] = {}


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p**e, or raise."""
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r != 1 or not is_prime(p):
                break
            return p, e
    raise FieldError(f"{q} is not a prime power")


# polynomials over Z_p as coefficient lists, low degree first

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a, f, p):
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(_trim(a)) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % p
    return a


def is_irreducible(f: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(f)/2."""
    deg = len(f) - 1
    if deg <= 0:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            g = list(low) + [1]
            if not _polymod(f, g, p):
                return False
    return True


def least_irreducible(p: int, e: int) -> list[int]:
    for low in itertools.product(range(p), repeat=e):
        f = list(low) + [1]
        if e == 1 or (f[0] != 0 and is_irreducible(f, p)):
            return f
    raise FieldError("no irreducible polynomial found")


class GF:
    """The field GF(p^e) with the least monic irreducible modulus."""

    def __new__(cls, p: int, e: int = 1):
        key = (p, e)
        if key not in _CACHE:
            obj = super().__new__(cls)
            obj._build(p, e)
            _CACHE[key] = obj
        return _CACHE[key]

    def _build(self, p: int, e: int) -> None:
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if e < 1:
            raise FieldError("extension degree must be >= 1")
        q = p**e
        if q > MAX_ORDER:
            raise FieldError(f"GF({p}^{e}) exceeds the desk bound {MAX_ORDER}")
        self.p, self.e, self.q = p, e, q
        self.modulus = least_irreducible(p, e)
        digits = np.zeros((q, e), dtype=np.int64)
        idx = np.arange(q)
        for i in range(e):
            digits[:, i] = (idx // p**i) % p
        self.digits = digits
        self._weights = p ** np.arange(e, dtype=np.int64)
        self.primitive = self._find_primitive()
        exp = np.zeros(2 * (q - 1) + 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = 1
        for k in range(q - 1):
            exp[k] = x
            log[x] = k
            x = self._slow_mul(x, self.primitive)
        exp[q - 1: 2 * (q - 1)] = exp[: q - 1]
        exp[-1] = 1
        self.EXP, self.LOG = exp, log
        self.NEG = self._coeffs_to_idx((-digits) % p)
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(q - 1 - log[1:]) % (q - 1)]
        self.INV = inv
        self.FROB = self.vpow(idx, p)
        if q <= _ADD_TABLE_LIMIT:
            a = digits[:, None, :] + digits[None, :, :]
            self.ADD = ((a % p) * self._weights).sum(axis=2)
        else:
            self.ADD = None

    # construction helpers
    def _coeffs(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.e)]

    def _coeffs_to_idx(self, c):
        return (np.asarray(c) * self._weights).sum(axis=-1)

    def _slow_mul(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        ca, cb = self._coeffs(a), self._coeffs(b)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        r = _polymod(prod, self.modulus, p) + [0] * e
        return sum(r[i] * p**i for i in range(e))

    def _slow_pow(self, a: int, k: int) -> int:
        r = 1
        while k:
            if k & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            k >>= 1
        return r

    def _find_primitive(self) -> int:
        n = self.q - 1
        if n == 1:
            return 1
        primes = prime_factors(n)
        for g in range(1, self.q):
            if all(self._slow_pow(g, n // r) != 1 for r in primes):
                return g
        raise FieldError("no primitive element")

    # scalar arithmetic on indices
    def add(self, a: int, b: int) -> int:
        if self.ADD is not None:
            return int(self.ADD[a, b])
        if self.p == 2:
            return a ^ b
        return int(self._coeffs_to_idx((self.digits[a] + self.digits[b]) % self.p))

    def neg(self, a: int) -> int:
        return int(self.NEG[a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, int(self.NEG[b]))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.EXP[self.LOG[a] + self.LOG[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self.INV[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 1 if k == 0 else 0
        return int(self.EXP[(int(self.LOG[a]) * k) % (self.q - 1)])

    def frobenius(self, a: int, k: int = 1) -> int:
        return self.pow(a, self.p ** (k % self.e))

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime field."""
        return n % self.p

    def gen_power(self, k: int) -> int:
        return int(self.EXP[k % (self.q - 1)])

    def log(self, a: int) -> int:
        if a == 0:
            raise FieldError("log of zero")
        return int(self.LOG[a])

    # vectorised twins
    def vadd(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        if self.ADD is not None:
            return self.ADD[a, b]
        if self.p == 2:
            return a ^ b
        return self._coeffs_to_idx((self.digits[a] + self.digits[b]) % self.p)

    def vneg(self, a):
        return self.NEG[np.asarray(a)]

    def vsub(self, a, b):
        return self.vadd(a, self.NEG[np.asarray(b)])

    def vmul(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        r = self.EXP[self.LOG[a] + self.LOG[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def vinv(self, a):
        return self.INV[np.asarray(a)]

    def vpow(self, a, k: int):
        a = np.asarray(a)
        if k == 0:
            return np.ones_like(a)
        r = self.EXP[(self.LOG[a] * k) % (self.q - 1)]
        return np.where(a == 0, 0, r)

    def vfrob(self, a, k: int = 1):
        return self.vpow(a, self.p ** (k % self.e))

    def vsum(self, a, axis=-1):
        """Field sum along an axis."""
        a = np.asarray(a)
        if self.p == 2 and self.ADD is None:
            return np.bitwise_xor.reduce(a, axis=axis)
        a = np.moveaxis(a, axis, -1)
        if a.shape[-1] == 0:
            return np.zeros(a.shape[:-1], dtype=np.int64)
        acc = a[..., 0]
        for i in range(1, a.shape[-1]):
            acc = self.vadd(acc, a[..., i])
        return acc

    # subfields, norm, trace
    def check_subfield(self, m: int) -> None:
        if m < 1 or self.e % m:
            raise FieldError(f"GF({self.p}^{m}) is not a subfield of GF({self.p}^{self.e})")

    def subfield(self, m: int) -> np.ndarray:
        """Indices of the elements of GF(p^m) inside this field, ascending."""
        self.check_subfield(m)
        idx = np.arange(self.q)
        return idx[self.vpow(idx, self.p**m) == idx]

    def norm(self, a: int, m: int) -> int:
        self.check_subfield(m)
        qs = self.p**m
        return self.pow(a, (self.q - 1) // (qs - 1))

    def trace(self, a: int, m: int) -> int:
        self.check_subfield(m)
        qs = self.p**m
        acc, x = 0, a
        for _ in range(self.e // m):
            acc = self.add(acc, x)
            x = self.pow(x, qs)
        return acc

    def vnorm(self, a, m: int):
        self.check_subfield(m)
        return self.vpow(a, (self.q - 1) // (self.p**m - 1))

    def vtrace(self, a, m: int):
        self.check_subfield(m)
        qs = self.p**m
        a = np.asarray(a)
        acc, x = np.zeros_like(a), a
        for _ in range(self.e // m):
            acc = self.vadd(acc, x)
            x = self.vpow(x, qs)
        return acc

    def embedding(self, m: int) -> np.ndarray:
        """Ring embedding GF(p^m) -> this field as an index lookup table.

        The generator x of the small polynomial basis goes to the least root
        of the small modulus, which keeps the map a homomorphism.
        """
        self.check_subfield(m)
        small = GF(self.p, m)
        f = small.modulus
        root = None
        for r in self.subfield(m):
            acc, pw = 0, 1
            for c in f:
                acc = self.add(acc, self.mul(self.from_int(c), pw))
                pw = self.mul(pw, int(r))
            if acc == 0:
                root = int(r)
                break
        powers = [1]
        for _ in range(m - 1):
            powers.append(self.mul(powers[-1], root))
        table = np.zeros(small.q, dtype=np.int64)
        for a in range(small.q):
            acc = 0
            for c, pw in zip(small._coeffs(a), powers):
                acc = self.add(acc, self.mul(self.from_int(c), pw))
            table[a] = acc
        return table

    # residues
    def is_square(self, a: int) -> bool:
        if self.p == 2:
            return True
        return a == 0 or self.pow(a, (self.q - 1) // 2) == 1

    def is_cube(self, a: int) -> bool:
        if (self.q - 1) % 3:
            return True
        return a == 0 or self.pow(a, (self.q - 1) // 3) == 1

    def nonsquare_witness(self) -> int:
        if self.p == 2:
            raise FieldError("every element of a field of characteristic 2 is a square")
        return next(a for a in range(1, self.q) if not self.is_square(a))

    def sqrt(self, a: int) -> int:
        """A square root (least index) of a square."""
        if a == 0:
            return 0
        for x in range(1, self.q):
            if self.mul(x, x) == a:
                return x
        raise FieldError(f"{a} is not a square")

    @cached_property
    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, i) for i in range(self.q)]

    def __call__(self, a: int) -> "FieldElement":
        return FieldElement(self, a)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.e})"

    def describe(self) -> dict:
        return {"name": f"GF({self.p}^{self.e})", "modulus": list(self.modulus)}

    def __reduce__(self):
        return (GF, (self.p, self.e))


def field_create(p: int, e: int = 1) -> GF:
    return GF(p, e)


def field_of_order(q: int) -> GF:
    p, e = prime_power(q)
    return GF(p, e)


class FieldElement:
    """Convenience wrapper with operator overloading around an index."""

    __slots__ = ("field", "idx")

    def __init__(self, field: GF, idx: int):
        if not 0 <= idx < field.q:
            raise FieldError(f"index {idx} outside {field}")
        self.field, self.idx = field, int(idx)

    def _other(self, o):
        if isinstance(o, FieldElement):
            if o.field is not self.field:
                raise FieldError("elements of different fields")
            return o.idx
        return self.field.from_int(int(o))

    def __add__(self, o):
        return FieldElement(self.field, self.field.add(self.idx, self._other(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return FieldElement(self.field, self.field.sub(self.idx, self._other(o)))

    def __rsub__(self, o):
        return FieldElement(self.field, self.field.sub(self._other(o), self.idx))

    def __mul__(self, o):
        return FieldElement(self.field, self.field.mul(self.idx, self._other(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return FieldElement(self.field, self.field.div(self.idx, self._other(o)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.idx))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.pow(self.idx, k))

    def __eq__(self, o):
        if isinstance(o, FieldElement):
            return self.field is o.field and self.idx == o.idx
        if isinstance(o, int):
            return self.idx == self.field.from_int(o)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.e, self.idx))

    @property
    def coeffs(self) -> list[int]:
        return self.field._coeffs(self.idx)

    def frobenius(self, k: int = 1) -> "FieldElement":
        return FieldElement(self.field, self.field.frobenius(self.idx, k))

    def norm(self, m: int) -> "FieldElement":
        return FieldElement(self.field, self.field.norm(self.idx, m))

    def trace(self, m: int) -> "FieldElement":
        return FieldElement(self.field, self.field.trace(self.idx, m))

    def __repr__(self):
        return f"{self.field}[{self.idx}]"


def elliptic_point_count(p: int) -> dict:
    """Brute-force count of Y^2 Z = X^3 - X Z^2 over GF(p), p an odd prime.

    Reports the affine and the projective count and, for each, whether it
    lands in {p-1, p+3}.
    """
    if p == 2 or not is_prime(p):
        raise FieldError("p must be an odd prime")
    if p > 10**6:
        raise FieldError("p above the desk bound")
    x = np.arange(p, dtype=np.int64)
    squares = np.zeros(p, dtype=np.int64)
    np.add.at(squares, (x * x) % p, 1)
    rhs = (x * x % p * x - x) % p
    affine = int(squares[rhs].sum())
    projective = affine + 1
    targets = {p - 1, p + 3}
    return {
        "p": p,
        "affine": affine,
        "projective": projective,
        "affine_in_targets": affine in targets,
        "projective_in_targets": projective in targets,
    }


def prime_powers(limit: int) -> list[int]:
    return [q for q in range(2, limit + 1) if len(prime_factors(q)) == 1]


def field_laws(F: GF, full_triples: bool | None = None) -> dict:
    """Check the field axioms on every element of F.

    Two-variable laws run over all pairs.  Three-variable laws run over all triples
    when full_triples is set (default for q <= 64); otherwise the first variable
    ranges over additive generators (for +) or the primitive element (for *), which
    implies the law everywhere by induction on words in the generators.
    """
    q = F.q
    if full_triples is None:
        full_triples = q <= 64
    x = np.arange(q)
    a, b = np.meshgrid(x, x, indexing="ij")
    s, m = F.vadd(a, b), F.vmul(a, b)
    out = {
        "add_commutes": bool((s == s.T).all()),
        "mul_commutes": bool((m == m.T).all()),
        "zero": bool((F.vadd(x, 0) == x).all()),
        "one": bool((F.vmul(x, 1) == x).all()),
        "negation": bool((F.vadd(x, F.vneg(x)) == 0).all()),
        "inverse": bool((F.vmul(x[1:], F.vinv(x[1:])) == 1).all()),
        "no_zero_divisors": bool(((m == 0) == ((a == 0) | (b == 0))).all()),
    }
    if full_triples:
        firsts = x
    else:
        # additive generators: the basis 1, g, ..., g^(e-1) over the prime field
        gens = {int(F.pow(F.primitive, j)) for j in range(F.e)} | {int(F.primitive)}
        firsts = np.array(sorted(gens))
        powers = {1}
        y = 1
        for _ in range(q - 1):
            y = F.mul(y, F.primitive)
            powers.add(y)
        out["primitive_generates"] = len(powers) == q - 1
    add_assoc = mul_assoc = distrib = True
    for u in firsts:
        add_assoc &= bool((F.vadd(F.vadd(u, a), b) == F.vadd(u, s)).all())
        mul_assoc &= bool((F.vmul(F.vmul(u, a), b) == F.vmul(u, m)).all())
        distrib &= bool((F.vmul(u, s) == F.vadd(F.vmul(u, a), F.vmul(u, b))).all())
    out.update(add_assoc=add_assoc, mul_assoc=mul_assoc, distributive=distrib)
    out["ok"] = all(out.values())
    return out
