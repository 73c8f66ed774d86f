"""Finite fields F_{p^d}, one-step extensions, and univariate polynomial tools.

Fields are small objects exposing a uniform protocol (zero/one/add/mul/inv,
``order``, ``elements()``); elements are plain ints for prime fields and
tuples for extensions, so they hash and compare structurally.  Polynomials
over any such field are coefficient lists, low degree first, trimmed so the
last entry is nonzero ([] is the zero polynomial).

Root finding uses gcd with x^q - x followed by Cantor-Zassenhaus splitting,
which covers both tiny residue fields and the larger extensions used when
splitting binary octics.
"""

import random

from .errors import FieldConstructionError


class PrimeField:
    """F_p with elements represented as ints in [0, p)."""

    def __init__(self, p):
        self.p = p
        self.char = p
        self.order = p
        self.degree = 1

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n % self.p

    def is_zero(self, a):
        return a == 0

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        return pow(a, n, self.p)

    def elements(self):
        return iter(range(self.p))

    def random(self, rng):
        return rng.randrange(self.p)

    def sort_key(self, a):
        return (a,)

    def repr_elem(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"F_{self.p}"


class ExtField:
    """One-step extension base[x]/(modulus); elements are tuples over base.

    ``modulus`` is a monic coefficient list over ``base`` of length k+1.
    Nesting is allowed (an ExtField can itself be the base), which is how
    octic splitting fields F_{q^k} over F_q = F_p(tau) are built.
    """

    def __init__(self, base, modulus):
        k = len(modulus) - 1
        if k < 1 or not base.is_zero(base.sub(modulus[-1], base.one())):
            raise FieldConstructionError("extension modulus must be monic of degree >= 1")
        self.base = base
        self.modulus = list(modulus)
        self.k = k
        self.char = base.char
        self.order = base.order ** k
        self.degree = getattr(base, "degree", 1) * k
        # x^k reduced: -(m_0 + m_1 x + ... + m_{k-1} x^{k-1})
        self._top = [base.neg(c) for c in modulus[:-1]]

    def zero(self):
        return (self.base.zero(),) * self.k

    def one(self):
        return tuple([self.base.one()] + [self.base.zero()] * (self.k - 1))

    def gen(self):
        if self.k == 1:
            # x = -m_0 in a degree-1 "extension"
            return (self._top[0],)
        return tuple([self.base.zero(), self.base.one()] +
                     [self.base.zero()] * (self.k - 2))

    def from_int(self, n):
        return tuple([self.base.from_int(n)] + [self.base.zero()] * (self.k - 1))

    def from_base(self, a):
        return tuple([a] + [self.base.zero()] * (self.k - 1))

    def from_coeffs(self, cs):
        cs = list(cs)[: self.k]
        cs += [self.base.zero()] * (self.k - len(cs))
        return tuple(cs)

    def is_zero(self, a):
        return all(self.base.is_zero(c) for c in a)

    def add(self, a, b):
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        B = self.base
        return tuple(B.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        B = self.base
        return tuple(B.neg(x) for x in a)

    def mul(self, a, b):
        B = self.base
        k = self.k
        raw = [B.zero()] * (2 * k - 1)
        for i, x in enumerate(a):
            if B.is_zero(x):
                continue
            for j, y in enumerate(b):
                if not B.is_zero(y):
                    raw[i + j] = B.add(raw[i + j], B.mul(x, y))
        # reduce degrees >= k from the top down
        for i in range(2 * k - 2, k - 1, -1):
            c = raw[i]
            if B.is_zero(c):
                continue
            raw[i] = B.zero()
            for j, t in enumerate(self._top):
                raw[i - k + j] = B.add(raw[i - k + j], B.mul(c, t))
        return tuple(raw[:k])

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of 0 in extension field")
        # extended euclid in base[x] between modulus and a
        f = list(self.modulus)
        g = p_trim(self.base, list(a))
        s0, s1 = [], [self.base.one()]
        while p_deg(g) > 0:
            q, r = p_divmod(self.base, f, g)
            f, g = g, r
            s0, s1 = s1, p_sub(self.base, s0, p_mul(self.base, q, s1))
        if not g:
            raise ZeroDivisionError("element not invertible (modulus not irreducible?)")
        c = self.base.inv(g[0])
        out = [self.base.mul(c, x) for x in s1]
        return self.from_coeffs(out)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if n < 0:
            a, n = self.inv(a), -n
        r = self.one()
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def elements(self):
        def rec(i):
            if i == 0:
                yield ()
                return
            for rest in rec(i - 1):
                for c in self.base.elements():
                    yield rest + (c,)
        return rec(self.k)

    def random(self, rng):
        return tuple(self.base.random(rng) for _ in range(self.k))

    def sort_key(self, a):
        key = ()
        for c in a:
            key += self.base.sort_key(c)
        return key

    def repr_elem(self, a):
        parts = []
        names = ["", "t", "t^2", "t^3", "t^4", "t^5", "t^6", "t^7"]
        for i, c in enumerate(a):
            if self.base.is_zero(c):
                continue
            cs = self.base.repr_elem(c)
            if i == 0:
                parts.append(cs)
            elif cs == "1":
                parts.append(names[i] if i < len(names) else f"t^{i}")
            else:
                parts.append(f"{cs}*" + (names[i] if i < len(names) else f"t^{i}"))
        return " + ".join(parts) if parts else "0"

    def __eq__(self, other):
        return (isinstance(other, ExtField) and other.base == self.base
                and other.modulus == self.modulus)

    def __hash__(self):
        return hash(("ExtField", self.base, tuple(self.modulus)))

    def __repr__(self):
        return f"F_{self.order}"


# ---------------------------------------------------------------------------
# polynomials over a field object: coefficient lists, low degree first


def p_trim(F, f):
    while f and F.is_zero(f[-1]):
        f.pop()
    return f


def p_deg(f):
    return len(f) - 1


def p_add(F, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else F.zero()
        b = g[i] if i < len(g) else F.zero()
        out.append(F.add(a, b))
    return p_trim(F, out)


def p_sub(F, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else F.zero()
        b = g[i] if i < len(g) else F.zero()
        out.append(F.sub(a, b))
    return p_trim(F, out)


def p_scal(F, c, f):
    if F.is_zero(c):
        return []
    return p_trim(F, [F.mul(c, a) for a in f])


def p_mul(F, f, g):
    if not f or not g:
        return []
    out = [F.zero()] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if F.is_zero(a):
            continue
        for j, b in enumerate(g):
            if not F.is_zero(b):
                out[i + j] = F.add(out[i + j], F.mul(a, b))
    return p_trim(F, out)


def p_divmod(F, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    q = [F.zero()] * max(0, len(f) - len(g) + 1)
    inv_lc = F.inv(g[-1])
    while len(f) >= len(g) and f:
        c = F.mul(f[-1], inv_lc)
        d = len(f) - len(g)
        q[d] = c
        for i, b in enumerate(g):
            f[d + i] = F.sub(f[d + i], F.mul(c, b))
        f = p_trim(F, f)
    return p_trim(F, q), f


def p_mod(F, f, g):
    return p_divmod(F, f, g)[1]


def p_monic(F, f):
    if not f:
        return []
    c = F.inv(f[-1])
    return [F.mul(c, a) for a in f]


def p_gcd(F, f, g):
    f, g = list(f), list(g)
    while g:
        f, g = g, p_mod(F, f, g)
    return p_monic(F, f)


def p_eval(F, f, x):
    acc = F.zero()
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def p_deriv(F, f):
    out = []
    for i in range(1, len(f)):
        c = f[i]
        m = F.zero()
        for _ in range(i % F.char):
            m = F.add(m, c)
        out.append(m)
    return p_trim(F, out)


def p_pow_mod(F, f, n, m):
    r = [F.one()]
    f = p_mod(F, f, m)
    while n:
        if n & 1:
            r = p_mod(F, p_mul(F, r, f), m)
        f = p_mod(F, p_mul(F, f, f), m)
        n >>= 1
    return r


def _x_pow_q_mod(F, q, m):
    return p_pow_mod(F, [F.zero(), F.one()], q, m)


def poly_roots(F, f, rng=None):
    """All roots of f in F with multiplicities, as a list of (root, mult).

    Linear factors are isolated with gcd(f, x^q - x) and split by
    Cantor-Zassenhaus (odd characteristic only, which is all this package
    supports).  Deterministic for a fixed rng seed.
    """
    if rng is None:
        rng = random.Random(0x51A7)
    f = p_trim(F, list(f))
    if not f:
        raise ValueError("root finding on the zero polynomial")
    roots = []
    # pull out x = 0 separately, simplifies the CZ exponent step
    mult0 = 0
    while f and F.is_zero(f[0]):
        mult0 += 1
        f = f[1:]
    if mult0:
        roots.append((F.zero(), mult0))
    if p_deg(f) < 1:
        return roots
    xq = _x_pow_q_mod(F, F.order, f)
    lin = p_gcd(F, p_sub(F, xq, [F.zero(), F.one()]), f)
    distinct = _cz_split(F, lin, rng)
    for r in distinct:
        mult = 0
        g = f
        while True:
            q, rem = p_divmod(F, g, [F.neg(r), F.one()])
            if rem:
                break
            mult += 1
            g = q
        roots.append((r, mult))
    roots.sort(key=lambda t: F.sort_key(t[0]))
    return roots


def _cz_split(F, g, rng):
    """Roots of a monic squarefree product of linear factors."""
    g = p_trim(F, list(g))
    if p_deg(g) < 1:
        return []
    if p_deg(g) == 1:
        return [F.neg(g[0])]
    half = (F.order - 1) // 2
    for _ in range(200):
        a = F.random(rng)
        t = p_pow_mod(F, [a, F.one()], half, g)
        h = p_gcd(F, p_sub(F, t, [F.one()]), g)
        if 0 < p_deg(h) < p_deg(g):
            other = p_divmod(F, g, h)[0]
            return _cz_split(F, h, rng) + _cz_split(F, other, rng)
    raise RuntimeError("Cantor-Zassenhaus failed to split (should not happen)")


def factor_degree_profile(F, f):
    """Degrees of irreducible factors of squarefree part, as sorted list.

    Distinct-degree factorization; used for "extension too small" diagnostics.
    """
    f = p_monic(F, p_trim(F, list(f)))
    if p_deg(f) < 1:
        return []
    # squarefree part
    df = p_deriv(F, f)
    if df:
        f = p_divmod(F, f, p_gcd(F, f, df))[0]
    profile = []
    h = [F.zero(), F.one()]
    k = 0
    while p_deg(f) >= 1:
        k += 1
        if 2 * k > p_deg(f):
            profile.extend([p_deg(f)])
            break
        h = p_pow_mod(F, h, F.order, f)
        g = p_gcd(F, p_sub(F, h, [F.zero(), F.one()]), f)
        if p_deg(g) >= 1:
            profile.extend([k] * (p_deg(g) // k))
            f = p_divmod(F, f, g)[0]
            h = p_mod(F, h, f) if p_deg(f) >= 1 else h
    return sorted(profile)


def is_irreducible(F, f):
    """Rabin test for a monic polynomial over F."""
    f = p_trim(F, list(f))
    n = p_deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    f = p_monic(F, f)
    x = [F.zero(), F.one()]
    h = _x_pow_q_mod(F, F.order ** n, f)
    if p_sub(F, h, x):
        return False
    for ell in _prime_divisors(n):
        h = _x_pow_q_mod(F, F.order ** (n // ell), f)
        if p_deg(p_gcd(F, p_sub(F, h, x), f)) != 0:
            return False
    return True


def find_irreducible(F, k, rng=None):
    """A monic irreducible of degree k over F, deterministic for fixed seed."""
    if rng is None:
        rng = random.Random(0x1441)
    # try sparse candidates first, then random dense ones
    for c0 in F.elements():
        if F.is_zero(c0):
            continue
        cand = [c0] + [F.zero()] * (k - 1) + [F.one()]
        if is_irreducible(F, cand):
            return cand
    for c1 in F.elements():
        for c0 in F.elements():
            if F.is_zero(c0):
                continue
            cand = [c0, c1] + [F.zero()] * (k - 2) + [F.one()]
            if is_irreducible(F, cand):
                return cand
    for _ in range(10000):
        cand = [F.random(rng) for _ in range(k)] + [F.one()]
        if not F.is_zero(cand[0]) and is_irreducible(F, cand):
            return cand
    raise RuntimeError(f"no irreducible of degree {k} found")


def sqrt_in_field(F, a):
    """A square root of a in F, or None. Canonical choice: minimal sort key."""
    if F.is_zero(a):
        return F.zero()
    if F.pow(a, (F.order - 1) // 2) != F.one():
        return None
    rts = poly_roots(F, [F.neg(a), F.zero(), F.one()])
    return rts[0][0]


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n):
    """Deterministic Miller-Rabin for word-sized n."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
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
