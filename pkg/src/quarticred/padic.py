"""Capped-precision arithmetic in towers Q_p -> unramified -> Eisenstein.

A context describes K = Q_p(tau, pi) where tau generates an unramified
extension of degree d (minimal polynomial ``unram`` over Z, irreducible
mod p) and pi is a uniformizer with Eisenstein minimal polynomial ``eis``
of degree e over Z[tau].  Elements live in the flattened basis
{tau^i pi^j : i < d, j < e} with integer coordinates kept modulo p^M,
M = ceil(N/e) + 1, where N is the context's absolute precision in pi-units.

Every element is stored in unit-factored form

    x = pi^val * unit,   unit a tower unit,   x known modulo pi^(val + rel)

with 0 <= rel <= N.  "Zero at precision P" (all digits vanish below P) is a
separate marker state; consumers must treat such elements as possibly any
value of valuation >= P.  Arithmetic never claims more precision than the
inputs justify:

    add/sub : absolute precision = min of the inputs'
    mul     : min(prec_a + val_b, prec_b + val_a)
    inv     : prec_a - 2 val_a

Contexts are immutable and elements are value-like; everything here is a
pure function of its inputs, so data-parallel use is safe.
"""

import random

from .errors import (FieldConstructionError, HenselObstruction,
                     PrecisionExhausted, ZeroAtPrecision)
from .residue import (ExtField, PrimeField, is_irreducible, is_prime,
                      find_irreducible, poly_roots, sqrt_in_field)


def _vp(n, p, cap):
    """p-adic valuation of the integer n, capped at cap; cap for n == 0."""
    if n == 0:
        return cap
    v = 0
    while v < cap and n % p == 0:
        n //= p
        v += 1
    return v


def _unram_mul_raw(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _unram_reduce(vec, unram):
    """Reduce an integer tau-polynomial modulo the monic ``unram``."""
    d = len(unram) - 1
    vec = list(vec)
    for i in range(len(vec) - 1, d - 1, -1):
        c = vec[i]
        if c:
            vec[i] = 0
            for j in range(d):
                vec[i - d + j] -= c * unram[j]
    return vec[:d] + [0] * (d - len(vec)) if len(vec) < d else vec[:d]


class FieldContext:
    """Immutable description of the p-adic tower and its working precision.

    Build through :func:`make_field`, which validates the defining data.
    """

    def __init__(self, p, unram, eis, precision, _validated=False):
        if not _validated:
            _validate_field_data(p, unram, eis, precision)
        self.p = p
        self.unram = tuple(int(c) for c in unram)
        self.d = len(self.unram) - 1
        self.eis = tuple(tuple(int(c) for c in row) for row in eis)
        self.e = len(self.eis) - 1
        self.precision = precision
        self.dim = self.d * self.e
        self.M = -(-precision // self.e) + 1
        self.pM = p ** self.M
        self.residue = ExtField(PrimeField(p), [c % p for c in self.unram])
        self._build_tables()

    # -- construction of multiplication data -------------------------------

    def _build_tables(self):
        d, e, p, pM = self.d, self.e, self.p, self.pM
        U = list(self.unram)
        # tau^I mod U for I <= 2d-2, exact integer vectors
        tau_pow = []
        for I in range(2 * d - 1):
            vec = [0] * I + [1]
            tau_pow.append(_unram_reduce(vec, U))
        # pi^J as lists of e unramified coefficient vectors, J <= 2e-2
        pie = [[-c for c in row] for row in self.eis[:e]]  # pi^e
        pi_pow = []
        cur = [[0] * d for _ in range(e)]
        cur[0][0] = 1
        for J in range(2 * e - 1):
            pi_pow.append([row[:] for row in cur])
            # multiply by pi
            out_row = cur[e - 1]
            nxt = [[0] * d] + [row[:] for row in cur[: e - 1]]
            if any(out_row):
                for j in range(e):
                    if any(pie[j]):
                        prod = _unram_reduce(_unram_mul_raw(out_row, pie[j]), U)
                        for i in range(d):
                            nxt[j][i] += prod[i]
            cur = nxt
        # PROD[J][I]: flat coefficient vector of tau^I pi^J, reduced mod p^M
        prod = []
        for J in range(2 * e - 1):
            row = []
            for I in range(2 * d - 1):
                flat = [0] * self.dim
                for j in range(e):
                    col = _unram_reduce(_unram_mul_raw(tau_pow[I], pi_pow[J][j]), U)
                    for i in range(d):
                        flat[j * d + i] += col[i]
                row.append(tuple(c % pM for c in flat))
            prod.append(row)
        self._prod = prod
        # eta = (-pi^e)/p = sum_j (E_j/p) pi^j, a tower unit; cache -eta^{-1}
        eta = [0] * self.dim
        for j in range(e):
            for i in range(d):
                eta[j * d + i] = (self.eis[j][i] // p) % pM if i < len(self.eis[j]) else 0
        self._eta = tuple(eta)
        self._neg_inv_eta = tuple((-c) % pM for c in self._unit_inv(tuple(eta)))
        self._pi_elem_cache = {0: self._one_vec()}

    def _one_vec(self):
        v = [0] * self.dim
        v[0] = 1
        return tuple(v)

    def _pi_vec(self, k):
        """Flat coefficient vector of pi^k (reduced), k >= 0."""
        cache = self._pi_elem_cache
        if k in cache:
            return cache[k]
        if k < self.e:
            v = [0] * self.dim
            v[k * self.d] = 1
            out = tuple(v)
        elif k <= 2 * self.e - 2:
            out = self._prod[k][0]
        elif k == 1:
            # only reachable when e == 1: pi = -E_0 as a ring element
            out = tuple((-self.eis[0][i % self.d]) % self.pM if i < self.d else 0
                        for i in range(self.dim))
        else:
            half = self._pi_vec(k // 2)
            out = self._mul_units(half, half)
            if k % 2:
                out = self._mul_units(out, self._pi_vec(1))
        cache[k] = out
        return out

    # -- kernel operations on flat coefficient vectors ---------------------

    def _mul_units(self, u, v):
        d, e, pM = self.d, self.e, self.pM
        width = 2 * d - 1
        raw = [0] * ((2 * e - 1) * width)
        for j1 in range(e):
            b1 = j1 * d
            for i1 in range(d):
                c1 = u[b1 + i1]
                if c1:
                    for j2 in range(e):
                        b2 = j2 * d
                        rb = (j1 + j2) * width + i1
                        for i2 in range(d):
                            c2 = v[b2 + i2]
                            if c2:
                                raw[rb + i2] += c1 * c2
        out = [0] * self.dim
        prod = self._prod
        for J in range(2 * e - 1):
            rb = J * width
            prow = prod[J]
            for I in range(width):
                r = raw[rb + I]
                if r:
                    if I < d and J < e:
                        out[J * d + I] += r
                    else:
                        t = prow[I]
                        for k in range(self.dim):
                            tv = t[k]
                            if tv:
                                out[k] += r * tv
        return tuple(c % pM for c in out)

    def _coeff_val(self, coeffs, cap):
        """min over nonzero coordinates of e*vp(c) + j, or None if >= cap."""
        d, e, p, M = self.d, self.e, self.p, self.M
        best = None
        for j in range(e):
            if best is not None and best <= j:
                break
            for i in range(d):
                c = coeffs[j * d + i]
                if c:
                    v = e * _vp(c, p, M) + j
                    if best is None or v < best:
                        best = v
        if best is None or best >= cap:
            return None
        return best

    def _shift_down(self, coeffs, m):
        """coeffs / pi^m for a vector with valuation >= m; exact.

        Uses p^q = pi^(e q) * (-1/eta)^q and 1/pi^e = (1/p) * (-1/eta),
        so only exact integer divisions by powers of p occur.
        """
        p, e = self.p, self.e
        q, r = divmod(m, e)
        out = list(coeffs)
        if q:
            pq = p ** q
            out = [c // pq for c in out]
            out = list(self._mul_units(tuple(out), self._p_power_unit(q)))
        if r:
            vec = self._mul_units(tuple(out), self._pi_vec(e - r))
            out = [c // p for c in vec]
            out = list(self._mul_units(tuple(out), self._neg_inv_eta))
        return tuple(c % self.pM for c in out)

    def _unit_inv(self, u):
        """Inverse of a tower unit modulo p^M, by Newton from the residue."""
        res = self._residue_of_vec(u)
        if self.residue.is_zero(res):
            raise ZeroDivisionError("unit inversion on a non-unit")
        r = self.residue.inv(res)
        y = [0] * self.dim
        for i in range(self.d):
            y[i] = r[i]
        y = tuple(y)
        # error valuation doubles per step, starting at 1; cover pi^(M*e)
        steps = max(1, (self.M * self.e).bit_length() + 1)
        two = self._scalar_vec(2)
        for _ in range(steps):
            t = self._mul_units(u, y)
            corr = tuple((a - b) % self.pM for a, b in zip(two, t))
            y = self._mul_units(y, corr)
        return y

    def _scalar_vec(self, n):
        v = [0] * self.dim
        v[0] = n % self.pM
        return tuple(v)

    def _residue_of_vec(self, coeffs):
        p = self.p
        return tuple(coeffs[i] % p for i in range(self.d))

    # -- element constructors ----------------------------------------------

    def _make(self, coeffs, absprec):
        """Normalize a flat integral coefficient vector into an element."""
        absprec = min(absprec, self.precision)
        if absprec <= 0:
            return PadicElement(self, None, None, 0)
        v = self._coeff_val(coeffs, absprec)
        if v is None:
            return PadicElement(self, None, None, absprec)
        unit = self._shift_down(coeffs, v) if v else tuple(c % self.pM for c in coeffs)
        rel = min(absprec - v, self.precision)
        return PadicElement(self, v, unit, rel)

    def zero(self, absprec=None):
        return PadicElement(self, None, None,
                            self.precision if absprec is None else absprec)

    def one(self):
        return PadicElement(self, 0, self._one_vec(), self.precision)

    def _p_power_unit(self, k):
        """Unit u with p^k = pi^(e*k) * u, i.e. (-1/eta)^k."""
        u = self._one_vec()
        for _ in range(k):
            u = self._mul_units(u, self._neg_inv_eta)
        return u

    def from_int(self, n):
        n = int(n)
        if n == 0:
            return self.zero()
        vp = _vp(n, self.p, 10 ** 9)
        v = self.e * vp
        if v >= self.precision:
            return self.zero()
        unit = self._mul_units(self._scalar_vec(n // self.p ** vp),
                               self._p_power_unit(vp))
        return PadicElement(self, v, unit, self.precision - v)

    def from_rational(self, num, den):
        num, den = int(num), int(den)
        if den == 0:
            raise ZeroDivisionError("rational with zero denominator")
        if num == 0:
            return self.zero()
        vn, vd = _vp(num, self.p, 10 ** 9), _vp(den, self.p, 10 ** 9)
        v = self.e * (vn - vd)
        if v >= self.precision:
            return self.zero()
        nu = num // self.p ** vn
        du = den // self.p ** vd
        unit = self._mul_units(self._scalar_vec(nu),
                               self._unit_inv(self._scalar_vec(du)))
        unit = self._mul_units(unit, self._p_power_unit(max(vn - vd, 0)))
        if vd > vn:
            inv_pu = self._unit_inv(self._p_power_unit(vd - vn))
            unit = self._mul_units(unit, inv_pu)
        return PadicElement(self, v, unit, min(self.precision,
                                               self.precision - max(v, 0)))

    def from_coeffs(self, flat, absprec=None):
        """Element from integer coordinates in the tau^i pi^j basis
        (flat index j*d + i)."""
        if len(flat) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates")
        return self._make(tuple(int(c) % self.pM for c in flat),
                          self.precision if absprec is None else absprec)

    def tau(self):
        v = [0] * self.dim
        if self.d == 1:
            # degree-1 unramified part: tau is the root of the linear unram poly
            v[0] = (-self.unram[0]) % self.pM
            return self._make(tuple(v), self.precision)
        v[1] = 1
        return PadicElement(self, 0, tuple(v), self.precision)

    def pi(self):
        return PadicElement(self, 1, self._one_vec(), self.precision - 1)

    # -- ring protocol for generic polynomial code -------------------------

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        # drop test for polynomial cleanup: only canonical full-precision zeros
        return a.is_zero_at_precision() and a.abs_precision >= self.precision

    def coerce(self, x):
        if isinstance(x, PadicElement):
            if x.ctx is not self:
                raise ValueError("context mismatch")
            return x
        return self.from_int(x)

    # -- misc ---------------------------------------------------------------

    @property
    def default_guard(self):
        return self.precision // 4

    def residue_of(self, elem):
        return elem.residue()

    def describe(self):
        return {
            "p": self.p,
            "unram": list(self.unram),
            "eis": [list(row) for row in self.eis],
            "precision": self.precision,
            "residue_degree": self.d,
            "ramification": self.e,
        }

    def __repr__(self):
        return (f"FieldContext(p={self.p}, d={self.d}, e={self.e}, "
                f"N={self.precision})")


def _coerce_eis(p, unram, eis_poly):
    d = len(unram) - 1
    rows = []
    for c in eis_poly:
        if isinstance(c, (list, tuple)):
            row = [int(x) for x in c]
            if len(row) > d:
                raise FieldConstructionError("eisenstein coefficient exceeds "
                                             "unramified degree")
            row += [0] * (d - len(row))
        else:
            row = [int(c)] + [0] * (d - 1)
        rows.append(tuple(row))
    return rows


def _validate_field_data(p, unram, eis, precision):
    if not is_prime(p):
        raise FieldConstructionError(f"{p} is not prime")
    if p == 2:
        raise FieldConstructionError("residue characteristic 2 is unsupported")
    if precision < 1:
        raise FieldConstructionError("precision must be positive")
    if len(unram) < 2 or unram[-1] != 1:
        raise FieldConstructionError("unramified polynomial must be monic of "
                                     "degree >= 1")
    Fp = PrimeField(p)
    if not is_irreducible(Fp, [c % p for c in unram]):
        raise FieldConstructionError("unramified polynomial reducible mod p")
    e = len(eis) - 1
    if e < 1:
        raise FieldConstructionError("eisenstein polynomial must have degree >= 1")
    top = eis[-1]
    if any(top[1:]) or top[0] != 1:
        raise FieldConstructionError("eisenstein polynomial must be monic")
    for j in range(e):
        if any(c % p for c in eis[j]):
            raise FieldConstructionError(
                f"eisenstein coefficient {j} must have positive valuation")
    if all(c % (p * p) == 0 for c in eis[0]):
        raise FieldConstructionError(
            "eisenstein constant term must have valuation exactly one")


def make_field(p, unram_poly, eis_poly, abs_precision):
    """Construct the tower context; checks primality, irreducibility mod p,
    and the Eisenstein condition."""
    unram = [int(c) for c in unram_poly]
    eis = _coerce_eis(p, unram, eis_poly)
    _validate_field_data(p, unram, eis, abs_precision)
    return FieldContext(p, unram, eis, abs_precision, _validated=True)


class PadicElement:
    """Element of the tower, unit-factored with tracked precision.

    val is None for "zero at precision"; then rel stores the absolute
    precision below which every digit vanishes.
    """

    __slots__ = ("ctx", "val", "unit", "rel")
    __hash__ = None

    def __init__(self, ctx, val, unit, rel):
        self.ctx = ctx
        self.val = val
        self.unit = unit
        self.rel = rel

    # -- basic predicates ----------------------------------------------------

    def is_zero_at_precision(self):
        return self.val is None

    @property
    def abs_precision(self):
        return self.rel if self.val is None else self.val + self.rel

    @property
    def valuation(self):
        """Valuation detectable at the stored precision; None marks
        'indistinguishable from zero' (treat as >= abs_precision)."""
        return self.val

    def _check_ctx(self, other):
        if self.ctx is not other.ctx:
            raise ValueError("context mismatch between operands")

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ctx.from_int(other)
        self._check_ctx(other)
        a, b = self, other
        prec = min(a.abs_precision, b.abs_precision)
        if a.val is None and b.val is None:
            return PadicElement(self.ctx, None, None, prec)
        if a.val is None:
            return b._truncate(prec)
        if b.val is None:
            return a._truncate(prec)
        m = min(a.val, b.val)
        ua = a._integral_from(m)
        ub = b._integral_from(m)
        s = tuple((x + y) % self.ctx.pM for x, y in zip(ua, ub))
        out = self.ctx._make(s, prec - m)
        return out._shift_exact(m)

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        if self.val is None:
            return self
        pM = self.ctx.pM
        return PadicElement(self.ctx, self.val,
                            tuple((-c) % pM for c in self.unit), self.rel)

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ctx.from_int(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.ctx.from_int(other)
        self._check_ctx(other)
        a, b = self, other
        if a.val is None or b.val is None:
            va = a.val if a.val is not None else a.abs_precision
            vb = b.val if b.val is not None else b.abs_precision
            prec = min(a.abs_precision + vb, b.abs_precision + va)
            return PadicElement(self.ctx, None, None, max(prec, 0))
        unit = self.ctx._mul_units(a.unit, b.unit)
        rel = min(a.rel, b.rel)
        v = a.val + b.val
        if v >= self.ctx.precision or rel <= 0:
            return PadicElement(self.ctx, None, None,
                                min(v + rel, self.ctx.precision))
        rel = min(rel, self.ctx.precision - v) if v > 0 else rel
        return PadicElement(self.ctx, v, unit, rel)

    def __rmul__(self, other):
        return self * other

    def inv(self):
        if self.val is None:
            raise ZeroAtPrecision(self.abs_precision)
        unit = self.ctx._unit_inv(self.unit)
        return PadicElement(self.ctx, -self.val, unit, self.rel)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.ctx.from_int(other)
        return self * other.inv()

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        r = self.ctx.one()
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def shift(self, k):
        """Multiply by pi^k (exact, k may be negative)."""
        if self.val is None:
            return PadicElement(self.ctx, None, None,
                                min(self.rel + k, self.ctx.precision))
        return self._shift_exact(k)

    def _shift_exact(self, k):
        if self.val is None:
            return PadicElement(self.ctx, None, None,
                                min(self.rel + k, self.ctx.precision))
        if k == 0:
            return self
        v = self.val + k
        rel = min(self.rel, self.ctx.precision - v)
        if rel <= 0:
            return PadicElement(self.ctx, None, None,
                                min(v + self.rel, self.ctx.precision))
        return PadicElement(self.ctx, v, self.unit, rel)

    def _truncate(self, absprec):
        absprec = min(absprec, self.ctx.precision)
        if self.val is None:
            return PadicElement(self.ctx, None, None, min(self.rel, absprec))
        rel = absprec - self.val
        if rel <= 0:
            return PadicElement(self.ctx, None, None, absprec)
        return PadicElement(self.ctx, self.val, self.unit, min(self.rel, rel))

    def _integral_from(self, base_val):
        """Flat coefficients of self / pi^base_val, requires val >= base_val."""
        k = self.val - base_val
        if k < 0:
            raise ValueError("element not integral from requested valuation")
        if k == 0:
            return self.unit
        return self.ctx._mul_units(self.unit, self.ctx._pi_vec(k))

    # -- comparisons ---------------------------------------------------------

    def same(self, other, guard=0):
        """Indistinguishable at the shared precision minus guard."""
        if isinstance(other, int):
            other = self.ctx.from_int(other)
        d = self - other
        thr = min(d.abs_precision, self.ctx.precision - guard)
        return d.val is None or d.val >= thr

    def __eq__(self, other):
        if not isinstance(other, (PadicElement, int)):
            return NotImplemented
        return self.same(other)

    # -- residue and roots -----------------------------------------------------

    def residue(self):
        """Image in the residue field; element must be integral."""
        if self.val is None:
            return self.ctx.residue.zero()
        if self.val < 0:
            raise ValueError("residue of a non-integral element")
        if self.val > 0:
            return self.ctx.residue.zero()
        return self.ctx._residue_of_vec(self.unit)

    def sqrt(self):
        """(root, None) on success; (None, reason) when no root exists in K.

        reason is "odd valuation" or "non-residue"; callers can extend the
        field accordingly.
        """
        if self.val is None:
            raise ZeroAtPrecision(self.abs_precision, "sqrt of numerical zero")
        if self.val % 2:
            return None, "odd valuation"
        F = self.ctx.residue
        r0 = sqrt_in_field(F, self.ctx._residue_of_vec(self.unit))
        if r0 is None:
            return None, "non-residue"
        s = _unit_sqrt(self.ctx, self.unit, self.rel, r0)
        return s._shift_exact(self.val // 2), None

    # -- presentation -----------------------------------------------------------

    def integral_parts(self):
        """(flat coefficient tuple, shift) with value = coeffs / pi^shift."""
        if self.val is None:
            return (0,) * self.ctx.dim, 0
        if self.val >= 0:
            return self._integral_from(0), 0
        return self.unit, -self.val

    def __repr__(self):
        if self.val is None:
            return f"O(pi^{self.abs_precision})"
        coeffs, shift = self.integral_parts()
        d, e = self.ctx.d, self.ctx.e
        terms = []
        for j in range(e):
            row = coeffs[j * d: (j + 1) * d]
            if not any(row):
                continue
            if d == 1:
                body = str(row[0])
            else:
                parts = []
                for i, c in enumerate(row):
                    if c:
                        parts.append(f"{c}" if i == 0 else
                                     (f"{c}*t" if i == 1 else f"{c}*t^{i}"))
                body = " + ".join(parts)
                if len(parts) > 1:
                    body = f"({body})"
            if j == 0:
                terms.append(body)
            elif j == 1:
                terms.append(f"{body}*pi")
            else:
                terms.append(f"{body}*pi^{j}")
        s = " + ".join(terms) if terms else "0"
        if shift:
            s = f"({s})/pi^{shift}"
        return f"{s} + O(pi^{self.abs_precision})"


def _unit_sqrt(ctx, unit, rel, r0):
    """Lift a residue square root of a tower unit; p odd makes the root simple."""
    y = [0] * ctx.dim
    for i in range(ctx.d):
        y[i] = r0[i]
    x = PadicElement(ctx, 0, tuple(y), rel)
    u = PadicElement(ctx, 0, unit, rel)
    inv2 = ctx.from_int(2).inv()
    # Newton: x <- (x + u/x)/2, quadratic convergence from the simple residue root
    steps = max(3, ctx.precision.bit_length() + 2)
    for _ in range(steps):
        nxt = (x + u / x) * inv2
        if nxt.same(x):
            x = nxt
            break
        x = nxt
    return x


# ---------------------------------------------------------------------------
# univariate polynomials over K (coefficient lists) and Hensel lifting


def kp_eval(coeffs, x):
    acc = x.ctx.zero() if coeffs == [] else None
    for c in reversed(coeffs):
        acc = c if acc is None else acc * x + c
    return acc


def kp_derivative(ctx, coeffs):
    return [ctx.from_int(i) * coeffs[i] for i in range(1, len(coeffs))]


def hensel_root(ctx, coeffs, r0):
    """The root of f congruent to the residue root r0, by Newton iteration.

    Requires f(r0) = 0 in the residue field.  If f'(r0) is a residue unit the
    classical lift applies; otherwise the strong form is used when
    val f(r) > 2 val f'(r) for the lifted seed, else HenselObstruction.
    """
    f = list(coeffs)
    df = kp_derivative(ctx, f)
    r = ctx.from_coeffs([c for c in r0] + [0] * (ctx.dim - ctx.d))
    fr = kp_eval(f, r)
    if fr.val is not None and fr.val < 1:
        raise ValueError("r0 is not a residue root")
    dfr = kp_eval(df, r)
    if dfr.val is None:
        raise HenselObstruction(dfr.abs_precision,
                                "derivative vanishes at working precision")
    kappa = dfr.val
    if kappa > 0:
        frv = fr.val if fr.val is not None else fr.abs_precision
        if frv <= 2 * kappa:
            raise HenselObstruction(kappa)
    last = -1
    for _ in range(ctx.precision.bit_length() + 8):
        fr = kp_eval(f, r)
        if fr.val is None:
            break
        if fr.val <= last:
            break
        last = fr.val
        dfr = kp_eval(df, r)
        r = r - fr / dfr
    return r


def residue_roots(F, coeffs):
    """Spec-facing alias: all roots in the residue field with multiplicities."""
    return poly_roots(F, coeffs)


# ---------------------------------------------------------------------------
# field extensions


class ContextEmbedding:
    """Ring map of one context into a larger one, determined by the images
    of tau and pi.  For ramified square-root upgrades the map is an exact
    coefficient reindexing; otherwise images are evaluated by Horner."""

    def __init__(self, src, dst, tau_img, pi_img, val_scale, exact_reindex=False):
        self.src = src
        self.dst = dst
        self.tau_img = tau_img
        self.pi_img = pi_img
        self.val_scale = val_scale
        self.exact_reindex = exact_reindex
        if not exact_reindex:
            self._tau_pows = [dst.one()]
            for _ in range(src.d - 1):
                self._tau_pows.append(self._tau_pows[-1] * tau_img)
            self._pi_pows = [dst.one()]
            for _ in range(src.e - 1):
                self._pi_pows.append(self._pi_pows[-1] * pi_img)

    def map(self, elem):
        src, dst = self.src, self.dst
        if elem.ctx is not src:
            raise ValueError("embedding applied to element of a different context")
        if elem.val is None:
            return PadicElement(dst, None, None,
                                min(elem.rel * self.val_scale, dst.precision))
        if self.exact_reindex:
            flat = [0] * dst.dim
            for j in range(src.e):
                for i in range(src.d):
                    flat[(2 * j) * dst.d + i] = elem.unit[j * src.d + i]
            out = PadicElement(dst, elem.val * self.val_scale, tuple(flat),
                               min(elem.rel * self.val_scale, dst.precision))
            return out
        acc = dst.zero()
        for j in range(src.e):
            row = dst.zero()
            for i in range(src.d):
                c = elem.unit[j * src.d + i]
                if c:
                    row = row + dst.from_int(c) * self._tau_pows[i]
            acc = acc + row * self._pi_pows[j]
        out = acc * (self.pi_img ** elem.val if elem.val >= 0
                     else (self.pi_img ** (-elem.val)).inv())
        return out._truncate(elem.abs_precision * self.val_scale)


def extend_ramified_sqrt(ctx):
    """Adjoin a square root of pi: eis(x) becomes eis(x^2), precision doubles.

    Exact: old coordinates reindex to even pi-powers.
    """
    e = ctx.e
    new_eis = []
    for j in range(2 * e + 1):
        if j % 2 == 0:
            new_eis.append(list(ctx.eis[j // 2]))
        else:
            new_eis.append([0] * ctx.d)
    new_ctx = FieldContext(ctx.p, list(ctx.unram), new_eis, 2 * ctx.precision,
                           _validated=True)
    emb = ContextEmbedding(ctx, new_ctx, new_ctx.tau(), new_ctx.pi() ** 2,
                           val_scale=2, exact_reindex=True)
    return new_ctx, emb


def extend_unramified_double(ctx, rng=None):
    """Double the residue degree.  Requires rational-integer Eisenstein data
    (true for every context this package constructs), so the defining
    polynomials stay exact; only element images are capped.
    """
    for row in ctx.eis:
        if any(row[1:]):
            raise FieldConstructionError(
                "unramified extension over tau-dependent Eisenstein data is "
                "not supported")
    if rng is None:
        rng = random.Random(0xD0B1)
    Fp = PrimeField(ctx.p)
    new_unram_modp = find_irreducible(Fp, 2 * ctx.d, rng)
    new_unram = [int(c) for c in new_unram_modp]
    new_d = 2 * ctx.d
    new_eis = [[row[0]] + [0] * (new_d - 1) for row in ctx.eis]
    new_ctx = FieldContext(ctx.p, new_unram, new_eis,
                           ctx.precision, _validated=True)
    # image of the old tau: Hensel root of the old unramified polynomial
    rts = poly_roots(new_ctx.residue,
                     [new_ctx.residue.from_int(c) for c in ctx.unram])
    if not rts:
        raise FieldConstructionError("old residue field does not embed "
                                     "(impossible for a degree-doubling)")
    r0 = rts[0][0]
    if ctx.d == 1:
        tau_img = new_ctx.from_int((-ctx.unram[0]))
    else:
        tau_img = hensel_root(new_ctx,
                              [new_ctx.from_int(c) for c in ctx.unram], r0)
    emb = ContextEmbedding(ctx, new_ctx, tau_img, new_ctx.pi(), val_scale=1)
    return new_ctx, emb


# ---------------------------------------------------------------------------
# serialization (digit lists, bit-exact)


def element_to_digits(elem):
    """Serializable dict: base-p digit lists per basis coordinate plus the
    pi-shift and absolute precision.  Round-trips exactly."""
    ctx = elem.ctx
    coeffs, shift = elem.integral_parts()
    digits = []
    for c in coeffs:
        row = []
        n = c
        for _ in range(ctx.M):
            n, d = divmod(n, ctx.p)
            row.append(d)
        digits.append(row)
    return {"shift": shift, "prec": elem.abs_precision, "digits": digits}


def element_from_digits(ctx, data):
    flat = []
    for row in data["digits"]:
        c = 0
        for d in reversed(row):
            c = c * ctx.p + d
        flat.append(c)
    elem = ctx.from_coeffs(flat, absprec=data["prec"] + data["shift"])
    if data["shift"]:
        elem = elem.shift(-data["shift"])
    return elem
