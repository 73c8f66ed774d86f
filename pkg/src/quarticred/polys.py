"""Dense multivariate polynomials, resultants, the ternary-quartic
discriminant, and p-adic univariate root finding.

MultiPoly is generic over a coefficient ring: a FieldContext, a finite
field, or IntRing (exact integers).  All polynomials in scope are tiny
(a ternary quartic has 15 coefficients), so everything is dict-based and
dense in spirit.

The root finder is the workhorse behind the bitangent search: it combines
Hensel lifting at simple residue roots with recursive Newton-polygon
descent into residue clusters, which is what makes roots of resultants
near a degenerate reduction (bitangents colliding mod pi) recoverable.
"""

from .errors import PrecisionExhausted, UnstableElimination
from .linalg import det_int, det_padic
from .padic import PadicElement, hensel_root, kp_eval
from .residue import factor_degree_profile, poly_roots


class IntRing:
    """Exact integer coefficients."""

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a == 0

    def coerce(self, x):
        return int(x)


ZZ = IntRing()

# canonical monomial order for ternary quartics (deglex, x1 > x2 > x3)
QUARTIC_MONOMIALS = [
    (4, 0, 0), (3, 1, 0), (3, 0, 1), (2, 2, 0), (2, 1, 1), (2, 0, 2),
    (1, 3, 0), (1, 2, 1), (1, 1, 2), (1, 0, 3), (0, 4, 0), (0, 3, 1),
    (0, 2, 2), (0, 1, 3), (0, 0, 4),
]

QUADRIC_MONOMIALS = [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1),
                     (0, 0, 2)]


class MultiPoly:
    """Polynomial in n variables over ``ring``; coeffs maps exponent tuples
    to ring elements.  Exact zeros are dropped; zero-at-precision p-adic
    coefficients are kept (they carry precision information)."""

    def __init__(self, ring, nvars, coeffs=None):
        self.ring = ring
        self.nvars = nvars
        self.coeffs = {}
        if coeffs:
            for k, v in coeffs.items():
                if not ring.is_zero(v):
                    self.coeffs[tuple(k)] = v

    @classmethod
    def from_pairs(cls, ring, nvars, pairs):
        return cls(ring, nvars, dict(pairs))

    def copy(self):
        return MultiPoly(self.ring, self.nvars, dict(self.coeffs))

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        return max((sum(k) for k in self.coeffs), default=-1)

    def is_homogeneous(self):
        degs = {sum(k) for k in self.coeffs}
        return len(degs) <= 1

    def get(self, expo):
        return self.coeffs.get(tuple(expo), self.ring.zero())

    def __add__(self, other):
        out = dict(self.coeffs)
        R = self.ring
        for k, v in other.coeffs.items():
            out[k] = R.add(out[k], v) if k in out else v
        return MultiPoly(R, self.nvars, out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        R = self.ring
        for k, v in other.coeffs.items():
            out[k] = R.sub(out[k], v) if k in out else R.neg(v)
        return MultiPoly(R, self.nvars, out)

    def __neg__(self):
        R = self.ring
        return MultiPoly(R, self.nvars, {k: R.neg(v) for k, v in self.coeffs.items()})

    def __mul__(self, other):
        R = self.ring
        out = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                t = R.mul(v1, v2)
                out[k] = R.add(out[k], t) if k in out else t
        return MultiPoly(R, self.nvars, out)

    def scale(self, c):
        R = self.ring
        return MultiPoly(R, self.nvars,
                         {k: R.mul(c, v) for k, v in self.coeffs.items()})

    def eval(self, point):
        R = self.ring
        acc = R.zero()
        for k, v in self.coeffs.items():
            t = v
            for x, e in zip(point, k):
                for _ in range(e):
                    t = R.mul(t, x)
            acc = R.add(acc, t)
        return acc

    def partial(self, i):
        R = self.ring
        out = {}
        for k, v in self.coeffs.items():
            if k[i] == 0:
                continue
            nk = list(k)
            m = nk[i]
            nk[i] -= 1
            c = R.zero()
            for _ in range(m):
                c = R.add(c, v)
            out[tuple(nk)] = c
        return MultiPoly(R, self.nvars, out)

    def map_coeffs(self, fn, new_ring):
        return MultiPoly(new_ring, self.nvars,
                         {k: fn(v) for k, v in self.coeffs.items()})

    def sorted_items(self):
        return sorted(self.coeffs.items(), reverse=True)

    def __repr__(self):
        names = ["x1", "x2", "x3", "x4"][: self.nvars]
        parts = []
        for k, v in self.sorted_items():
            mono = "*".join(f"{n}^{e}" if e > 1 else n
                            for n, e in zip(names, k) if e)
            parts.append(f"({v})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts) if parts else "0"


def poly_pow(f, n):
    out = MultiPoly(f.ring, f.nvars, {(0,) * f.nvars: f.ring.one()})
    for _ in range(n):
        out = out * f
    return out


def substitute(F, M):
    """F composed with the linear change x -> M x (rows of M give the images
    of the variables).  Degree-preserving; substitute(F, Id) == F."""
    R = F.ring
    n = F.nvars
    lins = []
    for i in range(n):
        lins.append(MultiPoly(R, n, {tuple(1 if j == t else 0 for t in range(n)):
                                     M[i][j] for j in range(n)
                                     if not R.is_zero(M[i][j])}))
    cache = {}

    def lin_pow(i, e):
        if (i, e) not in cache:
            cache[(i, e)] = poly_pow(lins[i], e)
        return cache[(i, e)]

    out = MultiPoly(R, n)
    for k, v in F.coeffs.items():
        term = MultiPoly(R, n, {(0,) * n: v})
        for i, e in enumerate(k):
            if e:
                term = term * lin_pow(i, e)
        out = out + term
    return out


def quartic_from_list(ring, coeffs):
    """Ternary quartic from 15 coefficients in QUARTIC_MONOMIALS order."""
    if len(coeffs) != 15:
        raise ValueError("ternary quartic needs 15 coefficients")
    return MultiPoly(ring, 3, dict(zip(QUARTIC_MONOMIALS, coeffs)))


def quartic_to_list(F):
    return [F.get(m) for m in QUARTIC_MONOMIALS]


# ---------------------------------------------------------------------------
# resultants


def sylvester_matrix(f, g, ring):
    """Sylvester matrix of coefficient lists (low degree first)."""
    m, n = len(f) - 1, len(g) - 1
    if m < 0 or n < 0:
        raise ValueError("resultant of the zero polynomial")
    size = m + n
    z = ring.zero()
    rows = []
    fr = list(reversed(f))
    gr = list(reversed(g))
    for i in range(n):
        rows.append([z] * i + fr + [z] * (size - m - 1 - i))
    for i in range(m):
        rows.append([z] * i + gr + [z] * (size - n - 1 - i))
    return rows


def resultant_int(f, g):
    """Exact resultant of integer coefficient lists.

    Convention: det of the Sylvester matrix with deg(g) rows of f on top,
    so res(x - a, x - b) = a - b and res(f, g) = f evaluated at the roots
    of monic g.
    """
    if len(f) == 1 and len(g) == 1:
        return 1
    if len(f) == 1:
        return f[0] ** (len(g) - 1)
    if len(g) == 1:
        return g[0] ** (len(f) - 1)
    return det_int(sylvester_matrix(f, g, ZZ))


def resultant_padic(ctx, f, g, guard=None):
    """Resultant over K; leading coefficients must not vanish at precision."""
    if guard is None:
        guard = ctx.default_guard
    for h in (f, g):
        if len(h) > 1:
            lc = h[-1]
            if lc.valuation is None or lc.valuation >= ctx.precision - guard:
                raise UnstableElimination(
                    "leading coefficient vanishes at working precision")
    if len(f) == 1 and len(g) == 1:
        return ctx.one()
    if len(f) == 1:
        return f[0] ** (len(g) - 1)
    if len(g) == 1:
        return g[0] ** (len(f) - 1)
    return det_padic(ctx, sylvester_matrix(f, g, ctx))


# ---------------------------------------------------------------------------
# ternary quartic discriminant (Macaulay resultant of the partials)


def _monomials_of_degree(t):
    out = []
    for a in range(t, -1, -1):
        for b in range(t - a, -1, -1):
            out.append((a, b, t - a - b))
    return out


def _macaulay_data(F):
    """Macaulay matrix of the three partial derivatives in degree 7 and the
    index set of the extraneous minor."""
    parts = [F.partial(i) for i in range(3)]
    monos = _monomials_of_degree(7)
    col = {m: i for i, m in enumerate(monos)}
    R = F.ring
    z = R.zero()
    rows = []
    excess_idx = []
    for ridx, alpha in enumerate(monos):
        if alpha[0] >= 3:
            i = 0
        elif alpha[1] >= 3:
            i = 1
        else:
            i = 2
        shift = list(alpha)
        shift[i] -= 3
        row = [z] * len(monos)
        for k, v in parts[i].coeffs.items():
            tgt = (k[0] + shift[0], k[1] + shift[1], k[2] + shift[2])
            row[col[tgt]] = R.add(row[col[tgt]], v)
        rows.append(row)
        if sum(1 for t in range(3) if alpha[t] >= 3) >= 2:
            excess_idx.append(ridx)
    return rows, excess_idx


# all determinant +-1, so they leave the weight-36 discriminant unchanged
_UNIMODULAR_SHEARS = [
    [[1, 1, 0], [0, 1, 0], [0, 0, 1]],
    [[1, 0, 0], [0, 1, 1], [0, 0, 1]],
    [[1, 1, 0], [0, 1, 1], [0, 0, 1]],
    [[1, 1, 0], [1, 2, 1], [0, 1, 2]],
    [[1, 0, 1], [2, 1, 4], [1, 0, 2]],
    [[1, 1, 1], [0, 1, 1], [0, 0, 1]],
    [[1, 0, 0], [1, 1, 0], [1, 1, 1]],
    [[1, 2, 1], [1, 1, 1], [0, 1, 1]],
]


def _try_macaulay_quotient(G):
    """D / D' for one coordinate ordering, or None when the minor vanishes."""
    exact = isinstance(G.ring, IntRing)
    rows, excess = _macaulay_data(G)
    minor = [[rows[i][j] for j in excess] for i in excess]
    if exact:
        dm = det_int(minor)
        if dm == 0:
            return None
        d = det_int(rows)
        q, r = divmod(d, dm)
        if r != 0:
            q, r = divmod(-d, dm)
            if r != 0:
                raise ArithmeticError("Macaulay quotient not exact")
            q = -q
        return q
    ctx = G.ring
    dm = det_padic(ctx, minor)
    if dm.valuation is None:
        return None
    d = det_padic(ctx, rows)
    return d * dm.inv()


def discriminant_quartic(F, guard=None):
    """Discriminant of a ternary quartic, up to a universal constant
    supported at 2 and 3.

    Macaulay resultant of the three partials: the full degree-7 determinant
    (36 monomials) divided by the extraneous 9x9 minor.  Vanishes iff the
    quartic is singular.  Sparse quartics can kill both determinants
    identically, so on failure the computation retries in sheared
    coordinates; the shears are unimodular, and the discriminant has weight
    36 in det, so the value is unchanged.
    """
    perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1), (2, 1, 0), (1, 0, 2)]
    candidates = [F]
    one = F.ring.one()
    zero = F.ring.zero()
    for S in _UNIMODULAR_SHEARS:
        M = [[one if c == 1 else (zero if c == 0 else
              _ring_int(F.ring, c)) for c in row] for row in S]
        candidates.append(substitute(F, M))
    for G0 in candidates:
        for perm in perms:
            G = MultiPoly(F.ring, 3, {tuple(k[p] for p in perm): v
                                      for k, v in G0.coeffs.items()})
            q = _try_macaulay_quotient(G)
            if q is not None:
                return q
    raise UnstableElimination("all Macaulay minors vanish: degenerate quartic")


def _ring_int(ring, n):
    if isinstance(ring, IntRing):
        return n
    return ring.from_int(n)


# ---------------------------------------------------------------------------
# univariate polynomials over K: root finding with cluster descent


def kp_taylor_shift(ctx, f, r):
    """Coefficients of f(r + y)."""
    n = len(f)
    binom = [[0] * n for _ in range(n)]
    for k in range(n):
        binom[k][0] = 1
        for i in range(1, k + 1):
            binom[k][i] = binom[k - 1][i - 1] + (binom[k - 1][i] if i <= k - 1 else 0)
    rpow = [ctx.one()]
    for _ in range(n - 1):
        rpow.append(rpow[-1] * r)
    out = []
    for i in range(n):
        acc = ctx.zero()
        for k in range(i, n):
            acc = acc + ctx.from_int(binom[k][i]) * f[k] * rpow[k - i]
        out.append(acc)
    return out


def _coeff_vals(coeffs):
    return [(c.valuation if c.valuation is not None else c.abs_precision)
            for c in coeffs]


def _lower_hull(points):
    """Lower convex hull of (i, v) points, increasing i."""
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep turn right (convex downward)
            if (x2 - x1) * (pt[1] - y1) <= (pt[0] - x1) * (y2 - y1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def padic_integral_roots(ctx, coeffs, guard=None, _only_units=False, _depth=0):
    """All integral roots of f over K detectable at precision.

    Returns (roots, diag): roots is a list of PadicElement; diag collects
    the residue factor-degree profile, fractional Newton slopes (roots in
    ramified extensions), and unresolved clusters.
    """
    if guard is None:
        guard = ctx.default_guard
    diag = {"profile": [], "ramified": [], "unresolved": 0}
    f = [c if isinstance(c, PadicElement) else ctx.from_int(c) for c in coeffs]
    # strip exact-zero leading entries, normalize content
    while f and f[-1].valuation is None and f[-1].abs_precision >= ctx.precision:
        f.pop()
    if not f:
        raise PrecisionExhausted("root finding on numerically zero polynomial")
    vmin = min((c.valuation for c in f if c.valuation is not None), default=None)
    if vmin is None:
        raise PrecisionExhausted("all coefficients vanish at precision")
    if vmin:
        f = [c.shift(-vmin) for c in f]
    eff = min(c.abs_precision for c in f)
    if eff <= guard and _depth:
        diag["unresolved"] += 1
        return [], diag
    F = ctx.residue
    fbar = [c.residue() for c in f]
    rbar = poly_roots(F, fbar)
    diag["profile"] = factor_degree_profile(F, fbar)
    roots = []
    for r0, mult in rbar:
        if _only_units and F.is_zero(r0):
            continue
        if mult == 1:
            roots.append(hensel_root(ctx, f, r0))
            continue
        center = ctx.from_coeffs(list(r0) + [0] * (ctx.dim - ctx.d))
        g = kp_taylor_shift(ctx, f, center)
        # leading coefficients numerically zero: the center itself is a root
        # at precision; deflate and look for the siblings
        omega = 0
        while omega < mult and (g[omega].valuation is None or
                                g[omega].valuation >= eff - guard):
            omega += 1
        if omega:
            prec0 = g[0].abs_precision if g[0].valuation is None else g[0].valuation
            roots.append(center._truncate(max(prec0 // omega, 1)))
            if omega > 1:
                diag["unresolved"] += omega - 1
            g = g[omega:]
            mult -= omega
            if mult <= 0 or len(g) <= 1:
                continue
        vals = _coeff_vals(g)
        pts = [(i, vals[i]) for i in range(min(mult, len(g) - 1) + 1)]
        hull = _lower_hull(pts)
        for (i0, v0), (i1, v1) in zip(hull, hull[1:]):
            rise, run = v0 - v1, i1 - i0
            if rise <= 0:
                continue
            if rise % run:
                diag["ramified"].append((rise, run))
                continue
            lam = rise // run
            # extend the slope line back to i = 0: content to factor out
            c = v0 + lam * i0
            h = [g[i].shift(lam * i - c) for i in range(len(g))]
            sub, sdiag = padic_integral_roots(ctx, h, guard,
                                              _only_units=True, _depth=_depth + 1)
            diag["ramified"] += sdiag["ramified"]
            diag["unresolved"] += sdiag["unresolved"]
            for z in sub:
                roots.append(center + z.shift(lam))
    if _depth == 0:
        roots = [_polish_root(ctx, f, r) for r in roots]
        roots = _dedupe_roots(roots, guard)
    return roots, diag


def _polish_root(ctx, f, r):
    from .padic import kp_derivative
    df = kp_derivative(ctx, f)
    last = None
    for _ in range(ctx.precision.bit_length() + 4):
        fr = kp_eval(f, r)
        if fr.valuation is None:
            break
        if last is not None and fr.valuation <= last:
            break
        last = fr.valuation
        dfr = kp_eval(df, r)
        if dfr.valuation is None:
            break
        r = r - fr / dfr
    return r

def _dedupe_roots(roots, guard):
    out = []
    for r in roots:
        if not any(r.same(s, guard=guard) for s in out):
            out.append(r)
    return out


def roots_in_field(ctx, coeffs, guard=None):
    """All K-rational roots (any valuation) with residue diagnostics.

    Negative-valuation roots come from the reversed polynomial; incomplete
    splitting is reported in the diagnostics, not raised.
    """
    f = [c if isinstance(c, PadicElement) else ctx.from_int(c) for c in coeffs]
    roots, diag = padic_integral_roots(ctx, f, guard)
    rev = list(reversed(f))
    try:
        rroots, rdiag = padic_integral_roots(ctx, rev, guard)
    except PrecisionExhausted:
        rroots, rdiag = [], {"ramified": [], "unresolved": 0, "profile": []}
    for z in rroots:
        if z.valuation is not None and z.valuation >= 1:
            roots.append(z.inv())
    diag["ramified"] += rdiag["ramified"]
    diag["unresolved"] += rdiag["unresolved"]
    return roots, diag
