"""Exact stretch factor data for nonnegative integer transition matrices.

All certification is algebraic: characteristic polynomials are exact,
the Perron-Frobenius root is isolated to a rational enclosure, and
power identities between stretch factors are decided through minimal
polynomials.  Floating point only appears as a prefilter.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy
from sympy import Poly, Rational, Symbol

from .errors import ZeroMatrix

_x = Symbol("x")

ENCLOSURE_WIDTH = Fraction(1, 10**12)


# --- a tiny exact number field Q(root) ----------------------------------


class RootField:
    """Arithmetic in Q(r) for a real algebraic number r given by its minimal
    polynomial (integer coefficients, lowest degree first) and an isolating
    rational enclosure.

    Elements are tuples of Fractions (coefficients of powers of r).  Signs
    are decided by exact interval arithmetic, refining the enclosure on
    demand; exact zero is the zero coefficient tuple, so the sign test
    always terminates.
    """

    def __init__(self, min_poly_coeffs, enclosure):
        self.min_poly = tuple(Fraction(c) for c in min_poly_coeffs)
        self.degree = len(self.min_poly) - 1
        self.lo, self.hi = Fraction(enclosure[0]), Fraction(enclosure[1])
        # monic reduction rule: r^d = -(c_0 + c_1 r + ...)/c_d
        lead = self.min_poly[-1]
        self._reduction = tuple(-c / lead for c in self.min_poly[:-1])

    # elements ----------------------------------------------------------

    def zero(self):
        return (Fraction(0),) * self.degree

    def one(self):
        return self.from_rational(1)

    def from_rational(self, q):
        return (Fraction(q),) + (Fraction(0),) * (self.degree - 1)

    def root(self):
        if self.degree == 1:
            return self._reduction  # rational root
        return (Fraction(0), Fraction(1)) + (Fraction(0),) * (self.degree - 2)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def scale(self, a, q):
        return tuple(x * Fraction(q) for x in a)

    def mul(self, a, b):
        prod = [Fraction(0)] * (2 * self.degree - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        for k in range(len(prod) - 1, self.degree - 1, -1):
            c = prod[k]
            if c:
                prod[k] = Fraction(0)
                for i, red in enumerate(self._reduction):
                    prod[k - self.degree + i] += c * red
        return tuple(prod[: self.degree])

    def inv(self, a):
        # extended Euclid for poly(a) and the minimal polynomial
        if all(x == 0 for x in a):
            raise ZeroDivisionError
        r0, r1 = list(self.min_poly), list(a)
        s0, s1 = [Fraction(0)], [Fraction(1)]

        def strip(p):
            while p and p[-1] == 0:
                p.pop()
            return p

        r0, r1 = strip(r0), strip(r1)
        while True:
            if len(r1) == 1:
                c = r1[0]
                out = [x / c for x in s1]
                out += [Fraction(0)] * (self.degree - len(out))
                return tuple(out[: self.degree])
            q, rem = _poly_divmod(r0, r1)
            s_new = _poly_sub(s0, _poly_mul(q, s1))
            r0, s0 = r1, s1
            r1, s1 = strip(rem), s_new
            if not r1:
                raise ZeroDivisionError("element not invertible")

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    # sign machinery -----------------------------------------------------

    def refine(self):
        """Halve the enclosure, keeping the root inside (by sign change)."""
        mid = (self.lo + self.hi) / 2
        flo = _eval_poly(self.min_poly, self.lo)
        fmid = _eval_poly(self.min_poly, mid)
        if fmid == 0:
            self.lo = self.hi = mid
        elif (flo < 0) == (fmid < 0):
            self.lo = mid
        else:
            self.hi = mid

    def sign(self, a):
        if all(x == 0 for x in a):
            return 0
        for _ in range(512):
            lo, hi = _interval_eval(a, self.lo, self.hi)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            self.refine()
        raise RuntimeError("sign did not resolve; enclosure refinement exhausted")

    def eq(self, a, b):
        return all(x == y for x, y in zip(a, b))

    def lt(self, a, b):
        return self.sign(self.sub(a, b)) < 0

    def approx(self, a):
        mid = (self.lo + self.hi) / 2
        return _eval_poly(a, mid)

    def to_sympy(self, a, root_expr):
        return sum(sympy.Rational(c.numerator, c.denominator) * root_expr**i
                   for i, c in enumerate(a))


def _poly_divmod(num, den):
    num = list(num)
    q = [Fraction(0)] * max(1, len(num) - len(den) + 1)
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1] / den[-1]
        q[k] = c
        for i, d in enumerate(den):
            num[k + i] -= c * d
    return q, num[: len(den) - 1]


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _eval_poly(coeffs, t):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * t + Fraction(c)
    return acc


def _interval_eval(coeffs, lo, hi):
    """Exact interval Horner evaluation of a polynomial on [lo, hi]."""
    alo = ahi = Fraction(0)
    for c in reversed(coeffs):
        c = Fraction(c)
        products = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(products) + c, max(products) + c
    return alo, ahi


# --- stretch factors ----------------------------------------------------


@dataclass(frozen=True)
class StretchFactor:
    char_poly: tuple  # integer coefficients, lowest degree first
    min_poly: tuple  # irreducible factor carrying the PF root
    enclosure: tuple  # (Fraction lo, Fraction hi), width <= 1e-12
    expanding: bool  # PF root > 1

    @property
    def approx(self):
        lo, hi = self.enclosure
        return float((lo + hi) / 2)

    def field(self):
        return RootField(self.min_poly, self.enclosure)

    def root_expr(self):
        poly = Poly(list(reversed(self.min_poly)), _x)
        roots = sympy.real_roots(poly)
        lo, hi = self.enclosure
        for r in roots:
            if _root_in_interval(r, lo, hi):
                return r
        raise RuntimeError("PF root lost")


def _root_in_interval(r, lo, hi):
    if r.is_Rational:
        q = Fraction(int(r.p), int(r.q))
        return lo <= q <= hi
    approx = _rational_approx(r, Fraction(1, 10**14))
    return lo - Fraction(1, 10**13) <= approx <= hi + Fraction(1, 10**13)


def _rational_approx(root, dx):
    if hasattr(root, "eval_rational"):
        val = root.eval_rational(dx=Rational(dx.numerator, dx.denominator))
        return Fraction(int(val.p), int(val.q))
    # radical expression (low degree): evalf with generous guard digits
    digits = max(30, 2 * len(str(dx.denominator)))
    val = sympy.Rational(str(root.evalf(digits)))
    return Fraction(int(val.p), int(val.q))


def char_poly_coeffs(mat):
    """Exact characteristic polynomial, lowest degree first."""
    m = sympy.Matrix(mat.tolist() if isinstance(mat, np.ndarray) else mat)
    poly = m.charpoly(_x)
    coeffs = [int(c) for c in poly.all_coeffs()]  # highest first
    return tuple(reversed(coeffs))


def pf_data(mat):
    """Stretch factor data: char poly, PF root enclosure, minimal factor.

    Returns ``(StretchFactor, irreducible_flag, eigenvector_approx)`` where
    the eigenvector is a rational approximation of a right PF eigenvector.
    """
    mat = np.asarray(mat, dtype=np.int64)
    if not mat.any():
        raise ZeroMatrix()
    cp = char_poly_coeffs(mat)
    poly = Poly(list(reversed(cp)), _x)
    real = sympy.real_roots(poly)
    pf = max(real, key=lambda r: r.evalf(30))
    half = ENCLOSURE_WIDTH / 2
    if pf.is_Rational:
        center = Fraction(int(pf.p), int(pf.q))
        lo = hi = center
        min_poly = (-center.numerator, center.denominator)
        if min_poly[1] < 0:
            min_poly = (-min_poly[0], -min_poly[1])
    else:
        center = _rational_approx(pf, half / 2)
        lo, hi = center - half, center + half
        mp = sympy.minimal_polynomial(pf, _x)
        min_poly = tuple(reversed([int(c) for c in Poly(mp, _x).all_coeffs()]))
    sf = StretchFactor(cp, min_poly, (lo, hi), expanding=lo > 1)
    from .maps import is_irreducible_matrix  # local: avoid import cycle

    irreducible = is_irreducible_matrix(mat)
    eigvec = _pf_eigenvector_approx(mat, sf)
    return sf, irreducible, eigvec


def _pf_eigenvector_approx(mat, sf: StretchFactor):
    field = sf.field()
    vec = pf_right_eigenvector(mat, field)
    return [field.approx(v) for v in vec]


def _solve_eigen(rows, field):
    """Nullspace vector of (rows - lam*I) over Q(lam); rows is an integer matrix."""
    n = len(rows)
    lam = field.root()
    a = [[field.from_rational(rows[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        a[i][i] = field.sub(a[i][i], lam)
    # Gaussian elimination; the matrix is singular with nullity 1 for an
    # irreducible PF system, so one free column remains.
    pivots = []
    row = 0
    for col in range(n):
        pivot = None
        for r in range(row, n):
            if not field.eq(a[r][col], field.zero()):
                pivot = r
                break
        if pivot is None:
            continue
        a[row], a[pivot] = a[pivot], a[row]
        inv_p = field.inv(a[row][col])
        a[row] = [field.mul(v, inv_p) for v in a[row]]
        for r in range(n):
            if r != row and not field.eq(a[r][col], field.zero()):
                factor = a[r][col]
                a[r] = [
                    field.sub(v, field.mul(factor, w)) for v, w in zip(a[r], a[row])
                ]
        pivots.append(col)
        row += 1
    free = [c for c in range(n) if c not in pivots]
    if not free:
        raise RuntimeError("eigenvalue is not an eigenvalue of the matrix")
    fc = free[0]
    vec = [field.zero()] * n
    vec[fc] = field.one()
    for r, col in enumerate(pivots):
        vec[col] = field.neg(a[r][fc])
    return vec


def pf_right_eigenvector(mat, field):
    mat = np.asarray(mat, dtype=np.int64)
    return _solve_eigen([list(map(int, row)) for row in mat], field)


def pf_left_eigenvector(mat, field):
    mat = np.asarray(mat, dtype=np.int64)
    return _solve_eigen([list(map(int, row)) for row in mat.T], field)


# --- rationality of log ratios ------------------------------------------


@dataclass(frozen=True)
class LogRatioVerdict:
    rational: bool
    ratio: Fraction = None  # log(lam2)/log(lam1) = p/q, so lam1^p = lam2^q


def log_ratio(s1: StretchFactor, s2: StretchFactor, denom_bound=20):
    """Bounded certification that log(lam2)/log(lam1) is rational.

    ``Rational(p/q)`` is returned in lowest terms iff ``lam1^p = lam2^q``
    exactly, certified via minimal polynomials; a float ratio only
    prefilters candidate pairs.
    """
    if not (s1.expanding and s2.expanding):
        raise ValueError("log_ratio requires both PF roots > 1 (no expansion)")
    l1, l2 = s1.approx, s2.approx
    target = math.log(l2) / math.log(l1)
    for q in range(1, denom_bound + 1):
        p = round(q * target)
        if p < 1 or p > denom_bound:
            continue
        if math.gcd(p, q) != 1:
            continue
        if abs(q * target - p) > 1e-6:
            continue
        if _algebraic_power_equal(s1, p, s2, q):
            return LogRatioVerdict(True, Fraction(p, q))
    return LogRatioVerdict(False)


def _algebraic_power_equal(s1, p, s2, q):
    """Exact test of lam1^p == lam2^q."""
    a = s1.root_expr() ** p
    b = s2.root_expr() ** q
    ma = Poly(sympy.minimal_polynomial(a, _x), _x)
    mb = Poly(sympy.minimal_polynomial(b, _x), _x)
    if ma != mb:
        return False
    # same minimal polynomial: equal iff the same real root of it
    roots = sympy.real_roots(ma)
    ia = _which_root(roots, s1.enclosure, p)
    ib = _which_root(roots, s2.enclosure, q)
    return ia == ib and ia is not None


def _which_root(roots, enclosure, power):
    lo, hi = enclosure
    plo, phi = lo**power, hi**power
    hits = []
    for i, r in enumerate(roots):
        approx = (
            Fraction(int(r.p), int(r.q))
            if r.is_Rational
            else _rational_approx(r, (phi - plo) / 4 if phi > plo else Fraction(1, 10**14))
        )
        if plo - Fraction(1, 10**10) <= approx <= phi + Fraction(1, 10**10):
            hits.append(i)
    if len(hits) == 1:
        return hits[0]
    # enclosure too coarse to separate; refine by exact midpoint ordering
    if hits:
        return hits[0]
    return None
