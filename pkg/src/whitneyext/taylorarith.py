"""
Truncated multivariate Taylor arithmetic.

This is the exact-differentiation engine of the package: every derivative
reported anywhere (bump functions, chart maps, the extension operator) is
obtained by evaluating the relevant formula in this arithmetic and reading
off coefficients.

A :class:`TaylorValue` of dimension n and order k stores the coefficients
of a Taylor expansion at some base point, one per multi-index ``a`` with
``|a| <= k``, densely in graded-lex order.  Coefficients are
Taylor-normalized: the entry for ``a`` is the derivative divided by ``a!``.
Multiplication is then a plain truncated convolution, and
:func:`extract_derivative` rescales on the way out.

The convolution runs over a pair table precomputed once per (n, k) and
shared by every value of that shape (see :class:`Context`); the tables are
immutable after construction, so values can be used freely from multiple
threads.
"""

import math

import numpy as np

from . import multiindex


class SeriesDomainError(ArithmeticError):
    """A series operation left its domain (division by a series with zero
    constant term, log/sqrt of a non-positive constant term, ...)."""


class Context:
    """
    Precomputed index tables for shape (n, k).

    Attributes
    ----------
    indices : list of multi-index
        Graded-lex enumeration of {a : |a| <= k}.
    pos : dict
        Inverse of `indices`.
    ncoef : int
        C(n+k, n).
    pair_i, pair_j, pair_t : ndarray of int
        The multiplication table: coefficient i times coefficient j
        accumulates into coefficient t, listed for every pair with
        |a_i| + |a_j| <= k.
    factorials : ndarray
        a! per index, for derivative extraction.
    """

    def __init__(self, n, k):
        self.n = n
        self.k = k
        self.indices = multiindex.enumerate_upto(n, k)
        self.pos = {a: i for i, a in enumerate(self.indices)}
        self.ncoef = len(self.indices)
        self.orders = np.array([sum(a) for a in self.indices], dtype=np.int64)
        pi, pj, pt = [], [], []
        for i, a in enumerate(self.indices):
            oa = sum(a)
            for j, b in enumerate(self.indices):
                if oa + sum(b) <= k:
                    pi.append(i)
                    pj.append(j)
                    pt.append(self.pos[multiindex.add(a, b)])
        self.pair_i = np.array(pi, dtype=np.intp)
        self.pair_j = np.array(pj, dtype=np.intp)
        self.pair_t = np.array(pt, dtype=np.intp)
        self.factorials = np.array(
            [multiindex.factorial(a) for a in self.indices], dtype=float
        )


_CONTEXTS = {}


def context(n, k):
    """Shared Context for shape (n, k); built once, then reused."""
    key = (n, k)
    ctx = _CONTEXTS.get(key)
    if ctx is None:
        ctx = _CONTEXTS[key] = Context(n, k)
    return ctx


class TaylorValue:
    """
    Order-k truncated Taylor expansion in n variables.

    Supports +, -, *, / with other values of the same shape and with plain
    numbers, unary -, and integer powers >= 0.  Values are immutable by
    convention: operations return fresh instances.
    """

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx, coeffs):
        self.ctx = ctx
        self.coeffs = coeffs

    @property
    def n(self):
        return self.ctx.n

    @property
    def k(self):
        return self.ctx.k

    @property
    def const(self):
        """Constant term (the value of the expansion at its base point)."""
        return float(self.coeffs[0])

    def copy(self):
        return TaylorValue(self.ctx, self.coeffs.copy())

    def __repr__(self):
        return f"TaylorValue(n={self.n}, k={self.k}, coeffs={self.coeffs!r})"

    # -- ring operations ------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TaylorValue):
            if other.ctx is not self.ctx and (other.n, other.k) != (self.n, self.k):
                raise ValueError(
                    f"shape mismatch: (n={self.n},k={self.k}) vs (n={other.n},k={other.k})"
                )
            return other
        return constant(float(other), self.n, self.k)

    def __add__(self, other):
        if isinstance(other, (int, float)):
            out = self.coeffs.copy()
            out[0] += other
            return TaylorValue(self.ctx, out)
        other = self._coerce(other)
        return TaylorValue(self.ctx, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            out = self.coeffs.copy()
            out[0] -= other
            return TaylorValue(self.ctx, out)
        other = self._coerce(other)
        return TaylorValue(self.ctx, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return TaylorValue(self.ctx, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return TaylorValue(self.ctx, self.coeffs * float(other))
        other = self._coerce(other)
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return TaylorValue(self.ctx, self.coeffs / float(other))
        other = self._coerce(other)
        return div(self, other)

    def __rtruediv__(self, other):
        return constant(float(other), self.n, self.k) / self

    def __pow__(self, e):
        return pow_int(self, e)


# -- constructors -------------------------------------------------------


def constant(c, n, k):
    """The constant series c."""
    ctx = context(n, k)
    coeffs = np.zeros(ctx.ncoef)
    coeffs[0] = c
    return TaylorValue(ctx, coeffs)


def seed_variable(x0, i, n, k):
    """
    The coordinate function x_i expanded at the point x0.

    Constant term x0[i], coefficient 1 at the unit index e_i, zero
    elsewhere (for k = 0 the linear term is truncated away).
    """
    if not 0 <= i < n:
        raise IndexError(f"coordinate index {i} out of range for dimension {n}")
    ctx = context(n, k)
    coeffs = np.zeros(ctx.ncoef)
    coeffs[0] = x0[i]
    if k >= 1:
        e_i = tuple(1 if j == i else 0 for j in range(n))
        coeffs[ctx.pos[e_i]] = 1.0
    return TaylorValue(ctx, coeffs)


def seeds(x0, k):
    """All n coordinate seeds at x0 — the usual starting point of an evaluation."""
    n = len(x0)
    return [seed_variable(x0, i, n, k) for i in range(n)]


# -- ring operations ----------------------------------------------------


def add(a, b):
    return a + b


def sub(a, b):
    return a - b


def mul(a, b):
    """Truncated product via the precomputed pair table."""
    ctx = a.ctx
    prod = a.coeffs[ctx.pair_i] * b.coeffs[ctx.pair_j]
    out = np.bincount(ctx.pair_t, weights=prod, minlength=ctx.ncoef)
    return TaylorValue(ctx, out)


def div(a, b):
    """a / b; the series b must have a nonzero constant term."""
    return mul(a, _reciprocal(b))


def pow_int(a, e):
    """a**e for integer e >= 0 by repeated multiplication."""
    if not isinstance(e, (int, np.integer)):
        raise TypeError("exponent must be an integer")
    if e < 0:
        raise ValueError("exponent must be >= 0")
    out = constant(1.0, a.n, a.k)
    for _ in range(int(e)):
        out = mul(out, a)
    return out


# -- univariate composition ---------------------------------------------
#
# Every elementary function f is applied through the same route: write
# a = a0 + w with w the zero-constant part, take the order-k univariate
# Taylor coefficients of f at a0, and substitute w by Horner.  Truncation
# makes this exact for the stored orders.


def _compose_univariate(outer_coeffs, a):
    w = a.copy()
    w.coeffs[0] = 0.0
    out = constant(outer_coeffs[a.k], a.n, a.k)
    for i in range(a.k - 1, -1, -1):
        out = mul(out, w)
        out.coeffs[0] += outer_coeffs[i]
    return out


def _reciprocal(b):
    b0 = b.const
    if b0 == 0.0:
        raise SeriesDomainError("division by a series with zero constant term")
    c = [(-1.0) ** i / b0 ** (i + 1) for i in range(b.k + 1)]
    return _compose_univariate(c, b)


def exp(a):
    e0 = math.exp(a.const)
    c = [e0 / math.factorial(i) for i in range(a.k + 1)]
    return _compose_univariate(c, a)


def sin(a):
    a0 = a.const
    c = [math.sin(a0 + i * math.pi / 2) / math.factorial(i) for i in range(a.k + 1)]
    return _compose_univariate(c, a)


def cos(a):
    a0 = a.const
    c = [math.cos(a0 + i * math.pi / 2) / math.factorial(i) for i in range(a.k + 1)]
    return _compose_univariate(c, a)


def ln(a):
    a0 = a.const
    if a0 <= 0.0:
        raise SeriesDomainError(f"ln of series with constant term {a0} <= 0")
    c = [math.log(a0)]
    for i in range(1, a.k + 1):
        c.append((-1.0) ** (i + 1) / (i * a0**i))
    return _compose_univariate(c, a)


def sqrt(a):
    a0 = a.const
    if a0 <= 0.0:
        raise SeriesDomainError(f"sqrt of series with constant term {a0} <= 0")
    # binomial series sqrt(a0 + h) = sqrt(a0) * sum C(1/2, i) (h/a0)^i
    r = math.sqrt(a0)
    c = [r]
    coef = 1.0
    for i in range(1, a.k + 1):
        coef *= (0.5 - (i - 1)) / i
        c.append(r * coef / a0**i)
    return _compose_univariate(c, a)


_ELEMENTARY = {
    "exp": exp,
    "sin": sin,
    "cos": cos,
    "ln": ln,
    "sqrt": sqrt,
}


def elementary(fname, a):
    """Apply one of exp/sin/cos/ln/sqrt (or pow_int via a pair) by name."""
    try:
        f = _ELEMENTARY[fname]
    except KeyError:
        raise ValueError(f"unknown elementary function {fname!r}") from None
    return f(a)


# -- extraction ----------------------------------------------------------


def extract_derivative(a, alpha):
    """
    The mixed partial derivative for multi-index alpha: alpha! times the
    stored coefficient.
    """
    alpha = tuple(alpha)
    if sum(alpha) > a.k:
        raise ValueError(f"|{alpha}| exceeds truncation order {a.k}")
    return float(a.coeffs[a.ctx.pos[alpha]]) * multiindex.factorial(alpha)


def derivatives(a):
    """All derivatives as an array in graded-lex order (coefficients times a!)."""
    return a.coeffs * a.ctx.factorials


# -- polynomial/composition helpers --------------------------------------


def monomial_products(factors, degree):
    """
    All truncated products factors[0]^a_0 * ... * factors[-1]^a_{s-1} for
    multi-indices a of total order <= degree, as a dict a -> TaylorValue.

    Each product is obtained from a previously computed one by a single
    multiplication, so the whole table costs one mul per index.  Used to
    expand explicit polynomials (anchored Taylor polynomials of a jet) and
    to compose an outer expansion with inner series.
    """
    s = len(factors)
    ctx = factors[0].ctx
    table = {(0,) * s: constant(1.0, ctx.n, ctx.k)}
    for a in multiindex.enumerate_upto(s, degree):
        if a in table:
            continue
        j = next(i for i, e in enumerate(a) if e > 0)
        prev = tuple(e - 1 if i == j else e for i, e in enumerate(a))
        table[a] = mul(table[prev], factors[j])
    return table


def compose(outer, inners):
    """
    Substitute inner series into an outer expansion.

    `outer` is a TaylorValue in s variables expanded at some base point p;
    `inners` are s TaylorValues (in a common shape) whose constant terms
    equal the coordinates of p shifted to zero — i.e. each inner must have
    constant term 0 and represents (g_i - p_i).  Returns the truncated
    expansion of outer ∘ (p + inners).
    """
    s = outer.n
    if len(inners) != s:
        raise ValueError(f"need {s} inner series, got {len(inners)}")
    for w in inners:
        if w.const != 0.0:
            raise ValueError("inner series must have zero constant term")
    table = monomial_products(inners, outer.k)
    ctx = inners[0].ctx
    out = np.zeros(ctx.ncoef)
    for a, c in zip(outer.ctx.indices, outer.coeffs):
        if c != 0.0:
            out += c * table[a].coeffs
    return TaylorValue(ctx, out)
