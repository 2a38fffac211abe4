"""Exact scalars: rationals, Q(zeta_m), polynomials, rational functions, matrices.

Rationals use ``gmpy2.mpq`` when it is importable and fall back to
``fractions.Fraction`` otherwise; the two hash and compare identically, so
callers never need to know which backend is active.  When ``python-flint``
is present, gcds of rational polynomials go through ``fmpq_poly``.
"""
from fractions import Fraction
from functools import lru_cache

from .errors import ContextError, DivisionByZero, ShapeError

try:
    from gmpy2 import mpq as Q
    BACKEND = "gmpy2"
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Q = Fraction
    BACKEND = "fractions"

try:
    import flint as _flint
except ImportError:  # pragma: no cover - optional accelerator
    _flint = None

_QTYPE = type(Q(0))
RATIONAL_TYPES = (int, Fraction, _QTYPE)
ZERO = Q(0)
ONE = Q(1)


def is_rational(a):
    return isinstance(a, RATIONAL_TYPES) and not isinstance(a, bool)


def qq(a):
    """Coerce ints, Fractions and rational strings to the rational backend."""
    if isinstance(a, _QTYPE):
        return a
    if isinstance(a, (int, Fraction)):
        return Q(a)
    if isinstance(a, str):
        try:
            return Q(Fraction(a.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {a!r}") from exc
    return a


def _norm(a):
    return Q(a) if type(a) is int else a


# ---------------------------------------------------------------------------
# cyclotomic field

@lru_cache(maxsize=None)
def cyclotomic(m):
    """Integer coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ContextError("cyclotomic order must be positive")
    p = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            q = cyclotomic(d)
            p = _int_exact_div(p, q)
    return tuple(p)


def _int_exact_div(a, b):
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1]
        out[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    assert not any(a[: len(b) - 1])
    return out


def euler_phi(m):
    return len(cyclotomic(m)) - 1


class CycScalar:
    """Residue of Q[t] modulo Phi_m(t); the class of t is zeta = exp(2 pi i/m)."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m, coeffs):
        phi = cyclotomic(m)
        d = len(phi) - 1
        c = [_norm(x) for x in coeffs]
        for i in range(len(c) - 1, d - 1, -1):
            top = c[i]
            if top:
                base = i - d
                for j in range(d):
                    if phi[j]:
                        c[base + j] -= top * phi[j]
        c = c[:d] + [ZERO] * (d - len(c))
        self.m = m
        self.coeffs = tuple(c)

    @classmethod
    def zeta(cls, m, power=1):
        power %= m
        return cls(m, [0] * power + [1])._collapse()

    def _collapse(self):
        if not any(self.coeffs[1:]):
            return self.coeffs[0] if self.coeffs else ZERO
        return self

    def is_constant(self):
        return not any(self.coeffs[1:])

    def _coerce(self, other):
        if isinstance(other, CycScalar):
            if other.m != self.m:
                raise ContextError(f"mixing Q(zeta_{self.m}) with Q(zeta_{other.m})")
            return other
        if is_rational(other):
            return CycScalar(self.m, [other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycScalar(self.m, [a + b for a, b in zip(self.coeffs, o.coeffs)])._collapse()

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(self.m, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycScalar(self.m, [a - b for a, b in zip(self.coeffs, o.coeffs)])._collapse()

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if is_rational(other):
            return CycScalar(self.m, [a * other for a in self.coeffs])._collapse()
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prod = [ZERO] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CycScalar(self.m, prod)._collapse()

    __rmul__ = __mul__

    def inverse(self):
        if not any(self.coeffs):
            raise DivisionByZero("inverse of zero in Q(zeta)")
        if self.is_constant():
            return ONE / self.coeffs[0]
        g, s, _ = Poly(self.coeffs).xgcd(Poly(cyclotomic(self.m)))
        # g is a nonzero constant since Phi_m is irreducible
        return CycScalar(self.m, (s * (ONE / g.c[0])).c)._collapse()

    def __truediv__(self, other):
        if is_rational(other):
            if other == 0:
                raise DivisionByZero("division by zero")
            return CycScalar(self.m, [a / other for a in self.coeffs])._collapse()
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return inv(self) ** (-e)
        result, base = ONE, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, CycScalar):
            return self.m == other.m and self.coeffs == other.coeffs
        if is_rational(other):
            return self.is_constant() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.coeffs[0])
        return hash((self.m, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"CycScalar({self.m}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) + ("" if i == 0 else "*z" if i == 1 else f"*z^{i}"))
        return "(" + " + ".join(terms or ["0"]) + ")"


def zeta(m, power=1):
    return CycScalar.zeta(m, power)


def inv(a):
    if isinstance(a, CycScalar):
        return a.inverse()
    if a == 0:
        raise DivisionByZero("inverse of zero")
    return ONE / a


def scalar_to_json(a):
    if isinstance(a, CycScalar):
        return [str(c) for c in a.coeffs]
    return str(a)


def scalar_from_json(obj, m=1):
    if isinstance(obj, list):
        return CycScalar(m, [qq(s) for s in obj])._collapse()
    if isinstance(obj, (int, str, Fraction)):
        return qq(obj)
    raise ValueError(f"cannot parse scalar {obj!r}")


# ---------------------------------------------------------------------------
# univariate polynomials

def _flint_poly(p):
    return _flint.fmpq_poly([_flint.fmpq(int(x.numerator), int(x.denominator)) for x in p.c])


class Poly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = [_norm(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def _raw(cls, c):
        p = cls.__new__(cls)
        p.c = c
        return p

    @classmethod
    def monomial(cls, k, coeff=ONE):
        return cls([ZERO] * k + [coeff])

    @classmethod
    def const(cls, a):
        return cls([a])

    @property
    def deg(self):
        return len(self.c) - 1

    @property
    def lc(self):
        return self.c[-1] if self.c else ZERO

    def __bool__(self):
        return bool(self.c)

    def is_const(self):
        return len(self.c) <= 1

    def __getitem__(self, k):
        return self.c[k] if 0 <= k < len(self.c) else ZERO

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c
        if is_rational(other) or isinstance(other, CycScalar):
            return self.c == Poly([other]).c
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = out[i] + x
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(tuple(-x for x in self.c))

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return self + (-other)

    def __rsub__(self, other):
        return Poly([other]) - self

    def scale(self, s):
        if not s:
            return Poly()
        return Poly([x * s for x in self.c])

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        a, b = self.c, other.c
        if not a or not b:
            return Poly()
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return Poly(out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e):
        result, base = Poly([ONE]), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def shift(self, k):
        """Multiply by t^k (k may be negative if the low coefficients vanish)."""
        if not self.c:
            return self
        if k >= 0:
            return Poly._raw((ZERO,) * k + self.c)
        if any(self.c[:-k]):
            raise ValueError("negative shift would drop nonzero terms")
        return Poly(self.c[-k:])

    def divmod(self, other):
        if not other.c:
            raise DivisionByZero("polynomial division by zero")
        r = list(self.c)
        d = other.deg
        if len(r) - 1 < d:
            return Poly(), self
        lc_inv = inv(other.lc)
        q = [ZERO] * (len(r) - d)
        oc = other.c
        for i in range(len(r) - 1 - d, -1, -1):
            t = r[i + d]
            if t:
                t = t * lc_inv
                q[i] = t
                for j in range(d + 1):
                    if oc[j]:
                        r[i + j] -= t * oc[j]
        return Poly(q), Poly(r[:d])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        if not self.c or self.c[-1] == 1:
            return self
        return self.scale(inv(self.c[-1]))

    def gcd(self, other):
        if _flint is not None and all(type(x) is _QTYPE for x in self.c + other.c):
            return _from_flint(_flint_poly(self).gcd(_flint_poly(other)))
        # monic remainder sequence; raw Euclid over Q swells coefficients
        a, b = self.monic(), other.monic()
        while b:
            a, b = b, (a % b).monic()
        return a

    def xgcd(self, other):
        """Return (g, s, t) with s*self + t*other = g (g not normalized)."""
        r0, r1 = self, other
        s0, s1 = Poly([ONE]), Poly()
        t0, t1 = Poly(), Poly([ONE])
        while r1:
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        return r0, s0, t0

    def __call__(self, v):
        acc = None
        for x in reversed(self.c):
            acc = x if acc is None else acc * v + x
        return ZERO if acc is None else acc

    def compose_scale(self, z):
        """Coefficients of p(z*t)."""
        out, zk = [], ONE
        for x in self.c:
            out.append(x * zk)
            zk = zk * z
        return Poly(out)

    def sector(self, r, m):
        r %= m
        return Poly([x if i % m == r else ZERO for i, x in enumerate(self.c)])

    def residues(self, m):
        return {i % m for i, x in enumerate(self.c) if x}

    def valuation(self):
        for i, x in enumerate(self.c):
            if x:
                return i
        return None

    def to_str(self, var="x"):
        if not self.c:
            return "0"
        parts = []
        for i in range(len(self.c) - 1, -1, -1):
            x = self.c[i]
            if not x:
                continue
            mono = "" if i == 0 else var if i == 1 else f"{var}^{i}"
            if not mono:
                parts.append(str(x))
            elif x == 1:
                parts.append(mono)
            elif x == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{x}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({self.to_str('t')})"


POLY_ONE = Poly([ONE])


# ---------------------------------------------------------------------------
# rational functions

def _from_flint(f):
    return Poly._raw(tuple(Q(int(x.p), int(x.q)) for x in f.coeffs()))


def _all_q(*fs):
    return all(type(x) is _QTYPE for f in fs for x in f.num.c + f.den.c)


def _flint_ratfunc(n, d, var):
    if n.is_zero():
        return RatFunc._raw(Poly(), POLY_ONE, var)
    g = n.gcd(d)
    if g.degree() > 0:
        n, d = n // g, d // g
    lc = d[d.degree()]
    if lc != 1:
        n, d = n / lc, d / lc
    return RatFunc._raw(_from_flint(n), _from_flint(d), var)


class RatFunc:
    """num/den in one variable, reduced, with monic denominator."""

    __slots__ = ("num", "den", "var")

    def __init__(self, num, den=None, var="x", reduce=True):
        if not isinstance(num, Poly):
            num = Poly([num])
        if den is None:
            den = POLY_ONE
        elif not isinstance(den, Poly):
            den = Poly([den])
        if not den:
            raise DivisionByZero("rational function with zero denominator")
        if not num:
            den = POLY_ONE
        elif reduce and den.deg > 0:
            g = num.gcd(den)
            if g.deg > 0:
                num, den = num // g, den // g
        if den.lc != 1:
            s = inv(den.lc)
            num, den = num.scale(s), den.scale(s)
        self.num, self.den, self.var = num, den, var

    @classmethod
    def _raw(cls, num, den, var):
        f = cls.__new__(cls)
        f.num, f.den, f.var = num, den, var
        return f

    @classmethod
    def poly(cls, p, var="x"):
        if not isinstance(p, Poly):
            p = Poly([p])
        return cls._raw(p, POLY_ONE, var)

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.var != self.var:
                raise ContextError(f"mixing C({self.var}) with C({other.var})")
            return other
        if isinstance(other, Poly):
            return RatFunc._raw(other, POLY_ONE, self.var)
        if is_rational(other) or isinstance(other, CycScalar):
            return RatFunc._raw(Poly([other]), POLY_ONE, self.var)
        return None

    def __bool__(self):
        return bool(self.num)

    def is_poly(self):
        return self.den.deg == 0

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, RatFunc) else other
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            if self.den.deg == 0:
                return RatFunc._raw(self.num + o.num, POLY_ONE, self.var)
            return RatFunc(self.num + o.num, self.den, self.var)
        if _flint is not None and _all_q(self, o):
            a, b, c, d = (_flint_poly(t) for t in (self.num, self.den, o.num, o.den))
            return _flint_ratfunc(a * d + c * b, b * d, self.var)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den, self.var)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den, self.var)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if is_rational(other) or isinstance(other, CycScalar):
            if not other:
                return RatFunc._raw(Poly(), POLY_ONE, self.var)
            return RatFunc._raw(self.num.scale(other), self.den, self.var)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.num or not o.num:
            return RatFunc._raw(Poly(), POLY_ONE, self.var)
        if self.den.deg == 0 and o.den.deg == 0:
            return RatFunc._raw(self.num * o.num, POLY_ONE, self.var)
        if _flint is not None and _all_q(self, o):
            a, b, c, d = (_flint_poly(t) for t in (self.num, self.den, o.num, o.den))
            return _flint_ratfunc(a * c, b * d, self.var)
        return RatFunc(self.num * o.num, self.den * o.den, self.var)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise DivisionByZero("inverse of zero rational function")
        return RatFunc(self.den, self.num, self.var, reduce=False)

    def __truediv__(self, other):
        if is_rational(other) or isinstance(other, CycScalar):
            return self * inv(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc._raw(self.num ** e, self.den ** e, self.var)

    def __call__(self, v):
        return self.num(v) / self.den(v)

    def compose_scale(self, z):
        return RatFunc(self.num.compose_scale(z), self.den.compose_scale(z), self.var)

    def degree(self):
        """deg num - deg den (None for zero)."""
        if not self.num:
            return None
        return self.num.deg - self.den.deg

    def poly_part(self):
        q, r = self.num.divmod(self.den)
        return q, RatFunc(r, self.den, self.var)

    def laurent_inf(self, lowest):
        """Expansion at infinity: {k: c_k} for lowest <= k <= degree."""
        if not self.num:
            return {}
        d = self.den.deg
        top = self.num.deg - d
        rem = dict(enumerate(self.num.c))
        out = {}
        dc = self.den.c
        for k in range(top, lowest - 1, -1):
            t = rem.pop(k + d, ZERO)
            if t:
                out[k] = t
                for j in range(d):
                    if dc[j]:
                        rem[k + j] = rem.get(k + j, ZERO) - t * dc[j]
        return out

    def to_str(self):
        n = self.num.to_str(self.var)
        if self.den.deg == 0:
            return n
        return f"({n})/({self.den.to_str(self.var)})"

    def __repr__(self):
        return f"RatFunc({self.to_str()})"


def poly_part(f):
    return f.poly_part()


@lru_cache(maxsize=4096)
def _norm_cofactor(den, m):
    """prod_{j=1}^{m-1} den(zeta^j t); den times this lies in K[t^m]."""
    out = POLY_ONE
    for j in range(1, m):
        out = out * den.compose_scale(zeta(m, j))
    return out


def sector_project(f, r, m):
    """Keep the t^k terms of f with k = r (mod m)."""
    if m == 1:
        return f
    r %= m
    den = f.den
    res = den.residues(m)
    if len(res) == 1:
        s = next(iter(res))
        return RatFunc(f.num.sector(r + s, m), den, f.var)
    cof = _norm_cofactor(den, m)
    return RatFunc((f.num * cof).sector(r, m), den * cof, f.var)


def sector_project_oracle(f, r, m):
    """(1/m) sum_j zeta^{-jr} f(zeta^j t), evaluated literally."""
    acc = RatFunc(Poly(), None, f.var)
    for j in range(m):
        acc = acc + f.compose_scale(zeta(m, j)) * zeta(m, -j * r)
    return acc * Q(1, m)


def sector_pure_residue(p, m):
    """Residue s if all exponents of p are = s (mod m), else None."""
    res = p.residues(m)
    return next(iter(res)) if len(res) == 1 else None


# ---------------------------------------------------------------------------
# dense exact matrices

class Matrix:
    """Immutable dense matrix over any exact field."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols=None):
        rows = tuple(tuple(_norm(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ShapeError("ragged matrix rows")
        self.rows, self.nrows, self.ncols = rows, len(rows), ncols

    @classmethod
    def zeros(cls, r, c):
        return cls([[ZERO] * c for _ in range(r)], c)

    @classmethod
    def identity(cls, n):
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n)

    @classmethod
    def column(cls, v):
        return cls([[x] for x in v], 1)

    @classmethod
    def row(cls, v):
        return cls([list(v)], len(v))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j):
        return [r[j] for r in self.rows]

    def flat(self):
        return [x for r in self.rows for x in r]

    def is_zero(self):
        return not any(x for r in self.rows for x in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other):
        self._check_same(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, s):
        return Matrix([[a * s for a in r] for r in self.rows], self.ncols)

    def __mul__(self, s):
        if isinstance(s, Matrix):
            return self @ s
        return self.scale(s)

    __rmul__ = scale

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            row = []
            for c in cols:
                acc = ZERO
                for k, a in nz:
                    b = c[k]
                    if b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix(out, other.ncols)

    @property
    def T(self):
        return Matrix([list(c) for c in zip(*self.rows)] if self.nrows else [], self.nrows)

    def trace(self):
        self._square()
        acc = ZERO
        for i in range(self.nrows):
            acc = acc + self.rows[i][i]
        return acc

    def _square(self):
        if self.nrows != self.ncols:
            raise ShapeError("square matrix required")

    def __pow__(self, e):
        self._square()
        result, base = Matrix.identity(self.nrows), self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def submatrix(self, rows, cols):
        return Matrix([[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ShapeError("hstack row mismatch")
        return Matrix([a + b for a, b in zip(self.rows, other.rows)], self.ncols + other.ncols)

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise ShapeError("vstack column mismatch")
        return Matrix(self.rows + other.rows, self.ncols)

    def rref(self):
        """Reduced row echelon form and pivot columns."""
        a = [list(r) for r in self.rows]
        pivots = []
        prow = 0
        for c in range(self.ncols):
            piv = next((i for i in range(prow, self.nrows) if a[i][c]), None)
            if piv is None:
                continue
            a[prow], a[piv] = a[piv], a[prow]
            s = inv(a[prow][c])
            a[prow] = [x * s for x in a[prow]]
            for i in range(self.nrows):
                if i != prow and a[i][c]:
                    f = a[i][c]
                    ar = a[prow]
                    a[i] = [x - f * y if y else x for x, y in zip(a[i], ar)]
            pivots.append(c)
            prow += 1
            if prow == self.nrows:
                break
        return Matrix(a, self.ncols), pivots

    def rank(self):
        return len(self.rref()[1])

    def nullspace(self):
        """Basis of {v : A v = 0} as a list of column lists."""
        r, pivots = self.rref()
        free = [c for c in range(self.ncols) if c not in pivots]
        basis = []
        for f in free:
            v = [ZERO] * self.ncols
            v[f] = ONE
            for i, p in enumerate(pivots):
                v[p] = -r.rows[i][f]
            basis.append(v)
        return basis

    def solve(self, b):
        """One solution x of A x = b (b a Matrix), or None if inconsistent."""
        if b.nrows != self.nrows:
            raise ShapeError("right-hand side row mismatch")
        aug = self.hstack(b)
        r, pivots = aug.rref()
        if any(p >= self.ncols for p in pivots):
            return None
        x = [[ZERO] * b.ncols for _ in range(self.ncols)]
        for i, p in enumerate(pivots):
            x[p] = list(r.rows[i][self.ncols:])
        return Matrix(x, b.ncols)

    def det(self):
        self._square()
        n = self.nrows
        a = [list(r) for r in self.rows]
        d = ONE
        for c in range(n):
            piv = next((i for i in range(c, n) if a[i][c]), None)
            if piv is None:
                return ZERO
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                d = -d
            p = a[c][c]
            d = d * p
            pi = inv(p)
            for i in range(c + 1, n):
                if a[i][c]:
                    f = a[i][c] * pi
                    a[i] = [x - f * y if y else x for x, y in zip(a[i], a[c])]
        return d

    def inverse(self):
        self._square()
        r = self.solve(Matrix.identity(self.nrows))
        if r is None or self.rank() < self.nrows:
            raise DivisionByZero("singular matrix")
        return r

    def charpoly(self):
        """Monic det(tI - A) via Faddeev-LeVerrier."""
        self._square()
        n = self.nrows
        coeffs = [ONE]  # c_0 = 1, c_1, ..., c_n in t^n + c_1 t^{n-1} + ...
        mk = Matrix.zeros(n, n)
        ident = Matrix.identity(n)
        for k in range(1, n + 1):
            mk = self @ mk + ident.scale(coeffs[-1])
            coeffs.append(-(self @ mk).trace() / k)
        return Poly(list(reversed(coeffs)))

    def adjugate(self):
        self._square()
        n = self.nrows
        if n == 0:
            return Matrix.zeros(0, 0)
        blocks, cp = resolvent_coeffs(self)
        adj = blocks[-1]  # coefficient of t^0 in adj(tI - A) = adj(-A)
        return adj if n % 2 == 1 else -adj


def resolvent_coeffs(a):
    """Matrices B_k with adj(tI - A) = sum_k t^{N-1-k} B_k, plus charpoly."""
    n = a.nrows
    cp = a.charpoly()
    c = list(reversed(cp.c))  # c[0] = 1
    blocks = []
    acc = Matrix.zeros(n, n)
    ident = Matrix.identity(n)
    for k in range(n):
        acc = (a @ acc if k else acc) + ident.scale(c[k])
        blocks.append(acc)
    return blocks, cp


def poly_of_matrix(p, a):
    acc = Matrix.zeros(a.nrows, a.ncols)
    ident = Matrix.identity(a.nrows)
    for x in reversed(p.c):
        acc = a @ acc + ident.scale(x)
    return acc
