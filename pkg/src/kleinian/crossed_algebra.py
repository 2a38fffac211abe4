"""PBW arithmetic in B^tau = C<x,y> * Z_m / (xy - yx - tau).

Group-algebra elements live in the idempotent basis e_0, ..., e_{m-1} and are
stored as plain tuples of length m.  The shift law is

    e_i x = x e_{i-1},    e_i y = y e_{i+1}.

Elements of B^tau are stored as {(k, l): comps} meaning sum x^k y^l c_kl.
"""
import re
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import ContextError, ParseError, ShapeError
from .scalars import (
    CycScalar, Matrix, ONE, ZERO, is_rational, qq, scalar_from_json, scalar_to_json,
)


@dataclass(frozen=True)
class AlgebraContext:
    m: int
    tau: tuple
    genericity_bound: int = field(default=16, compare=False)

    def __post_init__(self):
        if self.m < 1:
            raise ContextError("group order must be positive")
        tau = tuple(qq(t) for t in self.tau)
        if len(tau) != self.m:
            raise ContextError(f"tau needs {self.m} components, got {len(tau)}")
        object.__setattr__(self, "tau", tau)

    @classmethod
    def uniform(cls, m, value=1):
        return cls(m, (qq(value),) * m)

    def t(self, i):
        return self.tau[i % self.m]

    def tau_sum(self, c, l):
        """S(c, l): sum_{s=0}^{l-1} tau_{c+s} for l > 0, -sum_{s=1}^{-l} tau_{c-s} for l < 0."""
        return _tau_sum(self, c % self.m, l)

    # element constructors
    def zero(self):
        return AlgElem(self, {})

    def one(self):
        return AlgElem(self, {(0, 0): (ONE,) * self.m})

    def x(self):
        return AlgElem(self, {(1, 0): (ONE,) * self.m})

    def y(self):
        return AlgElem(self, {(0, 1): (ONE,) * self.m})

    def e(self, i):
        return AlgElem(self, {(0, 0): _unit(self.m, i)})

    def group(self, comps):
        return AlgElem(self, {(0, 0): tuple(comps)})

    def tau_elem(self):
        return self.group(self.tau)

    def monomial(self, k, l, i=None, coeff=ONE):
        comps = (coeff,) * self.m if i is None else tuple(coeff if j == i % self.m else ZERO for j in range(self.m))
        return AlgElem(self, {(k, l): comps})

    def to_json(self):
        return {"m": self.m, "tau": [scalar_to_json(t) for t in self.tau]}


@lru_cache(maxsize=None)
def _tau_sum(ctx, c, l):
    m = ctx.m
    if l >= 0:
        acc = ZERO
        for s in range(l):
            acc = acc + ctx.tau[(c + s) % m]
        return acc
    acc = ZERO
    for s in range(1, -l + 1):
        acc = acc - ctx.tau[(c - s) % m]
    return acc


def _unit(m, i):
    i %= m
    return tuple(ONE if j == i else ZERO for j in range(m))


def _shift(comps, k):
    """comps -> comps' with comps'[j] = comps[j + k]."""
    m = len(comps)
    k %= m
    if not k:
        return comps
    return comps[k:] + comps[:k]


def _nonzero(comps):
    return any(comps)


class AlgElem:
    """Element of B^tau in PBW normal form sum x^k y^l c_kl."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        self.terms = {kl: c for kl, c in terms.items() if _nonzero(c)}

    def _check(self, other):
        if not isinstance(other, AlgElem):
            return False
        if other.ctx != self.ctx:
            raise ContextError("elements from different algebra contexts")
        return True

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, AlgElem):
            return self.ctx == other.ctx and self.terms == other.terms
        if is_rational(other) or isinstance(other, CycScalar):
            return self == self.ctx.one() * other
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not self._check(other):
            if is_rational(other) or isinstance(other, CycScalar):
                other = self.ctx.one() * other
            else:
                return NotImplemented
        out = dict(self.terms)
        for kl, c in other.terms.items():
            if kl in out:
                out[kl] = tuple(a + b for a, b in zip(out[kl], c))
            else:
                out[kl] = c
        return AlgElem(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgElem(self.ctx, {kl: tuple(-a for a in c) for kl, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s):
        return AlgElem(self.ctx, {kl: tuple(a * s for a in c) for kl, c in self.terms.items()})

    def __mul__(self, other):
        if is_rational(other) or isinstance(other, CycScalar):
            return self.scale(other)
        if not self._check(other):
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other):
        if is_rational(other) or isinstance(other, CycScalar):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e):
        out = self.ctx.one()
        for _ in range(e):
            out = out * self
        return out

    # right multiplication by generators
    def rmul_x(self):
        ctx = self.ctx
        out = {}
        for (k, l), c in self.terms.items():
            c2 = _shift(c, 1)
            _acc(out, (k + 1, l), c2)
            if l:
                sig = tuple(-ctx.tau_sum(j - l + 1, l) * c2[j] for j in range(ctx.m))
                _acc(out, (k, l - 1), sig)
        return AlgElem(ctx, out)

    def rmul_y(self):
        return AlgElem(self.ctx, {(k, l + 1): _shift(c, -1) for (k, l), c in self.terms.items()})

    def rmul_group(self, comps):
        return AlgElem(self.ctx, {kl: tuple(a * b for a, b in zip(c, comps)) for kl, c in self.terms.items()})

    def lmul_idem(self, n):
        """e_n * self: e_n x^k y^l = x^k y^l e_{n-k+l}."""
        m = self.ctx.m
        out = {}
        for (k, l), c in self.terms.items():
            i = (n - k + l) % m
            if c[i]:
                out[(k, l)] = tuple(c[i] if j == i else ZERO for j in range(m))
        return AlgElem(self.ctx, out)

    def monomials(self):
        """Yield (k, l, i, coeff) for nonzero coefficients of x^k y^l e_i."""
        for (k, l), c in sorted(self.terms.items()):
            for i, a in enumerate(c):
                if a:
                    yield k, l, i, a

    def degree(self, w=(1, 1)):
        if not self.terms:
            return None
        return max(k * w[0] + l * w[1] for k, l in self.terms)

    def __repr__(self):
        return f"AlgElem({self})"

    def __str__(self):
        return render(self)


def _acc(out, kl, c):
    if kl in out:
        out[kl] = tuple(a + b for a, b in zip(out[kl], c))
    else:
        out[kl] = c


def multiply(a, b):
    if a.ctx != b.ctx:
        raise ContextError("elements from different algebra contexts")
    ctx = a.ctx
    result = {}
    by_k = {}
    for (k, l), c in b.terms.items():
        by_k.setdefault(k, []).append((l, c))
    cur = a
    for k in range(max(by_k, default=-1) + 1):
        if k:
            cur = cur.rmul_x()
        for l, c in by_k.get(k, ()):
            t = cur
            for _ in range(l):
                t = t.rmul_y()
            for kl, cc in t.rmul_group(c).terms.items():
                _acc(result, kl, cc)
    return AlgElem(ctx, result)


def y_power_past_x(ctx, l, left_idem=None):
    """Normal form of y^l x (or e_i y^l x): x y^l - y^{l-1} sigma_l."""
    a = ctx.y() ** l
    if left_idem is not None:
        a = ctx.e(left_idem) * a
    return a * ctx.x()


def gr_w_leading(a, w):
    w1, w2 = w
    if w1 < 0 or w2 < 0 or (w1 == 0 and w2 == 0):
        raise ValueError("weights must be nonnegative and not both zero")
    d = a.degree(w)
    if d is None:
        return a
    return AlgElem(a.ctx, {(k, l): c for (k, l), c in a.terms.items() if k * w1 + l * w2 == d})


def is_generic(ctx):
    """Bounded root-hyperplane test."""
    m = ctx.m
    total = sum(ctx.tau, ZERO)
    if total == 0:
        return False
    bound = ctx.genericity_bound
    for start in range(m):
        s = ZERO
        for length in range(1, m):
            s = s + ctx.t(start + length - 1)
            for k in range(-bound, bound + 1):
                if s + total * k == 0:
                    return False
    return True


# ---------------------------------------------------------------------------
# text rendering and parsing

def _coeff_str(a):
    s = str(a)
    return s


def render(a):
    if not a.terms:
        return "0"
    parts = []
    for k, l, i, c in a.monomials():
        mono = []
        if k:
            mono.append("x" if k == 1 else f"x^{k}")
        if l:
            mono.append("y" if l == 1 else f"y^{l}")
        mono.append(f"e{i}")
        body = " ".join(mono)
        if c == 1:
            parts.append(("+", body))
        elif c == -1:
            parts.append(("-", body))
        elif is_rational(c) and c < 0:
            parts.append(("-", f"{-c} {body}"))
        else:
            parts.append(("+", f"{_coeff_str(c)} {body}"))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TOKEN = re.compile(r"\s*(\([^()]*\)|[+-]|x(?:\^\d+)?|y(?:\^\d+)?|e\d+|\d+(?:/\d+)?|\*)")
_CYC = re.compile(r"^\s*([+-]?\s*\d+(?:/\d+)?)(?:\*z(?:\^(\d+))?)?\s*$")


def _parse_cyc(text, m):
    body = text.strip()[1:-1]
    coeffs = {}
    for piece in re.split(r"\s+(?=[+-])", body.replace("+ -", "- ").strip()):
        piece = piece.replace(" ", "")
        if piece.startswith("+"):
            piece = piece[1:]
        mt = re.fullmatch(r"(-?\d+(?:/\d+)?)(\*z(?:\^(\d+))?)?", piece)
        if not mt:
            raise ParseError(f"bad cyclotomic coefficient {text!r}")
        power = 0 if not mt.group(2) else int(mt.group(3) or 1)
        coeffs[power] = coeffs.get(power, ZERO) + qq(mt.group(1))
    size = max(coeffs, default=0) + 1
    return CycScalar(m, [coeffs.get(i, ZERO) for i in range(size)])._collapse()


def parse(text, ctx):
    """Inverse of render; accepts sums of c x^k y^l e_i terms."""
    pos, tokens = 0, []
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ParseError(f"cannot parse algebra element near {text[pos:]!r}")
        tokens.append(mt.group(1))
        pos = mt.end()
    if tokens == ["0"]:
        return ctx.zero()
    result = ctx.zero()
    sign, coeff, k, l, idem, seen = ONE, None, 0, 0, None, False

    def flush():
        nonlocal result
        if not seen:
            raise ParseError(f"empty term in {text!r}")
        c = sign * (coeff if coeff is not None else ONE)
        result = result + ctx.monomial(k, l, idem, c)

    for tok in tokens:
        if tok in "+-" and tok != "*":
            if seen:
                flush()
                sign, coeff, k, l, idem, seen = ONE, None, 0, 0, None, False
            if tok == "-":
                sign = -sign
        elif tok == "*":
            continue
        elif tok.startswith("("):
            coeff = _parse_cyc(tok, ctx.m)
            seen = True
        elif tok[0].isdigit():
            coeff = qq(tok)
            seen = True
        elif tok[0] == "x":
            k += int(tok[2:]) if "^" in tok else 1
            seen = True
        elif tok[0] == "y":
            l += int(tok[2:]) if "^" in tok else 1
            seen = True
        elif tok[0] == "e":
            idem = int(tok[1:])
            if idem >= ctx.m:
                raise ParseError(f"idempotent e{idem} out of range for m={ctx.m}")
            seen = True
    if seen:
        flush()
    return result


# ---------------------------------------------------------------------------
# free words in R

class FreeWord:
    """Formal sum of words over {X, Y, E_i}, with scalar prefactors; no rewriting."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        out = {}
        for letters, c in (terms or {}).items():
            if c:
                out[tuple(letters)] = out.get(tuple(letters), ZERO) + c
        self.terms = {w: c for w, c in out.items() if c}

    @classmethod
    def letter(cls, name):
        return cls({(name,): ONE})

    @classmethod
    def one(cls):
        return cls({(): ONE})

    @classmethod
    def scalar(cls, c):
        return cls({(): qq(c)})

    def __add__(self, other):
        if not isinstance(other, FreeWord):
            other = FreeWord.scalar(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, ZERO) + c
        return FreeWord(out)

    __radd__ = __add__

    def __neg__(self):
        return FreeWord({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, FreeWord):
            return FreeWord({w: c * other for w, c in self.terms.items()})
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, ZERO) + c1 * c2
        return FreeWord(out)

    def __rmul__(self, other):
        return FreeWord({w: c * other for w, c in self.terms.items()})

    def __pow__(self, e):
        out = FreeWord.one()
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, FreeWord) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def substitute(self, images):
        """Replace letters X, Y by the FreeWords in `images`; E letters are fixed."""
        out = FreeWord()
        for w, c in self.terms.items():
            acc = FreeWord.scalar(c)
            for a in w:
                acc = acc * images.get(a, FreeWord.letter(a))
            out = out + acc
        return out

    def to_algelem(self, ctx):
        out = ctx.zero()
        for w, c in self.terms.items():
            acc = ctx.one()
            for a in w:
                if a == "X":
                    acc = acc.rmul_x()
                elif a == "Y":
                    acc = acc.rmul_y()
                else:
                    acc = acc.rmul_group(_unit(ctx.m, int(a[1:])))
            out = out + acc.scale(c)
        return out

    def __repr__(self):
        return "FreeWord(" + " + ".join(f"{c}*{''.join(w) or '1'}" for w, c in sorted(self.terms.items())) + ")"


def word_x():
    return FreeWord.letter("X")


def word_y():
    return FreeWord.letter("Y")


def word_e(i):
    return FreeWord.letter(f"E{i}")


def eval_word(word, point):
    """Evaluate a word on a point's right-module data: v.(ab) = (v.a).b.

    The letter X acts as Xbar, Y as Ybar and E_i as the projector onto U_i,
    so a word a_1 ... a_k evaluates to M(a_k) ... M(a_1).
    """
    nn = point.N
    mats = {"X": point.Xbar, "Y": point.Ybar}
    for i in range(point.ctx.m):
        mats[f"E{i}"] = point.projector(i)
    out = Matrix.zeros(nn, nn)
    for w, c in word.terms.items():
        acc = Matrix.identity(nn)
        for a in w:
            if a not in mats:
                raise ShapeError(f"letter {a} not valid for m={point.ctx.m}")
            acc = mats[a] @ acc
        out = out + acc.scale(c)
    return out


def tau_from_json(obj, m):
    return tuple(scalar_from_json(t, m) for t in obj)
