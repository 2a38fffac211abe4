"""Gamma-equivariant automorphisms preserving xy - yx, acting on points and ideals.

An automorphism is a word in elementary moves, read as a composition
sigma = mu_1 o mu_2 o ... o mu_r:

    ShearX(q): x -> x + q(y), y -> y
    ShearY(p): y -> y + p(x), x -> x
    Scale(c):  x -> c x,      y -> y / c
"""
import json
from dataclasses import dataclass

from .crossed_algebra import FreeWord, eval_word, parse, word_x, word_y
from .dgmodel import build_lambda
from .errors import NotInFamilyError, ParseError, ValidationError
from .ideals import FractionalIdeal, build_ideal_My, mirror_algelem, transition_lambda
from .quiver import QuiverPoint, check_stability, validate_point
from .scalars import Poly, inv, qq, scalar_to_json


@dataclass(frozen=True)
class Move:
    kind: str           # "shearX" | "shearY" | "scale"
    poly: Poly = None   # q(y) or p(x), stored as a polynomial in one variable
    c: object = None

    def images(self):
        X, Y = word_x(), word_y()
        if self.kind == "shearX":
            return {"X": X + _poly_word(self.poly, Y), "Y": Y}
        if self.kind == "shearY":
            return {"X": X, "Y": Y + _poly_word(self.poly, X)}
        return {"X": X * self.c, "Y": Y * inv(self.c)}

    def inverse(self):
        if self.kind == "scale":
            return Move("scale", c=inv(self.c))
        return Move(self.kind, poly=-self.poly)

    def to_json(self):
        if self.kind == "scale":
            return {"scale": scalar_to_json(self.c)}
        var = "y" if self.kind == "shearX" else "x"
        return {self.kind: self.poly.to_str(var)}


def _poly_word(p, letter):
    out = FreeWord()
    for k, c in enumerate(p.c):
        if c:
            out = out + (letter ** k) * c
    return out


def ShearX(q):
    return Automorphism((Move("shearX", poly=q),))


def ShearY(p):
    return Automorphism((Move("shearY", poly=p),))


def Scale(c):
    return Automorphism((Move("scale", c=qq(c) if isinstance(c, (int, str)) else c),))


@dataclass(frozen=True)
class Automorphism:
    moves: tuple = ()

    def __matmul__(self, other):
        """Composition self o other."""
        return Automorphism(self.moves + other.moves)

    def images(self):
        """FreeWords sigma(X), sigma(Y)."""
        img = {"X": word_x(), "Y": word_y()}
        for mv in reversed(self.moves):
            mi = mv.images()
            img = {"X": img["X"].substitute(mi), "Y": img["Y"].substitute(mi)}
        return img

    def apply(self, a):
        """sigma(a) for an AlgElem a."""
        for mv in reversed(self.moves):
            a = _apply_move(mv, a)
        return a

    def to_json(self):
        return [mv.to_json() for mv in self.moves]

    @classmethod
    def from_json(cls, obj, ctx):
        try:
            if isinstance(obj, str):
                obj = json.loads(obj)
            moves = []
            for item in obj:
                (kind, val), = item.items()
                if kind == "scale":
                    moves.append(Move("scale", c=_parse_scalar(val, ctx)))
                elif kind in ("shearX", "shearY"):
                    moves.append(Move(kind, poly=_parse_poly(val, "y" if kind == "shearX" else "x", ctx)))
                else:
                    raise ValueError(f"unknown move {kind!r}")
            return cls(tuple(moves))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed automorphism: {exc}") from exc


def _parse_poly(text, var, ctx):
    a = parse(str(text), ctx)
    coeffs = {}
    for (k, l), comps in a.terms.items():
        if (k if var == "y" else l) or any(c != comps[0] for c in comps):
            raise ValueError(f"{text!r} is not a polynomial in {var}")
        coeffs[l if var == "y" else k] = comps[0]
    return Poly([coeffs.get(i, 0) for i in range(max(coeffs, default=-1) + 1)])


def _parse_scalar(text, ctx):
    a = parse(str(text), ctx)
    comps = a.terms.get((0, 0))
    if len(a.terms) != 1 or comps is None or any(c != comps[0] for c in comps):
        raise ValueError(f"{text!r} is not a scalar")
    return comps[0]


def _apply_move(mv, a):
    ctx = a.ctx
    x, y = ctx.x(), ctx.y()
    if mv.kind == "shearX":
        X, Y = x + _poly_alg(mv.poly, y, ctx), y
    elif mv.kind == "shearY":
        X, Y = x, y + _poly_alg(mv.poly, x, ctx)
    else:
        X, Y = x.scale(mv.c), y.scale(inv(mv.c))
    xp, yp = {0: ctx.one()}, {0: ctx.one()}
    out = ctx.zero()
    for (k, l), comps in a.terms.items():
        for d, base, cache in ((k, X, xp), (l, Y, yp)):
            for t in range(max(cache) + 1, d + 1):
                cache[t] = cache[t - 1] * base
        out = out + (xp[k] * yp[l]).rmul_group(comps)
    return out


def _poly_alg(p, var, ctx):
    out = ctx.zero()
    for k, c in enumerate(p.c):
        if c:
            out = out + (var ** k).scale(c)
    return out


def invert(sigma):
    return Automorphism(tuple(mv.inverse() for mv in reversed(sigma.moves)))


def identity():
    return Automorphism(())


def validate_automorphism(sigma, m):
    """Report {"valid": bool, "errors": [...]}."""
    errors = []
    for i, mv in enumerate(sigma.moves):
        if mv.kind in ("shearX", "shearY"):
            bad = [k for k, c in enumerate(mv.poly.c) if c and (k + 1) % m]
            if bad:
                errors.append(f"move {i}: exponents {bad} are not -1 mod {m}")
        elif mv.kind == "scale":
            if not mv.c:
                errors.append(f"move {i}: zero scale")
        else:
            errors.append(f"move {i}: unknown kind {mv.kind}")
    if errors:
        return {"valid": False, "errors": errors}
    img = sigma.images()
    comm = img["X"] * img["Y"] - img["Y"] * img["X"]
    if comm != word_x() * word_y() - word_y() * word_x():
        errors.append("sigma(x) sigma(y) - sigma(y) sigma(x) != xy - yx")
    return {"valid": not errors, "errors": errors}


def act_on_point(sigma, p):
    """(sigma^-1(Xbar), sigma^-1(Ybar), ibar, jbar)."""
    img = invert(sigma).images()
    q = QuiverPoint(p.ctx, p.n, p.dims, eval_word(img["X"], p), eval_word(img["Y"], p), p.ibar, p.jbar)
    errs = validate_point(q)
    if errs:
        raise ValidationError("acted point fails validation: " + "; ".join(errs))
    return q


def _anchored(I, side):
    """Polynomial generators of an ideal isomorphic to I that meet C[x] (side 'x') or C[y]."""
    an = I.analysis
    if side == "x":
        s = an.x
        return s.j2, [e.to_algelem() for e in s.anchored]
    s = an.y
    return (-s.j2) % I.ctx.m, [mirror_algelem(e.to_algelem()) for e in s.anchored]


def act_on_ideal(sigma, I):
    """sigma_*(I): apply the moves to polynomial generators, last move first.

    A shear along x fixes y, so it is applied to a presentation meeting C[y];
    a shear along y to one meeting C[x].  Scalings keep both, and the
    y-anchored form leaves the cheaper transition direction trivial."""
    cur = I
    for mv in reversed(sigma.moves):
        side = "x" if mv.kind == "shearY" else "y"
        j, gens = _anchored(cur, side)
        cur = FractionalIdeal(cur.ctx, j, [_apply_move(mv, g) for g in gens], label="acted")
    return cur


def equivariance_check(sigma, p):
    """Omega(sigma . p) is isomorphic to sigma_* Omega(p) (compared through lambda)."""
    q = act_on_point(sigma, p)
    if not check_stability(q):
        return False
    acted = act_on_ideal(sigma, build_ideal_My(p))
    lam_q = build_lambda(q)
    try:
        lam_i = transition_lambda(acted, lam_q.bound)
    except NotInFamilyError:
        return False
    return acted.analysis.n == q.n and lam_i.agrees(lam_q)


__all__ = ["Automorphism", "Move", "Scale", "ShearX", "ShearY", "act_on_ideal", "act_on_point",
           "equivariance_check", "identity", "invert", "validate_automorphism"]
