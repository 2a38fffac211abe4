"""Ideal JSON: {"m", "n", "tau", "generators": [{"form", "terms"}]}.

locX terms: [l, num, den] for e_n (num/den)(x) y^l; locY terms: [k, num, den]
for e_n (num/den)(y) x^k; poly terms: [k, l, comps] for x^k y^l sum_i comps_i e_i.
Polynomials are coefficient lists, lowest degree first, as exact strings.
"""
import json

from ..crossed_algebra import AlgebraContext, AlgElem, tau_from_json
from ..errors import ParseError
from ..scalars import Poly, RatFunc, scalar_from_json, scalar_to_json
from .fractional import FractionalIdeal
from .loc import LocX, LocY


def _poly_json(p):
    return [scalar_to_json(c) for c in p.c]


def _poly_from(obj, m):
    return Poly([scalar_from_json(c, m) for c in obj])


def _gen_json(g):
    if isinstance(g, LocX):
        return {"form": "locX", "terms": [[l, _poly_json(f.num), _poly_json(f.den)]
                                          for l, f in sorted(g.parts.items())]}
    if isinstance(g, LocY):
        return {"form": "locY", "terms": [[k, _poly_json(f.num), _poly_json(f.den)]
                                          for k, f in sorted(g.parts.items())]}
    return {"form": "poly", "terms": [[k, l, [scalar_to_json(c) for c in comps]]
                                      for (k, l), comps in sorted(g.terms.items())]}


def ideal_to_json(I):
    out = {"m": I.ctx.m, "n": I.n, "tau": [scalar_to_json(t) for t in I.ctx.tau],
           "generators": [_gen_json(g) for g in I.gens]}
    if I.label:
        out["label"] = I.label
    return out


def ideal_from_json(obj):
    try:
        if isinstance(obj, str):
            obj = json.loads(obj)
        m = int(obj["m"])
        ctx = AlgebraContext(m, tau_from_json(obj["tau"], m))
        n = int(obj["n"])
        gens = []
        for g in obj["generators"]:
            form = g["form"]
            if form == "locX":
                gens.append(LocX(ctx, n, {int(l): RatFunc(_poly_from(a, m), _poly_from(b, m))
                                          for l, a, b in g["terms"]}))
            elif form == "locY":
                gens.append(LocY.make(ctx, n, {int(k): RatFunc(_poly_from(a, m), _poly_from(b, m))
                                               for k, a, b in g["terms"]}))
            elif form == "poly":
                terms = {}
                for k, l, comps in g["terms"]:
                    if len(comps) != m:
                        raise ValueError("group component list has the wrong length")
                    terms[(int(k), int(l))] = tuple(scalar_from_json(c, m) for c in comps)
                gens.append(AlgElem(ctx, terms))
            else:
                raise ValueError(f"unknown generator form {form!r}")
        if not gens:
            raise ValueError("no generators")
        return FractionalIdeal(ctx, n, gens, label=obj.get("label"))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"malformed ideal: {exc}") from exc
