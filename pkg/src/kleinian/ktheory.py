"""K_0(Gamma) = Z^m: classes, the class equation and ideal classes."""
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotDimOneFamilyError
from .scalars import Matrix


@dataclass(frozen=True)
class KClass:
    comps: tuple

    def __post_init__(self):
        object.__setattr__(self, "comps", tuple(int(c) for c in self.comps))

    @property
    def m(self):
        return len(self.comps)

    @property
    def dim(self):
        return sum(self.comps)

    @classmethod
    def delta(cls, m, n):
        return cls(tuple(1 if i == n % m else 0 for i in range(m)))

    @classmethod
    def L(cls, m):
        """[L] = [W_1] + [W_{m-1}]."""
        out = [0] * m
        out[1 % m] += 1
        out[(m - 1) % m] += 1
        return cls(tuple(out))

    def __add__(self, other):
        return KClass(tuple(a + b for a, b in zip(self.comps, other.comps)))

    def __sub__(self, other):
        return KClass(tuple(a - b for a, b in zip(self.comps, other.comps)))

    def __neg__(self):
        return KClass(tuple(-a for a in self.comps))

    def __mul__(self, other):
        if isinstance(other, int):
            return KClass(tuple(a * other for a in self.comps))
        m = self.m
        out = [0] * m
        for a, u in enumerate(self.comps):
            if u:
                for b, v in enumerate(other.comps):
                    out[(a + b) % m] += u * v
        return KClass(tuple(out))

    __rmul__ = __mul__

    def render(self):
        return " + ".join(f"{c}[W{i}]" for i, c in enumerate(self.comps))

    def __str__(self):
        return self.render()


def class_equation(v):
    """v (2[W0] - [L]); componentwise 2v_i - v_{i-1} - v_{i+1}."""
    if not isinstance(v, KClass):
        v = KClass(tuple(v))
    m = v.m
    c = v.comps
    if m == 1:
        return KClass((0,))
    return KClass(tuple(2 * c[i] - c[(i - 1) % m] - c[(i + 1) % m] for i in range(m)))


def n_selector(p):
    """n = sum i p_i (mod m) for a dimension-one class."""
    m = p.m
    return sum(i * c for i, c in enumerate(p.comps)) % m


def decompose(p):
    """(n, v) with p = delta_n - class_equation(v), v >= 0 and min v = 0."""
    if not isinstance(p, KClass):
        p = KClass(tuple(p))
    if p.dim != 1:
        raise NotDimOneFamilyError(f"class {p} has dimension {p.dim}, not 1")
    m = p.m
    if m == 1:
        return 0, ()
    n = n_selector(p)
    b = KClass.delta(m, n) - p
    cols = [class_equation(KClass.delta(m, j)).comps for j in range(m)]
    rows = [[Fraction(cols[j][i]) for j in range(m)] for i in range(m)]
    rows.append([Fraction(1 if j == 0 else 0) for j in range(m)])
    sol = Matrix(rows, m).solve(Matrix.column([Fraction(x) for x in b.comps] + [Fraction(0)]))
    if sol is None:
        raise NotDimOneFamilyError(f"class {p} is not of the form delta_n - C v")
    v = [sol[i, 0] for i in range(m)]
    if any(Fraction(x).denominator != 1 for x in v):
        raise NotDimOneFamilyError(f"class {p} needs a non-integral v")
    low = min(v)
    return n, tuple(int(x - low) for x in v)


def compose(m, n, v):
    """Inverse of decompose."""
    if m == 1:
        return KClass((1,))
    return KClass.delta(m, n) - class_equation(KClass(tuple(v)))


def quotient_class(ladder, m):
    """Gamma-character of e_n B / gr_y(M): x^a y^k e_{n-a+k} below the ladder."""
    out = [0] * m
    for a, k in ladder.staircase():
        out[(ladder.n - a + k) % m] += 1
    return KClass(tuple(out))


def class_of_ideal(I):
    lad = I.analysis.ladder
    m = I.ctx.m
    return KClass.delta(m, lad.n) - class_equation(quotient_class(lad, m))
