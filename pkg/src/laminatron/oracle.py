"""Independent intersection oracle from an exact matrix model of the surface.

The five-punctured sphere carries a complete hyperbolic metric as H^2/G for a
rank-4 free group G of integer matrices: inside the congruence group
generated by A = [[1,2],[0,1]] and B = [[1,0],[-2,1]] (a thrice-punctured
sphere group), the index-3 subgroup

    x1 = A,  x2 = B A B^-1,  x3 = B^2 A B^-2,  x4 = B^3

is free on these generators, and x1, x2, x3, x4 and x1 x2 x3 x4 = (A B)^3 are
all parabolic, so the quotient is a genus-0 surface with exactly 5 cusps.
Since the peripheral structure matches the spider model, the identity on
letters is induced by a homeomorphism, and geometric intersection numbers
agree.

Crossing of two hyperbolic axes is tested exactly in integers: the axis of
M = [[a,b],[c,d]] is the root locus of the binary form (c, d-a, -b), and two
forms with positive discriminants have interlacing roots iff

    (f1*g1 - 2*f2*g0 - 2*f0*g2)^2  <  disc(f) * disc(g).

Intersection numbers are counted as crossing double cosets <u> w <v> by a
ball enumeration with an exact orbit-canonical key.  This is exponential in
the ball radius and meant for validating the combinatorial algorithm on small
words, not for production tables.
"""

from __future__ import annotations

import math

import numpy as np

from .words import cyclic_reduce, invert, unoriented_key

__all__ = [
    "gen_matrices",
    "mat_of_word",
    "axis_form",
    "forms_cross",
    "oracle_intersection",
    "oracle_is_simple",
    "fixed_points",
]

Mat = tuple[int, int, int, int]

_ID: Mat = (1, 0, 0, 1)


def _mul(m: Mat, n: Mat) -> Mat:
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _inv(m: Mat) -> Mat:
    a, b, c, d = m  # det 1
    return (d, -b, -c, a)


def gen_matrices() -> list[Mat]:
    A: Mat = (1, 2, 0, 1)
    B: Mat = (1, 0, -2, 1)
    Binv = _inv(B)
    x1 = A
    x2 = _mul(_mul(B, A), Binv)
    x3 = _mul(_mul(B, _mul(B, A)), _mul(Binv, Binv))
    x4 = _mul(B, _mul(B, B))
    return [x1, x2, x3, x4]


_GENS = gen_matrices()
_GENS_PM: dict[int, Mat] = {}
for _i, _g in enumerate(_GENS):
    _GENS_PM[_i + 1] = _g
    _GENS_PM[-(_i + 1)] = _inv(_g)


def mat_of_word(w: np.ndarray) -> Mat:
    m = _ID
    for l in w:
        m = _mul(m, _GENS_PM[int(l)])
    return m


def _trace(m: Mat) -> int:
    return m[0] + m[3]


def axis_form(m: Mat) -> tuple[int, int, int]:
    """Binary form whose roots are the fixed points; requires |trace| > 2."""
    a, b, c, d = m
    if abs(a + d) <= 2:
        raise ValueError("matrix is not hyperbolic; no axis")
    f = (c, d - a, -b)
    g = math.gcd(math.gcd(abs(f[0]), abs(f[1])), abs(f[2]))
    f = tuple(x // g for x in f)
    for x in f:
        if x != 0:
            return f if x > 0 else tuple(-y for y in f)
    raise AssertionError("zero form")


def _disc(f) -> int:
    return f[1] * f[1] - 4 * f[0] * f[2]


def forms_cross(f, g) -> bool:
    """Strict interlacing of the root pairs of two positive-discriminant forms."""
    if f == g:
        return False
    e = f[1] * g[1] - 2 * f[0] * g[2] - 2 * f[2] * g[0]
    lhs = e * e
    rhs = _disc(f) * _disc(g)
    if lhs == rhs:
        raise ArithmeticError("axes share an endpoint; degenerate input")
    return lhs < rhs


def _canonical_axis_key(mu: Mat, m: Mat, span: int):
    """Canonical form of the axis of m under conjugation by powers of mu."""
    mu_inv = _inv(mu)
    best = None
    best_s = None
    cur = m
    # walk s = 0, 1, 2, ... and s = -1, -2, ... keeping the lexicographically
    # smallest normalized form; coefficients grow away from the centered spot
    for direction, step in ((1, mu), (-1, mu_inv)):
        cur = m
        s = 0
        while abs(s) <= span:
            f = axis_form(cur)
            key = (abs(f[0]) + abs(f[1]) + abs(f[2]), f)
            if best is None or key < best:
                best, best_s = key, s
            step_inv = _inv(step)
            cur = _mul(_mul(step, cur), step_inv)
            s += direction
    if best_s is not None and abs(best_s) >= span:
        raise RuntimeError("canonical axis key hit the search span; enlarge it")
    return best[1]


def oracle_intersection(u: np.ndarray, v: np.ndarray, radius: int = 5) -> int:
    """Count crossing double cosets <u> w <v> over the ball |w| <= radius.

    The count stabilizes once the radius covers all crossings; callers should
    confirm stability by comparing consecutive radii.
    """
    u = cyclic_reduce(u)
    v = cyclic_reduce(v)
    if unoriented_key(u) == unoriented_key(v):
        return 0
    mu = mat_of_word(u)
    mv = mat_of_word(v)
    fu = axis_form(mu)
    span = 2 * (radius + u.shape[0] + v.shape[0]) + 4
    keys = set()

    def visit(m: Mat):
        f = axis_form(m)
        if f == fu:
            return
        if forms_cross(fu, f):
            keys.add(_canonical_axis_key(mu, m, span))

    # depth-first over reduced words w, maintaining w M_v w^{-1}
    stack = [(mv, 0, 0)]
    while stack:
        m, last, depth = stack.pop()
        visit(m)
        if depth == radius:
            continue
        for l in range(-4, 5):
            if l == 0 or l == -last:
                continue
            g = _GENS_PM[l]
            stack.append((_mul(_mul(g, m), _inv(g)), l, depth + 1))
    return len(keys)


def oracle_is_simple(u: np.ndarray, radius: int = 5) -> bool:
    """True iff no conjugate axis of u crosses the axis of u within the ball."""
    u = cyclic_reduce(u)
    mu = mat_of_word(u)
    fu = axis_form(mu)
    stack = [(mu, 0, 0)]
    while stack:
        m, last, depth = stack.pop()
        f = axis_form(m)
        if f != fu and forms_cross(fu, f):
            return False
        if depth == radius:
            continue
        for l in range(-4, 5):
            if l == 0 or l == -last:
                continue
            g = _GENS_PM[l]
            stack.append((_mul(_mul(g, m), _inv(g)), l, depth + 1))
    return True


def fixed_points(m: Mat) -> tuple[tuple[float, float], tuple[float, float]]:
    """Attracting and repelling fixed points as projective pairs (x, y)."""
    a, b, c, d = m
    tr = a + d
    if abs(tr) <= 2:
        raise ValueError("not hyperbolic")
    s = math.isqrt(tr * tr - 4)
    root = math.sqrt(tr * tr - 4)
    if c != 0:
        t1 = ((a - d) + root) / (2 * c)
        t2 = ((a - d) - root) / (2 * c)
        pts = [(t1, 1.0), (t2, 1.0)]
    else:
        pts = [(1.0, 0.0), (b / (d - a), 1.0)]
    # attracting fixed point: |c t + d| > 1
    def mult(p):
        x, y = p
        if y == 0.0:
            return abs(a / d) if d != 0 else float("inf")
        return abs(c * (x / y) + d)

    del s
    if mult(pts[0]) >= mult(pts[1]):
        return pts[0], pts[1]
    return pts[1], pts[0]


def circle_angle(p: tuple[float, float]) -> float:
    """Angle parameter of a projective boundary point, in [0, 2*pi)."""
    x, y = p
    phi = math.atan2(x, y) % math.pi
    return 2.0 * phi


def ccw_points(p1, p2, p3) -> bool:
    """Positive circular order of three boundary points of H^2."""
    t1, t2, t3 = circle_angle(p1), circle_angle(p2), circle_angle(p3)
    return ((t2 - t1) % (2 * math.pi)) < ((t3 - t1) % (2 * math.pi))
