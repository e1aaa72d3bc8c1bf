"""Dense univariate polynomials over Q(i) as coefficient lists (low degree first).

These helpers back root isolation, edge characteristic polynomials and the
Bezout identities used in Hensel lifting.  Lists are always trimmed so the
last entry is nonzero; the zero polynomial is ``[]``.
"""

from __future__ import annotations

from .gaussian import ONE, ZERO, GaussianRational, as_qi
from .poly import SparsePoly

__all__ = [
    "trim",
    "padd",
    "psub",
    "pmul",
    "pscale",
    "pdivmod",
    "pmonic",
    "pgcd",
    "pxgcd",
    "pderiv",
    "peval",
    "squarefree_parts",
    "from_sparse",
    "to_sparse",
]


def _q(c):
    return c if isinstance(c, GaussianRational) else as_qi(c)


def trim(a):
    a = [_q(c) for c in a]
    while a and not a[-1]:
        a.pop()
    return a


def padd(a, b):
    n = max(len(a), len(b))
    return trim([(a[k] if k < len(a) else ZERO) + (b[k] if k < len(b) else ZERO) for k in range(n)])


def psub(a, b):
    n = max(len(a), len(b))
    return trim([(a[k] if k < len(a) else ZERO) - (b[k] if k < len(b) else ZERO) for k in range(n)])


def pscale(a, c):
    c = _q(c)
    return trim([v * c for v in a]) if c else []


def pmul(a, b):
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if not u:
            continue
        for j, v in enumerate(b):
            if v:
                out[i + j] = out[i + j] + u * v
    return trim(out)


def pdivmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv = b[-1].inverse()
    db = len(b) - 1
    if len(a) <= db:
        return [], trim(a)
    quo = [ZERO] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if not c:
            continue
        c = c * inv
        quo[k - db] = c
        for j in range(db + 1):
            a[k - db + j] = a[k - db + j] - c * b[j]
    return trim(quo), trim(a[:db])


def pmonic(a):
    if not a:
        return []
    return pscale(a, a[-1].inverse())


def pgcd(a, b):
    """Monic gcd."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, pdivmod(a, b)[1]
    return pmonic(a)


def pxgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = [ONE], []
    t0, t1 = [], [ONE]
    while r1:
        q, r = pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(s0, pmul(q, s1))
        t0, t1 = t1, psub(t0, pmul(q, t1))
    if not r0:
        return [], [], []
    inv = r0[-1].inverse()
    return pscale(r0, inv), pscale(s0, inv), pscale(t0, inv)


def pderiv(a):
    return trim([a[k] * k for k in range(1, len(a))])


def peval(a, t):
    t = _q(t)
    acc = ZERO
    for c in reversed(a):
        acc = acc * t + c
    return acc


def squarefree_parts(a):
    """Yun's algorithm: list of (multiplicity, monic squarefree factor)."""
    a = trim(a)
    if len(a) <= 1:
        return []
    out = []
    da = pderiv(a)
    g = pgcd(a, da)
    b = pdivmod(a, g)[0]
    c = pdivmod(da, g)[0]
    d = psub(c, pderiv(b))
    k = 1
    while len(b) > 1:
        g = pgcd(b, d)
        b = pdivmod(b, g)[0]
        if len(g) > 1:
            out.append((k, pmonic(g)))
        c = pdivmod(d, g)[0]
        d = psub(c, pderiv(b))
        k += 1
    return out


def from_sparse(p: SparsePoly):
    """Coefficient list of a polynomial in a single variable."""
    if p.is_zero():
        return []
    nonconst = {i for e in p.terms for i, k in enumerate(e) if k}
    if len(nonconst) > 1:
        raise ValueError(f"{p} is not univariate")
    i = nonconst.pop() if nonconst else 0
    out = [ZERO] * (p.degree() + 1)
    for e, c in p.items():
        out[e[i] if e else 0] = c
    return trim(out)


def to_sparse(a, var: str = "T") -> SparsePoly:
    return SparsePoly._raw({(k,): c for k, c in enumerate(a) if c}, (var,))
