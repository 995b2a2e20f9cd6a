"""Bijection between positive primitive solutions and the auxiliary variety.

A positive primitive solution of Q1 = Q2 = 0 factors uniquely through seven
positive integers (v1, v2, y0, y1, y2, y3, y4) satisfying

    y0^4 y2^2 - v2 y1^2 y4 + y3^2 = 0                       (the equation)
    gcd(y0, v1 v2 y1) = gcd(y3, y1 y2) = gcd(y4, v1 v2 y2) = 1
    v2 squarefree,  gcd(y2, v2 y1) = 1

via x0 = v1^2 v2 y0^2 y2^2, x1 = v1^4 v2^3 y1^2 y2^2, x2 = v1^3 v2^2 y0 y1 y2^2,
x3 = v1^2 v2 y2 y3, x4 = y4.  Height <= B becomes the pair of inequalities
v1^4 v2^3 y1^2 y2^2 <= B and y0^4 y2^2 + y3^2 <= B v2 y1^2, which the counter
enumerates directly.  The map and its inverse are implemented exactly, and
the counter walks y3 through the residue classes of square roots of -1
modulo v2 y1^2, which is what makes it fast.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import Callable, Iterator, Optional

import numpy as np

from .arith import is_squarefree, sqrt_minus_one_count, sqrts_minus_one, squarefree_part
from .errors import NotInDomainError, SizeCapError, TorsorValidationError

TORSOR_CAP = 10**9


def _iroot4(n: int) -> int:
    if n < 0:
        return -1
    return isqrt(isqrt(n))


@dataclass(frozen=True, order=True)
class TorsorPoint:
    v1: int
    v2: int
    y0: int
    y1: int
    y2: int
    y3: int
    y4: int

    def as_tuple(self):
        return (self.v1, self.v2, self.y0, self.y1, self.y2, self.y3, self.y4)


def validate(t) -> TorsorPoint:
    """Check all membership conditions; failures are reported by name."""
    v1, v2, y0, y1, y2, y3, y4 = (int(c) for c in t)
    failures = []
    if min(v1, v2, y0, y1, y2, y3, y4) < 1:
        failures.append("positivity")
    else:
        if y0**4 * y2**2 - v2 * y1**2 * y4 + y3**2 != 0:
            failures.append("equation")
        if not is_squarefree(v2):
            failures.append("squarefree")
        if (
            gcd(y0, v1 * v2 * y1) != 1
            or gcd(y3, y1 * y2) != 1
            or gcd(y4, v1 * v2 * y2) != 1
            or gcd(y2, v2 * y1) != 1
        ):
            failures.append("coprimality")
    if failures:
        raise TorsorValidationError(failures)
    return TorsorPoint(v1, v2, y0, y1, y2, y3, y4)


def to_surface(t: TorsorPoint):
    """The forward substitution; the image is primitive, positive and on X."""
    from .surface import SurfacePoint, eval_forms

    v1, v2, y0, y1, y2, y3, y4 = t.as_tuple()
    x = (
        v1**2 * v2 * y0**2 * y2**2,
        v1**4 * v2**3 * y1**2 * y2**2,
        v1**3 * v2**2 * y0 * y1 * y2**2,
        v1**2 * v2 * y2 * y3,
        y4,
    )
    assert eval_forms(x) == (0, 0), "forward image left the surface (bug)"
    g = 0
    for c in x:
        g = gcd(g, c)
    assert g == 1, "forward image is not primitive (bug)"
    return SurfacePoint(x)


def _exact_sqrt(n: int, what: str) -> int:
    r = isqrt(n)
    if r * r != n:
        raise NotInDomainError(f"{what} = {n} is not a perfect square")
    return r


def from_surface(p) -> TorsorPoint:
    """Invert the substitution for an all-positive primitive point on X.

    Chain: z2 = gcd(x0, x1) splits Q1; v2 is the squarefree part of z2;
    then x3 = v2 y2' y3', z1 = v2 y1', v1 = gcd(y1', y3'), y2' = v1 y2.
    Any failed exactness step means the input violates the preconditions.
    """
    from .surface import eval_forms

    coords = p.x if hasattr(p, "x") else tuple(p)
    x0, x1, x2, x3, x4 = (int(c) for c in coords)
    if min(x0, x1, x2, x3, x4) < 1:
        raise NotInDomainError("all coordinates must be positive")
    if eval_forms((x0, x1, x2, x3, x4)) != (0, 0):
        raise NotInDomainError("point is not on the surface")
    if gcd(gcd(gcd(x0, x1), gcd(x2, x3)), x4) != 1:
        raise NotInDomainError("point is not primitive")

    z2 = gcd(x0, x1)
    z0 = _exact_sqrt(x0 // z2, "x0/gcd(x0,x1)")
    z1 = _exact_sqrt(x1 // z2, "x1/gcd(x0,x1)")
    v2 = squarefree_part(z2)
    y2p = _exact_sqrt(z2 // v2, "square part of gcd(x0,x1)")
    if x3 % (v2 * y2p):
        raise NotInDomainError("v2*y2' does not divide x3")
    y3p = x3 // (v2 * y2p)
    if z1 % v2:
        raise NotInDomainError("v2 does not divide z1")
    y1p = z1 // v2
    v1 = gcd(y1p, y3p)
    if y2p % v1:
        raise NotInDomainError("v1 does not divide y2'")
    return validate((v1, v2, z0, y1p // v1, y2p // v1, y3p // v1, x4))


@dataclass(frozen=True)
class TorsorBounds:
    """Exact integer enumeration limits at height bound B."""

    B: int
    within_height: bool  # v1^4 v2^3 y1^2 y2^2 <= B
    y2_max: int
    y0_max: int

    def y3_max(self, v2: int, y1: int, y2: int, y0: int) -> int:
        return isqrt(self.B * v2 * y1 * y1 - y0**4 * y2 * y2)


def torsor_bounds(B: int, v1: int, v2: int, y1: int, y2: int) -> TorsorBounds:
    stem = v1**4 * v2**3 * y1 * y1
    lim = B * v2 * y1 * y1
    return TorsorBounds(
        B=B,
        within_height=stem * y2 * y2 <= B,
        y2_max=isqrt(B // stem) if stem <= B else 0,
        y0_max=_iroot4((lim - 1) // (y2 * y2)),
    )


# ---------------------------------------------------------------------------
# fast counting

def _count_cell(B: int, v2: int, y1: int, v1: int, y2: int, m: int, roots) -> int:
    """Count admissible (y0, y3) pairs for one (v1, v2, y1, y2) cell."""
    lim = B * v2 * y1 * y1
    y0_cap = _iroot4((lim - 1) // (y2 * y2))
    v1v2y1 = v1 * v2 * y1
    y1y2 = y1 * y2
    v1v2y2 = v1 * v2 * y2
    y2sq = y2 * y2
    count = 0
    for y0 in range(1, y0_cap + 1):
        if gcd(y0, v1v2y1) != 1:
            continue
        c = y0**4 * y2sq
        Y3 = isqrt(lim - c)
        if Y3 < 1:
            continue
        rbase = (y0 * y0 % m) * y2 % m
        for rho in roots:
            r = rho * rbase % m
            start = r if r else m
            if start > Y3:
                continue
            if (Y3 - start) // m + 1 > 48:
                y3s = np.arange(start, Y3 + 1, m, dtype=np.int64)
                y4s = (c + y3s * y3s) // m
                ok = (np.gcd(y3s, y1y2) == 1) & (np.gcd(y4s, v1v2y2) == 1)
                count += int(np.count_nonzero(ok))
            else:
                y3 = start
                while y3 <= Y3:
                    if gcd(y3, y1y2) == 1 and gcd((c + y3 * y3) // m, v1v2y2) == 1:
                        count += 1
                    y3 += m
    return count


def _base_pairs(B: int):
    """(v2, y1, m, roots): squarefree v2, and -1 a square modulo m = v2 y1^2."""
    out = []
    v2 = 1
    while v2**3 <= B:
        if is_squarefree(v2):
            for y1 in range(1, isqrt(B // v2**3) + 1):
                m = v2 * y1 * y1
                if sqrt_minus_one_count(m) == 0:
                    continue
                out.append((v2, y1, m, tuple(sqrts_minus_one(m))))
        v2 += 1
    return out


def _tasks(B: int, max_split: int):
    """Work units (v2, y1, m, roots, v1, stride, offset) covering all cells."""
    tasks = []
    for v2, y1, m, roots in _base_pairs(B):
        v1_cap = _iroot4(B // (v2**3 * y1 * y1))
        for v1 in range(1, v1_cap + 1):
            y2_cap = isqrt(B // (v1**4 * v2**3 * y1 * y1))
            nsplit = min(max_split, max(1, y2_cap // 24))
            for off in range(nsplit):
                tasks.append((v2, y1, m, roots, v1, nsplit, off))
    return tasks


def _run_task(args) -> int:
    B, (v2, y1, m, roots, v1, stride, off) = args
    y2_cap = isqrt(B // (v1**4 * v2**3 * y1 * y1))
    total = 0
    for y2 in range(1 + off, y2_cap + 1, stride):
        if gcd(y2, v2 * y1) != 1:
            continue
        total += _count_cell(B, v2, y1, v1, y2, m, roots)
    return total


def count_torsor(B: int, workers: Optional[int] = None) -> int:
    """N(Q1, Q2; B) computed on the auxiliary side.

    ``workers`` > 1 distributes cells over processes; the result is an exact
    integer sum and therefore identical for every partition.
    """
    if B < 1:
        return 0
    if B > TORSOR_CAP:
        raise SizeCapError(f"count_torsor is capped at B = {TORSOR_CAP}")
    workers = workers or 1
    tasks = _tasks(B, max_split=1 if workers == 1 else 8 * workers)
    if workers == 1:
        return sum(_run_task((B, t)) for t in tasks)
    import multiprocessing as mp
    from concurrent.futures import ProcessPoolExecutor

    args = [(B, t) for t in tasks]
    with ProcessPoolExecutor(
        max_workers=workers, mp_context=mp.get_context("fork")
    ) as pool:
        chunk = max(1, len(args) // (8 * workers))
        return sum(pool.map(_run_task, args, chunksize=chunk))


def iter_torsor_points(B: int) -> Iterator[TorsorPoint]:
    """Every point counted by ``count_torsor`` exactly once, ordered
    lexicographically by (v1, v2, y1, y2, y0, y3)."""
    if B > TORSOR_CAP:
        raise SizeCapError(f"enumeration is capped at B = {TORSOR_CAP}")
    found = []
    for v2, y1, m, roots in _base_pairs(B):
        v1_cap = _iroot4(B // (v2**3 * y1 * y1))
        for v1 in range(1, v1_cap + 1):
            y2_cap = isqrt(B // (v1**4 * v2**3 * y1 * y1))
            for y2 in range(1, y2_cap + 1):
                if gcd(y2, v2 * y1) != 1:
                    continue
                lim = B * v2 * y1 * y1
                y0_cap = _iroot4((lim - 1) // (y2 * y2))
                for y0 in range(1, y0_cap + 1):
                    if gcd(y0, v1 * v2 * y1) != 1:
                        continue
                    c = y0**4 * y2 * y2
                    Y3 = isqrt(lim - c)
                    rbase = (y0 * y0 % m) * y2 % m
                    for rho in roots:
                        r = rho * rbase % m
                        y3 = r if r else m
                        while y3 <= Y3:
                            if gcd(y3, y1 * y2) == 1:
                                y4 = (c + y3 * y3) // m
                                if gcd(y4, v1 * v2 * y2) == 1:
                                    found.append(TorsorPoint(v1, v2, y0, y1, y2, y3, y4))
                            y3 += m
    found.sort(key=lambda t: (t.v1, t.v2, t.y1, t.y2, t.y0, t.y3))
    yield from found


def enumerate_torsor(B: int, visitor: Callable[[TorsorPoint], None]) -> int:
    """Call ``visitor`` once per point in deterministic order; returns the
    number of visits.  Visitor exceptions propagate."""
    n = 0
    for t in iter_torsor_points(B):
        visitor(t)
        n += 1
    return n
