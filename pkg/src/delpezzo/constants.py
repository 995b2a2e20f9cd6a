"""Archimedean and p-adic densities, the Euler product, and the expected
leading coefficient.

The real-density integral c, the archimedean density (16c by an exact
identity, computed by an independent quadrature here), the rational polytope
volume alpha = 1/288, the finite Euler product tau, the p-adic densities
omega_p (exact modular counts against the closed form), and the divisor
lattice of the minimal desingularisation with its consistency identities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
import numpy as np

from .arith import chi, primes_up_to
from .errors import DataIntegrityError, SizeCapError, ToleranceError

# ---------------------------------------------------------------------------
# adaptive Gauss-Kronrod quadrature (7-15 pair)

_K15_X = np.array([
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0,
])
_K15_W = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
])
_G7_W = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469,
])


def _gk15(f, a: float, b: float) -> tuple[float, float]:
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    xs = np.concatenate((mid - half * _K15_X[:-1], [mid], mid + half * _K15_X[-2::-1]))
    ys = f(xs)
    # Kronrod: all 15 nodes; Gauss: the 7 odd-indexed ones
    wk = np.concatenate((_K15_W[:-1], [_K15_W[-1]], _K15_W[-2::-1]))
    k15 = half * float(np.dot(wk, ys))
    g_nodes = ys[1:-1:2]
    wg = np.concatenate((_G7_W[:-1], [_G7_W[-1]], _G7_W[-2::-1]))
    g7 = half * float(np.dot(wg, g_nodes))
    return k15, abs(k15 - g7)


def adaptive_quadrature(f, a: float, b: float, tol: float, max_depth: int = 50) -> tuple[float, float]:
    """Adaptive bisection on the Gauss-Kronrod 7-15 pair; returns (value, error)."""
    stack = [(a, b, tol, 0)]
    total = 0.0
    err_total = 0.0
    while stack:
        a0, b0, t0, depth = stack.pop()
        val, err = _gk15(f, a0, b0)
        if err <= t0 or depth >= max_depth:
            if depth >= max_depth and err > t0:
                raise ToleranceError(
                    f"quadrature failed to converge on [{a0}, {b0}]", achieved=err
                )
            total += val
            err_total += err
        else:
            m = 0.5 * (a0 + b0)
            stack.append((a0, m, t0 / 2, depth + 1))
            stack.append((m, b0, t0 / 2, depth + 1))
    return total, err_total


# ---------------------------------------------------------------------------
# archimedean quantities

def real_density_integral(tol: float = 1e-12) -> tuple[float, float]:
    """c = int_0^1 u^(1/4) du / (2 sqrt(1-u)).

    Both endpoint singularities are removed analytically by u = sin^4(theta):
    c = int_0^{pi/2} 2 sin^4(theta) / sqrt(1 + sin^2(theta)) d(theta),
    a smooth integrand handed to the adaptive Gauss-Kronrod pair.
    """
    if tol < 1e-14:
        raise ToleranceError("tolerance below double-precision floor")
    return adaptive_quadrature(
        lambda t: 2 * np.sin(t) ** 4 / np.sqrt(1 + np.sin(t) ** 2),
        0.0, math.pi / 2, tol,
    )


def archimedean_density(tol: float = 1e-12) -> tuple[float, float]:
    """Archimedean density 8 int_0^1 u^(1/4) (1-u)^(-1/2) du = 16 c.

    Quadrated independently of ``real_density_integral`` through the
    pre-integration-by-parts form 4 int_0^1 sqrt(1-u) u^(-3/4) du, smoothed
    by u = sin^4(psi): 16 int_0^{pi/2} cos^2(psi) sqrt(1 + sin^2(psi)) d(psi).
    """
    if tol < 1e-14:
        raise ToleranceError("tolerance below double-precision floor")
    val, err = adaptive_quadrature(
        lambda t: np.cos(t) ** 2 * np.sqrt(1 + np.sin(t) ** 2),
        0.0, math.pi / 2, tol / 16,
    )
    return 16 * val, 16 * err


def real_density_beta_oracle() -> float:
    """Closed form of c through the Beta function (test oracle):
    Gamma(5/4) Gamma(1/2) / (2 Gamma(7/4))."""
    return math.gamma(1.25) * math.gamma(0.5) / (2 * math.gamma(1.75))


# ---------------------------------------------------------------------------
# polytope volume

def simplex_volume(weights) -> Fraction:
    """Exact volume of {t >= 0 : sum_i a_i t_i <= 1} = 1 / (n! prod a_i)."""
    n = len(weights)
    denom = math.factorial(n)
    for a in weights:
        denom *= a
    return Fraction(1, denom)


def peyre_alpha() -> Fraction:
    """alpha = (1/2) vol{t in R^3_{>=0} : 4 t1 + 2 t2 + 3 t3 <= 1} = 1/288."""
    return Fraction(1, 2) * simplex_volume((4, 2, 3))


# ---------------------------------------------------------------------------
# Euler product

def _tau_factor(p: int) -> float:
    x = chi(p)
    return (
        (1 - 1 / p) ** 4
        * (1 - x / p) ** 2
        * (1 + (3 + 2 * x + x * x) / p + (x * x) / (p * p))
    )


def tamagawa_euler_product(prime_cutoff: int) -> tuple[float, float]:
    """prod over p <= cutoff of the local factor, with a crude tail bound.

    Each log-factor for p > cutoff is below 11/p^2 in absolute value
    (coarse expansion of the factor), so the tail of the log-product is at
    most 11/cutoff, giving |true/partial - 1| <= exp(11/cutoff) - 1.
    """
    if prime_cutoff < 100:
        raise ValueError("prime_cutoff >= 100 required")
    total = 1.0
    for p in primes_up_to(prime_cutoff):
        total *= _tau_factor(int(p))
    tail = total * math.expm1(11 / prime_cutoff)
    return total, abs(tail)


def tau_factor_exact(p: int) -> Fraction:
    """The same local factor as an exact rational (used by tests)."""
    x = chi(p)
    return (
        Fraction(p - 1, p) ** 4
        * Fraction(p - x, p) ** 2
        * (1 + Fraction(3 + 2 * x + x * x, p) + Fraction(x * x, p * p))
    )


# ---------------------------------------------------------------------------
# p-adic densities

NAIVE_DENSITY_CAP = 10**8
FAST_DENSITY_CAP = 10**9


def _density_count_naive(p: int, r: int) -> int:
    """Literal count over all q^5 residue tuples (q = p^r), blockwise."""
    q = p**r
    t = np.arange(q, dtype=np.int64)
    x3sq = (t * t) % q
    count = 0
    for x0 in range(q):
        for x1 in range(q):
            n2 = int(np.count_nonzero((t * t - x0 * x1) % q == 0))
            if n2 == 0:
                continue
            # x3 runs the row, x4 the column of an implicit q x q grid
            lhs = (x3sq + x0 * x0) % q
            n34 = int(np.count_nonzero((lhs[:, None] - (x1 * t)[None, :]) % q == 0))
            count += n2 * n34
    return count


def _density_count_tables(p: int, r: int) -> int:
    """Exact count in O(p^(2r)) using valuation-structured progression tables.

    N = sum over (x0, x1) of #{x2 : x2^2 = x0 x1} * #{(x3, x4) : x3^2 + x0^2 = x1 x4},
    and the (x3, x4) count depends on x1 only through its p-adic valuation.
    """
    q = p**r
    t = np.arange(q, dtype=np.int64)
    cnt2 = np.zeros(q, dtype=np.int64)
    np.add.at(cnt2, (t * t) % q, 1)
    tables = [cnt2.reshape(q // p**v, p**v).sum(axis=0) for v in range(r + 1)]
    val = np.zeros(q, dtype=np.int64)
    val[0] = r
    for v in range(1, r + 1):
        val[p**v:: p**v] = np.maximum(val[p**v:: p**v], v)
    pv = p ** val
    total = 0
    for x0 in range(q):
        c = (-x0 * x0) % q
        row = cnt2[(x0 * t) % q]
        inner = np.fromiter(
            (tables[int(v)][c % int(m)] for v, m in zip(val, pv)),
            dtype=np.int64, count=q,
        )
        total += int(np.dot(row, pv * inner))
    return total


def local_density_brute(p: int, r: int, mode: str = "auto") -> Fraction:
    """Exact N(p^r) / p^(3r) with N(p^r) the number of residue 5-tuples
    modulo p^r solving both forms.

    ``mode``: 'naive' scans all p^(5r) tuples (cap 10^8); 'tables' uses the
    valuation-table count (cap p^(3r) <= 10^9); 'auto' picks naive when it
    fits and tables otherwise.
    """
    if r < 1:
        raise ValueError("r >= 1 required")
    if mode == "auto":
        mode = "naive" if p ** (5 * r) <= NAIVE_DENSITY_CAP else "tables"
    if mode == "naive":
        if p ** (5 * r) > NAIVE_DENSITY_CAP:
            raise SizeCapError(f"naive density count needs p^(5r) <= {NAIVE_DENSITY_CAP}")
        n = _density_count_naive(p, r)
    elif mode == "tables":
        if p ** (3 * r) > FAST_DENSITY_CAP:
            raise SizeCapError(f"table density count needs p^(3r) <= {FAST_DENSITY_CAP}")
        n = _density_count_tables(p, r)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return Fraction(n, p ** (3 * r))


def local_density_closed(p: int) -> Fraction:
    """Limit density: 5/2 at p = 2, else 1 + (4 + 2 chi(p))/p + 1/p^2."""
    if p == 2:
        return Fraction(5, 2)
    return 1 + Fraction(4 + 2 * chi(p), p) + Fraction(1, p * p)


# ---------------------------------------------------------------------------
# lattice data

INTERSECTION_BASIS = ("E1", "E2", "E3", "E4", "L1", "L2")
INTERSECTION_MATRIX = (
    (-2, 1, 1, 1, 0, 0),
    (1, -2, 0, 0, 0, 0),
    (1, 0, -2, 0, 1, 0),
    (1, 0, 0, -2, 0, 1),
    (0, 0, 1, 0, -1, 0),
    (0, 0, 0, 1, 0, -1),
)
ANTICANONICAL = (4, 2, 3, 3, 2, 2)
PICARD_RANK = 4  # invariant sublattice basis: E1, E2, E3 + E4, L1 + L2


def picard_lattice_checks() -> dict:
    """Verify the divisor-lattice identities; raises on any failure.

    Checks: symmetry, the diagonal (-2,-2,-2,-2,-1,-1), (-K)^2 = 4 (the
    degree), (-K).E_i = 0, (-K).L_j = 1, and the rank-4 invariant basis.
    """
    M = np.array(INTERSECTION_MATRIX, dtype=np.int64)
    K = np.array(ANTICANONICAL, dtype=np.int64)
    report = {}
    if not np.array_equal(M, M.T):
        raise DataIntegrityError("intersection matrix is not symmetric")
    if tuple(np.diag(M)) != (-2, -2, -2, -2, -1, -1):
        raise DataIntegrityError("unexpected self-intersections")
    MK = M @ K
    report["deg"] = int(K @ MK)
    report["K_dot_E"] = [int(v) for v in MK[:4]]
    report["K_dot_L"] = [int(v) for v in MK[4:]]
    report["picard_rank"] = PICARD_RANK
    if report["deg"] != 4:
        raise DataIntegrityError("(-K)^2 != 4")
    if report["K_dot_E"] != [0, 0, 0, 0]:
        raise DataIntegrityError("(-K).E_i != 0")
    if report["K_dot_L"] != [1, 1]:
        raise DataIntegrityError("(-K).L_j != 1")
    return report


def intersection_pairing(a, b) -> int:
    M = np.array(INTERSECTION_MATRIX, dtype=np.int64)
    return int(np.array(a) @ M @ np.array(b))


# ---------------------------------------------------------------------------
# the assembled bundle

def tamagawa_measure(omega_inf: float, tau: float) -> float:
    """pi^2 * omega_inf * tau / 16 (the L(1,chi)^2 = pi^2/16 limit folded in)."""
    return math.pi**2 * omega_inf * tau / 16


def leading_coefficient(c: float, tau: float) -> float:
    """(pi^2 / 576) * (2c) * tau: the expected leading coefficient of the
    degree-3 polynomial in log B multiplying B."""
    return math.pi**2 / 576 * (2 * c) * tau


def residue_display_coefficient(c: float, tau: float) -> float:
    """The alternative residue display (c / (3! * 4)) * (pi^2/16) * tau.

    Differs from ``leading_coefficient`` by a factor 4/3; reported separately
    and NOT used as the reference value (see the decisions record).
    """
    return (c / 24) * (math.pi**2 / 16) * tau


@dataclass(frozen=True)
class ConstantBundle:
    c: float
    c_error: float
    omega_inf: float
    omega_inf_error: float
    alpha: Fraction
    tau: float
    tau_tail: float
    beta_val: float
    beta_tail: float
    tau_H: float
    tau_H_error: float
    peyre: float
    peyre_error: float
    leading_coeff: float
    residue_display: float
    prime_cutoff: int
    quad_tol: float
    beta_cutoff: int


def constant_bundle(
    prime_cutoff: int = 10**6,
    quad_tol: float = 1e-12,
    beta_cutoff: int = 100,
) -> ConstantBundle:
    """Compute every constant with propagated error estimates.

    Cross-identities enforced: omega_inf = 16 c within 2 * quad_tol (both
    sides quadrature), and peyre = alpha * tau_H = leading coefficient.
    """
    from .arith import linear_term_constant

    c, c_err = real_density_integral(quad_tol)
    om, om_err = archimedean_density(quad_tol)
    if abs(om - 16 * c) > 2 * max(quad_tol, 1e-15) + om_err + 16 * c_err:
        raise DataIntegrityError("omega_inf != 16c beyond quadrature error")
    alpha = peyre_alpha()
    tau, tau_tail = tamagawa_euler_product(prime_cutoff)
    beta_val, beta_tail = linear_term_constant(beta_cutoff)
    tau_H = tamagawa_measure(om, tau)
    rel = tau_tail / tau + om_err / om
    lead = leading_coefficient(c, tau)
    return ConstantBundle(
        c=c, c_error=c_err,
        omega_inf=om, omega_inf_error=om_err,
        alpha=alpha,
        tau=tau, tau_tail=tau_tail,
        beta_val=beta_val, beta_tail=beta_tail,
        tau_H=tau_H, tau_H_error=abs(tau_H) * rel,
        peyre=float(alpha) * tau_H, peyre_error=float(alpha) * abs(tau_H) * rel,
        leading_coeff=lead,
        residue_display=residue_display_coefficient(c, tau),
        prime_cutoff=prime_cutoff, quad_tol=quad_tol, beta_cutoff=beta_cutoff,
    )
