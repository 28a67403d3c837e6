"""Gegenbauer polynomials, one-dimensional and multivariate.

The multivariate polynomial of dimension parameter n, level m and degree
k is, for |u|, |v| < 1,

    ((1-|u|^2)(1-|v|^2))^(k/2) * G_k^{(n-m)}( (t-<u,v>) / sqrt((1-|u|^2)(1-|v|^2)) )

with G normalized so G(1) = 1.  All evaluation here is division-free:
the parity of G_k^{(n-m)} makes every square root removable, so the
boundary |u| = 1 evaluates exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb

import numpy as np

from .randgen import rng_for

__all__ = [
    "GegenbauerPolynomial",
    "AdditionCoefficients",
    "OrthogonalityEstimate",
    "eval_1d",
    "coeffs_1d",
    "eval_mv",
    "domain_gap",
    "in_domain",
    "monomial_exponents",
    "monomial_vector",
    "z_outer",
    "addition_coefficients",
    "addition_term",
    "addition_residual",
    "expand_in_t",
    "gegenbauer_expansion",
    "orthogonality_mc",
    "orthogonality_quad",
]


@dataclass(frozen=True)
class GegenbauerPolynomial:
    """Monomial coefficients of the degree-k polynomial: coeffs[j] multiplies t^j."""

    n: int
    k: int
    coeffs: tuple[float, ...]


@dataclass(frozen=True)
class AdditionCoefficients:
    """Positive coefficients c[s], s = 0..k, of the classical addition identity."""

    n: int
    k: int
    c: tuple[float, ...]


@dataclass(frozen=True)
class OrthogonalityEstimate:
    estimate: float
    stderr: float
    samples: int


def _check_nk(n: int, k: int) -> None:
    if n < 2:
        raise ValueError(f"dimension parameter must be >= 2, got {n}")
    if k < 0:
        raise ValueError(f"degree must be >= 0, got {k}")


def eval_1d(n: int, k: int, t):
    """G_k for dimension parameter n at t (scalar or array), by recurrence."""
    _check_nk(n, k)
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if k == 0:
        return prev if prev.ndim else float(prev)
    cur = t.copy()
    for j in range(2, k + 1):
        prev, cur = cur, ((2 * j + n - 4) * t * cur - (j - 1) * prev) / (j + n - 3)
    return cur if cur.ndim else float(cur)


@lru_cache(maxsize=None)
def coeffs_1d(n: int, k: int) -> GegenbauerPolynomial:
    """Monomial coefficient form, built by the same three-term recurrence."""
    _check_nk(n, k)
    prev = np.array([1.0])
    if k == 0:
        return GegenbauerPolynomial(n, 0, (1.0,))
    cur = np.array([0.0, 1.0])
    for j in range(2, k + 1):
        nxt = np.zeros(j + 1)
        nxt[1:] = (2 * j + n - 4) * cur
        nxt[: j - 1] -= (j - 1) * prev
        nxt /= j + n - 3
        prev, cur = cur, nxt
    return GegenbauerPolynomial(n, k, tuple(cur))


def _homogeneous_eval(coeffs: tuple[float, ...], d, e):
    """Sum of coeffs[j] * d^j * e^((k-j)/2) over j with the parity of k.

    d and e may be scalars or broadcastable arrays; e >= 0 is assumed.
    The exponent (k-j)/2 is an integer whenever coeffs[j] != 0.
    """
    d = np.asarray(d, dtype=float)
    e = np.asarray(e, dtype=float)
    k = len(coeffs) - 1
    out = np.zeros(np.broadcast(d, e).shape)
    for j in range(k % 2, k + 1, 2):
        c = coeffs[j]
        if c != 0.0:
            out += c * d**j * e ** ((k - j) // 2)
    return out if out.ndim else float(out)


def _uv_arrays(u, v, m: int) -> tuple[np.ndarray, np.ndarray]:
    u = np.asarray(u, dtype=float).reshape(-1)
    v = np.asarray(v, dtype=float).reshape(-1)
    if u.size != m or v.size != m:
        raise ValueError(f"u and v must have length m={m}")
    return u, v


def eval_mv(n: int, m: int, k: int, t: float, u=(), v=()) -> float:
    """Multivariate Gegenbauer value at (t, u, v), division-free."""
    if m < 0 or m > n - 2:
        raise ValueError(f"level m={m} out of range [0, {n - 2}]")
    _check_nk(n - m, k)
    u, v = _uv_arrays(u, v, m)
    d = t - float(u @ v)
    e = (1.0 - float(u @ u)) * (1.0 - float(v @ v))
    return _homogeneous_eval(coeffs_1d(n - m, k).coeffs, d, e)


def domain_gap(t: float, u, v) -> float:
    """(1-|u|^2)(1-|v|^2) - (t-<u,v>)^2, the bordered-identity determinant.

    Nonnegative (together with |u| <= 1) exactly on the natural domain of
    the multivariate polynomials.
    """
    u = np.asarray(u, dtype=float).reshape(-1)
    v = np.asarray(v, dtype=float).reshape(-1)
    return (1.0 - float(u @ u)) * (1.0 - float(v @ v)) - (t - float(u @ v)) ** 2


def in_domain(t: float, u, v, tol: float = 1e-12) -> bool:
    u = np.asarray(u, dtype=float).reshape(-1)
    v = np.asarray(v, dtype=float).reshape(-1)
    return domain_gap(t, u, v) >= -tol and float(u @ u) <= 1.0 + tol


@lru_cache(maxsize=None)
def monomial_exponents(m: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Exponent tuples of all monomials in m variables of total degree <= d,
    graded, and within each degree ordered as x1^g, x1^{g-1}x2, ..., xm^g."""
    if m < 1 or d < 0:
        raise ValueError("need m >= 1 and d >= 0")
    out = []
    for g in range(d + 1):
        for combo in combinations_with_replacement(range(m), g):
            exp = [0] * m
            for i in combo:
                exp[i] += 1
            out.append(tuple(exp))
    return tuple(out)


def monomial_vector(x, d: int) -> np.ndarray:
    """All monomials of x of total degree <= d in graded lexicographic order."""
    x = np.asarray(x, dtype=float).reshape(-1)
    m = x.size
    if m == 0:
        return np.ones(1)
    exps = monomial_exponents(m, d)
    return np.array([np.prod(x**np.array(e)) for e in exps])


def z_outer(u, v, d: int) -> np.ndarray:
    """Outer product of the monomial vectors of u and v."""
    u = np.asarray(u, dtype=float).reshape(-1)
    v = np.asarray(v, dtype=float).reshape(-1)
    if u.size != v.size:
        raise ValueError("u and v must have the same length")
    zu = monomial_vector(u, d)
    zv = monomial_vector(v, d)
    return np.outer(zu, zv)


def _gauss_legendre(nodes: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(nodes)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


_PROJECTION_NODES = 64
_THETA_CANDIDATES = (0.6, 0.8, 1.0, 1.2, 1.4)


@lru_cache(maxsize=None)
def addition_coefficients(n: int, k: int) -> AdditionCoefficients:
    """Coefficients of the classical addition identity, recovered numerically.

    For each s the identity at theta_1 = theta_2 = theta is projected onto
    G_s of dimension parameter n-1 with Gauss-Legendre quadrature in the
    angle phi against weight (sin phi)^(n-3); theta is chosen from a short
    candidate list to keep the s-term projector well conditioned.
    """
    if n < 3:
        raise ValueError(f"dimension parameter must be >= 3, got {n}")
    _check_nk(n, k)
    if k == 0:
        return AdditionCoefficients(n, 0, (1.0,))

    phi, wphi = _gauss_legendre(_PROJECTION_NODES, 0.0, np.pi)
    x = np.cos(phi)
    weight = wphi * np.sin(phi) ** (n - 3)

    c = np.empty(k + 1)
    for s in range(k + 1):
        gs = eval_1d(n - 1, s, x)
        norm_s = float(np.sum(gs * gs * weight))
        # pick theta with the largest projector denominator
        best = None
        for theta in _THETA_CANDIDATES:
            denom = (
                eval_1d(n + 2 * s, k - s, np.cos(theta)) ** 2 * np.sin(theta) ** (2 * s)
            )
            if best is None or abs(denom) > abs(best[1]):
                best = (theta, denom)
        theta, denom = best
        lhs = eval_1d(
            n, k, np.cos(theta) ** 2 + np.sin(theta) ** 2 * x
        )
        proj = float(np.sum(lhs * gs * weight))
        c[s] = proj / (norm_s * denom)

    if abs(c[0] - 1.0) > 1e-9:
        raise ArithmeticError(
            f"recovered c[0] = {c[0]!r} differs from 1; quadrature order too low"
        )
    residual = _addition_residual(n, k, tuple(c))
    if residual > 1e-8:
        raise ArithmeticError(
            f"addition identity residual {residual:.3e} exceeds 1e-8"
        )
    return AdditionCoefficients(n, k, tuple(c))


def _addition_residual(n: int, k: int, c: tuple[float, ...]) -> float:
    """Max residual of the addition identity at seeded random angle triples."""
    rng = rng_for(0x5EED, n, k)
    worst = 0.0
    for _ in range(50):
        t1, t2, phi = rng.uniform(0.1, np.pi - 0.1, size=3)
        lhs = eval_1d(
            n, k, np.cos(t1) * np.cos(t2) + np.sin(t1) * np.sin(t2) * np.cos(phi)
        )
        rhs = 0.0
        for s in range(k + 1):
            rhs += (
                c[s]
                * eval_1d(n + 2 * s, k - s, np.cos(t1))
                * eval_1d(n + 2 * s, k - s, np.cos(t2))
                * (np.sin(t1) * np.sin(t2)) ** s
                * eval_1d(n - 1, s, np.cos(phi))
            )
        worst = max(worst, abs(lhs - rhs))
    return worst


def addition_term(u, n: int, m: int, k: int, s: int) -> float:
    """The degree-(k-s) anchor polynomial of the level-raising identity.

    With nu = n - m + 1 (the effective dimension parameter at level m-1),
    equals sqrt(c[s]) * w^(k-s) * G_{k-s} of dimension parameter nu+2s at
    u_m / w, with w^2 = 1 - u_1^2 - ... - u_{m-1}^2, evaluated through the
    homogenized monomial form so w = 0 is regular.  The coefficients c are
    the addition coefficients for (nu, k).
    """
    if not 1 <= m <= n - 2:
        raise ValueError(f"level m={m} out of range [1, {n - 2}]")
    if not 0 <= s <= k:
        raise ValueError(f"index s={s} out of range [0, {k}]")
    u = np.asarray(u, dtype=float).reshape(-1)
    if u.size != m:
        raise ValueError(f"u must have length m={m}")
    nu = n - m + 1
    w2 = 1.0 - float(u[: m - 1] @ u[: m - 1])
    um = float(u[m - 1])
    coeffs = coeffs_1d(nu + 2 * s, k - s).coeffs
    d = k - s
    val = 0.0
    for j in range(d % 2, d + 1, 2):
        if coeffs[j] != 0.0:
            val += coeffs[j] * um**j * w2 ** ((d - j) // 2)
    root = addition_coefficients(nu, k).c[s]
    return float(np.sqrt(root) * val)


def _t_power_coefficient(n: int, m: int, k: int, i: int):
    """Coefficient function of t^i in the level-m polynomial of degree k."""
    coeffs = coeffs_1d(n - m, k).coeffs

    def g(u, v) -> float:
        u_ = np.asarray(u, dtype=float).reshape(-1)
        v_ = np.asarray(v, dtype=float).reshape(-1)
        ip = float(u_ @ v_)
        e = (1.0 - float(u_ @ u_)) * (1.0 - float(v_ @ v_))
        total = 0.0
        for j in range(i, k + 1):
            if coeffs[j] != 0.0:
                total += coeffs[j] * comb(j, i) * (-ip) ** (j - i) * e ** ((k - j) // 2)
        return total

    return g


def expand_in_t(coeff_fns, n: int, m: int):
    """Rewrite a t-polynomial with (u, v) coefficient functions in the
    multivariate Gegenbauer basis of level m.

    coeff_fns[i] is the coefficient function of t^i (a callable of (u, v);
    for m = 0 it is called with empty vectors).  Returns callables
    f_0, ..., f_d with  F(t,u,v) = sum_k f_k(u,v) * basis_k(t,u,v).

    Extraction peels from the top t-degree down: the t^k coefficient of
    the degree-k basis element is the constant leading monomial
    coefficient of the one-dimensional polynomial.
    """
    if m < 0 or m > n - 2:
        raise ValueError(f"level m={m} out of range [0, {n - 2}]")
    d = len(coeff_fns) - 1
    cur = [fn for fn in coeff_fns]
    extracted: list = [None] * (d + 1)
    for k in range(d, -1, -1):
        lead = coeffs_1d(n - m, k).coeffs[k]
        top = cur[k]

        def f_k(u, v, top=top, lead=lead) -> float:
            return top(u, v) / lead

        extracted[k] = f_k
        for i in range(k):
            g = _t_power_coefficient(n, m, k, i)

            def reduced(u, v, old=cur[i], fk=f_k, g=g) -> float:
                return old(u, v) - fk(u, v) * g(u, v)

            cur[i] = reduced
    return extracted


def gegenbauer_expansion(poly_coeffs, n: int) -> np.ndarray:
    """One-dimensional expansion: monomial coefficients -> basis coefficients."""
    p = np.array(poly_coeffs, dtype=float)
    d = p.size - 1
    out = np.zeros(d + 1)
    for k in range(d, -1, -1):
        basis = np.array(coeffs_1d(n, k).coeffs)
        out[k] = p[k] / basis[k]
        p[: k + 1] -= out[k] * basis
    return out


def _sphere_sample(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    g = rng.standard_normal((count, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def orthogonality_mc(
    n: int, m: int, k: int, l: int, f=None, samples: int = 1_000_000, seed: int = 0
) -> OrthogonalityEstimate:
    """Monte Carlo estimate of the sphere-pair integral of G_k * G_l * f.

    The estimate is the mean against the normalized uniform product
    measure on two spheres; for k != l it should sit within a few
    standard errors of zero for any continuous weight f(u, v).
    """
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    if m < 0 or m > n - 2:
        raise ValueError(f"level m={m} out of range [0, {n - 2}]")
    rng = rng_for(seed, n, m, k, l)
    x = _sphere_sample(rng, n, samples)
    y = _sphere_sample(rng, n, samples)
    u = x[:, :m]
    v = y[:, :m]
    t = np.einsum("ij,ij->i", x, y)
    d = t - np.einsum("ij,ij->i", u, v)
    e = (1.0 - np.einsum("ij,ij->i", u, u)) * (1.0 - np.einsum("ij,ij->i", v, v))
    vals = _homogeneous_eval(coeffs_1d(n - m, k).coeffs, d, e)
    vals = vals * _homogeneous_eval(coeffs_1d(n - m, l).coeffs, d, e)
    if f is not None:
        vals = vals * np.asarray(f(u, v), dtype=float)
    est = float(np.mean(vals))
    err = float(np.std(vals, ddof=1) / np.sqrt(samples))
    return OrthogonalityEstimate(est, err, samples)


def _ball_quadrature(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes (P, m) and weights for integration over the unit m-ball."""
    if m == 0:
        return np.zeros((1, 0)), np.ones(1)
    if m == 1:
        x, w = _gauss_legendre(32, -1.0, 1.0)
        return x[:, None], w
    if m == 2:
        r, wr = _gauss_legendre(16, 0.0, 1.0)
        na = 32
        ang = 2.0 * np.pi * np.arange(na) / na
        pts = np.stack(
            [
                np.outer(r, np.cos(ang)).ravel(),
                np.outer(r, np.sin(ang)).ravel(),
            ],
            axis=1,
        )
        w = np.outer(wr * r, np.full(na, 2.0 * np.pi / na)).ravel()
        return pts, w
    raise ValueError("tensorized ball quadrature supports m <= 2 only")


def orthogonality_quad(n: int, m: int, k: int, l: int, q=None) -> float:
    """Deterministic quadrature of the weighted orthogonality integral.

    Uses the substitution t = s * sqrt((1-|u|^2)(1-|v|^2)) + <u,v>, with
    Gauss-Legendre in the angle of s and polar quadrature over the unit
    balls in u and v.  Returns the value of the integral; for k != l it
    vanishes to quadrature precision.
    """
    if m < 0 or m > 2:
        raise ValueError("deterministic quadrature supports m <= 2 only")
    if m > n - 2:
        raise ValueError(f"level m={m} out of range [0, {n - 2}]")
    nm = n - m
    ns = max(32, k + l + 8)
    phi, wphi = _gauss_legendre(ns, 0.0, np.pi)
    s = np.cos(phi)
    ws = wphi * np.sin(phi) ** (nm - 2)

    pts, wb = _ball_quadrature(m)
    # all (u, v) pairs on the tensor grid
    pu = np.repeat(pts, pts.shape[0], axis=0)
    pv = np.tile(pts, (pts.shape[0], 1))
    wp = np.outer(wb, wb).ravel()
    ip = np.einsum("ij,ij->i", pu, pv)
    e = (1.0 - np.einsum("ij,ij->i", pu, pu)) * (1.0 - np.einsum("ij,ij->i", pv, pv))
    qvals = np.ones_like(e) if q is None else np.asarray(q(pu, pv), dtype=float)
    # (1-s^2)^((n-m-3)/2) is folded into ws; the remaining u,v factor is
    # rho * dt/ds = e^((n-m-2)/2), nonnegative for every m <= n-2
    pair_part = wp * qvals * e ** ((nm - 2) / 2.0)

    ck = coeffs_1d(nm, k).coeffs
    cl = coeffs_1d(nm, l).coeffs
    total = 0.0
    sqrt_e = np.sqrt(e)
    for si, wsi in zip(s, ws):
        d = si * sqrt_e
        vals = _homogeneous_eval(ck, d, e) * _homogeneous_eval(cl, d, e)
        total += wsi * float(np.sum(vals * pair_part))
    return total


def addition_residual(n: int, m: int, k: int, samples: int = 100, seed: int = 0) -> float:
    """Max residual of the level-raising identity at random valid triples.

    Compares the level-(m-1) polynomial at (t, u', v') with the sum over s
    of anchor-polynomial products times level-m polynomials, where u and v
    extend u' and v' by one ball coordinate.  For exact coefficients the
    residual is at machine precision.
    """
    if not 1 <= m <= n - 2:
        raise ValueError(f"level m={m} out of range [1, {n - 2}]")
    rng = rng_for(seed, n, m, k)
    worst = 0.0
    for _ in range(samples):
        u = rng.uniform(-1.0, 1.0, size=m)
        v = rng.uniform(-1.0, 1.0, size=m)
        for w in (u, v):
            nw = np.linalg.norm(w)
            if nw >= 1.0:
                w *= rng.uniform(0.0, 0.999) / nw
        e = (1.0 - float(u @ u)) * (1.0 - float(v @ v))
        t = float(u @ v) + rng.uniform(-1.0, 1.0) * np.sqrt(e)
        lhs = eval_mv(n, m - 1, k, t, u[: m - 1], v[: m - 1])
        rhs = sum(
            addition_term(u, n, m, k, s)
            * addition_term(v, n, m, k, s)
            * eval_mv(n, m, s, t, u, v)
            for s in range(k + 1)
        )
        worst = max(worst, abs(lhs - rhs))
    return worst
