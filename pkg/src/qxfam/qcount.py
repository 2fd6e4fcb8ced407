"""Closed-form counts, family sizes, thresholds and bounds.

Everything here is exact integer arithmetic.  Products whose upper index
falls below the lower index are empty and evaluate to 1.  Gaussian binomials
vanish for a negative lower index and whenever 0 <= a < b; theta_a vanishes
for a <= 0.

The singular-space parameters are ``q`` (field order), ``n`` (dimension of
the complement of W) and ``ell`` (dimension of W).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import HypothesisViolated, NonIntegral

__all__ = [
    "gauss",
    "theta",
    "pascal_check",
    "sandwich_check",
    "nprime",
    "fprime",
    "h1_size",
    "h2_size",
    "h3_size",
    "valid_c",
    "lemma41_count",
    "lemma42_count",
    "bound_fs",
    "bound_tau_large",
    "bound_tau_large_simplified",
    "bound_nonint_tset",
    "bounds_covering_t",
]


def _require(cond: bool, what: str) -> None:
    if not cond:
        raise HypothesisViolated(what)


def _check_q(q: int) -> None:
    _require(isinstance(q, int) and q >= 2, f"q >= 2 (got q={q})")


def _prod(lo: int, hi: int, term) -> int:
    out = 1
    for j in range(lo, hi + 1):
        out *= term(j)
    return out


def _count(value: int) -> int:
    assert value >= 0, value
    return value


def gauss(a: int, b: int, q: int) -> int:
    """Number of b-dimensional subspaces of an a-dimensional space over F_q."""
    _check_q(q)
    if b < 0:
        return 0
    if b == 0:
        return 1
    if a < b:
        return 0
    num = den = 1
    for i in range(b):
        num *= q ** (a - i) - 1
        den *= q ** (b - i) - 1
    value, rem = divmod(num, den)
    assert rem == 0
    return value


def theta(a: int, q: int) -> int:
    _check_q(q)
    if a <= 0:
        return 0
    return (q**a - 1) // (q - 1)


def pascal_check(m: int, i: int, q: int) -> bool:
    """The q-Pascal recurrence [m, i] = [m-1, i-1] + q^i [m-1, i]."""
    _require(0 < i < m, f"0 < i < m (got i={i}, m={m})")
    return gauss(m, i, q) == gauss(m - 1, i - 1, q) + q**i * gauss(m - 1, i, q)


def sandwich_check(m: int, i: int, q: int) -> bool:
    """q^(m-i) < (q^m - 1)/(q^i - 1) < q^(m-i+1), checked without division."""
    _require(0 < i < m, f"0 < i < m (got i={i}, m={m})")
    _check_q(q)
    num, den = q**m - 1, q**i - 1
    return q ** (m - i) * den < num < q ** (m - i + 1) * den


def nprime(q: int, n: int, ell: int, m1: int, h1: int, m: int, h: int) -> int:
    """Number of (m, h)-subspaces containing a fixed (m1, h1)-subspace."""
    _check_q(q)
    _require(0 <= h1 <= h <= ell, f"0 <= h1 <= h <= ell (got h1={h1}, h={h}, ell={ell})")
    _require(
        0 <= m1 - h1 <= m - h <= n,
        f"0 <= m1-h1 <= m-h <= n (got m1-h1={m1 - h1}, m-h={m - h}, n={n})",
    )
    d1, d = m1 - h1, m - h
    value = q ** ((ell - h) * (d - d1)) * gauss(n - d1, d - d1, q) * gauss(ell - h1, h - h1, q)
    return _count(value)


def _check_t(n: int, t: int) -> None:
    _require(1 <= t <= n - 2, f"1 <= t <= n-2 (got t={t}, n={n})")


def fprime(q: int, n: int, ell: int, t: int) -> int:
    """Size threshold above which a maximal non-trivial family is one of the three constructions."""
    _check_q(q)
    _check_t(n, t)
    _require(ell >= n, f"ell >= n (got ell={ell}, n={n})")
    value = q ** (ell * (n - t - 1) + 1) * theta(n - t - 1, q) - q ** (
        ell * (n - t - 2) + 3
    ) * gauss(n - t - 1, 2, q)
    return _count(value)


def h1_size(q: int, n: int, ell: int, t: int) -> int:
    _check_q(q)
    _check_t(n, t)
    _require(ell >= n + 1, f"ell >= n+1 (got ell={ell}, n={n})")
    value = (
        q ** (ell * (n - t))
        - _prod(1, n - t, lambda j: q**ell - q**j)
        + q ** (n - t) * (q**t - 1)
    )
    return _count(value)


def valid_c(n: int, ell: int, t: int) -> list[int]:
    """Admissible dimensions of the outer subspace C in the second construction."""
    return sorted(set(range(n + 1, 2 * n - t + 1)) | {n + ell})


def h2_size(q: int, n: int, ell: int, t: int, k: int, c: int) -> int:
    """Size of the second construction with M of type (n, k) and C of type (c, c-n)."""
    _check_q(q)
    _check_t(n, t)
    _require(ell >= n + 1, f"ell >= n+1 (got ell={ell}, n={n})")
    _require(k in (0, 1), f"k in {{0, 1}} (got k={k})")
    _require(c in valid_c(n, ell, t), f"c in {{n+1..2n-t}} ∪ {{n+ell}} (got c={c})")
    base = q ** (ell * (n - t))
    tail = _prod(0, 2 * n - c - t - 1, lambda j: q**ell - q ** (c - n + j))
    if k == 0:
        a_miss = _prod(0, n - t - 1, lambda j: q**ell - q**j)
        b_part = _prod(0, c - n - 1, lambda i: q ** (n - t) - q**i) * tail
        c_part = q ** (n - t) * (q ** (c - n) - 1) * theta(t, q)
    else:
        a_miss = q**ell * _prod(1, n - t - 1, lambda j: q**ell - q**j)
        b_part = q ** (n - t) * _prod(1, c - n - 1, lambda i: q ** (n - t) - q**i) * tail
        c_part = q ** (c - t - 1) * (q**t - 1)
    return _count(base - a_miss + b_part + c_part)


def h3_size(q: int, n: int, ell: int, t: int, k: int) -> int:
    """Size of the family of (n,0)-subspaces meeting a (t+2, k)-subspace in dim >= t+1."""
    _check_q(q)
    _check_t(n, t)
    _require(ell >= n, f"ell >= n (got ell={ell}, n={n})")
    _require(k in (0, 1), f"k in {{0, 1}} (got k={k})")
    if k == 0:
        value = q ** (ell * (n - t - 1)) * theta(t + 2, q) - q ** (
            ell * (n - t - 2) + 1
        ) * theta(t + 1, q)
    else:
        value = q ** (ell * (n - t - 1) + t + 1)
    return _count(value)


def _integral(value: Fraction) -> int:
    if value.denominator != 1:
        raise NonIntegral(f"product evaluates to {value}")
    return _count(int(value))


def lemma41_count(q: int, n: int, ell: int, r: int, m: int, a: int) -> int:
    """(a,0)-subspaces F with F ∩ E = O, for E of type (n+r, r) and O of type (m, 0)."""
    _check_q(q)
    _require(0 <= r <= ell, f"0 <= r <= ell (got r={r})")
    _require(0 <= m <= a <= n, f"0 <= m <= a <= n (got m={m}, a={a}, n={n})")
    value = Fraction(1)
    for j in range(a - m):
        value *= Fraction(
            (q**ell - q ** (r + j)) * (q**n - q ** (m + j)), q**a - q ** (m + j)
        )
    return _integral(value)


def lemma42_count(q: int, n: int, ell: int, m: int, a: int) -> int:
    """As lemma41_count for E of type (n, 1), additionally requiring F ⊄ W + E."""
    _check_q(q)
    _require(ell >= 1, f"ell >= 1 (got ell={ell})")
    _require(0 <= m and m + 1 <= a <= n, f"m+1 <= a <= n (got m={m}, a={a}, n={n})")
    value = Fraction(q ** (n + ell - a))
    for j in range(1, a - m):
        value *= Fraction((q**ell - q**j) * (q**n - q ** (m + j)), q**a - q ** (m + j))
    return _integral(value)


def bound_fs(q: int, n: int, ell: int, t: int, s: int, r: int) -> int:
    """Upper bound on the members containing an (s,0)-subspace S that some member meets in dim r."""
    _check_q(q)
    _require(t >= 1, f"t >= 1 (got t={t})")
    _require(t - 1 <= s <= n - 1, f"t-1 <= s <= n-1 (got s={s})")
    _require(0 <= r <= t - 1, f"0 <= r <= t-1 (got r={r})")
    _require(r <= s, f"r <= s (got r={r}, s={s})")
    _require(n >= s + t - r, f"n >= s+t-r (got n={n}, s+t-r={s + t - r})")
    value = q ** (ell * (n - s - t + r) + (t - r) * (s - r)) * gauss(n - s, t - r, q)
    return _count(value)


def _check_tau_large(q: int, n: int, ell: int, t: int) -> None:
    _check_q(q)
    _check_t(n, t)
    _require(n <= ell, f"n <= ell (got n={n}, ell={ell})")


def bound_tau_large(q: int, n: int, ell: int, t: int, m: int) -> int:
    """Bound for maximal families whose t-covering number m is at least t+2."""
    _check_tau_large(q, n, ell, t)
    _require(t + 2 <= m <= n, f"t+2 <= m <= n (got m={m})")
    value = (
        q ** (ell * (n - m) + 2 * m - 2 * t - 1)
        * theta(n - m + 1, q)
        * theta(n - m + 2, q)
        * gauss(m, t, q)
        * _prod(1, m - t - 2, lambda j: q ** (t + j - 1) * theta(n - t - j + 1, q))
    )
    return _count(value)


def bound_tau_large_simplified(q: int, n: int, ell: int, t: int) -> int:
    """The m-free form of bound_tau_large, valid once ell >= n+t+1."""
    _check_tau_large(q, n, ell, t)
    _require(ell >= n + t + 1, f"ell >= n+t+1 (got ell={ell})")
    value = (
        q ** (ell * (n - t - 2) + 3)
        * theta(n - t - 1, q)
        * theta(n - t, q)
        * gauss(t + 2, 2, q)
    )
    return _count(value)


def _power_term(coeff: int, q: int, exp: int) -> int:
    # coeff * q^exp; a negative exponent is only allowed against a zero coefficient
    if coeff == 0:
        return 0
    _require(exp >= 0, f"exponent {exp} < 0 with nonzero coefficient {coeff}")
    return coeff * q**exp


def bound_nonint_tset(q: int, n: int, ell: int, t: int) -> int:
    """Bound for maximal families whose (t+1)-covering set is not t-intersecting."""
    _check_q(q)
    _check_t(n, t)
    value = (
        _power_term((q + 1) ** 2, q, ell * (n - t - 1))
        + _power_term((q * q + 2 * q + 2) * theta(t - 1, q), q, ell * (n - t - 2) + 2)
        + _power_term(theta(t - 1, q) * theta(t - 2, q), q, ell * (n - t - 3) + 5)
    )
    return _count(value)


def bounds_covering_t(q: int, n: int, ell: int, t: int, dim_m: int) -> int:
    """Bounds for families whose covering set is t-intersecting, by dim of its span."""
    _check_q(q)
    _check_t(n, t)
    _require(n + 1 <= ell, f"n+1 <= ell (got n={n}, ell={ell})")
    if dim_m == t + 1:
        value = q ** (ell * (n - t - 1)) + (q * theta(n - t, q) - 1) * q ** (
            ell * (n - t - 2) + 2
        ) * theta(t + 1, q) * theta(n - t - 1, q)
    elif dim_m == t + 2:
        _require(t + 2 <= n - 1, f"dim M = t+2 <= n-1 (got t+2={t + 2}, n-1={n - 1})")
        value = q ** (ell * (n - t - 1)) * (q + 1) + q ** (ell * (n - t - 2) + 2) * (
            q ** (n - t + 1) + q ** (t + 2) - 2 * q
        ) * theta(n - t - 1, q)
    else:
        _require(
            t + 3 <= dim_m <= n - 1,
            f"dim M in {{t+1, t+2, t+3..n-1}} (got dim M={dim_m})",
        )
        value = (
            q ** (ell * (n - t - 1)) * theta(n - t - 1, q)
            + q ** (ell * (n - t - 2) + 3) * theta(n - t, q) * theta(n - t - 1, q)
            + q ** (ell * (n - t - 2) + t + 3)
        )
    return _count(value)
