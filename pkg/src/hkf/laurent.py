"""Exact arithmetic for one-variable Laurent polynomials over the integers.

A polynomial is a dict mapping integer exponents to nonzero integer
coefficients.  The empty dict is zero.  All functions return new dicts and
never mutate their arguments.
"""

from __future__ import annotations

from typing import Dict, Iterable, Tuple

Laurent = Dict[int, int]


def lzero() -> Laurent:
    return {}


def lone() -> Laurent:
    return {0: 1}


def lmono(exp: int, coeff: int = 1) -> Laurent:
    """The monomial coeff * t^exp."""
    return {exp: coeff} if coeff else {}


def ltrim(p: Laurent) -> Laurent:
    """Drop zero coefficients."""
    return {e: c for e, c in p.items() if c}


def ladd(p: Laurent, q: Laurent) -> Laurent:
    out = dict(p)
    for e, c in q.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def lneg(p: Laurent) -> Laurent:
    return {e: -c for e, c in p.items()}


def lsub(p: Laurent, q: Laurent) -> Laurent:
    return ladd(p, lneg(q))


def lscale(p: Laurent, coeff: int, exp: int = 0) -> Laurent:
    """Multiply by the monomial coeff * t^exp."""
    if coeff == 0:
        return {}
    return {e + exp: c * coeff for e, c in p.items()}


def lmul(p: Laurent, q: Laurent) -> Laurent:
    out: Laurent = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = e1 + e2
            s = out.get(e, 0) + c1 * c2
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def lpow(p: Laurent, n: int) -> Laurent:
    if n < 0:
        raise ValueError("negative power of a general Laurent polynomial")
    out = lone()
    for _ in range(n):
        out = lmul(out, p)
    return out


def linvert_var(p: Laurent) -> Laurent:
    """Substitute t -> 1/t."""
    return {-e: c for e, c in p.items()}


def leval_int(p: Laurent, t: int) -> int:
    """Evaluate at a nonzero integer argument; exponents may be negative."""
    if t == 0:
        raise ValueError("cannot evaluate a Laurent polynomial at 0")
    total = 0
    for e, c in p.items():
        if e >= 0:
            total += c * t**e
        else:
            val = t**(-e)
            num = c
            if num % val:
                raise ValueError("non-integer value at t=%d" % t)
            total += num // val
    return total


def lderiv(p: Laurent) -> Laurent:
    return {e - 1: c * e for e, c in p.items() if c * e}


def ldivmod_exact(p: Laurent, d: Laurent) -> Laurent:
    """Divide p by d, requiring the division to be exact.

    Both arguments are shifted to ordinary polynomials, long division runs
    from the top degree down, and every step must cancel cleanly.  Raises
    ValueError when d is zero or the division leaves a remainder.
    """
    d = ltrim(d)
    if not d:
        raise ValueError("division by zero polynomial")
    p = ltrim(p)
    if not p:
        return {}
    shift_p = min(p)
    shift_d = min(d)
    num = {e - shift_p: c for e, c in p.items()}
    den = {e - shift_d: c for e, c in d.items()}
    dtop = max(den)
    dlead = den[dtop]
    quot: Laurent = {}
    rem = dict(num)
    while rem:
        rtop = max(rem)
        if rtop < dtop:
            raise ValueError("inexact Laurent division (degree)")
        c = rem[rtop]
        if c % dlead:
            raise ValueError("inexact Laurent division (coefficient)")
        q = c // dlead
        qe = rtop - dtop
        quot[qe] = q
        for e, dc in den.items():
            s = rem.get(e + qe, 0) - q * dc
            if s:
                rem[e + qe] = s
            else:
                rem.pop(e + qe, None)
    return {e + shift_p - shift_d: c for e, c in quot.items()}


def lformat(p: Laurent, var: str = "t") -> str:
    """Human-readable form with ascending exponents, e.g. 't^-1 - 1 + t'."""
    if not p:
        return "0"
    parts = []
    for e in sorted(p):
        c = p[e]
        if e == 0:
            body = str(abs(c))
        else:
            stem = var if e == 1 else "%s^%d" % (var, e)
            body = stem if abs(c) == 1 else "%d*%s" % (abs(c), stem)
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


def lpairs(p: Laurent) -> Tuple[Tuple[int, int], ...]:
    """Sorted (exponent, coefficient) pairs, the canonical serialized form."""
    return tuple((e, p[e]) for e in sorted(p))


def lfrom_pairs(pairs: Iterable[Tuple[int, int]]) -> Laurent:
    out: Laurent = {}
    for e, c in pairs:
        if c:
            out[int(e)] = out.get(int(e), 0) + int(c)
    return ltrim(out)
