"""Truncated derivative stacks ("jets") of sampled fields.

A jet is a list [f, f', f'', ...] of equal-length sample arrays.  The
transformation formulas divide exponentially large fields and extract order-1
residues; carrying derivatives algebraically (Leibniz / quotient recurrences)
instead of re-differentiating numerically keeps those residues clean.
"""
from __future__ import annotations

from math import comb

import numpy as np

Jet = list  # list[np.ndarray]


def jet_from_arrays(*arrays) -> Jet:
    return [np.asarray(a, dtype=float) for a in arrays]


def jet_shift(a: Jet) -> Jet:
    """The derivative jet: loses one order."""
    if len(a) < 2:
        raise ValueError("cannot shift a jet with no stored derivative")
    return a[1:]


def jet_add(a: Jet, b: Jet) -> Jet:
    return [x + y for x, y in zip(a, b)]

def jet_sub(a: Jet, b: Jet) -> Jet:
    return [x - y for x, y in zip(a, b)]


def jet_scale(a: Jet, c: float) -> Jet:
    return [c * x for x in a]


def jet_const(value: float, like: Jet) -> Jet:
    out = [np.full_like(like[0], value)]
    out.extend(np.zeros_like(like[0]) for _ in like[1:])
    return out


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Leibniz product up to the common available order."""
    order = min(len(a), len(b))
    return [
        sum(comb(m, i) * a[i] * b[m - i] for i in range(m + 1))
        for m in range(order)
    ]


def jet_div(n: Jet, d: Jet) -> Jet:
    """Quotient h = n/d from n^(m) = sum C(m,i) h^(i) d^(m-i)."""
    order = min(len(n), len(d))
    h: Jet = []
    for m in range(order):
        acc = n[m].copy()
        for i in range(m):
            acc -= comb(m, i) * h[i] * d[m - i]
        h.append(acc / d[0])
    return h


def jet_integrate(values: np.ndarray, integrand: Jet) -> Jet:
    """Jet of an antiderivative: the sampled values plus the integrand stack."""
    return [np.asarray(values, dtype=float), *integrand]
