"""Witness triples certifying the 4/3 lower bound on abelian groups.

A witness is (u, v, w) with u, v in S, u+w in S, and both v+w and v-w outside
S.  Pairing mu against the fixed test function

    f(x) = (x,u) [2 + 2 (x,w) + (1/2)(x,-w)] + (x,v) [2 - (x,w) - (x,-w)]

gives an integral of modulus 6 or 13/2 while sup|f| = 9/2 identically, so any
witness forces bs_norm(S) >= 6/(9/2) = 4/3.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bs import mu_values
from .groups import Group, character_value, subset_elements, validate_mask

SUP_NORM_F = 4.5


@dataclass(frozen=True)
class WitnessTriple:
    u: int
    v: int
    w: int

    def to_dict(self) -> dict:
        return {"u": self.u, "v": self.v, "w": self.w}


def _member(group: Group, mask: int, *parts: int) -> bool:
    total = group.identity
    for p in parts:
        total = group.mul(total, p)
    return bool((mask >> total) & 1)


def make_witness(group: Group, mask: int, u: int, v: int, w: int) -> WitnessTriple:
    """Validated witness construction; raises if the membership pattern fails."""
    group._require_abelian()
    mask = validate_mask(group, mask)
    w_inv = group.inv(w)
    ok = (_member(group, mask, u) and _member(group, mask, v)
          and _member(group, mask, u, w)
          and not _member(group, mask, v, w)
          and not _member(group, mask, v, w_inv))
    if not ok:
        raise ValueError(f"(u={u}, v={v}, w={w}) is not a valid witness for this subset")
    return WitnessTriple(u=u, v=v, w=w)


def find_witness(group: Group, mask: int) -> Optional[WitnessTriple]:
    """First witness in lexicographic (u, v, w) order, or None.

    Cosets never admit one, and neither does any union of two cosets observed
    in the bundled sweeps; sets outside those classes frequently do.
    """
    group._require_abelian()
    mask = validate_mask(group, mask)
    members = subset_elements(mask)
    for u in members:
        for v in members:
            for w in group.elements():
                if (_member(group, mask, u, w)
                        and not _member(group, mask, v, w)
                        and not _member(group, mask, v, group.inv(w))):
                    return WitnessTriple(u=u, v=v, w=w)
    return None


def witness_integral(group: Group, mask: int, triple: WitnessTriple) -> complex:
    """Integral of the test function against mu, computed two independent ways.

    (a) Membership formula: 2 chi(u) + 2 chi(u+w) + (1/2) chi(u-w) + 2 chi(v)
        - chi(v+w) - chi(v-w); for a valid witness this is 6 or 13/2 depending
        on whether u-w lies in S.
    (b) Numerically: sum_x f(x) mu(x) over the whole group.
    The two paths must agree to 1e-10; disagreement raises ArithmeticError.
    """
    triple = make_witness(group, mask, triple.u, triple.v, triple.w)
    u, v, w = triple.u, triple.v, triple.w
    w_inv = group.inv(w)

    def chi(*parts: int) -> float:
        return 1.0 if _member(group, mask, *parts) else 0.0

    formula = (2 * chi(u) + 2 * chi(u, w) + 0.5 * chi(u, w_inv)
               + 2 * chi(v) - chi(v, w) - chi(v, w_inv))

    mu = mu_values(group, mask)
    total = 0j
    for x in group.elements():
        cw = character_value(group, x, w)
        f_x = (character_value(group, x, u) * (2 + 2 * cw + 0.5 * np.conj(cw))
               + character_value(group, x, v) * (2 - cw - np.conj(cw)))
        total += f_x * mu[x]
    if abs(total - formula) > 1e-10:
        raise ArithmeticError(
            f"test-function integral mismatch: formula {formula} vs numeric {total}")
    return complex(formula)


def witness_norm_bound(group: Group, mask: int, triple: WitnessTriple) -> float:
    """|integral| / (9/2); always >= 4/3 for a valid witness, and always a
    lower bound for bs_norm(S)."""
    return abs(witness_integral(group, mask, triple)) / SUP_NORM_F


@dataclass(frozen=True)
class SupNormCheck:
    max_f: float
    max_identity_error: float

    def to_dict(self) -> dict:
        return {"max_f": self.max_f, "max_identity_error": self.max_identity_error}


def sup_norm_check(grid_points: int) -> SupNormCheck:
    """Grid verification that the test-function envelope is constant.

    On a uniform theta grid this checks (a) the algebraic identity
    sqrt(25/4 + 10 cos t + 4 cos^2 t) = 5/2 + 2 cos t (the radicand is a
    perfect square since 5/2 + 2 cos t >= 1/2 > 0), and (b) that
    |2 + 2 e^{it} + (1/2) e^{-it}| + |2 - e^{it} - e^{-it}| is identically 9/2.
    """
    if grid_points < 3:
        raise ValueError("need at least 3 grid points")
    theta = np.linspace(0.0, 2 * np.pi, grid_points, endpoint=False)
    cos_t = np.cos(theta)
    radicand = 25.0 / 4.0 + 10.0 * cos_t + 4.0 * cos_t ** 2
    identity_error = float(np.max(np.abs(np.sqrt(radicand) - (2.5 + 2.0 * cos_t))))
    z = np.exp(1j * theta)
    envelope = np.abs(2 + 2 * z + 0.5 * np.conj(z)) + np.abs(2 - z - np.conj(z))
    max_f = float(np.max(envelope))
    deviation = float(np.max(np.abs(envelope - SUP_NORM_F)))
    return SupNormCheck(max_f=max_f, max_identity_error=max(identity_error, deviation))
