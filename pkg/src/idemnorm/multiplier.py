"""Multiplier matrices of subset indicators and their Schur-norm bounds,
plus the combinatorial detectors that explain large norms: the forbidden
3x3 pattern, the progression property, and the closure claim.

The multiplier matrix of S is M(s, t) = chi_S(s^-1 t); its Schur norm equals
the completely bounded multiplier norm of chi_S, which is what cb_norm
brackets through the gamma2 solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bs import mu_values
from .groups import (
    Group,
    element_order,
    iter_elements,
    subset_elements,
    validate_mask,
)
from .schur import Gamma2Bounds, WitnessPair, gamma2, pattern_witness, witness_lower_bound

CB_ORDER_CAP = 64


def multiplier_matrix(group: Group, mask: int) -> np.ndarray:
    """The n-by-n zero-one matrix with entry (s, t) = chi_S(s^-1 t).

    Row s is the indicator of sS; the matrix is constant along left-translation
    diagonals by construction.
    """
    mask = validate_mask(group, mask)
    table = group.mul_table()
    inv = np.array([group.inv(s) for s in group.elements()])
    indicator = np.zeros(group.order, dtype=float)
    for s in iter_elements(mask):
        indicator[s] = 1.0
    return indicator[table[inv, :]]


def _abelian_witness_seeds(group: Group, mask: int) -> list[np.ndarray]:
    """Near-optimal Schur witnesses for abelian multiplier matrices: the
    translation-invariant matrices whose spectra carry the unit phases of mu
    (both phase conventions), which turn the character-sum norm into an
    operator-norm ratio."""
    mu = mu_values(group, mask)
    safe = np.where(np.abs(mu) > 1e-15, np.abs(mu), 1.0)
    phases = np.where(np.abs(mu) > 1e-15, mu / safe, 1.0)
    n = group.order
    seeds = []
    for spectrum in (phases, np.conj(phases)):
        psi = np.fft.ifftn(spectrum.reshape(group.factors)).reshape(-1)
        seed = np.empty((n, n), dtype=complex)
        for s in group.elements():
            s_inv = group.inv(s)
            for t in group.elements():
                seed[s, t] = psi[group.mul(s_inv, t)]
        seeds.append(seed)
    return seeds


def cb_norm(group: Group, mask: int, tol: float = 1e-3) -> Gamma2Bounds:
    """gamma2 bounds for the multiplier matrix of S (group order capped at 64).

    An abelian-structure witness seed is always supplied, and when the
    forbidden pattern occurs as a submatrix the embedded pattern witness is
    used to raise the lower bound (compression monotonicity).
    """
    mask = validate_mask(group, mask)
    if group.order > CB_ORDER_CAP:
        raise ValueError(f"cb_norm supports orders up to {CB_ORDER_CAP}, got {group.order}")
    matrix = multiplier_matrix(group, mask)
    seeds = []
    if group.is_abelian and mask:
        seeds.extend(_abelian_witness_seeds(group, mask))
    bounds = gamma2(matrix, tol, extra_seeds=seeds)
    hit = forbidden_pattern_search(group, mask)
    if hit is not None:
        value, small = pattern_witness()
        if value > bounds.lower:
            rows, cols = hit
            embedded = np.zeros_like(matrix)
            embedded[np.ix_(rows, cols)] = small.matrix
            xi = np.zeros(group.order, dtype=complex)
            xi[list(cols)] = small.vector
            witness = WitnessPair(embedded, xi)
            lower = witness_lower_bound(matrix, witness)
            if lower > bounds.lower:
                bounds = Gamma2Bounds(lower=lower, upper=max(bounds.upper, lower),
                                      certificate=bounds.certificate, witness=witness)
    return bounds


def forbidden_pattern_search(group: Group, mask: int) -> Optional[tuple[tuple[int, int, int], tuple[int, int, int]]]:
    """First (in lexicographic order) row and column triples whose submatrix of
    the multiplier matrix equals the forbidden pattern exactly, or None.

    Rows are scanned ascending; for fixed rows the admissible columns for the
    three pattern columns are disjoint bitmask intersections, so the smallest
    member of each gives the lexicographically least column triple.
    """
    mask = validate_mask(group, mask)
    n = group.order
    if mask == 0:
        return None
    full = (1 << n) - 1
    row_masks = []
    for r in range(n):
        r_inv = group.inv(r)
        rm = 0
        for t in range(n):
            if (mask >> group.mul(r_inv, t)) & 1:
                rm |= 1 << t
        row_masks.append(rm)
    for r1 in range(n):
        m1 = row_masks[r1]
        if not m1:
            continue
        for r2 in range(n):
            if r2 == r1:
                continue
            m2 = row_masks[r2]
            c1_base = m1 & m2
            if not c1_base:
                continue
            for r3 in range(n):
                if r3 == r1 or r3 == r2:
                    continue
                m3 = row_masks[r3]
                col1 = c1_base & m3
                col2 = m1 & m2 & ~m3 & full
                col3 = m1 & m3 & ~m2 & full
                if col1 and col2 and col3:
                    c1 = (col1 & -col1).bit_length() - 1
                    c2 = (col2 & -col2).bit_length() - 1
                    c3 = (col3 & -col3).bit_length() - 1
                    return (r1, r2, r3), (c1, c2, c3)
    return None


@dataclass(frozen=True)
class ProgressionViolation:
    """s in S and st in S but st^n not in S (side "right"), or the mirrored
    left-sided statement; n is the smallest failing power."""

    side: str  # "right" | "left"
    s: int
    t: int
    n: int

    def to_dict(self) -> dict:
        return {"side": self.side, "s": self.s, "t": self.t, "n": self.n}


def progression_check(group: Group, mask: int) -> list[ProgressionViolation]:
    """All violations of the progression property, sorted by (side, s, t).

    S has the property when s in S and st in S force the whole progression
    s t^n into S (and symmetrically on the left).  An empty list certifies
    the property; each violation reports the smallest failing exponent.  For
    abelian groups the two sides coincide and only "right" is emitted.
    """
    mask = validate_mask(group, mask)
    violations = []
    members = subset_elements(mask)
    sides = ("right",) if group.is_abelian else ("right", "left")
    for side in sides:
        for s in members:
            for t in group.elements():
                first = group.mul(s, t) if side == "right" else group.mul(t, s)
                if not (mask >> first) & 1:
                    continue
                order = element_order(group, t)
                power = group.identity
                for n in range(2, order):
                    power = group.mul(power, t)  # power = t^(n-1)
                    point = group.mul(s, group.mul(power, t)) if side == "right" \
                        else group.mul(group.mul(t, power), s)
                    if not (mask >> point) & 1:
                        violations.append(ProgressionViolation(side=side, s=s, t=t, n=n))
                        break
    violations.sort(key=lambda v: (v.side, v.s, v.t, v.n))
    return violations


def closure_claim_check(group: Group, mask: int) -> list[tuple[int, int]]:
    """Pairs u <= v in S with both uv and vu outside S (requires e in S).

    An empty list is the closure claim; a violating pair for a set with the
    progression property forces the forbidden pattern at rows (e, u^-1, v^-1)
    and columns (e, u, v) of the multiplier matrix.
    """
    mask = validate_mask(group, mask)
    if not (mask >> group.identity) & 1:
        raise ValueError("closure claim requires the identity to belong to the subset")
    members = subset_elements(mask)
    out = []
    for i, u in enumerate(members):
        for v in members[i:]:
            if not (mask >> group.mul(u, v)) & 1 and not (mask >> group.mul(v, u)) & 1:
                out.append((u, v))
    return out
