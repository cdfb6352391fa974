"""Norms of indicator functions on finite abelian groups via character sums.

The norm of the indicator chi_S, viewed through the self-dual pairing of a
finite abelian group, is the total variation of its inverse transform mu:
bs_norm(S) = sum_x |mu(x)| with mu(x) = (1/n) sum_{s in S} conj((x, s)).
Unions of two cosets have closed-form norms depending only on the relative
order q, and their mu is supported on an annihilator subgroup with an
explicit two-character density; both facts are implemented and checkable
here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .groups import (
    CosetAnalysis,
    Group,
    analyze_cosets,
    character_value,
    iter_elements,
    subset_elements,
    subset_size,
    validate_mask,
)


@dataclass(frozen=True)
class Thresholds:
    """The constants the classification theorems revolve around."""

    coset_bound: float            # (1 + sqrt 2)/2: below it only cosets occur
    two_coset_bound: float        # 4/3: below it only two-coset unions occur
    prior_coset_bound: float      # 2/sqrt(3): older, weaker coset threshold
    prior_two_coset_bound: float  # (sqrt(17) + 1)/4: older two-coset threshold
    pattern_norm: float           # 9/7: Schur norm of the forbidden 3x3 pattern
    pattern_witness_value: float  # sqrt(26)/4: explicit lower bound for it
    limit_q_inf: float            # 4/pi: limit of the two-coset norms


THRESHOLDS = Thresholds(
    coset_bound=(1 + math.sqrt(2)) / 2,
    two_coset_bound=4 / 3,
    prior_coset_bound=2 / math.sqrt(3),
    prior_two_coset_bound=(math.sqrt(17) + 1) / 4,
    pattern_norm=9 / 7,
    pattern_witness_value=math.sqrt(26) / 4,
    limit_q_inf=4 / math.pi,
)


def _validate_thresholds(t: Thresholds) -> None:
    chain = (1.0, t.prior_coset_bound, t.coset_bound, t.pattern_witness_value,
             t.prior_two_coset_bound, t.two_coset_bound)
    if not all(x < y for x, y in zip(chain, chain[1:])):
        raise AssertionError(f"threshold ordering violated: {chain}")
    if not (t.coset_bound < t.limit_q_inf < t.pattern_witness_value):
        raise AssertionError("4/pi must sit between (1+sqrt2)/2 and sqrt(26)/4")
    if not (t.prior_two_coset_bound < t.pattern_norm < t.two_coset_bound):
        raise AssertionError("9/7 must sit between (sqrt(17)+1)/4 and 4/3")


_validate_thresholds(THRESHOLDS)


def _indicator_tensor(group: Group, mask: int) -> np.ndarray:
    ind = np.zeros(group.order, dtype=float)
    for s in iter_elements(mask):
        ind[s] = 1.0
    return ind.reshape(group.factors)


def mu_values(group: Group, mask: int) -> np.ndarray:
    """Inverse transform of the indicator: mu(x) = (1/n) sum_{s in S} conj((x, s)).

    Applying the forward character sum to the result reproduces the indicator
    (see reconstruct_indicator), which pins the sign convention.
    """
    group._require_abelian()
    mask = validate_mask(group, mask)
    spectrum = np.fft.fftn(_indicator_tensor(group, mask))
    return spectrum.reshape(-1) / group.order


def reconstruct_indicator(group: Group, mu: np.ndarray) -> np.ndarray:
    """Forward character sum sum_x mu(x) (x, s), flattened over s."""
    group._require_abelian()
    tensor = np.asarray(mu, dtype=complex).reshape(group.factors)
    return (np.fft.ifftn(tensor) * group.order).reshape(-1)


def bs_norm(group: Group, mask: int) -> float:
    """Total variation sum_x |mu(x)|; 0 for the empty set, >= 1 otherwise."""
    mask = validate_mask(group, mask)
    if mask == 0:
        return 0.0
    return float(np.abs(mu_values(group, mask)).sum())


def two_coset_norm(q) -> float:
    """Closed-form norm of a union of two cosets with relative order q.

    Odd q: 2 / (q sin(pi/2q)); even q: 2 / (q tan(pi/2q)); q = inf: 4/pi.
    q = 2 gives 1, consistent with the two cosets merging into one.
    """
    if q == math.inf:
        return 4 / math.pi
    if q != int(q):
        raise ValueError(f"relative order must be an integer or inf, got {q}")
    q = int(q)
    if q < 2:
        raise ValueError(f"relative order must be >= 2 or inf, got {q}")
    if q % 2:
        return 2 / (q * math.sin(math.pi / (2 * q)))
    return 2 / (q * math.tan(math.pi / (2 * q)))


def predicted_norm(analysis: CosetAnalysis) -> Optional[float]:
    """Norm predicted from structure alone: 0, 1, the closed form, or None."""
    if analysis.kind == "empty":
        return 0.0
    if analysis.kind == "coset":
        return 1.0
    if analysis.kind == "two_cosets":
        return two_coset_norm(analysis.q)
    return None


def annihilator(group: Group, sub_mask: int) -> int:
    """Bitmask of {x : (x, s) = 1 for all s in the subgroup}, computed exactly
    in integer arithmetic."""
    group._require_abelian()
    n = group.order
    members = subset_elements(sub_mask)
    member_coords = [group.coords(s) for s in members]
    weights = [n // f for f in group.factors]
    out = 0
    for x in group.elements():
        xc = group.coords(x)
        if all(sum(xj * sj * w for xj, sj, w in zip(xc, sc, weights)) % n == 0
               for sc in member_coords):
            out |= 1 << x
    return out


@dataclass(frozen=True)
class MeasureFormResult:
    """Pointwise comparison of mu against the two-character density on the
    annihilator of the coset subgroup."""

    holds: bool
    subgroup: int          # bitmask of the annihilator H
    gamma1: int
    gamma2: int
    max_error: float

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "subgroup": subset_elements(self.subgroup),
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
            "max_error": self.max_error,
        }


def verify_measure_form(group: Group, mask: int, tol: float = 1e-12) -> MeasureFormResult:
    """For S = (g1 + L) u (g2 + L), check pointwise that
    mu(x) = [conj((x, g1)) + conj((x, g2))] / |H| on H = annihilator(L), and 0 off H."""
    group._require_abelian()
    analysis = analyze_cosets(group, mask)
    if analysis.kind != "two_cosets":
        raise ValueError(f"subset is {analysis.kind}, not a union of two cosets")
    lam = analysis.subgroup
    g1, g2 = analysis.rep_a, analysis.rep_b
    ann = annihilator(group, lam)
    h_size = subset_size(ann)
    mu = mu_values(group, mask)
    expected = np.zeros(group.order, dtype=complex)
    for x in iter_elements(ann):
        expected[x] = (np.conj(character_value(group, x, g1))
                       + np.conj(character_value(group, x, g2))) / h_size
    max_error = float(np.max(np.abs(mu - expected)))
    return MeasureFormResult(holds=max_error <= tol, subgroup=ann,
                             gamma1=g1, gamma2=g2, max_error=max_error)
