"""Finite group arithmetic and coset structure detection.

Groups come in two kinds: abelian groups given as direct products of cyclic
groups (elements are mixed-radix encoded coordinate tuples), and general
finite groups given by a Cayley table (validated on load).  Elements are
always dense indices 0..n-1 and subsets are bitmasks, so every operation
here is cheap integer arithmetic.
"""

from __future__ import annotations

import itertools
import json
import os
import re
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

DEFAULT_MAX_ORDER = 4096

ABELIAN = "abelian"
CAYLEY = "cayley"


def max_order() -> int:
    """Order cap for group construction; IDEMNORM_MAX_ORDER overrides."""
    value = os.environ.get("IDEMNORM_MAX_ORDER")
    if value is None:
        return DEFAULT_MAX_ORDER
    try:
        cap = int(value)
    except ValueError as exc:
        raise ValueError(f"IDEMNORM_MAX_ORDER must be an integer, got {value!r}") from exc
    if cap < 1:
        raise ValueError(f"IDEMNORM_MAX_ORDER must be positive, got {cap}")
    return cap


class GroupAxiomError(ValueError):
    """A Cayley table fails a group axiom; `triple` names the offending elements."""

    def __init__(self, message: str, triple: tuple = ()):  # noqa: D107
        super().__init__(message)
        self.triple = triple


class Group:
    """A finite group with elements 0..order-1.

    Abelian groups store their cyclic factors and do coordinate arithmetic;
    Cayley groups store the full multiplication table.  Instances are
    immutable after construction and safe to share between threads.
    """

    def __init__(self, kind: str, *, factors: Sequence[int] = (),
                 table: Optional[np.ndarray] = None, identity: int = 0,
                 name: Optional[str] = None, order_cap: Optional[int] = None):
        cap = max_order() if order_cap is None else order_cap
        self.kind = kind
        if kind == ABELIAN:
            factors = tuple(int(f) for f in factors)
            if not factors:
                raise ValueError("abelian group needs at least one factor")
            for f in factors:
                if f < 2:
                    raise ValueError(f"cyclic factor must be >= 2, got {f}")
            order = 1
            for f in factors:
                order *= f
                if order > cap:
                    raise ValueError(f"group order {order}+ exceeds cap {cap}")
            self.factors = factors
            self.order = order
            # mixed-radix strides, last coordinate fastest
            strides = [1] * len(factors)
            for j in range(len(factors) - 2, -1, -1):
                strides[j] = strides[j + 1] * factors[j + 1]
            self._strides = tuple(strides)
            self.identity = 0
            self.table = None
            self.name = name or "x".join(f"Z{f}" for f in factors)
        elif kind == CAYLEY:
            tab = np.asarray(table, dtype=np.int64)
            self.factors = ()
            self._strides = ()
            n = _validate_cayley(tab, identity, cap)
            self.order = n
            self.identity = int(identity)
            self.table = tab
            self.name = name or f"cayley{n}"
        else:
            raise ValueError(f"unknown group kind {kind!r}")
        self._inverse = self._build_inverse()
        self._mul_table: Optional[np.ndarray] = None

    # -- core arithmetic ----------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        if self.kind == ABELIAN:
            out = 0
            for f, stride in zip(self.factors, self._strides):
                out += (((a // stride) + (b // stride)) % f) * stride
                a %= stride
                b %= stride
            return out
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self._inverse[a])

    @property
    def is_abelian(self) -> bool:
        return self.kind == ABELIAN

    def elements(self) -> range:
        return range(self.order)

    def coords(self, a: int) -> tuple[int, ...]:
        """Mixed-radix coordinates of an abelian element."""
        self._require_abelian()
        out = []
        for stride in self._strides:
            out.append(a // stride)
            a %= stride
        return tuple(out)

    def index_of(self, coords: Sequence[int]) -> int:
        """Element index for abelian coordinates (reduced mod the factors)."""
        self._require_abelian()
        if len(coords) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} coordinates, got {len(coords)}")
        return sum((int(c) % f) * s for c, f, s in zip(coords, self.factors, self._strides))

    def mul_table(self) -> np.ndarray:
        """Full n-by-n multiplication table (cached; abelian tables are built lazily)."""
        if self._mul_table is None:
            if self.kind == CAYLEY:
                self._mul_table = self.table
            else:
                if self.order > 1024:
                    raise ValueError(f"mul_table capped at order 1024, group has {self.order}")
                idx = np.arange(self.order)
                coords = np.empty((self.order, len(self.factors)), dtype=np.int64)
                rem = idx.copy()
                for j, stride in enumerate(self._strides):
                    coords[:, j] = rem // stride
                    rem = rem % stride
                summed = (coords[:, None, :] + coords[None, :, :]) % np.array(self.factors)
                self._mul_table = (summed * np.array(self._strides)).sum(axis=2)
        return self._mul_table

    def _require_abelian(self) -> None:
        if self.kind != ABELIAN:
            raise ValueError("operation requires an abelian (invariant-factor) group")

    def _build_inverse(self) -> np.ndarray:
        if self.kind == ABELIAN:
            inv = np.empty(self.order, dtype=np.int64)
            for a in range(self.order):
                inv[a] = self.index_of(tuple(-c for c in self.coords(a)))
            return inv
        e = self.identity
        inv = np.full(self.order, -1, dtype=np.int64)
        for a in range(self.order):
            hits = np.nonzero(self.table[a] == e)[0]
            for b in hits:
                if self.table[b, a] == e:
                    inv[a] = b
                    break
            if inv[a] < 0:
                raise GroupAxiomError(f"element {a} has no two-sided inverse", (a,))
        return inv

    def __repr__(self) -> str:
        return f"Group({self.name}, order={self.order})"


def _validate_cayley(table: np.ndarray, identity: int, cap: int) -> int:
    if table.ndim != 2 or table.shape[0] != table.shape[1]:
        raise GroupAxiomError(f"Cayley table must be square, got shape {table.shape}")
    n = table.shape[0]
    if n < 1:
        raise GroupAxiomError("Cayley table must be nonempty")
    if n > cap:
        raise ValueError(f"group order {n} exceeds cap {cap}")
    if table.min() < 0 or table.max() >= n:
        bad = np.argwhere((table < 0) | (table >= n))[0]
        raise GroupAxiomError(
            f"table entry at {tuple(bad)} out of range 0..{n - 1}", tuple(int(x) for x in bad))
    if not (0 <= identity < n):
        raise GroupAxiomError(f"identity index {identity} out of range")
    e = identity
    if not (np.array_equal(table[e], np.arange(n)) and np.array_equal(table[:, e], np.arange(n))):
        bad = int(np.nonzero(table[e] != np.arange(n))[0][0]) if not np.array_equal(
            table[e], np.arange(n)) else int(np.nonzero(table[:, e] != np.arange(n))[0][0])
        raise GroupAxiomError(f"{e} is not a two-sided identity (fails at {bad})", (e, bad))
    # associativity: (a b) c == a (b c), checked row by row to bound memory
    for a in range(n):
        left = table[table[a], :]          # (a b) c
        right = table[a][table]            # a (b c)
        if not np.array_equal(left, right):
            b, c = (int(x) for x in np.argwhere(left != right)[0])
            raise GroupAxiomError(
                f"associativity fails: ({a}*{b})*{c} != {a}*({b}*{c})", (a, b, c))
    return n


# -- constructors -------------------------------------------------------------

def make_abelian_group(factors: Sequence[int]) -> Group:
    """Direct product of cyclic groups Z_f1 x ... x Z_fk."""
    return Group(ABELIAN, factors=factors)


def load_cayley_group(table: Sequence[Sequence[int]], identity: int = 0,
                      name: Optional[str] = None) -> Group:
    """Build a group from an explicit multiplication table, checking all axioms."""
    return Group(CAYLEY, table=np.asarray(table), identity=identity, name=name)


def load_cayley_file(path: str) -> Group:
    """Read a Cayley table from JSON: {"n": int, "identity": int, "table": [[...]]}."""
    with open(path) as fh:
        data = json.load(fh)
    table = data["table"]
    n = int(data.get("n", len(table)))
    if n != len(table):
        raise GroupAxiomError(f"declared order {n} does not match table size {len(table)}")
    return load_cayley_group(table, int(data.get("identity", 0)),
                             name=os.path.splitext(os.path.basename(path))[0])


def _symmetric_group_3() -> Group:
    perms = sorted(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(a[b[x]] for x in range(3))] for b in perms] for a in perms]
    return load_cayley_group(table, index[(0, 1, 2)], name="S3")


def _dihedral_group_4() -> Group:
    # elements r^i s^j with index i + 4j; s r = r^-1 s
    def mul(a: int, b: int) -> int:
        i, j = a % 4, a // 4
        k, l = b % 4, b // 4
        return (i + (k if j == 0 else -k)) % 4 + 4 * (j ^ l)

    return load_cayley_group([[mul(a, b) for b in range(8)] for a in range(8)], 0, name="D4")


def _quaternion_group_8() -> Group:
    # index = axis*2 + sign with axes (1, i, j, k) and sign 0:+ / 1:-
    axis_prod = {(0, 0): (0, 0)}
    for a in (1, 2, 3):
        axis_prod[(0, a)] = (0, a)
        axis_prod[(a, 0)] = (0, a)
        axis_prod[(a, a)] = (1, 0)
    axis_prod[(1, 2)] = (0, 3)
    axis_prod[(2, 3)] = (0, 1)
    axis_prod[(3, 1)] = (0, 2)
    axis_prod[(2, 1)] = (1, 3)
    axis_prod[(3, 2)] = (1, 1)
    axis_prod[(1, 3)] = (1, 2)

    def mul(x: int, y: int) -> int:
        extra, axis = axis_prod[(x // 2, y // 2)]
        return axis * 2 + ((x + y + extra) % 2)

    return load_cayley_group([[mul(a, b) for b in range(8)] for a in range(8)], 0, name="Q8")


_BUILTINS = {"S3": _symmetric_group_3, "D4": _dihedral_group_4, "Q8": _quaternion_group_8}


def builtin_group(name: str) -> Group:
    """One of the bundled nonabelian groups: S3, D4, Q8."""
    key = name.upper()
    if key not in _BUILTINS:
        raise ValueError(f"unknown builtin group {name!r}; choose from {sorted(_BUILTINS)}")
    return _BUILTINS[key]()


_ABELIAN_SPEC = re.compile(r"^z\d+(xz\d+)*$")


def parse_group(spec: str) -> Group:
    """Parse a group spec: "Z6", "Z2xZ4" (case-insensitive), a builtin name,
    or a path to a Cayley-table JSON file."""
    text = spec.strip()
    key = text.upper()
    if key in _BUILTINS:
        return _BUILTINS[key]()
    lowered = text.replace(" ", "").lower()
    if _ABELIAN_SPEC.match(lowered):
        return make_abelian_group([int(part[1:]) for part in lowered.split("x")])
    if os.path.exists(text):
        return load_cayley_file(text)
    raise ValueError(f"cannot parse group spec {spec!r} "
                     "(expected e.g. Z6, Z2xZ4, S3, D4, Q8, or a JSON file path)")


# -- subsets as bitmasks ------------------------------------------------------

def validate_mask(group: Group, mask: int) -> int:
    mask = int(mask)
    if mask < 0 or mask >> group.order:
        raise ValueError(f"subset mask {mask:#x} out of range for order {group.order}")
    return mask


def subset_mask(group: Group, indices: Sequence[int]) -> int:
    """Bitmask for a collection of element indices."""
    mask = 0
    for i in indices:
        i = int(i)
        if not 0 <= i < group.order:
            raise ValueError(f"element index {i} out of range for order {group.order}")
        mask |= 1 << i
    return mask


def subset_elements(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def subset_size(mask: int) -> int:
    return bin(mask).count("1")


def iter_elements(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def translate_left(group: Group, t: int, mask: int) -> int:
    """Bitmask of t*S."""
    out = 0
    for s in iter_elements(mask):
        out |= 1 << group.mul(t, s)
    return out


def translate_right(group: Group, mask: int, t: int) -> int:
    """Bitmask of S*t."""
    out = 0
    for s in iter_elements(mask):
        out |= 1 << group.mul(s, t)
    return out


def negate_subset(group: Group, mask: int) -> int:
    """Bitmask of S^-1 (the set of inverses; -S in additive notation)."""
    out = 0
    for s in iter_elements(mask):
        out |= 1 << group.inv(s)
    return out


def is_subgroup(group: Group, mask: int) -> bool:
    """Nonempty, contains the identity, closed under the product."""
    if not (mask >> group.identity) & 1:
        return False
    members = subset_elements(mask)
    return all((mask >> group.mul(a, b)) & 1 for a in members for b in members)


def subgroup_generated(group: Group, generators: Sequence[int]) -> int:
    """Bitmask of the subgroup generated by the given elements."""
    mask = 1 << group.identity
    frontier = [group.identity] + [int(x) for x in generators]
    while frontier:
        new = []
        for a in frontier:
            for b in subset_elements(mask):
                for c in (group.mul(a, b), group.mul(b, a)):
                    if not (mask >> c) & 1:
                        mask |= 1 << c
                        new.append(c)
            if not (mask >> a) & 1:
                mask |= 1 << a
                new.append(a)
        frontier = new
    return mask


def element_order(group: Group, t: int) -> int:
    """Smallest k >= 1 with t^k = e."""
    k = 1
    x = t
    while x != group.identity:
        x = group.mul(x, t)
        k += 1
    return k


def stabilizer(group: Group, mask: int) -> int:
    """Two-sided stabilizer {t : S t = S and t S = S}; always a subgroup.

    For the empty set this is the whole group.  For abelian groups the two
    one-sided conditions coincide.
    """
    validate_mask(group, mask)
    out = 0
    for t in group.elements():
        if translate_right(group, mask, t) == mask:
            if group.is_abelian or translate_left(group, t, mask) == mask:
                out |= 1 << t
    return out


def character_value(group: Group, x: int, s: int) -> complex:
    """Dual pairing of an abelian group with itself: exp(2 pi i sum x_j s_j / f_j).

    Bilinear in both arguments; the phase is reduced exactly in integer
    arithmetic before the single complex exponential.
    """
    group._require_abelian()
    xs = group.coords(x)
    ss = group.coords(s)
    n = group.order
    num = sum(xj * sj * (n // fj) for xj, sj, fj in zip(xs, ss, group.factors)) % n
    return complex(np.exp(2j * np.pi * num / n))


# -- coset structure ----------------------------------------------------------

@dataclass(frozen=True)
class CosetAnalysis:
    """Structure of a subset: empty, a single coset, a union of two cosets of
    its stabilizer (with the relative order q >= 3 of the connecting element
    in the quotient), or anything else."""

    kind: str  # "empty" | "coset" | "two_cosets" | "other"
    subgroup: Optional[int] = None  # bitmask: coset subgroup, or stabilizer
    rep_a: Optional[int] = None
    rep_b: Optional[int] = None
    q: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "subgroup": None if self.subgroup is None else subset_elements(self.subgroup),
            "rep_a": self.rep_a,
            "rep_b": self.rep_b,
            "q": self.q,
        }

    @staticmethod
    def from_dict(data: dict) -> "CosetAnalysis":
        sub = data.get("subgroup")
        return CosetAnalysis(
            kind=data["kind"],
            subgroup=None if sub is None else sum(1 << int(i) for i in sub),
            rep_a=data.get("rep_a"),
            rep_b=data.get("rep_b"),
            q=data.get("q"),
        )


def analyze_cosets(group: Group, mask: int) -> CosetAnalysis:
    """Classify S as empty / coset / two-coset union / other.

    A coset is recognised by the a^-1 S subgroup test, so cosets of arbitrary
    subgroups are found (not just cosets of the stabilizer).  The two-coset
    kind requires S to be exactly two left cosets of its two-sided stabilizer
    T with T normal in the span <T, a^-1 b>, which makes the relative order q
    independent of the representatives; q >= 3 always (q <= 2 would make S a
    single coset of a larger subgroup, caught by the coset test first).
    """
    mask = validate_mask(group, mask)
    if mask == 0:
        return CosetAnalysis(kind="empty")
    members = subset_elements(mask)
    a = members[0]
    h = translate_left(group, group.inv(a), mask)
    if is_subgroup(group, h):
        return CosetAnalysis(kind="coset", subgroup=h, rep_a=a)
    stab = stabilizer(group, mask)
    stab_size = subset_size(stab)
    if len(members) == 2 * stab_size:
        a_coset = 0
        for t in iter_elements(stab):
            a_coset |= 1 << group.mul(a, t)
        rest = mask & ~a_coset
        if subset_size(rest) == stab_size:
            b = subset_elements(rest)[0]
            c = group.mul(group.inv(a), b)
            span = subgroup_generated(group, subset_elements(stab) + [c])
            if _is_normal_in(group, stab, span):
                q = 1
                p = c
                while not (stab >> p) & 1:
                    p = group.mul(p, c)
                    q += 1
                if q >= 3:
                    return CosetAnalysis(kind="two_cosets", subgroup=stab,
                                         rep_a=a, rep_b=b, q=q)
    return CosetAnalysis(kind="other", subgroup=stab)


def _is_normal_in(group: Group, sub_mask: int, span_mask: int) -> bool:
    if group.is_abelian:
        return True
    subs = subset_elements(sub_mask)
    for x in iter_elements(span_mask):
        xinv = group.inv(x)
        for t in subs:
            if not (sub_mask >> group.mul(group.mul(x, t), xinv)) & 1:
                return False
    return True
