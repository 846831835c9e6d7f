"""Affine planes and L-nice collections of subspaces.

A collection of l-dimensional subspaces V_1..V_m of F_q^(2l+1) is L-nice when
any two members meet only in the origin and every coset v + V_i with
v not in V_i meets at most L members. Such a collection yields a batch code
whose parity checks are the cosets (see :mod:`geobatch.batch_code`).
"""

from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass
from typing import Sequence

from geobatch.errors import BudgetExceeded, InvalidParams
from geobatch.finite_field import Field, field_new
from geobatch.linalg_fq import (
    Subspace,
    cosets_of,
    intersect,
    rref,
    subspace_from_span,
    vec_add,
    vector_index,
)

DEFAULT_BUDGET = 10**6
DEFAULT_NODE_BUDGET = 2**20

BRUTE_FORCE = "brute-force"
CLAIMED = "claimed"


@dataclass(frozen=True)
class AffinePlane:
    q: int
    points: tuple[int, ...]
    lines: tuple[tuple[int, ...], ...]


def affine_plane(q: int) -> AffinePlane:
    """AG(2, q): lines y = ax + b ordered by (a, b), then verticals x = c."""
    f = field_new(q)
    lines = []
    for a in range(q):
        for b in range(q):
            pts = (vector_index(f, (x, f.add(f.mul(a, x), b))) for x in range(q))
            lines.append(tuple(sorted(pts)))
    for c in range(q):
        lines.append(tuple(sorted(vector_index(f, (c, y)) for y in range(q))))
    return AffinePlane(q, tuple(range(q * q)), tuple(lines))


@dataclass(frozen=True)
class NiceCollection:
    field: Field
    ell: int
    subspaces: tuple[Subspace, ...]
    certified_L: int | None = None
    certification: str | None = None  # BRUTE_FORCE, CLAIMED or None

    @property
    def m(self) -> int:
        return len(self.subspaces)

    @property
    def dim(self) -> int:
        return 2 * self.ell + 1

    @property
    def brute_force_certified(self) -> bool:
        return self.certification == BRUTE_FORCE and self.certified_L is not None

    def prefix(self, m: int) -> NiceCollection:
        """The first ``m`` members; niceness of a sub-collection never gets worse."""
        if not 0 < m <= self.m:
            raise InvalidParams(f"cannot take {m} of {self.m} subspaces")
        return dataclasses.replace(self, subspaces=self.subspaces[:m])


def construction1_capacity(field: Field, ell: int) -> int:
    """Number of blocks of ``ell`` distinct nonzero evaluation points."""
    return (field.q - 1) // ell


def construction1(field: Field, ell: int, m: int | None = None, include_zero_block: bool = False) -> NiceCollection:
    """Reed-Solomon style collection: V_i spans the moment vectors of alpha^(l*i+j).

    Each block uses evaluation points t = alpha^e, e in [l*i, l*i + l), and
    the spanning vector for t is (1, t, t^2, ..., t^(2l)). Only q - 1 powers of
    alpha are distinct, so by default m = (q - 1) // l. With
    ``include_zero_block`` (l = 1 only) the evaluation point 0 is appended as
    one more member, span{(1, 0, ..., 0)}.
    """
    if ell < 1:
        raise InvalidParams("ell must be at least 1")
    if include_zero_block and ell != 1:
        raise InvalidParams("the zero-evaluation block only exists for ell = 1")
    cap = construction1_capacity(field, ell)
    if m is None:
        m = cap
    if m < 0 or m > cap:
        raise InvalidParams(f"m={m} exceeds the {cap} blocks of distinct evaluation points for q={field.q}, ell={ell}")
    d = 2 * ell + 1
    subspaces = []
    for i in range(m):
        vecs = []
        for j in range(ell):
            t = field.alpha_pow(ell * i + j)
            vecs.append(tuple(field.pow(t, s) for s in range(d)))
        subspaces.append(subspace_from_span(field, vecs, d))
    if include_zero_block:
        subspaces.append(subspace_from_span(field, [(1,) + (0,) * (d - 1)], d))
    if not subspaces:
        raise InvalidParams(f"no subspaces available for q={field.q}, ell={ell}")
    return NiceCollection(field, ell, tuple(subspaces), certified_L=ell, certification=CLAIMED)


def check_pairwise(c: NiceCollection) -> bool:
    if any(s.dim != c.ell or s.ambient_dim != c.dim for s in c.subspaces):
        return False
    return all(intersect(a, b).dim == 0 for a, b in itertools.combinations(c.subspaces, 2))


def _point_masks(field: Field, subspaces: Sequence[Subspace]) -> dict[int, int]:
    # point index -> bitmask of the members containing it
    masks: dict[int, int] = {}
    for j, s in enumerate(subspaces):
        for p in s.points():
            idx = vector_index(field, p)
            masks[idx] = masks.get(idx, 0) | (1 << j)
    return masks


def coset_hits(c: NiceCollection, i: int, masks: dict[int, int] | None = None) -> list[int]:
    """For each non-trivial coset of member i (canonical order), the bitmask of members it meets."""
    f = c.field
    if masks is None:
        masks = _point_masks(f, c.subspaces)
    direction = c.subspaces[i]
    members = direction.points()
    out = []
    for coset in cosets_of(direction):
        if not any(coset.shift):
            continue  # the subspace itself
        hit = 0
        for u in members:
            hit |= masks.get(vector_index(f, vec_add(f, coset.shift, u)), 0)
        out.append(hit)
    return out


def check_niceness(c: NiceCollection, budget: int = DEFAULT_BUDGET) -> int:
    """Exact niceness level: the largest number of members any off-subspace coset meets."""
    n_points = c.field.q ** c.dim
    if n_points > budget:
        raise BudgetExceeded(f"q^(2l+1) = {n_points} exceeds the enumeration budget {budget}")
    if not check_pairwise(c):
        raise InvalidParams("collection is not pairwise trivially intersecting")
    masks = _point_masks(c.field, c.subspaces)
    worst = 0
    for i in range(c.m):
        for hit in coset_hits(c, i, masks):
            worst = max(worst, bin(hit).count("1"))
    return worst


def certify(c: NiceCollection, budget: int = DEFAULT_BUDGET) -> NiceCollection:
    """Copy of ``c`` carrying its brute-force niceness level."""
    return dataclasses.replace(c, certified_L=check_niceness(c, budget), certification=BRUTE_FORCE)


def all_subspaces(field: Field, dim: int, ambient_dim: int) -> list[Subspace]:
    """Every ``dim``-dimensional subspace, one per reduced echelon form.

    Ordered by pivot pattern, then by the free entries.
    """
    out = []
    for pivots in itertools.combinations(range(ambient_dim), dim):
        # free slots: row r, columns after its pivot that are not pivots
        slots = [(r, col) for r, pc in enumerate(pivots) for col in range(pc + 1, ambient_dim) if col not in pivots]
        for vals in itertools.product(range(field.q), repeat=len(slots)):
            rows = [[0] * ambient_dim for _ in pivots]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, col), x in zip(slots, vals):
                rows[r][col] = x
            basis = tuple(tuple(row) for row in rows)
            out.append(Subspace(field, ambient_dim, basis, tuple(pivots)))
    return out


def max_nice_collection(field: Field, ell: int, L: int, node_budget: int = DEFAULT_NODE_BUDGET) -> tuple[int, NiceCollection]:
    """Largest L-nice collection of ell-subspaces of F_q^(2l+1), by branch and bound.

    Niceness is inherited by sub-collections, so any branch that stops being
    L-nice is cut. Returns (m_max, witness) with the witness brute-force
    certified.
    """
    d = 2 * ell + 1
    cands = all_subspaces(field, ell, d)
    n_c = len(cands)
    point_sets = []
    for s in cands:
        mask = 0
        for p in s.points():
            mask |= 1 << vector_index(field, p)
        point_sets.append(mask)
    zero_bit = 1
    coset_sets = []
    for s in cands:
        sets = []
        for coset in cosets_of(s):
            if any(coset.shift):
                mask = 0
                for p in coset.points():
                    mask |= 1 << vector_index(field, p)
                sets.append(mask)
        coset_sets.append(sets)
    compatible = [
        [(point_sets[a] & point_sets[b]) == zero_bit for b in range(n_c)] for a in range(n_c)
    ]

    best: list[int] = []
    nodes = 0

    def extend(chosen: list[int], counts: dict[int, list[int]], start: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(f"max-nice search exceeded {node_budget} nodes")
        if len(chosen) > len(best):
            best = list(chosen)
        for t in range(start, n_c):
            if len(chosen) + (n_c - t) <= len(best):
                return
            if not all(compatible[t][c] for c in chosen):
                continue
            new_counts = {}
            ok = True
            for c in chosen:
                row = [k + ((cs & point_sets[t]) != 0) for k, cs in zip(counts[c], coset_sets[c])]
                if max(row, default=0) > L:
                    ok = False
                    break
                new_counts[c] = row
            if not ok:
                continue
            own = [sum((cs & point_sets[c]) != 0 for c in chosen) for cs in coset_sets[t]]
            if max(own, default=0) > L:
                continue
            new_counts[t] = own
            extend(chosen + [t], new_counts, t + 1)

    extend([], {}, 0)
    witness = NiceCollection(field, ell, tuple(cands[i] for i in best))
    if best:
        witness = certify(witness, budget=max(DEFAULT_BUDGET, field.q**d))
    return len(best), witness


# -- text format ------------------------------------------------------------


def to_text(c: NiceCollection) -> str:
    level = c.certified_L if c.brute_force_certified else "unchecked"
    lines = [f"NICE v1 q={c.field.q} ell={c.ell} m={c.m} L={level}"]
    for s in c.subspaces:
        for row in s.basis:
            lines.append(" ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> NiceCollection:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InvalidParams("empty collection file")
    head = lines[0].split()
    if head[:2] != ["NICE", "v1"]:
        raise InvalidParams(f"not a NICE v1 header: {lines[0]!r}")
    kv = dict(tok.split("=", 1) for tok in head[2:])
    q, ell, m = int(kv["q"]), int(kv["ell"]), int(kv["m"])
    field = field_new(q)
    body = lines[1:]
    if len(body) != m * ell:
        raise InvalidParams(f"expected {m * ell} basis lines, found {len(body)}")
    subspaces = []
    for i in range(m):
        rows = [tuple(int(x) for x in ln.split()) for ln in body[i * ell:(i + 1) * ell]]
        basis, pivots = rref(field, rows, 2 * ell + 1)
        subspaces.append(Subspace(field, 2 * ell + 1, basis, pivots))
    if kv.get("L", "unchecked") == "unchecked":
        return NiceCollection(field, ell, tuple(subspaces))
    return NiceCollection(field, ell, tuple(subspaces), certified_L=int(kv["L"]), certification=BRUTE_FORCE)
