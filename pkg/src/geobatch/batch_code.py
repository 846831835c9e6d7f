"""Systematic binary batch codes with geometric parity checks.

A code with n information bits and r parity checks is stored as the list of
parity supports: parity t is the XOR of the information bits in
``parities[t]``. Codeword positions 0..n-1 carry the information bits and
position n + t carries parity t.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
import warnings
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from geobatch.errors import (
    AssignmentFailure,
    BudgetExceeded,
    IndexOutOfRange,
    InvalidParams,
    LengthMismatch,
    UncertifiedCollection,
)
from geobatch.finite_field import field_new, is_prime_power
from geobatch.geometry import NiceCollection, affine_plane, check_pairwise
from geobatch.linalg_fq import cosets_of, vector_index

log = logging.getLogger(__name__)

DEFAULT_VERIFY_BUDGET = 10**7
EXHAUSTIVE_MAX_N = 24

SIMPLE = "simple"
SINGLETON = "singleton"


@dataclass(frozen=True)
class BatchCode:
    n: int
    parities: tuple[tuple[int, ...], ...]
    meta: dict = field(default_factory=dict, compare=True, hash=False)

    def __post_init__(self):
        for t, supp in enumerate(self.parities):
            if not supp:
                raise InvalidParams(f"parity {t} has an empty support")
            if list(supp) != sorted(set(supp)) or supp[0] < 0 or supp[-1] >= self.n:
                raise InvalidParams(f"parity {t} support is not a sorted subset of [0, {self.n})")

    @property
    def r(self) -> int:
        return len(self.parities)

    @property
    def N(self) -> int:
        return self.n + self.r

    @cached_property
    def parities_of(self) -> tuple[tuple[int, ...], ...]:
        """For each information symbol, the parity indices whose support contains it."""
        out: list[list[int]] = [[] for _ in range(self.n)]
        for t, supp in enumerate(self.parities):
            for i in supp:
                out[i].append(t)
        return tuple(tuple(x) for x in out)

    @cached_property
    def claimed_k(self) -> int | None:
        k = self.meta.get("k")
        return int(k) if k is not None else None


@dataclass(frozen=True)
class RecoveringSet:
    target: int
    positions: tuple[int, ...]
    kind: str = SIMPLE

    @property
    def mask(self) -> int:
        m = 0
        for p in self.positions:
            m |= 1 << p
        return m


@dataclass(frozen=True)
class MultisetRequest:
    items: tuple[tuple[int, int], ...]  # (info index, multiplicity), indices increasing

    @classmethod
    def from_indices(cls, indices: Iterable[int]) -> MultisetRequest:
        counts = Counter(indices)
        if not counts:
            raise InvalidParams("empty request")
        return cls(tuple(sorted(counts.items())))

    @property
    def k(self) -> int:
        return sum(c for _, c in self.items)

    def indices(self) -> list[int]:
        return [i for i, c in self.items for _ in range(c)]


def parse_request(text: str) -> MultisetRequest:
    """Parse ``"5,5,9"`` into a request; repeats allowed."""
    parts = [p.strip() for p in text.split(",")]
    if not text.strip() or any(not p for p in parts):
        raise InvalidParams(f"malformed request {text!r}")
    try:
        idx = [int(p) for p in parts]
    except ValueError:
        raise InvalidParams(f"malformed request {text!r}") from None
    if any(i < 0 for i in idx):
        raise InvalidParams(f"negative index in request {text!r}")
    return MultisetRequest.from_indices(idx)


# -- construction -------------------------------------------------------------


def build_explicit(c: NiceCollection, strict: bool = True) -> BatchCode:
    """One parity per coset of each member, summing the bits on that coset.

    Parities are ordered by member, then by canonical coset shift. The
    claimed availability is floor(m / L) for the collection's certified L
    (m when L = 0, which only happens for m = 1).
    """
    if not check_pairwise(c):
        raise InvalidParams("collection is not pairwise trivially intersecting")
    if c.certified_L is None and strict:
        raise UncertifiedCollection("collection has no niceness level; certify it first")
    f = c.field
    parities = []
    for s in c.subspaces:
        for coset in cosets_of(s):
            parities.append(tuple(sorted(vector_index(f, p) for p in coset.points())))
    meta = {"provenance": "explicit", "q": str(f.q), "ell": str(c.ell), "m": str(c.m)}
    if c.certified_L is not None:
        L = c.certified_L
        meta["L"] = str(L)
        meta["certification"] = c.certification or "unknown"
        meta["k"] = str(c.m // L if L else c.m)
    return BatchCode(f.q ** (2 * c.ell + 1), tuple(parities), meta)


def default_p2(k: int) -> float:
    return 1 / math.sqrt(8 * k)


def default_p1(n: int, k: int) -> float:
    """36 k^(3/2) ln(n) / sqrt(n), unclamped."""
    return 36 * k**1.5 * math.log(n) / math.sqrt(n)


def random_target(n: int, k: int) -> float:
    """Redundancy target 108 k^(3/2) sqrt(n) ln(n) of the random construction."""
    return 108 * k**1.5 * math.sqrt(n) * math.log(n)


def build_random(
    q: int,
    k: int,
    seed: int,
    p1: float | None = None,
    p2: float | None = None,
    relax_k: bool = False,
) -> BatchCode:
    """Sample subsets of lines of AG(2, q) as parity supports.

    Each line is kept with probability p1, then each point of a kept line is
    kept with probability p2. Draws come from one ``random.Random(seed)``
    stream in plane-line order, a line's point draws right after its own
    draw. Empty subsets are dropped.
    """
    if not is_prime_power(q):
        raise InvalidParams(f"q={q} is not a prime power")
    if k < 1:
        raise InvalidParams("k must be positive")
    if not k < q / 12:
        if not relax_k:
            raise InvalidParams(f"k={k} violates k < q/12 = {q / 12:.4g}")
        warnings.warn(f"k={k} >= q/12; the random construction carries no guarantee here", stacklevel=2)
    n = q * q
    if p2 is None:
        p2 = default_p2(k)
    if p1 is None:
        p1 = default_p1(n, k)
        if p1 > 1:
            warnings.warn(f"p1 formula gives {p1:.4g} > 1 at n={n}; clamped to 1", stacklevel=2)
            p1 = 1.0
    if not (0 < p1 <= 1 and 0 < p2 <= 1):
        raise InvalidParams(f"p1={p1}, p2={p2} must lie in (0, 1]")

    rng = random.Random(seed)
    parities = []
    for line in affine_plane(q).lines:
        if rng.random() < p1:
            kept = tuple(pt for pt in line if rng.random() < p2)
            if kept:
                parities.append(kept)
    meta = {"provenance": "random", "q": str(q), "k": str(k), "p1": repr(p1), "p2": repr(p2), "seed": str(seed)}
    return BatchCode(n, tuple(parities), meta)


def imported(n: int, supports: Iterable[Iterable[int]]) -> BatchCode:
    """Code from arbitrary supports; duplicates are removed, first occurrence kept."""
    seen = set()
    parities = []
    for s in supports:
        t = tuple(sorted(set(s)))
        if t and t not in seen:
            seen.add(t)
            parities.append(t)
    return BatchCode(n, tuple(parities), {"provenance": "imported"})


# -- encoding and recovering sets ---------------------------------------------


def encode(code: BatchCode, info: Sequence[int]) -> list[int]:
    if len(info) != code.n:
        raise LengthMismatch(f"expected {code.n} information bits, got {len(info)}")
    out = [b & 1 for b in info]
    for supp in code.parities:
        bit = 0
        for i in supp:
            bit ^= out[i]
        out.append(bit)
    return out


def xor_positions(word: Sequence[int], positions: Iterable[int]) -> int:
    bit = 0
    for p in positions:
        bit ^= word[p]
    return bit


def _check_index(code: BatchCode, i: int) -> None:
    if not 0 <= i < code.n:
        raise IndexOutOfRange(f"information index {i} outside [0, {code.n})")


def simple_recovering_sets(code: BatchCode, i: int) -> list[RecoveringSet]:
    _check_index(code, i)
    out = []
    for t in code.parities_of[i]:
        rest = [x for x in code.parities[t] if x != i]
        out.append(RecoveringSet(i, tuple(rest) + (code.n + t,), SIMPLE))
    return out


def singleton_set(i: int) -> RecoveringSet:
    return RecoveringSet(i, (i,), SINGLETON)


@dataclass(frozen=True)
class Assignment:
    sets: tuple[RecoveringSet, ...]

    def lines(self) -> list[str]:
        return [
            f"target={s.target} kind={s.kind} positions={','.join(map(str, s.positions))}"
            for s in self.sets
        ]


def greedy_assign(
    code: BatchCode,
    req: MultisetRequest,
    allow_singleton: bool = False,
    strict_paper: bool = False,
) -> Assignment:
    """Serve a multiset request group by group, first fit.

    Groups are processed in index order. A group (i, k_i) may first take the
    singleton {i}; then simple sets of i are scanned in parity order and kept
    when disjoint from everything chosen so far. With ``strict_paper`` a
    parity whose support touches another requested index is skipped too.

    Raises AssignmentFailure when some group cannot be filled.
    """
    for i, _ in req.items:
        _check_index(code, i)
    requested = {i for i, _ in req.items}
    used = 0
    chosen: list[RecoveringSet] = []
    for g, (i, need) in enumerate(req.items):
        got = 0
        if allow_singleton and not used >> i & 1:
            s = singleton_set(i)
            chosen.append(s)
            used |= s.mask
            got = 1
        if got < need:
            for t in code.parities_of[i]:
                if strict_paper and any(x in requested and x != i for x in code.parities[t]):
                    continue
                rs = RecoveringSet(i, tuple(x for x in code.parities[t] if x != i) + (code.n + t,))
                m = rs.mask
                if used & m:
                    continue
                chosen.append(rs)
                used |= m
                got += 1
                if got == need:
                    break
        if got < need:
            raise AssignmentFailure(g, i, got, need)
    return Assignment(tuple(chosen))


# -- verification --------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    status: str  # "holds", "fails" or "inconclusive"
    checked: int
    total: int
    witness: tuple[int, ...] | None = None

    @property
    def holds(self) -> bool | None:
        return {"holds": True, "fails": False}.get(self.status)


def multisets(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Size-k multisets of [0, n) as non-decreasing tuples in lexicographic order."""
    return itertools.combinations_with_replacement(range(n), k)


def count_multisets(n: int, k: int) -> int:
    return math.comb(n + k - 1, k)


def _simple_candidates(code: BatchCode, i: int, allow_singleton: bool) -> list[int]:
    masks = [rs.mask for rs in simple_recovering_sets(code, i)]
    if allow_singleton:
        masks.insert(0, 1 << i)
    return masks


def _all_candidates(code: BatchCode) -> list[list[int]]:
    """Inclusion-minimal recovering sets of every symbol, as position masks.

    A set whose parity part is T has a forced information part: the symmetric
    difference of {i} and the supports in T. So the sets of symbol i are in
    bijection with subsets T of the parities.
    """
    n, r = code.n, code.r
    supp = []
    for s in code.parities:
        m = 0
        for x in s:
            m |= 1 << x
        supp.append(m)
    combos = []  # (info xor, parity mask) over all parity subsets
    for bits in range(1 << r):
        x = 0
        t = bits
        j = 0
        while t:
            if t & 1:
                x ^= supp[j]
            t >>= 1
            j += 1
        combos.append((x, bits << n))
    out = []
    for i in range(n):
        sets = sorted({(x ^ (1 << i)) | pm for x, pm in combos}, key=lambda m: (bin(m).count("1"), m))
        minimal: list[int] = []
        for m in sets:
            if not any(s & m == s for s in minimal):
                minimal.append(m)
        out.append(minimal)
    return out


def _disjoint_choice(targets: Sequence[int], candidates: Sequence[Sequence[int]]) -> bool:
    # order copies by fewest candidates; ties broken by target to keep runs reproducible
    order = sorted(range(len(targets)), key=lambda j: (len(candidates[targets[j]]), targets[j]))
    seq = [targets[j] for j in order]

    def go(pos: int, used: int, last: int) -> bool:
        if pos == len(seq):
            return True
        i = seq[pos]
        # copies of one symbol are interchangeable; pick their sets in increasing order
        start = last + 1 if pos and seq[pos - 1] == i else 0
        cands = candidates[i]
        for c in range(start, len(cands)):
            m = cands[c]
            if not used & m and go(pos + 1, used | m, c):
                return True
        return False

    return go(0, 0, -1)


def verify_batch(
    code: BatchCode,
    k: int,
    mode: str = SIMPLE,
    allow_singleton: bool = True,
    budget: int = DEFAULT_VERIFY_BUDGET,
) -> Verdict:
    """Check every size-k multiset for k pairwise disjoint recovering sets.

    ``mode="simple"`` searches singleton and simple sets only, so success is a
    certificate while failure is only inconclusive. ``mode="exhaustive-small"``
    searches all recovering sets (N <= 24) and its failures are real.
    The witness is the lexicographically first failing multiset.
    """
    if k < 1:
        raise InvalidParams("k must be positive")
    total = count_multisets(code.n, k)
    if total > budget:
        raise BudgetExceeded(f"C(n+k-1, k) = {total} multisets exceed the budget {budget}")
    if mode == SIMPLE:
        candidates = [_simple_candidates(code, i, allow_singleton) for i in range(code.n)]
        fail_status = "inconclusive"
    elif mode == "exhaustive-small":
        if code.N > EXHAUSTIVE_MAX_N:
            raise BudgetExceeded(f"N = {code.N} exceeds {EXHAUSTIVE_MAX_N} for exhaustive-small mode")
        candidates = _all_candidates(code)
        fail_status = "fails"
    else:
        raise InvalidParams(f"unknown verification mode {mode!r}")

    checked = 0
    for ms in multisets(code.n, k):
        if not _disjoint_choice(ms, candidates):
            return Verdict(fail_status, checked, total, ms)
        checked += 1
    return Verdict("holds", checked, total)


def conflict_degree(code: BatchCode, budget: int = 10**8) -> int:
    """Largest number of simple sets of one symbol met by one simple set of another.

    For a simple set R of x (parity s plus support of s minus x) a simple set
    of y through parity t meets R iff t = s or the support of t minus y shares
    an information position with R.
    """
    n = code.n
    work = sum(len(p) for p in code.parities) * max((len(p) for p in code.parities), default=0) ** 2
    if work > budget:
        raise BudgetExceeded(f"conflict scan needs about {work} steps, over the budget {budget}")
    pof = code.parities_of
    worst = 0
    for s, supp in enumerate(code.parities):
        for x in supp:
            hits: dict[int, set[int]] = {}
            for y in supp:
                if y != x:
                    hits.setdefault(y, set()).add(s)
            for z in supp:
                if z == x:
                    continue
                for t in pof[z]:
                    for y in code.parities[t]:
                        # z lies in y's set through t unless z is y itself
                        if y != z and y != x:
                            hits.setdefault(y, set()).add(t)
            if hits:
                worst = max(worst, max(len(v) for v in hits.values()))
    return worst


# -- text format ----------------------------------------------------------------


def to_text(code: BatchCode) -> str:
    lines = [f"BATCHCODE v1 n={code.n} r={code.r}"]
    lines.append("meta" + "".join(f" {k}={v}" for k, v in code.meta.items()))
    lines.extend(" ".join(map(str, supp)) for supp in code.parities)
    return "\n".join(lines) + "\n"


def from_text(text: str) -> BatchCode:
    lines = text.splitlines()
    if len(lines) < 2:
        raise InvalidParams("truncated code file")
    head = lines[0].split()
    if head[:2] != ["BATCHCODE", "v1"]:
        raise InvalidParams(f"not a BATCHCODE v1 header: {lines[0]!r}")
    kv = dict(tok.split("=", 1) for tok in head[2:])
    n, r = int(kv["n"]), int(kv["r"])
    meta_tokens = lines[1].split()
    if not meta_tokens or meta_tokens[0] != "meta":
        raise InvalidParams("second line must start with 'meta'")
    meta = dict(tok.split("=", 1) for tok in meta_tokens[1:])
    body = lines[2:2 + r]
    if len(body) != r or any(ln.strip() for ln in lines[2 + r:]):
        raise InvalidParams(f"expected exactly {r} parity lines")
    supports = [tuple(int(x) for x in ln.split()) for ln in body]
    if meta.get("provenance", "imported") == "imported":
        code = imported(n, supports)
        return BatchCode(n, code.parities, meta or {"provenance": "imported"})
    return BatchCode(n, tuple(supports), meta)


def write_code(code: BatchCode, path) -> None:
    with open(path, "w") as fh:
        fh.write(to_text(code))


def read_code(path) -> BatchCode:
    with open(path) as fh:
        return from_text(fh.read())
