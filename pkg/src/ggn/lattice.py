"""Subgroup lattices: all subgroups, maximal subgroups, Frattini subgroup,
intersection subgroups, and the ceiling operator onto intersection subgroups.

Subgroups are stored as bitmasks over element indices.  Enumeration seeds with
the cyclic subgroups of prime-power order and closes the collection under
joins with those seeds; this reaches the same fixpoint as closing under all
pairwise joins, because every subgroup is a join of prime-power cyclic
subgroups of its elements.  Results are cached in memory by the group's table
hash, and on disk for larger groups (directory from ``GGN_CACHE_DIR``,
defaulting to ``~/.cache/ggn``).
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Union

from .errors import LatticeCapError, ParameterError
from .groups import FiniteGroup, closure_of_gens, mask_of, set_of

log = logging.getLogger(__name__)

#: Default bound on group order for lattice enumeration.
DEFAULT_LATTICE_CAP = 400

#: Groups at or above this order get a disk cache entry as well.
_DISK_CACHE_MIN_ORDER = 64

_CACHE_FORMAT = 1

_memory_cache: dict[str, "SubgroupLattice"] = {}


class TopMarker:
    """Sentinel for the whole-group structure class in achievement games.

    Deliberately not a Subgroup, so avoidance-game code cannot mistake it for
    an intersection subgroup.
    """

    _instance: Optional["TopMarker"] = None

    def __new__(cls) -> "TopMarker":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "TOP"


TOP = TopMarker()


@dataclass(frozen=True)
class Subgroup:
    """A subgroup as a member bitmask; ``order`` is the popcount of ``mask``."""

    mask: int
    order: int

    @property
    def members(self) -> frozenset[int]:
        return set_of(self.mask)

    def contains_element(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def contains(self, other: "Subgroup") -> bool:
        return self.mask | other.mask == self.mask

    @property
    def parity(self) -> int:
        return self.order % 2


@dataclass
class SubgroupLattice:
    """All subgroups of a group, with the derived maximal/Frattini/intersection data.

    ``subgroups`` is sorted by (order, mask); ids are positions in that list.
    ``intersection_ids`` is sorted the same way, so its first entry is the
    Frattini subgroup and scanning it in order finds smallest members first.
    """

    group: FiniteGroup
    subgroups: list[Subgroup]
    maximal_ids: list[int]
    frattini_id: int
    intersection_ids: list[int]
    #: for each intersection id, the intersection ids of its strict supersets,
    #: sorted ascending by order (used by the ceiling operator).
    strict_supersets: dict[int, list[int]] = field(default_factory=dict)

    def subgroup_by_mask(self, mask: int) -> Optional[Subgroup]:
        idx = self._index_by_mask.get(mask)
        return self.subgroups[idx] if idx is not None else None

    def id_by_mask(self, mask: int) -> Optional[int]:
        return self._index_by_mask.get(mask)

    @property
    def maximal_subgroups(self) -> list[Subgroup]:
        return [self.subgroups[i] for i in self.maximal_ids]

    @property
    def frattini(self) -> Subgroup:
        return self.subgroups[self.frattini_id]

    @property
    def intersection_subgroups(self) -> list[Subgroup]:
        return [self.subgroups[i] for i in self.intersection_ids]

    def leq(self, a: int, b: int) -> bool:
        """Containment between subgroup ids."""
        ma, mb = self.subgroups[a].mask, self.subgroups[b].mask
        return ma | mb == mb

    def __post_init__(self) -> None:
        self._index_by_mask = {s.mask: i for i, s in enumerate(self.subgroups)}


def _cache_dir() -> Path:
    env = os.environ.get("GGN_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "ggn"


def _cache_path(group: FiniteGroup) -> Path:
    return _cache_dir() / f"lattice-{group.signature}.json"


def _load_disk(group: FiniteGroup) -> Optional[list[int]]:
    path = _cache_path(group)
    try:
        payload = json.loads(path.read_text())
    except (OSError, ValueError):
        return None
    if payload.get("format") != _CACHE_FORMAT or payload.get("order") != group.order:
        return None
    return [int(m, 16) for m in payload["subgroups"]]


def _store_disk(group: FiniteGroup, masks: list[int]) -> None:
    path = _cache_path(group)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = {
            "format": _CACHE_FORMAT,
            "order": group.order,
            "signature": group.signature,
            "subgroups": [format(m, "x") for m in masks],
        }
        path.write_text(json.dumps(payload))
    except OSError as exc:  # cache is best-effort
        log.debug("lattice cache write failed: %s", exc)


def clear_caches(group: Optional[FiniteGroup] = None) -> None:
    """Drop cached lattices (for one group, or all); used by tests and benchmarks."""
    if group is None:
        _memory_cache.clear()
        return
    _memory_cache.pop(group.signature, None)
    try:
        _cache_path(group).unlink()
    except OSError:
        pass


def _is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
        p += 1
    return True  # n itself prime


def _enumerate_subgroup_masks(group: FiniteGroup) -> list[int]:
    n = group.order
    full = group.full_mask()
    half = n // 2

    # seed masks -> one generator apiece; only prime-power cyclic subgroups
    seeds: dict[int, int] = {}
    for g in range(1, n):
        if _is_prime_power(group.element_order(g)):
            m = closure_of_gens(group, [g])
            seeds.setdefault(m, g)
    seed_items = sorted(seeds.items())

    known: dict[int, tuple[int, ...]] = {1: ()}
    for m, g in seed_items:
        known.setdefault(m, (g,))
    worklist = [m for m in known if m != full]
    join_memo: dict[int, int] = {}

    qi = 0
    while qi < len(worklist):
        h = worklist[qi]
        qi += 1
        hgens = known[h]
        for smask, sgen in seed_items:
            if smask | h == h:
                continue
            union = h | smask
            if union in join_memo:
                continue
            if union == full:
                join_memo[union] = full
                known.setdefault(full, hgens + (sgen,))
                continue
            joined = closure_of_gens(group, hgens + (sgen,), stop_above=half)
            join_memo[union] = joined
            if joined not in known:
                known[joined] = hgens + (sgen,)
                if joined != full:
                    worklist.append(joined)
    if full not in known:  # cyclic seeds may already include the whole group
        known[full] = known.get(full, tuple(range(1, n)))
    return sorted(known, key=lambda m: (m.bit_count(), m))


def all_subgroups(group: FiniteGroup, cap: int = DEFAULT_LATTICE_CAP) -> list[Subgroup]:
    """Every subgroup of the group, sorted by order then member set."""
    return build_lattice(group, cap=cap).subgroups


def build_lattice(group: FiniteGroup, cap: int = DEFAULT_LATTICE_CAP) -> SubgroupLattice:
    """Compute (or fetch from cache) the full lattice data for a group."""
    cached = _memory_cache.get(group.signature)
    if cached is not None:
        return cached
    if group.order > cap:
        raise LatticeCapError(
            f"lattice cap exceeded (order {group.order} > cap {cap}); "
            "raise the cap to force the computation"
        )
    masks = _load_disk(group) if group.order >= _DISK_CACHE_MIN_ORDER else None
    if masks is None:
        masks = _enumerate_subgroup_masks(group)
        if group.order >= _DISK_CACHE_MIN_ORDER:
            _store_disk(group, masks)
    lattice = _assemble(group, masks)
    _memory_cache[group.signature] = lattice
    return lattice


def _assemble(group: FiniteGroup, masks: list[int]) -> SubgroupLattice:
    subs = [Subgroup(m, m.bit_count()) for m in masks]
    index = {s.mask: i for i, s in enumerate(subs)}
    full = group.full_mask()

    proper = [s for s in subs if s.mask != full]
    maximal_ids: list[int] = []
    for s in proper:
        if any(t.order > s.order and s.mask | t.mask == t.mask for t in proper):
            continue
        maximal_ids.append(index[s.mask])
    maximal_ids.sort()

    if maximal_ids:
        fratt = full
        for i in maximal_ids:
            fratt &= subs[i].mask
        inter = {subs[i].mask for i in maximal_ids}
        worklist = sorted(inter)
        qi = 0
        while qi < len(worklist):
            a = worklist[qi]
            qi += 1
            for b in list(inter):
                c = a & b
                if c not in inter:
                    inter.add(c)
                    worklist.append(c)
        assert fratt in inter
        intersection_ids = sorted(
            (index[m] for m in inter),
            key=lambda i: (subs[i].order, subs[i].mask),
        )
        frattini_id = index[fratt]
    else:
        # trivial group: no maximal subgroups, no intersection structure
        intersection_ids = []
        frattini_id = index[1]

    strict_supersets: dict[int, list[int]] = {}
    for i in intersection_ids:
        si = subs[i]
        ups = [
            j
            for j in intersection_ids
            if subs[j].order > si.order and si.mask | subs[j].mask == subs[j].mask
        ]
        ups.sort(key=lambda j: (subs[j].order, subs[j].mask))
        strict_supersets[i] = ups

    return SubgroupLattice(
        group=group,
        subgroups=subs,
        maximal_ids=maximal_ids,
        frattini_id=frattini_id,
        intersection_ids=intersection_ids,
        strict_supersets=strict_supersets,
    )


def maximal_subgroups(group: FiniteGroup, cap: int = DEFAULT_LATTICE_CAP) -> list[Subgroup]:
    if group.order < 2:
        raise ParameterError("the trivial group has no proper subgroups")
    return build_lattice(group, cap=cap).maximal_subgroups


def frattini(group: FiniteGroup, cap: int = DEFAULT_LATTICE_CAP) -> Subgroup:
    """Intersection of all maximal subgroups."""
    if group.order < 2:
        raise ParameterError("Frattini subgroup undefined here: no maximal subgroups")
    return build_lattice(group, cap=cap).frattini


def intersection_subgroups(group: FiniteGroup, cap: int = DEFAULT_LATTICE_CAP) -> SubgroupLattice:
    """The lattice with the intersection-subgroup data filled in (alias of build_lattice)."""
    if group.order < 2:
        raise ParameterError("the trivial group has no maximal subgroups")
    return build_lattice(group, cap=cap)


def ceil(
    lattice: SubgroupLattice,
    members: Union[int, Iterable[int]],
    for_achievement: bool = True,
) -> Union[Subgroup, TopMarker]:
    """Smallest intersection subgroup containing ``members``.

    If the members generate the whole group there is no such subgroup: the
    achievement game maps the position to the terminal class (returns TOP),
    while for the avoidance game such a position is illegal and this raises.
    """
    mask = members if isinstance(members, int) else mask_of(members)
    for i in lattice.intersection_ids:
        s = lattice.subgroups[i]
        if mask | s.mask == s.mask:
            return s
    if for_achievement:
        return TOP
    raise ParameterError("generating sets are not avoidance-game positions")


def covered_by_even_maximals(group: FiniteGroup, cap: int = DEFAULT_LATTICE_CAP) -> bool:
    """True when the union of the even-order maximal subgroups is the whole group."""
    lattice = build_lattice(group, cap=cap)
    union = 0
    for s in lattice.maximal_subgroups:
        if s.order % 2 == 0:
            union |= s.mask
    return union == group.full_mask()


__all__ = [
    "DEFAULT_LATTICE_CAP",
    "Subgroup",
    "SubgroupLattice",
    "TopMarker",
    "TOP",
    "all_subgroups",
    "build_lattice",
    "maximal_subgroups",
    "frattini",
    "intersection_subgroups",
    "ceil",
    "covered_by_even_maximals",
    "clear_caches",
]
