"""Game solver over structure classes.

Positions of both generating games partition into structure classes, one per
intersection subgroup (plus a terminal whole-group class in the achievement
game).  Within a class, the nim-value of a position depends only on its
parity, so each class carries a triple (class parity, nim of even positions,
nim of odd positions) and the class DAG can be evaluated from the largest
classes down.  The game's nim-number is the even component of the class of
the Frattini subgroup, which contains the empty starting position.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Union

from .errors import TrivialGroupError
from .groups import FiniteGroup
from .lattice import DEFAULT_LATTICE_CAP, TOP, SubgroupLattice, TopMarker, build_lattice

#: Sanity bound: computed nim components must stay below this.
NIM_SANITY_BOUND = 16

#: Node id used for the terminal whole-group class in reports and DOT output.
TOP_ID = -1


class GameKind(enum.Enum):
    """The avoidance game (DNG) or the achievement game (GEN)."""

    DNG = "dng"
    GEN = "gen"


class TypeTriple(NamedTuple):
    """(class parity, nim of even positions, nim of odd positions)."""

    parity: int
    nim_even: int
    nim_odd: int

    def component(self, position_parity: int) -> int:
        """Nim-value of positions of the given parity inside this class."""
        return self.nim_even if position_parity == 0 else self.nim_odd

    def __str__(self) -> str:
        return f"({self.parity},{self.nim_even},{self.nim_odd})"


@dataclass(frozen=True)
class ClassRow:
    """One structure class in a report: its subgroup, type, and option classes."""

    class_id: int
    subgroup_order: int
    parity: int
    triple: TypeTriple
    option_ids: tuple[int, ...]  # TOP_ID marks the whole-group class


@dataclass(frozen=True)
class GameReport:
    group_name: str
    group_parity: int
    kind: GameKind
    nim: int
    root_type: TypeTriple
    root_id: int
    classes: tuple[ClassRow, ...]  # largest class first (evaluation order)
    seconds: float

    @property
    def root_otype(self) -> frozenset[TypeTriple]:
        by_id = {row.class_id: row.triple for row in self.classes}
        by_id[TOP_ID] = TypeTriple(self.group_parity, 0, 0)
        root = next(row for row in self.classes if row.class_id == self.root_id)
        return frozenset(by_id[oid] for oid in root.option_ids)


def mex(values: Iterable[int]) -> int:
    """Minimum excludant: the least natural number not in the set."""
    s = set(values)
    k = 0
    while k in s:
        k += 1
    return k


def nim_sum(a: int, b: int) -> int:
    """Nim-value of a sum of games: bitwise exclusive or."""
    return a ^ b


def compute_class_type(parity: int, option_types: Iterable[TypeTriple]) -> TypeTriple:
    """Evaluate one structure class from the types of its option classes.

    The full representative of the class (the subgroup itself) moves only to
    option classes, landing on positions of the opposite parity; every smaller
    position in the class additionally has a move staying inside the class.
    This pins both components:

    * positions sharing the class parity get ``mex`` of the opposite-parity
      components of the option types, and
    * opposite-parity positions get ``mex`` of that value together with the
      same-parity components of the option types.
    """
    opts = list(option_types)
    n_top = mex(t.component(1 - parity) for t in opts)
    n_other = mex([n_top] + [t.component(parity) for t in opts])
    if parity == 0:
        return TypeTriple(0, n_top, n_other)
    return TypeTriple(1, n_other, n_top)


def _class_option_ids(
    lattice: SubgroupLattice, class_id: int, kind: GameKind
) -> tuple[int, ...]:
    """Option classes of one intersection subgroup's class.

    An option is the class of the subgroup extended by one outside element;
    extensions that generate the whole group are the terminal class in GEN and
    illegal in DNG.
    """
    subs = lattice.subgroups
    base = subs[class_id]
    ups = lattice.strict_supersets[class_id]
    option_ids: set[int] = set()
    saw_generating = False
    for g in range(lattice.group.order):
        if base.mask >> g & 1:
            continue
        for j in ups:
            if subs[j].mask >> g & 1:
                option_ids.add(j)
                break
        else:
            saw_generating = True
    out = sorted(option_ids, key=lambda j: (subs[j].order, subs[j].mask))
    if kind is GameKind.GEN and saw_generating:
        out.append(TOP_ID)
    return tuple(out)


def class_options(
    lattice: SubgroupLattice, subgroup_id: int, kind: GameKind
) -> list[Union[int, TopMarker]]:
    """Public view of a class's options: intersection-subgroup ids, plus TOP for GEN."""
    return [TOP if i == TOP_ID else i for i in _class_option_ids(lattice, subgroup_id, kind)]


def solve(
    group: FiniteGroup, kind: GameKind, cap: int = DEFAULT_LATTICE_CAP
) -> GameReport:
    """Nim-number of the chosen game on ``group`` via the structure-class calculus."""
    started = time.perf_counter()
    if group.order == 1:
        if kind is GameKind.DNG:
            raise TrivialGroupError("no avoidance game for the trivial group")
        # the empty set already generates: the start position is terminal
        return GameReport(
            group_name=group.name,
            group_parity=1,
            kind=kind,
            nim=0,
            root_type=TypeTriple(1, 0, 0),
            root_id=TOP_ID,
            classes=(),
            seconds=time.perf_counter() - started,
        )

    lattice = build_lattice(group, cap=cap)
    group_parity = group.order % 2
    terminal = TypeTriple(group_parity, 0, 0)

    types: dict[int, TypeTriple] = {TOP_ID: terminal}
    rows: list[ClassRow] = []
    # evaluate large classes first: options strictly grow the subgroup
    eval_order = sorted(
        lattice.intersection_ids,
        key=lambda i: (lattice.subgroups[i].order, lattice.subgroups[i].mask),
        reverse=True,
    )
    for class_id in eval_order:
        sub = lattice.subgroups[class_id]
        option_ids = _class_option_ids(lattice, class_id, kind)
        triple = compute_class_type(sub.order % 2, [types[i] for i in option_ids])
        if max(triple.nim_even, triple.nim_odd) >= NIM_SANITY_BOUND:
            raise AssertionError(
                f"nim component out of range in {group.name}: class of order "
                f"{sub.order} got {triple}"
            )
        types[class_id] = triple
        rows.append(ClassRow(class_id, sub.order, sub.order % 2, triple, option_ids))

    root_id = lattice.frattini_id
    root_type = types[root_id]
    return GameReport(
        group_name=group.name,
        group_parity=group_parity,
        kind=kind,
        nim=root_type.nim_even,
        root_type=root_type,
        root_id=root_id,
        classes=tuple(rows),
        seconds=time.perf_counter() - started,
    )


def otype_of_root(
    group: FiniteGroup, kind: GameKind, cap: int = DEFAULT_LATTICE_CAP
) -> frozenset[TypeTriple]:
    """Set of option types of the Frattini class (the game's root class)."""
    if group.order == 1:
        raise TrivialGroupError("the trivial group has no root structure class")
    return solve(group, kind, cap=cap).root_otype


__all__ = [
    "GameKind",
    "TypeTriple",
    "ClassRow",
    "GameReport",
    "TOP_ID",
    "NIM_SANITY_BOUND",
    "mex",
    "nim_sum",
    "compute_class_type",
    "class_options",
    "solve",
    "otype_of_root",
]
