"""Concrete finite groups as multiplication tables over 0-based element indices.

Every group is stored densely: ``mul(a, b)`` is a table lookup, index 0 is the
identity, and element subsets are plain Python sets of indices (with bitmask
helpers for the hot paths).  Permutation groups are built by breadth-first
closure of their generators, so element numbering is deterministic and
reproducible.  Instances are immutable after construction and safe to share
between threads.
"""

from __future__ import annotations

import hashlib
from typing import Iterable, Optional, Sequence

from .errors import OrderCapError, ParameterError

#: Default bound on group order for table construction.
DEFAULT_ORDER_CAP = 1000

IDENTITY = 0


class FiniteGroup:
    """A finite group given by its full multiplication table.

    Attributes:
        name: display string, e.g. ``"S5"`` or ``"AGL(1,7)"``.
        order: number of elements.
    """

    def __init__(self, table: list[list[int]], labels: list[str], name: str):
        n = len(table)
        if n == 0:
            raise ParameterError("a group needs at least the identity element")
        if len(labels) != n:
            raise ParameterError(f"{len(labels)} labels for {n} elements")
        self.name = name
        self.order = n
        self._table = table
        self._labels = list(labels)
        self._inv = self._build_inverses()
        self._element_orders: Optional[list[int]] = None
        self._signature: Optional[str] = None

    def _build_inverses(self) -> list[int]:
        inv = [-1] * self.order
        for a, row in enumerate(self._table):
            for b, p in enumerate(row):
                if p == IDENTITY:
                    inv[a] = b
                    break
            if inv[a] < 0:
                raise ParameterError(f"element {a} has no inverse; not a group table")
        return inv

    def mul(self, a: int, b: int) -> int:
        return self._table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def label(self, a: int) -> str:
        return self._labels[a]

    def labels(self) -> list[str]:
        return list(self._labels)

    def elements(self) -> range:
        return range(self.order)

    def row(self, a: int) -> list[int]:
        """The row of the multiplication table for left factor ``a``."""
        return self._table[a]

    def element_order(self, a: int) -> int:
        if self._element_orders is None:
            self._element_orders = [self._order_of(x) for x in range(self.order)]
        return self._element_orders[a]

    def _order_of(self, a: int) -> int:
        k, x = 1, a
        while x != IDENTITY:
            x = self._table[x][a]
            k += 1
        return k

    def is_abelian(self) -> bool:
        t = self._table
        return all(
            t[a][b] == t[b][a] for a in range(self.order) for b in range(a + 1, self.order)
        )

    def is_cyclic(self) -> bool:
        return any(self.element_order(a) == self.order for a in range(self.order))

    @property
    def signature(self) -> str:
        """SHA-256 of the multiplication table; stable cache key for this group."""
        if self._signature is None:
            h = hashlib.sha256()
            h.update(self.order.to_bytes(4, "little"))
            for row in self._table:
                for v in row:
                    h.update(v.to_bytes(2, "little"))
            self._signature = h.hexdigest()
        return self._signature

    def full_mask(self) -> int:
        return (1 << self.order) - 1

    def validate(self) -> None:
        """Exhaustive structural checks: identity, inverses, Latin square, associativity.

        Cost is O(order^3); intended for tests on groups of modest order.
        """
        n, t = self.order, self._table
        for a in range(n):
            if t[IDENTITY][a] != a or t[a][IDENTITY] != a:
                raise AssertionError(f"identity axiom fails at element {a}")
            if t[a][self._inv[a]] != IDENTITY or t[self._inv[a]][a] != IDENTITY:
                raise AssertionError(f"inverse axiom fails at element {a}")
            if sorted(t[a]) != list(range(n)) or sorted(t[b][a] for b in range(n)) != list(range(n)):
                raise AssertionError(f"row/column {a} is not a permutation")
        for a in range(n):
            for b in range(n):
                ab = t[a][b]
                row_b = t[b]
                row_ab = t[ab]
                for c in range(n):
                    if row_ab[c] != t[a][row_b[c]]:
                        raise AssertionError(f"associativity fails at ({a},{b},{c})")

    def __repr__(self) -> str:
        return f"<FiniteGroup {self.name} of order {self.order}>"


# ---------------------------------------------------------------------------
# permutation plumbing (internal tuples are 0-based images; cycles are 1-based)


def _perm_compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    # (a*b)(x) = a(b(x)): b acts first.
    return tuple(a[x] for x in b)


def _perm_from_cycles(degree: int, cycles: Sequence[Sequence[int]]) -> tuple[int, ...]:
    image = list(range(degree))
    seen: set[int] = set()
    for cycle in cycles:
        for p in cycle:
            if not 1 <= p <= degree:
                raise ParameterError(f"point {p} outside 1..{degree}")
            if p in seen:
                raise ParameterError(f"point {p} repeated across cycles")
            seen.add(p)
        for i, p in enumerate(cycle):
            q = cycle[(i + 1) % len(cycle)]
            image[p - 1] = q - 1
    return tuple(image)


def _perm_from_mapping(degree: int, mapping: Sequence[int]) -> tuple[int, ...]:
    if len(mapping) != degree:
        raise ParameterError(f"mapping of length {len(mapping)} for degree {degree}")
    image = [p - 1 for p in mapping]
    if sorted(image) != list(range(degree)):
        raise ParameterError("mapping is not a bijection on 1..degree")
    return tuple(image)


def _coerce_perm(degree: int, gen) -> tuple[int, ...]:
    """Accept a generator as nested cycles ``[[1,2],[3,4]]`` or a 1-based image list."""
    gen = list(gen)
    if gen and isinstance(gen[0], (list, tuple)):
        return _perm_from_cycles(degree, gen)
    return _perm_from_mapping(degree, gen)


def perm_cycle_label(perm: tuple[int, ...]) -> str:
    """Disjoint-cycle notation on 1-based points, fixed points omitted; identity is "e"."""
    parts = []
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cycle = []
        x = start
        while not seen[x]:
            seen[x] = True
            cycle.append(x + 1)
            x = perm[x]
        parts.append("(" + " ".join(map(str, cycle)) + ")")
    return "".join(parts) if parts else "e"


def perm_sign(perm: tuple[int, ...]) -> int:
    """0 for even permutations, 1 for odd."""
    seen = [False] * len(perm)
    transpositions = 0
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            length += 1
        transpositions += length - 1
    return transpositions % 2


# ---------------------------------------------------------------------------
# constructors


def from_permutation_generators(
    degree: int,
    gens: Iterable,
    name: Optional[str] = None,
    cap: int = DEFAULT_ORDER_CAP,
) -> FiniteGroup:
    """Close a set of permutations of {1..degree} into a group.

    Each generator is either a list of disjoint cycles on 1-based points
    (``[[1, 2, 3]]``) or a full 1-based image list of length ``degree``.
    Elements are numbered in breadth-first discovery order starting from the
    identity, so indices are reproducible.
    """
    if degree < 1:
        raise ParameterError("degree must be at least 1")
    perms = [_coerce_perm(degree, g) for g in gens]
    identity = tuple(range(degree))
    elems = [identity]
    index = {identity: 0}
    qi = 0
    while qi < len(elems):
        x = elems[qi]
        qi += 1
        for g in perms:
            y = _perm_compose(x, g)
            if y not in index:
                if len(elems) >= cap:
                    raise OrderCapError(f"order cap exceeded (cap={cap})")
                index[y] = len(elems)
                elems.append(y)
    n = len(elems)
    table = [[index[_perm_compose(a, b)] for b in elems] for a in elems]
    labels = [perm_cycle_label(p) for p in elems]
    g = FiniteGroup(table, labels, name or f"<perm group deg {degree}>")
    g._perms = elems  # kept for cycle-type inspection in tests
    return g


def trivial(name: str = "C1") -> FiniteGroup:
    return FiniteGroup([[0]], ["e"], name)


def cyclic(n: int, name: Optional[str] = None, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    if n < 1:
        raise ParameterError("cyclic group order must be positive")
    if n > cap:
        raise OrderCapError(f"order cap exceeded (cap={cap})")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroup(table, [str(a) for a in range(n)], name or f"C{n}")


def symmetric(n: int, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    if n < 1:
        raise ParameterError("n must be at least 1")
    if n == 1:
        return trivial("S1")
    gens = [[[1, 2]]] if n == 2 else [[[1, 2]], [list(range(1, n + 1))]]
    return from_permutation_generators(n, gens, name=f"S{n}", cap=cap)


def alternating(n: int, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    if n < 1:
        raise ParameterError("n must be at least 1")
    if n <= 2:
        return trivial(f"A{n}")
    if n == 3:
        gens = [[[1, 2, 3]]]
    elif n % 2 == 1:
        gens = [[[1, 2, 3]], [list(range(1, n + 1))]]
    else:
        gens = [[[1, 2, 3]], [list(range(2, n + 1))]]
    return from_permutation_generators(n, gens, name=f"A{n}", cap=cap)


def dihedral(n: int, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Dihedral group of order 2n (symmetries of the n-gon)."""
    if n < 2:
        raise ParameterError("dihedral requires n >= 2 (group of order 2n)")
    if 2 * n > cap:
        raise OrderCapError(f"order cap exceeded (cap={cap})")

    # element r^k s^f has index k + n*f; s r = r^-1 s
    table = []
    for f1 in (0, 1):
        for k1 in range(n):
            row = []
            for f2 in (0, 1):
                for k2 in range(n):
                    k = (k1 - k2) % n if f1 else (k1 + k2) % n
                    row.append(k + (n if f1 ^ f2 else 0))
            table.append(row)
    labels = ["e"] + [f"r{k}" if k > 1 else "r" for k in range(1, n)]
    labels += ["s"] + [f"r{k} s" if k > 1 else "r s" for k in range(1, n)]
    return FiniteGroup(table, labels, f"D{n}")


def quaternion() -> FiniteGroup:
    """The quaternion group Q8 on the unit quaternions."""
    units = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    base = {
        ("1", "1"): "1", ("1", "i"): "i", ("1", "j"): "j", ("1", "k"): "k",
        ("i", "1"): "i", ("i", "i"): "-1", ("i", "j"): "k", ("i", "k"): "-j",
        ("j", "1"): "j", ("j", "i"): "-k", ("j", "j"): "-1", ("j", "k"): "i",
        ("k", "1"): "k", ("k", "i"): "j", ("k", "j"): "-i", ("k", "k"): "-1",
    }

    def mul_sym(a: str, b: str) -> str:
        sa, ua = (-1, a[1:]) if a.startswith("-") else (1, a)
        sb, ub = (-1, b[1:]) if b.startswith("-") else (1, b)
        r = base[(ua, ub)]
        sr, ur = (-1, r[1:]) if r.startswith("-") else (1, r)
        sign = sa * sb * sr
        return ur if sign == 1 else "-" + ur

    index = {u: i for i, u in enumerate(units)}
    table = [[index[mul_sym(a, b)] for b in units] for a in units]
    return FiniteGroup(table, units, "Q8")


def direct_product(g: FiniteGroup, h: FiniteGroup, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    n = g.order * h.order
    if n > cap:
        raise OrderCapError(f"order cap exceeded (cap={cap})")
    hn = h.order
    table = []
    for a1 in range(g.order):
        for b1 in range(h.order):
            row = []
            grow = g.row(a1)
            hrow = h.row(b1)
            for a2 in range(g.order):
                ga = grow[a2]
                for b2 in range(h.order):
                    row.append(ga * hn + hrow[b2])
            table.append(row)
    labels = [
        f"({g.label(a)},{h.label(b)})" for a in range(g.order) for b in range(h.order)
    ]
    return FiniteGroup(table, labels, f"{g.name}x{h.name}")


def semidirect_cyclic(p: int, q: int, k: int, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """C_p : C_q where the C_q generator acts on C_p as multiplication by k."""
    if p < 2 or q < 1:
        raise ParameterError("need p >= 2 and q >= 1")
    if p * q > cap:
        raise OrderCapError(f"order cap exceeded (cap={cap})")
    k %= p
    if k == 0:
        raise ParameterError(f"invalid action parameter k={k}: k is 0 mod p={p}")
    if pow(k, q, p) != 1:
        raise ParameterError(f"invalid action parameter k={k}: k^{q} is not 1 mod p={p}")
    powers = [pow(k, b, p) for b in range(q)]
    table = []
    for a1 in range(p):
        for b1 in range(q):
            row = []
            act = powers[b1]
            for a2 in range(p):
                a = (a1 + act * a2) % p
                for b2 in range(q):
                    row.append(a * q + (b1 + b2) % q)
            table.append(row)
    labels = [f"({a},{b})" for a in range(p) for b in range(q)]
    return FiniteGroup(table, labels, f"C{p}:C{q}@{k}")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _primitive_root(p: int) -> int:
    factors = set()
    m = p - 1
    d = 2
    while d * d <= m:
        while m % d == 0:
            factors.add(d)
            m //= d
        d += 1
    if m > 1:
        factors.add(m)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
            return g
    raise ParameterError(f"no primitive root mod {p}")  # unreachable for prime p


def agl1(p: int, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """AGL(1,p): all maps x -> ax + b over the field of p elements, as permutations of {1..p}."""
    if not _is_prime(p) or p < 3:
        raise ParameterError(f"p={p} must be a prime >= 3")
    g = _primitive_root(p)
    translate = [((x - 1) + 1) % p + 1 for x in range(1, p + 1)]
    multiply = [((x - 1) * g) % p + 1 for x in range(1, p + 1)]
    grp = from_permutation_generators(p, [translate, multiply], name=f"AGL(1,{p})", cap=cap)
    assert grp.order == p * (p - 1)
    return grp


def agl1_cap_alt(p: int, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """The even affine maps AGL(1,p) intersected with A_p; order p(p-1)/2."""
    if not _is_prime(p) or p < 3:
        raise ParameterError(f"p={p} must be a prime >= 3")
    g = _primitive_root(p)
    g2 = (g * g) % p
    translate = [((x - 1) + 1) % p + 1 for x in range(1, p + 1)]
    multiply = [((x - 1) * g2) % p + 1 for x in range(1, p + 1)]
    grp = from_permutation_generators(p, [translate, multiply], name=f"AGL+(1,{p})", cap=cap)
    assert grp.order == p * (p - 1) // 2
    return grp


# ---------------------------------------------------------------------------
# subsets, closure, generation


def mask_of(members: Iterable[int]) -> int:
    m = 0
    for x in members:
        m |= 1 << x
    return m


def set_of(mask: int) -> frozenset[int]:
    out = []
    x = 0
    while mask:
        if mask & 1:
            out.append(x)
        mask >>= 1
        x += 1
    return frozenset(out)


def closure_mask(group: FiniteGroup, mask: int, stop_above: Optional[int] = None) -> int:
    """Bitmask of the subgroup generated by the elements set in ``mask``.

    If ``stop_above`` is given and the partial closure exceeds it, the full
    group mask is returned immediately (valid whenever stop_above >= order/2,
    by Lagrange).
    """
    gens = []
    m = mask
    x = 0
    while m:
        if m & 1:
            gens.append(x)
        m >>= 1
        x += 1
    return closure_of_gens(group, gens, stop_above)


def closure_of_gens(
    group: FiniteGroup, gens: Sequence[int], stop_above: Optional[int] = None
) -> int:
    """Bitmask of the subgroup generated by ``gens`` (BFS from the identity)."""
    table = group._table
    n = group.order
    seen = bytearray(n)
    seen[IDENTITY] = 1
    queue = [IDENTITY]
    count = 1
    qi = 0
    while qi < len(queue):
        row = table[queue[qi]]
        qi += 1
        for g in gens:
            y = row[g]
            if not seen[y]:
                seen[y] = 1
                count += 1
                queue.append(y)
        if stop_above is not None and count > stop_above:
            return group.full_mask()
    out = 0
    for e in queue:
        out |= 1 << e
    return out


def closure(group: FiniteGroup, members: Iterable[int]) -> frozenset[int]:
    """The smallest subgroup containing ``members``; closure of the empty set is {e}."""
    return set_of(closure_mask(group, mask_of(members)))


def generates(group: FiniteGroup, members: Iterable[int]) -> bool:
    return closure_mask(group, mask_of(members), stop_above=group.order // 2) == group.full_mask()


def element_order(group: FiniteGroup, x: int) -> int:
    return group.element_order(x)


def pty(subset) -> int:
    """Parity of a set: 0 if even-sized, 1 if odd-sized.  Accepts a set or a bitmask."""
    if isinstance(subset, int):
        return subset.bit_count() % 2
    return len(subset) % 2


def order_profile(group: FiniteGroup) -> dict[int, int]:
    """Multiset of element orders, as {order: count}; a cheap isomorphism invariant."""
    profile: dict[int, int] = {}
    for x in range(group.order):
        k = group.element_order(x)
        profile[k] = profile.get(k, 0) + 1
    return profile


__all__ = [
    "DEFAULT_ORDER_CAP",
    "IDENTITY",
    "FiniteGroup",
    "from_permutation_generators",
    "trivial",
    "cyclic",
    "symmetric",
    "alternating",
    "dihedral",
    "quaternion",
    "direct_product",
    "semidirect_cyclic",
    "agl1",
    "agl1_cap_alt",
    "perm_cycle_label",
    "perm_sign",
    "mask_of",
    "set_of",
    "closure",
    "closure_mask",
    "closure_of_gens",
    "generates",
    "element_order",
    "pty",
    "order_profile",
]
