"""Concrete group actions: finite point spaces, the symbolic boundary of a
free group, and the induced action on (coset space) x (fiber).

Boundary points are the eventually periodic infinite reduced words
``prefix . period . period . ...``, stored in a unique normal form so that
equality is decidable and every action is exact (no truncation anywhere).

Induced points are pairs ``(coset index, fiber point)``.  A group element
moves the coset by the left action and moves the fiber through the coset
cocycle: the fiber coordinate is hit by the inverse cocycle value, rewritten
into the fiber free group when the fiber is a boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from .cosets import (
    CosetTable,
    SchreierBasis,
    SubgroupHandle,
    cocycle,
    rewrite_in_basis,
)
from .words import (
    FreeGroup,
    PermutationGroup,
    Word,
    alphabet,
    letters_from_str,
    letters_to_str,
    reduce_letters,
)

#: Sentinel returned by :func:`common_prefix_depth` for equal points.  Being
#: infinity, it composes with ``min`` when measuring how concentrated a set of
#: points is.
EQUAL = math.inf


# -- boundary points -----------------------------------------------------------

@dataclass(frozen=True)
class BoundaryPoint:
    """Eventually periodic reduced infinite word, in normal form.

    Build through :func:`boundary_point`; direct construction skips
    normalization.  Normal form: the period is cyclically reduced and
    primitive, the seam prefix/period carries no cancellation, and the prefix
    is the shortest possible (its last letter differs from the period's last
    letter).  Structural equality then coincides with equality of the infinite
    expansions.
    """

    prefix: tuple[int, ...]
    period: tuple[int, ...]

    def expand(self, n: int) -> tuple[int, ...]:
        """First n letters of the infinite word."""
        if n <= len(self.prefix):
            return self.prefix[:n]
        out = list(self.prefix)
        while len(out) < n:
            out.extend(self.period)
        return tuple(out[:n])

    def to_str(self) -> str:
        return f"{letters_to_str(self.prefix)}|{letters_to_str(self.period)}"

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"BoundaryPoint({self.to_str()!r})"


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def boundary_point(prefix, period) -> BoundaryPoint:
    """Normalize a (prefix, period) pair into a :class:`BoundaryPoint`."""
    prefix = reduce_letters(prefix)
    period = reduce_letters(period)
    if not period:
        raise ValueError("period must reduce to a nontrivial word")

    # cyclic reduction: period = s c s^-1 contributes s to the prefix
    shell: list[int] = []
    while len(period) >= 2 and period[0] == -period[-1]:
        shell.append(period[0])
        period = period[1:-1]
    if not period:
        raise ValueError("period is conjugate to the identity")
    prefix = reduce_letters(prefix + tuple(shell))

    # rotate the period into the prefix while the seam cancels
    while prefix and prefix[-1] == -period[0]:
        prefix = prefix[:-1]
        period = period[1:] + period[:1]

    # primitive root
    n = len(period)
    for d in _divisors(n):
        if period == period[:d] * (n // d):
            period = period[:d]
            break

    # shortest prefix: strip trailing letters that extend the periodic tail
    while prefix and prefix[-1] == period[-1]:
        prefix = prefix[:-1]
        period = period[-1:] + period[:-1]

    return BoundaryPoint(prefix, period)


def parse_boundary_point(s: str) -> BoundaryPoint:
    """Parse the ``"prefix|period"`` serialization."""
    if "|" not in s:
        raise ValueError(f"boundary point must look like 'prefix|period': {s!r}")
    pre, per = s.split("|", 1)
    return boundary_point(letters_from_str(pre), letters_from_str(per))


def common_prefix_depth(x1: BoundaryPoint, x2: BoundaryPoint):
    """Length of the longest common prefix of the expansions; EQUAL if equal.

    Comparison stops at max(prefix lengths) + lcm(period lengths): two
    eventually periodic words agreeing that far agree everywhere.
    """
    if x1 == x2:
        return EQUAL
    bound = max(len(x1.prefix), len(x2.prefix)) + math.lcm(
        len(x1.period), len(x2.period)
    )
    e1 = x1.expand(bound)
    e2 = x2.expand(bound)
    for d in range(bound):
        if e1[d] != e2[d]:
            return d
    raise AssertionError("distinct normal forms with identical expansions")


def boundary_act(g_letters: tuple[int, ...], point: BoundaryPoint) -> BoundaryPoint:
    """Left concatenation g . point with cancellation resolved exactly.

    The periodic tail is expanded just far enough (|g| letters plus one spare
    period) that all cancellation happens inside the expanded prefix.
    """
    m = len(g_letters)
    if m == 0:
        return point
    copies = m // len(point.period) + 2
    ext = point.prefix + point.period * copies
    return boundary_point(reduce_letters(g_letters + ext), point.period)


def cylinder_after(g_letters: tuple[int, ...], point: BoundaryPoint, depth: int) -> tuple[int, ...]:
    """First ``depth`` letters of g . point, without building the image point."""
    if depth == 0:
        return ()
    ext = point.expand(len(g_letters) + depth)
    return reduce_letters(g_letters + ext)[:depth]


# -- finite spaces ---------------------------------------------------------------

@dataclass(frozen=True)
class FiniteSpace:
    """Finite point space {1..size} with one permutation per ambient generator."""

    ambient: FreeGroup | PermutationGroup
    size: int
    letter_perms: tuple[tuple[int, ...], ...]
    inverse_perms: tuple[tuple[int, ...], ...]

    @classmethod
    def make(cls, ambient, size: int, letter_perms) -> "FiniteSpace":
        perms = tuple(tuple(p) for p in letter_perms)
        if len(perms) != ambient.rank:
            raise ValueError("need one permutation per ambient generator")
        inverses = []
        for p in perms:
            if sorted(p) != list(range(1, size + 1)):
                raise ValueError(f"not a permutation of 1..{size}: {p}")
            inv = [0] * size
            for x, y in enumerate(p, start=1):
                inv[y - 1] = x
            inverses.append(tuple(inv))
        return cls(ambient, size, perms, tuple(inverses))

    @classmethod
    def from_coset_table(cls, table: CosetTable) -> "FiniteSpace":
        return cls(table.ambient, table.size, table.fwd, table.inv)

    def act_letter(self, l: int, x: int) -> int:
        if l > 0:
            return self.letter_perms[l - 1][x - 1]
        return self.inverse_perms[-l - 1][x - 1]

    def act(self, w: Word, x: int) -> int:
        if w.ctx != self.ambient:
            raise ValueError("word from a different context")
        for l in reversed(w.letters):
            x = self.act_letter(l, x)
        return x

    def points(self) -> range:
        return range(1, self.size + 1)

    def orbit(self, x: int) -> frozenset:
        seen = {x}
        frontier = [x]
        letters = alphabet(self.ambient)
        while frontier:
            nxt = []
            for p in frontier:
                for l in letters:
                    q = self.act_letter(l, p)
                    if q not in seen:
                        seen.add(q)
                        nxt.append(q)
            frontier = nxt
        return frozenset(seen)

    def is_transitive(self) -> bool:
        return len(self.orbit(1)) == self.size


def stabilizer_subgroup(space: FiniteSpace, x: int, radius: int = 1) -> SubgroupHandle:
    """Generators of the stabilizer of x, from Schreier generators of the orbit.

    The orbit transversal makes this a full generating set, so the result is
    exact; ``radius`` is accepted for interface symmetry and only validated.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    if not space.is_transitive():
        raise ValueError("stabilizer generators require a transitive space")
    ctx = space.ambient
    letters = alphabet(ctx)

    reps: dict[int, tuple[int, ...]] = {x: ()}
    layer = [((), x)]
    while layer:
        cands = []
        for wl, p in layer:
            for l in letters:
                if wl and l == -wl[0]:
                    continue
                cands.append(((l,) + wl, space.act_letter(l, p)))
        cands.sort(key=lambda item: tuple((abs(v) - 1) * 2 + (v < 0) for v in item[0]))
        layer = []
        for wl, q in cands:
            if q not in reps:
                reps[q] = wl
                layer.append((wl, q))

    gens: list[Word] = []
    seen = set()
    for p in sorted(reps):
        up = reps[p]
        for l in letters:
            q = space.act_letter(l, p)
            s = reduce_letters(tuple(-v for v in reversed(reps[q])) + (l,) + up)
            if s and s not in seen:
                seen.add(s)
                gens.append(Word(ctx, s))
    return SubgroupHandle(ctx, tuple(gens))


# -- boundary spaces --------------------------------------------------------------

@dataclass(frozen=True)
class BoundarySpace:
    """Boundary of a rank-r free group; optionally acted on by a subgroup.

    With ``subgroup_action`` unset, acting words live in FreeGroup(rank) and
    hit points by left concatenation.  With a (table, basis) pair, acting
    words live in the ambient group, must lie in the subgroup, and act through
    Schreier rewriting.
    """

    rank: int
    subgroup_action: Optional[tuple[CosetTable, SchreierBasis]] = None

    def __post_init__(self) -> None:
        if self.rank < 2:
            raise ValueError("boundary space needs rank >= 2")

    @property
    def free_ctx(self) -> FreeGroup:
        return FreeGroup(self.rank)

    @property
    def acting_ctx(self):
        if self.subgroup_action is None:
            return self.free_ctx
        return self.subgroup_action[0].ambient

    def acting_letters(self, g: Word) -> tuple[int, ...]:
        """Resolve an acting word into rank-r letters (rewriting if needed)."""
        if self.subgroup_action is None:
            if g.ctx != self.free_ctx:
                raise ValueError("word is not over the boundary's free group")
            return g.letters
        table, basis = self.subgroup_action
        return rewrite_in_basis(table, basis, g).letters

    def act(self, g: Word, point: BoundaryPoint) -> BoundaryPoint:
        return boundary_act(self.acting_letters(g), point)

    def cylinders(self, depth: int) -> list[tuple[int, ...]]:
        """All reduced depth-d prefixes (the depth-d cylinder names)."""
        if depth == 0:
            return [()]
        out: list[tuple[int, ...]] = []
        frontier: list[tuple[int, ...]] = [()]
        letters = alphabet(self.free_ctx)
        for _ in range(depth):
            nxt = []
            for ls in frontier:
                last = ls[-1] if ls else 0
                for l in letters:
                    if l == -last:
                        continue
                    nxt.append(ls + (l,))
            frontier = nxt
        out.extend(frontier)
        return out


# -- induced spaces ----------------------------------------------------------------

@dataclass(frozen=True)
class InducedSpace:
    """Points (coset index, fiber point) under the cocycle-twisted action.

    ``fiber_action_enabled=False`` ablates the fiber motion (the coset still
    moves); useful as a control: with the fiber frozen, no non-trivial fiber
    measure can concentrate.
    """

    table: CosetTable
    basis: Optional[SchreierBasis]
    fiber: Union[BoundarySpace, FiniteSpace]
    fiber_action_enabled: bool = True

    @property
    def ambient(self):
        return self.table.ambient

    @property
    def size(self) -> int:
        return self.table.size

    def act(self, gamma: Word, point) -> tuple:
        i, y = point
        gt = gamma * self.table.rep(i)
        j = self.table.coset_of(gt)
        lam = gt.inverse() * self.table.rep(j)
        if not self.fiber_action_enabled:
            return (j, y)
        lam_inv = lam.inverse()
        if isinstance(self.fiber, BoundarySpace):
            letters = rewrite_in_basis(self.table, self.basis, lam_inv).letters
            return (j, boundary_act(letters, y))
        return (j, self.fiber.act(lam_inv, y))

    def fiber_letters(self, gamma: Word, i: int) -> tuple[int, ...]:
        """Rank-r letters by which gamma moves the fiber over coset i."""
        lam = cocycle(self.table, gamma, i)
        return rewrite_in_basis(self.table, self.basis, lam.inverse()).letters


def induced_space(table: CosetTable, basis: SchreierBasis) -> InducedSpace:
    """The boundary of the subgroup's free basis, induced over the coset space."""
    return InducedSpace(table, basis, BoundarySpace(basis.rank))


def parse_induced_point(s: str):
    """Parse the ``"(i, prefix|period)"`` serialization (finite fibers use
    ``"(i, y)"`` with an integer fiber point)."""
    t = s.strip()
    if not (t.startswith("(") and t.endswith(")")):
        raise ValueError(f"induced point must look like '(i, prefix|period)': {s!r}")
    body = t[1:-1]
    idx, _, rest = body.partition(",")
    rest = rest.strip()
    if "|" in rest:
        return (int(idx.strip()), parse_boundary_point(rest))
    return (int(idx.strip()), int(rest))


def induced_point_to_str(point) -> str:
    i, y = point
    if isinstance(y, int):
        return f"({i}, {y})"
    return f"({i}, {y.to_str()})"


# -- extensions ----------------------------------------------------------------------

@dataclass(frozen=True)
class ExtensionMap:
    """Surjective equivariant map between spaces.

    ``point_map=None`` means the source is induced and the map drops the fiber
    coordinate; otherwise ``point_map[p-1]`` maps finite source points.
    Equivariance and surjectivity are contract, not construction-time checks;
    the verification engines test them explicitly.
    """

    source: Union[InducedSpace, FiniteSpace]
    target: FiniteSpace
    point_map: Optional[tuple[int, ...]] = None

    def apply(self, p):
        if self.point_map is None:
            return p[0]
        return self.point_map[p - 1]

    def act_source(self, gamma: Word, p):
        return self.source.act(gamma, p)

    def act_target(self, gamma: Word, x: int) -> int:
        return self.target.act(gamma, x)


def induced_extension(space: InducedSpace) -> ExtensionMap:
    return ExtensionMap(space, FiniteSpace.from_coset_table(space.table), None)
