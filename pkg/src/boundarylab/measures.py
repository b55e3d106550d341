"""Finitely supported probability measures with exact push-forward, cylinder
functions, and the ball-truncated Poisson transform.

Weights are exact rationals by default (mass sums to 1 on the nose); floats
are accepted with a 1e-12 mass tolerance.  Push-forward under a group element
maps atoms pointwise and merges coincident images by adding weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .spaces import (
    BoundaryPoint,
    BoundarySpace,
    ExtensionMap,
    FiniteSpace,
    InducedSpace,
    cylinder_after,
    induced_point_to_str,
    parse_boundary_point,
    parse_induced_point,
)
from .words import DEFAULT_BALL_CAP, Word, cached_ball, letters_to_str

MASS_TOL = 1e-12

Weight = Union[Fraction, float]


def _atom_sort_key(p):
    if isinstance(p, int):
        return (p,)
    if isinstance(p, BoundaryPoint):
        return (p.prefix, p.period)
    i, y = p
    if isinstance(y, int):
        return (i, y)
    return (i, y.prefix, y.period)


@dataclass(frozen=True)
class AtomicMeasure:
    """Probability measure with finitely many atoms on a fixed space."""

    space: Union[FiniteSpace, BoundarySpace, InducedSpace]
    atoms: tuple[tuple[object, Weight], ...]

    def support(self) -> tuple:
        return tuple(p for p, _ in self.atoms)

    def mass(self):
        return sum(w for _, w in self.atoms)

    @property
    def is_dirac(self) -> bool:
        return len(self.atoms) == 1

    def weight_multiset(self) -> tuple:
        return tuple(sorted((w for _, w in self.atoms), key=float))


def atomic_measure(space, pairs) -> AtomicMeasure:
    """Merge duplicate atoms, validate total mass, and sort canonically."""
    merged: dict = {}
    for p, w in pairs:
        if not isinstance(w, Fraction):
            w = w if isinstance(w, float) else Fraction(w)
        if w <= 0:
            raise ValueError("atom weights must be positive")
        merged[p] = merged.get(p, 0) + w
    if not merged:
        raise ValueError("a probability measure needs at least one atom")
    total = sum(merged.values())
    if any(isinstance(w, float) for w in merged.values()):
        if abs(float(total) - 1.0) > MASS_TOL:
            raise ValueError(f"atom weights sum to {total}, not 1")
    elif total != 1:
        raise ValueError(f"atom weights sum to {total}, not 1")
    atoms = tuple(sorted(merged.items(), key=lambda kv: _atom_sort_key(kv[0])))
    return AtomicMeasure(space, atoms)


def dirac(space, p) -> AtomicMeasure:
    return AtomicMeasure(space, ((p, Fraction(1)),))


def pushforward_group(gamma: Word, nu: AtomicMeasure) -> AtomicMeasure:
    """Image measure under the action of a group element (mass preserved)."""
    return atomic_measure(
        nu.space, [(nu.space.act(gamma, p), w) for p, w in nu.atoms]
    )


def pushforward_map(phi: ExtensionMap, nu: AtomicMeasure) -> AtomicMeasure:
    """Image measure under an extension map, merging atoms in the same fiber."""
    if nu.space is not phi.source and nu.space != phi.source:
        raise ValueError("measure does not live on the extension's source")
    return atomic_measure(phi.target, [(phi.apply(p), w) for p, w in nu.atoms])


def is_fiber_supported(phi: ExtensionMap, nu: AtomicMeasure) -> Optional[int]:
    """The base point whose fiber carries nu, if there is one.

    Equivalent to the push-forward being a point mass; both the support
    criterion and the push-forward criterion are the same computation here.
    """
    down = pushforward_map(phi, nu)
    if down.is_dirac:
        return down.atoms[0][0]
    return None


# -- cylinder functions ----------------------------------------------------------

def _count_cylinders(rank: int, depth: int) -> int:
    if depth == 0:
        return 1
    return 2 * rank * (2 * rank - 1) ** (depth - 1)


@dataclass(frozen=True)
class CylinderFunction:
    """Locally constant function determined by depth-d cylinders.

    Keys are letter tuples for boundary spaces and (coset, letter tuple)
    pairs for induced spaces.  ``default`` fills the unlisted cylinders, so the
    function is total regardless of how sparse ``values`` is.
    """

    rank: int
    depth: int
    values: dict = field(repr=False)
    cosets: Optional[int] = None
    default: float = 0.0

    def total_cylinders(self) -> int:
        n = _count_cylinders(self.rank, self.depth)
        return n * (self.cosets or 1)

    def norm(self) -> float:
        best = max((abs(v) for v in self.values.values()), default=0.0)
        if len(self.values) < self.total_cylinders():
            best = max(best, abs(self.default))
        return best

    def key_of(self, point):
        if self.cosets is None:
            return point.expand(self.depth)
        i, y = point
        return (i, y.expand(self.depth))

    def value_at(self, point) -> float:
        return self.values.get(self.key_of(point), self.default)

    def to_json(self) -> dict:
        entries = []
        for key, v in self.values.items():
            if self.cosets is None:
                entries.append({"cylinder": letters_to_str(key), "value": v})
            else:
                i, w = key
                entries.append({"cylinder": letters_to_str(w), "coset": i, "value": v})
        entries.sort(key=lambda e: (e.get("coset", 0), e["cylinder"]))
        out = {"depth": self.depth, "rank": self.rank, "default": self.default,
               "entries": entries}
        if self.cosets is not None:
            out["cosets"] = self.cosets
        return out


@dataclass(frozen=True)
class BallFunction:
    """A function on the radius-R word ball, the truncated Poisson image."""

    radius: int
    values: dict = field(repr=False)

    def sup(self) -> float:
        return max((abs(v) for v in self.values.values()), default=0.0)

    def to_json(self) -> dict:
        items = sorted(self.values.items(), key=lambda kv: kv[0].shortlex_key())
        return {
            "radius": self.radius,
            "entries": [{"word": w.to_str(), "value": v} for w, v in items],
        }


# -- Poisson transform ------------------------------------------------------------

def acting_ball(space, radius: int, max_size: int = DEFAULT_BALL_CAP) -> Sequence[Word]:
    """The word ball of the group acting on the space.

    For a subgroup-acted boundary the ball is taken in the subgroup's own
    generators (its free basis), returned as ambient words.
    """
    if isinstance(space, InducedSpace):
        return cached_ball(space.ambient, radius, max_size)
    if isinstance(space, FiniteSpace):
        return cached_ball(space.ambient, radius, max_size)
    if space.subgroup_action is None:
        return cached_ball(space.free_ctx, radius, max_size)
    from .cosets import eval_in_ambient

    table, basis = space.subgroup_action
    return tuple(
        eval_in_ambient(basis, w) for w in cached_ball(space.free_ctx, radius, max_size)
    )


def _poisson_value(nu: AtomicMeasure, f: CylinderFunction, s: Word) -> float:
    space = nu.space
    total = 0.0
    if isinstance(space, BoundarySpace) and f.cosets is None:
        letters = space.acting_letters(s)
        for p, w in nu.atoms:
            total += float(w) * f.values.get(
                cylinder_after(letters, p, f.depth), f.default
            )
        return total
    for p, w in nu.atoms:
        total += float(w) * f.value_at(space.act(s, p))
    return total


def poisson_transform(
    nu: AtomicMeasure,
    f: CylinderFunction,
    radius: int,
    max_size: int = DEFAULT_BALL_CAP,
) -> BallFunction:
    """s -> integral of f(s . x) d nu(x), over the radius-R word ball."""
    values = {}
    for s in acting_ball(nu.space, radius, max_size):
        values[s] = _poisson_value(nu, f, s)
    return BallFunction(radius, values)


def isometry_defect(
    nu: AtomicMeasure,
    f: CylinderFunction,
    radius: int,
    probes: Sequence[Word] = (),
    max_enumeration_radius: Optional[int] = None,
    max_size: int = DEFAULT_BALL_CAP,
) -> float:
    """How far the truncated Poisson image falls short of attaining ||f||.

    Returns ``max(0, ||f|| - max |P(f)(s)|)`` with s ranging over the word
    ball of the given radius (capped at ``max_enumeration_radius`` when the
    full ball is too large to enumerate) together with any ``probes`` of
    length <= radius.  Enlarging the explored set can only shrink the result,
    so the value is monotone non-increasing in the radius and, when a probe
    attains ||f||, exactly zero.
    """
    norm = f.norm()
    if norm <= 0:
        raise ValueError("isometry defect needs a function with positive norm")
    enum_radius = radius
    if max_enumeration_radius is not None:
        enum_radius = min(radius, max_enumeration_radius)
    best = 0.0
    for s in acting_ball(nu.space, enum_radius, max_size):
        best = max(best, abs(_poisson_value(nu, f, s)))
    for s in probes:
        if len(s) <= radius:
            best = max(best, abs(_poisson_value(nu, f, s)))
    return max(0.0, norm - best)


# -- serialization ------------------------------------------------------------------

def weight_to_json(w: Weight):
    if isinstance(w, Fraction):
        return str(w)
    return w


def weight_from_json(x) -> Weight:
    if isinstance(x, str):
        return Fraction(x)
    return float(x)


def point_to_json(p):
    if isinstance(p, int):
        return p
    if isinstance(p, BoundaryPoint):
        return p.to_str()
    return induced_point_to_str(p)


def point_from_json(space, data):
    if isinstance(space, FiniteSpace):
        return int(data)
    if isinstance(space, BoundarySpace):
        return parse_boundary_point(data)
    return parse_induced_point(data)


def measure_to_json(nu: AtomicMeasure) -> list:
    return [
        {"point": point_to_json(p), "weight": weight_to_json(w)} for p, w in nu.atoms
    ]


def measure_from_json(space, data) -> AtomicMeasure:
    return atomic_measure(
        space,
        [(point_from_json(space, e["point"]), weight_from_json(e["weight"])) for e in data],
    )
