"""Reduced-word arithmetic over free groups and finite permutation groups.

Group elements are carried everywhere as freely reduced words.  A letter is a
nonzero integer: ``+i`` is the i-th generator (1-based), ``-i`` its inverse.
Words serialize as strings over ``a``..``z``, uppercase meaning inverse, so
``"abA"`` is a.b.a^-1 and ``""`` is the identity.

Two ambient kinds exist: :class:`FreeGroup` (exact word arithmetic is the
whole story) and :class:`PermutationGroup` (words additionally evaluate to
permutations of ``{0..degree-1}``, and enumeration merges words that evaluate
to the same permutation).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

DEFAULT_BALL_CAP = 1_000_000

_LOWER = "abcdefghijklmnopqrstuvwxyz"


class BudgetExceededError(RuntimeError):
    """An enumeration outgrew its configured size cap."""


@dataclass(frozen=True)
class FreeGroup:
    """Free group of the given rank; valid letters are +-1..+-rank."""

    rank: int

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError(f"free group rank must be >= 1, got {self.rank}")


@dataclass(frozen=True)
class PermutationGroup:
    """Finite permutation group on {0..degree-1} given by generator permutations."""

    degree: int
    generators: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise ValueError(f"degree must be >= 1, got {self.degree}")
        if not self.generators:
            raise ValueError("permutation group needs at least one generator")
        for g in self.generators:
            if sorted(g) != list(range(self.degree)):
                raise ValueError(f"not a permutation of 0..{self.degree - 1}: {g}")

    @property
    def rank(self) -> int:
        return len(self.generators)


GroupContext = FreeGroup | PermutationGroup


def reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    """Freely reduce a letter sequence (single stack pass; idempotent)."""
    out: list[int] = []
    for l in letters:
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


def _check_letters(ctx, letters: Sequence[int]) -> None:
    rank = ctx.rank
    for l in letters:
        if l == 0 or abs(l) > rank:
            raise ValueError(f"letter {l} out of range for rank-{rank} context")


@dataclass(frozen=True)
class Word:
    """A freely reduced word in a fixed group context.

    Instances are immutable; construct through :func:`word` (which validates
    and reduces) unless the letters are already known reduced.
    """

    ctx: FreeGroup | PermutationGroup
    letters: tuple[int, ...]

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        if self.ctx != other.ctx:
            raise ValueError("cannot multiply words from mismatched group contexts")
        a = list(self.letters)
        b = other.letters
        i = 0
        while a and i < len(b) and a[-1] == -b[i]:
            a.pop()
            i += 1
        return Word(self.ctx, tuple(a) + b[i:])

    def inverse(self) -> "Word":
        return Word(self.ctx, tuple(-l for l in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        out = Word(self.ctx, ())
        for _ in range(n):
            out = out * self
        return out

    def conjugated_by(self, t: "Word") -> "Word":
        """t * self * t^-1."""
        return t * self * t.inverse()

    def to_str(self) -> str:
        return letters_to_str(self.letters)

    def shortlex_key(self) -> tuple:
        return (len(self.letters), tuple(_letter_rank(l) for l in self.letters))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Word({self.to_str()!r})"


def word(ctx, letters: Iterable[int]) -> Word:
    """Validate, reduce and wrap a letter sequence."""
    letters = tuple(letters)
    _check_letters(ctx, letters)
    return Word(ctx, reduce_letters(letters))


def identity(ctx) -> Word:
    return Word(ctx, ())


def generator(ctx, index: int) -> Word:
    """The index-th generator (1-based) as a one-letter word."""
    return word(ctx, (index,))


def _letter_rank(l: int) -> int:
    # a < A < b < B < ...: positive letter sorts just before its inverse
    return (abs(l) - 1) * 2 + (0 if l > 0 else 1)


def alphabet(ctx) -> tuple[int, ...]:
    """All letters of the context in canonical (shortlex) order."""
    out: list[int] = []
    for i in range(1, ctx.rank + 1):
        out.extend((i, -i))
    return tuple(out)


def letters_to_str(letters: Sequence[int]) -> str:
    chars = []
    for l in letters:
        if abs(l) > 26:
            raise ValueError("string serialization supports generator indices up to 26")
        c = _LOWER[abs(l) - 1]
        chars.append(c if l > 0 else c.upper())
    return "".join(chars)


def letters_from_str(s: str) -> tuple[int, ...]:
    letters = []
    for c in s:
        low = c.lower()
        if low not in _LOWER:
            raise ValueError(f"invalid word character {c!r}")
        idx = _LOWER.index(low) + 1
        letters.append(idx if c.islower() else -idx)
    return tuple(letters)


def parse_word(ctx, s: str) -> Word:
    return word(ctx, letters_from_str(s))


# -- permutation evaluation ---------------------------------------------------

def identity_perm(degree: int) -> tuple[int, ...]:
    return tuple(range(degree))


def compose_perms(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """Function composition p after q: x -> p[q[x]]."""
    return tuple(p[q[x]] for x in range(len(p)))


def invert_perm(p: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[y] = x
    return tuple(out)


def letter_perm(ctx: PermutationGroup, l: int) -> tuple[int, ...]:
    g = ctx.generators[abs(l) - 1]
    return g if l > 0 else invert_perm(g)


def permutation_of(w: Word) -> tuple[int, ...]:
    """Evaluate a word to a permutation (left-to-right composite).

    The map is a homomorphism for the left action: the image of u*v is
    perm(u) composed after perm(v).
    """
    ctx = w.ctx
    if not isinstance(ctx, PermutationGroup):
        raise ValueError("permutation evaluation requires a permutation-group context")
    p = identity_perm(ctx.degree)
    for l in w.letters:
        p = compose_perms(p, letter_perm(ctx, l))
    return p


# -- ball enumeration ---------------------------------------------------------

def ball(ctx, radius: int, max_size: int = DEFAULT_BALL_CAP) -> tuple[Word, ...]:
    """All reduced words of length <= radius, in shortlex order.

    For permutation contexts, words evaluating to the same permutation are
    merged and the shortlex-least representative is kept.  Raises
    :class:`BudgetExceededError` when the ball would exceed ``max_size``.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if isinstance(ctx, FreeGroup):
        return _free_ball(ctx, radius, max_size)
    return _perm_ball(ctx, radius, max_size)


def _free_ball(ctx: FreeGroup, radius: int, max_size: int) -> tuple[Word, ...]:
    words: list[Word] = [Word(ctx, ())]
    frontier: list[tuple[int, ...]] = [()]
    letters = alphabet(ctx)
    for _ in range(radius):
        nxt = []
        for ls in frontier:
            last = ls[-1] if ls else 0
            for l in letters:
                if l == -last:
                    continue
                nxt.append(ls + (l,))
        if len(words) + len(nxt) > max_size:
            raise BudgetExceededError(
                f"ball of radius {radius} exceeds cap {max_size}"
            )
        frontier = nxt
        words.extend(Word(ctx, ls) for ls in frontier)
    return tuple(words)


def _perm_ball(ctx: PermutationGroup, radius: int, max_size: int) -> tuple[Word, ...]:
    ident = identity_perm(ctx.degree)
    seen = {ident}
    out = [Word(ctx, ())]
    frontier: list[tuple[tuple[int, ...], tuple[int, ...]]] = [((), ident)]
    letters = alphabet(ctx)
    for _ in range(radius):
        nxt = []
        for ls, p in frontier:
            last = ls[-1] if ls else 0
            for l in letters:
                if l == -last:
                    continue
                q = compose_perms(p, letter_perm(ctx, l))
                if q in seen:
                    continue
                seen.add(q)
                if len(seen) > max_size:
                    raise BudgetExceededError(
                        f"ball of radius {radius} exceeds cap {max_size}"
                    )
                nxt.append((ls + (l,), q))
        frontier = nxt
        out.extend(Word(ctx, ls) for ls, _ in frontier)
        if not frontier:
            break
    return tuple(out)


@lru_cache(maxsize=128)
def cached_ball(ctx, radius: int, max_size: int = DEFAULT_BALL_CAP) -> tuple[Word, ...]:
    """Memoized :func:`ball`; contexts are hashable so this is safe to share."""
    return ball(ctx, radius, max_size)


def free_ball_size(rank: int, radius: int) -> int:
    """Closed form 1 + sum_{l=1..R} 2k(2k-1)^(l-1) for a rank-k free group."""
    total = 1
    for length in range(1, radius + 1):
        total += 2 * rank * (2 * rank - 1) ** (length - 1)
    return total
