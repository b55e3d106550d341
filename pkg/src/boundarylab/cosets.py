"""Finite-index subgroup machinery: coset tables, the coset cocycle, and
Schreier rewriting.

Conventions (used consistently across the package):

* Cosets are the left cosets ``g.H`` of a subgroup ``H`` in the ambient group,
  numbered ``1..n`` with coset 1 the subgroup itself.
* The group acts on the left: letter ``x`` sends coset ``g.H`` to ``(x g).H``,
  so tracing a word through the table scans its letters right to left.
* The transversal ``t_1..t_n`` consists of the shortlex-least representative
  word of each coset, with ``t_1`` the identity.  Shortlex-least left-coset
  representatives are closed under taking suffixes, which is what makes the
  Schreier construction below produce a free basis of the expected rank.
* ``cocycle(table, g, i)`` is the unique subgroup element ``lam`` such that
  ``g * t_i * lam`` is again a transversal word, computed exactly as
  ``(g t_i)^-1 t_j``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .words import (
    BudgetExceededError,
    FreeGroup,
    PermutationGroup,
    Word,
    alphabet,
    compose_perms,
    identity_perm,
    invert_perm,
    letter_perm,
    letters_to_str,
    permutation_of,
    reduce_letters,
)


class InfiniteIndexError(ValueError):
    """The subgroup has infinite index (free ambient group, incomplete graph)."""


@dataclass(frozen=True)
class SubgroupHandle:
    """A finitely generated subgroup of an ambient group, given by words."""

    ambient: FreeGroup | PermutationGroup
    generators: tuple[Word, ...]

    def __post_init__(self) -> None:
        for h in self.generators:
            if h.ctx != self.ambient:
                raise ValueError("subgroup generator from a different context")


def subgroup(ambient, generator_words) -> SubgroupHandle:
    """Build a handle, dropping identity generators."""
    gens = tuple(h for h in generator_words if not h.is_identity)
    return SubgroupHandle(ambient, gens)


def conjugate_subgroup(sub: SubgroupHandle, t: Word) -> SubgroupHandle:
    """The subgroup t.H.t^-1, generator by generator."""
    tinv = t.inverse()
    return SubgroupHandle(sub.ambient, tuple(t * h * tinv for h in sub.generators))


@dataclass(frozen=True)
class CosetTable:
    """Complete left-coset structure of a finite-index subgroup.

    ``fwd[x-1][i-1]`` is the coset of ``x . t_i H`` for positive letter x;
    ``inv`` holds the inverse letters.  Immutable once built.
    """

    subgroup: SubgroupHandle
    size: int
    fwd: tuple[tuple[int, ...], ...]
    inv: tuple[tuple[int, ...], ...]
    transversal: tuple[Word, ...]

    @property
    def ambient(self):
        return self.subgroup.ambient

    def act_letter(self, l: int, i: int) -> int:
        if l > 0:
            return self.fwd[l - 1][i - 1]
        return self.inv[-l - 1][i - 1]

    def coset_of(self, w: Word) -> int:
        """Coset number of w.H; scans right to left (left action)."""
        if w.ctx != self.ambient:
            raise ValueError("word from a different context")
        c = 1
        for l in reversed(w.letters):
            c = self.act_letter(l, c)
        return c

    def contains(self, w: Word) -> bool:
        return self.coset_of(w) == 1

    def rep(self, i: int) -> Word:
        return self.transversal[i - 1]

    def to_json(self) -> dict:
        action = {}
        for x in range(1, self.ambient.rank + 1):
            action[letters_to_str((x,))] = list(self.fwd[x - 1])
            action[letters_to_str((-x,))] = list(self.inv[x - 1])
        return {
            "index": self.size,
            "transversal": [t.to_str() for t in self.transversal],
            "action": action,
        }


def enumerate_cosets(sub: SubgroupHandle, max_cosets: int = 1024) -> CosetTable:
    """Build the complete coset table of a finite-index subgroup.

    Free ambient group: trace every generator as a loop at the base vertex of
    a labelled graph, folding coincidences as they appear.  The folded graph
    is complete if and only if the index is finite; its vertices are then the
    cosets.  Finite ambient group: enumerate cosets as orbits of the word ball
    acting on permutations.

    Raises :class:`InfiniteIndexError` for infinite index (free ambient only)
    and :class:`BudgetExceededError` when the index exceeds ``max_cosets``.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be >= 1")
    if isinstance(sub.ambient, FreeGroup):
        if not sub.generators:
            raise InfiniteIndexError(
                "the trivial subgroup of a free group has infinite index"
            )
        return _enumerate_free(sub, max_cosets)
    return _enumerate_perm(sub, max_cosets)


# -- free ambient: trace-and-fold ---------------------------------------------

def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _merge(parent: list[int], edges: dict, a: int, b: int) -> None:
    """Identify two vertices and fold the edge relation until functional."""
    pending = deque([(a, b)])
    while pending:
        x, y = pending.popleft()
        x, y = _find(parent, x), _find(parent, y)
        if x == y:
            continue
        if y < x:
            x, y = y, x
        parent[y] = x
        rewritten: dict = {}
        for (u, l), v in edges.items():
            u = _find(parent, u)
            v = _find(parent, v)
            prev = rewritten.get((u, l))
            if prev is None:
                rewritten[(u, l)] = v
            elif prev != v:
                pending.append((prev, v))
        edges.clear()
        edges.update(rewritten)


def _enumerate_free(sub: SubgroupHandle, max_cosets: int) -> CosetTable:
    ctx = sub.ambient
    parent = [0]
    edges: dict = {}

    for h in sub.generators:
        cur = _find(parent, 0)
        for l in reversed(h.letters):
            cur = _find(parent, cur)
            nxt = edges.get((cur, l))
            if nxt is None:
                nxt = len(parent)
                parent.append(nxt)
                edges[(cur, l)] = nxt
                edges[(nxt, -l)] = cur
            cur = _find(parent, nxt)
        _merge(parent, edges, cur, 0)

    live = sorted({_find(parent, i) for i in range(len(parent))})
    letters = alphabet(ctx)
    for u in live:
        for l in letters:
            if (u, l) not in edges:
                raise InfiniteIndexError(
                    "coset graph did not close: the subgroup has infinite index"
                )
    if len(live) > max_cosets:
        raise BudgetExceededError(
            f"index {len(live)} exceeds max_cosets={max_cosets}"
        )
    return _canonicalize(sub, live, lambda u, l: edges[(u, l)])


# -- finite ambient: permutation orbits ---------------------------------------

def _perm_closure(perms, cap: int = 1_000_000) -> frozenset:
    ident = identity_perm(len(perms[0])) if perms else ()
    gens = []
    for p in perms:
        gens.append(tuple(p))
        gens.append(invert_perm(p))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = compose_perms(p, g)
                if q not in seen:
                    seen.add(q)
                    if len(seen) > cap:
                        raise BudgetExceededError("subgroup closure exceeds cap")
                    nxt.append(q)
        frontier = nxt
    return frozenset(seen)


def _enumerate_perm(sub: SubgroupHandle, max_cosets: int) -> CosetTable:
    ctx = sub.ambient
    ident = identity_perm(ctx.degree)
    sub_perms = _perm_closure([permutation_of(h) for h in sub.generators] or [ident])

    def canon(p):
        # canonical key of the left coset p.H
        return min(compose_perms(p, h) for h in sub_perms)

    def edge(p, l):
        return compose_perms(letter_perm(ctx, l), p)

    keys = {canon(ident): ident}
    order = [canon(ident)]
    layer = [((), ident)]
    letters = alphabet(ctx)
    while layer:
        cands = []
        for wl, p in layer:
            for l in letters:
                if wl and l == -wl[0]:
                    continue
                cands.append(((l,) + wl, edge(p, l)))
        cands.sort(key=lambda item: tuple((abs(x) - 1) * 2 + (x < 0) for x in item[0]))
        layer = []
        for wl, q in cands:
            k = canon(q)
            if k not in keys:
                if len(keys) >= max_cosets:
                    raise BudgetExceededError(
                        f"index exceeds max_cosets={max_cosets}"
                    )
                keys[k] = q
                order.append(k)
                layer.append((wl, q))

    index_of = {k: i + 1 for i, k in enumerate(order)}

    def edge_by_key(u_key, l):
        return index_of[canon(edge(keys[u_key], l))]

    return _canonicalize(sub, order, edge_by_key, index_lookup=index_of)


# -- shared canonical numbering -----------------------------------------------

def _canonicalize(sub, nodes, edge_fn, index_lookup=None) -> CosetTable:
    """Renumber cosets by shortlex order of their least representative word.

    ``edge_fn(node, letter)`` returns the target node (raw node ids for the
    free path, 1-based indices for the permutation path when ``index_lookup``
    is given).
    """
    ctx = sub.ambient
    letters = alphabet(ctx)
    base = nodes[0]

    reps: dict = {base: ()}
    ordered = [base]
    layer = [((), base)]
    while layer:
        cands = []
        for wl, u in layer:
            for l in letters:
                if wl and l == -wl[0]:
                    continue
                v = edge_fn(u, l)
                if index_lookup is not None:
                    v = nodes[v - 1]
                cands.append(((l,) + wl, v))
        cands.sort(key=lambda item: tuple((abs(x) - 1) * 2 + (x < 0) for x in item[0]))
        layer = []
        for wl, v in cands:
            if v not in reps:
                reps[v] = wl
                ordered.append(v)
                layer.append((wl, v))
    if len(ordered) != len(nodes):
        raise AssertionError("coset graph is not connected")

    num = {node: i + 1 for i, node in enumerate(ordered)}

    def target(node, l):
        v = edge_fn(node, l)
        if index_lookup is not None:
            v = nodes[v - 1]
        return num[v]

    n = len(ordered)
    fwd = tuple(
        tuple(target(node, x) for node in ordered) for x in range(1, ctx.rank + 1)
    )
    inv = tuple(
        tuple(target(node, -x) for node in ordered) for x in range(1, ctx.rank + 1)
    )
    for x in range(ctx.rank):
        for i in range(n):
            if inv[x][fwd[x][i] - 1] != i + 1:
                raise AssertionError("letter actions are not mutually inverse")
    transversal = tuple(Word(ctx, reduce_letters(reps[node])) for node in ordered)

    table = CosetTable(sub, n, fwd, inv, transversal)
    for i, t in enumerate(transversal, start=1):
        if table.coset_of(t) != i:
            raise AssertionError("transversal inconsistency")
    for h in sub.generators:
        if table.coset_of(h) != 1:
            raise AssertionError("subgroup generator does not fix coset 1")
    return table


# -- cocycle -------------------------------------------------------------------

def cocycle(table: CosetTable, gamma: Word, i: int) -> Word:
    """The unique subgroup element lam with gamma * t_i * lam in the transversal.

    Computed exactly as (gamma t_i)^-1 t_j where j is the coset of gamma t_i.
    """
    if not 1 <= i <= table.size:
        raise ValueError(f"coset index {i} out of range 1..{table.size}")
    gt = gamma * table.rep(i)
    j = table.coset_of(gt)
    lam = gt.inverse() * table.rep(j)
    return lam


# -- Schreier basis and rewriting ----------------------------------------------

@dataclass
class SchreierBasis:
    """Free basis of a finite-index subgroup of a free group.

    ``generators[j-1]`` is the ambient word of basis letter j; ``pair_index``
    maps the nontrivial (positive letter, source coset) pairs to basis letters.
    Built from a coset table whose transversal is suffix-closed.
    """

    ambient: FreeGroup
    rank: int
    generators: tuple[Word, ...]
    pair_index: dict = field(repr=False)

    def free_group(self) -> FreeGroup:
        return FreeGroup(self.rank)


def schreier_basis(table: CosetTable) -> SchreierBasis:
    """Nontrivial Schreier generators t_j^-1 x t_i over all (letter, coset) pairs."""
    ctx = table.ambient
    if not isinstance(ctx, FreeGroup):
        raise ValueError("Schreier basis requires a free ambient group")
    gens: list[Word] = []
    pair_index: dict = {}
    for x in range(1, ctx.rank + 1):
        xw = Word(ctx, (x,))
        for i in range(1, table.size + 1):
            j = table.act_letter(x, i)
            s = table.rep(j).inverse() * xw * table.rep(i)
            if s.is_identity:
                continue
            gens.append(s)
            pair_index[(x, i)] = len(gens)
    expected = 1 + table.size * (ctx.rank - 1)
    if len(gens) != expected:
        raise AssertionError(
            f"Schreier rank {len(gens)} != 1 + n(k-1) = {expected}"
        )
    return SchreierBasis(ctx, len(gens), tuple(gens), pair_index)


def rewrite_in_basis(table: CosetTable, basis: SchreierBasis, lam: Word) -> Word:
    """Rewrite a subgroup element as a word over the Schreier basis.

    Scans left to right, tracking the coset of the remaining suffix and
    emitting one basis letter per input letter (none for tree edges).  The
    output evaluates back to the input exactly, and the map is a homomorphism
    up to free reduction.
    """
    if table.coset_of(lam) != 1:
        raise ValueError("word is not in the subgroup (coset != 1)")
    out: list[int] = []
    c = 1
    for l in lam.letters:
        nc = table.act_letter(-l, c)
        if l > 0:
            idx = basis.pair_index.get((l, nc))
            if idx is not None:
                out.append(idx)
        else:
            idx = basis.pair_index.get((-l, c))
            if idx is not None:
                out.append(-idx)
        c = nc
    if c != 1:
        raise AssertionError("rewriting scan did not return to coset 1")
    return Word(basis.free_group(), reduce_letters(out))


def eval_in_ambient(basis: SchreierBasis, w: Word) -> Word:
    """Substitute basis words for basis letters; inverse of rewriting."""
    if w.ctx != basis.free_group():
        raise ValueError("word is not over the basis free group")
    out: list[int] = []
    for l in w.letters:
        g = basis.generators[abs(l) - 1]
        out.extend(g.letters if l > 0 else g.inverse().letters)
    return Word(basis.ambient, reduce_letters(out))
