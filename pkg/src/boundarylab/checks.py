"""Verification engines: minimality coverage, measure contraction with
replayable certificates, fiber decomposition, and the exhaustive finite-case
oracles.

Verdicts are three-valued.  PASS comes with replayable evidence, FAIL with a
concrete counterexample, and INCONCLUSIVE with the exhausted budgets: a failed
search at finite radius is never reported as a disproof.  Only finite spaces,
where orbits can be enumerated outright, admit exhaustive FAIL proofs.

All randomness is drawn from per-sample generators seeded as
``master_seed XOR sample_index``, so runs replay exactly and samples may be
evaluated in any order (results are assembled in sample order).
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .cosets import (
    conjugate_subgroup,
    enumerate_cosets,
    eval_in_ambient,
)
from .measures import (
    AtomicMeasure,
    atomic_measure,
    is_fiber_supported,
    measure_to_json,
    point_to_json,
    pushforward_group,
    pushforward_map,
)
from .spaces import (
    BoundaryPoint,
    BoundarySpace,
    EQUAL,
    ExtensionMap,
    FiniteSpace,
    InducedSpace,
    boundary_act,
    boundary_point,
    common_prefix_depth,
    stabilizer_subgroup,
)
from .words import (
    FreeGroup,
    Word,
    alphabet,
    cached_ball,
    letters_to_str,
)

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class CheckReport:
    """Outcome of one verification engine run."""

    check: str
    verdict: str
    parameters: dict
    seed: Optional[int]
    evidence: list
    truncation: dict

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "verdict": self.verdict,
            "parameters": self.parameters,
            "seed": self.seed,
            "evidence": self.evidence,
            "truncation": self.truncation,
        }


# -- concentration bookkeeping --------------------------------------------------

def concentration(nu: AtomicMeasure):
    """(depth, coset) describing how concentrated the measure is.

    depth is the common-prefix length shared by all atoms (EQUAL for a single
    atom), and -1 for an induced measure whose atoms sit in several cosets.
    coset is the shared coset for induced measures, else None.
    """
    coset = None
    if isinstance(nu.space, InducedSpace):
        cosets = {p[0] for p, _ in nu.atoms}
        if len(cosets) > 1:
            return -1, None
        coset = next(iter(cosets))
        pts = [p[1] for p, _ in nu.atoms]
    else:
        pts = [p for p, _ in nu.atoms]
    if len(pts) == 1:
        return EQUAL, coset
    depth = min(common_prefix_depth(pts[0], q) for q in pts[1:])
    return depth, coset


def shared_prefix(nu: AtomicMeasure, upto: int) -> tuple[int, ...]:
    """First ``upto`` letters shared by every atom (callers cap by the depth)."""
    p = nu.atoms[0][0]
    if isinstance(nu.space, InducedSpace):
        p = p[1]
    return p.expand(upto)


# -- contraction certificates ------------------------------------------------------

@dataclass(frozen=True)
class ContractionCertificate:
    """Finite sequence of group elements concentrating a measure.

    Replaying the steps (left push-forward, in order) on the original measure
    must leave every atom in the stated cylinder: all atoms share a prefix of
    length >= achieved_depth, in the stated coset for induced spaces.
    """

    steps: tuple[Word, ...]
    achieved_depth: int
    limit_coset: Optional[int]
    limit_cylinder: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "steps": [s.to_str() for s in self.steps],
            "achieved_depth": self.achieved_depth,
            "limit_coset": self.limit_coset,
            "limit_cylinder": letters_to_str(self.limit_cylinder),
        }


def replay(nu: AtomicMeasure, cert: ContractionCertificate):
    """Re-run the steps and check the certificate's claim.

    Uses nothing but measure push-forward and the space action, so a stored
    certificate can be audited from serialized data alone.
    """
    cur = nu
    for step in cert.steps:
        cur = pushforward_group(step, cur)
    depth, coset = concentration(cur)
    prefix = shared_prefix(cur, cert.achieved_depth)
    ok = (
        depth >= cert.achieved_depth
        and coset == cert.limit_coset
        and prefix == cert.limit_cylinder
    )
    detail = {
        "claimed_depth": cert.achieved_depth,
        "replayed_depth": ("EQUAL" if depth == EQUAL else depth),
        "claimed_coset": cert.limit_coset,
        "replayed_coset": coset,
        "match": ok,
    }
    return ok, detail, cur


def _certificate_from_final(steps, final: AtomicMeasure, target: int) -> ContractionCertificate:
    depth, coset = concentration(final)
    achieved = int(min(depth, target))
    return ContractionCertificate(
        tuple(steps), achieved, coset, shared_prefix(final, achieved)
    )


# -- contraction strategies ---------------------------------------------------------

def _points_depth(pts: Sequence[BoundaryPoint]):
    if len(pts) == 1:
        return EQUAL
    return min(common_prefix_depth(pts[0], q) for q in pts[1:])


def _axis_power_steps(points, rank: int, target: int, budget: int):
    """Powers of the first generator, preceded by one perturbing element when
    some point sits at the generator's repelling end.  Returns rank-r words.
    """
    ctx = FreeGroup(rank)
    g = Word(ctx, (1,))
    repelling = boundary_point((), (-1,))
    pts = list(points)
    steps: list[Word] = []
    if any(p == repelling for p in pts):
        perturb = None
        for radius in (1, 2, 3):
            for cand in cached_ball(ctx, radius):
                if cand.is_identity:
                    continue
                if all(boundary_act(cand.letters, p) != repelling for p in pts):
                    perturb = cand
                    break
            if perturb is not None:
                break
        if perturb is None:
            return None
        steps.append(perturb)
        pts = [boundary_act(perturb.letters, p) for p in pts]
    while True:
        if _points_depth(pts) >= target:
            return steps
        if len(steps) >= budget:
            return None
        steps.append(g)
        pts = [boundary_act(g.letters, p) for p in pts]


def contract_measure(
    nu: AtomicMeasure,
    target_depth: int,
    budget: int,
    strategy: str = "axis-power",
    seed: int = 0,
    step_radius: int = 2,
) -> Optional[ContractionCertificate]:
    """Search for a certificate concentrating nu to the target cylinder depth.

    Strategies:

    * ``axis-power`` (boundary measures): powers of a single generator, with a
      deterministic perturbation when an atom sits at its repelling end.
    * ``fiber-lift`` (induced measures supported in one fiber): contract
      the fiber measure with axis-power in the fiber free group, then lift
      every step lam to t_i lam t_i^-1, which fixes the coset and replays the
      fiber motion exactly.
    * ``greedy-ball``: repeatedly apply the ball element that most increases
      the concentration depth (shortlex tie-break); may stall.

    Returns None when the budget runs out (inconclusive, never a disproof).
    """
    if isinstance(nu.space, FiniteSpace):
        raise ValueError("finite-space measures use the exhaustive orbit engine")
    if isinstance(nu.space, InducedSpace) and not isinstance(nu.space.fiber, BoundarySpace):
        raise ValueError(
            "contraction on induced spaces needs a boundary fiber; "
            "finite fibers use the exhaustive orbit engine"
        )
    if target_depth < 1:
        raise ValueError("target_depth must be >= 1")
    if budget < 1:
        raise ValueError("budget must be >= 1")

    if strategy == "axis-power":
        return _contract_axis_boundary(nu, target_depth, budget)
    if strategy == "fiber-lift":
        return _contract_fiber_lift(nu, target_depth, budget)
    if strategy == "greedy-ball":
        return _contract_greedy(nu, target_depth, budget, step_radius)
    raise ValueError(f"unknown contraction strategy {strategy!r}")


def _contract_axis_boundary(nu, target, budget):
    space = nu.space
    if not isinstance(space, BoundarySpace):
        raise ValueError("axis-power strategy expects a boundary-space measure")
    pts = [p for p, _ in nu.atoms]
    fsteps = _axis_power_steps(pts, space.rank, target, budget)
    if fsteps is None:
        return None
    if space.subgroup_action is not None:
        _, basis = space.subgroup_action
        steps = [eval_in_ambient(basis, w) for w in fsteps]
    else:
        steps = fsteps
    final = nu
    for s in steps:
        final = pushforward_group(s, final)
    cert = _certificate_from_final(steps, final, target)
    if cert.achieved_depth < target:
        return None
    return cert


def _contract_fiber_lift(nu, target, budget):
    space = nu.space
    if not isinstance(space, InducedSpace):
        raise ValueError("fiber-lift strategy expects an induced-space measure")
    if not isinstance(space.fiber, BoundarySpace):
        raise ValueError("fiber-lift needs a boundary fiber")
    cosets = {p[0] for p, _ in nu.atoms}
    if len(cosets) != 1:
        raise ValueError("fiber-lift needs a fiber-supported measure")
    i = next(iter(cosets))
    fiber_pts = [p[1] for p, _ in nu.atoms]
    fsteps = _axis_power_steps(fiber_pts, space.fiber.rank, target, budget)
    if fsteps is None:
        return None
    t = space.table.rep(i)
    tinv = t.inverse()
    steps = [t * eval_in_ambient(space.basis, w) * tinv for w in fsteps]
    final = nu
    for s in steps:
        final = pushforward_group(s, final)
    cert = _certificate_from_final(steps, final, target)
    if cert.achieved_depth < target or cert.limit_coset != i:
        return None
    return cert


def _contract_greedy(nu, target, budget, step_radius):
    from .measures import acting_ball

    candidates = [w for w in acting_ball(nu.space, step_radius) if not w.is_identity]
    cur = nu
    steps: list[Word] = []
    while True:
        depth, _ = concentration(cur)
        if depth >= target:
            cert = _certificate_from_final(steps, cur, target)
            return cert
        if len(steps) >= budget:
            return None
        best = None
        best_depth = depth
        for cand in candidates:
            trial = pushforward_group(cand, cur)
            d, _ = concentration(trial)
            if d > best_depth:
                best = (cand, trial)
                best_depth = d
        if best is None:
            return None
        steps.append(best[0])
        cur = best[1]


def certificate_element(cert: ContractionCertificate) -> Optional[Word]:
    """The single group element a certificate's replay amounts to.

    Steps are applied first-to-last, so the cumulative element is the product
    of the steps in reverse order.
    """
    if not cert.steps:
        return None
    out = cert.steps[-1]
    for s in reversed(cert.steps[:-1]):
        out = out * s
    return out


def steer_into_cylinder(nu: AtomicMeasure, cylinder: tuple[int, ...]) -> Word:
    """A word carrying every atom of a concentrated boundary measure into the
    given cylinder.

    Requires a boundary-space measure whose atoms already share a prefix of
    length >= 1.  With shared prefix w and target cylinder c, the element
    c.s.w^-1 works once the separator s is chosen so that c.s stays reduced
    and s cannot cancel against any atom tail; s = last letter of w always
    survives the tails, and a second buffer letter handles the one clash with
    the end of c.
    """
    space = nu.space
    if not isinstance(space, BoundarySpace):
        raise ValueError("steering works on boundary-space measures")
    if not cylinder:
        raise ValueError("target cylinder must be nonempty")
    depth, _ = concentration(nu)
    q = 1 if depth == EQUAL else int(depth)
    if q < 1:
        raise ValueError("measure is not concentrated (no shared prefix)")
    w = shared_prefix(nu, q)
    wl = w[-1]
    if wl != -cylinder[-1]:
        seps: tuple[int, ...] = (wl,)
    else:
        x = next(
            l for l in alphabet(FreeGroup(space.rank)) if l not in (wl, -wl)
        )
        seps = (x, wl)
    letters = cylinder + seps + tuple(-v for v in reversed(w))
    from .words import reduce_letters

    return Word(space.free_ctx, reduce_letters(letters))


# -- samplers -------------------------------------------------------------------------

def random_walk_letters(rng: random.Random, rank: int, max_len: int) -> tuple[int, ...]:
    """A reduced word of length <= max_len, drawn letterwise without backtracking."""
    length = rng.randint(0, max_len)
    letters: list[int] = []
    choices = list(alphabet(FreeGroup(rank)))
    for _ in range(length):
        allowed = [l for l in choices if not letters or l != -letters[-1]]
        letters.append(rng.choice(allowed))
    return tuple(letters)


def sample_boundary_point(rng: random.Random, rank: int, walk_len: int = 8) -> BoundaryPoint:
    base = boundary_point((), (1,))
    return boundary_act(random_walk_letters(rng, rank, walk_len), base)


def sample_fiber_measure(
    space: InducedSpace,
    coset: int,
    rng: random.Random,
    max_atoms: int,
    walk_len: int = 8,
    max_denom: int = 64,
) -> AtomicMeasure:
    """Fiber-supported measure: walk-generated atoms, random rational weights."""
    rank = space.fiber.rank
    natoms = rng.randint(1, max_atoms)
    pts: list[BoundaryPoint] = []
    tries = 0
    while len(pts) < natoms and tries < 50 * natoms:
        p = sample_boundary_point(rng, rank, walk_len)
        if p not in pts:
            pts.append(p)
        tries += 1
    nums = [rng.randint(1, max_denom) for _ in pts]
    total = sum(nums)
    return atomic_measure(
        space, [((coset, p), Fraction(num, total)) for p, num in zip(pts, nums)]
    )


def sample_boundary_measure(
    space: BoundarySpace,
    rng: random.Random,
    max_atoms: int,
    walk_len: int = 8,
    max_denom: int = 64,
) -> AtomicMeasure:
    natoms = rng.randint(1, max_atoms)
    pts: list[BoundaryPoint] = []
    tries = 0
    while len(pts) < natoms and tries < 50 * natoms:
        p = sample_boundary_point(rng, space.rank, walk_len)
        if p not in pts:
            pts.append(p)
        tries += 1
    nums = [rng.randint(1, max_denom) for _ in pts]
    total = sum(nums)
    return atomic_measure(space, [(p, Fraction(num, total)) for p, num in zip(pts, nums)])


def sample_spread_measure(
    space: InducedSpace, rng: random.Random, max_atoms: int, walk_len: int = 8
) -> AtomicMeasure:
    """A measure guaranteed to touch at least two cosets (needs index >= 2)."""
    n = space.table.size
    if n < 2:
        raise ValueError("spread measures need at least two cosets")
    natoms = max(2, rng.randint(2, max(2, max_atoms)))
    pts = []
    tries = 0
    while len(pts) < natoms and tries < 50 * natoms:
        coset = rng.randint(1, n)
        p = (coset, sample_boundary_point(rng, space.fiber.rank, walk_len))
        if p not in pts:
            pts.append(p)
        tries += 1
    cosets = {p[0] for p in pts}
    if len(cosets) == 1:
        other = 1 + (pts[0][0] % n)
        pts[-1] = (other, pts[-1][1])
    nums = [rng.randint(1, 64) for _ in pts]
    total = sum(nums)
    return atomic_measure(space, [(p, Fraction(num, total)) for p, num in zip(pts, nums)])


# -- minimality ------------------------------------------------------------------------

def check_minimal_finite(space: FiniteSpace) -> CheckReport:
    """Transitivity of the generator action; FAIL carries an invariant subset."""
    orbit = space.orbit(1)
    if len(orbit) == space.size:
        verdict, evidence = PASS, [{"orbit_size": space.size}]
    else:
        verdict = FAIL
        evidence = [{"invariant_subset": sorted(orbit)}]
    return CheckReport(
        check="minimal-finite",
        verdict=verdict,
        parameters={"size": space.size},
        seed=None,
        evidence=evidence,
        truncation={},
    )


def _coverage_key(space, point, depth):
    if isinstance(space, InducedSpace):
        i, y = point
        return (i, y.expand(depth))
    return point.expand(depth)


def _coverage_targets(space, depth):
    if isinstance(space, InducedSpace):
        if not isinstance(space.fiber, BoundarySpace):
            raise ValueError("symbolic coverage needs a boundary fiber")
        cyls = space.fiber.cylinders(depth)
        return {(i, c) for i in range(1, space.size + 1) for c in cyls}
    return set(space.cylinders(depth))


def _key_str(key) -> str:
    if isinstance(key, tuple) and key and isinstance(key[0], int) and len(key) == 2 and isinstance(key[1], tuple):
        return f"({key[0]}, {letters_to_str(key[1])})"
    return letters_to_str(key)


def check_minimal_symbolic(
    space,
    depth: int,
    radius: int,
    samples: int,
    seed: int,
    ball_cap: int = 200_000,
) -> CheckReport:
    """Orbit density proxy: from seeded start points, the radius-R ball must
    visit every depth-d cylinder (and every coset, for induced spaces).

    Incomplete coverage is INCONCLUSIVE: density cannot be refuted at finite
    radius.
    """
    if depth < 0 or radius < 0 or samples < 1:
        raise ValueError("depth, radius >= 0 and samples >= 1 required")
    from .measures import acting_ball

    targets = _coverage_targets(space, depth)
    ballwords = acting_ball(space, radius, ball_cap)
    evidence = []
    complete = True
    for idx in range(samples):
        rng = random.Random(seed ^ idx)
        if isinstance(space, InducedSpace):
            start = (
                rng.randint(1, space.size),
                sample_boundary_point(rng, space.fiber.rank),
            )
        else:
            start = sample_boundary_point(rng, space.rank)
        hit = set()
        for w in ballwords:
            hit.add(_coverage_key(space, space.act(w, start), depth))
        missing = targets - hit
        if missing:
            complete = False
        evidence.append(
            {
                "start": point_to_json(start),
                "covered": len(hit & targets),
                "total": len(targets),
                "missing": sorted(_key_str(k) for k in missing)[:20],
            }
        )
    return CheckReport(
        check="minimal-symbolic",
        verdict=PASS if complete else INCONCLUSIVE,
        parameters={"depth": depth, "radius": radius, "samples": samples},
        seed=seed,
        evidence=evidence,
        truncation={"ball_radius": radius, "ball_cap": ball_cap},
    )


# -- finite orbit oracle ------------------------------------------------------------

def finite_contractible(space: FiniteSpace, nu: AtomicMeasure) -> CheckReport:
    """Exhaustive orbit of a finite-space measure; PASS iff a Dirac appears.

    Permutations preserve the weight multiset, so only a Dirac measure can
    reach a Dirac; the engine still enumerates the whole orbit rather than
    assume that argument.
    """
    if nu.space != space:
        raise ValueError("measure does not live on the given space")
    letters = alphabet(space.ambient)
    seen = {nu.atoms}
    frontier = [nu.atoms]
    dirac_found = len(nu.atoms) == 1
    while frontier:
        nxt = []
        for atoms in frontier:
            for l in letters:
                image = tuple(
                    sorted(
                        ((space.act_letter(l, p), w) for p, w in atoms),
                        key=lambda kv: kv[0],
                    )
                )
                if image not in seen:
                    seen.add(image)
                    nxt.append(image)
                    if len(image) == 1:
                        dirac_found = True
        frontier = nxt
    orbit_json = [
        [{"point": p, "weight": str(w)} for p, w in atoms] for atoms in sorted(seen)
    ]
    return CheckReport(
        check="finite-contractible",
        verdict=PASS if dirac_found else FAIL,
        parameters={"atoms": len(nu.atoms)},
        seed=None,
        evidence=[{"orbit_size": len(seen), "orbit": orbit_json[:50]}],
        truncation={},
    )


# -- strongly proximal extension check ------------------------------------------------

def _finite_extension_report(phi: ExtensionMap, check_name: str) -> CheckReport:
    """Exhaustive verdict for a finite extension: equivariance, surjectivity,
    then a uniform-measure witness on every multi-point fiber."""
    src, tgt = phi.source, phi.target
    letters = alphabet(src.ambient)
    for y in src.points():
        for l in letters:
            left = phi.apply(src.act_letter(l, y))
            right = tgt.act_letter(l, phi.apply(y))
            if left != right:
                return CheckReport(
                    check=check_name,
                    verdict=FAIL,
                    parameters={"source_size": src.size, "target_size": tgt.size},
                    seed=None,
                    evidence=[
                        {
                            "violation": "equivariance",
                            "letter": letters_to_str((l,)),
                            "point": y,
                            "map_then_act": right,
                            "act_then_map": left,
                        }
                    ],
                    truncation={},
                )
    image = {phi.apply(y) for y in src.points()}
    if image != set(tgt.points()):
        return CheckReport(
            check=check_name,
            verdict=FAIL,
            parameters={"source_size": src.size, "target_size": tgt.size},
            seed=None,
            evidence=[{"violation": "surjectivity", "missed": sorted(set(tgt.points()) - image)}],
            truncation={},
        )
    fibers: dict[int, list[int]] = {}
    for y in src.points():
        fibers.setdefault(phi.apply(y), []).append(y)
    evidence = []
    all_pass = True
    for x in sorted(fibers):
        fib = fibers[x]
        if len(fib) == 1:
            evidence.append({"base_point": x, "fiber": fib, "note": "singleton fiber: every fiber measure is a point mass"})
            continue
        uniform = atomic_measure(
            src, [(y, Fraction(1, len(fib))) for y in fib]
        )
        rep = finite_contractible(src, uniform)
        evidence.append(
            {
                "base_point": x,
                "fiber": fib,
                "witness_measure": measure_to_json(uniform),
                "orbit_verdict": rep.verdict,
                "orbit_size": rep.evidence[0]["orbit_size"],
            }
        )
        if rep.verdict != PASS:
            all_pass = False
    return CheckReport(
        check=check_name,
        verdict=PASS if all_pass else FAIL,
        parameters={"source_size": src.size, "target_size": tgt.size},
        seed=None,
        evidence=evidence,
        truncation={},
    )


def check_sp_extension(
    phi: ExtensionMap,
    max_atoms: int = 5,
    samples: int = 100,
    seed: int = 0,
    target_depth: int = 20,
    budget: int = 64,
    strategy: str = "fiber-lift",
    workers: int = 1,
) -> CheckReport:
    """Contract seeded fiber-supported measures through the extension.

    Induced source: every sampled measure must earn a replay-verified
    certificate (INCONCLUSIVE when a search exhausts its budget).  Finite
    source: exhaustive orbit verdict per fiber.
    """
    if isinstance(phi.source, FiniteSpace):
        return _finite_extension_report(phi, "sp-extension")
    space = phi.source
    n = space.table.size

    def run_sample(idx: int) -> dict:
        rng = random.Random(seed ^ idx)
        coset = 1 + (idx % n)
        nu = sample_fiber_measure(space, coset, rng, max_atoms)
        cert = contract_measure(nu, target_depth, budget, strategy=strategy)
        entry = {
            "sample": idx,
            "coset": coset,
            "measure": measure_to_json(nu),
        }
        if cert is None:
            entry["certificate"] = None
            return entry
        ok, detail, _ = replay(nu, cert)
        entry["certificate"] = cert.to_json()
        entry["replay"] = detail
        entry["replay_ok"] = ok
        return entry

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            evidence = list(pool.map(run_sample, range(samples)))
    else:
        evidence = [run_sample(idx) for idx in range(samples)]

    missing = [e["sample"] for e in evidence if e["certificate"] is None]
    bad_replay = [e["sample"] for e in evidence if e.get("replay_ok") is False]
    if bad_replay:
        verdict = FAIL
    elif missing:
        verdict = INCONCLUSIVE
    else:
        verdict = PASS
    return CheckReport(
        check="sp-extension",
        verdict=verdict,
        parameters={
            "max_atoms": max_atoms,
            "samples": samples,
            "target_depth": target_depth,
            "budget": budget,
            "strategy": strategy,
        },
        seed=seed,
        evidence=evidence,
        truncation={"target_depth": target_depth, "budget_steps": budget},
    )


def check_contraction_lifting(
    phi: ExtensionMap,
    max_atoms: int = 5,
    samples: int = 40,
    seed: int = 0,
    target_depth: int = 20,
    budget: int = 64,
    depth: int = 1,
    radius: int = 4,
    coverage_samples: int = 5,
) -> CheckReport:
    """Two-way consistency between base contraction and fiber contraction.

    Sampled measures whose base push-forward is a point mass must contract;
    measures spread over several cosets carry no obligation and are recorded
    as such.  The source must also pass symbolic minimality coverage, and the
    finite base must be minimal to begin with.
    """
    base_report = check_minimal_finite(phi.target)
    if base_report.verdict != PASS:
        return CheckReport(
            check="contraction-lifting",
            verdict=FAIL,
            parameters={"reason": "base space is not minimal"},
            seed=seed,
            evidence=base_report.evidence,
            truncation={},
        )
    space = phi.source
    minimal_report = check_minimal_symbolic(
        space, depth, radius, coverage_samples, seed
    )
    n = space.table.size
    evidence = []
    obligations_ok = True
    budget_hit = False
    for idx in range(samples):
        rng = random.Random(seed ^ idx)
        fiber_case = (idx % 2 == 0) or n < 2
        if fiber_case:
            nu = sample_fiber_measure(space, 1 + (idx % n), rng, max_atoms)
            down = pushforward_map(phi, nu)
            entry = {
                "sample": idx,
                "kind": "fiber-supported",
                "pushforward_dirac": down.is_dirac,
                "measure": measure_to_json(nu),
            }
            if not down.is_dirac:
                obligations_ok = False
                entry["violation"] = "fiber-supported sample has non-Dirac push-forward"
                evidence.append(entry)
                continue
            cert = contract_measure(nu, target_depth, budget, strategy="fiber-lift")
            if cert is None:
                budget_hit = True
                entry["certificate"] = None
            else:
                ok, detail, _ = replay(nu, cert)
                entry["certificate"] = cert.to_json()
                entry["replay_ok"] = ok
                if not ok:
                    obligations_ok = False
        else:
            nu = sample_spread_measure(space, rng, max_atoms)
            fib = is_fiber_supported(phi, nu)
            entry = {
                "sample": idx,
                "kind": "spread",
                "pushforward_dirac": fib is not None,
                "note": "no contraction obligation",
                "measure": measure_to_json(nu),
            }
            if fib is not None:
                obligations_ok = False
                entry["violation"] = "spread sample unexpectedly fiber-supported"
        evidence.append(entry)
    if not obligations_ok:
        verdict = FAIL
    elif budget_hit or minimal_report.verdict != PASS:
        verdict = INCONCLUSIVE
    else:
        verdict = PASS
    return CheckReport(
        check="contraction-lifting",
        verdict=verdict,
        parameters={
            "max_atoms": max_atoms,
            "samples": samples,
            "target_depth": target_depth,
            "budget": budget,
            "coverage": minimal_report.verdict,
        },
        seed=seed,
        evidence=evidence,
        truncation={"target_depth": target_depth, "budget_steps": budget,
                    "coverage_radius": radius},
    )


# -- fiber decomposition ---------------------------------------------------------------

def _tables_agree(t1, t2) -> bool:
    return (
        t1.size == t2.size
        and t1.fwd == t2.fwd
        and t1.inv == t2.inv
        and tuple(t.letters for t in t1.transversal)
        == tuple(t.letters for t in t2.transversal)
    )


def decompose_fibers(
    phi: ExtensionMap,
    radius: int = 3,
    depth: int = 1,
    samples: int = 3,
    seed: int = 0,
) -> CheckReport:
    """Fiber partition of an induced extension with stabilizer bookkeeping.

    For each base point: the point stabilizer (from orbit Schreier
    generators) must match the conjugated subgroup's coset table exactly;
    translation by t_j t_i^-1 must carry fiber i to fiber j; stabilizer
    elements must fix the fiber setwise; and ball words of the conjugated
    subgroup must cover the depth-d fiber cylinders from sampled starts.
    """
    if not isinstance(phi.source, InducedSpace):
        raise ValueError("fiber decomposition expects an induced source")
    base = phi.target
    if not base.is_transitive():
        raise ValueError("base space is not minimal")
    space = phi.source
    table = space.table
    sub = table.subgroup
    n = table.size
    rank = space.fiber.rank
    fiber_ctx = FreeGroup(rank)
    cyls = set(space.fiber.cylinders(depth))
    evidence = []
    all_ok = True
    coverage_ok = True
    for i in range(1, n + 1):
        t_i = table.rep(i)
        stab = stabilizer_subgroup(base, i)
        stab_table = enumerate_cosets(stab, max_cosets=4 * n + 4)
        conj = conjugate_subgroup(sub, t_i)
        conj_table = enumerate_cosets(conj, max_cosets=4 * n + 4)
        tables_match = _tables_agree(stab_table, conj_table)
        index_ok = stab_table.size == n

        rng = random.Random(seed ^ i)
        transport_ok = True
        for j in range(1, n + 1):
            mover = table.rep(j) * t_i.inverse()
            for _ in range(samples):
                y = sample_boundary_point(rng, rank)
                if space.act(mover, (i, y))[0] != j:
                    transport_ok = False

        invariance_ok = True
        for w in cached_ball(fiber_ctx, 2):
            if w.is_identity:
                continue
            lam_i = t_i * eval_in_ambient(space.basis, w) * t_i.inverse()
            for _ in range(2):
                y = sample_boundary_point(rng, rank)
                if space.act(lam_i, (i, y))[0] != i:
                    invariance_ok = False

        hit = set()
        movers = [
            t_i * eval_in_ambient(space.basis, w) * t_i.inverse()
            for w in cached_ball(fiber_ctx, radius)
        ]
        for _ in range(samples):
            y = sample_boundary_point(rng, rank)
            for mover in movers:
                j, y2 = space.act(mover, (i, y))
                if j != i:
                    invariance_ok = False
                    continue
                hit.add(y2.expand(depth))
        fiber_covered = cyls <= hit

        entry = {
            "base_point": i,
            "fiber": f"coset {i} x rank-{rank} boundary",
            "stabilizer_generators": [g.to_str() for g in stab.generators],
            "stabilizer_index": stab_table.size,
            "matches_conjugate": tables_match,
            "transport_ok": transport_ok,
            "invariance_ok": invariance_ok,
            "fiber_coverage": f"{len(hit & cyls)}/{len(cyls)}",
        }
        evidence.append(entry)
        if not (tables_match and index_ok and transport_ok and invariance_ok):
            all_ok = False
        if not fiber_covered:
            coverage_ok = False
    if not all_ok:
        verdict = FAIL
    elif not coverage_ok:
        verdict = INCONCLUSIVE
    else:
        verdict = PASS
    return CheckReport(
        check="decompose-fibers",
        verdict=verdict,
        parameters={"fibers": n, "depth": depth, "radius": radius, "samples": samples},
        seed=seed,
        evidence=evidence,
        truncation={"ball_radius": radius},
    )


# -- amenable degenerate case -------------------------------------------------------

def amenable_size_check(base: FiniteSpace, candidates: Sequence[dict]) -> CheckReport:
    """Finite ambient group: extensions pass exactly when every fiber is a point.

    Each candidate is {"name", "space": FiniteSpace, "projection": tuple};
    the meta-check PASSes iff the exhaustive per-candidate verdicts match the
    all-singleton-fibers prediction (source size == base size).
    """
    from .words import PermutationGroup

    if not isinstance(base.ambient, PermutationGroup):
        raise ValueError("the size dichotomy check is for finite ambient groups")
    evidence = []
    meta_ok = True
    for cand in candidates:
        name = cand["name"]
        space = cand["space"]
        phi = ExtensionMap(space, base, tuple(cand["projection"]))
        rep = _finite_extension_report(phi, "sp-extension")
        expected = PASS if space.size == base.size else FAIL
        entry = {
            "candidate": name,
            "size": space.size,
            "expected": expected,
            "verdict": rep.verdict,
            "detail": rep.evidence,
        }
        evidence.append(entry)
        if rep.verdict != expected:
            meta_ok = False
    return CheckReport(
        check="amenable-size",
        verdict=PASS if meta_ok else FAIL,
        parameters={"base_size": base.size, "candidates": len(candidates)},
        seed=None,
        evidence=evidence,
        truncation={},
    )
