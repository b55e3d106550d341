"""Scenario files: declarative group/subgroup/check suites with one seed.

A scenario is a single JSON document; every word is a string in the package
serialization ("abA" = a.b.a^-1).  All randomness flows from the scenario
seed, so two runs of the same file produce identical evidence; wall-clock
fields are the only nondeterministic part of a report.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from . import __version__
from .checks import (
    CheckReport,
    FAIL,
    amenable_size_check,
    check_contraction_lifting,
    check_minimal_finite,
    check_minimal_symbolic,
    check_sp_extension,
    decompose_fibers,
    replay as replay_steps,
)
from .cosets import CosetTable, SchreierBasis, enumerate_cosets, schreier_basis, subgroup
from .measures import measure_from_json
from .spaces import (
    ExtensionMap,
    FiniteSpace,
    InducedSpace,
    induced_extension,
    induced_space,
)
from .words import FreeGroup, PermutationGroup, Word, letters_to_str, parse_word

REPORT_SCHEMA = "boundarylab-report/1"

KNOWN_CHECKS = (
    "minimal-finite",
    "minimal-symbolic",
    "sp-extension",
    "contraction-lifting",
    "decompose-fibers",
    "amenable-size",
)


class ScenarioError(ValueError):
    """A scenario file failed validation; the message names the field."""


def _require(cond: bool, fieldname: str, message: str) -> None:
    if not cond:
        raise ScenarioError(f"{fieldname}: {message}")


@dataclass
class Scenario:
    name: str
    group: FreeGroup | PermutationGroup
    subgroup_words: tuple[Word, ...]
    depths: dict
    budgets: dict
    seed: int
    checks: list
    extensions: list
    raw: dict = field(repr=False)


def scenario_from_dict(data: dict) -> Scenario:
    _require(isinstance(data, dict), "<root>", "scenario must be a JSON object")
    _require("name" in data, "name", "missing")
    _require("seed" in data, "seed", "missing (no implicit randomness)")
    _require(isinstance(data["seed"], int), "seed", "must be an integer")

    gspec = data.get("group")
    _require(isinstance(gspec, dict), "group", "must be an object")
    kind = gspec.get("kind")
    if kind == "free":
        _require(isinstance(gspec.get("rank"), int) and gspec["rank"] >= 1,
                 "group.rank", "must be an integer >= 1")
        group = FreeGroup(gspec["rank"])
    elif kind == "permutation":
        _require(isinstance(gspec.get("degree"), int), "group.degree", "must be an integer")
        gens = gspec.get("generators")
        _require(isinstance(gens, list) and gens, "group.generators", "must be a nonempty list")
        try:
            group = PermutationGroup(gspec["degree"], tuple(tuple(g) for g in gens))
        except ValueError as exc:
            raise ScenarioError(f"group.generators: {exc}") from exc
    else:
        raise ScenarioError("group.kind: must be 'free' or 'permutation'")

    subs = data.get("subgroup", [])
    _require(isinstance(subs, list), "subgroup", "must be a list of word strings")
    try:
        sub_words = tuple(parse_word(group, s) for s in subs)
    except ValueError as exc:
        raise ScenarioError(f"subgroup: {exc}") from exc
    if isinstance(group, FreeGroup):
        _require(bool(sub_words), "subgroup",
                 "free-group scenarios need a nontrivial subgroup")

    depths = dict(data.get("depths", {}))
    depths.setdefault("cylinder", 1)
    depths.setdefault("target", 20)
    budgets = dict(data.get("budgets", {}))
    budgets.setdefault("ball_radius", 4)
    budgets.setdefault("steps", 64)
    budgets.setdefault("samples", 20)
    budgets.setdefault("max_cosets", 1024)
    for key, val in {**depths, **budgets}.items():
        _require(isinstance(val, int) and val >= 0, f"depths/budgets.{key}",
                 "must be a nonnegative integer")
    _require(budgets["steps"] >= 1, "budgets.steps", "must be >= 1")
    _require(budgets["max_cosets"] >= 1, "budgets.max_cosets", "must be >= 1")

    checks = data.get("checks", [])
    _require(isinstance(checks, list) and checks, "checks", "must be a nonempty list")
    for pos, c in enumerate(checks):
        _require(isinstance(c, dict) and "check" in c, f"checks[{pos}]",
                 "must be an object with a 'check' field")
        _require(c["check"] in KNOWN_CHECKS, f"checks[{pos}].check",
                 f"unknown check {c['check']!r}; known: {', '.join(KNOWN_CHECKS)}")

    extensions = data.get("extensions", [])
    _require(isinstance(extensions, list), "extensions", "must be a list")
    for pos, e in enumerate(extensions):
        for fieldname in ("name", "size", "action", "projection"):
            _require(isinstance(e, dict) and fieldname in e,
                     f"extensions[{pos}].{fieldname}", "missing")

    return Scenario(
        name=data["name"],
        group=group,
        subgroup_words=sub_words,
        depths=depths,
        budgets=budgets,
        seed=data["seed"],
        checks=checks,
        extensions=extensions,
        raw=data,
    )


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return scenario_from_dict(data)


# -- built objects ------------------------------------------------------------------

class ScenarioObjects:
    """Lazily built group/space objects shared by all checks of a run."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self._table: Optional[CosetTable] = None
        self._basis: Optional[SchreierBasis] = None
        self._induced: Optional[InducedSpace] = None
        self._base: Optional[FiniteSpace] = None

    @property
    def table(self) -> CosetTable:
        if self._table is None:
            handle = subgroup(self.scenario.group, self.scenario.subgroup_words)
            self._table = enumerate_cosets(
                handle, max_cosets=self.scenario.budgets["max_cosets"]
            )
        return self._table

    @property
    def base_space(self) -> FiniteSpace:
        if self._base is None:
            self._base = FiniteSpace.from_coset_table(self.table)
        return self._base

    @property
    def basis(self) -> SchreierBasis:
        if self._basis is None:
            self._basis = schreier_basis(self.table)
        return self._basis

    @property
    def induced(self) -> InducedSpace:
        if self._induced is None:
            self._induced = induced_space(self.table, self.basis)
        return self._induced

    @property
    def extension(self) -> ExtensionMap:
        return induced_extension(self.induced)

    def candidate_spaces(self) -> list:
        out = []
        group = self.scenario.group
        for cand in self.scenario.extensions:
            perms = []
            for x in range(1, group.rank + 1):
                key = letters_to_str((x,))
                if key not in cand["action"]:
                    raise ScenarioError(
                        f"extensions[{cand['name']}].action.{key}: missing"
                    )
                perms.append(tuple(cand["action"][key]))
            space = FiniteSpace.make(group, cand["size"], perms)
            out.append(
                {"name": cand["name"], "space": space,
                 "projection": tuple(cand["projection"])}
            )
        return out


# -- check dispatch -------------------------------------------------------------------

def _run_check(objs: ScenarioObjects, spec: dict, workers: int) -> CheckReport:
    scenario = objs.scenario
    name = spec["check"]
    depths, budgets = scenario.depths, scenario.budgets
    seed = spec.get("seed", scenario.seed)
    if name == "minimal-finite":
        return check_minimal_finite(objs.base_space)
    if name == "minimal-symbolic":
        return check_minimal_symbolic(
            objs.induced,
            depth=spec.get("depth", depths["cylinder"]),
            radius=spec.get("radius", budgets["ball_radius"]),
            samples=spec.get("samples", 10),
            seed=seed,
        )
    if name == "sp-extension":
        if isinstance(scenario.group, PermutationGroup) and not scenario.subgroup_words:
            raise ScenarioError("sp-extension on a permutation scenario needs a subgroup")
        return check_sp_extension(
            objs.extension,
            max_atoms=spec.get("max_atoms", 5),
            samples=spec.get("samples", budgets["samples"]),
            seed=seed,
            target_depth=spec.get("target_depth", depths["target"]),
            budget=spec.get("steps", budgets["steps"]),
            strategy=spec.get("strategy", "fiber-lift"),
            workers=workers,
        )
    if name == "contraction-lifting":
        return check_contraction_lifting(
            objs.extension,
            max_atoms=spec.get("max_atoms", 5),
            samples=spec.get("samples", budgets["samples"]),
            seed=seed,
            target_depth=spec.get("target_depth", depths["target"]),
            budget=spec.get("steps", budgets["steps"]),
            depth=spec.get("depth", depths["cylinder"]),
            radius=spec.get("radius", budgets["ball_radius"]),
        )
    if name == "decompose-fibers":
        return decompose_fibers(
            objs.extension,
            radius=spec.get("radius", min(3, budgets["ball_radius"])),
            depth=spec.get("depth", depths["cylinder"]),
            samples=spec.get("samples", 3),
            seed=seed,
        )
    if name == "amenable-size":
        return amenable_size_check(objs.base_space, objs.candidate_spaces())
    raise ScenarioError(f"checks: unknown check {name!r}")


@dataclass
class RunReport:
    scenario: dict
    checks: list
    package_version: str
    schema: str = REPORT_SCHEMA

    def to_json(self, include_timing: bool = True) -> dict:
        checks = []
        for entry in self.checks:
            item = {
                "id": entry["id"],
                **entry["report"].to_json(),
            }
            if include_timing:
                item["wall_clock_s"] = entry["wall_clock_s"]
            checks.append(item)
        return {
            "schema": self.schema,
            "package_version": self.package_version,
            "scenario": self.scenario,
            "checks": checks,
        }

    def has_fail(self) -> bool:
        return any(e["report"].verdict == FAIL for e in self.checks)

    def has_inconclusive(self) -> bool:
        return any(e["report"].verdict == "INCONCLUSIVE" for e in self.checks)


def run_scenario(scenario: Scenario, workers: int = 1) -> RunReport:
    """Execute the declared checks in order; deterministic except wall clocks.

    A check that exhausts an enumeration budget is reported INCONCLUSIVE
    rather than aborting the run.
    """
    from .words import BudgetExceededError

    objs = ScenarioObjects(scenario)
    entries = []
    for pos, spec in enumerate(scenario.checks, start=1):
        started = time.perf_counter()
        try:
            report = _run_check(objs, spec, workers)
        except BudgetExceededError as exc:
            report = CheckReport(
                check=spec["check"],
                verdict="INCONCLUSIVE",
                parameters=dict(spec),
                seed=scenario.seed,
                evidence=[{"budget_exceeded": str(exc)}],
                truncation={"budgets": scenario.budgets},
            )
        elapsed = time.perf_counter() - started
        entries.append(
            {
                "id": f"{pos:02d}-{spec['check']}",
                "report": report,
                "wall_clock_s": round(elapsed, 6),
            }
        )
    return RunReport(scenario=scenario.raw, checks=entries, package_version=__version__)


def report_json_text(report: RunReport, include_timing: bool = True) -> str:
    return json.dumps(
        report.to_json(include_timing=include_timing),
        indent=2,
        sort_keys=True,
    ) + "\n"


# -- certificate replay from a serialized report ---------------------------------------

def replay_certificate(report_data: dict, check_id: str, cert_index: int):
    """Re-verify one stored certificate using only the serialized report.

    Rebuilds the scenario objects from the report's scenario echo, restores
    the measure and certificate, replays the steps, and compares against the
    stored claim.  Returns (verdict, detail).
    """
    scenario = scenario_from_dict(report_data["scenario"])
    objs = ScenarioObjects(scenario)
    target = None
    for entry in report_data["checks"]:
        if entry["id"] == check_id or entry["id"].endswith(check_id):
            target = entry
            break
    if target is None:
        raise ScenarioError(f"check id {check_id!r} not found in report")
    evidence = target.get("evidence", [])
    if not 0 <= cert_index < len(evidence):
        raise ScenarioError(
            f"certificate index {cert_index} out of range (evidence has {len(evidence)})"
        )
    item = evidence[cert_index]
    if "certificate" not in item or item["certificate"] is None:
        raise ScenarioError("selected evidence entry carries no certificate")
    space = objs.induced
    nu = measure_from_json(space, item["measure"])
    cert_data = item["certificate"]
    from .checks import ContractionCertificate
    from .words import letters_from_str

    steps = tuple(parse_word(space.ambient, s) for s in cert_data["steps"])
    cert = ContractionCertificate(
        steps=steps,
        achieved_depth=cert_data["achieved_depth"],
        limit_coset=cert_data["limit_coset"],
        limit_cylinder=letters_from_str(cert_data["limit_cylinder"]),
    )
    ok, detail, _ = replay_steps(nu, cert)
    return ("PASS" if ok else "FAIL"), detail


# -- bundled scenarios -------------------------------------------------------------------

def bundled_scenario_names() -> list[str]:
    root = resources.files("boundarylab") / "scenarios"
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def load_bundled_scenario(name: str) -> Scenario:
    root = resources.files("boundarylab") / "scenarios"
    path = root / f"{name}.json"
    if not path.is_file():
        raise ScenarioError(
            f"no bundled scenario {name!r}; available: {', '.join(bundled_scenario_names())}"
        )
    return scenario_from_dict(json.loads(path.read_text(encoding="utf-8")))
