"""Command line front end wiring validation, verdicts, construction, grafting.

Every subcommand parses JSON documents, runs the library pipeline, and
prints a report of the stages it ran and the artifacts it produced.
Reports embed their inputs and a digest of them, so a saved bundle can be
re-checked (``verify``) or re-executed (``replay``) later without the
original files.  Exit codes: 0 when the answer is positive (valid,
realizable, feasible, certified, verified), 1 when an obstruction or
infeasibility was established, 2 when the question remains open, and 3
for malformed input.

Identical inputs and flags produce byte-identical reports except for the
``timing`` field, which the text format omits entirely.
"""

from __future__ import annotations

import hashlib
import json
import sys
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import metadata
from typing import Mapping, Optional, Sequence

import click

from .angles import (
    AngleOrder,
    NotPairwiseCoherent,
    SignMatrix,
    angle_feasible,
    angle_order_holds,
    necessary_filter,
)
from .angles import Infeasible as AngleInfeasible
from .coherence import (
    Infeasible,
    Separation,
    StarWitness,
    check_parallel_realizable,
    check_star,
    coherently_orientable,
    infeasible_certificate_holds,
    pair_coherent,
    pairwise_coherent,
    star_witness_holds,
)
from .curves import (
    ComplementComponent,
    ConfigError,
    CurveConfiguration,
    config_from_doc,
    config_to_doc,
    separates,
)
from .curves import validate as validate_config
from .extension import (
    Obstruction,
    SurgeryError,
    SurgeryStep,
    extend_pair,
    replay_steps,
)
from .flatsurf import (
    DEFAULT_TRACE_BUDGET,
    CylinderCert,
    FlatError,
    FlatSurface,
    Periodic,
    SaddlePath,
    cone_orders,
    decompose_direction,
    multigraft,
    require_valid_surface,
    validate_surface,
    verify_cylinder_cert,
)
from .flatsurf import genus as surface_genus
from .origami import (
    HORIZONTAL,
    VERTICAL,
    Origami,
    check_origami,
    cylinder_decomposition,
    origami_from_doc,
    origami_to_doc,
    thurston_veech,
    to_flat_surface,
)

try:
    _VERSION = metadata.version("multicyl")
except metadata.PackageNotFoundError:  # running from a source tree
    _VERSION = "0.0.0"

_TOOL = f"multicyl {_VERSION}"

MODES = ("parallel", "directional", "one-parallel", "any")


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def _canonical(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def digest_inputs(inputs: Mapping) -> str:
    return "sha256:" + hashlib.sha256(_canonical(inputs).encode()).hexdigest()


@dataclass(frozen=True)
class PipelineReport:
    """One subcommand run: verdict, stage notes, artifacts, provenance.

    Stages may reference artifacts by name; construction fails if a
    referenced artifact is missing from the bundle, and the input digest
    is always computed from the embedded inputs, never stored loose.
    """

    kind: str
    verdict: str
    exit_code: int
    inputs: Mapping[str, object]
    stages: tuple[Mapping, ...]
    artifacts: Mapping[str, object]
    mode: Optional[str] = None
    tool: str = _TOOL
    timing: float = 0.0

    def __post_init__(self) -> None:
        have = set(self.artifacts)
        for stage in self.stages:
            for name in stage.get("artifacts", ()):
                if name not in have:
                    raise RuntimeError(
                        f"stage {stage.get('stage')!r} references missing artifact {name!r}"
                    )

    @property
    def input_digest(self) -> str:
        return digest_inputs(self.inputs)

    def to_doc(self) -> dict:
        return {
            "kind": self.kind,
            "mode": self.mode,
            "verdict": self.verdict,
            "exit": self.exit_code,
            "tool": self.tool,
            "timing": round(self.timing, 6),
            "input_digest": self.input_digest,
            "inputs": dict(self.inputs),
            "stages": [dict(s) for s in self.stages],
            "artifacts": dict(self.artifacts),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_doc(), indent=2, sort_keys=True) + "\n"

    def text(self) -> str:
        lines = [self.tool, f"kind: {self.kind}" + (f" ({self.mode})" if self.mode else "")]
        lines.append(f"input: {self.input_digest}")
        for stage in self.stages:
            lines.append(f"  {stage['stage']}: {stage.get('note', '')}")
        if self.artifacts:
            lines.append("artifacts: " + ", ".join(sorted(self.artifacts)))
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"


def _stage(name: str, note: str, **extra) -> dict:
    doc = {"stage": name, "note": note}
    doc.update(extra)
    return doc


# ---------------------------------------------------------------------------
# input parsing helpers
# ---------------------------------------------------------------------------


def parse_orientation(text: str) -> dict[int, int]:
    """Parse ``curve:+1,curve:-1,...`` into an assignment."""
    out: dict[int, int] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        curve, sep, sign = part.partition(":")
        try:
            c = int(curve)
            s = int(sign) if sep else 0
        except ValueError:
            raise ConfigError(
                f"bad orientation entry {part!r} (expected curve:+1 or curve:-1)"
            ) from None
        if s not in (1, -1):
            raise ConfigError(f"orientation for curve {c} must be +1 or -1")
        if c in out:
            raise ConfigError(f"curve {c} oriented twice")
        out[c] = s
    if not out:
        raise ConfigError("empty orientation assignment")
    return out


def _valid_config(doc: Mapping) -> CurveConfiguration:
    config = config_from_doc(doc)
    report = validate_config(config)
    if not report.ok:
        raise ConfigError(f"invalid configuration: {report}")
    return config


def _two_families(config: CurveConfiguration) -> tuple[str, str]:
    fams = sorted(config.families)
    if len(fams) != 2:
        raise ConfigError(f"expected exactly two families, found {fams}")
    return fams[0], fams[1]


def _check_orientation_doc(config: CurveConfiguration, orientation: Mapping[int, int]) -> None:
    for c in config.curves:
        if orientation.get(c.id) not in (1, -1):
            raise ConfigError(f"orientation assignment missing curve {c.id}")


def _orientation_doc(orientation: Mapping[int, int]) -> dict:
    return {str(c): s for c, s in sorted(orientation.items())}


def _orientation_from_doc(doc: Mapping) -> dict[int, int]:
    try:
        return {int(c): int(s) for c, s in doc.items()}
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed orientation document: {exc}") from exc


def _incoherence_witness(config, orientation, family_a, family_b) -> list[int]:
    """Two crossing ids whose oriented signs disagree."""
    pos = neg = None
    for x in config.crossings:
        s = x.sign * orientation[x.curve_a] * orientation[x.curve_b]
        if s > 0 and pos is None:
            pos = x.id
        if s < 0 and neg is None:
            neg = x.id
        if pos is not None and neg is not None:
            return [pos, neg]
    return []


# ---------------------------------------------------------------------------
# shared pipeline pieces
# ---------------------------------------------------------------------------


def _solve_or_check_orientation(config, family_a, family_b, orientation):
    """Returns (orientation, stage) or (None, obstruction artifacts)."""
    if orientation is None:
        solved = coherently_orientable(config, [family_a, family_b])
        if isinstance(solved, Infeasible):
            return None, {
                "kind": "not-coherently-orientable",
                "odd_cycle": list(solved.crossings),
            }
        return dict(solved), _stage(
            "coherence", "orientation solved", artifacts=["orientation"]
        )
    _check_orientation_doc(config, orientation)
    if not pair_coherent(config, orientation, family_a, family_b):
        return None, {
            "kind": "incoherent-orientation",
            "crossings": _incoherence_witness(config, orientation, family_a, family_b),
        }
    return dict(orientation), _stage(
        "coherence", "given orientation is coherent", artifacts=["orientation"]
    )


def _surface_report(s: FlatSurface, budget: int) -> dict:
    dec = decompose_direction(s, (Fraction(1), Fraction(0)), budget=budget)
    if not isinstance(dec, Periodic):
        raise FlatError("horizontal direction did not decompose within budget")
    cylinders = sorted(
        ([str(c.holonomy[0]), str(c.holonomy[1])], str(c.height)) for c in dec.cylinders
    )
    return {
        "genus": surface_genus(s),
        "cone_orders": list(cone_orders(s)),
        "area": str(s.area()),
        "horizontal": {
            "cylinders": [{"holonomy": h, "height": t} for h, t in cylinders],
            "connections": len(dec.connections),
        },
    }


def _curve_cylinders(ext, origami, surface, budget, original_ids) -> dict:
    """Flat cylinder certificate for every curve, keyed by curve id."""
    family_a, family_b = _two_families(ext)
    xid_of = dict(enumerate(origami.squares))
    flat = {}
    for direction, vec, curve_of in (
        (HORIZONTAL, (Fraction(1), Fraction(0)), origami.h_curve),
        (VERTICAL, (Fraction(0), Fraction(1)), origami.v_curve),
    ):
        dec = decompose_direction(surface, vec, budget=budget)
        if not isinstance(dec, Periodic):
            raise FlatError(f"{direction} direction did not decompose within budget")
        for cyl in dec.cylinders:
            curve_id = curve_of[xid_of[cyl.cert.poly]]
            flat[(direction, curve_id)] = cyl
    out = {}
    for direction, fam in ((HORIZONTAL, family_a), (VERTICAL, family_b)):
        counted = {c.core: c.circumference for c in cylinder_decomposition(origami, direction)}
        for curve in ext.curves_of(fam):
            cyl = flat.get((direction, curve.id))
            if cyl is None:
                raise FlatError(f"no {direction} cylinder found for curve {curve.id}")
            circumference = counted[curve.id]
            if abs(cyl.holonomy[0] + cyl.holonomy[1]) != circumference:
                raise FlatError(f"cylinder length mismatch for curve {curve.id}")
            out[str(curve.id)] = {
                "family": fam,
                "direction": direction,
                "original": curve.id in original_ids,
                "circumference": circumference,
                "crossings": len(curve.itinerary),
                "height": str(cyl.height),
                "cert": cyl.cert.to_doc(),
            }
    return out


def _extension_bundle(config, orientation, *, budget) -> tuple[dict, list, Obstruction | None]:
    """Extend, build the square-tiled surface, certify every curve.

    Returns (artifacts, stages, obstruction); on obstruction the other
    two carry whatever was established before the failure.
    """
    artifacts: dict = {"input_orientation": _orientation_doc(orientation)}
    stages: list = []
    res = extend_pair(config, orientation)
    if isinstance(res, Obstruction):
        return artifacts, stages, res
    ext, ext_orientation, steps = res
    artifacts["steps"] = [s.to_doc() for s in steps]
    artifacts["extended_config"] = config_to_doc(ext)
    artifacts["orientation"] = _orientation_doc(ext_orientation)
    stages.append(
        _stage(
            "extension",
            f"{len(steps)} insertions, {len(ext.curves)} curves",
            artifacts=["steps", "extended_config", "orientation", "input_orientation"],
        )
    )
    origami = thurston_veech(ext, ext_orientation)
    if isinstance(origami, type(None).__class__):  # pragma: no cover - unreachable
        raise SurgeryError("extension produced an incoherent pair")
    if not isinstance(origami, Origami):
        raise SurgeryError("extension produced an incoherent pair")
    surface = to_flat_surface(origami)
    artifacts["origami"] = origami_to_doc(origami)
    artifacts["surface"] = surface.to_doc()
    stages.append(
        _stage(
            "origami",
            f"{len(origami.squares)} squares",
            artifacts=["origami", "surface"],
        )
    )
    original_ids = {c.id for c in config.curves}
    artifacts["cylinders"] = _curve_cylinders(
        ext, origami, surface, budget, original_ids
    )
    stages.append(
        _stage(
            "cylinders",
            f"certified {len(artifacts['cylinders'])} curves",
            artifacts=["cylinders"],
        )
    )
    return artifacts, stages, None


# ---------------------------------------------------------------------------
# subcommand builders
# ---------------------------------------------------------------------------


def cmd_validate(doc: Mapping) -> PipelineReport:
    if isinstance(doc, Mapping) and "polygons" in doc:
        s = FlatSurface.from_doc(dict(doc))
        report = validate_surface(s)
        what = "surface"
    else:
        config = config_from_doc(doc)
        report = validate_config(config)
        what = "configuration"
    note = "ok" if report.ok else f"{len(report.violations)} violations"
    return PipelineReport(
        kind="validate",
        verdict="valid" if report.ok else "invalid",
        exit_code=0 if report.ok else 1,
        inputs={"document": dict(doc)},
        stages=(_stage("validate", f"{what}: {note}", artifacts=["report"]),),
        artifacts={"report": report.to_doc()},
    )


def _verdict_parallel(config, doc, family_a, family_b) -> PipelineReport:
    stages = [_stage("validate", "ok")]
    artifacts: dict = {}
    v = check_parallel_realizable(config, family_a, family_b)
    if isinstance(v.obstruction, Infeasible):
        stages.append(_stage("coherence", "odd dependency cycle"))
        stages.append(_stage("separation", "skipped"))
    else:
        solved = coherently_orientable(config, [family_a, family_b])
        artifacts["orientation"] = _orientation_doc(solved)
        stages.append(_stage("coherence", "orientable", artifacts=["orientation"]))
        if isinstance(v.obstruction, Separation):
            stages.append(
                _stage(
                    "separation",
                    f"curve {v.obstruction.curve} separates the complement of "
                    f"family {v.obstruction.cut_family}",
                )
            )
        else:
            stages.append(_stage("separation", "none"))
    artifacts["verdict"] = v.to_doc()
    return PipelineReport(
        kind="verdict",
        mode="parallel",
        verdict="realizable" if v.realizable else "obstructed",
        exit_code=0 if v.realizable else 1,
        inputs={"config": dict(doc)},
        stages=tuple(stages),
        artifacts=artifacts,
    )


def _verdict_directional(config, doc, family_a, family_b, orientation, max_curves) -> PipelineReport:
    stages = [_stage("validate", "ok")]
    artifacts: dict = {}
    solved, outcome = _solve_or_check_orientation(config, family_a, family_b, orientation)
    if solved is None:
        artifacts["obstruction"] = outcome
        stages.append(_stage("coherence", outcome["kind"], artifacts=["obstruction"]))
        return PipelineReport(
            kind="verdict",
            mode="directional",
            verdict="obstructed",
            exit_code=1,
            inputs={"config": dict(doc)},
            stages=tuple(stages),
            artifacts=artifacts,
        )
    artifacts["orientation"] = _orientation_doc(solved)
    stages.append(outcome)
    witness = check_star(config, solved, family_a, family_b, max_curves=max_curves)
    if witness is not None:
        artifacts["obstruction"] = {"kind": "side-imbalance", **witness.to_doc()}
        stages.append(
            _stage(
                "star",
                f"sub-multicurve {list(witness.gamma)} has an unbalanced side",
                artifacts=["obstruction"],
            )
        )
        verdict, code = "obstructed", 1
    else:
        stages.append(_stage("star", "balanced"))
        verdict, code = "realizable", 0
    return PipelineReport(
        kind="verdict",
        mode="directional",
        verdict=verdict,
        exit_code=code,
        inputs={"config": dict(doc)},
        stages=tuple(stages),
        artifacts=artifacts,
    )


def _verdict_one_parallel(config, doc, family_a, family_b, *, t_bound, budget) -> PipelineReport:
    inputs = {"config": dict(doc)}
    stages = [_stage("validate", "ok")]
    artifacts: dict = {}

    separating = [
        c.id for c in config.curves if separates(config, c.id, ())
    ]
    if separating:
        artifacts["obstruction"] = {"kind": "separating-curve", "curves": separating}
        stages.append(
            _stage(
                "separating-curves",
                f"curves {separating} separate the surface and cannot be cylinder cores",
                artifacts=["obstruction"],
            )
        )
        return PipelineReport(
            kind="verdict", mode="one-parallel", verdict="obstructed", exit_code=1,
            inputs=inputs, stages=tuple(stages), artifacts=artifacts,
        )
    stages.append(_stage("separating-curves", "none"))

    solved = coherently_orientable(config, [family_a, family_b])
    if isinstance(solved, Infeasible):
        artifacts["obstruction"] = {
            "kind": "not-coherently-orientable",
            "odd_cycle": list(solved.crossings),
        }
        stages.append(_stage("coherence", "odd dependency cycle", artifacts=["obstruction"]))
        return PipelineReport(
            kind="verdict", mode="one-parallel", verdict="obstructed", exit_code=1,
            inputs=inputs, stages=tuple(stages), artifacts=artifacts,
        )
    stages.append(_stage("coherence", "orientation solved"))

    try:
        ext_artifacts, ext_stages, obstruction = _extension_bundle(
            config, solved, budget=budget
        )
    except SurgeryError as exc:
        stages.append(_stage("candidate", f"extension aborted: {exc}"))
        return PipelineReport(
            kind="verdict", mode="one-parallel", verdict="unknown", exit_code=2,
            inputs=inputs, stages=tuple(stages), artifacts=artifacts,
        )
    if obstruction is not None:
        artifacts["candidate_obstruction"] = obstruction.to_doc()
        stages.append(
            _stage(
                "candidate",
                "filling extension failed for this candidate; "
                "other filling pairs were not searched",
                artifacts=["candidate_obstruction"],
            )
        )
        return PipelineReport(
            kind="verdict", mode="one-parallel", verdict="unknown", exit_code=2,
            inputs=inputs, stages=tuple(stages), artifacts=artifacts,
        )
    artifacts.update(ext_artifacts)
    stages.extend(ext_stages)

    # Coherence of the witness pair with every sub-multicurve of the second
    # family, after per-curve orientation flips: curves of one family never
    # cross each other, so it suffices that each curve has a uniform sign
    # against the first family, which the certified extension guarantees.
    ext = config_from_doc(ext_artifacts["extended_config"])
    ext_orientation = _orientation_from_doc(ext_artifacts["orientation"])
    triple = []
    for curve in config.curves_of(family_b):
        signs = set()
        for x in ext.crossings_of_curve(curve.id):
            signs.add(x.sign * ext_orientation[x.curve_a] * ext_orientation[x.curve_b])
        if len(signs) != 1:
            raise SurgeryError(f"curve {curve.id} has mixed signs after extension")
        triple.append({"curve": curve.id, "sign": signs.pop()})
    artifacts["triple_coherence"] = triple
    stages.append(
        _stage(
            "triple-coherence",
            "every sub-multicurve coherent after per-curve flips",
            artifacts=["triple_coherence"],
        )
    )

    surface = FlatSurface.from_doc(ext_artifacts["surface"])
    grafted = multigraft(surface, [], t_bound=t_bound, budget=budget)
    artifacts["graft_steps"] = [
        {"t": str(s.t), "cert": s.cert.to_doc()} for s in grafted.steps
    ]
    stages.append(
        _stage(
            "graft",
            "all curves already cylinders; no grafts needed",
            artifacts=["graft_steps"],
        )
    )
    return PipelineReport(
        kind="verdict", mode="one-parallel", verdict="certified", exit_code=0,
        inputs=inputs, stages=tuple(stages), artifacts=artifacts,
    )


def _verdict_any(config, doc, family_a, family_b, max_curves) -> PipelineReport:
    stages = [_stage("validate", "ok")]
    artifacts: dict = {}
    coherent = pairwise_coherent(config, family_a, family_b)
    filt = necessary_filter(config)
    if isinstance(filt, NotPairwiseCoherent):
        artifacts["pairwise"] = filt.to_doc()
        stages.append(
            _stage(
                "pairwise",
                f"curves {filt.curve_a} and {filt.curve_b} cross with both signs",
                artifacts=["pairwise"],
            )
        )
        stages.append(_stage("angles", "skipped"))
        verdict, code = "not-realizable", 1
    else:
        artifacts["pairwise"] = {"pairwise_coherent": coherent}
        artifacts["matrix"] = filt.to_doc()
        stages.append(_stage("pairwise", "coherent", artifacts=["pairwise"]))
        outcome = angle_feasible(filt, bound=max_curves if max_curves else 6)
        artifacts["angles"] = outcome.to_doc()
        if isinstance(outcome, AngleInfeasible):
            stages.append(
                _stage(
                    "angles",
                    "no circular angle order satisfies the sign table",
                    artifacts=["matrix", "angles"],
                )
            )
            verdict, code = "not-realizable", 1
        else:
            stages.append(_stage("angles", "feasible", artifacts=["matrix", "angles"]))
            stages.append(
                _stage(
                    "conclusion",
                    "necessary filters passed; realizability is not decided by this mode",
                )
            )
            verdict, code = "no-obstruction", 0
    return PipelineReport(
        kind="verdict",
        mode="any",
        verdict=verdict,
        exit_code=code,
        inputs={"config": dict(doc)},
        stages=tuple(stages),
        artifacts=artifacts,
    )


def cmd_verdict(
    doc: Mapping,
    mode: str,
    *,
    orientation: Optional[Mapping[int, int]] = None,
    max_curves: Optional[int] = None,
    t_bound: int = 64,
    trace_budget: Optional[int] = None,
) -> PipelineReport:
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}")
    if orientation is not None and mode != "directional":
        raise ConfigError(f"--orientation is only meaningful in directional mode, not {mode!r}")
    config = _valid_config(doc)
    family_a, family_b = _two_families(config)
    budget = trace_budget or DEFAULT_TRACE_BUDGET
    if mode == "parallel":
        return _verdict_parallel(config, doc, family_a, family_b)
    if mode == "directional":
        return _verdict_directional(
            config, doc, family_a, family_b, orientation, max_curves or 16
        )
    if mode == "one-parallel":
        return _verdict_one_parallel(
            config, doc, family_a, family_b, t_bound=t_bound, budget=budget
        )
    return _verdict_any(config, doc, family_a, family_b, max_curves)


def cmd_construct(
    doc: Mapping,
    *,
    orientation: Optional[Mapping[int, int]] = None,
    max_curves: Optional[int] = None,
    trace_budget: Optional[int] = None,
) -> PipelineReport:
    inputs = {"config": dict(doc)}
    config = _valid_config(doc)
    family_a, family_b = _two_families(config)
    budget = trace_budget or DEFAULT_TRACE_BUDGET
    stages = [_stage("validate", "ok")]
    artifacts: dict = {}

    solved, outcome = _solve_or_check_orientation(config, family_a, family_b, orientation)
    if solved is None:
        artifacts["obstruction"] = outcome
        stages.append(_stage("coherence", outcome["kind"], artifacts=["obstruction"]))
        return PipelineReport(
            kind="construct", verdict="obstructed", exit_code=1,
            inputs=inputs, stages=tuple(stages), artifacts=artifacts,
        )
    stages.append(outcome)
    witness = check_star(config, solved, family_a, family_b, max_curves=max_curves or 16)
    if witness is not None:
        artifacts["orientation"] = _orientation_doc(solved)
        artifacts["obstruction"] = {"kind": "side-imbalance", **witness.to_doc()}
        stages.append(
            _stage(
                "star",
                f"sub-multicurve {list(witness.gamma)} has an unbalanced side",
                artifacts=["obstruction"],
            )
        )
        return PipelineReport(
            kind="construct", verdict="obstructed", exit_code=1,
            inputs=inputs, stages=tuple(stages), artifacts=artifacts,
        )
    stages.append(_stage("star", "balanced"))

    try:
        ext_artifacts, ext_stages, obstruction = _extension_bundle(config, solved, budget=budget)
    except SurgeryError as exc:
        stages.append(_stage("extension", f"aborted: {exc}"))
        return PipelineReport(
            kind="construct", verdict="aborted", exit_code=1,
            inputs=inputs, stages=tuple(stages), artifacts=artifacts,
        )
    if obstruction is not None:
        artifacts.update(ext_artifacts)
        artifacts["obstruction"] = obstruction.to_doc()
        stages.append(_stage("extension", "obstructed", artifacts=["obstruction"]))
        return PipelineReport(
            kind="construct", verdict="obstructed", exit_code=1,
            inputs=inputs, stages=tuple(stages), artifacts=artifacts,
        )
    artifacts.update(ext_artifacts)
    stages.extend(ext_stages)
    return PipelineReport(
        kind="construct", verdict="realizable", exit_code=0,
        inputs=inputs, stages=tuple(stages), artifacts=artifacts,
    )


def _load_surface(doc: Mapping) -> FlatSurface:
    if "squares" in doc:
        return to_flat_surface(origami_from_doc(doc))
    return FlatSurface.from_doc(dict(doc))


def _load_paths(doc) -> list[SaddlePath]:
    if isinstance(doc, Mapping):
        items = doc.get("paths")
        if items is None:
            raise ConfigError('paths document must be a list or {"paths": [...]}')
    else:
        items = doc
    if not isinstance(items, Sequence) or isinstance(items, (str, bytes)):
        raise ConfigError("paths document must be a list of saddle paths")
    return [SaddlePath.from_doc(p) for p in items]


def cmd_graft(
    surface_doc: Mapping,
    paths_doc,
    *,
    t_bound: int = 64,
    trace_budget: Optional[int] = None,
    side: str = "ccw",
) -> PipelineReport:
    if side not in ("ccw", "cw"):
        raise ConfigError(f"side must be ccw or cw, not {side!r}")
    budget = trace_budget or DEFAULT_TRACE_BUDGET
    surface = _load_surface(surface_doc)
    require_valid_surface(surface)
    paths = _load_paths(paths_doc)
    inputs = {"surface": dict(surface_doc), "paths": paths_doc}
    stages = [
        _stage("validate", f"surface ok, {len(paths)} paths", side=side),
    ]
    artifacts: dict = {
        "before_surface": surface.to_doc(),
        "paths": [p.to_doc() for p in paths],
        "before": _surface_report(surface, budget),
    }
    stages.append(_stage("before", "surface profiled", artifacts=["before_surface", "before"]))
    result = multigraft(surface, paths, t_bound=t_bound, budget=budget)
    artifacts["steps"] = [{"t": str(s.t), "cert": s.cert.to_doc()} for s in result.steps]
    if not result.ok:
        stages.append(_stage("graft", f"inconclusive: {result.detail}", artifacts=["steps"]))
        return PipelineReport(
            kind="graft", verdict="inconclusive", exit_code=2,
            inputs=inputs, stages=tuple(stages), artifacts=artifacts,
        )
    artifacts["after_surface"] = result.surface.to_doc()
    artifacts["after"] = _surface_report(result.surface, budget)
    note = (
        "identity (no paths)"
        if not paths
        else f"{len(result.steps)} grafts, widths {[str(s.t) for s in result.steps]}"
    )
    stages.append(
        _stage("graft", note, artifacts=["steps", "after_surface", "after"])
    )
    return PipelineReport(
        kind="graft", verdict="grafted", exit_code=0,
        inputs=inputs, stages=tuple(stages), artifacts=artifacts,
    )


def _load_matrix(text: str) -> SignMatrix:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from exc
        return SignMatrix.from_doc(doc)
    return SignMatrix.from_tokens(text)


def cmd_angles_check(matrix_text: str, *, max_curves: Optional[int] = None) -> PipelineReport:
    matrix = _load_matrix(matrix_text)
    outcome = angle_feasible(matrix, bound=max_curves if max_curves else 6)
    rows, cols = matrix.shape
    stages = [_stage("parse", f"{rows}x{cols} sign table", artifacts=["matrix"])]
    artifacts = {"matrix": matrix.to_doc(), "result": outcome.to_doc()}
    if isinstance(outcome, AngleInfeasible):
        stages.append(
            _stage(
                "solve",
                f"infeasible after exploring {outcome.explored} partial orders",
                artifacts=["result"],
            )
        )
        verdict, code = "infeasible", 1
    else:
        if not angle_order_holds(matrix, outcome.order):
            raise SurgeryError("solver produced an angle order its checker rejects")
        stages.append(_stage("solve", "feasible; witness re-checked", artifacts=["result"]))
        verdict, code = "feasible", 0
    return PipelineReport(
        kind="angles", verdict=verdict, exit_code=code,
        inputs={"matrix": matrix.to_doc()}, stages=tuple(stages), artifacts=artifacts,
    )


def _bundle_piece(bundle: Mapping, *keys):
    out = []
    for key in keys:
        section, _, name = key.partition(".")
        try:
            out.append(bundle[section][name])
        except (KeyError, TypeError):
            raise ConfigError(f"bundle is missing {key}") from None
    return out


def cmd_replay(bundle: Mapping) -> PipelineReport:
    kind = bundle.get("kind")
    if kind not in ("construct", "verdict"):
        raise ConfigError(f"replay expects a construct bundle, got kind {kind!r}")
    config_doc, steps_doc, in_orient_doc, ext_doc, out_orient_doc = _bundle_piece(
        bundle,
        "inputs.config",
        "artifacts.steps",
        "artifacts.input_orientation",
        "artifacts.extended_config",
        "artifacts.orientation",
    )
    config = _valid_config(config_doc)
    orientation = _orientation_from_doc(in_orient_doc)
    steps = tuple(SurgeryStep.from_doc(d) for d in steps_doc)
    inputs = {"bundle_digest": digest_inputs(dict(bundle)), "config": dict(config_doc)}
    stages = [_stage("load", f"{len(steps)} recorded insertions")]
    try:
        replayed, replayed_orientation = replay_steps(config, orientation, steps)
    except SurgeryError as exc:
        stages.append(_stage("replay", f"diverged: {exc}"))
        return PipelineReport(
            kind="replay", verdict="diverged", exit_code=1,
            inputs=inputs, stages=tuple(stages), artifacts={},
        )
    artifacts = {"replayed_config": config_to_doc(replayed)}
    same_config = artifacts["replayed_config"] == ext_doc
    same_orientation = _orientation_doc(replayed_orientation) == out_orient_doc
    if same_config and same_orientation:
        stages.append(
            _stage("replay", "reproduced the recorded extension", artifacts=["replayed_config"])
        )
        return PipelineReport(
            kind="replay", verdict="match", exit_code=0,
            inputs=inputs, stages=tuple(stages), artifacts=artifacts,
        )
    what = "configuration" if not same_config else "orientation"
    stages.append(_stage("replay", f"replayed {what} differs from the record",
                         artifacts=["replayed_config"]))
    return PipelineReport(
        kind="replay", verdict="diverged", exit_code=1,
        inputs=inputs, stages=tuple(stages), artifacts=artifacts,
    )


# ---------------------------------------------------------------------------
# bundle verification
# ---------------------------------------------------------------------------


def _cyclic_variants(word: Sequence[int]):
    word = tuple(word)
    for w in (word, word[::-1]):
        for i in range(len(w) or 1):
            yield w[i:] + w[:i]


def _cyclic_equal(a: Sequence[int], b: Sequence[int]) -> bool:
    a = tuple(a)
    return len(a) == len(tuple(b)) and a in set(_cyclic_variants(b))


class _Checks:
    def __init__(self) -> None:
        self.results: list[dict] = []

    def add(self, name: str, ok: bool, detail: str = "") -> bool:
        self.results.append({"check": name, "ok": bool(ok), "detail": detail})
        return bool(ok)

    def run(self, name: str, fn) -> bool:
        try:
            ok, detail = fn()
        except (ConfigError, FlatError, SurgeryError, KeyError, TypeError, ValueError) as exc:
            return self.add(name, False, f"error: {exc}")
        return self.add(name, ok, detail)

    @property
    def ok(self) -> bool:
        return all(r["ok"] for r in self.results)


def _verify_common(bundle: Mapping, checks: _Checks) -> None:
    def digest():
        want = bundle.get("input_digest")
        got = digest_inputs(bundle.get("inputs", {}))
        return want == got, f"recomputed {got}"

    checks.run("input-digest", digest)

    def refs():
        have = set(bundle.get("artifacts", {}))
        missing = [
            name
            for stage in bundle.get("stages", ())
            for name in stage.get("artifacts", ())
            if name not in have
        ]
        return not missing, f"missing {missing}" if missing else "all stage references present"

    checks.run("artifact-references", refs)


def _verify_construction(bundle: Mapping, checks: _Checks, budget: int) -> None:
    art = bundle.get("artifacts", {})
    config = _valid_config(bundle["inputs"]["config"])
    checks.add("input-config", True, "validates")
    family_a, family_b = _two_families(config)
    in_orientation = _orientation_from_doc(art["input_orientation"])

    checks.run(
        "orientation-coherent",
        lambda: (pair_coherent(config, in_orientation, family_a, family_b), ""),
    )

    def replay():
        steps = tuple(SurgeryStep.from_doc(d) for d in art["steps"])
        replayed, replayed_orientation = replay_steps(config, in_orientation, steps)
        ok = (
            config_to_doc(replayed) == art["extended_config"]
            and _orientation_doc(replayed_orientation) == art["orientation"]
        )
        return ok, f"replayed {len(steps)} insertions"

    checks.run("extension-replays", replay)

    ext = config_from_doc(art["extended_config"])
    ext_orientation = _orientation_from_doc(art["orientation"])

    def ext_valid():
        report = validate_config(ext)
        filling = all(r.is_disk for r in ext.regions)
        return report.ok and filling, "valid and filling" if filling else "not filling"

    checks.run("extended-config", ext_valid)

    origami = origami_from_doc(art["origami"])

    def origami_structure():
        check_origami(origami)
        if set(origami.squares) != {x.id for x in ext.crossings}:
            return False, "squares are not the crossing ids"
        itineraries = {c.id: c.itinerary for c in ext.curves}
        for cycles, curve_of in (
            (origami.h_cycles(), origami.h_curve),
            (origami.v_cycles(), origami.v_curve),
        ):
            for cyc in cycles:
                curve = curve_of[cyc[0]]
                if not _cyclic_equal(cyc, itineraries[curve]):
                    return False, f"cycle through curve {curve} is not its itinerary"
        return True, "cycles match itineraries as cyclic words"

    checks.run("origami-structure", origami_structure)

    surface = FlatSurface.from_doc(art["surface"])

    def surface_shape():
        report = validate_surface(surface)
        if not report.ok:
            return False, str(report)
        if len(surface.polygons) != len(origami.squares):
            return False, "polygon count differs from square count"
        unit = tuple(
            (Fraction(x), Fraction(y)) for x, y in ((0, 0), (1, 0), (1, 1), (0, 1))
        )
        if any(poly != unit for poly in surface.polygons):
            return False, "polygons are not unit squares"
        if surface.area() != len(origami.squares):
            return False, "area differs from square count"
        if surface_genus(surface) != ext.genus:
            return False, "surface genus differs from configuration genus"
        return True, f"{len(surface.polygons)} unit squares, genus {ext.genus}"

    checks.run("surface-shape", surface_shape)

    def cylinders():
        cyl = art["cylinders"]
        itineraries = {c.id: c.itinerary for c in ext.curves}
        original = {c.id for c in config.curves}
        missing = [c for c in map(str, sorted(itineraries)) if c not in cyl]
        if missing:
            return False, f"curves {missing} lack certificates"
        for key, entry in cyl.items():
            curve = int(key)
            cert = CylinderCert.from_doc(entry["cert"])
            if not verify_cylinder_cert(surface, cert, budget=budget):
                return False, f"certificate for curve {curve} does not retrace"
            axis = (
                cert.holonomy[1] == 0
                if entry["direction"] == HORIZONTAL
                else cert.holonomy[0] == 0
            )
            if not axis:
                return False, f"curve {curve} certificate is not axis-parallel"
            if entry["circumference"] != len(itineraries[curve]):
                return False, f"curve {curve} circumference differs from crossing count"
            if entry["crossings"] != len(itineraries[curve]):
                return False, f"curve {curve} crossing count is wrong"
            if entry["original"] != (curve in original):
                return False, f"curve {curve} original flag is wrong"
        return True, f"retraced {len(cyl)} certificates"

    checks.run("cylinder-certificates", cylinders)


def _verify_verdict(bundle: Mapping, checks: _Checks, budget: int, max_curves: int) -> None:
    mode = bundle.get("mode")
    art = bundle.get("artifacts", {})
    config = _valid_config(bundle["inputs"]["config"])
    family_a, family_b = _two_families(config)
    verdict = bundle.get("verdict")

    if mode == "parallel":
        def recompute():
            v = check_parallel_realizable(config, family_a, family_b)
            return v.to_doc() == art.get("verdict"), "re-derived the verdict"

        checks.run("parallel-verdict", recompute)
        if verdict == "realizable":
            orientation = _orientation_from_doc(art["orientation"])
            checks.run(
                "orientation-coherent",
                lambda: (pair_coherent(config, orientation, family_a, family_b), ""),
            )
    elif mode == "directional":
        if verdict == "realizable":
            orientation = _orientation_from_doc(art["orientation"])
            checks.run(
                "orientation-coherent",
                lambda: (pair_coherent(config, orientation, family_a, family_b), ""),
            )
            checks.run(
                "star-balanced",
                lambda: (
                    check_star(config, orientation, family_a, family_b, max_curves=max_curves)
                    is None,
                    "",
                ),
            )
        else:
            ob = art.get("obstruction", {})
            if ob.get("kind") == "side-imbalance":
                orientation = _orientation_from_doc(art["orientation"])
                witness = StarWitness(
                    tuple(ob["gamma"]),
                    ComplementComponent(tuple(ob["component_regions"]), ()),
                    ob["empty"],
                )
                checks.run(
                    "star-witness",
                    lambda: (
                        star_witness_holds(config, orientation, witness, family_a, family_b),
                        "",
                    ),
                )
            elif ob.get("kind") == "not-coherently-orientable":
                cert = Infeasible(tuple(ob["odd_cycle"]))
                checks.run(
                    "odd-cycle",
                    lambda: (
                        infeasible_certificate_holds(config, [family_a, family_b], cert),
                        "",
                    ),
                )
            elif ob.get("kind") == "incoherent-orientation":
                def mixed():
                    a, b = ob["crossings"]
                    orientation = _orientation_from_doc(art["orientation"]) if "orientation" in art else None
                    if orientation is None:
                        return False, "no orientation recorded"
                    xs = {x.id: x for x in config.crossings}
                    sa = xs[a].sign * orientation[xs[a].curve_a] * orientation[xs[a].curve_b]
                    sb = xs[b].sign * orientation[xs[b].curve_a] * orientation[xs[b].curve_b]
                    return sa * sb < 0, ""

                checks.run("mixed-signs", mixed)
    elif mode == "one-parallel":
        if verdict == "certified":
            _verify_construction(bundle, checks, budget)

            def no_separating():
                bad = [c.id for c in config.curves if separates(config, c.id, ())]
                return not bad, f"separating curves {bad}" if bad else "none separate"

            checks.run("separating-curves", no_separating)

            def triple():
                ext = config_from_doc(art["extended_config"])
                orientation = _orientation_from_doc(art["orientation"])
                for entry in art["triple_coherence"]:
                    curve = entry["curve"]
                    signs = {
                        x.sign * orientation[x.curve_a] * orientation[x.curve_b]
                        for x in ext.crossings_of_curve(curve)
                    }
                    if signs != {entry["sign"]}:
                        return False, f"curve {curve} signs are not uniform"
                return True, "per-curve signs uniform"

            checks.run("triple-coherence", triple)
        elif verdict == "obstructed":
            ob = art.get("obstruction", {})
            if ob.get("kind") == "separating-curve":
                checks.run(
                    "separating-curves",
                    lambda: (
                        all(separates(config, c, ()) for c in ob["curves"]),
                        "",
                    ),
                )
            elif ob.get("kind") == "not-coherently-orientable":
                cert = Infeasible(tuple(ob["odd_cycle"]))
                checks.run(
                    "odd-cycle",
                    lambda: (
                        infeasible_certificate_holds(config, [family_a, family_b], cert),
                        "",
                    ),
                )
        else:
            checks.add("unknown-verdict", True, "no certificate to check")
    elif mode == "any":
        def pairwise():
            want = art.get("pairwise", {}).get("pairwise_coherent")
            if want is None:
                doc = art.get("pairwise", {})
                return doc.get("pairwise_coherent") is False, "recorded incoherence witness"
            return pairwise_coherent(config, family_a, family_b) == want, ""

        checks.run("pairwise", pairwise)
        filt = necessary_filter(config)
        if isinstance(filt, NotPairwiseCoherent):
            def witness():
                doc = art.get("pairwise", {})
                a, b = doc.get("pair", (None, None))
                xa, xb = doc.get("crossings", (None, None))
                xs = {x.id: x for x in config.crossings}
                if xa not in xs or xb not in xs:
                    return False, "witness crossings missing"
                pair_ok = {xs[xa].curve_a, xs[xa].curve_b} == {a, b} == {
                    xs[xb].curve_a,
                    xs[xb].curve_b,
                }
                return pair_ok and xs[xa].sign * xs[xb].sign < 0, ""

            checks.run("pairwise-witness", witness)
        else:
            def matrix_matches():
                return filt.to_doc() == art.get("matrix"), ""

            checks.run("sign-matrix", matrix_matches)
            result = art.get("angles", {})
            if result.get("feasible"):
                def order_holds():
                    order = AngleOrder.from_doc(result["order"])
                    return angle_order_holds(filt, order), ""

                checks.run("angle-order", order_holds)
            else:
                def rerun():
                    outcome = angle_feasible(filt, bound=max(filt.shape))
                    return isinstance(outcome, AngleInfeasible), "re-ran the solver"

                checks.run("angle-infeasible", rerun)


def _verify_graft(bundle: Mapping, checks: _Checks, budget: int) -> None:
    art = bundle.get("artifacts", {})
    before = FlatSurface.from_doc(art["before_surface"])
    checks.run("before-surface", lambda: (validate_surface(before).ok, ""))
    if bundle.get("verdict") != "grafted":
        checks.add("inconclusive-verdict", True, "no grafted surface to check")
        return
    after = FlatSurface.from_doc(art["after_surface"])
    checks.run("after-surface", lambda: (validate_surface(after).ok, ""))

    def certificates():
        for step in art["steps"]:
            cert = CylinderCert.from_doc(step["cert"])
            if not verify_cylinder_cert(after, cert, budget=budget):
                return False, f"certificate at t={step['t']} does not retrace"
        return True, f"retraced {len(art['steps'])} certificates"

    checks.run("graft-certificates", certificates)

    def area_growth():
        paths = [SaddlePath.from_doc(p) for p in art["paths"]]
        if len(paths) != len(art["steps"]):
            return False, "paths and steps differ in length"
        expected = Fraction(0)
        for path, step in zip(paths, art["steps"]):
            t = Fraction(step["t"])
            expected += 2 * t * sum(abs(seg.holonomy[1]) for seg in path.segments)
        got = after.area() - before.area()
        return got == expected, f"area grew by {got}, strips account for {expected}"

    checks.run("area-growth", area_growth)

    checks.run(
        "genus-preserved",
        lambda: (surface_genus(before) == surface_genus(after), ""),
    )

    def reports():
        return (
            _surface_report(before, budget) == art["before"]
            and _surface_report(after, budget) == art["after"],
            "before/after profiles recomputed",
        )

    checks.run("surface-reports", reports)


def _verify_angles(bundle: Mapping, checks: _Checks) -> None:
    art = bundle.get("artifacts", {})
    matrix = SignMatrix.from_doc(art["matrix"])
    result = art.get("result", {})
    if result.get("feasible"):
        def order_holds():
            order = AngleOrder.from_doc(result["order"])
            return angle_order_holds(matrix, order), ""

        checks.run("angle-order", order_holds)
    else:
        def rerun():
            outcome = angle_feasible(matrix, bound=max(matrix.shape))
            return isinstance(outcome, AngleInfeasible), "re-ran the solver"

        checks.run("angle-infeasible", rerun)


def cmd_verify(
    bundle: Mapping,
    *,
    max_curves: Optional[int] = None,
    trace_budget: Optional[int] = None,
) -> PipelineReport:
    if not isinstance(bundle, Mapping) or "kind" not in bundle:
        raise ConfigError("not a report bundle (missing kind)")
    kind = bundle["kind"]
    budget = trace_budget or DEFAULT_TRACE_BUDGET
    checks = _Checks()
    _verify_common(bundle, checks)
    if kind == "validate":
        def revalidate():
            doc = bundle["inputs"]["document"]
            fresh = cmd_validate(doc)
            return (
                fresh.artifacts["report"] == bundle["artifacts"]["report"]
                and fresh.verdict == bundle["verdict"],
                "",
            )

        checks.run("validation-report", revalidate)
    elif kind == "verdict":
        _verify_verdict(bundle, checks, budget, max_curves or 16)
    elif kind == "construct":
        if bundle.get("verdict") == "realizable":
            try:
                _verify_construction(bundle, checks, budget)
            except (ConfigError, FlatError, KeyError, TypeError, ValueError) as exc:
                checks.add("construction", False, f"error: {exc}")
        else:
            checks.add("negative-verdict", True, "no construction to check")
    elif kind == "graft":
        try:
            _verify_graft(bundle, checks, budget)
        except (ConfigError, FlatError, KeyError, TypeError, ValueError) as exc:
            checks.add("graft", False, f"error: {exc}")
    elif kind == "angles":
        try:
            _verify_angles(bundle, checks)
        except (ConfigError, KeyError, TypeError, ValueError) as exc:
            checks.add("angles", False, f"error: {exc}")
    elif kind == "replay":
        checks.add("replay-bundle", True, "replay reports carry no further certificates")
    else:
        raise ConfigError(f"cannot verify bundles of kind {kind!r}")
    ok = checks.ok
    failed = [r["check"] for r in checks.results if not r["ok"]]
    note = "all checks passed" if ok else f"failed: {', '.join(failed)}"
    return PipelineReport(
        kind="verify",
        verdict="verified" if ok else "failed",
        exit_code=0 if ok else 1,
        inputs={"bundle_digest": digest_inputs(dict(bundle)), "bundle_kind": kind},
        stages=(_stage("verify", note, artifacts=["checks"]),),
        artifacts={"checks": checks.results},
    )


# ---------------------------------------------------------------------------
# click wiring
# ---------------------------------------------------------------------------


def _read_text(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None


def _read_json(path: str):
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc


def _execute(fmt: str, build) -> None:
    started = time.perf_counter()
    try:
        report = build()
    except (ConfigError, FlatError, SurgeryError) as exc:
        if fmt == "json":
            click.echo(json.dumps({"error": str(exc), "exit": 3}, sort_keys=True))
        else:
            click.echo(f"error: {exc}", err=True)
        sys.exit(3)
    report = replace(report, timing=time.perf_counter() - started)
    click.echo(report.dumps() if fmt == "json" else report.text(), nl=False)
    sys.exit(report.exit_code)


def _fmt_option(fn):
    return click.option(
        "--format",
        "fmt",
        type=click.Choice(["text", "json"]),
        default="text",
        help="Report format; json includes the full artifact bundle.",
    )(fn)


@click.group(name="multicyl")
@click.version_option(_VERSION, prog_name="multicyl")
def cli() -> None:
    """Decide whether curve systems are realizable as flat cylinders."""


@cli.command(name="validate")
@click.argument("document")
@_fmt_option
def _cmd_validate(document: str, fmt: str) -> None:
    """Check a configuration or surface document and list violations."""
    _execute(fmt, lambda: cmd_validate(_read_json(document)))


@cli.command(name="verdict")
@click.argument("config")
@click.option("--mode", type=click.Choice(list(MODES)), default="parallel",
              help="Which realizability question to answer.")
@click.option("--orientation", default=None, metavar="CURVE:SIGN,...",
              help="Prescribed reference orientations (directional mode).")
@click.option("--max-curves", type=int, default=None,
              help="Bound for exhaustive sub-multicurve and angle searches.")
@click.option("--t-bound", type=int, default=64, show_default=True,
              help="Largest strip width tried when grafting.")
@click.option("--trace-budget", type=int, default=None,
              help="Edge-crossing budget for geodesic tracing.")
@_fmt_option
def _cmd_verdict(config, mode, orientation, max_curves, t_bound, trace_budget, fmt) -> None:
    """Run the realizability checks for MODE on a configuration."""
    def build():
        parsed = parse_orientation(orientation) if orientation else None
        return cmd_verdict(
            _read_json(config),
            mode,
            orientation=parsed,
            max_curves=max_curves,
            t_bound=t_bound,
            trace_budget=trace_budget,
        )

    _execute(fmt, build)


@cli.command(name="construct")
@click.argument("config")
@click.option("--orientation", default=None, metavar="CURVE:SIGN,...",
              help="Prescribed reference orientations.")
@click.option("--max-curves", type=int, default=None,
              help="Bound for the exhaustive side-balance search.")
@click.option("--trace-budget", type=int, default=None,
              help="Edge-crossing budget for certificate tracing.")
@_fmt_option
def _cmd_construct(config, orientation, max_curves, trace_budget, fmt) -> None:
    """Extend to a filling pair and build the certified square-tiled bundle."""
    def build():
        parsed = parse_orientation(orientation) if orientation else None
        return cmd_construct(
            _read_json(config),
            orientation=parsed,
            max_curves=max_curves,
            trace_budget=trace_budget,
        )

    _execute(fmt, build)


@cli.command(name="graft")
@click.argument("surface")
@click.argument("paths")
@click.option("--t-bound", type=int, default=64, show_default=True,
              help="Largest strip width tried per path.")
@click.option("--trace-budget", type=int, default=None,
              help="Edge-crossing budget for geodesic tracing.")
@click.option("--side", type=click.Choice(["ccw", "cw"]), default="ccw", show_default=True,
              help="Rotation sense used to resolve horizontal segments.")
@_fmt_option
def _cmd_graft(surface, paths, t_bound, trace_budget, side, fmt) -> None:
    """Widen a surface along saddle paths until each is a cylinder core."""
    _execute(
        fmt,
        lambda: cmd_graft(
            _read_json(surface),
            _read_json(paths),
            t_bound=t_bound,
            trace_budget=trace_budget,
            side=side,
        ),
    )


@cli.group(name="angles")
def _angles_group() -> None:
    """Angle-order necessary filters."""


@_angles_group.command(name="check")
@click.argument("matrix")
@click.option("--max-curves", type=int, default=None,
              help="Largest family size accepted (default 6).")
@_fmt_option
def _cmd_angles_check(matrix, max_curves, fmt) -> None:
    """Decide whether a crossing-sign table admits a circular angle order.

    MATRIX is a file of +/-/0 token rows, or a JSON document.
    """
    _execute(fmt, lambda: cmd_angles_check(_read_text(matrix), max_curves=max_curves))


@cli.command(name="replay")
@click.argument("bundle")
@_fmt_option
def _cmd_replay(bundle, fmt) -> None:
    """Re-run a bundle's recorded extension steps and compare results."""
    _execute(fmt, lambda: cmd_replay(_read_json(bundle)))


@cli.command(name="verify")
@click.argument("bundle")
@click.option("--max-curves", type=int, default=None,
              help="Bound for exhaustive re-checks.")
@click.option("--trace-budget", type=int, default=None,
              help="Edge-crossing budget for certificate retracing.")
@_fmt_option
def _cmd_verify(bundle, max_curves, trace_budget, fmt) -> None:
    """Re-check a bundle's certificates without re-running construction."""
    _execute(
        fmt,
        lambda: cmd_verify(
            _read_json(bundle), max_curves=max_curves, trace_budget=trace_budget
        ),
    )


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Console entry point; maps usage errors to exit code 3."""
    try:
        cli.main(args=argv, prog_name="multicyl", standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(3)
    except click.exceptions.Abort:
        sys.exit(3)


if __name__ == "__main__":
    main()
