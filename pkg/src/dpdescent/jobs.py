"""Job documents, report serialization and the survey driver.

Jobs and reports are JSON.  A job looks like::

    {"mode": "analyze", "degree": 6, "kind": "blowup",
     "generators": [{"perm": {"E1": "E2", "E2": "E1"}}],
     "options": {"max_order": 12, "out": "report.json"}}

Generators may be ``{"matrix": [[...], ...]}``, a bare matrix, ``{"perm":
{...}}`` mapping line names to line names, or the string ``"swap"`` (product
kind).  Parsing resolves every generator to a validated matrix, so
``parse_job(emit_job(job)) == job``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Sequence

from .classifier import SurfaceReport, classify, degeneracy_quintic, witnesses_in_frame
from .cohomology import SYLOW_LABEL, h1, h1_cyclic, h1_sylow_bound, invariant_lattice
from .errors import FeasibilityError, ValidationError
from .lattice import (
    BLOWUP,
    KINDS,
    PRODUCT,
    PicLattice,
    class_name,
    conic_classes,
    distinguished_classes,
    exceptional_classes,
    root_classes,
    sum_exceptional,
)
from .weyl import (
    MAX_TABLE_ORDER,
    LatticeAut,
    aut_from_class_map,
    aut_from_matrix,
    generate_group,
    simple_reflections,
    subgroups_up_to_conjugacy,
    weyl_group,
    weyl_order,
)

JOB_SCHEMA = "dpdescent.job/1"
REPORT_SCHEMA = "dpdescent.report/1"
MODES = ("analyze", "survey", "lines", "h1", "degeneracy")

Mat = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Job:
    mode: str
    degree: int | None = None
    kind: str = BLOWUP
    generators: tuple[Mat, ...] = ()
    max_order: int | None = None
    out: str | None = None
    q0: Mat | None = None
    q1: Mat | None = None

    @property
    def lattice(self) -> PicLattice:
        return PicLattice(self.degree, self.kind)


# -- parsing -------------------------------------------------------------------------

def _int(value, path: str, lo: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"expected an integer, got {value!r}", path)
    if lo is not None and value < lo:
        raise ValidationError(f"must be >= {lo}, got {value}", path)
    return value


def _matrix(value, path: str) -> Mat:
    if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
        raise ValidationError("expected a list of integer rows", path)
    return tuple(tuple(_int(x, f"{path}[{i}][{j}]") for j, x in enumerate(r)) for i, r in enumerate(value))


def resolve_generator(L: PicLattice, gen, path: str = "generator") -> LatticeAut:
    """Turn one generator description into an element of W, with errors naming ``path``."""
    try:
        if gen == "swap":
            if L.kind != PRODUCT:
                raise ValidationError("'swap' needs the product kind")
            return simple_reflections(L)[0]
        if isinstance(gen, dict):
            keys = set(gen)
            if keys == {"matrix"}:
                return aut_from_matrix(L, _matrix(gen["matrix"], path + ".matrix"))
            if keys == {"perm"}:
                perm = gen["perm"]
                if not isinstance(perm, dict) or not all(isinstance(k, str) and isinstance(v, str) for k, v in perm.items()):
                    raise ValidationError("perm must map line names to line names", path + ".perm")
                return aut_from_class_map(L, perm)
            raise ValidationError(f"generator needs exactly one of 'matrix' or 'perm', got keys {sorted(keys)}")
        if isinstance(gen, list):
            return aut_from_matrix(L, _matrix(gen, path))
        raise ValidationError(f"unrecognised generator {gen!r}")
    except ValidationError as exc:
        if exc.path:
            raise
        raise ValidationError(str(exc), path) from None


def parse_job(text: str) -> Job:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"not valid JSON: {exc}") from None
    return job_from_dict(doc)


def job_from_dict(doc: Any) -> Job:
    if not isinstance(doc, dict):
        raise ValidationError("job must be a JSON object")
    allowed = {"schema", "mode", "degree", "kind", "generators", "options", "q0", "q1"}
    extra = sorted(set(doc) - allowed)
    if extra:
        raise ValidationError(f"unknown field(s) {extra}")
    schema = doc.get("schema", JOB_SCHEMA)
    if schema != JOB_SCHEMA:
        raise ValidationError(f"unsupported schema {schema!r}, expected {JOB_SCHEMA!r}", "schema")
    mode = doc.get("mode")
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {list(MODES)}, got {mode!r}", "mode")
    opts = doc.get("options", {})
    if not isinstance(opts, dict):
        raise ValidationError("options must be an object", "options")
    bad_opts = sorted(set(opts) - {"max_order", "out"})
    if bad_opts:
        raise ValidationError(f"unknown option(s) {bad_opts}", "options")
    max_order = opts.get("max_order")
    if max_order is not None:
        max_order = _int(max_order, "options.max_order", 1)
    out = opts.get("out")
    if out is not None and not isinstance(out, str):
        raise ValidationError("must be a path string", "options.out")

    if mode == "degeneracy":
        if "q0" not in doc or "q1" not in doc:
            raise ValidationError("degeneracy jobs need 'q0' and 'q1'")
        return Job(mode, out=out, q0=_matrix(doc["q0"], "q0"), q1=_matrix(doc["q1"], "q1"))

    if "degree" not in doc:
        raise ValidationError("missing required field", "degree")
    degree = _int(doc["degree"], "degree")
    kind = doc.get("kind", BLOWUP)
    if kind not in KINDS:
        raise ValidationError(f"kind must be one of {list(KINDS)}, got {kind!r}", "kind")
    try:
        L = PicLattice(degree, kind)
    except ValidationError as exc:
        raise ValidationError(str(exc), "degree") from None
    gens_doc = doc.get("generators", [])
    if not isinstance(gens_doc, list):
        raise ValidationError("generators must be a list", "generators")
    if mode in ("survey", "lines") and gens_doc:
        raise ValidationError(f"{mode} jobs take no generators", "generators")
    gens = tuple(resolve_generator(L, g, f"generators[{i}]").matrix for i, g in enumerate(gens_doc))
    return Job(mode, degree, kind, gens, max_order, out)


def job_to_dict(job: Job) -> dict:
    doc: dict[str, Any] = {"schema": JOB_SCHEMA, "mode": job.mode}
    if job.mode == "degeneracy":
        doc["q0"] = [list(r) for r in job.q0]
        doc["q1"] = [list(r) for r in job.q1]
    else:
        doc["degree"] = job.degree
        doc["kind"] = job.kind
        doc["generators"] = [{"matrix": [list(r) for r in g]} for g in job.generators]
    opts = {}
    if job.max_order is not None:
        opts["max_order"] = job.max_order
    if job.out is not None:
        opts["out"] = job.out
    if opts:
        doc["options"] = opts
    return doc


def emit_job(job: Job) -> str:
    return dumps(job_to_dict(job))


# -- reports -------------------------------------------------------------------------------

def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def emit_report(report) -> str:
    """Serialise a report, a survey table (list of reports) or a prepared document."""
    if isinstance(report, SurfaceReport):
        doc = {"schema": REPORT_SCHEMA, "mode": "analyze", "report": report.to_dict()}
    elif isinstance(report, (list, tuple)):
        doc = survey_document(report)
    elif isinstance(report, dict):
        doc = dict(report)
        doc.setdefault("schema", REPORT_SCHEMA)
    else:
        raise ValidationError(f"cannot serialise {type(report).__name__}")
    return dumps(doc)


def survey_document(rows: Sequence[SurfaceReport], degree=None, kind=None, max_order=None) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "mode": "survey",
        "degree": degree,
        "kind": kind,
        "max_order": max_order,
        "row_count": len(rows),
        "rows": [r.to_dict() for r in rows],
    }


def run_survey(degree: int, kind: str = BLOWUP, max_order: int | None = None) -> list[SurfaceReport]:
    """One report per conjugacy class of subgroups of W, ordered by (order, element set)."""
    L = PicLattice(degree, kind)
    if weyl_order(L) > MAX_TABLE_ORDER:
        raise FeasibilityError(f"survey infeasible at this degree: |W| = {weyl_order(L)}")
    W = weyl_group(L)
    subs = subgroups_up_to_conjugacy(W, max_order)
    return [classify(degree, kind, G) for G in subs]


def _gamma(job: Job):
    L = job.lattice
    gens = [aut_from_matrix(L, g) for g in job.generators]
    return generate_group(gens, lattice=L)


def analyze_document(job: Job) -> dict:
    gamma = _gamma(job)
    report = classify(job.degree, job.kind, gamma)
    L = gamma.lattice
    back = report.conjugator.inverse() if report.conjugator is not None else None
    basis, _ = invariant_lattice(gamma)
    return {
        "schema": REPORT_SCHEMA,
        "mode": "analyze",
        "report": report.to_dict(),
        "input_frame": {
            "order": gamma.order,
            "closure_enlarged": gamma.closure_enlarged,
            "invariant_basis": [class_name(L, c) for c in basis],
            "witnesses": witnesses_in_frame(report, back),
        },
    }


def lines_document(job: Job) -> dict:
    L = job.lattice
    lines = exceptional_classes(L)
    return {
        "schema": REPORT_SCHEMA,
        "mode": "lines",
        "degree": job.degree,
        "kind": job.kind,
        "exceptional_count": len(lines),
        "exceptional_classes": [class_name(L, c) for c in lines],
        "sum_exceptional": class_name(L, sum_exceptional(L)),
        "conic_count": len(conic_classes(L)),
        "root_count": len(root_classes(L)),
        "distinguished_count": len(distinguished_classes(L)),
    }


def h1_document(job: Job) -> dict:
    gamma = _gamma(job)
    L = gamma.lattice
    basis, rho = invariant_lattice(gamma)
    try:
        group, exact, method = h1(gamma), True, "crossed homomorphisms"
    except FeasibilityError:
        group, exact, method = h1_sylow_bound(gamma), False, SYLOW_LABEL
    doc = {
        "schema": REPORT_SCHEMA,
        "mode": "h1",
        "degree": job.degree,
        "kind": job.kind,
        "order": gamma.order,
        "rho": rho,
        "invariant_basis": [class_name(L, c) for c in basis],
        "h1": {"invariant_factors": list(group.invariant_factors), "exact": exact, "method": method},
    }
    if len(job.generators) == 1:
        doc["h1_cyclic"] = list(h1_cyclic(gamma.generators[0]).invariant_factors)
    return doc


def run_job(job: Job) -> dict:
    if job.mode == "analyze":
        return analyze_document(job)
    if job.mode == "survey":
        rows = run_survey(job.degree, job.kind, job.max_order)
        return survey_document(rows, job.degree, job.kind, job.max_order)
    if job.mode == "lines":
        return lines_document(job)
    if job.mode == "h1":
        return h1_document(job)
    if job.mode == "degeneracy":
        res = degeneracy_quintic(job.q0, job.q1)
        return {"schema": REPORT_SCHEMA, "mode": "degeneracy", **res}
    raise ValidationError(f"unknown mode {job.mode!r}", "mode")
