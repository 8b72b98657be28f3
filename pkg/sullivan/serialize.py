"""
sullivan.serialize – JSON forms of models, morphisms and reports.

Rationals are written as "p/q" strings (``str(Fraction)``), terms in the
canonical (word length, monomial) order, so writing a model that was just
read back is byte-identical.  Files are replaced atomically.

Model JSON
----------
{
  "cap": 12,
  "spec_name": "wedge-s2-s3-s3",
  "spec": [{"name": "a2", "degree": 2}, ...],
  "skipped": [],
  "generators": [
    {"name": "w1_3_0", "degree": 3, "stage": 1,
     "diff": [{"coef": "1", "mono": [["a2", 2]]}]},
    ...
  ]
}
"""

from __future__ import annotations
import json, os, tempfile
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List

from sullivan.algebra import AlgebraContext, Generator, Monomial, Polynomial
from sullivan.bigraded import BigradedModel, CohomologySpec, from_cdga
from sullivan.cdga import CdgaModel
from sullivan.errors import ModelError
from sullivan.selfeq import CdgaMorphism


# -------------------------------------------------- #
# polynomials
# -------------------------------------------------- #
def poly_to_json(ctx: AlgebraContext, p: Polynomial) -> List[dict]:
    return [
        {"coef": str(p.coefficient(m)),
         "mono": [[ctx.generators[g].name, e] for g, e in m]}
        for m in sorted(p.monomials(), key=ctx.term_key)
    ]


def poly_from_json(ctx: AlgebraContext, terms: List[dict]) -> Polynomial:
    out: Dict[Monomial, Fraction] = {}
    for t in terms:
        try:
            coef = Fraction(t["coef"])
            factors = [(ctx.generator(name).id, int(e)) for name, e in t["mono"]]
        except (KeyError, TypeError, ValueError) as e:
            raise ModelError(f"malformed term {t!r}") from e
        norm = ctx.normalize(factors)
        if norm is None:
            continue
        sign, mono = norm
        out[mono] = out.get(mono, 0) + sign * coef
    return Polynomial(out)


# -------------------------------------------------- #
# models
# -------------------------------------------------- #
def model_to_json(model: BigradedModel) -> dict:
    ctx = model.context
    gens = []
    for g in ctx.generators:
        rec: Dict[str, Any] = {"name": g.name, "degree": g.degree, "stage": g.stage,
                               "diff": poly_to_json(ctx, model.cdga.d_of(g.id))}
        if g.circle:
            rec["circle"] = True
        gens.append(rec)
    return {
        "cap": model.cap,
        "spec_name": model.spec.name,
        "spec": model.spec.to_json(),
        "skipped": list(model.skipped),
        "generators": gens,
    }


def model_from_json(obj: dict) -> BigradedModel:
    try:
        cap = int(obj["cap"])
        spec = CohomologySpec.from_json(obj["spec"], name=obj.get("spec_name", "custom"))
        records = obj["generators"]
        ctx = AlgebraContext([Generator(i, r["name"], int(r["degree"]), int(r.get("stage", 0)),
                                        bool(r.get("circle", False)))
                              for i, r in enumerate(records)], cap)
    except (KeyError, TypeError, ValueError) as e:
        raise ModelError(f"malformed model JSON: {e}") from e
    diff = {i: poly_from_json(ctx, r.get("diff", [])) for i, r in enumerate(records)}
    return from_cdga(CdgaModel(ctx, diff), spec, obj.get("skipped", ()))


# -------------------------------------------------- #
# morphisms
# -------------------------------------------------- #
def morphism_to_json(phi: CdgaMorphism) -> dict:
    ctx = phi.model.context
    return {
        "cap": phi.model.cap,
        "images": [{"name": ctx.generators[i].name, "image": poly_to_json(ctx, p)}
                   for i, p in sorted(phi.images.items())],
    }


def morphism_from_json(model: CdgaModel, obj: dict) -> CdgaMorphism:
    ctx = model.context
    try:
        return CdgaMorphism(model, {r["name"]: poly_from_json(ctx, r["image"]) for r in obj["images"]})
    except (KeyError, TypeError) as e:
        raise ModelError(f"malformed morphism JSON: {e}") from e


# -------------------------------------------------- #
# reports and files
# -------------------------------------------------- #
def _default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, Path):
        return str(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def report_to_json(report) -> dict:
    """Any report dataclass (properties such as ``passed`` included when present)."""
    if not is_dataclass(report):
        raise TypeError(f"{type(report).__name__} is not a report")
    data = asdict(report)
    if hasattr(report, "passed") and "passed" not in data:
        data["passed"] = report.passed
    return data


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False, default=_default) + "\n"


def save_json(obj: Any, path: str | Path) -> Path:
    """Atomically write JSON (temp file in the target directory + replace)."""
    path = Path(path)
    text = dumps(obj)
    with tempfile.NamedTemporaryFile(mode="w", encoding="utf-8", delete=False,
                                     dir=path.parent) as tmp:
        tmp.write(text)
        tmp_path = tmp.name
    os.replace(tmp_path, path)
    return path


def load_json(path: str | Path) -> Any:
    with Path(path).open("r", encoding="utf-8") as fh:
        return json.load(fh)
