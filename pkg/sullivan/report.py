"""
sullivan.report – tables and stable text reports for the CLI.

Tables are pandas DataFrames (generators per degree × stage, cohomology
dimensions); text reports are line oriented and deterministic so they can
be compared against golden files.
"""

from __future__ import annotations
from typing import List, Sequence

import pandas as pd

from sullivan.bigraded import BigradedModel, VerifyReport
from sullivan.presentations import AbelianInvariants
from sullivan.selfeq import ChainMapReport, ESharpReport


# -------------------------------------------------- #
def generator_table(model: BigradedModel) -> pd.DataFrame:
    """Number of W generators, rows = degree, columns = stage."""
    rows = [{"degree": g.degree, "stage": g.stage} for g in model.w_generators()]
    if not rows:
        return pd.DataFrame()
    df = pd.DataFrame(rows)
    table = pd.crosstab(df["degree"], df["stage"])
    table["total"] = table.sum(axis=1)
    return table


def cohomology_table(model: BigradedModel, report: VerifyReport) -> pd.DataFrame:
    expected = [model.spec.count(k) + (1 if k == 0 else 0) for k in range(len(report.h_dims))]
    return pd.DataFrame({"degree": range(len(report.h_dims)),
                         "computed": list(report.h_dims),
                         "expected": expected}).set_index("degree")


# -------------------------------------------------- #
def format_build(model: BigradedModel, report: VerifyReport) -> str:
    lines = [f"model {model.spec.name} cap={model.cap} generators={len(model.w_generators())} "
             f"stages={model.top_stage + 1}"]
    for deg, n in model.degree_counts().items():
        lines.append(f"  degree {deg:>2}: {n}")
    lines.append("H dims: " + ",".join(str(h) for h in report.h_dims))
    lines.extend(format_verify(report))
    return "\n".join(lines)


def format_verify(report: VerifyReport) -> List[str]:
    lines = [f"verify: {'PASS' if report.passed else 'FAIL'}"]
    for v in report.violations:
        where = f" degree {v.degree}" if v.degree is not None else ""
        lines.append(f"  [{v.check}]{where}: {v.detail}")
    if report.unverifiable:
        lines.append(f"  unverifiable above the cap: {len(report.unverifiable)} generator(s)")
    return lines


def format_selfeq(chain: ChainMapReport, reports: Sequence[ESharpReport], inverse_ok: bool | None) -> str:
    lines = [f"chain map: {'PASS' if chain.passed else 'FAIL'}"
             + (f" (first failure {chain.first_failure})" if chain.first_failure else "")]
    members = [r.m for r in reports if r.is_member]
    lines.append(f"member for m in: {members[0]}..{members[-1]}" if members else "member for m in: none")
    if reports:
        lines.append(f"linear part identity up to degree {reports[-1].linear_part_identity_up_to}")
        for c in reports[-1].moved_classes:
            lines.append(f"moved class degree {c.degree}: {c.source} -> {c.image}")
    if inverse_ok is not None:
        lines.append(f"inverse: {'PASS' if inverse_ok else 'FAIL'}")
    return "\n".join(lines)


def format_invariants(name: str, inv: AbelianInvariants) -> str:
    torsion = ",".join(str(t) for t in inv.torsion) or "-"
    return f"{name}: rank={inv.free_rank} torsion={torsion} ({inv.format()})"
