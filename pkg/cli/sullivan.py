"""
cli.sullivan – command-line pipeline: build and verify models, construct the
self-equivalence φ, abelianize group presentations.

Usage
-----
    python -m cli.sullivan model build --spec wedge-s2-s3-s3 --cap 12 --out model.json
    python -m cli.sullivan selfeq --model model.json --out phi.json --emit-inverse psi.json
    python -m cli.sullivan group abelianize F.grp --expect rank=0,torsion=2,4,4
    python -m cli.sullivan reproduce-theorem4 --cap 10 --out-dir out/

Exit codes: 0 = every check passed, 2 = a mathematical check failed,
1 = bad arguments, unreadable input or unwritable output.
"""

from __future__ import annotations
import argparse, contextlib, contextvars, json, sys
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

from sullivan import bigraded, presentations, report, selfeq, serialize
from sullivan.config import DATA_DIR, DEFAULT_CAP, LOG_DIR
from sullivan.errors import ExtensionError, MorphismError, NotACocycleError, SullivanError
from sullivan.log_manager import LogManager

EXIT_OK, EXIT_FAULT, EXIT_CHECK = 0, 1, 2

# errors raised while checking mathematics (as opposed to reading input)
_CHECK_ERRORS = (ExtensionError, MorphismError, NotACocycleError)

# where reports go; progress lines move to stderr under --format json
_stdout: contextvars.ContextVar[TextIO] = contextvars.ContextVar("stdout")


class ConfigError(SullivanError):
    """Invalid command-line configuration."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    spec: str = "wedge-s2-s3-s3"
    cap: int = DEFAULT_CAP
    out: Optional[Path] = None
    fmt: str = "text"
    model: Optional[Path] = None
    presentation: Optional[str] = None
    expect: Optional[str] = None
    emit_inverse: Optional[Path] = None
    report: Optional[Path] = None
    out_dir: Optional[Path] = None
    log_dir: str = LOG_DIR

    def __post_init__(self):
        if self.cap < 1:
            raise ConfigError(f"--cap must be positive, got {self.cap}")
        if self.fmt not in ("json", "text"):
            raise ConfigError(f"--format must be json or text, got {self.fmt!r}")


# -------------------------------------------------- #
# helpers
# -------------------------------------------------- #
def _emit(cfg: RunConfig, text: str, payload: dict):
    if cfg.fmt == "json":
        print(serialize.dumps(payload), end="", file=_stdout.get(sys.stdout))
    else:
        print(text, file=_stdout.get(sys.stdout))
    if cfg.report is not None:
        serialize.save_json(payload, cfg.report)


def parse_expect(text: str) -> Tuple[Optional[int], Optional[Tuple[int, ...]]]:
    """'rank=0,torsion=2,4,4' -> (0, (2, 4, 4)); either part may be omitted."""
    values: Dict[str, List[int]] = {}
    key = None
    for tok in (t.strip() for t in text.split(",")):
        if "=" in tok:
            key, _, tok = tok.partition("=")
            key = key.strip()
            if key not in ("rank", "torsion"):
                raise ConfigError(f"unknown --expect key {key!r}")
            values[key] = []
        if key is None:
            raise ConfigError(f"cannot parse --expect {text!r}")
        if tok:
            try:
                values[key].append(int(tok))
            except ValueError:
                raise ConfigError(f"non-integer {tok!r} in --expect") from None
    if len(values.get("rank", [])) > 1:
        raise ConfigError(f"--expect rank takes one value, got {text!r}")
    rank = values["rank"][0] if values.get("rank") else None
    torsion = tuple(values["torsion"]) if "torsion" in values else None
    return rank, torsion


def _presentation_path(ref: str) -> Path:
    path = Path(ref)
    if not path.exists() and (DATA_DIR / ref).exists():
        return DATA_DIR / ref
    return path


# -------------------------------------------------- #
# commands
# -------------------------------------------------- #
def build_and_verify(spec_ref: str, cap: int, log: LogManager):
    spec = bigraded.resolve_spec(spec_ref)
    with log.step("model_build", spec=spec.name, cap=cap) as rec:
        model = bigraded.build(spec, cap)
        result = bigraded.verify(model)
        rec.update(generators=len(model.w_generators()), passed=result.passed,
                   failed=result.failed_checks())
    print(f"[verify] {spec.name} cap={cap}: {'pass' if result.passed else 'FAIL'}")
    return model, result


def cmd_model_build(cfg: RunConfig, log: LogManager) -> int:
    model, result = build_and_verify(cfg.spec, cfg.cap, log)
    if cfg.out is not None:
        serialize.save_json(serialize.model_to_json(model), cfg.out)
    payload = {"model": str(cfg.out) if cfg.out else None,
               "degree_counts": model.degree_counts(),
               "verify": serialize.report_to_json(result)}
    _emit(cfg, report.format_build(model, result), payload)
    return EXIT_OK if result.passed else EXIT_CHECK


def run_selfeq(model: bigraded.BigradedModel, log: LogManager,
               emit_inverse: Optional[Path] = None) -> Tuple[bool, dict, str, selfeq.CdgaMorphism]:
    """φ plus every check on it; returns (passed, payload, text, φ)."""
    with_x = model.with_circle("x")
    phi = selfeq.construct_phi(with_x)
    chain = selfeq.is_chain_map(phi)
    reports = selfeq.e_sharp_reports(phi, range(1, model.cap + 1))
    witness = selfeq.nontriviality_witness(phi)

    psi = selfeq.invert(phi)
    inverse_ok = selfeq.is_two_sided_inverse(phi, psi)
    if emit_inverse is not None:
        serialize.save_json(serialize.morphism_to_json(psi), emit_inverse)

    passed = chain.passed and all(r.is_member for r in reports) and inverse_ok and witness
    print(f"[selfeq] chain={chain.passed} member={all(r.is_member for r in reports)} "
          f"inverse={inverse_ok} witness={witness}")
    log.event("selfeq", cap=model.cap, passed=passed, chain=chain.passed, inverse=inverse_ok, witness=witness)
    payload = {
        "passed": passed,
        "chain_map": serialize.report_to_json(chain),
        "e_sharp": serialize.report_to_json(reports[-1]) if reports else None,
        "member_for": [r.m for r in reports if r.is_member],
        "inverse": inverse_ok,
        "moved_c3": witness,
    }
    text = report.format_selfeq(chain, reports, inverse_ok)
    text += f"\n[c3] -> [c3] + [a2*x]: {'detected' if witness else 'NOT detected'}"
    return passed, payload, text, phi


def cmd_selfeq(cfg: RunConfig, log: LogManager) -> int:
    model = serialize.model_from_json(serialize.load_json(cfg.model))
    gate = bigraded.verify(model)
    if not gate.passed:
        print(f"[verify] model {cfg.model} fails verification", file=sys.stderr)
        _emit(cfg, "\n".join(report.format_verify(gate)), {"passed": False, "verify": serialize.report_to_json(gate)})
        return EXIT_CHECK
    try:
        passed, payload, text, phi = run_selfeq(model, log, cfg.emit_inverse)
    except _CHECK_ERRORS as e:
        print(f"[selfeq] {e}", file=sys.stderr)
        _emit(cfg, f"selfeq: FAIL ({e})", {"passed": False, "error": str(e)})
        return EXIT_CHECK
    if cfg.out is not None:
        serialize.save_json(serialize.morphism_to_json(phi), cfg.out)
    _emit(cfg, text, payload)
    return EXIT_OK if passed else EXIT_CHECK


def check_group(path: Path, expect: Optional[str], log: LogManager) -> Tuple[bool, dict, str]:
    pres = presentations.load(path)
    inv = presentations.abelian_invariants(pres)
    ok = True
    if expect:
        rank, torsion = parse_expect(expect)
        ok = (rank is None or rank == inv.free_rank) and (torsion is None or torsion == inv.torsion)
    print(f"[group] {path.name}: {len(pres.generators)} generators, {len(pres.relators)} relators")
    log.event("group", file=str(path), rank=inv.free_rank, torsion=list(inv.torsion), expect=expect, passed=ok)
    payload = {"file": str(path), "generators": len(pres.generators), "relators": len(pres.relators),
               "free_rank": inv.free_rank, "torsion": list(inv.torsion), "expect": expect, "passed": ok}
    text = report.format_invariants(path.name, inv)
    if expect:
        text += f"\nexpect {expect}: {'PASS' if ok else 'FAIL'}"
    return ok, payload, text


def cmd_group(cfg: RunConfig, log: LogManager) -> int:
    if cfg.expect:
        parse_expect(cfg.expect)
    ok, payload, text = check_group(_presentation_path(cfg.presentation), cfg.expect, log)
    _emit(cfg, text, payload)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_reproduce(cfg: RunConfig, log: LogManager) -> int:
    out_dir = cfg.out_dir or Path(".")
    if not out_dir.is_dir():
        raise OSError(f"output directory {out_dir} does not exist")

    model, result = build_and_verify("wedge-s2-s3-s3", cfg.cap, log)
    serialize.save_json(serialize.model_to_json(model), out_dir / "model.json")
    sections = [report.format_build(model, result)]
    combined = {"cap": cfg.cap, "verify": serialize.report_to_json(result)}

    passed = result.passed
    if passed:
        try:
            ok, payload, text, phi = run_selfeq(model, log, out_dir / "psi.json")
            serialize.save_json(serialize.morphism_to_json(phi), out_dir / "phi.json")
        except _CHECK_ERRORS as e:
            ok, payload, text = False, {"passed": False, "error": str(e)}, f"selfeq: FAIL ({e})"
        passed = passed and ok
        combined["selfeq"] = payload
        sections.append(text)

    groups = []
    for name, expect in (("F.grp", "rank=0,torsion=2,4,4"), ("G.grp", "rank=1,torsion=2,4,4")):
        ok, payload, text = check_group(DATA_DIR / name, expect, log)
        passed = passed and ok
        groups.append(payload)
        sections.append(text)
    combined["groups"] = groups
    combined["passed"] = passed

    serialize.save_json(combined, out_dir / "summary.json")
    sections.append(f"reproduction: {'PASS' if passed else 'FAIL'}")
    _emit(cfg, "\n".join(sections), combined)
    return EXIT_OK if passed else EXIT_CHECK


# -------------------------------------------------- #
# argument parsing
# -------------------------------------------------- #
def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="python -m cli.sullivan",
        description="Bigraded Sullivan models, the self-equivalence φ and group abelianization.",
    )
    p.add_argument("--format", dest="fmt", default="text", help="stdout format: text or json")
    p.add_argument("--report", type=Path, help="also write the report JSON here")
    p.add_argument("--log-dir", default=LOG_DIR, help=f"JSONL run logs (default {LOG_DIR})")
    sub = p.add_subparsers(dest="command", required=True)

    model = sub.add_parser("model", help="bigraded model commands")
    msub = model.add_subparsers(dest="action", required=True)
    build = msub.add_parser("build", help="build and verify a bigraded model")
    build.add_argument("--spec", default="wedge-s2-s3-s3", help="built-in spec name or JSON spec file")
    build.add_argument("--cap", type=int, default=DEFAULT_CAP, help=f"degree cap (default {DEFAULT_CAP})")
    build.add_argument("--out", type=Path, help="write the model JSON here")

    se = sub.add_parser("selfeq", help="construct and check φ on a saved model")
    se.add_argument("--model", type=Path, required=True, help="model JSON from `model build`")
    se.add_argument("--out", type=Path, help="write φ as morphism JSON")
    se.add_argument("--emit-inverse", type=Path, help="write ψ = φ⁻¹ as morphism JSON")

    group = sub.add_parser("group", help="group presentation commands")
    gsub = group.add_subparsers(dest="action", required=True)
    ab = gsub.add_parser("abelianize", help="abelian invariants of a presentation")
    ab.add_argument("presentation", help="presentation file (bundled: F.grp, G.grp)")
    ab.add_argument("--expect", help="gate, e.g. rank=0,torsion=2,4,4")

    rep = sub.add_parser("reproduce-theorem4", help="model build + selfeq + group checks")
    rep.add_argument("--cap", type=int, default=DEFAULT_CAP, help=f"degree cap (default {DEFAULT_CAP})")
    rep.add_argument("--out-dir", type=Path, default=Path("."), help="directory for all outputs")
    return p


def _config(args: argparse.Namespace) -> RunConfig:
    command = args.command + (f" {args.action}" if getattr(args, "action", None) else "")
    return RunConfig(
        command=command,
        spec=getattr(args, "spec", "wedge-s2-s3-s3"),
        cap=getattr(args, "cap", DEFAULT_CAP),
        out=getattr(args, "out", None),
        fmt=args.fmt,
        model=getattr(args, "model", None),
        presentation=getattr(args, "presentation", None),
        expect=getattr(args, "expect", None),
        emit_inverse=getattr(args, "emit_inverse", None),
        report=args.report,
        out_dir=getattr(args, "out_dir", None),
        log_dir=args.log_dir,
    )


COMMANDS = {
    "model build":        cmd_model_build,
    "selfeq":             cmd_selfeq,
    "group abelianize":   cmd_group,
    "reproduce-theorem4": cmd_reproduce,
}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_FAULT
    try:
        cfg = _config(args)
    except ConfigError as e:
        print(f"[error] {e}", file=sys.stderr)
        return EXIT_FAULT

    try:
        log = LogManager(cfg.log_dir)
    except OSError as e:
        print(f"[error] cannot open log directory {cfg.log_dir}: {e}", file=sys.stderr)
        return EXIT_FAULT
    _stdout.set(sys.stdout)
    quiet = contextlib.redirect_stdout(sys.stderr) if cfg.fmt == "json" else contextlib.nullcontext()
    try:
        with quiet, log.step("command", command=cfg.command, cap=cfg.cap) as rec:
            rec["exit"] = COMMANDS[cfg.command](cfg, log)
        return rec["exit"]
    except _CHECK_ERRORS as e:
        print(f"[error] check failed: {e}", file=sys.stderr)
        return EXIT_CHECK
    except (OSError, json.JSONDecodeError, SullivanError) as e:
        print(f"[error] {e}", file=sys.stderr)
        log.event("fault", command=cfg.command, error=str(e))
        return EXIT_FAULT
    except KeyboardInterrupt:
        print("\nInterrupted by user.")
        return EXIT_FAULT
    finally:
        log.close()


if __name__ == "__main__":
    sys.exit(main())
