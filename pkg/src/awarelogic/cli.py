"""Command-line front end.

Subcommands wrap the library operations one-to-one: parse, eval,
validate, translate, valid, search, proof, taut3.  Model files are JSON
with a "kind" discriminator (kripke, awareness, gsm, hms); writing uses
sorted keys so files are byte-stable.

Exit codes:
  0  success; for valid "the formula is valid", for search "none found"
  1  a countermodel exists (valid/search/taut3) or a proof line fails
  2  syntax error in a formula or a proof file
  3  model validation failure or model/formula incompatibility
  4  unknown state
  5  bad flags or bounds
"""

import functools
import json
import sys

import click

from . import __version__
from .proofcheck import check_proof, script_from_json
from .semantics import eval_structure
from .structures import (
    ClassSpec,
    ModelError,
    TruthValue,
    UnknownState,
    structure_from_dict,
    structure_to_dict,
    validate_structure,
)
from .syntax import (
    ParseError,
    is_definitely_two_valued,
    is_implication_free,
    is_simple,
    parse,
    primitives,
    render,
)
from .translate import awareness_to_hms, hms_to_awareness
from .validity import (
    FALSIFIABLE,
    SearchBounds,
    ValidityMode,
    _fails,
    _gsm_states,
    prop3_status,
    search_countermodel,
    valid_in,
)

# concrete syntax accepted for formulas evaluated against each model kind
_LANG_FOR_KIND = {"kripke": "k", "awareness": "kxa", "gsm": "knimp", "hms": "knimp"}

_DEFAULT_SEARCH_MODE = {
    "kripke": "classical",
    "awareness": "classical",
    "gsm": "objective",
    "hms": "weak",
}

_MODES = ("weak", "strong", "objective", "classical")
_KINDS = ("kripke", "awareness", "gsm", "hms")


def _die(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _emit(payload, out):
    """Write a result to stdout or, when --out was given, to a file.
    Dicts and lists are rendered as canonical JSON."""
    if isinstance(payload, str):
        text = payload
    else:
        text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelError(f"model file {path!r} is not valid JSON: {exc}") from exc
    return structure_from_dict(data)


def _parse(text: str, lang: str):
    try:
        return parse(text, lang)
    except ParseError as exc:
        _die(2, str(exc))


def _class(text: str) -> ClassSpec:
    try:
        return ClassSpec.from_text(text)
    except ValueError as exc:
        _die(5, str(exc))


def _trap(fn):
    """Map library exceptions onto the exit-code contract.  Order
    matters: UnknownState and ParseError both subclass the broader
    classes below them."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ParseError as exc:
            _die(2, str(exc))
        except UnknownState as exc:
            _die(4, str(exc))
        except ModelError as exc:
            _die(3, str(exc))
        except ValueError as exc:
            _die(5, str(exc))

    return wrapper


class _Group(click.Group):
    """Group with the exit-code contract above; click's own usage
    errors come out as 5 instead of its default 2."""

    def main(self, *args, standalone_mode=True, **kwargs):
        try:
            return super().main(*args, standalone_mode=False, **kwargs)
        except click.exceptions.Exit as exc:
            sys.exit(exc.exit_code)
        except click.UsageError as exc:
            if exc.ctx is not None:
                click.echo(exc.ctx.get_usage(), err=True)
            _die(5, exc.format_message())
        except click.ClickException as exc:
            exc.show()
            sys.exit(exc.exit_code)
        except click.Abort:
            sys.exit(130)


@click.group(cls=_Group, context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="awarelogic")
def cli():
    """Parse, evaluate, validate, translate, and search epistemic
    models of awareness; decide three-valued propositional formulas;
    check Hilbert-style proofs."""


@cli.command("parse")
@click.argument("formula")
@click.option("--lang", default="knimp", show_default=True,
              type=click.Choice(["k", "kxa", "knimp"]),
              help="Concrete syntax to accept.")
@click.option("--out", type=click.Path(dir_okay=False), help="Write to FILE.")
def cmd_parse(formula, lang, out):
    """Parse FORMULA and report its desugared core form."""
    f = _parse(formula, lang)
    _emit({
        "core": render(f),
        "lang": lang,
        "primitives": sorted(primitives(f)),
        "flags": {
            "d2": is_definitely_two_valued(f),
            "simple": is_simple(f),
            "implication_free": is_implication_free(f),
        },
    }, out)


def _blockers(report) -> list:
    """Validation findings that make evaluation unsound, as strings."""
    bad = list(report.errors)
    if report.kind == "gsm":
        for c in ("condition_1a", "condition_1b", "condition_2"):
            if not report.flags[c]:
                bad.append(f"{c} fails")
    if report.kind == "hms" and not report.flags["in_class"]:
        # only the always-required conditions block evaluation; the
        # reflexivity/stationarity flags are class options
        for name in ("value_discipline", "projections_well_formed",
                     "confinedness", "proj_knowledge", "proj_ignorance"):
            if not report.flags[name]:
                bad.append(f"{name} fails")
    return bad


@cli.command("eval")
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--state", required=True, help="State to evaluate at.")
@click.option("--formula", "formula_text", required=True)
@click.option("--out", type=click.Path(dir_okay=False))
@_trap
def cmd_eval(model_path, state, formula_text, out):
    """Evaluate a formula at one state of a model.

    Prints 0, 1/2, or 1 for the three-valued kinds and true or false
    for the two-valued ones.
    """
    M = _load(model_path)
    report = validate_structure(M)
    bad = _blockers(report)
    if bad:
        click.echo(json.dumps(
            {"kind": report.kind, "flags": report.flags, "errors": bad, "ok": False},
            indent=2, sort_keys=True))
        _die(3, "model failed validation")
    f = _parse(formula_text, _LANG_FOR_KIND[M.kind])
    v = eval_structure(M, state, f)
    if isinstance(v, TruthValue):
        _emit(v.text, out)
    else:
        _emit("true" if v else "false", out)


@cli.command("validate")
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--class", "class_text", default="", metavar="LETTERS",
              help="Conditions to require, letters from r,t,e.")
@click.option("--out", type=click.Path(dir_okay=False))
@_trap
def cmd_validate(model_path, class_text, out):
    """Check well-formedness and report structural properties."""
    C = _class(class_text)
    M = _load(model_path)
    report = validate_structure(M, C)
    ok = report.ok
    if report.kind == "hms":
        ok = ok and report.flags["in_class"]
    else:
        wanted = {"r": "reflexive", "t": "transitive", "e": "euclidean"}
        for letter, flag in wanted.items():
            if letter in str(C):
                ok = ok and report.flags[flag]
    _emit({
        "kind": report.kind,
        "class": str(C),
        "flags": report.flags,
        "errors": report.errors,
        "ok": ok,
    }, out)
    if not ok:
        sys.exit(3)


@cli.command("translate")
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--to", "target", required=True,
              type=click.Choice(["awareness", "hms"]))
@click.option("--class", "class_text", default="", metavar="LETTERS")
@click.option("--atoms", default=None,
              help="Comma-separated atom superset for --to hms.")
@click.option("--out", type=click.Path(dir_okay=False))
@_trap
def cmd_translate(model_path, target, class_text, atoms, out):
    """Convert between the awareness and multi-space model families."""
    C = _class(class_text)
    M = _load(model_path)
    if target == "awareness":
        if M.kind != "hms":
            _die(5, f"--to awareness needs an hms model, got {M.kind}")
        M2 = hms_to_awareness(M, C)
    else:
        if M.kind != "awareness":
            _die(5, f"--to hms needs an awareness model, got {M.kind}")
        atom_list = atoms.split(",") if atoms else None
        M2 = awareness_to_hms(M, atom_list, C)
    _emit(structure_to_dict(M2), out)


@cli.command("valid")
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", required=True, type=click.Choice(_MODES))
@click.option("--formula", "formula_text", required=True)
@click.option("--out", type=click.Path(dir_okay=False))
@_trap
def cmd_valid(model_path, mode, formula_text, out):
    """Decide validity of a formula in one model.

    Exit 0 when valid, 1 with a witness state when not.
    """
    M = _load(model_path)
    f = _parse(formula_text, _LANG_FOR_KIND[M.kind])
    vmode = ValidityMode.from_text(mode)
    ok = valid_in(M, f, vmode)
    payload = {"formula": formula_text, "mode": mode, "valid": ok}
    if not ok:
        if vmode is ValidityMode.OBJECTIVE:
            states = M.objective
        elif M.kind == "gsm":
            states = _gsm_states(M)
        else:
            states = M.states
        payload["witness_state"] = next(
            s for s in states if _fails(M, s, f, vmode)
        )
    _emit(payload, out)
    if not ok:
        sys.exit(1)


@cli.command("search")
@click.option("--kind", required=True, type=click.Choice(_KINDS))
@click.option("--class", "class_text", default="", metavar="LETTERS",
              help="Structure class to search within, letters from r,t,e.")
@click.option("--mode", default=None, type=click.Choice(_MODES),
              help="Validity notion; defaults per kind.")
@click.option("--formula", "formula_text", required=True)
@click.option("--max-atoms", default=1, show_default=True)
@click.option("--max-agents", default=1, show_default=True)
@click.option("--max-states", default=2, show_default=True,
              help="Per space for hms, total otherwise.")
@click.option("--samples", default=0, show_default=True,
              help="Randomized sample count; 0 means exhaustive.")
@click.option("--seed", default=None, type=int,
              help="Seed for randomized search.")
@click.option("--out", type=click.Path(dir_okay=False),
              help="Write the witness model file here.")
@_trap
def cmd_search(kind, class_text, mode, formula_text, max_atoms, max_agents,
               max_states, samples, seed, out):
    """Search for a countermodel within bounds.

    On a hit, emits a model file with a top-level witness_state and
    exits 1; the file loads back through eval unchanged.  Exits 0 when
    no structure within bounds falsifies the formula.
    """
    mode = mode or _DEFAULT_SEARCH_MODE[kind]
    C = _class(class_text)
    bounds = SearchBounds(
        max_atoms=max_atoms,
        max_agents=max_agents,
        max_states=max_states,
        mode="randomized" if samples else "exhaustive",
        seed=seed,
        samples=samples,
    )
    f = _parse(formula_text, _LANG_FOR_KIND[kind])
    hit = search_countermodel(f, kind, C, mode, bounds)
    if hit is None:
        click.echo("none within bounds")
        return
    M, s = hit
    payload = structure_to_dict(M)
    payload["witness_state"] = s
    _emit(payload, out)
    sys.exit(1)


@cli.command("proof")
@click.argument("script", type=click.Path(exists=True, dir_okay=False))
def cmd_proof(script):
    """Check a proof script: JSON with system and lines fields.

    Prints ok, or the first bad line with the reason.  Structural
    faults (malformed file, unknown system or rule, bad references)
    exit 2; a line that fails its justification exits 1.
    """
    try:
        with open(script, encoding="utf-8") as fh:
            verdict = check_proof(script_from_json(json.load(fh)))
    except (ValueError, KeyError) as exc:
        _die(2, str(exc))
    if verdict.ok:
        click.echo("ok")
        return
    click.echo(f"bad line {verdict.bad_line}: {verdict.reason}")
    sys.exit(1)


@cli.command("taut3")
@click.argument("formula")
@click.option("--table", is_flag=True, help="Print the full value table.")
@click.option("--out", type=click.Path(dir_okay=False))
@_trap
def cmd_taut3(formula, table, out):
    """Decide a propositional formula over the three truth values.

    Prints strongly_valid, weakly_valid_only, or falsifiable; the
    first two exit 0, the last exits 1.
    """
    f = _parse(formula, "knimp")
    report = prop3_status(f)
    if table:
        _emit({
            "formula": formula,
            "atoms": list(report.atoms),
            "rows": [
                {"assignment": {a: v.text for a, v in zip(report.atoms, row)},
                 "value": value.text}
                for row, value in report.rows
            ],
            "verdict": report.verdict,
        }, out)
    else:
        _emit(report.verdict, out)
    if report.verdict == FALSIFIABLE:
        sys.exit(1)


def main(argv=None):
    cli.main(args=argv)


if __name__ == "__main__":
    main()
