"""Command line: ``superpot analyze | decompose-qh | mutate | verify-paper``.

Every command builds a JSON report first; ``--format text`` renders it.
Exit codes: 0 success, 2 input parse error, 3 desk-scale cap exceeded,
4 internal invariant violation (including failed reproduction checks).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, critlocus, groebner
from .artin import (
    ArtinAlgebra,
    DecompositionFailed,
    InvalidAlgebra,
    check_idempotents,
    fingerprint,
    is_frobenius,
    local_decomposition,
    pairing_orthogonal,
    truncated_polynomial_algebra,
)
from .critlocus import (
    ISOLATED,
    NotCritical,
    SearchSpaceTooLarge,
    bound_checks,
    find_critical_points,
    isolated_part,
    jacobian,
)
from .groebner import DegreeExplosion, NotZeroDimensional
from .koszul import is_regular_sequence, localized_cohomology_at
from .laurent import LaurentPoly, NotLaurent, ParseError
from .mfcheck import DivisionFailure, HomotopyObstruction
from .mfcheck import NoStabilization as MFNoStabilization
from .koszul import NoStabilization as KoszulNoStabilization
from .mutate import (
    _TEXTS,
    betti,
    builtin,
    catalog_from_json,
    chart_points,
    isolated_accounting,
    load_catalog,
    verify_catalog,
)
from .scalars import QQ, FieldError, UniPoly, field_for_char, seed

EXIT_OK, EXIT_PARSE, EXIT_CAP, EXIT_INVARIANT = 0, 2, 3, 4


class UsageError(ValueError):
    pass


class CheckFailed(RuntimeError):
    pass


def _parser_error(message):
    raise UsageError(message)


# ---------------------------------------------------------------------------
# inputs


def _field(args):
    try:
        return field_for_char(int(args.char))
    except (ValueError, FieldError) as exc:
        raise UsageError(f"bad characteristic {args.char!r}: {exc}") from None


def _is_builtin(name):
    return name in _TEXTS or name.startswith("bl4_") or (name.startswith("clifford") and name[8:].isdigit())


def load_potential(text, field, names=None) -> tuple[str, LaurentPoly]:
    """A potential from a built-in name, a file (JSON or expression) or an inline expression."""
    if _is_builtin(text):
        try:
            return text, builtin(text, field)
        except KeyError as exc:
            raise UsageError(str(exc)) from None
    path = Path(text)
    if path.is_file():
        body = path.read_text()
        if path.suffix == ".json":
            try:
                return str(path), LaurentPoly.from_json(json.loads(body), field)
            except (KeyError, TypeError, json.JSONDecodeError) as exc:
                raise UsageError(f"bad potential file {path}: {exc}") from None
        return str(path), LaurentPoly.parse(body.strip(), names, field)
    return text, LaurentPoly.parse(text, names, field)


def load_points(path, W):
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad points file {path}: {exc}") from None
    if not isinstance(data, list) or not all(isinstance(p, list) and len(p) == W.n_vars for p in data):
        raise UsageError(f"points file must hold a list of {W.n_vars}-coordinate lists")
    return [tuple(W.field.parse(str(x)) for x in p) for p in data]


def _load_json(path, what):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad {what} file {path}: {exc}") from None


# ---------------------------------------------------------------------------
# analyze


def _strategy(args, W, jac):
    strategy = args.strategy
    if args.points and strategy != "candidates":
        strategy = "candidates"
    if strategy == "eigen" and jac.krull_dim > 0:
        # positive-dimensional locus: eigen decomposition needs a finite quotient
        if W.field.characteristic:
            return "exhaustive"
        return "candidates"
    return strategy


def analyze(args) -> dict:
    field = _field(args)
    names = args.vars.split(",") if args.vars else None
    label, W = load_potential(args.potential, field, names)
    jac = jacobian(W)
    report = {
        "command": "analyze",
        "field": field.spec(),
        "potential": repr(W),
        "input": label,
        "vars": list(W.names),
        "krull_dim": jac.krull_dim if not jac.is_unit() else None,
        "jacobian_zero": jac.is_unit(),
    }
    candidates = load_points(args.points, W) if args.points else None
    if jac.is_unit():
        points = []
        report["strategy"] = None
    else:
        strategy = _strategy(args, W, jac)
        report["strategy"] = strategy
        points = find_critical_points(W, strategy, candidates or [], jac)
    if jac.krull_dim == 0 and not jac.is_unit():
        report["quotient_dim"] = jac.quotient_dim()
    part = isolated_part(W, points, jac)
    report["points"] = []
    for cp in points:
        entry = cp.to_json(W)
        if cp.isolated == ISOLATED and cp.local is not None:
            entry["local_fingerprint"] = fingerprint(cp.local.algebra)
        report["points"].append(entry)
    report["jac_isol_dim"] = part.total_dim
    report["isolated_cross_check"] = part.cross_checked
    D = args.betti if args.betti is not None else betti(args.potential)
    if D is not None:
        report["bounds"] = bound_checks(part, D)
    iso = [cp for cp in points if cp.isolated == ISOLATED]
    if args.koszul:
        report["koszul"] = [_koszul_entry(W, cp, args) for cp in iso]
    if args.mf:
        report["mf"] = [_mf_entry(W, cp, args) for cp in iso]
    return report


def _koszul_entry(W, cp, args):
    res = localized_cohomology_at(W, cp, n_max=args.truncation)
    if not res["stabilized"]:
        raise KoszulNoStabilization(args.truncation, res["dims"])
    return {
        "dims": res["dims"],
        "N": res["N"],
        "N_prime": res["N_prime"],
        "regular_sequence": is_regular_sequence(W, cp=cp),
    }


def _mf_entry(W, cp, args):
    from .verify import mf_report

    if W.n_vars > 3:
        return {"skipped": "more than three variables"}
    rep = mf_report(W, cp, end=True)
    if not (rep["factorization"] and rep["in_max_ideal"] and rep["nullhomotopic"]):
        raise CheckFailed(f"matrix factorization checks failed: {rep}")
    return {
        "rank": rep["rank"],
        "end_even": rep["end_even"],
        "end_odd": rep["end_odd"],
        "stabilized_at_N": rep["stabilized_at_N"],
        "tensor_parity": rep["tensor_parity"],
    }


# ---------------------------------------------------------------------------
# decompose-qh


def _builtin_algebra(name, field):
    if name == "cubic-surface":
        from .verify import cubic_pairing, cubic_qh

        return cubic_qh(field), cubic_pairing()
    if name.startswith("cp") and name[2:].isdigit():
        n = int(name[2:])
        field = field or QQ
        # k[H]/(H^(n+1) - 1)
        p = UniPoly(field, [field(-1)] + [field.zero] * n + [field.one])
        return truncated_polynomial_algebra(field, p, "H"), None
    return None


def decompose_qh(args) -> dict:
    field = _field(args) if args.char is not None else None
    label = args.algebra
    pairing = None
    got = _builtin_algebra(label, field)
    if got is not None:
        A, pairing = got
    else:
        data = _load_json(label, "algebra")
        try:
            A = ArtinAlgebra.from_json(data, field)
        except (KeyError, TypeError) as exc:
            raise UsageError(f"bad algebra file {label}: {exc}") from None
        pairing = data.get("pairing")
    if args.pairing:
        pairing = _load_json(args.pairing, "pairing")
        if isinstance(pairing, dict):
            pairing = pairing.get("pairing", pairing.get("form"))
    factors = local_decomposition(A)
    if not check_idempotents(A, factors):
        raise CheckFailed("idempotents fail to be orthogonal and complete")
    fmt = A.field.format
    report = {
        "command": "decompose-qh",
        "field": A.field.spec(),
        "input": label,
        "dim": A.dim,
        "factors": [
            {**f.fingerprint(), "idempotent": [fmt(x) for x in f.idempotent]} for f in factors
        ],
        "fingerprint": fingerprint(A, factors),
    }
    if pairing is not None:
        form = [[A.field.parse(str(x)) for x in row] for row in pairing]
        report["frobenius"] = is_frobenius(A, form)
        report["orthogonal"] = pairing_orthogonal(A, form, factors)
    return report


# ---------------------------------------------------------------------------
# mutate


def mutate(args) -> dict:
    field = _field(args)
    if args.potential not in (None, "bl4"):
        raise UsageError("only the bl4 families carry a chart catalog")
    if args.catalog:
        cat = catalog_from_json(_load_json(args.catalog, "catalog"), field)
    else:
        cat = load_catalog(field)
    charts = [args.chart] if args.chart else list(cat.charts)
    for ch in charts + ([args.against] if args.against else []):
        if ch not in cat.charts:
            raise UsageError(f"unknown chart {ch!r}; known: {', '.join(cat.charts)}")
    report = {"command": "mutate", "field": field.spec(), "base": cat.base}
    if args.verify_figure:
        rep = verify_catalog(cat)
        report["verify_figure"] = {
            "ok": rep["ok"],
            "checks": len(rep["checks"]),
            "failures": rep["failures"],
        }
        if not rep["ok"]:
            report["ok"] = False
            return report
    pts = chart_points(cat, args.strategy)
    report["charts"] = {}
    for ch in charts:
        W = cat.potential(ch)
        entry = {
            "display": list(cat.display.get(ch, cat.charts[ch])),
            "potential": repr(W),
            "points": [p.to_json(W) for p in pts[ch]],
            "new_points": [p.to_json(W)["coords"] for p in pts[ch] if p.status == "new" and p.point.coords],
        }
        if args.periods is not None:
            entry["periods"] = [W.field.format(x) for x in W.periods(args.periods)]
        report["charts"][ch] = entry
    if args.periods is not None and args.against:
        ref = cat.potential(args.against).periods(args.periods)
        report["periods_against"] = {
            "chart": args.against,
            "order": args.periods,
            "equal": {ch: cat.potential(ch).periods(args.periods) == ref for ch in charts},
        }
    if not args.chart:
        report["accounting"] = isolated_accounting(cat, args.strategy)
    report["ok"] = True
    return report


# ---------------------------------------------------------------------------
# verify-paper


def verify_paper(args) -> dict:
    from . import verify

    kw = {}
    if args.catalog:
        kw[9] = {"catalog": catalog_from_json(_load_json(args.catalog, "catalog"), QQ)}
    checks = verify.run_all(args.filter, kw)
    if not checks:
        raise UsageError(f"filter {args.filter!r} selects no criterion")
    return {
        "command": "verify-paper",
        "filter": args.filter,
        "criteria": [c.to_json() for c in checks],
        "lines": [c.line() for c in checks],
        "ok": all(c.ok for c in checks),
    }


# ---------------------------------------------------------------------------
# output


def render_text(report) -> str:
    if report.get("command") == "verify-paper":
        out = list(report["lines"])
        for crit in report["criteria"]:
            out.extend(f"  {crit['criterion']}: {f}" for f in crit["failures"][5:])
        return "\n".join(out)
    lines = []

    def walk(obj, indent):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k, v in obj.items():
                if isinstance(v, (dict, list)) and v and not _flat(v):
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {_scalar(v)}")
        else:
            for i, v in enumerate(obj):
                if isinstance(v, (dict, list)) and not _flat(v):
                    lines.append(f"{pad}- [{i}]")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}- {_scalar(v)}")

    walk(report, 0)
    return "\n".join(lines)


def _flat(v):
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v):
    return json.dumps(v) if isinstance(v, (list, dict, bool)) or v is None else str(v)


def dump(report, fmt) -> str:
    if fmt == "text":
        return render_text(report)
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False)


# ---------------------------------------------------------------------------
# entry point


def build_parser():
    ap = argparse.ArgumentParser(prog="superpot", description="Exact analysis of Laurent superpotentials.")
    ap.error = _parser_error
    ap.add_argument("--version", action="version", version=f"superpot {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--gb-degree-cap", type=int, default=200, help="Gröbner degree cap")
    common.add_argument("--brute-force-cap", type=int, default=10**7, help="exhaustive search cap")
    common.add_argument("--truncation", type=int, default=16, help="truncation sweep cap")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="critical locus, Koszul and MF checks")
    a.add_argument("potential", help="built-in name, expression or file")
    a.add_argument("--char", default="0")
    a.add_argument("--vars", help="comma-separated variable order for expressions")
    a.add_argument("--strategy", choices=["exhaustive", "eigen", "candidates"], default="eigen")
    a.add_argument("--points", help="JSON file of candidate points")
    a.add_argument("--betti", type=int, help="total Betti number for the bound checks")
    a.add_argument("--no-koszul", dest="koszul", action="store_false")
    a.add_argument("--mf", action="store_true", help="matrix-factorization checks per point")
    a.set_defaults(run=analyze)

    d = sub.add_parser("decompose-qh", parents=[common], help="local factors of a finite algebra")
    d.add_argument("algebra", help="JSON file, 'cubic-surface' or 'cp<n>'")
    d.add_argument("--pairing", help="JSON file with a bilinear form")
    d.add_argument("--char", default=None)
    d.set_defaults(run=decompose_qh)

    m = sub.add_parser("mutate", parents=[common], help="Bl4 chart changes")
    m.add_argument("potential", nargs="?", default="bl4")
    m.add_argument("--char", default="0")
    m.add_argument("--chart")
    m.add_argument("--verify-figure", action="store_true")
    m.add_argument("--periods", type=int, metavar="M")
    m.add_argument("--against")
    m.add_argument("--catalog", help="JSON chart catalog replacing the built-in one")
    m.add_argument("--strategy", choices=["exhaustive", "eigen"], default="eigen")
    m.set_defaults(run=mutate)

    v = sub.add_parser("verify-paper", parents=[common], help="run the reproduction suite")
    v.add_argument("--filter")
    v.add_argument("--catalog", help="JSON chart catalog for the mutation criterion")
    v.set_defaults(run=verify_paper)
    for p in (a, d, m, v):
        p.error = _parser_error
    return ap


def _apply_caps(args):
    for name in ("gb_degree_cap", "brute_force_cap", "truncation"):
        if getattr(args, name) <= 0:
            raise UsageError(f"--{name.replace('_', '-')} must be positive")
    groebner.DEFAULT_DEGREE_CAP = args.gb_degree_cap
    critlocus.EXHAUSTIVE_LIMIT = args.brute_force_cap
    try:
        seed()
    except ValueError:
        raise UsageError("SUPERPOT_SEED must be an integer") from None


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    saved = (groebner.DEFAULT_DEGREE_CAP, critlocus.EXHAUSTIVE_LIMIT)
    try:
        args = build_parser().parse_args(argv)
        _apply_caps(args)
        report = args.run(args)
        report["tool"] = {"name": "superpot", "version": __version__}
        print(dump(report, args.format), file=out)
        return EXIT_OK if report.get("ok", True) else EXIT_INVARIANT
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (UsageError, ParseError, FieldError, InvalidAlgebra, NotLaurent, NotCritical, NotZeroDimensional) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    except (DegreeExplosion, SearchSpaceTooLarge, KoszulNoStabilization, MFNoStabilization) as exc:
        print(f"cap exceeded: {exc}", file=err)
        return EXIT_CAP
    except (CheckFailed, DecompositionFailed, DivisionFailure, HomotopyObstruction, AssertionError) as exc:
        print(f"invariant violated: {exc}", file=err)
        return EXIT_INVARIANT
    except Exception as exc:  # anything unforeseen is a broken invariant, not a user error
        print(f"internal error: {type(exc).__name__}: {exc}", file=err)
        return EXIT_INVARIANT
    finally:
        groebner.DEFAULT_DEGREE_CAP, critlocus.EXHAUSTIVE_LIMIT = saved


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
