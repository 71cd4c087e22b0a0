"""Command-line front end.

    shimfol strata CASE.json      EO strata scan against a set of pairs Sigma
    shimfol foliation CASE.json   ranks, slopes and cascade checks
    shimfol hilbert CASE.json     Hilbert-modular weight computations
    shimfol verify                run the oracle suites

Exit codes: 0 ok, 1 a verification failed, 2 bad input, 3 a size cap was hit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from math import gcd
from typing import Any, Callable, Mapping

from . import eo, foliation, hilbert
from .cmtype import INERT, CMTypeDatum, Embedding, OrbitDatum
from .dieudonne import duality_check, slope_decomposition
from .gfpn import MAX_DEGREE, FieldError, build_field
from .verify import SUITES, VerifyConfig, run_suites

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3
FORMATS = ("json", "csv", "table")


class CaseError(ValueError):
    pass


# -- case parsing --------------------------------------------------------------

def load_case(path: str) -> dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as handle:
            case = json.load(handle)
    except OSError as exc:
        raise CaseError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise CaseError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(case, dict):
        raise CaseError("a case file must hold a JSON object")
    return case


def _int(case: Mapping, key: str, default: int | None = None) -> int:
    value = case.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise CaseError(f"'{key}' must be an integer")
    return value


def parse_unitary(case: Mapping) -> tuple[CMTypeDatum, list, dict[str, Any]]:
    """Datum, Sigma (list of pairs) and the normalized case."""
    if case.get("kind", "unitary") != "unitary":
        raise CaseError("expected a unitary case")
    p = _int(case, "p", 2)
    d = _int(case, "d")
    orbits = case.get("orbits")
    if not isinstance(orbits, list) or not orbits:
        raise CaseError("'orbits' must be a non-empty list")
    orbit_spec = []
    for o in orbits:
        if not isinstance(o, dict) or not isinstance(o.get("signature"), list):
            raise CaseError("each orbit needs a 'signature' list")
        orbit_spec.append((o.get("kind", "split"), o["signature"]))
    datum = CMTypeDatum.build(d, orbit_spec)
    raw_sigma = case.get("sigma", [])
    if raw_sigma == "all":
        sigma = datum.pairs()
    elif isinstance(raw_sigma, list):
        sigma = sorted({datum.pair_from_ref(ref) for ref in raw_sigma})
    else:
        raise CaseError("'sigma' must be a list of [orbit, index(, mirror)] references or \"all\"")
    normalized = {
        "kind": "unitary",
        "p": p,
        "d": d,
        "orbits": [{"kind": o.kind, "signature": list(f)} for o, f in zip(datum.orbits, datum.signatures)],
        "sigma": [[pair.orbit, pair.index] for pair in sigma],
    }
    if "cap" in case:
        normalized["cap"] = _int(case, "cap")
    return datum, sigma, normalized


def _field_for(p: int):
    try:
        return build_field(p)
    except FieldError as exc:
        raise CaseError(str(exc)) from exc


# -- output helpers ------------------------------------------------------------

def _dump_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _csv(header: list[str], rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _table(header: list[str], rows: list[list[Any]]) -> str:
    cells = [header] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _flat(payload: Mapping, prefix: str = "") -> list[list[Any]]:
    rows = []
    for key in sorted(payload):
        value = payload[key]
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            rows.extend(_flat(value, name + "."))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            for n, item in enumerate(value):
                rows.extend(_flat(item, f"{name}.{n}."))
        else:
            literal = isinstance(value, (list, bool)) or value is None
            rows.append([name, json.dumps(value, separators=(",", ":")) if literal else value])
    return rows


def _emit_mapping(payload: Mapping, fmt: str) -> str:
    if fmt == "json":
        return _dump_json(payload)
    rows = [r for r in _flat(payload) if not r[0].startswith("case.")]
    if fmt == "csv":
        return _csv(["key", "value"], rows)
    return _table(["key", "value"], rows)


def _label_json(label: eo.EOLabel) -> list[list[int]]:
    return label.images()


# -- commands ----------------------------------------------------------------

def cmd_strata(case: Mapping, fmt: str) -> tuple[int, str]:
    datum, sigma, normalized = parse_unitary(case)
    report = eo.scan_strata(datum, sigma, cap=normalized.get("cap", eo.DEFAULT_CAP))
    strata = [{
        "label": _label_json(row.label),
        "dim": row.dim,
        "rV": list(row.rV),
        "inSigma": row.in_sigma,
        "bruhatOverFol": row.bruhat_over_fol,
    } for row in report.rows]
    code = EXIT_OK if report.ok else EXIT_FAIL
    if fmt == "json":
        return code, _dump_json({
            "case": normalized,
            "pairs": [[p.orbit, p.index] for p in datum.pairs()],
            "representatives": [[t.orbit, t.index, int(t.mirror)]
                                for t in map(datum.representative, datum.pairs())],
            "fol": _label_json(report.fol),
            "minimal": [_label_json(w) for w in report.minimal],
            "folIsUniqueMinimum": report.fol_is_unique_minimum,
            "allDominateFol": report.all_dominate_fol,
            "strata": strata,
        })
    header = ["label", "dim", "rV", "inSigma", "bruhatOverFol"]
    rows = [[str(row.label), row.dim, ".".join(map(str, row.rV)),
             str(row.in_sigma).lower(), str(row.bruhat_over_fol).lower()] for row in report.rows]
    if fmt == "csv":
        return code, _csv(header, rows)
    footer = (f"\nfoliation label {report.fol}; unique minimum: {str(report.fol_is_unique_minimum).lower()}; "
              f"all members dominate it: {str(report.all_dominate_fol).lower()}\n")
    return code, _table(header, rows) + footer


def cmd_foliation(case: Mapping, fmt: str) -> tuple[int, str]:
    datum, sigma, normalized = parse_unitary(case)
    field = _field_for(normalized["p"])
    report = foliation.foliation_report(datum, sigma)
    ok = report.consistent
    slopes, cascades, duality = [], [], []
    for o, orbit in enumerate(datum.orbits):
        sides = [False] if orbit.kind == INERT else [False, True]
        for mirror in sides:
            f = [datum.r(Embedding(o, i, mirror)) for i in range(orbit.size)]
            prof = slope_decomposition(datum.d, f, OrbitDatum(orbit.size, orbit.kind))
            slopes.append({
                "orbit": o,
                "mirror": mirror,
                "slopes": [str(part.slope) for part in prof.parts],
                "multiplicities": [part.multiplicity for part in prof.parts],
            })
            for i in range(orbit.size):
                tau = Embedding(o, i, mirror)
                if datum.r(datum.phi_inv(tau)) > datum.r(tau):
                    continue
                c = foliation.cascade_identity_check(datum, tau)
                ok &= c.passed
                cascades.append({"tau": [o, i, int(mirror)], "p": c.p_tau, "q": c.q_tau,
                                 "cascadeDim": c.cascade_dim, "expected": c.expected, "passed": c.passed})
        if orbit.kind == INERT:
            rep = duality_check(datum.d, datum.signatures[o], orbit, field)
            ok &= rep.passed
            duality.append({"orbit": o, "passed": rep.passed, "message": rep.message})
    payload = {
        "case": normalized,
        "dimM": report.dim_M,
        "rank": report.rank,
        "corank": report.corank,
        "dimMfol": report.dim_M_fol,
        "rVord": [{"pair": [p.orbit, p.index], "value": v} for p, v in sorted(report.r_V_ord.items())],
        "slopes": slopes,
        "cascade": cascades,
        "duality": duality,
    }
    return (EXIT_OK if ok else EXIT_FAIL), _emit_mapping(payload, fmt)


def _obstruction_str(sigma: int, tau: int) -> str:
    return f"2p[{sigma}]-2[{tau}]"


def _hasse_str(datum: hilbert.SplittingDatum, sigma: int) -> str:
    prev = datum.phi_inv(sigma)
    return f"(p-1)[{sigma}]" if prev == sigma else f"p[{prev}]-[{sigma}]"


def parse_hilbert(case: Mapping) -> tuple[hilbert.SplittingDatum, dict[str, Any]]:
    if case.get("kind") != "hilbert":
        raise CaseError("expected a hilbert case")
    p = _int(case, "p")
    sizes = case.get("orbits")
    if not isinstance(sizes, list) or not all(isinstance(s, int) and not isinstance(s, bool) for s in sizes):
        raise CaseError("'orbits' must be a list of orbit sizes")
    datum = hilbert.SplittingDatum(p, tuple(sizes))
    g = datum.g

    def sets(key: str) -> list[list[int]]:
        value = case.get(key, [])
        if not isinstance(value, list) or not all(isinstance(s, list) for s in value):
            raise CaseError(f"'{key}' must be a list of index lists")
        for s in value:
            for x in s:
                if not isinstance(x, int) or not 0 <= x < g:
                    raise CaseError(f"'{key}' entry {x!r} outside 0..{g - 1}")
        return [sorted(set(s)) for s in value]

    def weights(key: str) -> list[list[int]]:
        value = case.get(key, [])
        if not isinstance(value, list) or not all(isinstance(w, list) and len(w) == g for w in value):
            raise CaseError(f"'{key}' must be a list of length-{g} integer vectors")
        return [[int(x) for x in w] for w in value]

    normalized = {
        "kind": "hilbert",
        "p": p,
        "orbits": list(datum.orbit_sizes),
        "closedness": sets("closedness"),
        "weights": weights("weights"),
        "feasibility": weights("feasibility"),
        "go": sets("go"),
    }
    if "kappaDegree" in case:
        normalized["kappaDegree"] = _int(case, "kappaDegree")
    return datum, normalized


def cmd_hilbert(case: Mapping, fmt: str) -> tuple[int, str]:
    datum, normalized = parse_hilbert(case)
    ok = True
    closed = []
    for s in normalized["closedness"]:
        verdict = hilbert.is_p_closed(datum, s)
        entry: dict[str, Any] = {"sigma": s, "pClosed": verdict}
        if not verdict:
            entry["obstructions"] = [
                {"sigma": x, "tau": datum.phi(x),
                 "weight": list(hilbert.obstruction_weight(datum, x, datum.phi(x))),
                 "symbolic": _obstruction_str(x, datum.phi(x))}
                for x in s if datum.phi(x) not in s]
        closed.append(entry)
    hasse = hilbert.hasse_weights(datum)
    ok &= hasse.square_identity
    cones = [{"k": k, **{c: hilbert.cone_membership(datum, k, c) for c in hilbert.CONES},
              "hasseCoefficients": [str(a) for a in hilbert.hasse_coefficients(datum, k)]}
             for k in normalized["weights"]]
    feas = []
    for k in normalized["feasibility"]:
        w = hilbert.weight_feasibility(datum, k)
        feas.append({"k": k, "feasible": w is not None,
                     "witness": list(w.a) if w else None, "residue": list(w.residue) if w else None})
    go = []
    for s in normalized["go"]:
        r = hilbert.go_stratum_report(datum, s)
        ok &= r.matches
        go.append({"sigma": s, "dim": r.dim, "rank": r.rank, "match": r.matches,
                   "quotientDegree": r.quotient_degree, "thetaDegrees": list(r.theta_degrees)})
    lcm = 1
    for x in datum.orbit_sizes:
        lcm = lcm * x // gcd(lcm, x)
    degree = normalized.get("kappaDegree", lcm)
    idem: dict[str, Any]
    if degree <= MAX_DEGREE and degree % lcm == 0:
        rep = hilbert.idempotent_frobenius_check(datum, build_field(datum.p, degree))
        ok &= rep.passed
        idem = {"kappaDegree": degree, "passed": rep.passed, "perOrbit": list(rep.details)}
    else:
        idem = {"kappaDegree": degree, "skipped": True}
    payload = {
        "case": normalized,
        "g": datum.g,
        "allPClosed": all(size == 1 for size in datum.orbit_sizes),
        "hasse": [{"sigma": s, "weight": list(w), "symbolic": _hasse_str(datum, s)}
                  for s, w in sorted(hasse.hasse.items())],
        "closedness": closed,
        "cones": cones,
        "feasibility": feas,
        "go": go,
        "idempotents": idem,
    }
    return (EXIT_OK if ok else EXIT_FAIL), _emit_mapping(payload, fmt)


def cmd_verify(args: argparse.Namespace, overrides: Mapping[str, Callable] | None = None) -> tuple[int, str]:
    cfg = VerifyConfig(max_d=args.max_d, orbit_max=args.orbit_max, seed=args.seed,
                       overrides=dict(overrides or {}))
    names = args.suite or None
    results = run_suites(cfg, names)
    ok = all(r.passed for r in results)
    header = {"seed": cfg.seed, "maxD": cfg.max_d, "orbitMax": cfg.orbit_max}
    if args.format == "json":
        return (EXIT_OK if ok else EXIT_FAIL), _dump_json({
            **header,
            "passed": ok,
            "suites": [{"name": r.name, "passed": r.passed, "checked": r.checked,
                        "counterexample": r.counterexample} for r in results],
        })
    rows = [[r.name, "pass" if r.passed else "FAIL", r.checked, f"{r.seconds:.2f}"] for r in results]
    if args.format == "csv":
        return (EXIT_OK if ok else EXIT_FAIL), _csv(["suite", "status", "checked", "seconds"], rows)
    text = f"# seed={cfg.seed} max-d={cfg.max_d} orbit-max={cfg.orbit_max}\n"
    text += _table(["suite", "status", "checked", "seconds"], rows)
    for r in results:
        if not r.passed:
            text += f"\n{r.name}: first counterexample: {r.counterexample}\n"
    return (EXIT_OK if ok else EXIT_FAIL), text


# -- entry point ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shimfol", description=__doc__.splitlines()[0] if __doc__ else None)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("strata", "scan EO strata for a unitary case"),
                            ("foliation", "foliation ranks, slopes and cascade checks"),
                            ("hilbert", "Hilbert-modular weights, cones and strata")):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("case", help="path to a JSON case file")
        cmd.add_argument("--format", choices=FORMATS, default="table")
    ver = sub.add_parser("verify", help="run the oracle suites")
    ver.add_argument("--max-d", type=int, default=4)
    ver.add_argument("--orbit-max", type=int, default=3)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--suite", action="append", choices=sorted(SUITES),
                     help="run only this suite (repeatable)")
    ver.add_argument("--format", choices=FORMATS, default="table")
    return parser


def main(argv: list[str] | None = None, overrides: Mapping[str, Callable] | None = None) -> int:
    """``overrides`` replaces formulas inside the verify suites; it exists for
    negative-control tests and has no command-line switch."""
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            if args.max_d < 1 or args.orbit_max < 1:
                raise CaseError("--max-d and --orbit-max must be positive")
            code, text = cmd_verify(args, overrides)
        else:
            case = load_case(args.case)
            handler = {"strata": cmd_strata, "foliation": cmd_foliation, "hilbert": cmd_hilbert}[args.command]
            code, text = handler(case, args.format)
    except (ValueError, TypeError) as exc:
        # CaseError, DatumError and FieldError are ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except eo.CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
