"""Command-line interface: reproducible batch runs with JSONL reports.

Every reporting command writes one header line (the only place a
timestamp appears), one JSON line per result in input order, and one
summary line, so report bodies are byte-identical across runs with the
same config, seed and input.  Data commands (``enumerate``, ``random``)
write the plain family text format instead.

Exit codes: 0 all checks hold, 1 usage or input error, 2 counterexample
or failed replay (a reportable finding about an open question), 3
internal-consistency failure (a violated theorem, i.e. a bug here).

The ``UCLAB_WORKERS`` environment variable overrides any ``--workers``
flag.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from contextlib import nullcontext
from datetime import datetime, timezone

from . import __version__
from .conjectures import (
    CONJ21,
    CONJ41A,
    CONJ41B,
    Q23,
    THEOREM_BACKED,
    Verdict,
    check_conj21_all,
    check_conj21_at,
    check_conj41,
    check_doubleton_implication,
    check_frankl,
    check_reimer,
)
from .enumeration import EnumerationSpec, enumerate_union_closed, random_union_closed
from .errors import InputError, InternalConsistencyError
from .families import SetFamily, fingerprint, is_separating, separating_quotient
from .partition import (
    build_partition,
    check_conj35_on_family,
    corollary34_violations,
    sequence_conj35_ok,
    sequence_corollary34_ok,
    sequence_frankl_ok,
    verify_block_unions,
)
from .textio import (
    family_to_text,
    member_from_text,
    member_to_text,
    read_families,
    read_multifamilies,
    write_families,
)
from .witness import (
    WitnessCertificate,
    chain_length,
    construct_witness_chain_with_trace,
    solve_q23,
    verify_chain,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_COUNTEREXAMPLE = 2
EXIT_INTERNAL = 3

CHECKS_WITH_PRECONDITIONS = ("frankl", "c21", "c25", "reimer", "c41a", "c41b", "c35")


def _worker_count(args) -> int:
    env = os.environ.get("UCLAB_WORKERS")
    if env is not None:
        try:
            n = int(env)
        except ValueError as exc:
            raise InputError(f"UCLAB_WORKERS={env!r} is not an integer") from exc
    else:
        n = getattr(args, "workers", 1)
    if n < 1:
        raise InputError("worker count must be at least 1")
    return n


def _out_stream(path: str | None):
    if path is None:
        return nullcontext(sys.stdout)
    return open(path, "w", encoding="utf-8")


def _config_echo(args, keys: list[str]) -> dict:
    return {k: getattr(args, k) for k in sorted(keys)}


def _write_report(out, command: str, config: dict, body: list[str], summary: dict) -> None:
    header = {
        "tool": "uclab",
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "command": command,
        "config": config,
    }
    out.write(json.dumps(header) + "\n")
    for line in body:
        out.write(line + "\n")
    out.write(json.dumps({"summary": summary}) + "\n")


# ---------------------------------------------------------------- check --


def _verdicts_for_family(fam: SetFamily, conjecture: str, opts: dict) -> list[Verdict]:
    if conjecture == "frankl":
        return [check_frankl(fam)]
    if conjecture == "c21":
        return check_conj21_all(fam)
    if conjecture == "c25":
        return [check_doubleton_implication(fam)]
    if conjecture == "reimer":
        return [check_reimer(fam)]
    if conjecture in ("c41a", "c41b"):
        variant = conjecture[-1]
        if opts.get("quotient") and not is_separating(fam):
            original = fingerprint(fam)
            verdict = check_conj41(separating_quotient(fam), variant)
            detail = {**verdict.detail, "quotiented": True, "original_fingerprint": original}
            return [dataclasses.replace(verdict, detail=detail)]
        return [check_conj41(fam, variant)]
    if conjecture == "c35":
        return [check_conj35_on_family(fam, opts.get("tie_break_policy", "both"))]
    raise InputError(f"unknown conjecture {conjecture!r}")


def _classify(verdict: Verdict) -> str:
    """ok | counterexample | internal, per the proven/open split."""
    if verdict.holds:
        return "ok"
    if verdict.conjecture in THEOREM_BACKED:
        return "internal"
    if verdict.conjecture == CONJ21:
        x = verdict.detail.get("x")
        n = verdict.detail.get("n")
        if x is not None and n is not None and x <= chain_length(n):
            return "internal"  # inside the proven range
    return "counterexample"


def _check_payload(payload) -> list[tuple[str, str, str]]:
    universe, members, conjecture, opts = payload
    fam = SetFamily(universe, tuple(members))
    out = []
    for v in _verdicts_for_family(fam, conjecture, opts):
        out.append((v.to_json(), _classify(v), v.conjecture))
    return out


def cmd_check(args) -> int:
    families = read_families(args.input)
    opts = {"quotient": args.quotient, "tie_break_policy": args.tie_break_policy}
    payloads = [(f.universe, f.members, args.conjecture, opts) for f in families]
    workers = _worker_count(args)
    pool = None
    if workers == 1:
        results_iter = map(_check_payload, payloads)
    else:
        import multiprocessing

        pool = multiprocessing.Pool(workers)
        results_iter = pool.imap(_check_payload, payloads)

    body: list[str] = []
    tally: dict[str, dict[str, int]] = {}
    counterexamples = 0
    internal = 0
    done = 0
    try:
        for results in results_iter:
            done += 1
            for line, outcome, conj in results:
                body.append(line)
                rec = tally.setdefault(conj, {"holds": 0, "fails": 0})
                if outcome == "ok":
                    rec["holds"] += 1
                else:
                    rec["fails"] += 1
                    if outcome == "internal":
                        internal += 1
                    else:
                        counterexamples += 1
                        print(
                            f"uclab: counterexample candidate at family {done}: {line}",
                            file=sys.stderr,
                        )
    except InputError as exc:
        raise InputError(f"family {done + 1}: {exc}") from exc
    finally:
        if pool is not None:
            pool.close()
            pool.join()

    summary = {
        "families": len(families),
        "verdicts": len(body),
        "per_conjecture": tally,
        "counterexamples": counterexamples,
        "internal_failures": internal,
    }
    config = _config_echo(args, ["conjecture", "input", "quotient", "tie_break_policy"])
    with _out_stream(args.out) as out:
        _write_report(out, "check", config, body, summary)
    if internal:
        return EXIT_INTERNAL
    if counterexamples:
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


# ------------------------------------------------------------ enumerate --


def cmd_enumerate(args) -> int:
    spec = EnumerationSpec(n=args.n, exclude_empty_member=args.no_empty_member)
    stream = enumerate_union_closed(
        spec, workers=_worker_count(args), checkpoint_path=args.checkpoint
    )
    if args.count_only:
        print(sum(1 for _ in stream))
        return EXIT_OK
    with _out_stream(args.out) as out:
        count = 0
        out.write(f"#universe {spec.n}\n")
        for fam in stream:
            out.write(family_to_text(fam) + "\n")
            count += 1
    print(f"uclab: enumerated {count} families (n={spec.n})", file=sys.stderr)
    return EXIT_OK


# ------------------------------------------------------------ partition --


def cmd_partition(args) -> int:
    families = read_families(args.input)
    body: list[str] = []
    counterexamples = 0
    internal = 0
    for fam in families:
        part = build_partition(fam, tie_break=args.tie_break)
        sizes = list(part.sizes)
        frankl_ok = sequence_frankl_ok(sizes)
        conj35_ok = sequence_conj35_ok(sizes)
        coro34_ok = sequence_corollary34_ok(sizes)
        body.append(
            json.dumps(
                {
                    "fingerprint": fingerprint(fam),
                    "labels": list(part.labels),
                    "sizes": sizes,
                    "frankl_ok": frankl_ok,
                    "conj35_ok": conj35_ok,
                    "corollary34_ok": coro34_ok,
                }
            )
        )
        empty_free = 0 not in fam.member_set
        if not frankl_ok or not coro34_ok or (empty_free and not conj35_ok):
            counterexamples += 1
        if args.verify is not None:
            verdict = verify_block_unions(fam, part, mode=args.verify, seed=args.seed)
            detail = {**verdict.detail, "tie_break": args.tie_break, "seed": args.seed}
            verdict = dataclasses.replace(verdict, detail=detail)
            body.append(verdict.to_json())
            if not verdict.holds:
                internal += 1
    summary = {
        "families": len(families),
        "counterexamples": counterexamples,
        "internal_failures": internal,
    }
    config = _config_echo(args, ["input", "tie_break", "verify", "seed"])
    with _out_stream(args.out) as out:
        _write_report(out, "partition", config, body, summary)
    if internal:
        return EXIT_INTERNAL
    if counterexamples:
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


# -------------------------------------------------------------- witness --


def _cert_to_json(fp: str, cert: WitnessCertificate) -> str:
    def opt_mask(m: int | None) -> str | None:
        return None if m is None else member_to_text(m)

    return json.dumps(
        {
            "fingerprint": fp,
            "x": cert.x,
            "branch": cert.branch,
            "c_set": member_to_text(cert.c_set),
            "counts": list(cert.counts),
            "y_prime": cert.y_prime,
            "z_family": None
            if cert.z_family is None
            else [member_to_text(z) for z in cert.z_family],
            "z_union": opt_mask(cert.z_union),
            "v_set": opt_mask(cert.v_set),
            "f_union": opt_mask(cert.f_union),
            "d_set": opt_mask(cert.d_set),
        }
    )


def _trace_to_json(fp: str, trace: dict) -> str:
    rendered: dict = {"fingerprint": fp, "trace_x": trace["x"], "branch": trace["branch"]}
    if "y_prime" in trace:
        rendered["y_prime"] = trace["y_prime"]
    if "p_family" in trace:
        rendered["p_family"] = [member_to_text(p) for p in trace["p_family"]]
        rendered["p_union"] = member_to_text(trace["p_union"])
        rendered["z_for"] = {str(w): member_to_text(z) for w, z in trace["z_for"].items()}
        rendered["z_family"] = [member_to_text(z) for z in trace["z_family"]]
        rendered["v_choices"] = {
            str(v): member_to_text(p) for v, p in trace["v_choices"].items()
        }
    return json.dumps(rendered)


def cmd_witness(args) -> int:
    families = read_families(args.input)
    body: list[str] = []
    internal = 0
    chains = 0
    for fam in families:
        fp = fingerprint(fam)
        try:
            certs, traces = construct_witness_chain_with_trace(fam)
        except InternalConsistencyError as exc:
            internal += 1
            body.append(
                json.dumps(
                    {
                        "fingerprint": fp,
                        "error": "internal_consistency",
                        "message": str(exc),
                        "trace": _render_trace(exc.trace),
                    }
                )
            )
            continue
        check = verify_chain(fam, certs)
        if not check:
            internal += 1
            body.append(
                json.dumps(
                    {"fingerprint": fp, "error": "chain_verification", "reason": check.reason}
                )
            )
            continue
        chains += 1
        for cert, trace in zip(certs, traces):
            body.append(_cert_to_json(fp, cert))
            if args.trace:
                body.append(_trace_to_json(fp, trace))
    summary = {"families": len(families), "chains": chains, "internal_failures": internal}
    config = _config_echo(args, ["input", "trace"])
    with _out_stream(args.out) as out:
        _write_report(out, "witness", config, body, summary)
    return EXIT_INTERNAL if internal else EXIT_OK


def _render_trace(trace: dict) -> dict:
    out = {}
    for key, value in trace.items():
        if isinstance(value, int) and key not in ("x", "n", "y_prime", "v"):
            out[key] = member_to_text(value)
        elif isinstance(value, (list, tuple)):
            out[key] = [member_to_text(v) if isinstance(v, int) else v for v in value]
        else:
            out[key] = value
    return out


# ------------------------------------------------------------------ q23 --


def cmd_q23(args) -> int:
    multis = read_multifamilies(args.input)
    body: list[str] = []
    missing = 0
    for mf in multis:
        solution = solve_q23(mf, max_members=args.max_members)
        fp = fingerprint(mf)
        if solution is None:
            missing += 1
            body.append(
                json.dumps(
                    {
                        "conjecture": Q23,
                        "fingerprint": fp,
                        "holds": False,
                        "witness": None,
                        "detail": {"members": len(mf.members), "note": "no sub-multiset found"},
                    }
                )
            )
            print(
                "uclab: research finding: no balancing sub-multiset exists for "
                f"family {fp}",
                file=sys.stderr,
            )
        else:
            body.append(
                json.dumps(
                    {
                        "conjecture": Q23,
                        "fingerprint": fp,
                        "holds": True,
                        "witness": " ".join(
                            member_to_text(m) for m in solution.members(mf)
                        ),
                        "detail": {
                            "indices": list(solution.indices),
                            "union": member_to_text(solution.union_mask),
                            "union_size": solution.union_size,
                        },
                    }
                )
            )
    summary = {"families": len(multis), "without_solution": missing}
    config = _config_echo(args, ["input", "max_members"])
    with _out_stream(args.out) as out:
        _write_report(out, "q23", config, body, summary)
    return EXIT_COUNTEREXAMPLE if missing else EXIT_OK


# --------------------------------------------------------------- random --


def cmd_random(args) -> int:
    fams = [
        random_union_closed(args.n, args.density, args.seed + i)
        for i in range(args.count)
    ]
    with _out_stream(args.out) as out:
        write_families(out, fams, universe_size=args.n)
    print(f"uclab: wrote {len(fams)} random union-closed families", file=sys.stderr)
    return EXIT_OK


# --------------------------------------------------------------- replay --


def _cert_from_json(obj: dict) -> WitnessCertificate:
    def opt_mask(value: str | None) -> int | None:
        return None if value is None else member_from_text(value)

    return WitnessCertificate(
        x=obj["x"],
        c_set=member_from_text(obj["c_set"]),
        branch=obj["branch"],
        counts=tuple(obj["counts"]),
        y_prime=obj.get("y_prime"),
        z_family=None
        if obj.get("z_family") is None
        else tuple(member_from_text(z) for z in obj["z_family"]),
        z_union=opt_mask(obj.get("z_union")),
        v_set=opt_mask(obj.get("v_set")),
        f_union=opt_mask(obj.get("f_union")),
        d_set=opt_mask(obj.get("d_set")),
    )


def _replay_verdict(obj: dict, fam_by_fp: dict, multi_by_fp: dict) -> tuple[bool, str]:
    conj = obj["conjecture"]
    fp = obj["fingerprint"]
    detail = obj.get("detail", {})
    if conj == Q23:
        mf = multi_by_fp.get(fp)
        if mf is None:
            return False, "no multi-family with this fingerprint"
        solution = solve_q23(mf)
        holds = solution is not None
        return holds == obj["holds"], "recomputed q23 outcome differs"
    fam = fam_by_fp.get(fp)
    if fam is None:
        return False, "no family with this fingerprint"
    if conj == "frankl":
        new = check_frankl(fam)
    elif conj == CONJ21:
        new = check_conj21_at(fam, detail["x"])
    elif conj == "c25":
        new = check_doubleton_implication(fam)
    elif conj == "reimer":
        new = check_reimer(fam)
    elif conj in (CONJ41A, CONJ41B):
        new = check_conj41(fam, conj[-1])
    elif conj == "c35":
        new = check_conj35_on_family(fam, detail.get("policy", "both"))
    elif conj == "t33":
        part = build_partition(fam, tie_break=detail.get("tie_break", "min"))
        new = verify_block_unions(
            fam, part, mode=detail.get("mode", "exhaustive"), seed=detail.get("seed", 0)
        )
    else:
        return False, f"unknown conjecture {conj!r}"
    if new.holds != obj["holds"]:
        return False, "recomputed holds differs"
    if new.witness != obj.get("witness"):
        return False, "recomputed witness differs"
    return True, ""


def cmd_replay(args) -> int:
    families = read_families(args.family)
    fam_by_fp = {fingerprint(f): f for f in families}
    multi_by_fp = {fingerprint(mf): mf for mf in read_multifamilies(args.family)}

    cert_groups: dict[str, list[WitnessCertificate]] = {}
    verdict_objs: list[dict] = []
    with open(args.certificates, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"{args.certificates}:{line_no}: bad JSON: {exc}") from exc
            if "branch" in obj:
                cert_groups.setdefault(obj["fingerprint"], []).append(_cert_from_json(obj))
            elif "conjecture" in obj:
                verdict_objs.append(obj)
            elif "summary" in obj or obj.get("tool") == "uclab" or "trace_x" in obj:
                continue  # report plumbing lines are not replayable payloads
            else:
                raise InputError(
                    f"{args.certificates}:{line_no}: neither certificate nor verdict"
                )

    body: list[str] = []
    failures = 0
    for fp, certs in cert_groups.items():
        fam = fam_by_fp.get(fp)
        if fam is None:
            failures += 1
            body.append(
                json.dumps(
                    {
                        "replay": "chain",
                        "ok": False,
                        "certificate_fingerprint": fp,
                        "family_fingerprints": sorted(fam_by_fp),
                        "reason": "fingerprint mismatch",
                    }
                )
            )
            continue
        certs = sorted(certs, key=lambda c: c.x)
        res = verify_chain(fam, certs)
        if not res:
            failures += 1
        body.append(
            json.dumps(
                {
                    "replay": "chain",
                    "ok": bool(res),
                    "fingerprint": fp,
                    "certificates": len(certs),
                    "reason": res.reason,
                }
            )
        )
    for obj in verdict_objs:
        ok, reason = _replay_verdict(obj, fam_by_fp, multi_by_fp)
        if not ok:
            failures += 1
        body.append(
            json.dumps(
                {
                    "replay": "verdict",
                    "ok": ok,
                    "fingerprint": obj["fingerprint"],
                    "conjecture": obj["conjecture"],
                    "reason": None if ok else reason,
                }
            )
        )

    summary = {
        "chains": len(cert_groups),
        "verdicts": len(verdict_objs),
        "failures": failures,
    }
    config = _config_echo(args, ["certificates", "family"])
    with _out_stream(args.out) as out:
        _write_report(out, "replay", config, body, summary)
    return EXIT_COUNTEREXAMPLE if failures else EXIT_OK


# ------------------------------------------------------------- sequence --


def _parse_sizes(text: str) -> list[int]:
    parts = [p for p in text.replace(",", " ").split() if p]
    if not parts:
        raise InputError("empty size sequence")
    try:
        sizes = [int(p) for p in parts]
    except ValueError as exc:
        raise InputError(f"bad size sequence {text!r}") from exc
    return sizes


def cmd_sequence(args) -> int:
    rows: list[list[int]] = [_parse_sizes(row) for row in args.sizes]
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line and not line.startswith("#"):
                    rows.append(_parse_sizes(line))
    if not rows:
        raise InputError("no size sequences given (positional rows or --input)")
    body = []
    for sizes in rows:
        body.append(
            json.dumps(
                {
                    "sizes": sizes,
                    "frankl_ok": sequence_frankl_ok(sizes),
                    "conj35_ok": sequence_conj35_ok(sizes),
                    "corollary34_ok": sequence_corollary34_ok(sizes),
                    "corollary34_violations": [
                        list(v) for v in corollary34_violations(sizes)
                    ],
                }
            )
        )
    summary = {"rows": len(rows)}
    config = _config_echo(args, ["sizes", "input"])
    with _out_stream(args.out) as out:
        _write_report(out, "sequence", config, body, summary)
    return EXIT_OK


# -------------------------------------------------------------- parsing --


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uclab",
        description="verify, search and certify union-closed family conjectures",
    )
    parser.add_argument("--version", action="version", version=f"uclab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run a conjecture check over a family file")
    p.add_argument("--conjecture", required=True, choices=CHECKS_WITH_PRECONDITIONS)
    p.add_argument("--input", required=True, help="family text file")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument(
        "--quotient",
        action="store_true",
        help="for c41a/c41b: collapse indistinguishable elements first",
    )
    p.add_argument(
        "--tie-break-policy",
        dest="tie_break_policy",
        choices=["all_min", "all_max", "both"],
        default="both",
        help="for c35: which peeling tie-breaks to test",
    )
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("enumerate", help="exhaustively enumerate union-closed families")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--no-empty-member", dest="no_empty_member", action="store_true")
    p.add_argument("--count-only", dest="count_only", action="store_true")
    p.add_argument("--out", default=None)
    p.add_argument("--checkpoint", default=None, help="plain-text resume file")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("partition", help="greedy max-frequency partitions")
    p.add_argument("--input", required=True)
    p.add_argument("--tie-break", dest="tie_break", choices=["min", "max"], default="min")
    p.add_argument("--verify", choices=["exhaustive", "sampled"], default=None)
    p.add_argument("--seed", type=int, default=0, help="seed for sampled verification")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_partition)

    p = sub.add_parser("witness", help="build and verify witness chains")
    p.add_argument("--input", required=True)
    p.add_argument("--trace", action="store_true", help="dump per-step intermediates")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_witness)

    p = sub.add_parser("q23", help="search for balancing sub-multisets")
    p.add_argument("--input", required=True)
    p.add_argument("--max-members", dest="max_members", type=int, default=24)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_q23)

    p = sub.add_parser("random", help="generate seeded random union-closed families")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--density", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_random)

    p = sub.add_parser("replay", help="re-verify certificates and verdicts")
    p.add_argument("--certificates", required=True)
    p.add_argument("--family", required=True, help="family text file to check against")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_replay)

    p = sub.add_parser("sequence", help="size-sequence permissibility checks")
    p.add_argument("sizes", nargs="*", help="rows like 100,50,25,12,5")
    p.add_argument("--input", default=None, help="file with one size row per line")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_sequence)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except InputError as exc:
        print(f"uclab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalConsistencyError as exc:
        print(f"uclab: internal consistency failure: {exc}", file=sys.stderr)
        print(json.dumps({"trace": _render_trace(exc.trace)}), file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
