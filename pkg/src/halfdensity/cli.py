"""Command-line entry point wiring all modules.

Subcommands: sample, trivialize, verify-dist, pigeonhole, diagrams,
conditions, phase-map, plus rerun (re-execute a recorded manifest).  Every
output file embeds the digest of its manifest, and every run writes
<out>.manifest.json next to its output.  Randomized runs with no --seed draw
one from the OS and record it; there is deliberately no environment-variable
seed fallback.  Exit codes: 0 success, 1 domain error, 2 usage error.

Each command parses argv into a flat "recorded" parameter dict and then
executes from that dict alone, so rerun reproduces outputs byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import secrets
import sys
import time
from fractions import Fraction

from . import __version__, diagrams, distribution, pigeonhole, thresholds, trivializer, words
from .manifest import RunManifest, manifest_digest, now_utc
from .rng import RandomSource


class CliError(ValueError):
    """Domain-level failure reported with exit code 1."""


# ---------------------------------------------------------------------------
# small parsers


def parse_rate_expr(spec: str) -> thresholds.RateFunction:
    """Rate-function syntax for --f-expr / --k-expr / --K-expr.

    Accepted: 'zero', 'trivial-threshold', 'hyperbolic-threshold', 'threshold-k',
    'window-K[:cprime=C]', 'delta-K', 'const:V', and
    'family:alpha=A,beta=B,c0=C' with rational A, B.
    """
    name, _, argstr = spec.partition(":")
    kwargs = {}
    if argstr and name != "const":
        for part in argstr.split(","):
            key, _, val = part.partition("=")
            if not val:
                raise CliError(f"malformed rate expression argument {part!r}")
            kwargs[key.strip()] = val.strip()
    try:
        if name == "zero":
            return thresholds.zero_rate()
        if name == "trivial-threshold":
            return thresholds.trivial_threshold_f()
        if name == "hyperbolic-threshold":
            return thresholds.hyperbolic_threshold_f()
        if name == "threshold-k":
            return thresholds.threshold_head_k()
        if name == "window-K":
            return thresholds.hyperbolic_window_K(Fraction(kwargs.get("cprime", "1")))
        if name == "delta-K":
            return thresholds.delta_hyperbolic_window_K()
        if name == "const":
            return thresholds.constant_rate(Fraction(argstr))
        if name == "family":
            return thresholds.family(
                Fraction(kwargs["alpha"]),
                Fraction(kwargs["beta"]),
                float(kwargs.get("c0", 1.0)),
            )
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        raise CliError(f"cannot parse rate expression {spec!r}: {exc}") from None
    raise CliError(f"unknown rate expression {spec!r}")


def parse_ell_grid(spec: str) -> list:
    """Either 'pow2:LO:HI' for powers of two or a comma list of integers."""
    if spec.startswith("pow2:"):
        try:
            _, lo, hi = spec.split(":")
            lo_i, hi_i = int(lo), int(hi)
        except ValueError:
            raise CliError(f"malformed ell grid {spec!r}") from None
        if not 0 <= lo_i <= hi_i:
            raise CliError(f"malformed ell grid {spec!r}")
        return [2**j for j in range(lo_i, hi_i + 1)]
    try:
        grid = [int(p) for p in spec.split(",") if p]
    except ValueError:
        raise CliError(f"malformed ell grid {spec!r}") from None
    if not grid:
        raise CliError(f"empty ell grid {spec!r}")
    return grid


def parse_grid_range(spec: str) -> list:
    try:
        start, stop, step = spec.split(":")
        return thresholds.grid_range(Fraction(start), Fraction(stop), Fraction(step))
    except (ValueError, ZeroDivisionError):
        raise CliError(f"malformed grid range {spec!r}; expected start:stop:step") from None


def _model_recorded(args) -> dict:
    """Materialize ModelParams from --density/--f-expr/--num into a recorded dict."""
    chosen = [n for n in ("density", "f_expr", "num") if getattr(args, n) is not None]
    if len(chosen) != 1:
        raise CliError("exactly one of --density, --f-expr, --num is required")
    if args.num is not None:
        params = words.ModelParams(args.m, args.ell, args.num)
        spec = {"num_spec": "explicit"}
    elif args.density is not None:
        params = words.ModelParams.from_density(args.m, args.ell, args.density)
        spec = {"num_spec": "density", "density_arg": args.density}
    else:
        f_val = parse_rate_expr(args.f_expr).evaluate(args.ell, args.m)
        params = words.ModelParams.from_f(args.m, args.ell, f_val)
        spec = {"num_spec": "f-expr", "f_expr": args.f_expr, "f_value": f_val}
    return {"m": params.m, "ell": params.ell, "num": params.num,
            "density": params.density, "f": params.f, **spec}


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    return secrets.randbits(63)


# ---------------------------------------------------------------------------
# output helpers


def _write_manifest(subcommand, recorded, seed, outputs, threads, t0) -> None:
    man = RunManifest(
        subcommand=subcommand,
        params=recorded,
        seed=seed,
        threads=threads,
        outputs=[str(p) for p in outputs],
        tool_version=__version__,
        created_utc=now_utc(),
        wall_clock_s=round(time.monotonic() - t0, 6),
    )
    man.write(str(outputs[0]) + ".manifest.json")


def _json_out(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _csv_out(path: str, digest: str, header: list, rows: list, preamble=()) -> None:
    buf = io.StringIO()
    buf.write("# format_version=1\n")
    buf.write(f"# manifest_digest={digest}\n")
    for line in preamble:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


# ---------------------------------------------------------------------------
# executors: run purely from (recorded params, seed, out)


def _exec_sample(recorded, seed, out, threads=1) -> str:
    params = words.ModelParams(recorded["m"], recorded["ell"], recorded["num"])
    digest = manifest_digest("sample", recorded, seed)
    pres = words.sample_presentation(params, RandomSource(seed).child(0),
                                     max_letters=recorded["max_letters"])
    text = words.presentation_to_text(pres)
    lines = text.split("\n")
    lines.insert(1, f"# manifest_digest={digest}")
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines))
    return f"sample: wrote {params.num} relators to {out}"


def _exec_trivialize(recorded, seed, out, threads=1, log=None) -> str:
    params = words.ModelParams(recorded["m"], recorded["ell"], recorded["num"])
    cfg = trivializer.TrivializerConfig(
        m=params.m, ell=params.ell, k=recorded["k"], max_rounds=recorded["max_rounds"]
    )
    digest = manifest_digest("trivialize", recorded, seed)
    pres = words.sample_presentation(params, RandomSource(seed).child(0),
                                     max_letters=recorded["max_letters"])
    verdict = trivializer.trivialize(pres, cfg)
    payload = {
        "format_version": 1,
        "manifest_digest": digest,
        "seed": seed,
        "model": {k: recorded[k] for k in ("m", "ell", "num", "density", "f")},
        **verdict.to_json_dict(),
    }
    _json_out(out, payload)
    if log:
        with open(log, "w", encoding="utf-8") as fh:
            fh.write(f"# manifest_digest={digest}\n")
            for cert in verdict.certificates:
                fh.write(cert.describe() + "\n\n")
    return (f"trivialize: outcome={verdict.outcome} "
            f"certificates={len(verdict.certificates)} -> {out}")


def _exec_verify_dist(recorded, seed, out, threads=1) -> str:
    m, n, samples = recorded["m"], recorded["n"], recorded["samples"]
    digest = manifest_digest("verify-dist", recorded, seed)
    counts = distribution.sample_relation_counts(m, n, samples,
                                                 RandomSource(seed).child(0))
    exact = distribution.relation_totals(m, n)
    oracle = distribution.letter_law_oracle(m, n)
    oracle_totals = {"same": oracle["same"], "inverse": oracle["inverse"],
                     "other": (2 * m - 2) * oracle["other"]}
    rows = []
    for rel in ("same", "inverse", "other"):
        p = float(exact[rel])
        emp = counts[rel] / samples
        se = (p * (1 - p) / samples) ** 0.5
        z = (emp - p) / se if se else 0.0
        rows.append([rel, str(exact[rel]), str(oracle_totals[rel]),
                     f"{emp:.8f}", f"{z:+.4f}"])
    _csv_out(out, digest, ["relation", "exact", "oracle", "empirical", "zscore"], rows)
    return f"verify-dist: m={m} n={n} -> {out}"


def _exec_pigeonhole(recorded, seed, out, threads=1) -> str:
    digest = manifest_digest("pigeonhole", recorded, seed)
    c = Fraction(recorded["c"]) if recorded["c"] else None
    maker = (pigeonhole.PigeonholeConfig.uniform if recorded["mu"] == "uniform"
             else pigeonhole.PigeonholeConfig.geometric)
    cfg = maker(recorded["n"], recorded["q"], recorded["z"], c)
    result = pigeonhole.coincidence_simulate(cfg, recorded["trials"],
                                             RandomSource(seed).child(0), threads=threads)
    bound = pigeonhole.coincidence_bound(cfg) if cfg.hypothesis_met else None
    try:
        exact = pigeonhole.coincidence_exact(cfg, max_outcomes=recorded["exact_budget"])
        exact_str = str(exact)
    except words.ResourceLimitError:
        exact_str = None
    payload = {
        "format_version": 1,
        "manifest_digest": digest,
        "seed": seed,
        "n": cfg.n, "q": cfg.q, "z": cfg.z, "mu": recorded["mu"], "c": str(cfg.c),
        "hypothesis_met": cfg.hypothesis_met,
        "trials": recorded["trials"],
        "estimate": result.estimate,
        "stderr": result.stderr,
        "bound": bound,
        "exact": exact_str,
    }
    _json_out(out, payload)
    return f"pigeonhole: estimate={result.estimate:.6f} bound={bound} -> {out}"


def _exec_diagrams(recorded, seed, out, threads=1) -> str:
    sub = recorded["diagram_cmd"]
    if sub == "census":
        digest = manifest_digest("diagrams", recorded, seed)
        rows = [[n, diagrams.tutte_count(n), diagrams.enumerate_rooted_maps(n)]
                for n in range(1, recorded["max_n"] + 1)]
        _csv_out(out, digest, ["n", "count", "oracle_count"], rows)
        return f"diagrams census: n <= {recorded['max_n']} -> {out}"
    if sub == "tutte":
        payload = {"n": recorded["n"], "tutte_count": diagrams.tutte_count(recorded["n"])}
        if recorded["with_census"]:
            payload["census_count"] = diagrams.enumerate_rooted_maps(recorded["n"])
    elif sub == "bound":
        b = diagrams.log_diagram_bound(recorded["faces"], recorded["ell"], recorded["m"])
        payload = {"faces": recorded["faces"], "ell": recorded["ell"], "m": recorded["m"],
                   "log_bound": b.log_bound, "asymptotic": b.asymptotic}
    elif sub == "fulfill":
        stats = diagrams.DiagramStats(recorded["faces"], recorded["boundary"],
                                      recorded["ell"])
        params = words.ModelParams.from_density(recorded["m"], recorded["ell"],
                                                recorded["density"])
        payload = {"faces": recorded["faces"], "boundary": recorded["boundary"],
                   "ell": recorded["ell"], "m": recorded["m"],
                   "density": recorded["density"], "num": params.num,
                   "exponent": diagrams.fulfillability_bound(stats, params)}
    else:
        raise CliError(f"unknown diagrams subcommand {sub!r}")
    digest = manifest_digest("diagrams", recorded, seed)
    payload = {"format_version": 1, "manifest_digest": digest, **payload}
    if out:
        _json_out(out, payload)
        return f"diagrams {sub}: -> {out}"
    return json.dumps(payload, sort_keys=True, indent=2)


def _exec_conditions(recorded, seed, out, threads=1) -> str:
    grid = parse_ell_grid(recorded["ell_grid"])
    m = recorded["m"]
    which = recorded["which"]
    f = parse_rate_expr(recorded["f_expr"]) if recorded["f_expr"] else None
    if which == "star":
        if not recorded["k_expr"] or f is None:
            raise CliError("star needs --k-expr and --f-expr")
        report = thresholds.star_condition(parse_rate_expr(recorded["k_expr"]), f, grid, m)
    elif which == "spade":
        if not recorded["k_expr"]:
            raise CliError("spade needs --k-expr")
        report = thresholds.spade_condition(parse_rate_expr(recorded["k_expr"]), m, grid)
    elif which == "asterisk":
        if not recorded["K_expr"] or f is None:
            raise CliError("asterisk needs --K-expr and --f-expr")
        report = thresholds.asterisk_condition(parse_rate_expr(recorded["K_expr"]),
                                               f, grid, m)
    else:
        raise CliError(f"unknown condition {which!r}")
    digest = manifest_digest("conditions", recorded, seed)
    preamble = [f"condition={report.condition}", f"verdict={report.verdict}"]
    if report.symbolic is not None:
        preamble.append(f"symbolic={report.symbolic!r}")
    rows = [[ell, f"{val:.12g}"] for ell, val in report.trace]
    _csv_out(out, digest, ["ell", "value"], rows, preamble)
    return f"conditions: {report.condition} verdict={report.verdict} -> {out}"


def _exec_phase_map(recorded, seed, out, threads=1) -> str:
    alphas = parse_grid_range(recorded["alpha"])
    betas = parse_grid_range(recorded["beta"])
    digest = manifest_digest("phase-map", recorded, seed)
    cells = thresholds.phase_map(alphas, betas, recorded["coeff"])
    rows = [[f"{float(c.alpha):.6g}", f"{float(c.beta):.6g}", c.outcome, c.clause]
            for c in cells]
    _csv_out(out, digest, ["alpha", "beta", "verdict", "clause"], rows)
    counts: dict = {}
    for c in cells:
        counts[c.outcome] = counts.get(c.outcome, 0) + 1
    return f"phase-map: {counts} -> {out}"


_EXECUTORS = {
    "sample": _exec_sample,
    "trivialize": _exec_trivialize,
    "verify-dist": _exec_verify_dist,
    "pigeonhole": _exec_pigeonhole,
    "diagrams": _exec_diagrams,
    "conditions": _exec_conditions,
    "phase-map": _exec_phase_map,
}


def _run(subcommand, recorded, seed, out, threads=1, **kw) -> int:
    t0 = time.monotonic()
    message = _EXECUTORS[subcommand](recorded, seed, out, threads=threads, **kw)
    if out:
        outputs = [out] + ([kw["log"]] if kw.get("log") else [])
        _write_manifest(subcommand, recorded, seed, outputs, threads, t0)
    print(message)
    return 0


# ---------------------------------------------------------------------------
# argv handling


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m", type=int, required=True, help="generator count (>= 2)")
    p.add_argument("--ell", type=int, required=True, help="relator length")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--density", type=float, help="generalized density D")
    g.add_argument("--f-expr", dest="f_expr", help="rate expression for f; D = 1/2 - f(ell)")
    g.add_argument("--num", type=int, help="explicit relator count")
    p.add_argument("--max-letters", type=int, default=words.DEFAULT_MAX_LETTERS,
                   help="sampling memory budget in letters")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="halfdensity",
        description="Random group presentations at density one-half.",
    )
    top.add_argument("--version", action="version", version=f"halfdensity {__version__}")
    sub = top.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("sample", help="sample a presentation to a text file")
    _add_model_args(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)

    p = sub.add_parser("trivialize", help="run the triviality pipeline")
    _add_model_args(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--k-override", dest="k_override", type=int)
    p.add_argument("--max-rounds", dest="max_rounds", type=int, default=1)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--log", help="also write a human-readable derivation log")

    p = sub.add_parser("verify-dist", help="letter-distribution table as CSV")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)

    p = sub.add_parser("pigeonhole", help="coincidence simulation vs bound as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--mu", choices=("uniform", "geometric"), default="uniform")
    p.add_argument("--c", help="bound constant as a fraction, default 2^-(q+2)")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--exact-budget", dest="exact_budget", type=int, default=1 << 16,
                   help="max outcomes for the exact enumeration (else omitted)")
    p.add_argument("--out", required=True)

    p = sub.add_parser("diagrams", help="diagram counting and bounds")
    dsub = p.add_subparsers(dest="diagram_cmd", required=True)
    d = dsub.add_parser("tutte")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--with-census", dest="with_census", action="store_true")
    d.add_argument("--out")
    d = dsub.add_parser("bound")
    d.add_argument("--faces", type=int, required=True)
    d.add_argument("--ell", type=int, required=True)
    d.add_argument("--m", type=int, default=2)
    d.add_argument("--out")
    d = dsub.add_parser("fulfill")
    d.add_argument("--faces", type=int, required=True)
    d.add_argument("--boundary", type=int, required=True)
    d.add_argument("--ell", type=int, required=True)
    d.add_argument("--density", type=float, required=True)
    d.add_argument("--m", type=int, default=2)
    d.add_argument("--out")
    d = dsub.add_parser("census")
    d.add_argument("--max-n", dest="max_n", type=int, default=3)
    d.add_argument("--out", required=True)

    p = sub.add_parser("conditions", help="condition traces as CSV")
    p.add_argument("--which", choices=("star", "spade", "asterisk"), required=True)
    p.add_argument("--k-expr", dest="k_expr")
    p.add_argument("--K-expr", dest="K_expr")
    p.add_argument("--f-expr", dest="f_expr")
    p.add_argument("--ell-grid", dest="ell_grid", default="pow2:10:40")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--out", required=True)

    p = sub.add_parser("phase-map", help="classify the (alpha, beta) grid to CSV")
    p.add_argument("--alpha", default="0:1.5:0.05")
    p.add_argument("--beta", default="-1:2:0.05")
    p.add_argument("--coeff", type=float, default=1.0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("rerun", help="re-execute a recorded manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=1)

    return top


def _merge_dash_values(argv: list) -> list:
    """Join option values that start with '-' (e.g. --beta -1:2:0.05)."""
    out = []
    skip = False
    for i, a in enumerate(argv):
        if skip:
            skip = False
            continue
        if (a in ("--beta", "--alpha") and i + 1 < len(argv)
                and argv[i + 1].startswith("-")):
            out.append(f"{a}={argv[i + 1]}")
            skip = True
        else:
            out.append(a)
    return out


def run(argv=None) -> int:
    """Parse argv and execute; returns the process exit code."""
    if argv is None:
        argv = sys.argv[1:]
    args = build_parser().parse_args(_merge_dash_values(list(argv)))
    sub = args.subcommand

    if sub == "rerun":
        man = RunManifest.read(args.manifest)
        if man.subcommand not in _EXECUTORS:
            raise CliError(f"manifest has unknown subcommand {man.subcommand!r}")
        return _run(man.subcommand, man.params, man.seed, args.out, threads=args.threads)

    if sub == "sample":
        recorded = _model_recorded(args)
        recorded["max_letters"] = args.max_letters
        return _run(sub, recorded, _resolve_seed(args), args.out)

    if sub == "trivialize":
        recorded = _model_recorded(args)
        recorded["max_letters"] = args.max_letters
        cfg = trivializer.TrivializerConfig.for_params(
            args.m, args.ell, k=args.k_override, max_rounds=args.max_rounds
        )
        recorded.update({"k": cfg.k, "block_size": cfg.block_size,
                         "block_count": cfg.block_count, "max_rounds": cfg.max_rounds})
        return _run(sub, recorded, _resolve_seed(args), args.out,
                    threads=args.threads, log=args.log)

    if sub == "verify-dist":
        recorded = {"m": args.m, "n": args.n, "samples": args.samples}
        return _run(sub, recorded, _resolve_seed(args), args.out)

    if sub == "pigeonhole":
        recorded = {"n": args.n, "q": args.q, "z": args.z, "mu": args.mu,
                    "c": args.c, "trials": args.trials, "exact_budget": args.exact_budget}
        return _run(sub, recorded, _resolve_seed(args), args.out, threads=args.threads)

    if sub == "diagrams":
        recorded = {"diagram_cmd": args.diagram_cmd}
        for key in ("n", "with_census", "faces", "boundary", "ell", "density", "m", "max_n"):
            if hasattr(args, key):
                recorded[key] = getattr(args, key)
        return _run(sub, recorded, None, args.out)

    if sub == "conditions":
        recorded = {"which": args.which, "f_expr": args.f_expr, "k_expr": args.k_expr,
                    "K_expr": args.K_expr, "ell_grid": args.ell_grid, "m": args.m}
        return _run(sub, recorded, None, args.out)

    if sub == "phase-map":
        recorded = {"alpha": args.alpha, "beta": args.beta, "coeff": args.coeff}
        return _run(sub, recorded, None, args.out)

    raise CliError(f"unknown subcommand {sub!r}")


def main() -> None:
    try:
        sys.exit(run())
    except SystemExit:
        raise
    except (CliError, ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()
