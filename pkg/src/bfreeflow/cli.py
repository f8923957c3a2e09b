"""Command-line surface: reproducible experiments over every module.

Exit codes: 0 success, 1 domain error (bad mathematical input, failed
verification), 2 usage error. All JSON reports embed the run configuration;
identical configurations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from itertools import product as _iproduct

from . import basis as basis_mod
from . import entropy as entropy_mod
from . import insertion, sieve, skew, words
from .basis import ModulusBasis, ResidueVector
from .errors import BfreeflowError
from .rng import SplitMix64
from .sampler import expected_mme_density, ones_density, sample_mme_prefix
from .words import BinaryWord


def parse_basis(spec: str) -> ModulusBasis:
    """'4,9,25' (explicit) or 'squarefree:3' (squares of first r primes)."""
    if spec.startswith("squarefree:"):
        return basis_mod.squarefree_basis(int(spec.split(":", 1)[1]))
    return basis_mod.make_basis([int(tok) for tok in spec.split(",")])


def parse_residues(spec: str, basis: ModulusBasis) -> ResidueVector:
    values = [int(tok) for tok in spec.split(",")]
    reduced = tuple(v % b for v, b in zip(values, basis.moduli))
    if len(values) != len(basis.moduli):
        raise ValueError(
            f"got {len(values)} residues for {len(basis.moduli)} moduli"
        )
    return ResidueVector(basis, reduced)


def _read_word(arg: str | None) -> BinaryWord:
    text = arg if arg is not None else sys.stdin.read()
    return BinaryWord.from_text(text.strip())


def _emit_json(command: str, config: dict, result: dict, out) -> None:
    report = {"command": command, "config": config, "result": result}
    out.write(json.dumps(report, sort_keys=True, separators=(",", ": ")))
    out.write("\n")


# ---------------------------------------------------------------- sieve


def _cmd_sieve(args, out) -> int:
    n = args.n
    if args.kind == "mobius":
        values = sieve.mobius(n)
        if args.format in ("hex", "rle"):
            raise ValueError("mobius output supports only text or json")
        if args.format == "json":
            _emit_json(
                "sieve",
                {"kind": "mobius", "n": n, "format": args.format},
                {"values": [int(v) for v in values]},
                out,
            )
        else:
            out.write(",".join(str(int(v)) for v in values) + "\n")
        return 0

    if args.kind == "squarefree":
        word = sieve.squarefree_indicator(n)
        config = {"kind": "squarefree", "n": n, "format": args.format}
    else:
        if args.basis is None:
            raise ValueError("--bfree needs --basis")
        b = parse_basis(args.basis)
        word = sieve.bfree_indicator(n, b)
        config = {
            "kind": "bfree",
            "n": n,
            "basis": list(b.moduli),
            "format": args.format,
        }

    if args.format == "text":
        out.write(word.to_text() + "\n")
    elif args.format == "hex":
        out.write(word.to_hex() + "\n")
    elif args.format == "rle":
        runs = []
        arr = word.to_text()
        i = 0
        while i < len(arr):
            j = i
            while j < len(arr) and arr[j] == arr[i]:
                j += 1
            runs.append([int(arr[i]), j - i])
            i = j
        _emit_json("sieve", config, {"rle": runs, "length": len(word)}, out)
    else:
        _emit_json("sieve", config, {"word": word.to_text()}, out)
    return 0


# ---------------------------------------------------------------- admissible


def _cmd_admissible(args, out) -> int:
    b = parse_basis(args.basis)
    w = _read_word(args.word)
    profile = words.omission_profile(w, b, args.phase)
    ok = all(c >= 1 for c in profile.counts)
    if args.format == "json":
        result = {
            "admissible": ok,
            "omitted_counts": list(profile.counts),
        }
        if args.show_classes:
            result["omitted"] = [sorted(s) for s in profile.omitted]
        _emit_json(
            "admissible",
            {"basis": list(b.moduli), "phase": args.phase, "length": len(w)},
            result,
            out,
        )
    else:
        out.write(("admissible" if ok else "not admissible") + "\n")
    return 0


# ---------------------------------------------------------------- insert / extract


def _cmd_insert(args, out) -> int:
    b = parse_basis(args.basis)
    g = parse_residues(args.g, b)
    y = _read_word(args.y)
    x = insertion.insert_prefix(g, y, args.length)
    out.write(x.to_text() + "\n")
    return 0


def _cmd_extract(args, out) -> int:
    b = parse_basis(args.basis)
    g = parse_residues(args.g, b)
    x = _read_word(args.x)
    y = insertion.extract(x, g)
    out.write(y.to_text() + "\n")
    return 0


# ---------------------------------------------------------------- orbit


def _cmd_orbit(args, out) -> int:
    b = parse_basis(args.basis)
    g = parse_residues(args.g, b)
    if args.tape is not None:
        tape = BinaryWord.from_text(args.tape)
    else:
        rng = SplitMix64(args.seed)
        tape = BinaryWord.from_numpy(rng.bernoulli_bits(args.steps + 1))
    trace = skew.orbit(skew.SkewState(g, tape, 0), args.steps)
    header = {
        "command": "orbit",
        "config": {
            "basis": list(b.moduli),
            "g": list(g.residues),
            "steps": args.steps,
            "seed": None if args.tape is not None else args.seed,
        },
    }
    out.write(json.dumps(header, sort_keys=True, separators=(",", ": ")) + "\n")
    for step, (state, flag) in enumerate(zip(trace.states, trace.return_flags)):
        line = {
            "step": step,
            "g": list(state.g.residues),
            "cursor": state.cursor,
            "in_complement": flag,
        }
        out.write(json.dumps(line, sort_keys=True, separators=(",", ": ")) + "\n")
    return 0


# ---------------------------------------------------------------- entropy


def _parse_sweep(spec: str) -> list[int]:
    # "m=1..4" -> [1, 2, 3, 4]
    if not spec.startswith("m="):
        raise ValueError("sweep spec must look like m=1..4")
    lo, _, hi = spec[2:].partition("..")
    first, last = int(lo), int(hi or lo)
    if first < 1 or last < first:
        raise ValueError("sweep range must be 1 <= first <= last")
    return list(range(first, last + 1))


def _entropy_point(
    b: ModulusBasis, omit, length: int, args
) -> dict:
    point: dict = {
        "moduli": list(b.moduli),
        "omit": list(omit),
        "length": length,
        "formula_nats": entropy_mod.entropy_formula(b, omit),
        "count_lower": None,
        "count_upper": None,
        "rate_upper": None,
        "exact_count": None,
        "exact_rate": None,
    }
    if args.bits:
        point["formula_bits"] = point["formula_nats"] / entropy_mod.LN2
    period = b.period()
    if length % period == 0:
        m = length // period
        lower, upper = entropy_mod.crt_bounds(b, omit, m)
        point["count_lower"] = lower
        point["count_upper"] = upper
        point["rate_upper"] = entropy_mod.rate_envelope(b, omit, m)[1]
    if args.exact and length <= args.cap:
        count = entropy_mod.count_words_exact(
            b, omit, length, cap=args.cap, threads=args.threads
        )
        point["exact_count"] = count
        point["exact_rate"] = math.log(count) / length
    return point


def _cmd_entropy(args, out) -> int:
    b = parse_basis(args.basis)
    omit = tuple(int(tok) for tok in args.omit.split(","))
    config = {
        "basis": list(b.moduli),
        "omit": list(omit),
        "format": args.format,
        "exact": args.exact,
        "cap": args.cap,
    }

    if args.sweep:
        ms = _parse_sweep(args.sweep)
        config["sweep"] = args.sweep
        points = [_entropy_point(b, omit, m * b.period(), args) for m in ms]
        if args.plot:
            from .figures import entropy_sweep_figure

            entropy_sweep_figure(points, args.plot)
        if args.format == "csv":
            _write_entropy_csv(points, config, out)
        else:
            _emit_json("entropy", config, {"sweep": points}, out)
        return 0

    if args.length is None:
        raise ValueError("need --length or --sweep")
    config["length"] = args.length
    point = _entropy_point(b, omit, args.length, args)
    if args.format == "csv":
        _write_entropy_csv([point], config, out)
    else:
        _emit_json("entropy", config, point, out)
    return 0


_CSV_FIELDS = [
    "moduli",
    "omit",
    "length",
    "formula_nats",
    "count_lower",
    "count_upper",
    "exact_count",
    "exact_rate",
    "rate_upper",
]


def _write_entropy_csv(points: list[dict], config: dict, out) -> None:
    out.write("# config " + json.dumps(config, sort_keys=True) + "\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(_CSV_FIELDS)
    for p in points:
        row = dict(p)
        row["moduli"] = "+".join(str(v) for v in p["moduli"])
        row["omit"] = "+".join(str(v) for v in p["omit"])
        writer.writerow([row.get(f, "") for f in _CSV_FIELDS])


# ---------------------------------------------------------------- sample


def _cmd_sample(args, out) -> int:
    b = parse_basis(args.basis)
    rng = SplitMix64(args.seed)
    x, g, y = sample_mme_prefix(b, args.length, rng, args.bernoulli)
    if args.plot:
        from .figures import density_figure

        density_figure(x.to_numpy(), expected_mme_density(b), args.plot)
    if args.format == "json":
        result = {
            "g": list(g.residues),
            "ones_density": ones_density(x),
            "expected_density": expected_mme_density(b),
            "admissible": words.is_admissible(x, b),
        }
        if args.emit in ("x", "all"):
            result["x"] = x.to_text()
        if args.emit in ("y", "all"):
            result["y"] = y.to_text()
        _emit_json(
            "sample",
            {
                "basis": list(b.moduli),
                "length": args.length,
                "seed": args.seed,
                "bernoulli": args.bernoulli,
                "emit": args.emit,
            },
            result,
            out,
        )
        return 0
    if args.emit == "all":
        out.write("g=" + ",".join(str(c) for c in g.residues) + "\n")
        out.write("x=" + x.to_text() + "\n")
        out.write("y=" + y.to_text() + "\n")
    elif args.emit == "g":
        out.write(",".join(str(c) for c in g.residues) + "\n")
    elif args.emit == "y":
        out.write(y.to_text() + "\n")
    else:
        out.write(x.to_text() + "\n")
    return 0


# ---------------------------------------------------------------- verify


def _suite_commutation(b: ModulusBasis, rng: SplitMix64, n: int, horizon: int):
    failures = 0
    for i in range(n):
        g = basis_mod.haar_sample(b, rng)
        if i % 4 == 0:  # force the forbidden branch
            res = list(g.residues)
            res[i % len(res)] = basis_mod.FORBIDDEN_CLASS
            g = ResidueVector(b, tuple(res))
        elif i % 4 == 1:  # force the unforbidden branch
            g = basis_mod.complement_sample(b, rng)
        y = BinaryWord.from_numpy(rng.bernoulli_bits(horizon + 2))
        if not insertion.check_commutation(g, y, horizon):
            failures += 1
    return ("commutation", failures == 0, n, failures, f"horizon={horizon}")


def _suite_roundtrip(b: ModulusBasis, rng: SplitMix64, n: int, horizon: int):
    failures = 0
    for _ in range(n):
        g = basis_mod.haar_sample(b, rng)
        m_out = 1 + rng.below(horizon)
        y = BinaryWord.from_numpy(rng.bernoulli_bits(m_out))
        x = insertion.insert_prefix(g, y, m_out)
        back = insertion.extract(x, g)
        consumed = m_out - insertion.forced_count(g, m_out)
        if back != BinaryWord(y.bits & ((1 << consumed) - 1), consumed):
            failures += 1
    return ("roundtrip", failures == 0, n, failures, f"max_len={horizon}")


def _suite_product(b: ModulusBasis, rng: SplitMix64, samples: int, steps: int):
    exhaustive = b.complement_size() <= 4096
    report = skew.verify_product_structure(
        samples, steps, b, rng, exhaustive=exhaustive
    )
    detail = "exhaustive" if exhaustive else f"samples={samples}"
    return ("product", report.ok(), report.checks, report.failures, detail)


def _suite_crt(b: ModulusBasis, cap: int):
    checks = failures = 0
    for r in range(1, len(b.moduli) + 1):
        prefix = ModulusBasis(b.moduli[:r])
        period = prefix.period()
        for m in (1, 2):
            if m * period > cap:
                continue
            for omit in _iproduct(*(range(1, bb) for bb in prefix.moduli)):
                lower, upper = entropy_mod.crt_bounds(prefix, omit, m)
                count = entropy_mod.count_words_exact(prefix, omit, m * period)
                checks += 1
                if not lower <= count <= upper:
                    failures += 1
    detail = f"cap={cap}" if checks else f"cap={cap} (no lengths under cap)"
    return ("crt", failures == 0, checks, failures, detail)


def _suite_kac(b: ModulusBasis, rng: SplitMix64, draws: int):
    checks = failures = 0
    if b.complement_size() <= 100_000:
        total = sum(basis_mod.return_time(g) for g in basis_mod.complement_vectors(b))
        checks += 1
        # mean return time == 1/mass, exactly: totals over one full rotation
        if total != b.period():
            failures += 1
    hits = sum(
        1 for _ in range(draws) if not basis_mod.in_forbidden(basis_mod.haar_sample(b, rng))
    )
    mass = basis_mod.complement_mass(b)
    se = math.sqrt(mass * (1.0 - mass) / draws)
    checks += 1
    if abs(hits / draws - mass) > 3.0 * se:
        failures += 1
    return ("kac", failures == 0, checks, failures, f"draws={draws}")


def _cmd_verify(args, out) -> int:
    b = parse_basis(args.basis)
    rng = SplitMix64(args.seed)
    chosen = {
        name
        for name, flag in [
            ("commutation", args.commutation),
            ("roundtrip", args.roundtrip),
            ("product", args.product),
            ("crt", args.crt),
            ("kac", args.kac),
        ]
        if flag or args.all
    }
    if not chosen:
        chosen = {"commutation", "roundtrip", "product", "crt", "kac"}
    suites = []
    if "commutation" in chosen:
        suites.append(_suite_commutation(b, rng.split(), args.samples, args.horizon))
    if "roundtrip" in chosen:
        suites.append(_suite_roundtrip(b, rng.split(), args.samples, args.horizon))
    if "product" in chosen:
        suites.append(_suite_product(b, rng.split(), args.samples, args.steps))
    if "crt" in chosen:
        suites.append(_suite_crt(b, args.cap))
    if "kac" in chosen:
        suites.append(_suite_kac(b, rng.split(), args.draws))

    all_ok = all(s[1] for s in suites)
    if args.format == "json":
        _emit_json(
            "verify",
            {
                "basis": list(b.moduli),
                "seed": args.seed,
                "samples": args.samples,
                "horizon": args.horizon,
                "steps": args.steps,
            },
            {
                "all_ok": all_ok,
                "suites": [
                    {
                        "name": name,
                        "ok": ok,
                        "checks": checks,
                        "failures": fails,
                        "detail": detail,
                    }
                    for name, ok, checks, fails, detail in suites
                ],
            },
            out,
        )
    else:
        for name, ok, checks, fails, detail in suites:
            tag = "ok  " if ok else "FAIL"
            out.write(f"{tag} {name:12s} checks={checks} failures={fails} {detail}\n")
        out.write(("all ok" if all_ok else "FAILURES") + "\n")
    return 0 if all_ok else 1


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bfreeflow",
        description="B-free subshift toolkit: sieves, insertion, skew orbits, "
        "entropy, maximal-entropy sampling",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", help="emit arithmetic indicator sequences")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--squarefree", dest="kind", action="store_const", const="squarefree")
    kind.add_argument("--mobius", dest="kind", action="store_const", const="mobius")
    kind.add_argument("--bfree", dest="kind", action="store_const", const="bfree")
    p.add_argument("-n", type=int, required=True, help="sequence length")
    p.add_argument("--basis", help="required with --bfree")
    p.add_argument("--format", choices=["text", "hex", "rle", "json"], default="text")
    p.set_defaults(func=_cmd_sieve)

    p = sub.add_parser("admissible", help="test a word against a basis")
    p.add_argument("--basis", required=True)
    p.add_argument("--word", help="0/1 text; stdin if omitted")
    p.add_argument("--phase", type=int, default=0)
    p.add_argument("--show-classes", action="store_true")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=_cmd_admissible)

    p = sub.add_parser("insert", help="insert a tape along residue classes")
    p.add_argument("--basis", required=True)
    p.add_argument("--g", required=True, help="comma-separated residues")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--y", help="tape as 0/1 text; stdin if omitted")
    p.set_defaults(func=_cmd_insert)

    p = sub.add_parser("extract", help="remove the forced zeros of a word")
    p.add_argument("--basis", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--x", help="word as 0/1 text; stdin if omitted")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("orbit", help="trace the skew product as JSON lines")
    p.add_argument("--basis", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tape", help="explicit 0/1 tape instead of a seeded one")
    p.set_defaults(func=_cmd_orbit)

    p = sub.add_parser("entropy", help="word counts, sandwich bounds, closed form")
    p.add_argument("--basis", required=True)
    p.add_argument("--omit", required=True, help="comma-separated omission counts")
    p.add_argument("--length", type=int)
    p.add_argument("--sweep", help="m=1..4: lengths = m * period")
    p.add_argument("--exact", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--cap", type=int, default=entropy_mod.DEFAULT_LENGTH_CAP)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--bits", action="store_true", help="also report bits/symbol")
    p.add_argument("--plot", help="render the sweep to this image file")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=_cmd_entropy)

    p = sub.add_parser("sample", help="draw a maximal-entropy sample")
    p.add_argument("--basis", required=True)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bernoulli", type=float, default=0.5)
    p.add_argument("--emit", choices=["x", "y", "g", "all"], default="x")
    p.add_argument("--plot", help="render the running density to this image file")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("verify", help="run the identity suites")
    p.add_argument("--basis", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--all", action="store_true")
    p.add_argument("--commutation", action="store_true")
    p.add_argument("--roundtrip", action="store_true")
    p.add_argument("--product", action="store_true")
    p.add_argument("--crt", action="store_true")
    p.add_argument("--kac", action="store_true")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--horizon", type=int, default=200)
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--draws", type=int, default=100_000)
    p.add_argument("--cap", type=int, default=entropy_mod.DEFAULT_LENGTH_CAP)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None, out: io.TextIOBase | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    stream = out if out is not None else sys.stdout
    try:
        return args.func(args, stream)
    except BfreeflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
