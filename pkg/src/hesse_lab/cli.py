"""Command-line front end: analyze | generate | verify | catalog.

Exit codes: 0 success; 1 verification suite failure; 2 parse error or bad
invocation; 3 non-homogeneous input; 4 internal check violation (an identity
the construction guarantees failed); 5 parameter validation failure;
6 seeded retry budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .classify import p4_plane_curve_check, p4_section_check
from .cones import cone_test
from .errors import (
    HesseLabError,
    InternalCheckError,
    ParseError,
    RetryBudgetError,
    ValidationError,
)
from .gn import GNSkeleton, core_multiplicity, instance_to_dict, random_instance
from .hessian import hessian_vanishes, polar_image_dim
from .poly import parse
from .psi import build_psi, find_polar_relation, sample_polar_image
from .reports import (
    SCHEMA,
    cone_block,
    curve_block,
    hessian_block,
    psi_block,
    psi_identity_battery,
    image_block,
    relation_block,
    run_all_suites,
    run_gn_suite,
    run_lowdim_suite,
    run_p4_suite,
    run_psi_suite,
    scalar_str,
    sections_block,
    trials_for_error,
)

EXIT_OK = 0
EXIT_SUITE_FAILED = 1
EXIT_PARSE = 2
EXIT_NOT_HOMOGENEOUS = 3
EXIT_INTERNAL_CHECK = 4
EXIT_VALIDATION = 5
EXIT_RETRY = 6


def build_parser():
    p = argparse.ArgumentParser(
        prog="hesse-lab",
        description="Exact analysis of hypersurfaces with vanishing Hessian.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0, help="master seed (u64)")
        sp.add_argument("--json", metavar="PATH", help="write the JSON report here")
        sp.add_argument(
            "--no-timings",
            action="store_true",
            help="omit the timings block (byte-deterministic output)",
        )
        sp.add_argument(
            "--field",
            default="rational",
            help="sampling field: 'rational' or 'p:<modulus>'",
        )
        sp.add_argument(
            "--symbolic", action="store_true", help="force the exact determinant"
        )
        sp.add_argument("--trials", type=int, default=5, help="probabilistic trials")

    a = sub.add_parser("analyze", help="full pipeline on one polynomial")
    common(a)
    a.add_argument("--poly", required=True, help="polynomial in x-variables")
    a.add_argument(
        "--max-relation-degree", type=int, default=4, help="polar relation search cap"
    )

    g = sub.add_parser("generate", help="build one seeded construction instance")
    common(g)
    for flag in ("n", "t", "m", "hdeg", "psideg", "d"):
        g.add_argument(f"--{flag}", type=int, required=True)
    g.add_argument("--out", metavar="PATH", help="write the instance JSON here")

    v = sub.add_parser("verify", help="run a verification suite")
    common(v)
    v.add_argument(
        "--suite", required=True, choices=("lowdim", "gn", "psi", "p4", "all")
    )
    v.add_argument("--count", type=int, default=10, help="instances per family")
    v.add_argument(
        "--mutate",
        action="store_true",
        help="testing aid: corrupt the psi components; the suite must then fail",
    )

    c = sub.add_parser("catalog", help="batch-generate instances with metadata")
    common(c)
    c.add_argument(
        "--types",
        action="append",
        required=True,
        metavar="n,t,m,hdeg,psideg,d",
        help="skeleton sextuple; repeatable",
    )
    c.add_argument("--count", type=int, default=1, help="instances per skeleton")

    return p


def _parse_field(text):
    if text == "rational":
        return None
    if text.startswith("p:"):
        modulus = int(text[2:])
        if modulus < 2:
            raise ValidationError([f"modulus {modulus} is not a prime > 1"])
        return modulus
    raise ValidationError([f"unknown field {text!r}; use 'rational' or 'p:<modulus>'"])


def cmd_analyze(args):
    modulus = _parse_field(args.field)
    f = parse(args.poly)
    if f.is_zero() or not f.is_homogeneous():
        return EXIT_NOT_HOMOGENEOUS, _doc(
            {"poly": args.poly}, {"error": "input must be nonzero homogeneous"}, args
        )
    n1, d = f.nvars, f.degree()
    mode = "symbolic" if (args.symbolic or (n1 <= 6 and d <= 6)) else "probabilistic"
    verdict = hessian_vanishes(f, mode=mode, trials=args.trials, seed=args.seed)
    vertex = cone_test(f)
    results = {
        "hessian": hessian_block(verdict),
        "cone": cone_block(vertex),
        "polar_image_dim": polar_image_dim(f, seed=args.seed) if d >= 2 else None,
    }
    code = EXIT_OK
    if verdict.vanishes and not vertex.is_cone and d >= 2:
        rel = find_polar_relation(f, max_degree=args.max_relation_degree)
        results["polar_relation"] = relation_block(rel) if rel else None
        if rel is not None:
            psi = build_psi(f, rel)
            results["psi"] = psi_block(psi)
            checks, image, ok = psi_identity_battery(
                f, psi, seed=args.seed, modulus=modulus
            )
            results["identity_checks"] = checks
            results["image"] = image_block(image)
            results["polar_image"] = image_block(
                sample_polar_image(f, 12, args.seed)
            )
            if n1 == 5:
                curve = p4_plane_curve_check(f, psi, seed=args.seed)
                sections = p4_section_check(f, psi, curve, seed=args.seed)
                results["classification"] = {
                    "plane_curve": curve_block(curve),
                    "sections": sections_block(sections),
                }
                ok = ok and curve.ok and sections.ok
            if not ok:
                code = EXIT_INTERNAL_CHECK
    return code, _doc({"poly": args.poly, "mode_requested": mode}, results, args)


def cmd_generate(args):
    skel = GNSkeleton(
        n=args.n, t=args.t, m=args.m, hdeg=args.hdeg, psideg=args.psideg, d=args.d
    )
    instance = random_instance(skel, seed=args.seed)
    if args.symbolic or (skel.n + 1 <= 6 and skel.d <= 6):
        verdict = hessian_vanishes(instance.f, mode="symbolic")
    else:
        trials = max(
            args.trials,
            trials_for_error((skel.n + 1) * max(skel.d - 2, 0), target_log2=40),
        )
        verdict = hessian_vanishes(
            instance.f, mode="probabilistic", trials=trials, seed=args.seed
        )
    vertex = cone_test(instance.f)
    data = instance_to_dict(instance)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(data, fh, indent=2)
            fh.write("\n")
    results = {
        "instance": data,
        "hessian": hessian_block(verdict),
        "cone": cone_block(vertex),
        "core_multiplicity": core_multiplicity(instance),
        "core_multiplicity_expected": skel.d - instance.mu,
    }
    return EXIT_OK, _doc(
        {"skeleton": [args.n, args.t, args.m, args.hdeg, args.psideg, args.d]},
        results,
        args,
    )


def cmd_verify(args):
    if args.suite == "lowdim":
        block = {"lowdim": run_lowdim_suite(args.count, args.seed)}
        ok = block["lowdim"]["ok"]
    elif args.suite == "gn":
        block = {"gn": run_gn_suite(args.count, args.seed)}
        ok = block["gn"]["ok"]
    elif args.suite == "psi":
        block = {"psi": run_psi_suite(args.seed, mutate=args.mutate)}
        ok = block["psi"]["ok"]
    elif args.suite == "p4":
        block = {"p4": run_p4_suite(args.seed)}
        ok = block["p4"]["ok"]
    else:
        block = run_all_suites(args.count, args.seed, mutate=args.mutate)
        ok = block["ok"]
    code = EXIT_OK if ok else EXIT_SUITE_FAILED
    return code, _doc({"suite": args.suite, "count": args.count}, block, args)


def cmd_catalog(args):
    skeletons = []
    problems = []
    for text in args.types:
        parts = text.split(",")
        if len(parts) != 6:
            problems.append(f"skeleton {text!r} is not a sextuple n,t,m,hdeg,psideg,d")
            continue
        try:
            nums = [int(x) for x in parts]
        except ValueError:
            problems.append(f"skeleton {text!r} has non-integer entries")
            continue
        skel = GNSkeleton(*nums)
        try:
            random_instance(skel, seed=args.seed)  # shape probe
        except ValidationError as exc:
            problems.extend(f"{text}: {v}" for v in exc.violations)
            continue
        skeletons.append(skel)
    if problems:
        raise ValidationError(problems)
    entries = []
    for skel in skeletons:
        for i in range(args.count):
            inst = random_instance(skel, seed=args.seed + i)
            if args.symbolic or (skel.n + 1 <= 6 and skel.d <= 6):
                verdict = hessian_vanishes(inst.f, mode="symbolic")
            else:
                trials = max(
                    args.trials,
                    trials_for_error((skel.n + 1) * max(skel.d - 2, 0), target_log2=40),
                )
                verdict = hessian_vanishes(
                    inst.f, mode="probabilistic", trials=trials, seed=args.seed + i
                )
            entries.append(
                {
                    "type": [skel.n, skel.t, skel.m],
                    "hdeg": skel.hdeg,
                    "psideg": skel.psideg,
                    "d": skel.d,
                    "s": inst.s,
                    "mu": inst.mu,
                    "seed": args.seed + i,
                    "hessian_mode": verdict.mode,
                    "vanishes": verdict.vanishes,
                    "error_bound": scalar_str(verdict.error_bound),
                    "is_cone": cone_test(inst.f).is_cone,
                    "core_multiplicity": core_multiplicity(inst),
                    "instance": instance_to_dict(inst),
                }
            )
    return EXIT_OK, _doc({"types": args.types, "count": args.count}, {"catalog": entries}, args)


def _doc(input_block, results, args):
    return {
        "schema": SCHEMA,
        "input": input_block,
        "results": results,
        "seeds": {"master": args.seed},
    }


def _emit(doc, args, started):
    if not args.no_timings:
        doc["timings"] = {"elapsed_s": round(time.time() - started, 3)}
    text = json.dumps(doc, indent=2) + "\n"
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text)
        print(f"report written to {args.json}")
    else:
        sys.stdout.write(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    started = time.time()
    handlers = {
        "analyze": cmd_analyze,
        "generate": cmd_generate,
        "verify": cmd_verify,
        "catalog": cmd_catalog,
    }
    try:
        code, doc = handlers[args.command](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        for violation in exc.violations:
            print(f"validation: {violation}", file=sys.stderr)
        return EXIT_VALIDATION
    except RetryBudgetError as exc:
        print(f"retry budget exhausted: {exc}", file=sys.stderr)
        return EXIT_RETRY
    except InternalCheckError as exc:
        print(f"internal check violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL_CHECK
    except HesseLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    _emit(doc, args, started)
    return code


if __name__ == "__main__":
    sys.exit(main())
