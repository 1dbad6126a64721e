"""Command line: ``posetdecomp VERB [options]``.

Exit codes: 0 success, 1 input error, 2 verification failure, 3 resource cap.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import io
from .complexes import decomposition_complex
from .decomp import DecompositionSet, maximal_decomposition_set, trivial_decomposition_set
from .errors import InvariantError, ParseError, PosetDecompError, PreconditionError, ResourceError
from .geometry import (
    canonical_min_realization,
    check_pseudo_complex,
    export_json,
    export_off,
    identity_realization,
    realize_complex,
    verify_realization,
)
from .matroid import bergman_face_poset, bergman_fan_cones, fan_rays, fan_to_dict, matroid_from, verify_bergman_embedding
from .nested import building_preset, is_building_set, nested_embedding, nested_sets, nested_target_set, verify_nested_image
from .poset import DEFAULT_CHAIN_CAP, Poset, product
from .products import coproduct_decomposition_set, product_complex_isomorphism, product_decomposition_set
from .suites import DEFAULT_SEED, SUITES, run_suites

log = logging.getLogger("posetdecomp")

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class VerificationFailed(Exception):
    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--output", "-o", help="output file (default: standard output)")
    common.add_argument("--max-chains", type=int, default=DEFAULT_CHAIN_CAP)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--verbose", "-v", action="store_true")

    parser = _Parser(prog="posetdecomp", description="Decomposition complexes of finite posets.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("complex", parents=[common], help="face poset of D(P, G)")
    p.add_argument("--poset", action="append", required=True,
                   help="poset file, inline JSON or preset:NAME; twice for a product")
    p.add_argument("--gset", default="min", help="min | max | file:PATH | product:SEL*SEL")

    p = sub.add_parser("realize", parents=[common], help="realize D(P, G) by 0/1 polytopes")
    p.add_argument("--poset", action="append", required=True)
    p.add_argument("--gset", default="min")
    p.add_argument("--phi", default="canonical", help="canonical | atoms | identity | file:PATH")
    p.add_argument("--format", choices=["json", "off"], default="json")
    p.add_argument("--grid-denominator", type=int, default=2)

    for verb, helptext in (("product", "product complex with its isomorphism certificate"),
                           ("coproduct", "complex of the disjoint union")):
        p = sub.add_parser(verb, parents=[common], help=helptext)
        p.add_argument("--poset", action="append", required=True)
        p.add_argument("--gset", action="append", help="selector per factor (one value is used for both)")

    p = sub.add_parser("nested", parents=[common], help="nested set complex and its embedding")
    p.add_argument("--poset", action="append", required=True)
    p.add_argument("--building", default="atoms", help="all | atoms | irreducibles | file:PATH")

    p = sub.add_parser("bergman", parents=[common], help="Bergman fan of a matroid")
    p.add_argument("--matroid", required=True, help="matroid file or inline JSON")

    p = sub.add_parser("verify", parents=[common], help="run property suites")
    p.add_argument("--suite", action="append", choices=["all"] + sorted(SUITES))
    p.add_argument("--max-n", type=int, default=6)
    return parser


# ---------------------------------------------------------------------------
# input helpers


def _single_poset(args) -> Poset:
    if len(args.poset) == 1:
        return io.read_poset(args.poset[0])
    if len(args.poset) == 2:
        return product(io.read_poset(args.poset[0]), io.read_poset(args.poset[1]))
    raise UsageError("--poset may be given once, or twice for a product")


def _factors(args) -> list:
    if len(args.poset) != 2:
        raise UsageError("this verb needs exactly two --poset values")
    return [io.read_poset(s) for s in args.poset]


def select_gset(P: Poset, selector: str, factors=None) -> DecompositionSet:
    if selector == "min":
        return trivial_decomposition_set(P)
    if selector == "max":
        return maximal_decomposition_set(P)
    if selector.startswith("file:"):
        return io.read_decomposition_set(P, selector[5:])
    if selector.startswith("product:"):
        if not factors:
            raise UsageError("product selectors need two --poset values")
        left, sep, right = selector[8:].partition("*")
        if not sep:
            raise UsageError("product selector must look like product:SEL*SEL")
        G1 = select_gset(factors[0], left)
        G2 = select_gset(factors[1], right)
        return product_decomposition_set(G1, G2, P)
    raise UsageError(f"unknown decomposition-set selector {selector!r}")


def _poset_and_gset(args):
    P = _single_poset(args)
    factors = [io.read_poset(s) for s in args.poset] if len(args.poset) == 2 else None
    return P, select_gset(P, args.gset, factors)


# ---------------------------------------------------------------------------
# verbs


def cmd_complex(args):
    P, G = _poset_and_gset(args)
    return decomposition_complex(P, G, args.max_chains).to_dict()


def cmd_realize(args):
    P, G = _poset_and_gset(args)
    if not G.normalized:
        raise PreconditionError("realizations need a symmetric, downward closed decomposition set")
    sel = args.phi
    if sel == "canonical":
        phi = canonical_min_realization(P)
    elif sel == "identity":
        phi = identity_realization(P)
    elif sel == "atoms":
        from .matroid import atom_realization

        phi = atom_realization(P)
    elif sel.startswith("file:"):
        phi = io.read_realization(P, sel[5:])
    else:
        raise UsageError(f"unknown --phi value {sel!r}")
    ok, bad = verify_realization(P, G, phi)
    if not ok:
        raise VerificationFailed(f"not a realization, failing at {bad}")
    pc = realize_complex(P, G, phi, decomposition_complex(P, G, args.max_chains))
    if args.grid_denominator and not check_pseudo_complex(pc, args.grid_denominator):
        raise VerificationFailed("pseudo-complex axioms fail on the sampling grid")
    if args.format == "off":
        return export_off(pc)
    return export_json(pc)


def _factor_sets(args, factors):
    sels = args.gset or ["min"]
    if len(sels) == 1:
        sels = sels * 2
    if len(sels) != 2:
        raise UsageError("give one or two --gset values")
    return [select_gset(P, s) for P, s in zip(factors, sels)]


def cmd_product(args):
    factors = _factors(args)
    G1, G2 = _factor_sets(args, factors)
    G = product_decomposition_set(G1, G2)
    cert = product_complex_isomorphism(G1, G2, G)
    out = decomposition_complex(G.poset, G, args.max_chains).to_dict()
    out["certificate"] = [list(row) for row in cert]
    return out


def cmd_coproduct(args):
    factors = _factors(args)
    G1, G2 = _factor_sets(args, factors)
    G = coproduct_decomposition_set(G1, G2)
    return decomposition_complex(G.poset, G, args.max_chains).to_dict()


def cmd_nested(args):
    P = _single_poset(args)
    sel = args.building
    if sel.startswith("file:"):
        B = io.read_building_set(P, sel[5:])
    else:
        B = building_preset(P, sel)
    ok, y = is_building_set(P, B)
    if not ok:
        raise PreconditionError(f"not a building set (fails at {y!r})")
    target = nested_target_set(P, B)
    faces = []
    for S in [()] + nested_sets(P, B):
        try:
            members = nested_embedding(P, B, S, target).members
        except InvariantError:
            members = None
        faces.append({"nested": list(S), "face": list(P.sort(members)) if members is not None else None})
    verified, why = verify_nested_image(P, B)
    out = {"building_set": list(P.sort(B)), "embedding": faces, "verified": verified}
    if not verified:
        out["reason"] = why
        raise VerificationFailed(f"nested embedding check fails: {why}", out)
    return out


def cmd_bergman(args):
    M = matroid_from(io.load_json(args.matroid))
    cones = bergman_fan_cones(M)
    out = fan_to_dict(M, cones)
    out["rays"] = [list(r) for r in fan_rays(cones)]
    out["loopfree_types"] = len(bergman_face_poset(M))
    ok, why = verify_bergman_embedding(M)
    out["embedding_verified"] = ok
    if not ok:
        raise VerificationFailed(f"Bergman embedding check fails: {why}", out)
    return out


def cmd_verify(args):
    max_n = args.max_n
    env = os.environ.get("DECOMP_MAX_N")
    if env:
        try:
            max_n = min(max_n, int(env))
        except ValueError:
            raise UsageError(f"DECOMP_MAX_N must be an integer, got {env!r}") from None
    results = run_suites(args.suite or ["all"], max_n, args.seed)
    for r in results:
        print(r.line(), file=sys.stderr)
        for f in r.failures:
            print(f"    {f}", file=sys.stderr)
    out = {"max_n": max_n, "seed": args.seed,
           "suites": [{"name": r.name, "ok": r.ok, "checked": r.checked, "violations": r.violations,
                       "failures": r.failures, "notes": {k: str(v) for k, v in r.notes.items()}} for r in results]}
    if not all(r.ok for r in results):
        raise VerificationFailed("some suites failed", out)
    return out


COMMANDS = {
    "complex": cmd_complex,
    "realize": cmd_realize,
    "product": cmd_product,
    "coproduct": cmd_coproduct,
    "nested": cmd_nested,
    "bergman": cmd_bergman,
    "verify": cmd_verify,
}


def _emit(payload, output):
    text = payload if isinstance(payload, str) else io.dumps(payload)
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        _emit(COMMANDS[args.verb](args), args.output)
    except VerificationFailed as exc:
        if exc.payload is not None:
            _emit(exc.payload, args.output)
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InvariantError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (UsageError, ParseError, PreconditionError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PosetDecompError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def main():
    sys.exit(run())
