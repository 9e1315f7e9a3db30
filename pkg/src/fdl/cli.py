"""Command-line interface.

Every command prints one JSON document (DOT for ``graph-export``).  Exit
status: 0 success, 1 certificate failed verification, 2 invalid input,
3 size or search cap exceeded, 64 usage error.

Signed basis indices in JSON witnesses use one's complement for inverses:
``n`` means ``h_n`` and ``~n`` (that is ``-n-1``) means ``h_n^-1``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import double, family, homology, stallings
from .abelian import CyclicSum, FinAbelian
from .errors import CapExceeded, FdlError, ValidationError
from .words import Word, reduce

EXIT_OK, EXIT_UNVERIFIED, EXIT_INVALID, EXIT_CAP, EXIT_USAGE = 0, 1, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def encode_witness(witness) -> list[int]:
    return [n if sign > 0 else ~n for n, sign in witness]


def decode_witness(data) -> list[tuple[int, int]]:
    return [(n, 1) if n >= 0 else (~n, -1) for n in map(int, data)]


def load_json_arg(value: str):
    """Inline JSON if it looks like JSON, otherwise a path to a UTF-8 JSON file."""
    if value == "-":
        text = sys.stdin.read()
    elif value.lstrip().startswith(("{", "[")):
        text = value
    else:
        text = Path(value).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from None


def load_seq(value: str) -> family.MultiplyingSequence:
    return family.validate(load_json_arg(value))


def parse_word(text: str) -> Word:
    return reduce(Word.parse(text))


def parse_gens(text: str) -> list[Word]:
    return [parse_word(part) for part in text.split(",") if part.strip()]


# -- commands -----------------------------------------------------------------

def cmd_seq_validate(args):
    seq = load_seq(args.seq)
    return {"valid": True, "sequence": seq.to_json(), "values": seq.values(args.count)}


def cmd_member(args):
    w = parse_word(args.word)
    if args.gens is not None:
        gens = parse_gens(args.gens)
        g = stallings.from_generators(gens)
        closed = stallings.trace(g, w).closed
        witness = stallings.express(g, w) if closed else []
        return {"type": "membership", "generators": [str(x) for x in gens],
                "basis": [str(x) for x in stallings.basis(g)],
                "word": str(w), "member": closed, "witness": encode_witness(witness)}
    seq = load_seq(args.seq)
    result = family.hs_member(seq, w)
    return {"type": "membership", "sequence": seq.to_json(), "word": str(w),
            "member": result.member, "witness": encode_witness(result.witness)}


def cmd_sk_member(args):
    seq = load_seq(args.seq)
    w = parse_word(args.word)
    return {"sequence": seq.to_json(), "k": args.k, "word": str(w),
            "member": family.sk_member(seq, args.k, w)}


def cmd_rewrite(args):
    seq = load_seq(args.seq)
    triple, factors = family.sk_rewrite(seq, args.k, args.m)
    value = family.evaluate(factors)
    target = family.h(seq, args.m)
    return {"k": triple.k, "m": triple.m, "q": triple.q, "r": triple.r, "f": triple.f,
            "factors": [[str(w), e] for w, e in factors],
            "reduces_to": str(value), "target": str(target), "identity_holds": value == target}


def cmd_word_problem(args):
    seq = load_seq(args.seq)
    w = parse_word(args.word)
    result = double.pinch_reduce(seq, w)
    out = {"type": "normal-form", "sequence": seq.to_json(), "word": str(w)}
    out.update(result.to_json())
    out["pinches"] = len(result.log)
    return out


def cmd_homology_h1(args):
    seq = load_seq(args.seq)
    return {"m": args.m, "h1": homology.h1_quotient(seq, args.m).to_json()}


def cmd_homology_h2(args):
    seq = load_seq(args.seq)
    return {"m": args.m, "h2": homology.h2_quotient(seq, args.m).to_json()}


def cmd_homology_oracle(args):
    seq = load_seq(args.seq)
    h1 = homology.h1_oracle(seq, args.m, args.N)
    h2 = homology.h2_oracle(seq, args.m, args.N)
    formula_h2 = homology.h2_quotient(seq, args.m).truncate(args.N)
    return {"m": args.m, "N": args.N, "h1": h1.to_json(), "h2": h2.to_json(),
            "agrees_with_formula": h1 == homology.h1_quotient(seq, args.m) and h2 == formula_h2}


def cmd_distinguish(args):
    s, t = load_seq(args.seq1), load_seq(args.seq2)
    report = homology.distinguish(s, t)
    out = {"type": "distinguish", "seq1": s.to_json(), "seq2": t.to_json()}
    out.update(report.to_json())
    return out


def cmd_separate(args):
    gens = parse_gens(args.gens)
    avoid = parse_word(args.word)
    g = stallings.from_generators(gens)
    cover = stallings.hall_complete(g, avoid)
    out = {"type": "separation", "generators": [str(x) for x in gens], "avoid": str(avoid)}
    out.update(cover.to_json())
    return out


def _export_graph(args) -> stallings.LabeledGraph:
    if args.gens is not None:
        return stallings.from_generators(parse_gens(args.gens))
    if args.seq is None:
        raise UsageError("graph-export needs --gens or --seq")
    seq = load_seq(args.seq)
    if args.kind == "Sk":
        if args.k is None:
            raise UsageError("graph-export --kind Sk needs --k")
        return family.materialize(family.ImplicitCore("Sk", seq, args.k))
    return family.materialize(family.ImplicitCore("Hs", seq), args.depth)


def cmd_graph_export(args):
    g = _export_graph(args)
    if args.format == "json":
        return g.to_json()
    return stallings.to_dot(g)


def cmd_recover(args):
    seq = load_seq(args.seq)
    p = family.recover_sequence(lambda w: family.hs_member(seq, w).member, args.n, args.limit)
    return {"n": args.n, "s_n": p}


def cmd_residually_p(args):
    seq = load_seq(args.seq)
    return {"sequence": seq.to_json(), "p": args.p,
            "residually_p": family.is_residually_p(seq, args.p)}


def verify_certificate(cert: dict) -> bool:
    """Replay a certificate emitted by ``member``, ``separate``, ``distinguish``
    or ``word-problem`` against the library."""
    kind = cert.get("type")
    if kind == "membership":
        w = parse_word(cert["word"])
        witness = decode_witness(cert["witness"])
        if "generators" in cert:
            g = stallings.from_generators(parse_gens(",".join(cert["generators"])))
            member = stallings.trace(g, w).closed
            if member != cert["member"]:
                return False
            return not member or stallings.evaluate_crossings(stallings.basis(g), witness) == w
        seq = family.validate(cert["sequence"])
        if family.hs_member(seq, w).member != cert["member"]:
            return False
        return not cert["member"] or family.from_witness(seq, witness) == w
    if kind == "separation":
        cover = stallings.PermRep.from_json(cert)
        gens = parse_gens(",".join(cert["generators"]))
        return all(cover.contains(x) for x in gens) and not cover.contains(parse_word(cert["avoid"]))
    if kind == "distinguish":
        s, t = family.validate(cert["seq1"]), family.validate(cert["seq2"])
        report = homology.distinguish(s, t)
        parse = FinAbelian.from_json if cert["kind"] == "H1" else CyclicSum.from_json
        left, right = parse(cert["left"]), parse(cert["right"])
        return (report.to_json() == {k: cert[k] for k in report.to_json()}
                and cert["verdict"] == "non-isomorphic"
                and homology.invariants_differ(cert["kind"], left, right))
    if kind == "normal-form":
        seq = family.validate(cert["sequence"])
        result = double.pinch_reduce(seq, parse_word(cert["word"]))
        return result.to_json() == {"trivial": cert["trivial"], "syllables": cert["syllables"]}
    raise ValidationError(f"unknown certificate type {kind!r}")


def cmd_verify(args):
    cert = load_json_arg(args.certificate)
    if not isinstance(cert, dict):
        raise ValidationError("certificate must be a JSON object")
    return {"type": cert.get("type"), "verified": verify_certificate(cert)}


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fdl", description="Residually finite doubles of F_2: "
                     "membership, word problem, homology invariants.")
    parser.add_argument("--format", choices=("json", "text", "dot"), default=None)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        return p

    def seq_arg(p, required=True):
        p.add_argument("--seq", required=required,
                       help='inline JSON {"s0":..,"prefix":[..],"period":[..]} or a file path')

    p = command("seq-validate", cmd_seq_validate, "validate a multiplying sequence")
    seq_arg(p)
    p.add_argument("--count", type=int, default=8, help="how many leading values to print")

    p = command("member", cmd_member, "membership in H_s (or in <gens> with --gens)")
    seq_arg(p, required=False)
    p.add_argument("--gens", help="comma-separated generators of a f.g. subgroup")
    p.add_argument("--word", required=True)

    p = command("sk-member", cmd_sk_member, "membership in S_k")
    seq_arg(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--word", required=True)

    p = command("rewrite", cmd_rewrite, "express h_m inside S_k")
    seq_arg(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)

    p = command("word-problem", cmd_word_problem, "normal form of a word in G_s")
    seq_arg(p)
    p.add_argument("--word", required=True)

    for name, func in (("homology-h1", cmd_homology_h1), ("homology-h2", cmd_homology_h2)):
        p = command(name, func, f"closed-form {name[-2:].upper()} of G_s/<<a^m, ā^m>>")
        seq_arg(p)
        p.add_argument("--m", type=int, required=True)

    p = command("homology-oracle", cmd_homology_oracle, "truncated H1/H2 oracles")
    seq_arg(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--N", type=int, default=homology.DEFAULT_TRUNCATION)

    p = command("distinguish", cmd_distinguish, "certify G_s and G_t non-isomorphic")
    p.add_argument("--seq1", required=True)
    p.add_argument("--seq2", required=True)

    p = command("separate", cmd_separate, "finite cover separating a word from <gens>")
    p.add_argument("--gens", required=True)
    p.add_argument("--word", required=True)

    p = command("graph-export", cmd_graph_export, "export a core graph as DOT or JSON")
    seq_arg(p, required=False)
    p.add_argument("--kind", choices=("Hs", "Sk"), default="Hs")
    p.add_argument("--k", type=int)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--gens")

    p = command("recover", cmd_recover, "recover s_n from a membership oracle")
    seq_arg(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--limit", type=int, default=10**7)

    p = command("residually-p", cmd_residually_p, "is G_s residually a finite p-group")
    seq_arg(p)
    p.add_argument("--p", type=int, required=True)

    p = command("verify", cmd_verify, "re-check a certificate produced by another command")
    p.add_argument("certificate", help="inline JSON, a file path, or - for stdin")
    return parser


def _render(result, fmt: str) -> str:
    if isinstance(result, str):
        return result
    if fmt == "text":
        return "".join(f"{key}: {json.dumps(val)}\n" for key, val in result.items())
    return json.dumps(result) + "\n"


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.format == "dot" and args.command != "graph-export":
            raise UsageError("--format dot only applies to graph-export")
        if args.command == "graph-export" and args.format is None:
            args.format = "dot"
        result = args.func(args)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except ValidationError as exc:
        out.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_INVALID
    except CapExceeded as exc:
        out.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_CAP
    except (OSError, FdlError) as exc:
        out.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_INVALID
    out.write(_render(result, args.format or "json"))
    if args.command == "verify" and not result["verified"]:
        return EXIT_UNVERIFIED
    return EXIT_OK


def main() -> None:
    sys.exit(run())
