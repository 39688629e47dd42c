"""Command line interface: ``higher-ar <command> ...``."""
from __future__ import annotations

import argparse
import random
import sys
import time
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import errors
from .almostsplit import (build_base_sequence, extract_chain_map, tensor_almost_split,
                          verify_almost_split)
from .complexes import format_complex, parse_complex
from .ctcat import TENSOR, ASCII_TENSOR, ar_quiver_dot, fold_tensor, knit, label_table, slice_listing
from .quiver import QuiverSpec, format_quiver, parse_quiver

EXIT_CODES = {
    errors.ParseError: 2,
    errors.RepInfinite: 3,
    errors.HeterogeneousFactors: 4,
    errors.SliceMismatch: 5,
    errors.VerificationFailed: 6,
}


def read_quiver(path: str) -> QuiverSpec:
    p = Path(path)
    if p.exists():
        text = p.read_text(encoding="utf-8")
    else:
        bundled = resources.files("higher_ar") / "data" / p.name
        if not bundled.is_file():
            raise errors.ParseError(f"cannot read quiver file {path}")
        text = bundled.read_text(encoding="utf-8")
    return parse_quiver(text, p.stem or "Q")


class _Categories:
    """Knit each distinct quiver once so that repeated factors share one category."""

    def __init__(self):
        self._cache = {}

    def get(self, q: QuiverSpec):
        key = (q.name, format_quiver(q))
        if key not in self._cache:
            self._cache[key] = knit(q)
        return self._cache[key]


def split_start(start: str, count: int) -> list[str]:
    parts = [p.strip() for p in start.replace(ASCII_TENSOR, TENSOR).split(TENSOR)]
    if len(parts) != count or not all(parts):
        raise errors.ParseError(f"start label {start!r} must have {count} factor(s)")
    return parts


# ---------------------------------------------------------------------------
# sequence files


def format_sequence_file(quivers: Sequence[QuiverSpec], complex_text: str) -> str:
    out = ["# higher-ar sequence", f"factors = {len(quivers)}"]
    for q in quivers:
        out.append(f"factor {q.name}")
        out += ["  " + line for line in format_quiver(q).splitlines()]
        out.append("end")
    return "\n".join(out) + "\n" + complex_text


def parse_sequence_file(text: str, cats: _Categories | None = None):
    cats = cats or _Categories()
    lines = text.splitlines()
    k = 0
    quivers = []
    count = None
    while k < len(lines):
        line = lines[k].strip()
        if not line or line.startswith("#"):
            k += 1
        elif line.startswith("factors"):
            try:
                count = int(line.split("=", 1)[1])
            except (IndexError, ValueError):
                raise errors.ParseError(f"bad factor count line {line!r}") from None
            k += 1
        elif line.startswith("factor "):
            name = line.split(None, 1)[1].strip()
            body = []
            k += 1
            while k < len(lines) and lines[k].strip() != "end":
                body.append(lines[k])
                k += 1
            if k == len(lines):
                raise errors.ParseError(f"factor {name}: missing 'end'")
            quivers.append(parse_quiver("\n".join(body), name))
            k += 1
        else:
            break
    if count is None or count != len(quivers) or not quivers:
        raise errors.ParseError("sequence file header does not declare its factor quivers")
    cat = fold_tensor([cats.get(q) for q in quivers])
    return quivers, cat, parse_complex("\n".join(lines[k:]), cat)


# ---------------------------------------------------------------------------
# commands


def cmd_indecs(args) -> int:
    cat = knit(read_quiver(args.quiver))
    if args.format == "dot":
        sys.stdout.write(ar_quiver_dot(cat))
    else:
        sys.stdout.write(label_table(cat))
        sys.stdout.write(slice_listing(cat))
        l = cat.l
        sys.stdout.write(f"labels: {len(cat.labels)}  homogeneous: {'l = ' + str(l) if l else 'no'}\n")
    return 0


def cmd_arquiver(args) -> int:
    cat = knit(read_quiver(args.quiver))
    sys.stdout.write(ar_quiver_dot(cat) if args.format == "dot" else slice_listing(cat))
    return 0


def _build(quivers: list[QuiverSpec], start: str, slice_: int | None):
    cats = _Categories()
    bases = [cats.get(q) for q in quivers]
    names = split_start(start, len(quivers))
    labels = [c.label(n) for c, n in zip(bases, names)]
    slices = {lab.slice for lab in labels}
    if len(slices) != 1:
        raise errors.SliceMismatch("start labels lie in different slices: "
                                   + ", ".join(f"{lab}:{lab.slice}" for lab in labels))
    if slice_ is not None and slices != {slice_}:
        raise errors.SliceMismatch(f"start labels lie in slice {slices.pop()}, not {slice_}")
    seq = build_base_sequence(bases[0], labels[0])
    for cat, lab in zip(bases[1:], labels[1:]):
        seq = tensor_almost_split(extract_chain_map(seq), extract_chain_map(build_base_sequence(cat, lab)))
    return seq


def _emit(quivers, seq, out: str | None) -> None:
    text = format_sequence_file(quivers, format_complex(seq.complex))
    if out:
        Path(out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    report = seq.report if seq.report is not None else verify_almost_split(seq.complex)
    sys.stdout.write(report.format())
    if not report.passed:
        raise errors.VerificationFailed("sequence failed verification")


def cmd_arseq(args) -> int:
    q = read_quiver(args.quiver)
    _emit([q], _build([q], args.start, None), args.output)
    return 0


def cmd_tensor_seq(args) -> int:
    quivers = [read_quiver(p) for p in args.quivers]
    _emit(quivers, _build(quivers, args.start, args.slice), args.output)
    return 0


def cmd_verify(args) -> int:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as e:
        raise errors.ParseError(f"cannot read {args.file}: {e.strerror}") from None
    _, _, c = parse_sequence_file(text)
    report = verify_almost_split(c)
    sys.stdout.write(report.format())
    if not report.passed:
        raise errors.VerificationFailed("sequence is not almost split")
    return 0


def selftest(out=None) -> bool:
    """Invariant and oracle checks on the bundled A5 quiver."""
    out = out or sys.stdout
    from . import oracle
    from .almostsplit import criterion_holds, homotopy_square_equiv
    from .complexes import cone, is_exact, realize_map
    from .ctcat import homogeneity, tensor_category

    results = []

    def check(name, fn):
        t0 = time.perf_counter()
        try:
            ok = bool(fn())
        except (errors.HigherARError, AssertionError) as e:
            ok = False
            name += f" [{type(e).__name__}: {e}]"
        results.append(ok)
        out.write(f"selftest {name}: {'pass' if ok else 'FAIL'} ({time.perf_counter() - t0:.2f}s)\n")

    q = read_quiver("a5.q")
    cat = knit(q)
    tc = tensor_category(cat, cat)
    rng = random.Random(oracle.SEED)
    check("knit A5 has 15 labels, l = 3", lambda: len(cat.labels) == 15 and homogeneity(cat) == 3)
    check("base category structure constants", lambda: cat.validate() is None)
    check("tensor category sampled structure constants", lambda: tc.validate(sample=200) is None)

    def hom_agreement():
        for _ in range(25):
            x, y = rng.choice(tc.labels), rng.choice(tc.labels)
            (a, b), (c, d) = tc.split(x), tc.split(y)
            ex = oracle.explicit_tensor(cat.reps[a], cat.reps[b])
            ey = oracle.explicit_tensor(cat.reps[c], cat.reps[d])
            if len(oracle.hom_direct(ex, ey)) != tc.hom_dim(x, y):
                return False
        return True

    check("oracle Hom dimensions", hom_agreement)

    def random_pair():
        s = rng.randrange(3)
        return oracle.random_radical_complex(cat, rng, s), oracle.random_radical_complex(cat, rng, s)

    check("Kunneth on random complexes", lambda: all(oracle.kunneth_check(*random_pair()) for _ in range(30)))

    def base_sequences():
        for lab in cat.labels:
            if cat.tau_next(lab) is None:
                continue
            pair = extract_chain_map(build_base_sequence(cat, lab))
            if not verify_almost_split(cone(pair.phi)).passed or not criterion_holds(pair.phi):
                return False
        return True

    check("base almost split sequences and criterion", base_sequences)

    def quasi_iso_routes():
        for _ in range(20):
            f = oracle.random_chain_map(*random_pair(), rng)
            if is_exact(cone(f)) != oracle.induced_homology_iso(realize_map(f)):
                return False
        return True

    check("quasi-iso via cone agrees with induced homology", quasi_iso_routes)
    check("uniqueness up to homotopy at M5", lambda: homotopy_square_equiv(
        extract_chain_map(build_base_sequence(cat, cat.label("P2"))).phi,
        extract_chain_map(build_base_sequence(cat, cat.label("P2"), variant=1)).phi) is not None)
    check("2-fold tensor sequence P2⊗P5", lambda: _build([q, q], "P2⊗P5", 0).report.passed)
    return all(results)


def cmd_selftest(args) -> int:
    if not selftest():
        raise errors.VerificationFailed("selftest failed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="higher-ar",
                                description="Higher Auslander-Reiten sequences for tensor products of path algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("indecs", help="list the indecomposables of a Dynkin quiver")
    s.add_argument("quiver")
    s.add_argument("--format", choices=["text", "dot"], default="text")
    s.set_defaults(func=cmd_indecs)

    s = sub.add_parser("arquiver", help="Auslander-Reiten quiver as DOT")
    s.add_argument("quiver")
    s.add_argument("--format", choices=["text", "dot"], default="dot")
    s.set_defaults(func=cmd_arquiver)

    s = sub.add_parser("arseq", help="almost split sequence starting at a label")
    s.add_argument("quiver")
    s.add_argument("--start", required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_arseq)

    s = sub.add_parser("tensor-seq", help="higher almost split sequence over a tensor product")
    s.add_argument("quivers", nargs="+")
    s.add_argument("--start", required=True, help="factor labels joined with ⊗ or (x)")
    s.add_argument("--slice", type=int)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_tensor_seq)

    s = sub.add_parser("verify", help="re-verify a sequence file")
    s.add_argument("file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("selftest", help="run the built-in invariant and oracle checks")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except errors.HigherARError as e:
        code = next((c for cls, c in EXIT_CODES.items() if isinstance(e, cls)), 1)
        sys.stdout.flush()
        print(f"error: {type(e).__name__}: {e}".splitlines()[0], file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
