"""Command-line harness: ``onepoint verify ...``, ``onepoint table ...``, ``onepoint sweep``.

Exit status is 0 when every record meets its tolerance, 1 when one does not
and 2 for usage or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import random
import sys
from fractions import Fraction

import numpy as np

from . import coords, fock, involutions, modular, special
from .errors import DomainError, InputError, TruncationError
from .report import TransformReport, dump_report, report_document
from .series import EvalPoint
from .theta1pt import ALPHA, ONE, InsertionVector, PairJK, phi

CSV_HEADER = ["gamma", "j", "v", "u", "w", "tau", "z", "depth",
              "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err"]


def parse_complex(text: str) -> complex:
    """'a+bi', 'bi', 'a' (a 'j' suffix also works)."""
    t = str(text).strip().replace(" ", "").replace("I", "i").replace("i", "j")
    if t.endswith("j") and t[:-1] in ("", "+", "-"):
        t = t[:-1] + "1j"
    try:
        return complex(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot read complex number {text!r}") from None


def parse_complex_list(text: str) -> list[complex]:
    return [parse_complex(p) for p in str(text).split(",") if p]


def fmt_complex(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}i"


def _insertion(name: str) -> InsertionVector:
    return {"one": ONE, "alpha": ALPHA}[name]


class ExactRecord:
    """A record for checks done in exact or near-exact arithmetic."""

    def __init__(self, label: str, params: dict, defect, ok: bool):
        self.label = label
        self.params = params
        self.defect = defect
        self.ok = ok

    def to_dict(self):
        d = self.defect
        if isinstance(d, Fraction):
            d = f"{d.numerator}/{d.denominator}"
        return {"check": self.label, "params": self.params, "defect": d, "pass": self.ok}


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--gamma", default="S",
                   help="a,b,c,d, a word such as TS or ST^-1S, or 'random' (uses --seed)")
    p.add_argument("--module", type=int, default=0, choices=range(4), metavar="J")
    p.add_argument("--v", default="one", choices=("one", "alpha"))
    p.add_argument("--u", type=parse_complex, default=0j)
    p.add_argument("--w", type=parse_complex, default=0j)
    p.add_argument("--tau", type=parse_complex, default=1j)
    p.add_argument("--z", type=parse_complex_list, default=None)
    p.add_argument("--x", type=parse_complex, default=None)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--json", default=None, metavar="PATH")
    p.add_argument("--csv", default=None, metavar="PATH")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--data", default="lattice", choices=("lattice", "printed"),
                   help="modular data: the lattice S-matrix or the sign-flipped printed one")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="onepoint", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    ver = sub.add_parser("verify", help="run a verifier")
    ver.add_argument("check", choices=("pk", "prop1", "theorem1", "corollary", "prop-zero-modes",
                                       "section4", "lemma-c", "counting", "schur", "mode-sum",
                                       "cross-oracle"))
    _add_common(ver)
    ver.add_argument("--k", type=int, default=None, help="P_k index (default 2), or theta k for section4 (default 0)")
    ver.add_argument("--h", type=int, default=0)
    ver.add_argument("--n", type=int, default=1)
    ver.add_argument("--which", default="S-prime", choices=modular.SECTION4_CHECKS)
    ver.add_argument("--form", default="derived", choices=("derived", "printed"))
    ver.add_argument("--backend", default="closed", choices=("closed", "fock"))
    ver.add_argument("--max-n", type=int, default=6)

    tab = sub.add_parser("table", help="print modular data")
    tab.add_argument("which", choices=("smatrix", "tmatrix", "agamma"))
    tab.add_argument("--gamma", default="S")
    tab.add_argument("--data", default="lattice", choices=("lattice", "printed"))
    tab.add_argument("--json", default=None, metavar="PATH")

    sw = sub.add_parser("sweep", help="grid of tau values, CSV of residuals")
    _add_common(sw)
    sw.add_argument("--check", default="theorem1", choices=("theorem1", "corollary"))
    sw.add_argument("--grid", default="5,5", help="NX,NY points in Re tau x Im tau")
    sw.add_argument("--re-range", default="-0.5,0.5")
    sw.add_argument("--im-range", default="0.8,1.6")
    return parser


def _gamma(args) -> modular.SL2Word:
    """--gamma random draws a word of length <= 6 from --seed."""
    if args.gamma == "random":
        return modular.random_word(random.Random(args.seed))
    return modular.parse_gamma(args.gamma)


def _data(name):
    return modular.ModularData.lattice() if name == "lattice" else modular.ModularData.printed()


def _verify(args) -> tuple[list, dict]:
    """Run the selected check; return (records, tolerances)."""
    tol = args.tol
    jk = PairJK(args.u, args.w)
    v = _insertion(args.v)
    data = _data(args.data)
    c = args.check
    if c == "pk":
        z = (args.z or [0.3j])[0]
        rep = special.check_Pk_transform(2 if args.k is None else args.k, modular.parse_gamma(args.gamma).matrix,
                                         EvalPoint(args.tau, z), args.depth)
        rep.gamma = modular.parse_gamma(args.gamma)
        return [rep], {"abs": tol}
    if c == "prop1":
        z = args.z or [0.4j]
        x = args.x if args.x is not None else 0.9j
        rep = fock.prop1_residual(args.module, args.u, args.w, z, (v, x), args.tau,
                                  args.depth or fock.DEFAULT_DEPTH)
        return [rep], {"abs": tol}
    if c == "theorem1":
        g = _gamma(args)
        r5 = modular.verify_theorem1(g, args.module, v, jk, args.tau, args.depth, data, args.backend, tol)
        recs = [r5]
        if args.backend == "closed":
            recs.append(modular.verify_theorem1_expanded(g, args.module, v, jk, args.tau, args.depth, data, tol))
        return recs, {"abs": tol}
    if c == "corollary":
        g = _gamma(args)
        return [modular.verify_corollary(g, args.module, v, jk, args.tau, args.depth, data, tol)], {"abs": tol}
    if c == "prop-zero-modes":
        x = args.x if args.x is not None else -0.4 + 0.5j
        rep = modular.verify_prop_zero_modes(args.n, args.gamma, args.module, v, x, args.tau,
                                             args.depth or fock.DEFAULT_DEPTH, data)
        return [rep], {"abs": tol}
    if c == "section4":
        z = (args.z or [0.2 + 0.1j])[0]
        rep = modular.verify_section4(args.h, args.k or 0, args.which, args.tau, z, args.depth, args.form, data)
        return [rep], {"abs": tol}
    if c == "lemma-c":
        rng = np.random.default_rng(args.seed)
        recs = []
        for n in range(2, args.max_n + 1):
            for sigma in involutions.enumerate_involutions(n):
                if not sigma.pairs:
                    continue
                weights = {p: complex(*rng.normal(size=2)) for p in sigma.pairs}
                lhs, rhs = involutions.lemma_c_check(sigma, weights)
                rel = abs(lhs - rhs) / max(abs(rhs), 1e-300)
                recs.append(ExactRecord("lemma-c", {"n": n, "pairs": [list(p) for p in sigma.pairs]},
                                        rel, rel <= 1e-13))
        return recs, {"rel": 1e-13}
    if c == "counting":
        recs = []
        for s in range(0, 9):
            for t in range(0, 9 - s):
                table = involutions.count_partition_check(s, t)
                bad = [k for k, (cnt, f) in table.items() if cnt != f]
                total = sum(cnt for cnt, _ in table.values())
                ok = not bad and total == involutions.telephone(s + t)
                recs.append(ExactRecord("counting", {"s": s, "t": t, "classes": len(table)}, len(bad), ok))
        return recs, {"exact": 0}
    if c == "schur":
        recs = []
        top = args.depth if args.depth is not None else 6
        for st in fock.enumerate_basis(0, top, charges=[Fraction(0)]):
            a = fock.exp_bracket1(st)
            b = fock.schur_action(st)
            keys = set(a) | set(b)
            err = max((abs(a.get(k, 0) - b.get(k, 0)) for k in keys), default=0.0)
            recs.append(ExactRecord("schur", {"partition": list(st.partition)}, err, err <= 1e-12))
        return recs, {"abs": 1e-12}
    if c == "mode-sum":
        recs = []
        for wt in (1, 2, 3):
            for k in range(-3, 5):
                d = coords.mode_sum_identity_check(wt, k, 12)
                recs.append(ExactRecord("mode-sum", {"wt": wt, "k": k, "i_max": 12}, d, d == 0))
        return recs, {"exact": 0}
    if c == "cross-oracle":
        depth = args.depth or fock.DEFAULT_DEPTH
        recs = []
        for tau in (1j, 0.6 + 1.2j):
            for j in range(4):
                for u in (0, 0.3 + 0.1j):
                    for w in (0, 0.2):
                        for vv in (ONE, ALPHA):
                            pj = PairJK(u, w)
                            lhs = phi(j, vv, pj, tau)
                            rhs, tail = fock.phi_fock(j, vv, pj, tau, depth, return_tail=True)
                            recs.append(TransformReport.build(
                                None, {"check": "cross-oracle", "j": j, "v": [vv.a, vv.b], "u": u,
                                       "w": w, "tau": tau, "depth": depth}, lhs, rhs, tail_bound=tail))
        return recs, {"abs": tol}
    raise InputError(f"unknown check {c!r}")


def _record_ok(r, tol) -> bool:
    if isinstance(r, ExactRecord):
        return r.ok
    return r.passed(tol)


def _print_record(r, tol, out):
    if isinstance(r, ExactRecord):
        status = "PASS" if r.ok else "FAIL"
        print(f"{status} {r.label} {r.params} defect={r.defect}", file=out)
        return
    status = "PASS" if r.passed(tol) else "FAIL"
    g = r.gamma.label() if hasattr(r.gamma, "label") else "-"
    p = r.params
    extra = " ".join(f"{k}={p[k]}" for k in ("j", "h", "k", "which", "n") if k in p)
    print(f"{status} {p.get('check', '?')} gamma={g} {extra} abs_err={r.abs_err:.3e} "
          f"lhs={fmt_complex(r.lhs)} rhs={fmt_complex(r.rhs)}", file=out)


def _csv_rows(records, v_name):
    rows = []
    for r in records:
        if not isinstance(r, TransformReport):
            continue
        p = r.params
        g = r.gamma.label() if hasattr(r.gamma, "label") else ""
        z = p.get("z", "")
        if isinstance(z, list):
            z = ";".join(fmt_complex(complex(x)) for x in z)
        elif isinstance(z, complex):
            z = fmt_complex(z)
        rows.append([g, p.get("j", ""), v_name(p), fmt_complex(complex(p.get("u", 0))),
                     fmt_complex(complex(p.get("w", 0))), fmt_complex(complex(p.get("tau", 0))),
                     z, p.get("depth", ""), repr(r.lhs.real), repr(r.lhs.imag),
                     repr(r.rhs.real), repr(r.rhs.imag), repr(r.abs_err)])
    return rows


def _v_name(p):
    v = p.get("v")
    if not v:
        return ""
    a, b = (complex(x) for x in v)
    if b == 0:
        return "one"
    if a == 0:
        return "alpha"
    return f"{fmt_complex(a)}*one+{fmt_complex(b)}*alpha"


def _write_outputs(args, command, records, tolerances, passed):
    if getattr(args, "json", None):
        params = {k: v for k, v in vars(args).items() if k not in ("json", "csv")}
        dump_report(report_document(command, params, records, tolerances, passed), args.json)
    if getattr(args, "csv", None):
        with open(args.csv, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(CSV_HEADER)
            wr.writerows(_csv_rows(records, _v_name))


def _table(args, out) -> int:
    data = _data(args.data)
    if args.which == "smatrix":
        m = data.S
    elif args.which == "tmatrix":
        m = data.T
    else:
        m = modular.a_gamma(args.gamma, data)
    for row in m:
        print("  ".join(f"{x.real:+.6f}{x.imag:+.6f}i" for x in row), file=out)
    if args.json:
        doc = report_document(f"table {args.which}", {"gamma": args.gamma, "data": args.data},
                              [{"row": i, "entries": [complex(x) for x in row]} for i, row in enumerate(m)],
                              {}, True)
        dump_report(doc, args.json)
    return 0


def _sweep(args, out) -> tuple[list, dict]:
    nx, ny = (int(x) for x in args.grid.split(","))
    x0, x1 = (float(x) for x in args.re_range.split(","))
    y0, y1 = (float(x) for x in args.im_range.split(","))
    g = _gamma(args)
    data = _data(args.data)
    v = _insertion(args.v)
    jk = PairJK(args.u, args.w)
    recs = []
    for y in np.linspace(y0, y1, ny):
        for x in np.linspace(x0, x1, nx):
            tau = complex(x, y)
            if args.check == "theorem1":
                recs.append(modular.verify_theorem1(g, args.module, v, jk, tau, args.depth, data, tol=args.tol))
            else:
                recs.append(modular.verify_corollary(g, args.module, v, jk, tau, args.depth, data, args.tol))
    return recs, {"abs": args.tol}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "table":
            return _table(args, out)
        if args.command == "verify":
            records, tolerances = _verify(args)
            command = f"verify {args.check}"
        else:
            records, tolerances = _sweep(args, out)
            command = "sweep"
    except (DomainError, InputError, TruncationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    tol = args.tol
    passed = all(_record_ok(r, tol) for r in records)
    for r in records:
        _print_record(r, tol, out)
    _write_outputs(args, command, records, tolerances, passed)
    return 0 if passed else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
