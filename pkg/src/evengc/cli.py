"""Command-line interface: ``evengc <command> ...``.

Exit status is 0 on success, 1 when an invariant check fails and 2 for
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Callable

from . import graphs, homology, links, surgery
from .complex import GraphVector, delta_matrix
from .graphs import GraphFormatError, ResourceLimitError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_k_range(text: str) -> list[int]:
    """``"2"``, ``"1..5"`` or ``"1,3,5"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            ks = list(range(int(lo), int(hi) + 1))
        else:
            ks = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad k range {text!r}") from None
    if not ks or min(ks) < 1:
        raise UsageError("k must be at least 1")
    return ks


def load_graph(arg: str) -> graphs.LabelledGraph:
    """Preset name, inline text or JSON, or a path to a file holding either."""
    if arg in graphs.NAMED_GRAPHS:
        return graphs.NAMED_GRAPHS[arg]
    if os.path.isfile(arg):
        with open(arg) as fh:
            arg = fh.read()
    return graphs.parse_graph(arg)


def _emit(obj, as_json: bool, text: Callable[[], str]) -> None:
    print(json.dumps(obj, sort_keys=True) if as_json else text())


# -- commands -------------------------------------------------------------------


def cmd_dims(args) -> int:
    ks = parse_k_range(args.k)
    reports = [homology.dims_report(k, args.cap_vertices) for k in ks]
    if args.json:
        print(json.dumps(reports[0] if len(reports) == 1 else reports, sort_keys=True))
        return EXIT_OK
    print(f"{'k':>3}  {'dim H0':>6}  {'dim A_k':>7}  dims by excess")
    for r in reports:
        print(f"{r['k']:>3}  {r['dim_H0']:>6}  {r['dim_Ak']:>7}  {r['dims_by_excess']}")
    return EXIT_OK


def pairing_report(def_graph, test_graph, d: int = 4, alpha: int = 1, beta: int = 1, cap: int = graphs.DEFAULT_VERTEX_CAP) -> dict:
    base, _ = graphs.canonical_form(def_graph)
    if any(x != 3 for x in base.underlying.valences()):
        raise UsageError("the surgery graph must be trivalent")
    if test_graph.degree != base.degree or test_graph.excess != 0:
        raise UsageError(
            f"test graph has (k, excess) = ({test_graph.degree}, {test_graph.excess}), "
            f"expected ({base.degree}, 0)"
        )
    arrow = surgery.orient_arrows(base)
    data = surgery.surgery_data(arrow, d, alpha, beta)
    space = homology.ak_space(base.degree, cap)
    value = surgery.evaluate_I(data, test_graph)
    zk = surgery.z_k(data, space)
    base_vec = homology.reduce_to_ak(_class_vector(base), space) if not base.orientation_reversing else [0] * space.dim
    eps = surgery.global_sign(data)
    return {
        "k": base.degree,
        "d": d,
        "I": str(value),
        "aut_order": base.aut_order,
        "orientation_reversing": base.orientation_reversing,
        "z_k": [str(c) for c in zk],
        "base_in_Ak": [str(c) for c in base_vec],
        "sign": eps,
        "Ak_basis": [str(c) for c in space.basis_classes()],
        "arrow": arrow.to_json(),
    }


def _class_vector(cg):
    return GraphVector(cg.degree, 0, {cg: 1})


def cmd_pairing(args) -> int:
    rep = pairing_report(load_graph(args.defn), load_graph(args.test), args.d, args.alpha, args.beta, args.cap_vertices)

    def text():
        lines = [
            f"k = {rep['k']}, d = {rep['d']}",
            f"I(test) = {rep['I']}",
            f"|Aut base| = {rep['aut_order']}"
            + (" (orientation-reversing automorphism: class is zero)" if rep["orientation_reversing"] else ""),
            f"A_k basis: {rep['Ak_basis']}",
            f"z_k = {rep['z_k']}",
            f"[base] in A_k = {rep['base_in_Ak']}",
            f"sign = {rep['sign']:+d}",
        ]
        return "\n".join(lines)

    _emit(rep, args.json, text)
    return EXIT_OK


def cmd_link(args) -> int:
    if args.preset == "hopf":
        link = links.make_hopf(args.p, args.q, args.d, args.standard_orientation)
        pair = (0, 1)
    elif args.preset == "split":
        link = links.make_split(args.p, args.q, args.d)
        pair = (0, 1)
    else:
        link = links.make_borromean(args.p, args.q, args.r, args.d)
        try:
            i, j = (int(x) - 1 for x in args.pair.split(","))
        except ValueError:
            raise UsageError(f"bad --pair {args.pair!r}") from None
        if not (0 <= i < 3 and 0 <= j < 3 and i != j):
            raise UsageError("--pair needs two distinct components among 1,2,3")
        pair = (i, j)
    a, b = link[pair[0]], link[pair[1]]
    res = links.gauss_linking(
        a, b, args.samples, args.seed, args.threads, args.antithetic, link.convention
    )
    out = res.to_json()
    _emit(out, args.json, lambda: f"Lk estimate {res.estimate:.6f} +/- {res.stderr:.6f} "
          f"({res.samples} samples, seed {res.seed}); {res.convention}")
    return EXIT_OK


def cmd_canon(args) -> int:
    g = load_graph(args.graph)
    if not g.is_simple():
        out = {"zero": True, "reason": "self-loop or multiple edge"}
        _emit(out, args.json, lambda: "zero class (self-loop or multiple edge)")
        return EXIT_OK
    cg, sign = graphs.canonical_form(g)
    out = {
        "canonical": graphs.graph_to_json(cg.underlying),
        "sign": sign,
        "aut_order": cg.aut_order,
        "orientation_reversing": cg.orientation_reversing,
        "zero": cg.orientation_reversing,
    }
    _emit(out, args.json, lambda: f"{cg} sign {sign:+d} |Aut| {cg.aut_order}"
          + (" zero (odd automorphism)" if cg.orientation_reversing else ""))
    return EXIT_OK


def cmd_basis(args) -> int:
    basis = graphs.enumerate_basis(args.k, args.excess, args.cap_vertices)
    if args.json:
        print(json.dumps([graphs.graph_to_json(c.underlying) for c in basis]))
    else:
        for c in basis:
            print(f"{c}  |Aut| {c.aut_order}")
    return EXIT_OK


def cmd_matrix(args) -> int:
    dm = delta_matrix(args.k, args.excess, args.cap_vertices)
    sys.stdout.write(dm.to_sms())
    return EXIT_OK


# -- selftest ---------------------------------------------------------------------


def _check_delta_squared():
    for k in range(1, 5):
        for ell in homology.excess_range(k):
            a = delta_matrix(k, ell).matrix
            b = delta_matrix(k, ell + 1).matrix
            if not (b @ a).is_zero():
                return False
    return True


def _check_euler():
    return all(homology.euler_characteristic_check(k) for k in range(1, 5))


def _check_ak_dims():
    return [homology.ak_space(k).dim for k in range(1, 6)] == [0, 1, 0, 0, 1]


def _check_h0():
    return all(homology.dim_cohomology(k, 0) == homology.ak_space(k).dim for k in range(1, 6))


def _check_antipodal():
    return all(links.antipodal_symmetry_check(d, 20, seed=0) for d in range(2, 6))


def _check_triple():
    return links.borromean_triple_sign(1, 1, 1, 3) == 1 and links.borromean_triple_sign(2, 2, 1, 4) == 1


def _check_int_eta():
    for d in range(4, 10):
        for k in range(1, d - 1):
            r = surgery.derive_int_eta_signs(k, d)
            if (r["int_b_eta"], r["int_a_eta"]) != (surgery.int_b_eta_sign(k, d), surgery.int_a_eta_sign(k, d)):
                return False
    return True


def _check_w4():
    base, _ = graphs.canonical_form(graphs.NAMED_GRAPHS["K4"])
    data = surgery.surgery_data(surgery.orient_arrows(base), 4)
    contrib = surgery.sigma_contributions(data, base)
    return len(contrib) == 24 and len(set(contrib.values())) == 1 and abs(sum(contrib.values())) == 24


def _check_hopf():
    link = links.make_hopf(1, 2, 4)
    res = links.gauss_linking(link[0], link[1], 100_000, seed=0)
    return abs(res.estimate - 1) <= max(0.05, 3 * res.stderr)


SELFTEST_CHECKS = [
    ("delta_squared_zero", _check_delta_squared, False),
    ("euler_characteristic", _check_euler, False),
    ("ak_dimensions", _check_ak_dims, False),
    ("h0_equals_ak", _check_h0, False),
    ("int_eta_signs", _check_int_eta, False),
    ("w4_pairing", _check_w4, False),
    ("antipodal_symmetry", _check_antipodal, False),
    ("borromean_triple_sign", _check_triple, False),
    ("hopf_linking_mc", _check_hopf, True),
]


def cmd_selftest(args) -> int:
    for name, fn, is_mc in SELFTEST_CHECKS:
        if is_mc and args.quick:
            print(f"skip {name}")
            continue
        t0 = time.perf_counter()
        try:
            ok = bool(fn())
        except Exception as exc:  # a crash counts as a failed invariant
            print(f"FAIL {name}: {exc}")
            return EXIT_FAIL
        if not ok:
            print(f"FAIL {name}")
            return EXIT_FAIL
        print(f"ok   {name} ({time.perf_counter() - t0:.2f}s)")
    return EXIT_OK


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="evengc", description="Even graph complex and surgery pairing tools")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, json_flag=True):
        if json_flag:
            p.add_argument("--json", action="store_true", help="JSON output")
        p.add_argument("--cap-vertices", type=int, default=graphs.DEFAULT_VERTEX_CAP,
                       help="largest vertex count to enumerate (default %(default)s)")

    p = sub.add_parser("dims", help="dimensions of graph spaces, H^0 and A_k")
    p.add_argument("--k", required=True, help="degree or range, e.g. 2 or 1..5")
    common(p)
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("pairing", help="evaluate I(test) and z_k for surgery along a graph")
    p.add_argument("--def", dest="defn", required=True, help="surgery graph (preset, text, JSON or file)")
    p.add_argument("--test", required=True, help="test graph (preset, text, JSON or file)")
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--alpha", type=int, choices=(-1, 1), default=1, help="triple integral at type I vertices")
    p.add_argument("--beta", type=int, choices=(-1, 1), default=1, help="triple integral at type II vertices")
    common(p)
    p.set_defaults(func=cmd_pairing)

    p = sub.add_parser("link", help="Monte Carlo Gauss linking integral")
    p.add_argument("--preset", choices=("hopf", "borromean", "split"), required=True)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--pair", default="1,3", help="Borromean components, e.g. 1,3")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--antithetic", action="store_true")
    p.add_argument("--standard-orientation", action="store_true",
                   help="boundary orientation on both Hopf components")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_link)

    p = sub.add_parser("canon", help="canonical form of a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("basis", help="list basis classes in a bigrade")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--excess", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("matrix", help="differential matrix in SMS triplet format")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--excess", type=int, default=0)
    common(p, json_flag=False)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("selftest", help="run invariant checks")
    p.add_argument("--quick", action="store_true", help="skip Monte Carlo checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def _fill_link_defaults(args) -> None:
    if args.command != "link":
        return
    if args.preset == "borromean":
        defaults = {"p": args.d - 2, "q": args.d - 2, "r": 1}
    else:
        defaults = {"p": 1, "q": args.d - 2, "r": None}
    for key, val in defaults.items():
        if getattr(args, key) is None:
            setattr(args, key, val)
    if args.samples < 2 or args.threads < 1:
        raise UsageError("--samples must be at least 2 and --threads at least 1")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        _fill_link_defaults(args)
        return args.func(args)
    except (UsageError, GraphFormatError, ResourceLimitError, links.LinkError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
