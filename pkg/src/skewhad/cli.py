"""Command line: skewhad <command> [options].

Exit codes: 0 success, 1 usage or input error, 2 verification failure,
3 resource budget exceeded (partial results are still written and flagged).
"""

import argparse
import hashlib
import logging
import os
import sys
import time
from itertools import combinations

from . import kernels
from .canonical import canon_hex, sh_canonical_form
from .codes import code_report
from .io import ParseError, format_matrices, read_config, read_matrices
from .matrix import (
    as_matrix, count_A_quadruples, kappa_identity, matrix_skew_type, matrix_type, profile_key,
    skew_profile, validate,
)
from .schemes import scheme_census, scheme_from, verify_scheme
from .search import (
    BudgetExceeded, CheckpointMismatch, SearchConfig, classify_all, classify_skew_type,
    first_solutions, k_upper_bound, max_Jk, orderly_generate,
)

log = logging.getLogger("skewhad")

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_BUDGET = 0, 1, 2, 3

# classes per order and per skew type, as published
TABLE1 = {1: 1, 2: 1, 4: 1, 8: 1, 12: 1, 16: 2, 20: 2, 24: 16, 28: 65}
TABLE2 = {
    4: {(0, 2): 1}, 8: {(0, 2): 1}, 12: {(1, 1): 1}, 16: {(0, 2): 2},
    20: {(1, 1): 1, (1, 2): 1}, 24: {(0, 2): 14, (1, 0): 1, (2, 1): 1},
    28: {(1, 1): 43, (1, 2): 21, (2, 2): 1},
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _skew_type(text):
    try:
        t, e = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected T,E, got {text!r}")
    return (t, e)


def _orders(text):
    if ".." in text:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
        return [n for n in sorted(TABLE1) if lo <= n <= hi]
    return [int(x) for x in text.split(",")]


def _depths(text):
    return tuple(int(x) for x in text.split(",") if x)


def build_parser():
    p = _Parser(prog="skewhad", description="Skew Hadamard classification toolkit")
    p.add_argument("--config", help="key=value file supplying any flag (command-line flags win)")
    p.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def search_opts(q):
        q.add_argument("--workers", type=int, default=None)
        q.add_argument("--dedup-depths", type=_depths, default=None)
        q.add_argument("--node-budget", type=int, default=0)
        q.add_argument("--checkpoint", default=None)
        q.add_argument("--stop-after", type=int, default=0, help="stop after this many work units")

    q = sub.add_parser("classify", help="full SH-classification of one order")
    q.add_argument("--order", type=int, required=True)
    q.add_argument("--skew-type", type=_skew_type, default=None)
    q.add_argument("--out", default=None, help="directory for census.tsv and matrices.txt")
    search_opts(q)

    q = sub.add_parser("search", help="seeded search for one skew type")
    q.add_argument("--order", type=int, required=True)
    q.add_argument("--skew-type", type=_skew_type, required=True)
    q.add_argument("--limit", type=int, default=0)
    q.add_argument("--resume", default=None, help="checkpoint file (created if missing)")
    q.add_argument("--out", default=None)
    search_opts(q)

    for name, helptext in [("analyze", "invariants of each matrix"), ("canon", "canonical forms"),
                           ("code", "ternary code report")]:
        q = sub.add_parser(name, help=helptext)
        q.add_argument("--in", dest="infile", required=True)

    q = sub.add_parser("scheme", help="association schemes A(H, i)")
    q.add_argument("--in", dest="infile", required=True)
    g = q.add_mutually_exclusive_group()
    g.add_argument("--row", type=int, default=None, help="1-based row")
    g.add_argument("--all-rows", action="store_true")
    q.add_argument("--out", default=None, help="census TSV path")

    q = sub.add_parser("orderly", help="orderly generation of canonical leading blocks")
    q.add_argument("--order", type=int, required=True)
    q.add_argument("--depth", type=int, required=True)
    q.add_argument("--from-j", type=int, default=None, help="start from the all-+1 block J_k")

    q = sub.add_parser("bound-k", help="upper bound on k with J_k inside")
    q.add_argument("--order", type=int, required=True)

    q = sub.add_parser("verify", help="compare classifications with the published tables")
    q.add_argument("--suite", choices=["all", "paper"], default="paper")
    q.add_argument("--orders", type=_orders, default=_orders("4..28"))
    search_opts(q)
    return p


BOOL_KEYS = {"all_rows", "verbose"}


def _config_argv(argv):
    """Expand ``--config FILE`` into flags placed before the user's own, so the command line wins."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise UsageError("--config needs a file")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2:]
    try:
        cfg = read_config(path)
    except OSError as exc:
        raise UsageError(str(exc))
    cmd = next((k for k, a in enumerate(rest) if a in COMMANDS), None)
    if cmd is None:
        raise UsageError("no command given")
    extra = []
    for k, v in cfg.items():
        flag = "--" + k.replace("_", "-")
        if k == "infile":
            flag = "--in"
        if k in BOOL_KEYS:
            if v.lower() in ("1", "true", "yes"):
                extra.append(flag)
        else:
            extra += [flag, v]
    return rest[: cmd + 1] + extra + rest[cmd + 1:]


def _search_config(args, limit=0, checkpoint=None):
    workers = args.workers or int(os.environ.get("SKEWHAD_WORKERS", "1"))
    cfg = SearchConfig(workers=workers, limit=limit, node_budget=args.node_budget,
                       checkpoint=checkpoint or args.checkpoint, stop_after=args.stop_after)
    if args.dedup_depths is not None:
        cfg.dedup_depths = args.dedup_depths
    return cfg


def _census_lines(census):
    out = ["id\torder\tskew_type\tprofile_hash\tcanonical"]
    mats = []
    idx = 0
    for st in sorted(census.by_type):
        for key in census.by_type[st]:
            from .search import key_to_matrix

            m = key_to_matrix(key, census.n)
            ph = hashlib.sha256(repr(profile_key(skew_profile(m, check=False))).encode()).hexdigest()[:16] \
                if census.n >= 4 else "-"
            stt = f"{st[0]},{st[1]}" if st else "-"
            out.append(f"{idx}\t{census.n}\t{stt}\t{ph}\t{key}")
            mats.append((m, f"id {idx} skew type {stt}"))
            idx += 1
    return out, mats


def cmd_classify(args):
    cfg = _search_config(args)
    only = [args.skew_type] if args.skew_type else None
    census = classify_all(args.order, cfg, only=only)
    lines, mats = _census_lines(census)
    for st in sorted(census.by_type):
        label = f"({st[0]},{st[1]})" if st else "all"
        print(f"skew type {label}: {len(census.by_type[st])}")
    print(f"{census.total} classes" + ("" if census.complete else " (incomplete)"))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "census.tsv"), "w") as fh:
            fh.write("\n".join(lines) + "\n")
        with open(os.path.join(args.out, "matrices.txt"), "w") as fh:
            fh.write(format_matrices([m for m, _ in mats], [c for _, c in mats]))
    return EXIT_OK if census.complete else EXIT_BUDGET


def cmd_search(args):
    t0 = time.time()
    if args.limit and not args.resume:
        mats, exhausted, nodes = first_solutions(args.order, args.skew_type, args.limit, args.node_budget)
        complete = not exhausted
    else:
        cfg = _search_config(args, limit=args.limit, checkpoint=args.resume)
        res = classify_skew_type(args.order, args.skew_type, cfg)
        mats, nodes = res.matrices, res.nodes
        complete = res.complete or (args.limit and len(mats) >= args.limit)
    print(f"found {len(mats)} matrices of skew type {args.skew_type} in {time.time() - t0:.1f}s ({nodes} nodes)")
    text = format_matrices(mats, [f"skew type {args.skew_type[0]},{args.skew_type[1]}"] * len(mats))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.limit and len(mats) >= args.limit:
        return EXIT_OK
    return EXIT_OK if complete else EXIT_BUDGET


def _load(args):
    try:
        return read_matrices(args.infile)
    except OSError as exc:
        raise UsageError(str(exc))


def cmd_analyze(args):
    status = EXIT_OK
    for idx, m in enumerate(_load(args)):
        v = validate(m)
        print(f"matrix {idx}: order {m.n} hadamard={v['hadamard']} skew={v['skew']}")
        if not v["skew"]:
            status = EXIT_VERIFY
            continue
        if m.n < 4:
            continue
        prof = skew_profile(m)
        print(f"  type {matrix_type(m)}  skew type {matrix_skew_type(m)}")
        print("  profile " + " ".join(f"({t},{e}):{c}" for (t, e), c in sorted(prof.items())))
        print(f"  max_Jk {max_Jk(m)} (bound {k_upper_bound(m.n)})")
        try:
            print(f"  A-quadruples {count_A_quadruples(m)}")
            for tr in combinations(range(m.n), 3):
                kappa_identity(m, tr)
            print("  kappa identity holds on every row triple")
        except AssertionError as exc:
            print(f"  check failed: {exc}")
            status = EXIT_VERIFY
    return status


def cmd_canon(args):
    for idx, m in enumerate(_load(args)):
        c, _ = sh_canonical_form(m)
        sys.stdout.write(f"# matrix {idx} canonical {canon_hex(m)}\norder {c.n}\n{c}\n\n")
    return EXIT_OK


def cmd_code(args):
    status = EXIT_OK
    for idx, m in enumerate(_load(args)):
        rep = code_report(m)
        print(f"matrix {idx}")
        for k, v in rep.items():
            if k == "distribution":
                if v is None:
                    v = "not enumerated (dimension over budget)"
                    status = EXIT_BUDGET
                else:
                    v = " ".join(f"{w}:{a}" for w, a in v.items())
            print(f"  {k}: {v}")
    return status


def cmd_scheme(args):
    mats = _load(args)
    if args.row is not None:
        rows = [args.row - 1]
    elif args.all_rows:
        rows = None
    else:
        rows = [0]
    status = EXIT_OK
    for mid, m in enumerate(mats):
        for i in (range(m.n) if rows is None else rows):
            problems = []
            ok = verify_scheme(scheme_from(m, i), problems)
            print(f"matrix {mid} row {i + 1}: scheme of order {m.n - 1} {'ok' if ok else 'FAILED ' + '; '.join(problems)}")
            if not ok:
                status = EXIT_VERIFY
    census = scheme_census(mats, rows)
    print(f"{len(census.classes)} isomorphism classes")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(census.tsv())
    else:
        sys.stdout.write(census.tsv())
    return status


def cmd_orderly(args):
    start = None
    if args.from_j:
        start = (0,) * args.from_j
    res = orderly_generate(args.order, args.depth, start=start)
    for k in sorted(res.counts):
        print(f"k={k}: {res.counts[k]}")
    return EXIT_OK


def cmd_bound(args):
    print(k_upper_bound(args.order))
    return EXIT_OK


def cmd_verify(args):
    cfg = _search_config(args)
    ok = True
    for n in args.orders:
        t0 = time.time()
        census = classify_all(n, cfg)
        got = {st: len(v) for st, v in census.by_type.items() if st}
        total_ok = census.total == TABLE1.get(n, census.total)
        types_ok = n not in TABLE2 or got == TABLE2[n]
        extra = ""
        if args.suite == "all" and n >= 4:
            for m in census.matrices():
                if max_Jk(m) > k_upper_bound(n):
                    types_ok = False
                    extra = " (J_k bound violated)"
        line_ok = total_ok and types_ok and census.complete
        ok &= line_ok
        print(f"order {n}: {census.total} classes (expected {TABLE1.get(n, '?')}) "
              f"{dict(sorted(got.items()))} {'PASS' if line_ok else 'FAIL'}{extra} [{time.time() - t0:.1f}s]")
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {
    "classify": cmd_classify, "search": cmd_search, "analyze": cmd_analyze, "canon": cmd_canon,
    "code": cmd_code, "scheme": cmd_scheme, "orderly": cmd_orderly, "bound-k": cmd_bound,
    "verify": cmd_verify,
}


def run_command(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(_config_argv(list(argv)))
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(message)s", stream=sys.stderr)
    try:
        log.info("kernels: %s", kernels.BACKEND)
        return COMMANDS[args.cmd](args)
    except (UsageError, ParseError, ValueError, CheckpointMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
