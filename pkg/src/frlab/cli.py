"""Command-line entry point: ``frlab <subcommand> ...``.

JSON goes to stdout, logs to stderr. Exit codes: 0 success, 2 bad input,
3 infeasible (search or enumeration cap, impossible repair).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from . import dress, frcode, labeling, magic, minps
from .setsystem import Graph, SetSystem, as_graph, generate, line_graph, load_json, m_copies, validate

log = logging.getLogger("frlab")

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE = 0, 2, 3

INFEASIBLE = (
    magic.SearchInfeasible,
    frcode.EnumerationCapError,
    minps.EnumerationCapError,
    dress.RepairInfeasible,
    dress.InsufficientSymbols,
)


def _emit(doc, fmt: str = "json") -> None:
    if fmt == "csv":
        rows = doc if isinstance(doc, list) else [doc]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
        sys.stdout.write(buf.getvalue())
    else:
        sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _graph_for_minps(path) -> Graph:
    obj = load_json(path)
    if isinstance(obj, SetSystem):
        # MinPS of a set system is solved on its line graph
        return line_graph(obj)
    return obj


# -- handlers -----------------------------------------------------------------------


def cmd_gen(a):
    if a.kind == "complete":
        obj = generate("complete", a.n)
    elif a.kind == "turan":
        obj = generate("turan", a.n, a.r)
    elif a.kind == "cycle":
        obj = generate("cycle", a.n)
    else:
        obj = m_copies(generate("complete", a.r), a.m)
    if a.copies > 1:
        obj = m_copies(obj, a.copies)
    if a.as_code:
        return frcode.from_set_system(obj.as_set_system()).to_json()
    doc = obj.to_json()
    if a.validate:
        doc["validation"] = validate(obj.as_set_system()).to_json()
    return doc


def cmd_eval(a):
    S = load_json(a.system)
    sigma = labeling.load_labeling(a.labeling)
    return labeling.evaluate(S, sigma, zipf_beta=a.zipf)


def cmd_minps(a):
    G = _graph_for_minps(a.graph)
    if a.heuristic is not None:
        res = minps.local_search(G, seed=a.seed, restarts=a.heuristic)
    else:
        res = minps.exact_minps(G, budget=a.budget)
    return res.to_json()


def cmd_construct(a):
    if a.family == "turan":
        res = minps.turan_labeling(a.n, a.r)
    elif a.family == "mkr":
        res = minps.mkr_labeling(a.m, a.r)
    elif a.family == "mtnr":
        res = minps.mtnr_labeling(a.m, a.n, a.r)
    else:
        res = minps.cycle_labeling(a.theta)
    return res.to_json()


def cmd_magic(a):
    if a.action == "ivanco":
        return {"n": a.n, "r": a.r, "supermagic": magic.ivanco_predicate(a.n, a.r)}
    if a.action == "k4r":
        return magic.k4r_labeling(a.r) if a.labeling else magic.k4r_bounds(a.r)
    G = as_graph(load_json(a.graph))
    if a.action == "check":
        return magic.check_supermagic(G, labeling.load_labeling(a.labeling_file)).to_json()
    labels = magic.supermagic_search(G, offset=a.offset)
    doc = {"found": labels is not None, "labels": labels}
    if labels is not None:
        doc["index"] = magic.check_supermagic(G, labels).index
    return doc


def cmd_bound(a):
    return {
        "n": a.n, "k": a.k, "alpha": a.alpha, "rho": a.rho,
        "bound1": frcode.bound_singleton(a.n, a.k, a.alpha, a.rho),
        "bound2": frcode.bound_recursive(a.n, a.k, a.alpha, a.rho),
    }


def cmd_filesize(a):
    C = frcode.load_code(a.code)
    if a.sample is not None:
        return frcode.file_size(C, a.k, mode="sampled", trials=a.sample, seed=a.seed).to_json()
    return frcode.file_size(C, a.k).to_json()


def cmd_report(a):
    rep = frcode.optimality_report(frcode.load_code(a.code), a.kmax)
    if a.format == "csv":
        sys.stdout.write(rep.to_csv())
        return None
    return rep.to_json()


def _parse_model(text: str):
    if text == "linear":
        return "linear", 1.0
    if text.startswith("zipf:"):
        return "zipf", float(text.split(":", 1)[1])
    raise ValueError(f"model must be linear or zipf:BETA, got {text!r}")


def cmd_sim(a):
    fr = frcode.load_code(a.code)
    sigma = labeling.load_labeling(a.labeling)
    model, beta = _parse_model(a.model)
    out = dress.workload_sim(fr, sigma, a.requests, model=model, beta=beta, seed=a.seed)
    # transfers per single-node repair; independent of the outer code dimension
    probe = dress.build(fr, 1)
    stored = dress.place(probe, dress.mds_encode(probe, [1]))
    transfers = []
    for j in range(fr.n):
        damaged = list(stored)
        damaged[j] = None
        transfers.append(len(dress.repair_node(probe, damaged, j)[1]))
    out["transfers"] = transfers
    if a.payload:
        out["payload"] = _payload_roundtrip(fr, a)
    return out


def _payload_roundtrip(fr, a) -> dict:
    """Encode a file, lose node ``--fail``, repair it, rebuild from the first k nodes."""
    k = a.k or fr.n
    m = frcode.file_size(fr, k).value
    code = dress.build(fr, m, k)
    with open(a.payload, "rb") as fh:
        payload = fh.read()
    stripes = [dress.place(code, cw) for cw in dress.encode_payload(code, payload)]
    if not 0 <= a.fail < fr.n:
        raise ValueError(f"--fail must name a node in [0, {fr.n - 1}]")
    for nodes in stripes:
        damaged = list(nodes)
        damaged[a.fail] = None
        nodes[a.fail] = dress.repair_node(code, damaged, a.fail)[0]
    chosen = range(k)
    restored = dress.decode_payload(code, [{i: s[i] for i in chosen} for s in stripes], len(payload))
    if a.out:
        with open(a.out, "wb") as fh:
            fh.write(restored)
    return {"bytes": len(payload), "m": m, "k": k, "stripes": len(stripes), "ok": restored == payload}


def cmd_verify(a):
    from .verify import run_suite

    rows = run_suite(a.only)
    width = max(len(r["id"]) for r in rows)
    for r in rows:
        mark = "PASS" if r["passed"] else "FAIL"
        print(f"{r['id']:<{width}}  {mark}  {r['title']} ({r['detail']}, {r['seconds']}s)", file=sys.stderr)
    return rows


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="frlab", description="FR codes, access-balance labelings and DRESS simulation")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a graph or set system")
    g.add_argument("kind", choices=["complete", "turan", "cycle", "mkr"])
    g.add_argument("--n", type=_positive)
    g.add_argument("--r", type=_positive)
    g.add_argument("--m", type=_positive)
    g.add_argument("--copies", type=_positive, default=1, help="disjoint copies of the result")
    g.add_argument("--as-code", action="store_true", help="emit the FR code instead")
    g.add_argument("--validate", action="store_true", help="attach a regularity/linearity report")
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("eval", help="popularity and variance of a labeling")
    e.add_argument("system")
    e.add_argument("labeling")
    e.add_argument("--zipf", type=float, metavar="BETA")
    e.set_defaults(func=cmd_eval)

    mp = sub.add_parser("minps", help="minimise the product sum over vertex labelings")
    mp.add_argument("graph")
    mode = mp.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="branch and bound (default)")
    mode.add_argument("--heuristic", type=_positive, metavar="SEEDS", help="local search with this many restarts")
    mp.add_argument("--seed", type=int, default=0)
    mp.add_argument("--budget", type=_positive, help="node budget for the exact search")
    mp.set_defaults(func=cmd_minps)

    c = sub.add_parser("construct", help="closed-form optimal labelings")
    c.add_argument("family", choices=["turan", "mkr", "mtnr", "cycle"])
    c.add_argument("--n", type=_positive)
    c.add_argument("--r", type=_positive)
    c.add_argument("--m", type=_positive)
    c.add_argument("--theta", type=_positive)
    c.set_defaults(func=cmd_construct)

    mg = sub.add_parser("magic", help="supermagic labelings")
    mg.add_argument("action", choices=["check", "search", "ivanco", "k4r"])
    mg.add_argument("graph", nargs="?")
    mg.add_argument("labeling_file", nargs="?", metavar="labeling")
    mg.add_argument("--n", type=_positive)
    mg.add_argument("--r", type=_positive)
    mg.add_argument("--offset", type=int, default=0)
    mg.add_argument("--labeling", action="store_true", help="k4r: also build the labeling")
    mg.set_defaults(func=cmd_magic)

    b = sub.add_parser("bound", help="upper bounds on the file size")
    for name in ("n", "k", "alpha", "rho"):
        b.add_argument(f"--{name}", type=_positive, required=True)
    b.set_defaults(func=cmd_bound)

    f = sub.add_parser("filesize", help="M(k) of an FR code")
    f.add_argument("code")
    f.add_argument("--k", type=_positive, required=True)
    fm = f.add_mutually_exclusive_group()
    fm.add_argument("--exact", action="store_true")
    fm.add_argument("--sample", type=_positive, metavar="T")
    f.add_argument("--seed", type=int, default=0)
    f.set_defaults(func=cmd_filesize)

    r = sub.add_parser("report", help="k-optimality report")
    r.add_argument("code")
    r.add_argument("--kmax", type=_positive)
    r.set_defaults(func=cmd_report)

    s = sub.add_parser("sim", help="DRESS workload and repair simulation")
    s.add_argument("--code", required=True)
    s.add_argument("--labeling", required=True)
    s.add_argument("--requests", type=_positive, required=True)
    s.add_argument("--model", default="linear", help="linear or zipf:BETA")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--payload", help="file to push through encode/repair/reconstruct")
    s.add_argument("--out", help="write the reconstructed payload here")
    s.add_argument("--k", type=_positive, help="nodes used for reconstruction")
    s.add_argument("--fail", type=int, default=0, help="node to fail and repair")
    s.set_defaults(func=cmd_sim)

    v = sub.add_parser("verify", help="reproduce the published examples and bounds")
    v.add_argument("--suite", choices=["paper"], default="paper")
    v.add_argument("--only", nargs="+", metavar="ID")
    v.set_defaults(func=cmd_verify)
    return p


_REQUIRED = {
    ("gen", "complete"): ["n"], ("gen", "cycle"): ["n"], ("gen", "turan"): ["n", "r"],
    ("gen", "mkr"): ["m", "r"],
    ("construct", "turan"): ["n", "r"], ("construct", "mkr"): ["m", "r"],
    ("construct", "mtnr"): ["m", "n", "r"], ("construct", "cycle"): ["theta"],
    ("magic", "ivanco"): ["n", "r"], ("magic", "k4r"): ["r"],
    ("magic", "search"): ["graph"], ("magic", "check"): ["graph", "labeling_file"],
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_INVALID
    logging.basicConfig(
        level=logging.DEBUG if a.verbose else logging.WARNING,
        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s",
    )
    choice = getattr(a, "kind", None) or getattr(a, "family", None) or getattr(a, "action", None)
    missing = [n for n in _REQUIRED.get((a.command, choice), []) if getattr(a, n, None) is None]
    if missing:
        parser.print_usage(sys.stderr)
        print(f"frlab {a.command} {choice}: missing {', '.join(missing)}", file=sys.stderr)
        return EXIT_INVALID
    try:
        doc = a.func(a)
    except INFEASIBLE as exc:
        log.error("infeasible: %s", exc)
        return EXIT_INFEASIBLE
    except (ValueError, KeyError, TypeError, OSError, ArithmeticError) as exc:
        log.error("%s", exc)
        return EXIT_INVALID
    if doc is not None:
        _emit(doc, a.format)
    if a.command == "verify" and not all(r["passed"] for r in doc):
        return 1
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
