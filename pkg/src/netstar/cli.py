"""Command line interface: ``netstar validate|reduce|sweep|selftest``.

Exit codes: 0 pass, 1 usage or parse error, 2 validation failure,
3 verification discrepancy, 4 singular data.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import blocklin, selftest
from .document import DocumentError, document_problems, encode_matrix, load_document, to_network_data
from .errors import NetstarError, SingularBlock
from .scattering import assemble_lagrangian, compose_iterative, reduce

log = logging.getLogger("netstar")

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_DISCREPANCY, EXIT_SINGULAR = 0, 1, 2, 3, 4
BOTH_TOLERANCE = 1e-8


class UsageError(Exception):
    pass


def _load_valid(path):
    """Parse and validate; returns the document or raises with an exit code."""
    doc = load_document(path)
    problems = document_problems(doc)
    if problems:
        for p in problems:
            print(f"invalid: {p}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)
    return doc


def _compute(doc, energy, method, start=None):
    if doc.connecting_matrices is None and doc.graph.n_internal and energy is None:
        raise UsageError("metric document needs --energy")
    data = to_network_data(doc, energy)
    g = doc.graph
    results = {}
    if method in ("schur", "both"):
        results["schur"] = reduce(assemble_lagrangian(g, data))
    if method in ("star", "both"):
        results["star"] = compose_iterative(g, data, start=start)
    return results


def _json_safe(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.complexfloating):
        return [float(x.real), float(x.imag)]
    if isinstance(x, dict):
        return {k: _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_safe(v) for v in x]
    if isinstance(x, float) and not np.isfinite(x):
        return str(x)
    return x


def cmd_validate(args) -> int:
    doc = load_document(args.path)
    problems = document_problems(doc)
    if problems:
        for p in problems:
            print(f"invalid: {p}")
        return EXIT_INVALID
    g = doc.graph
    print(
        f"ok: {g.n_vertices} vertices, {g.n_external} external, {g.n_internal} internal edges, "
        f"L_G is {g.n_external + 2 * g.n_internal}x{g.n_external + 2 * g.n_internal}"
    )
    return EXIT_OK


def cmd_reduce(args) -> int:
    doc = _load_valid(args.path)
    results = _compute(doc, args.energy, args.method, args.start)
    main = results.get("schur") or results["star"]
    out = {
        "method": args.method,
        "K": encode_matrix(main.external, main.K),
        "det_T": [main.det_T.real, main.det_T.imag],
        "diagnostics": {name: _json_safe(r.diagnostics) for name, r in results.items()},
    }
    if args.energy is not None:
        out["energy"] = args.energy
    code = EXIT_OK
    if args.method == "both":
        a, b = results["schur"], results["star"]
        disc = blocklin.max_abs(a.K - b.K)
        det_disc = abs(a.det_T - b.det_T) / max(abs(a.det_T), abs(b.det_T), 1e-300)
        out["discrepancy"] = disc
        out["det_T_discrepancy"] = det_disc
        if disc > BOTH_TOLERANCE or det_disc > BOTH_TOLERANCE:
            print(f"discrepancy: |K_schur - K_star| = {disc:.3e}, det_T rel = {det_disc:.3e}", file=sys.stderr)
            code = EXIT_DISCREPANCY
    text = json.dumps(out, indent=1)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


def _sweep_one(doc, energy, method):
    try:
        res = _compute(doc, energy, method)
    except NetstarError as exc:
        log.debug("energy %g failed: %s", energy, exc)
        return energy, None, type(exc).__name__
    r = res.get("schur") or res["star"]
    return energy, r, None


def cmd_sweep(args) -> int:
    doc = _load_valid(args.path)
    if doc.connecting_matrices is not None or not doc.graph.is_metric:
        if doc.graph.n_internal:
            raise UsageError("sweep needs a metric document (internal edge lengths, no connecting matrices)")
    if args.steps < 0:
        raise UsageError("--steps must be non-negative")
    energies = np.linspace(args.e_from, args.e_to, args.steps + 1) if args.steps else np.array([args.e_from])
    if np.any(energies <= 0):
        raise UsageError("energies must be positive")
    jobs = args.jobs or int(os.environ.get("NETSTAR_JOBS", "1"))
    log.debug("sweeping %d energies with %d jobs", len(energies), jobs)
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        rows = list(pool.map(lambda E: _sweep_one(doc, float(E), args.method), energies))
    lines = ["energy,row,col,re,im,unitarity_defect"]
    for energy, r, err in rows:
        if r is None:
            lines.append(f"# energy={energy:.17g} error={err}")
            continue
        defect = blocklin.unitarity_defect(r.K)
        for a, row in enumerate(r.external):
            for b, col in enumerate(r.external):
                z = r.K[a, b]
                lines.append(f"{energy:.17g},{row},{col},{z.real:.17g},{z.imag:.17g},{defect:.17g}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_selftest(args) -> int:
    ok, lines = selftest.run(args.seed, args.level)
    print("\n".join(lines))
    return EXIT_OK if ok else EXIT_DISCREPANCY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netstar", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a network document")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("reduce", help="compute the exterior matrix K_G")
    p.add_argument("path")
    p.add_argument("--energy", type=float, default=None)
    p.add_argument("--method", choices=["schur", "star", "both"], default="schur")
    p.add_argument("--start", default=None, help="first vertex of the star composition")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("sweep", help="evaluate K_G over an energy grid (metric documents)")
    p.add_argument("path")
    p.add_argument("--from", dest="e_from", type=float, required=True)
    p.add_argument("--to", dest="e_to", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--method", choices=["schur", "star"], default="schur")
    p.add_argument("--jobs", type=int, default=None, help="worker threads (default $NETSTAR_JOBS or 1)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("selftest", help="run the deterministic verification suites")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--level", choices=["quick", "full"], default="quick")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code)
    except (DocumentError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SingularBlock as exc:
        print(f"singular: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except NetstarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
