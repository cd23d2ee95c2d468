"""Command-line entry point.

Every subcommand writes its artifacts plus ``<out>.manifest.json`` recording
the full parameter set and the SHA-256 of each artifact; ``repro`` re-runs a
manifest into a scratch directory and compares the hashes.  Parameters may
also come from ``--config file.json`` (keys are the flag names with
underscores); flags given on the command line win.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from . import cayley as cay
from . import decode_sim, gldpc, graph_core, iterate, products, spectral
from .errors import ZigzagError

log = logging.getLogger("zigzag_ldpc")

OUTPUT_KEYS = ("out", "dot", "cert", "info")
EXAMPLES = ("4.1", "4.1-large", "4.1-rep", "4.2", "4.2-large", "4.2-rep", "4.3")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers


def parse_snr(text: str) -> list[float]:
    """``start:step:stop`` (inclusive), a comma list, or a single value."""
    text = str(text).strip()
    if ":" in text:
        parts = [float(x) for x in text.split(":")]
        if len(parts) != 3 or parts[1] <= 0:
            raise UsageError(f"bad SNR range {text!r}; use start:step:stop")
        start, step, stop = parts
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 10) for i in range(max(count, 0))]
    return [float(x) for x in text.split(",") if x.strip()]


def parse_count(text) -> int:
    """Integers written plainly or as ``b^e``."""
    text = str(text)
    if "^" in text:
        base, exp = text.split("^")
        return int(base) ** int(exp)
    return int(text)


def sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_json(path: str | Path, obj) -> None:
    Path(path).write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _require(args, *names: str) -> None:
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _load_graph(path: str) -> graph_core.Graph:
    return graph_core.read_edge_list(path).to_graph(seed=None)


# ---------------------------------------------------------------------------
# subcommands; each returns {role: path} of written artifacts


def cmd_graph(args) -> dict[str, str]:
    _require(args, "kind", "n", "out")
    kind, n, seed = args.kind, args.n, args.seed
    if kind == "random-regular":
        _require(args, "d")
        g = graph_core.random_regular(n, args.d, seed=seed, simple=not args.multigraph)
    elif kind == "random-biregular":
        _require(args, "m", "c", "d")
        g = graph_core.random_biregular(n, args.m, args.c, args.d, seed=seed, simple=not args.multigraph)
    elif kind == "cycle":
        g = graph_core.cycle_graph(n, seed)
    elif kind == "complete":
        g = graph_core.complete_graph(n, seed)
    elif kind == "complete-bipartite":
        _require(args, "m")
        g = graph_core.complete_bipartite(n, args.m, seed)
    else:
        raise UsageError(f"unknown graph kind {kind!r}")
    graph_core.write_edge_list(args.out, g)
    out = {"edges": args.out}
    if args.dot:
        Path(args.dot).write_text(graph_core.to_dot(g), encoding="utf-8")
        out["dot"] = args.dot
    log.info("%r", g)
    return out


def cmd_product(args) -> dict[str, str]:
    _require(args, "kind", "g1", "g2", "out")
    g1, g2 = _load_graph(args.g1), _load_graph(args.g2)
    g = products.PRODUCTS[args.kind](g1, g2)
    graph_core.write_edge_list(args.out, g)
    out = {"edges": args.out}
    if args.cert:
        cert = products.verify_product(g, g1, g2, args.kind, with_diameter=not args.no_diameter)
        Path(args.cert).write_text(cert.to_json() + "\n", encoding="utf-8")
        out["cert"] = args.cert
        print(f"bound_ok={cert.bound_ok} measured={cert.measured_lambda:.6f} bound={cert.bound:.6f} girth={cert.girth}")
    print(repr(g))
    return out


def _cayley_from_args(args) -> cay.CayleyGraph:
    reps = [int(x, 0) for x in args.reps.split(",")] if args.reps else None
    spec = cay.CayleySpec(args.family, args.p, args.k if args.k is not None else len(reps or []),
                          args.product, seed=args.seed, reps=reps)
    build = cay.build_zigzag_cayley if args.product == "zigzag" else cay.build_replacement_cayley
    return build(spec)


def cmd_cayley(args) -> dict[str, str]:
    _require(args, "family", "p", "out")
    if args.k is None and not args.reps:
        raise UsageError("give --k or --reps")
    cg = _cayley_from_args(args)
    graph_core.write_edge_list(args.out, cg.graph)
    out = {"edges": args.out}
    info = {
        "family": args.family,
        "p": args.p,
        "product": args.product,
        "reps": cg.reps,
        "generators": [list(s) for s in cg.generators],
        "group_order": cg.num_group_elements,
        "degree": cg.degree,
        "symmetrized": cg.symmetrized,
        "notes": cg.notes,
        "graph": repr(cg.graph),
    }
    if args.info:
        write_json(args.info, info)
        out["info"] = args.info
    print(f"{cg.graph!r} group order {cg.num_group_elements}")
    for note in cg.notes:
        print(f"note: {note}")
    return out


def cmd_spectral(args) -> dict[str, str]:
    _require(args, "graph", "out")
    g = _load_graph(args.graph)
    report = spectral.lambda2(g, args.method, seed=args.seed)
    payload = json.loads(report.to_json())
    if args.kappa is not None:
        payload["kappa"] = args.kappa
        payload["expander_certificate"] = spectral.is_expander_certificate(report, args.kappa)
    write_json(args.out, payload)
    print(report.summary())
    return {"report": args.out}


def example_code(name: str, seed: int = 0) -> gldpc.GldpcCode:
    """The GLDPC codes of the worked examples (random choices drawn from ``seed``)."""
    lib = gldpc.subcode_library
    settings = {
        "4.1": ("shift", 5, 5, "zigzag", "[20,15,4]"),
        "4.1-large": ("shift", 11, 5, "zigzag", "[20,15,4]"),
        "4.1-rep": ("shift", 11, 13, "replacement", "[15,11,3]"),
        "4.2": ("mobius", 3, 5, "zigzag", "[20,15,4]"),
        "4.2-large": ("mobius", 5, 4, "zigzag", "[16,12,2]"),
        "4.2-rep": ("mobius", 5, 13, "replacement", "[15,11,3]"),
    }
    if name == "4.3":
        g1 = graph_core.random_biregular(20, 12, 6, 10, seed=seed)
        g2 = graph_core.random_biregular(10, 6, 3, 5, seed=seed)
        g = products.zigzag_bipartite(g1, g2)
        params = {"example": name, "seed": seed, "g1": "(6,10) on (20,12)", "g2": "(3,5) on (10,6)"}
        return gldpc.assemble(g, {"left": lib("[9,6,2]"), "right": lib("[25,21,2]")}, params=params)
    if name not in settings:
        raise UsageError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    family, p, k, kind, code_name = settings[name]
    spec = cay.CayleySpec(family, p, k, kind, seed=seed)
    cg = cay.build_zigzag_cayley(spec) if kind == "zigzag" else cay.build_replacement_cayley(spec)
    params = {"example": name, "seed": seed, "family": family, "p": p, "k": k, "product": kind,
              "reps": cg.reps, "subcode": code_name}
    return gldpc.assemble(cg.graph, lib(code_name), params=params)


def cmd_code(args) -> dict[str, str]:
    _require(args, "out")
    if args.example:
        code = example_code(args.example, args.seed)
    else:
        _require(args, "graph", "subcode")
        g = _load_graph(args.graph)
        first = gldpc.subcode_library(args.subcode)
        if args.subcode_right:
            assignment = {"left": first, "right": gldpc.subcode_library(args.subcode_right)}
        elif args.subcode_alt:
            assignment = gldpc.alternating(g, first, gldpc.subcode_library(args.subcode_alt))
        else:
            assignment = first
        code = gldpc.assemble(g, assignment, params={"graph": args.graph, "subcode": args.subcode,
                                                     "subcode_right": args.subcode_right,
                                                     "subcode_alt": args.subcode_alt})
    rate = gldpc.design_rate(code)
    true = None
    if code.n_bits <= gldpc.TRUE_RATE_MAX_BITS and not args.skip_rank:
        true = gldpc.true_rate(code)
    meta = gldpc.save(code, args.out, true_rate_value=true)
    print(f"n_bits={code.n_bits} checks={code.num_checks} design_rate={rate} ({float(rate):.5f})"
          + (f" true_rate={true} ({float(true):.5f})" if true is not None else ""))
    for c in code.codes:
        if c.note:
            print(f"note: {c.name}: {c.note}")
    return {"alist": args.out, "meta": str(meta)}


def cmd_sim(args) -> dict[str, str]:
    _require(args, "code", "snr", "out")
    code, meta = gldpc.load(args.code)
    cfg = decode_sim.SimConfig(
        snr_db_list=parse_snr(args.snr),
        max_frames=args.max_frames,
        max_errors=args.max_errors,
        max_iterations=args.iters,
        seed=args.seed,
        early_stop=not args.no_early_stop,
        batch=args.batch,
    )
    workers = args.workers or decode_sim.default_workers()
    rate = Fraction(meta["true_rate"]) if meta.get("true_rate") else None

    def progress(p):
        log.info("snr %.3f dB: frames=%d fe=%d ber=%.3e", p.snr_db, p.frames, p.frame_errors, p.ber)

    points = decode_sim.simulate(code, cfg, workers=workers, rate=rate, progress=progress)
    decode_sim.write_csv(args.out, points)
    sys.stdout.write(decode_sim.points_to_csv(points))
    return {"csv": args.out}


FAMILY_ALIASES = {"zz": "zigzag_original", "zzm": "zigzag_modified", "rep": "replacement"}


def cmd_iterate(args) -> dict[str, str]:
    _require(args, "family", "levels", "out")
    family = FAMILY_ALIASES.get(args.family, args.family)
    budget = parse_count(args.budget)
    common = dict(budget=budget, strict=args.strict, measure_limit=parse_count(args.measure_limit), seed=args.seed)
    if family == "zigzag_original":
        h, lam, s = iterate.seed_zigzag(args.D, seed=args.seed, tries=args.tries)
        trace = iterate.iterate_zigzag(h, args.levels, lam_h=lam, **common)
    elif family == "zigzag_modified":
        h, lam, s = iterate.seed_zigzag_modified(args.c, args.d, seed=args.seed, tries=args.tries)
        trace = iterate.iterate_zigzag_modified(h, args.levels, lam_h=lam, **common)
    elif family == "replacement":
        g1, h, l1, l2, s = iterate.seed_replacement(args.n, args.d, seed=args.seed, tries=args.tries)
        trace = iterate.iterate_replacement(g1, h, args.levels, lam_g1=l1, lam_h=l2, **common)
    else:
        raise UsageError(f"unknown family {args.family!r}")
    trace.notes.append(f"seed graph draw offset(s): {s}")
    Path(args.out).write_text(trace.to_json() + "\n", encoding="utf-8")
    for r in trace.levels:
        measured = "-" if r.measured_lambda is None else f"{r.measured_lambda:.6f}"
        print(f"level {r.level}: vertices={r.num_left}{'' if r.num_right is None else '+' + str(r.num_right)} "
              f"bound={r.lambda_bound:.6f} measured={measured} constructed={r.constructed}")
    return {"trace": args.out}


COMMANDS = {
    "graph": cmd_graph,
    "product": cmd_product,
    "cayley": cmd_cayley,
    "spectral": cmd_spectral,
    "code": cmd_code,
    "sim": cmd_sim,
    "iterate": cmd_iterate,
}


# ---------------------------------------------------------------------------
# manifests


def manifest_path(out: str | Path) -> Path:
    return Path(str(out) + ".manifest.json")


def _inputs(args) -> dict[str, str]:
    found = {}
    for key in ("g1", "g2", "graph", "code"):
        value = getattr(args, key, None)
        if value:
            path = Path(value)
            found[key] = str(path)
            if key == "code":
                meta = gldpc.meta_path_for(path) if not path.name.endswith(".meta.json") else path
                found["code_meta"] = str(meta)
    return found


def write_manifest(args, artifacts: dict[str, str], elapsed: float) -> Path:
    params = {k: v for k, v in vars(args).items() if k not in ("func", "config", "verbose")}
    manifest = {
        "command": args.command,
        "params": params,
        "seeds": {"seed": params.get("seed")},
        "artifacts": {role: {"path": path, "sha256": sha256(path)} for role, path in artifacts.items()},
        "inputs": {role: {"path": p, "sha256": sha256(p)} for role, p in _inputs(args).items() if Path(p).exists()},
        "version": __version__,
        "wall_clock_s": round(elapsed, 3),
    }
    path = manifest_path(args.out)
    write_json(path, manifest)
    return path


def cmd_repro(args) -> int:
    manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    params = dict(manifest["params"])
    for role, entry in manifest.get("inputs", {}).items():
        if sha256(entry["path"]) != entry["sha256"]:
            print(f"input {role} changed since the run: {entry['path']}")
            return 1
    with tempfile.TemporaryDirectory() as tmp:
        for key in OUTPUT_KEYS:
            if params.get(key):
                params[key] = str(Path(tmp) / Path(params[key]).name)
        ns = argparse.Namespace(**params)
        fresh = COMMANDS[manifest["command"]](ns)
        ok = True
        for role, entry in manifest["artifacts"].items():
            new_hash = sha256(fresh[role]) if role in fresh else None
            same = new_hash == entry["sha256"]
            ok &= same
            print(f"{role}: {'identical' if same else 'DIFFERS'} ({entry['path']})")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zigzag-ldpc", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON file of default option values")
        p.add_argument("-v", "--verbose", action="store_true")
        return p

    p = add("graph", "generate a component graph edge list")
    p.add_argument("--kind", choices=["random-regular", "random-biregular", "cycle", "complete", "complete-bipartite"])
    p.add_argument("--n", type=int, help="vertices (left vertices when bipartite)")
    p.add_argument("--m", type=int, help="right vertices")
    p.add_argument("--d", type=int, help="degree (right degree when bipartite)")
    p.add_argument("--c", type=int, help="left degree")
    p.add_argument("--multigraph", action="store_true", help="allow loops and parallel edges")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--dot")

    p = add("product", "form a graph product and certify it")
    p.add_argument("--kind", choices=list(products.PRODUCTS))
    p.add_argument("--g1")
    p.add_argument("--g2")
    p.add_argument("--out")
    p.add_argument("--cert", help="write the eigenvalue/girth/diameter certificate here")
    p.add_argument("--no-diameter", action="store_true")

    p = add("cayley", "Cayley graph of a semidirect product")
    p.add_argument("--family", choices=["shift", "mobius"])
    p.add_argument("--p", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--product", choices=["zigzag", "replacement"], default="zigzag")
    p.add_argument("--reps", help="comma-separated representatives (ints) instead of a random draw")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--info", help="write group/generator details as JSON")

    p = add("spectral", "second eigenvalue report of a graph")
    p.add_argument("--graph")
    p.add_argument("--method", choices=["auto", "dense", "power-iteration"], default="auto")
    p.add_argument("--kappa", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    p = add("code", "assemble a GLDPC code (alist + metadata)")
    p.add_argument("--example", choices=list(EXAMPLES))
    p.add_argument("--graph")
    p.add_argument("--subcode", help="e.g. [15,11,3], spc:9, hamming:4")
    p.add_argument("--subcode-right", help="right-side subcode for bipartite graphs")
    p.add_argument("--subcode-alt", help="second subcode for odd-numbered vertices")
    p.add_argument("--skip-rank", action="store_true", help="do not compute the true rate")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="alist path; metadata goes to <stem>.meta.json")

    p = add("sim", "AWGN Monte-Carlo BER simulation")
    p.add_argument("--code", help="alist or .meta.json path")
    p.add_argument("--snr", help="Eb/N0 in dB: start:step:stop or a comma list")
    p.add_argument("--max-frames", type=int, default=1000)
    p.add_argument("--max-errors", type=int, default=100)
    p.add_argument("--iters", type=int, default=decode_sim.DEFAULT_ITERATIONS)
    p.add_argument("--no-early-stop", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=0, help="0 = available cores")
    p.add_argument("--batch", type=int, default=128)
    p.add_argument("--out")

    p = add("iterate", "iterative expander family trace")
    p.add_argument("--family", choices=["zz", "zzm", "rep", *FAMILY_ALIASES.values()])
    p.add_argument("--levels", type=int)
    p.add_argument("--budget", default="2^20")
    p.add_argument("--measure-limit", default=str(iterate.DEFAULT_MEASURE_LIMIT))
    p.add_argument("--strict", action="store_true", help="fail instead of tracing bounds past the budget")
    p.add_argument("--D", type=int, default=2, help="zz: seed graph degree")
    p.add_argument("--c", type=int, default=2, help="zzm: seed left degree")
    p.add_argument("--d", type=int, default=2, help="zzm: seed right degree; rep: seed graph degree")
    p.add_argument("--n", type=int, default=20, help="rep: vertices of G1")
    p.add_argument("--tries", type=int, default=5, help="seed graph draws")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    p = add("repro", "re-run a manifest and compare artifact hashes")
    p.add_argument("manifest")
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        config = json.loads(Path(known.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config {known.config}: {exc}")
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    command = next((a for a in argv if a in sub_action.choices), None)
    if command is None:
        return
    sp = sub_action.choices[command]
    dests = {a.dest for a in sp._actions}
    unknown = sorted(set(config) - dests)
    if unknown:
        parser.error(f"unknown config key(s): {', '.join(unknown)}")
    sp.set_defaults(**config)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "repro":
            return cmd_repro(args)
        start = time.perf_counter()
        artifacts = COMMANDS[args.command](args)
        manifest = write_manifest(args, artifacts, time.perf_counter() - start)
        print(f"manifest: {manifest}")
        return 0
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ZigzagError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
