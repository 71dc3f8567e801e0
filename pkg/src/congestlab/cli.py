"""Command-line entry point: gen, verify, simulate, protocol, check-lemma, bench.

Reports are JSON (one object, or JSON lines for sweeps). Exit status: 0 when
everything passes, 2 on a lemma counterexample, 3 on an internal invariant
violation, 1 on bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Iterator

from . import alicebob, comm, gadgets, lemmas, sim
from .graph import Graph, Partition, apsp_exact, cut_edges, diameter, graph_from_dict, is_connected, to_dot

EXIT_OK, EXIT_USAGE, EXIT_COUNTEREXAMPLE, EXIT_INVARIANT = 0, 1, 2, 3
WORKERS_ENV = "CONGESTLAB_WORKERS"


def workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _dump(obj) -> str:
    def norm(v):
        if isinstance(v, float) and math.isinf(v):
            return None
        if isinstance(v, dict):
            return {str(k): norm(x) for k, x in v.items()}
        if isinstance(v, (list, tuple, set, frozenset)):
            return [norm(x) for x in v]
        return v

    return json.dumps(norm(obj), sort_keys=True)


class Output:
    def __init__(self, path: str | None):
        self.path = path
        self.fh = open(path, "w") if path else sys.stdout

    def line(self, obj) -> None:
        self.fh.write((obj if isinstance(obj, str) else _dump(obj)) + "\n")
        self.fh.flush()

    def raw(self, text: str) -> None:
        self.fh.write(text)

    def close(self) -> None:
        if self.path:
            self.fh.close()


def _load(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _load_instance(path: str):
    d = _load(path)
    if "kind" in d:
        return lemmas.instance_from_dict(d), d
    return None, d


# -- gen / verify --------------------------------------------------------------------


def _default_pair(name: str, k: int, seed: int, W=None):
    return next(lemmas.sampled_pairs(name, k, 1, seed, W))


def cmd_gen(args, out: Output) -> int:
    name = args.kind
    n_bits = lemmas.input_length(name, args.k)
    rng = random.Random(f"gen/{args.seed}")
    if args.x is None:
        if name == "star":
            x, y = comm.random_bits(n_bits, rng), None
        else:
            x, y = _default_pair(name, args.k, args.seed)
    else:
        x = comm.parse_bits(args.x, n_bits)
        y = comm.parse_bits(args.y, n_bits) if args.y is not None else None
    if y is None and name != "star":
        raise comm.InputError(f"--y is required for kind {name}")
    inst = lemmas.build(name, args.k, x, y, c=args.c)
    if args.format == "dot":
        out.raw(to_dot(inst.graph, inst.partition, name=name))
    else:
        out.line(lemmas.instance_to_dict(inst))
    return EXIT_OK


def cmd_verify(args, out: Output) -> int:
    inst, _ = _load_instance(args.inp)
    if inst is None:
        raise ValueError("input file carries no instance kind")
    if args.kind and lemmas.kind_of(args.kind) != inst.kind:
        raise ValueError(f"file holds a {lemmas.SHORT_NAMES[inst.kind]} instance, not {args.kind}")
    rep = lemmas.verify(inst)
    out.line(rep)
    return EXIT_OK if rep["matches_lemma"] else EXIT_COUNTEREXAMPLE


# -- simulate / protocol --------------------------------------------------------------------


def _program(algo: str, inst, g: Graph, p: Partition | None):
    """(program, inputs) for an algorithm name."""
    if algo == "ident":
        if inst is None or inst.kind != gadgets.IDENTICAL:
            raise ValueError("ident needs an identical-subgraphs instance")
        k, W = inst.params["k"], inst.params["W"]
        return sim.IdenticalDetectProgram(k, W, inst.groups["A"][0]), sim.ident_inputs(inst)
    if algo == "flood":
        return sim.FloodProgram(0), None
    if algo == "gather":
        if inst is None or inst.kind in (gadgets.APSP_STAR,):
            raise ValueError("gather needs a decision instance")
        w_max = inst.params.get("W_max", max(1, g.max_weight))
        return sim.GatherDecideProgram(alicebob.predicate_for(inst), g.n, w_max), None
    raise ValueError(f"unknown algorithm {algo!r}")


def _sim_config(args, n: int) -> sim.SimConfig:
    if args.bandwidth:
        return sim.SimConfig(args.bandwidth, args.max_rounds, args.seed)
    return sim.SimConfig.for_graph(n, max_rounds=args.max_rounds, seed=args.seed)


def cmd_simulate(args, out: Output) -> int:
    inst, d = _load_instance(args.inp)
    g, p = (inst.graph, inst.partition) if inst else graph_from_dict(d)
    if not is_connected(g):
        raise ValueError("graph must be connected")
    prog, inputs = _program(args.algo, inst, g, p)
    cfg = _sim_config(args, g.n)
    outs, tr = sim.run(g, prog, cfg, inputs)
    out.line({
        "algo": args.algo,
        "verdicts": outs,
        "rounds": tr.rounds_used,
        "bits_total": tr.bits_total,
        "bits_per_edge": {f"{u}-{v}": b for (u, v), b in sorted(tr.bits_per_edge().items())},
        "bandwidth": cfg.bandwidth_bits,
        "diameter": diameter(g),
    })
    return EXIT_OK


def _random_blocks(n: int, t: int, seed: int) -> list[int]:
    if not 2 <= t <= n:
        raise ValueError(f"need 2 <= t <= n, got t={t}, n={n}")
    rng = random.Random(f"blocks/{seed}/{n}/{t}")
    blocks = list(range(t)) + [rng.randrange(t) for _ in range(n - t)]
    rng.shuffle(blocks)
    return blocks


def cmd_protocol(args, out: Output) -> int:
    inst, d = _load_instance(args.inp)
    g, p = (inst.graph, inst.partition) if inst else graph_from_dict(d)
    if args.algo == "apsp2":
        if p is None:
            raise ValueError("apsp2 needs a partition in the input file")
        r = alicebob.apsp_two_party(g, p)
        exact = r.distances() == [apsp_exact(g).row(u) for u in range(g.n)]
        rep = {"outputs_digest": alicebob.outputs_digest(r.distances()), "total_bits": r.total_bits,
               "bound": r.bound, "F": r.F, "exact": exact}
    elif args.algo == "apspT":
        blocks = _random_blocks(g.n, args.t, args.seed)
        r = alicebob.apsp_blackboard(g, blocks)
        exact = r.distances() == [apsp_exact(g).row(u) for u in range(g.n)]
        rep = {"outputs_digest": alicebob.outputs_digest(r.distances()), "total_bits": r.total_bits,
               "bound": r.bound, "F": r.F, "t": args.t, "exact": exact}
    else:
        if p is None:
            raise ValueError("simulate needs a partition in the input file")
        prog, inputs = _program(args.program, inst, g, p)
        cfg = _sim_config(args, g.n)
        outs, tr = alicebob.simulate_partitioned(g, p, prog, cfg, inputs)
        c = len(cut_edges(g, p))
        rep = {"outputs_digest": alicebob.outputs_digest(outs), "total_bits": tr.total_bits,
               "bound": alicebob.transcript_bound(tr, c, cfg.bandwidth_bits), "rounds": tr.rounds_used,
               "cut_size": c, "program": args.program}
    rep["algo"] = args.algo
    rep["bound_satisfied"] = rep["total_bits"] <= rep["bound"]
    out.line(rep)
    if not rep["bound_satisfied"] or rep.get("exact") is False:
        return EXIT_INVARIANT
    return EXIT_OK


# -- check-lemma ------------------------------------------------------------------------------


def _check_job(job):
    name, k, x, y, c = job
    try:
        return lemmas.check_pair(name, k, x, y, c=c)
    except Exception as exc:  # report, do not abort the sweep
        return {"kind": name, "k": k, "x": comm.to_hex(x), "y": comm.to_hex(y),
                "status": "invariant", "error": f"{type(exc).__name__}: {exc}"}


def pair_stream(name: str, k: int, exhaustive: bool, sparse: int | None, count: int, seed: int) -> Iterator:
    n_bits = lemmas.input_length(name, k)
    if name == "ident":
        return lemmas.sampled_pairs(name, k, count, seed)
    if exhaustive:
        return lemmas.exhaustive_pairs(n_bits)
    if sparse is not None:
        return lemmas.exhaustive_pairs(n_bits, sparse)
    return lemmas.sampled_pairs(name, k, count, seed)


def check_lemma(name: str, k: int, pairs: Iterable, c: int | None = None, builder=None, nworkers: int = 1):
    """Yield one record per pair, in input order."""
    if builder is not None:
        for x, y in pairs:
            try:
                inst = builder(name, k, x, y, c=c)
                yield lemmas.check_instance(inst)
            except Exception as exc:
                yield {"kind": name, "k": k, "x": comm.to_hex(x), "y": comm.to_hex(y),
                       "status": "invariant", "error": f"{type(exc).__name__}: {exc}"}
        return
    jobs = ((name, k, x, y, c) for x, y in pairs)
    if nworkers > 1:
        with ProcessPoolExecutor(nworkers) as pool:
            yield from pool.map(_check_job, jobs, chunksize=32)
    else:
        yield from map(_check_job, jobs)


def summarize(records: Iterable[dict], out: Output | None = None, verbose: bool = True) -> dict:
    counts = {"pass": 0, "counterexample": 0, "invariant": 0}
    first = {}
    for rec in records:
        counts[rec["status"]] += 1
        if rec["status"] != "pass":
            first.setdefault(rec["status"], rec)
        if out is not None and (verbose or rec["status"] != "pass"):
            out.line(rec)
    summary = {"summary": True, "total": sum(counts.values()), **counts}
    if first:
        summary["first_failure"] = first.get("invariant") or first.get("counterexample")
    return summary


def exit_code(summary: dict) -> int:
    if summary["invariant"]:
        return EXIT_INVARIANT
    if summary["counterexample"]:
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def cmd_check_lemma(args, out: Output) -> int:
    name = args.kind
    if name == "star":
        raise ValueError("star has no two-party lemma; use bench --algo star")
    t0 = time.perf_counter()
    pairs = pair_stream(name, args.k, args.exhaustive, args.sparse, args.count, args.seed)
    recs = check_lemma(name, args.k, pairs, c=args.c, nworkers=workers())
    summary = summarize(recs, out, verbose=not args.quiet)
    summary.update(kind=name, k=args.k, seed=args.seed)
    if args.timing:
        summary["wall_seconds"] = round(time.perf_counter() - t0, 3)
    out.line(summary)
    return exit_code(summary)


# -- bench --------------------------------------------------------------------------------------


def random_connected_graph(n: int, rng: random.Random, w_max: int, extra: float = 1.0) -> Graph:
    """Random spanning tree plus about ``extra * n`` random chords, weights in [0, w_max]."""
    edges = {}
    for v in range(1, n):
        u = rng.randrange(v)
        edges[u, v] = rng.randrange(w_max + 1)
    for _ in range(int(extra * n)):
        u, v = sorted(rng.sample(range(n), 2))
        edges[u, v] = rng.randrange(w_max + 1)
    return Graph(n, [(u, v, w) for (u, v), w in edges.items()])


def random_partition(n: int, rng: random.Random) -> Partition:
    a = [u for u in range(n) if rng.random() < 0.5]
    if not a:
        a = [0]
    if len(a) == n:
        a = a[:-1]
    return Partition.from_sets(n, a)


def bench_ident(ks: Iterable[int], seed: int) -> Iterator[dict]:
    for k in ks:
        rng = random.Random(f"bench/ident/{seed}/{k}")
        W = gadgets.default_weight_bound(k)
        xs = [rng.randrange(W) for _ in gadgets.pairs(k)]
        ys = [rng.randrange(W) for _ in xs]
        for label, y in (("equal", xs), ("unequal", ys)):
            inst = gadgets.build_identical_subgraphs(k, xs, y, W)
            cfg = sim.SimConfig.for_graph(inst.n, seed=seed)
            r = sim.identical_subgraphs_detect(inst, cfg)
            D = int(diameter(inst.graph))
            yield {"bench": "ident", "k": k, "n": inst.n, "case": label, "D": D, "rounds": r.trace.rounds_used,
                   "bound": r.c_sim * D + r.c0, "c_sim": r.c_sim, "c0": r.c0, "bits_total": r.trace.bits_total,
                   "bandwidth": cfg.bandwidth_bits, "K": r.K, "verdict": r.verdicts[0]}


def bench_apsp2(ns: Iterable[int], seed: int) -> Iterator[dict]:
    for n in ns:
        rng = random.Random(f"bench/apsp2/{seed}/{n}")
        g = random_connected_graph(n, rng, n * n)
        p = random_partition(n, rng)
        r = alicebob.apsp_two_party(g, p)
        c = cut_edges(g, p)
        yield {"bench": "apsp2", "n": n, "cut_nodes": len(c.nodes), "F": r.F, "total_bits": r.total_bits,
               "bound": r.bound, "ratio": round(r.total_bits / r.bound, 4) if r.bound else 0.0,
               "exact": r.distances() == [apsp_exact(g).row(u) for u in range(n)]}


def bench_star(ns: Iterable[int], seed: int) -> Iterator[dict]:
    for n in ns:
        rng = random.Random(f"bench/star/{seed}/{n}")
        x = comm.random_bits((n - 2) * gadgets.star_batch_bits(n), rng)
        inst = gadgets.build_apsp_star(n, x)
        r = alicebob.apsp_two_party(inst.graph, inst.partition)
        b = inst.groups["b"][0]
        decoded = gadgets.decode_star_row(inst, r.bob[b])
        yield {"bench": "star", "n": n, "x_bits": len(x), "decoded": decoded == inst.x,
               "protocol_bits": r.total_bits, "cut_size": len(cut_edges(inst.graph, inst.partition))}


def cmd_bench(args, out: Output) -> int:
    ok = True
    algos = ("ident", "apsp2", "star") if args.algo == "all" else (args.algo,)
    for algo in algos:
        if algo == "ident":
            rows = bench_ident(args.sizes or (4, 8, 16), args.seed)
        elif algo == "apsp2":
            rows = bench_apsp2(args.sizes or (10, 20, 30, 40), args.seed)
        else:
            rows = bench_star(args.sizes or (8, 16, 32), args.seed)
        for row in rows:
            ok &= row.get("rounds", 0) <= row.get("bound", math.inf) if algo == "ident" else True
            ok &= row.get("exact", True) and row.get("decoded", True)
            ok &= row.get("ratio", 0) <= 1
            out.line(row)
    return EXIT_OK if ok else EXIT_INVARIANT


# -- parser -------------------------------------------------------------------------------------


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="master seed (default 0)")
    p.add_argument("--out", default=d(None), help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "dot"), default=d("json"))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="congestlab", description="CONGEST lower-bound constructions and protocols")
    _global_flags(ap, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = ap.add_subparsers(dest="cmd", required=True)
    kinds = sorted(lemmas.KIND_NAMES)

    g = sub.add_parser("gen", parents=[common], help="generate a lower-bound instance")
    g.add_argument("--kind", required=True, choices=kinds)
    g.add_argument("--k", type=int, required=True, help="family size (n for star)")
    g.add_argument("--c", type=int, default=None, help="colors (colc) or copies (colapprox)")
    g.add_argument("--x", default=None, help="LEN:HEX, literal bits, or seed:N")
    g.add_argument("--y", default=None)
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", parents=[common], help="evaluate the family predicate on an instance file")
    v.add_argument("--kind", choices=kinds, default=None)
    v.add_argument("--in", dest="inp", required=True)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", parents=[common], help="run a CONGEST program")
    s.add_argument("--algo", choices=("ident", "flood", "gather"), default="ident")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--bandwidth", type=int, default=None, help="bits per message (default ceil(4 log2 n))")
    s.add_argument("--max-rounds", type=int, default=10_000)
    s.set_defaults(func=cmd_simulate)

    pr = sub.add_parser("protocol", parents=[common], help="run a two-party or blackboard protocol")
    pr.add_argument("--algo", choices=("apsp2", "apspT", "simulate"), required=True)
    pr.add_argument("--in", dest="inp", required=True)
    pr.add_argument("--t", type=int, default=3)
    pr.add_argument("--program", choices=("ident", "flood", "gather"), default="ident")
    pr.add_argument("--bandwidth", type=int, default=None)
    pr.add_argument("--max-rounds", type=int, default=10_000)
    pr.set_defaults(func=cmd_protocol)

    c = sub.add_parser("check-lemma", parents=[common], help="sweep (x, y) pairs through a lemma")
    c.add_argument("kind", choices=kinds)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--c", type=int, default=None)
    mode = c.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--sparse", type=int, default=None, metavar="S", help="all strings with at most S ones")
    mode.add_argument("--count", type=int, default=100)
    c.add_argument("--quiet", action="store_true", help="emit only failures and the summary")
    c.add_argument("--timing", action="store_true", help="add wall time to the summary")
    c.set_defaults(func=cmd_check_lemma)

    b = sub.add_parser("bench", parents=[common], help="rounds and bits against instance size")
    b.add_argument("--algo", choices=("ident", "apsp2", "star", "all"), default="all")
    b.add_argument("--sizes", type=int, nargs="*", default=None)
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = Output(args.out)
    try:
        return args.func(args, out)
    except (ValueError, OSError, KeyError) as exc:
        print(f"congestlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except sim.SimError as exc:
        print(f"congestlab: simulation failed: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    finally:
        out.close()


if __name__ == "__main__":
    sys.exit(main())
