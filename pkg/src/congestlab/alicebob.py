"""Two-party (and t-party) protocols over a fixed graph partition.

Three things live here: a cut-mediated simulation of any node program, in
which Alice runs the V_A nodes and Bob the V_B nodes and only cut messages
are communicated; the two-phase APSP protocol over distance rows; and its
blackboard version for t players. All bit counts are exact.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

from . import comm, oracles
from .gadgets import (
    COLORING3,
    COLORING_APPROX,
    COLORING_C,
    CYCLE8,
    IDENTICAL,
    MVC,
    LowerBoundInstance,
)
from .graph import INF, Graph, GraphError, Partition, apsp_exact, cut_edges, multiway_cut
from .sim import MaxRoundsExceeded, Msg, NodeProgram, SimConfig, _Engine

# -- transcripts ---------------------------------------------------------------------


@dataclass(frozen=True)
class TranscriptRecord:
    round: int
    edge: tuple[int, int] | None
    direction: str  # "A->B" or "B->A"
    nbits: int
    payload: int = 0


@dataclass
class Transcript:
    records: list[TranscriptRecord] = field(default_factory=list)
    rounds_used: int = 0

    @property
    def total_bits(self) -> int:
        return sum(r.nbits for r in self.records)

    def add(self, rec: TranscriptRecord) -> None:
        self.records.append(rec)

    def edges(self) -> set[tuple[int, int]]:
        return {r.edge for r in self.records if r.edge is not None}


# -- simulation ----------------------------------------------------------------------


def simulate_partitioned(
    g: Graph, p: Partition, prog: NodeProgram, cfg: SimConfig, inputs: Mapping | None = None
) -> tuple[list, Transcript]:
    """Run ``prog`` as Alice (V_A) and Bob (V_B) exchanging only cut messages.

    Each party steps its own nodes with the same per-node contexts and
    randomness as :func:`run`. Messages between two nodes of one side never
    leave that party. Whether a party has halted is treated as free control
    information; it only decides when both stop.
    """
    inputs = inputs or {}
    alice = _Engine(g, prog, cfg, p.nodes("A"), {u: inputs.get(u) for u in p.nodes("A")})
    bob = _Engine(g, prog, cfg, p.nodes("B"), {u: inputs.get(u) for u in p.nodes("B")})
    tr = Transcript()
    inbox_a: dict[int, dict[int, Msg]] = {}
    inbox_b: dict[int, dict[int, Msg]] = {}
    t = 0
    last = 0
    while True:
        sent_a = alice.step(t, inbox_a)
        sent_b = bob.step(t, inbox_b)
        inbox_a, inbox_b = {}, {}
        for sent, home in ((sent_a, "A"), (sent_b, "B")):
            for u, v, msg in sent:
                if p[v] == home:
                    (inbox_a if home == "A" else inbox_b).setdefault(v, {})[u] = msg
                else:
                    direction = "A->B" if home == "A" else "B->A"
                    tr.add(TranscriptRecord(t + 1, (min(u, v), max(u, v)), direction, msg.nbits, msg.payload))
                    (inbox_b if home == "A" else inbox_a).setdefault(v, {})[u] = msg
                last = t + 1
        if alice.all_halted() and bob.all_halted():
            break
        t += 1
        if t > cfg.max_rounds:
            raise MaxRoundsExceeded(f"{prog.name} did not halt within {cfg.max_rounds} rounds")
    tr.rounds_used = max(t, last)
    outs = {**alice.outputs(), **bob.outputs()}
    return [outs[u] for u in range(g.n)], tr


def simulate_two_party(
    inst: LowerBoundInstance, prog: NodeProgram, cfg: SimConfig, inputs: Mapping | None = None
) -> tuple[list, Transcript]:
    return simulate_partitioned(inst.graph, inst.partition, prog, cfg, inputs)


def transcript_bound(tr: Transcript, cut_size: int, bandwidth: int) -> int:
    return tr.rounds_used * cut_size * 2 * bandwidth


# -- party views and distance rows ------------------------------------------------------


@dataclass
class PartyView:
    """What one party is given: its induced subgraph, the cut with weights, far cut endpoints."""

    side: str
    nodes: list[int]
    graph: Graph  # induced, local ids
    local: dict[int, int]  # global id -> local id
    cut: list[tuple[int, int, int]]
    near: list[int]  # own cut endpoints, sorted
    far: list[int]  # other side's cut endpoints, sorted


def party_view(g: Graph, p: Partition, side: str) -> PartyView:
    if side not in ("A", "B"):
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    c = cut_edges(g, p)
    nodes = p.nodes(side)
    sub, old = g.induced(nodes)
    near = c.side_a if side == "A" else c.side_b
    far = c.side_b if side == "A" else c.side_a
    return PartyView(
        side, nodes, sub, {u: i for i, u in enumerate(old)},
        [(u, v, g.weight(u, v)) for u, v in c], sorted(near), sorted(far),
    )


def field_width(n: int, w_max: int) -> int:
    """Bits per distance: ceil(log2(n*W_max + 1)) + 1, the top codeword meaning Infinity."""
    return math.ceil(math.log2(n * w_max + 1)) + 1


def encode_rows(values: Sequence[int | float], F: int) -> tuple[int, int]:
    """Pack distances into one bit vector of ``len(values) * F`` bits."""
    inf_code = (1 << F) - 1
    acc = 0
    for t, d in enumerate(values):
        if d == INF:
            code = inf_code
        else:
            code = int(d)
            if not 0 <= code < inf_code:
                raise ValueError(f"distance {d} does not fit in {F} bits")
        acc |= code << (t * F)
    return acc, len(values) * F


def decode_rows(payload: int, count: int, F: int) -> list[int | float]:
    inf_code = (1 << F) - 1
    out: list[int | float] = []
    for t in range(count):
        code = (payload >> (t * F)) & inf_code
        out.append(INF if code == inf_code else code)
    return out


def _local_apsp(view: PartyView):
    return apsp_exact(view.graph)


@dataclass
class VirtualGraph:
    """V_A ∪ C_B with E_A, the cut, and C_B pairs weighted by the other side's distances."""

    nodes: list[int]
    graph: Graph  # local ids
    local: dict[int, int]

    def dist(self):
        return apsp_exact(self.graph)


def build_virtual_graph(view: PartyView, g: Graph, far_dist: Mapping[tuple[int, int], int | float]) -> VirtualGraph:
    nodes = sorted(set(view.nodes) | set(view.far))
    local = {u: i for i, u in enumerate(nodes)}
    edges = {}
    for u, v, w in g.edges():
        if u in view.local and v in view.local:
            edges[local[u], local[v]] = w
    for u, v, w in view.cut:
        edges[min(local[u], local[v]), max(local[u], local[v])] = w
    for i, x in enumerate(view.far):
        for y in view.far[i + 1:]:
            d = far_dist[x, y]
            if d != INF:
                edges[min(local[x], local[y]), max(local[x], local[y])] = int(d)
    return VirtualGraph(nodes, Graph(len(nodes), [(a, b, w) for (a, b), w in edges.items()]), local)


def _combine(view: PartyView, vg: VirtualGraph, far_rows: Mapping[tuple[int, int], int | float], n: int):
    """Distances from each own node to every node of G."""
    dv = vg.dist()
    out = {}
    for u in view.nodes:
        lu = vg.local[u]
        row: list[int | float] = [INF] * n
        for v in range(n):
            if v in view.local:
                row[v] = dv[lu, vg.local[v]]
            else:
                best = INF
                for x in view.far:
                    d = dv[lu, vg.local[x]] + far_rows[x, v]
                    if d < best:
                        best = d
                row[v] = best
        out[u] = row
    return out


@dataclass
class TwoPartyAPSP:
    alice: dict[int, list]
    bob: dict[int, list]
    transcript: Transcript
    F: int
    bound: int
    virtual_a: VirtualGraph
    virtual_b: VirtualGraph

    @property
    def total_bits(self) -> int:
        return self.transcript.total_bits

    def distances(self) -> list[list]:
        rows = {**self.alice, **self.bob}
        return [rows[u] for u in sorted(rows)]


def _send_rows(view: PartyView, F: int) -> tuple[Msg, list[tuple[int, int]]]:
    """One party's message: d_own(x, v) for x in its cut endpoints (outer) and v in its nodes (inner)."""
    d = _local_apsp(view)
    keys = [(x, v) for x in view.near for v in view.nodes]
    payload, nbits = encode_rows([d[view.local[x], view.local[v]] for x, v in keys], F)
    return Msg(payload, nbits), keys


def apsp_two_party(g: Graph, p: Partition, w_max: int | None = None) -> TwoPartyAPSP:
    """Exact APSP split between Alice and Bob with two half-duplex messages.

    ``w_max`` is a public bound on edge weights (defaults to the largest
    weight) and fixes the field width, so rows carry no indices or lengths.
    """
    if any(w < 0 for _, _, w in g.edges()):
        raise GraphError("weights must be non-negative")
    n = g.n
    w_max = max(1, g.max_weight if w_max is None else w_max)
    F = field_width(n, w_max)
    va, vb = party_view(g, p, "A"), party_view(g, p, "B")
    tr = Transcript()

    # phase 1: Bob -> Alice
    msg_b, keys_b = _send_rows(vb, F)
    tr.add(TranscriptRecord(1, None, "B->A", msg_b.nbits, msg_b.payload))
    rows_b = dict(zip(keys_b, decode_rows(msg_b.payload, len(keys_b), F)))
    far_b = {**rows_b, **{(v, x): d for (x, v), d in rows_b.items()}}
    vga = build_virtual_graph(va, g, far_b)
    alice = _combine(va, vga, far_b, n)

    # phase 2: Alice -> Bob
    msg_a, keys_a = _send_rows(va, F)
    tr.add(TranscriptRecord(2, None, "A->B", msg_a.nbits, msg_a.payload))
    rows_a = dict(zip(keys_a, decode_rows(msg_a.payload, len(keys_a), F)))
    far_a = {**rows_a, **{(v, x): d for (x, v), d in rows_a.items()}}
    vgb = build_virtual_graph(vb, g, far_a)
    bob = _combine(vb, vgb, far_a, n)

    tr.rounds_used = 2
    nc = len(va.near) + len(vb.near)
    return TwoPartyAPSP(alice, bob, tr, F, nc * n * F, vga, vgb)


# -- blackboard, t players ----------------------------------------------------------------


@dataclass
class BlackboardAPSP:
    players: list[dict[int, list]]
    total_bits: int
    cut_bits: int
    row_bits: int
    F: int
    bound: int

    def distances(self) -> list[list]:
        rows = {}
        for pl in self.players:
            rows.update(pl)
        return [rows[u] for u in sorted(rows)]


def _normalize_blocks(g: Graph, parts) -> list[int]:
    """Accept a block id per node, or a list of node lists."""
    if parts and isinstance(parts[0], (list, tuple, set, frozenset)):
        blocks = [-1] * g.n
        for b, nodes in enumerate(parts):
            if not nodes:
                raise GraphError(f"block {b} is empty")
            for u in nodes:
                if blocks[u] != -1:
                    raise GraphError(f"node {u} in two blocks")
                blocks[u] = b
        if -1 in blocks:
            raise GraphError("partition is not total")
        return blocks
    blocks = list(parts)
    if len(blocks) != g.n:
        raise GraphError(f"partition covers {len(blocks)} of {g.n} nodes")
    ids = sorted(set(blocks))
    if ids != list(range(len(ids))):
        raise GraphError("block ids must be 0..t-1 with no empty block")
    return blocks


def apsp_blackboard(g: Graph, parts, w_max: int | None = None) -> BlackboardAPSP:
    """t-player APSP: cut edges are published, then each player writes distances to its cut nodes."""
    blocks = _normalize_blocks(g, parts)
    t = max(blocks) + 1
    if t < 2:
        raise GraphError("need at least 2 players")
    n = g.n
    w_max = max(1, g.max_weight if w_max is None else w_max)
    F = field_width(n, w_max)
    idw = math.ceil(math.log2(n)) if n > 1 else 1
    cut, cut_nodes = multiway_cut(g, blocks)

    # cut publication: (u, v, w) per cut edge
    board: list[Msg] = []
    for u, v in sorted(cut):
        board.append(Msg.pack([(u, idw), (v, idw), (g.weight(u, v), F)]))
    cut_bits = sum(m.nbits for m in board)
    published = [tuple(m.unpack([idw, idw, F])) for m in board]

    members = [[u for u in range(n) if blocks[u] == b] for b in range(t)]
    near = [sorted(x for x in members[b] if x in cut_nodes) for b in range(t)]

    # each player writes d_{G_i}(x, v) for x in C_i, v in V_i
    written: dict[tuple[int, int], int | float] = {}
    row_bits = 0
    for b in range(t):
        sub, old = g.induced(members[b])
        loc = {u: i for i, u in enumerate(old)}
        d = apsp_exact(sub)
        keys = [(x, v) for x in near[b] for v in members[b]]
        payload, nbits = encode_rows([d[loc[x], loc[v]] for x, v in keys], F)
        row_bits += nbits
        for key, val in zip(keys, decode_rows(payload, len(keys), F)):
            written[key] = val
            written[key[1], key[0]] = val

    players = []
    for i in range(t):
        hn = sorted(set(members[i]) | cut_nodes)
        loc = {u: j for j, u in enumerate(hn)}
        edges = {}
        for u, v, w in g.edges():
            if blocks[u] == i and blocks[v] == i:
                edges[loc[u], loc[v]] = w
        for u, v, w in published:
            edges[min(loc[u], loc[v]), max(loc[u], loc[v])] = w
        for j in range(t):
            if j == i:
                continue
            cj = near[j]
            for a in range(len(cj)):
                for c in cj[a + 1:]:
                    dd = written[cj[a], c]
                    if dd != INF:
                        key = (min(loc[cj[a]], loc[c]), max(loc[cj[a]], loc[c]))
                        edges[key] = min(edges.get(key, INF), int(dd))
        dh = apsp_exact(Graph(len(hn), [(a, c, w) for (a, c), w in edges.items()]))
        out = {}
        for u in members[i]:
            row: list[int | float] = [INF] * n
            for v in range(n):
                if v in loc:
                    row[v] = dh[loc[u], loc[v]]
                else:
                    bj = blocks[v]
                    row[v] = min((dh[loc[u], loc[x]] + written[x, v] for x in near[bj]), default=INF)
            out[u] = row
        players.append(out)

    bound = len(cut) * (2 * idw + F) + len(cut_nodes) * n * F
    return BlackboardAPSP(players, cut_bits + row_bits, cut_bits, row_bits, F, bound)


# -- reduction reports -----------------------------------------------------------------------

FUNCTIONS = {"disj": comm.disj, "eq": comm.eq}
DISJ_KINDS = (MVC, COLORING3, COLORING_C, COLORING_APPROX, CYCLE8)


def function_for(inst: LowerBoundInstance) -> str:
    return "eq" if inst.kind == IDENTICAL else "disj"


def predicate_for(inst: LowerBoundInstance) -> Callable[[Graph], bool]:
    """The graph predicate of the family, as a function of a graph on the instance's node ids.

    DISJ families are oriented so the predicate holds iff the inputs intersect;
    the identical-subgraphs predicate holds iff the inputs are equal.
    """
    k = inst.params.get("k")
    if inst.kind == MVC:
        M = inst.params["M"]
        return lambda g: oracles.min_vc_size(g, M) is not None
    if inst.kind == COLORING3:
        return lambda g: oracles.is_c_colorable(g, 3)
    if inst.kind == COLORING_C:
        c = inst.params["c"]
        return lambda g: oracles.is_c_colorable(g, c)
    if inst.kind == COLORING_APPROX:
        c = inst.params["c"]
        return lambda g: oracles.is_c_colorable(g, 3 * c)
    if inst.kind == CYCLE8:
        W = inst.params["W"]
        return lambda g: oracles.has_cycle_len8_weight(g, W)[0]
    if inst.kind == IDENTICAL:
        a, b = inst.groups["A"], inst.groups["B"]

        def same(g: Graph) -> bool:
            for i in range(k):
                for j in range(i + 1, k):
                    ea, eb = g.has_edge(a[i], a[j]), g.has_edge(b[i], b[j])
                    if ea != eb or (ea and g.weight(a[i], a[j]) != g.weight(b[i], b[j])):
                        return False
            return True

        return same
    raise ValueError(f"no decision predicate for kind {inst.kind}")


def expected_predicate(inst: LowerBoundInstance, f: str) -> bool:
    val = FUNCTIONS[f](inst.x, inst.y)
    return (not val) if f == "disj" else val


def unanimous(outputs: Sequence) -> Any:
    """Default extraction map for decision programs: the common output of all nodes."""
    vals = set(outputs)
    if len(vals) != 1:
        raise ValueError(f"nodes disagree: {sorted(map(str, vals))}")
    return outputs[0]


def reduction_report(
    inst: LowerBoundInstance,
    prog: NodeProgram,
    f: str | None = None,
    cfg: SimConfig | None = None,
    inputs: Mapping | None = None,
    extract: Callable[[Sequence], Any] = unanimous,
) -> dict:
    """Run ``prog`` through the two-party simulation and cross-check three verdicts.

    ``extract`` maps node outputs to the program's answer; decision programs
    use :func:`unanimous`. Any disagreement lands in ``mismatches``.
    """
    f = f or function_for(inst)
    if f not in FUNCTIONS:
        raise ValueError(f"unknown function {f!r}")
    if inst.y is None:
        raise ValueError("reduction report needs a two-input instance")
    cfg = cfg or SimConfig.for_graph(inst.n)
    outs, tr = simulate_two_party(inst, prog, cfg, inputs)
    f_val = FUNCTIONS[f](inst.x, inst.y)
    want = expected_predicate(inst, f)
    pred = bool(predicate_for(inst)(inst.graph))
    mismatches = []
    try:
        verdict = extract(outs)
    except ValueError as exc:
        verdict = None
        mismatches.append(f"extraction: {exc}")
    if pred != want:
        mismatches.append(f"predicate={pred} but f={f_val} requires {want}")
    if verdict is not None and bool(verdict) != pred:
        mismatches.append(f"program={verdict} but predicate={pred}")
    c = len(cut_edges(inst.graph, inst.partition))
    bound = transcript_bound(tr, c, cfg.bandwidth_bits)
    return {
        "kind": inst.kind,
        "f": f,
        "f_value": f_val,
        "predicate": pred,
        "program_verdict": verdict,
        "rounds": tr.rounds_used,
        "cut_size": c,
        "transcript_bits": tr.total_bits,
        "transcript_bound": bound,
        "bound_ok": tr.total_bits <= bound,
        "mismatches": mismatches,
        "agree": not mismatches,
    }


def outputs_digest(obj) -> str:
    """Stable SHA-256 over a JSON rendering (Infinity written as null)."""

    def norm(v):
        if isinstance(v, float) and math.isinf(v):
            return None
        if isinstance(v, dict):
            return {str(k): norm(x) for k, x in sorted(v.items())}
        if isinstance(v, (list, tuple)):
            return [norm(x) for x in v]
        return v

    blob = json.dumps(norm(obj), sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()
