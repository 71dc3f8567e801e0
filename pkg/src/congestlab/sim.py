"""Round-synchronous CONGEST simulator with bit-exact bandwidth enforcement.

Execution model: at step 0 every node runs ``round`` on an empty inbox; the
messages it emits at step t cross their edges in communication round t+1 and
are seen at step t+1. A run ends once every node has halted. ``rounds_used``
is the last communication round that carried a message (or the last step,
whichever is later), so flooding a path with L edges takes L rounds.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable, Mapping, Sequence

from .graph import Graph

# -- wire format -------------------------------------------------------------------


@dataclass(frozen=True)
class Msg:
    """A bit vector: ``nbits`` low-order bits of ``payload``."""

    payload: int
    nbits: int

    @classmethod
    def pack(cls, fields: Iterable[tuple[int, int]]) -> "Msg":
        """Concatenate ``(value, width)`` fields, first field in the low bits."""
        v, off = 0, 0
        for value, width in fields:
            if value < 0 or value >> width:
                raise ValueError(f"{value} does not fit in {width} bits")
            v |= value << off
            off += width
        return cls(v, off)

    def unpack(self, widths: Sequence[int]) -> list[int]:
        out, off = [], 0
        for w in widths:
            out.append((self.payload >> off) & ((1 << w) - 1))
            off += w
        return out


class SimError(RuntimeError):
    pass


class BandwidthExceeded(SimError):
    def __init__(self, edge, round_, size, limit):
        super().__init__(f"message of {size} bits on edge {edge} in round {round_} exceeds {limit}")
        self.edge, self.round, self.size, self.limit = edge, round_, size, limit


class MaxRoundsExceeded(SimError):
    pass


@dataclass(frozen=True)
class SimConfig:
    bandwidth_bits: int
    max_rounds: int = 10_000
    seed: int = 0
    bandwidth_factor: float | None = None

    def __post_init__(self):
        if self.bandwidth_bits < 1:
            raise ValueError("bandwidth_bits must be >= 1")

    @classmethod
    def for_graph(cls, n: int, factor: float = 4, **kw) -> "SimConfig":
        """Bandwidth ``ceil(factor * log2 n)`` bits (the O(log n) of the model)."""
        b = max(1, math.ceil(factor * math.log2(max(n, 2))))
        return cls(bandwidth_bits=b, bandwidth_factor=factor, **kw)


@dataclass
class NodeContext:
    node: int
    n: int
    neighbors: tuple[int, ...]
    weights: dict[int, int]
    input: Any
    rng: random.Random
    bandwidth: int


class NodeProgram:
    """A per-node state machine. Subclasses override the four hooks.

    ``round`` receives ``{sender: Msg}`` and returns ``(state, {receiver: Msg})``.
    A node may only use its context, its inbox and its own ``rng``.
    """

    name = "program"

    def init(self, ctx: NodeContext) -> Any:
        raise NotImplementedError

    def round(self, state, inbox: Mapping[int, Msg], t: int):
        raise NotImplementedError

    def output(self, state) -> Any:
        return None

    def halted(self, state) -> bool:
        raise NotImplementedError


@dataclass
class MessageRecord:
    round: int
    src: int
    dst: int
    nbits: int
    payload: int


@dataclass
class SimTrace:
    rounds_used: int = 0
    bandwidth_bits: int = 0
    records: list[MessageRecord] = field(default_factory=list)
    final_states: dict = field(default_factory=dict, repr=False)
    meta: dict = field(default_factory=dict)

    @property
    def bits_total(self) -> int:
        return sum(r.nbits for r in self.records)

    def bits_per_edge(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for r in self.records:
            e = (min(r.src, r.dst), max(r.src, r.dst))
            out[e] = out.get(e, 0) + r.nbits
        return out

    def bits(self, edge: tuple[int, int], round_: int, direction: tuple[int, int]) -> int:
        return sum(
            r.nbits for r in self.records if r.round == round_ and (r.src, r.dst) == direction and
            {r.src, r.dst} == set(edge)
        )

    @property
    def max_message_bits(self) -> int:
        return max((r.nbits for r in self.records), default=0)


def node_rng(seed: int, node: int) -> random.Random:
    return random.Random(f"congest/{seed}/{node}")


class _Engine:
    """Steps a subset of nodes. Used whole by :func:`run`, per side by the two-party simulation."""

    def __init__(self, g: Graph, prog: NodeProgram, cfg: SimConfig, nodes: Iterable[int], inputs: Mapping | None):
        self.prog, self.cfg, self.g = prog, cfg, g
        self.nodes = sorted(nodes)
        self.states = {}
        self.halted = {}
        inputs = inputs or {}
        for u in self.nodes:
            nb = g.neighbors(u)
            ctx = NodeContext(
                u, g.n, nb, {v: g.weight(u, v) for v in nb}, inputs.get(u), node_rng(cfg.seed, u), cfg.bandwidth_bits
            )
            self.states[u] = prog.init(ctx)
            self.halted[u] = False

    def all_halted(self) -> bool:
        return all(self.halted.values())

    def step(self, t: int, inboxes: Mapping[int, Mapping[int, Msg]]) -> list[tuple[int, int, Msg]]:
        sent = []
        for u in self.nodes:
            if self.halted[u]:
                continue
            state, outbox = self.prog.round(self.states[u], inboxes.get(u, {}), t)
            self.states[u] = state
            for v in sorted(outbox):
                msg = outbox[v]
                if not self.g.has_edge(u, v):
                    raise SimError(f"node {u} sent to non-neighbor {v} at step {t}")
                if msg.nbits > self.cfg.bandwidth_bits:
                    raise BandwidthExceeded((u, v), t + 1, msg.nbits, self.cfg.bandwidth_bits)
                sent.append((u, v, msg))
            self.halted[u] = bool(self.prog.halted(state))
        return sent

    def outputs(self) -> dict[int, Any]:
        return {u: self.prog.output(self.states[u]) for u in self.nodes}


def run(g: Graph, prog: NodeProgram, cfg: SimConfig, inputs: Mapping | None = None) -> tuple[list, SimTrace]:
    """Execute ``prog`` on every node of ``g`` in lockstep; return per-node outputs and the trace."""
    eng = _Engine(g, prog, cfg, range(g.n), inputs)
    trace = SimTrace(bandwidth_bits=cfg.bandwidth_bits)
    inboxes: dict[int, dict[int, Msg]] = {}
    t = 0
    last_round = 0
    while True:
        sent = eng.step(t, inboxes)
        inboxes = {}
        for u, v, msg in sent:
            trace.records.append(MessageRecord(t + 1, u, v, msg.nbits, msg.payload))
            inboxes.setdefault(v, {})[u] = msg
            last_round = t + 1
        if eng.all_halted():
            break
        t += 1
        if t > cfg.max_rounds:
            raise MaxRoundsExceeded(f"{prog.name} did not halt within {cfg.max_rounds} rounds")
    trace.rounds_used = max(t, last_round)
    trace.final_states = eng.states
    outs = eng.outputs()
    return [outs[u] for u in range(g.n)], trace


# -- simple programs ------------------------------------------------------------------


class FloodProgram(NodeProgram):
    """Flood a 1-bit token from ``root``; each node outputs the step it first heard it."""

    name = "flood"

    def __init__(self, root: int = 0):
        self.root = root

    def init(self, ctx):
        return {"ctx": ctx, "heard": 0 if ctx.node == self.root else None, "done": False}

    def round(self, st, inbox, t):
        out = {}
        if st["heard"] is None and inbox:
            st["heard"] = t
        if st["heard"] == t:
            out = {v: Msg(1, 1) for v in st["ctx"].neighbors if v not in inbox}
            st["done"] = True
        return st, out

    def output(self, st):
        return st["heard"]

    def halted(self, st):
        return st["done"]


class EchoProgram(NodeProgram):
    """Every node sends ``nbits`` zero bits to each neighbor once (bandwidth probe)."""

    name = "echo"

    def __init__(self, nbits: int):
        self.nbits = nbits

    def init(self, ctx):
        return {"ctx": ctx, "done": False}

    def round(self, st, inbox, t):
        if t == 0:
            st["done"] = True
            return st, {v: Msg(0, self.nbits) for v in st["ctx"].neighbors}
        return st, {}

    def halted(self, st):
        return st["done"]


class ProbeProgram(NodeProgram):
    """Records, for each step, which senders' messages were visible (causality probe)."""

    name = "probe"

    def __init__(self, steps: int = 3):
        self.steps = steps

    def init(self, ctx):
        return {"ctx": ctx, "seen": [], "t": 0}

    def round(self, st, inbox, t):
        st["seen"].append((t, sorted((u, m.payload) for u, m in inbox.items())))
        st["t"] = t
        if t >= self.steps:
            return st, {}
        # payload = emitting step, so receivers can check it is exactly t-1
        return st, {v: Msg.pack([(t, 8)]) for v in st["ctx"].neighbors}

    def output(self, st):
        return st["seen"]

    def halted(self, st):
        return st["t"] >= self.steps


# -- BFS-tree programs ------------------------------------------------------------------

TAG_BITS = 3
JOIN, ACK, ECHO, DOWN, UP, VERDICT, END, DATA = range(8)


def fragment(value: int, width: int, payload_bits: int) -> list[tuple[int, int]]:
    """Split ``value`` (``width`` bits) into low-first chunks of at most ``payload_bits``."""
    if payload_bits < 1:
        raise SimError("bandwidth too small for the tag plus one payload bit")
    out = []
    off = 0
    while off < width or not out:
        w = min(payload_bits, width - off) if width else 0
        out.append(((value >> off) & ((1 << w) - 1), w))
        off += max(w, 1)
    return out


def nfragments(width: int, payload_bits: int) -> int:
    return max(1, -(-width // payload_bits))


class _Reassembler:
    """Collects fixed-width values arriving in fragments from one sender."""

    __slots__ = ("width", "pbits", "value", "got", "off")

    def __init__(self, width: int, pbits: int):
        self.width, self.pbits = width, pbits
        self.value = self.got = self.off = 0

    def feed(self, chunk: int) -> int | None:
        w = min(self.pbits, self.width - self.off) if self.width else 0
        self.value |= chunk << self.off
        self.off += max(w, 1)
        self.got += 1
        if self.got == nfragments(self.width, self.pbits):
            v = self.value
            self.value = self.got = self.off = 0
            return v
        return None


class TreeProgram(NodeProgram):
    """BFS-tree construction shared by the aggregation programs.

    The root emits JOIN at step 0. A node first reached at step t adopts the
    smallest-id JOIN sender as parent, ACKs it, and JOINs its other
    neighbors. Children are final at step ``depth + 2``. Each node has one FIFO
    queue per neighbor; one queued message per edge leaves each step, so long
    values are streamed as consecutive fragments.
    """

    def __init__(self, root: int = 0):
        self.root = root

    def init(self, ctx):
        st = {
            "ctx": ctx,
            "parent": None,
            "depth": None,
            "children": set(),
            "ready": False,
            "q": {v: deque() for v in ctx.neighbors},
            "done": False,
            "out": None,
            "pbits": ctx.bandwidth - TAG_BITS,
        }
        if ctx.node == self.root:
            st["depth"] = 0
            for v in ctx.neighbors:
                self.send(st, v, JOIN)
        self.setup(st)
        return st

    def setup(self, st):
        pass

    @staticmethod
    def send(st, v, tag, value: int = 0, width: int = 0):
        st["q"][v].append(Msg.pack([(tag, TAG_BITS), (value, width)]))

    def send_value(self, st, v, tag, value, width):
        for chunk, w in fragment(value, width, st["pbits"]):
            self.send(st, v, tag, chunk, w)

    def round(self, st, inbox, t):
        ctx = st["ctx"]
        joins = []
        for u in sorted(inbox):
            m = inbox[u]
            tag = m.payload & 7
            body = m.payload >> TAG_BITS
            if tag == JOIN:
                joins.append(u)
            elif tag == ACK:
                st["children"].add(u)
            else:
                self.on_message(st, u, tag, body, t)
        if joins and st["depth"] is None:
            st["parent"] = min(joins)
            st["depth"] = t
            self.send(st, st["parent"], ACK)
            for v in ctx.neighbors:
                if v not in joins:
                    self.send(st, v, JOIN)
        if not st["ready"] and st["depth"] is not None and t >= st["depth"] + 2:
            st["ready"] = True
            self.on_ready(st, t)
        if st["ready"]:
            self.on_step(st, t)
        out = {}
        for v, q in st["q"].items():
            if q:
                out[v] = q.popleft()
        return st, out

    def on_message(self, st, u, tag, body, t):
        pass

    def on_ready(self, st, t):
        pass

    def on_step(self, st, t):
        pass

    def halted(self, st):
        return st["done"] and not any(st["q"].values())

    def output(self, st):
        return st["out"]


class ConvergecastProgram(TreeProgram):
    """Sum of per-node summands mod ``p`` aggregated at ``root``, optionally downcast to all."""

    name = "convergecast"

    def __init__(self, root: int, p: int, downcast: bool = True):
        super().__init__(root)
        if p < 2:
            raise ValueError("modulus must be >= 2")
        self.p = p
        self.width = max(1, (p - 1).bit_length())
        self.downcast = downcast

    def setup(self, st):
        s = st["ctx"].input
        s = 0 if s is None else int(s)
        if not 0 <= s < self.p:
            raise ValueError(f"summand {s} not reduced mod {self.p}")
        st.update(acc=s, pending=None, asm={}, sent_up=False)

    def on_message(self, st, u, tag, body, t):
        r = st["asm"].setdefault(u, _Reassembler(self.width, st["pbits"]))
        v = r.feed(body)
        if v is None:
            return
        if tag == UP:
            st["acc"] = (st["acc"] + v) % self.p
            st.setdefault("heard", set()).add(u)
            if st["pending"] is not None:
                st["pending"].discard(u)
        elif tag == DOWN:
            self._finish(st, v)

    def _finish(self, st, value):
        st["out"] = value
        for c in sorted(st["children"]):
            self.send_value(st, c, DOWN, value, self.width)
        st["done"] = True

    def on_ready(self, st, t):
        st["pending"] = set(st["children"]) - st.get("heard", set())

    def on_step(self, st, t):
        if st["sent_up"] or st["pending"]:
            return
        st["sent_up"] = True
        if st["ctx"].node == self.root:
            if self.downcast:
                self._finish(st, st["acc"])
            else:
                st["out"] = st["acc"]
                st["done"] = True
        else:
            self.send_value(st, st["parent"], UP, st["acc"], self.width)
            if not self.downcast:
                st["done"] = True


def bfs_convergecast_program(root: int, p: int, downcast: bool = True) -> ConvergecastProgram:
    """Program whose node inputs are summands mod ``p``; pass them via ``run(..., inputs=...)``."""
    return ConvergecastProgram(root, p, downcast)


# -- primes and fingerprints ---------------------------------------------------------------


def _prime_upper_bound(count: int) -> int:
    # p_n < n (ln n + ln ln n) for n >= 6
    if count < 6:
        return 15
    return int(count * (math.log(count) + math.log(math.log(count)))) + 1


@lru_cache(maxsize=8)
def _nth_primes(count: int) -> tuple[int, ...]:
    limit = _prime_upper_bound(count)
    root = math.isqrt(limit)
    base = bytearray([1]) * (root + 1)
    base[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(root) + 1):
        if base[i]:
            base[i * i::i] = bytearray(len(base[i * i::i]))
    small = [i for i in range(2, root + 1) if base[i]]
    out: list[int] = []
    seg = 1 << 20
    lo = 2
    while lo <= limit and len(out) < count:
        hi = min(lo + seg, limit + 1)
        mark = bytearray([1]) * (hi - lo)
        for q in small:
            if q * q >= hi:
                break
            start = max(q * q, -(-lo // q) * q)
            mark[start - lo::q] = bytearray(len(mark[start - lo::q]))
        out.extend(lo + i for i, m in enumerate(mark) if m)
        lo = hi
    return tuple(out[:count])


def nth_primes(count: int) -> list[int]:
    """The first ``count`` primes (segmented sieve up to a Rosser-type bound)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    return list(_nth_primes(count))


@dataclass(frozen=True)
class Fingerprint:
    p: int
    r: int

    @classmethod
    def of(cls, value: int, p: int) -> "Fingerprint":
        return cls(p, value % p)


# -- identical subgraphs detection -----------------------------------------------------------


def encoding_width(W: int) -> int:
    """Bits per index pair: one existence bit plus ceil(log2 W) weight bits."""
    return max(1, math.ceil(math.log2(W))) + 1 if W > 1 else 2


def pair_rank(i: int, j: int, k: int) -> int:
    """Position of pair i < j in lexicographic order."""
    return i * k - i * (i + 1) // 2 + (j - i - 1)


def pair_code(present: bool, weight: int) -> int:
    return (1 | (weight << 1)) if present else 0


def encode_side(k: int, W: int, weights: Mapping[tuple[int, int], int]) -> int:
    """Integer whose bit l is the l-th bit of the side's pair encoding."""
    b = encoding_width(W)
    v = 0
    for (i, j), w in weights.items():
        if i > j:
            i, j = j, i
        v |= pair_code(True, w) << (pair_rank(i, j, k) * b)
    return v


def side_weights(inst, side: str) -> dict[tuple[int, int], int]:
    g = inst.graph
    ids = inst.groups[side]
    out = {}
    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            if g.has_edge(ids[i], ids[j]):
                out[i, j] = g.weight(ids[i], ids[j])
    return out


def ident_values(inst) -> tuple[int, int]:
    k, W = inst.params["k"], inst.params["W"]
    return encode_side(k, W, side_weights(inst, "A")), encode_side(k, W, side_weights(inst, "B"))


def ident_K(k: int, W: int) -> int:
    return math.comb(k, 2) * encoding_width(W)


def ident_inputs(inst) -> dict[int, dict]:
    """Each node's local input: its side, enumeration index, and same-side neighbor weights by index."""
    g = inst.graph
    k, W = inst.params["k"], inst.params["W"]
    index = {}
    for side in ("A", "B"):
        for i, u in enumerate(inst.groups[side]):
            index[u] = (side, i)
    out = {}
    for u, (side, i) in index.items():
        nbrs = {}
        for v in g.neighbors(u):
            s2, j = index[v]
            if s2 == side:
                nbrs[j] = g.weight(u, v)
        out[u] = {"side": side, "index": i, "k": k, "W": W, "nbrs": nbrs}
    return out


class IdenticalDetectProgram(TreeProgram):
    """Randomized fingerprint test for identical subgraphs, run from root a_0.

    Phases: BFS tree with an echo so the root knows it is complete; the root
    draws p uniformly from the first K^2 primes and streams it down; every
    node adds its local sums (pairs j > i it owns) mod p and the pair
    (x-sum, y-sum) is convergecast; the root compares and downcasts one bit.
    """

    name = "ident"

    def __init__(self, k: int, W: int, root: int = 0):
        super().__init__(root)
        self.k, self.W = k, W
        self.K = ident_K(k, W)
        self.primes = _nth_primes(self.K * self.K)
        self.pwidth = self.primes[-1].bit_length()

    def setup(self, st):
        st.update(echoed=set(), echo_sent=False, p=None, sums=[0, 0], reported=set(),
                  up_sent=False, asm={}, root_info=None)

    def local_sums(self, inp, p):
        b = encoding_width(self.W)
        acc = 0
        i = inp["index"]
        for j, w in inp["nbrs"].items():
            if j > i:
                acc = (acc + pair_code(True, w) * pow(2, pair_rank(i, j, self.k) * b, p)) % p
        return (acc, 0) if inp["side"] == "A" else (0, acc)

    def on_message(self, st, u, tag, body, t):
        if tag == ECHO:
            st["echoed"].add(u)
        elif tag == DOWN:
            r = st["asm"].setdefault(("p", u), _Reassembler(self.pwidth, st["pbits"]))
            # forward each fragment as it arrives, at its original width
            w = min(r.pbits, r.width - r.off)
            for c in sorted(st["children"]):
                self.send(st, c, DOWN, body, w)
            v = r.feed(body)
            if v is not None:
                self._got_prime(st, v)
        elif tag == UP:
            r = st["asm"].setdefault(("s", u), _Reassembler(2 * self.pwidth, st["pbits"]))
            v = r.feed(body)
            if v is not None:
                sx, sy = v & ((1 << self.pwidth) - 1), v >> self.pwidth
                st["sums"][0] = (st["sums"][0] + sx) % st["p"]
                st["sums"][1] = (st["sums"][1] + sy) % st["p"]
                st["reported"].add(u)
        elif tag == VERDICT:
            self._decide(st, bool(body & 1))

    def _got_prime(self, st, p):
        st["p"] = p
        lx, ly = self.local_sums(st["ctx"].input, p)
        st["sums"] = [(st["sums"][0] + lx) % p, (st["sums"][1] + ly) % p]

    def _decide(self, st, verdict):
        st["out"] = verdict
        for c in sorted(st["children"]):
            self.send(st, c, VERDICT, int(verdict), 1)
        st["done"] = True

    def on_step(self, st, t):
        ctx = st["ctx"]
        is_root = ctx.node == self.root
        if not st["echo_sent"] and st["echoed"] >= st["children"]:
            st["echo_sent"] = True
            if is_root:
                p = self.primes[ctx.rng.randrange(len(self.primes))]
                for c in sorted(st["children"]):
                    self.send_value(st, c, DOWN, p, self.pwidth)
                self._got_prime(st, p)
            else:
                self.send(st, st["parent"], ECHO)
        if st["p"] is None or st["up_sent"] or not st["reported"] >= st["children"]:
            return
        st["up_sent"] = True
        sx, sy = st["sums"]
        if is_root:
            st["root_info"] = {"p": st["p"], "x_mod_p": sx, "y_mod_p": sy}
            self._decide(st, sx == sy)
        else:
            self.send_value(st, st["parent"], UP, sx | (sy << self.pwidth), 2 * self.pwidth)

    def round_bound(self, D: int, bandwidth: int) -> tuple[int, int]:
        """Constants (c_sim, c0) with rounds_used <= c_sim * D + c0 for this bandwidth."""
        pb = bandwidth - TAG_BITS
        fp = nfragments(self.pwidth, pb)
        fs = nfragments(2 * self.pwidth, pb)
        return 4 + fs, fp + 1


@dataclass
class DetectResult:
    verdicts: list[bool]
    trace: SimTrace
    p: int
    x_mod_p: int
    y_mod_p: int
    K: int
    c_sim: int
    c0: int


def identical_subgraphs_detect(inst, cfg: SimConfig) -> DetectResult:
    from .gadgets import IDENTICAL
    from .graph import is_connected

    if inst.kind != IDENTICAL:
        raise ValueError(f"expected an IDENTICAL instance, got {inst.kind}")
    if not is_connected(inst.graph):
        raise ValueError("graph must be connected")
    k, W = inst.params["k"], inst.params["W"]
    root = inst.groups["A"][0]
    prog = IdenticalDetectProgram(k, W, root)
    outs, trace = run(inst.graph, prog, cfg, ident_inputs(inst))
    info = trace.final_states[root]["root_info"]
    c_sim, c0 = prog.round_bound(1, cfg.bandwidth_bits)
    trace.meta.update(c_sim=c_sim, c0=c0, K=prog.K)
    return DetectResult(outs, trace, info["p"], info["x_mod_p"], info["y_mod_p"], prog.K, c_sim, c0)


def bad_primes(diff: int, primes: Sequence[int]) -> list[int]:
    """Primes in ``primes`` that cannot tell two values differing by ``diff`` apart."""
    diff = abs(diff)
    return [p for p in primes if diff % p == 0]


# -- gather-and-decide ---------------------------------------------------------------


class GatherDecideProgram(TreeProgram):
    """Upcast every edge record to the root, which evaluates ``predicate`` and downcasts the bit.

    Each node owns the edges to higher-id neighbors and streams them as
    fixed-width ``(u, v, w)`` records; ``w_max`` is a public bound. The round
    count is O(m + D), so this is a correctness decider, not a fast algorithm.
    """

    name = "gather"

    def __init__(self, predicate, n: int, w_max: int, root: int = 0):
        super().__init__(root)
        self.predicate = predicate
        self.n = n
        self.idw = max(1, (n - 1).bit_length())
        self.ww = max(1, int(w_max).bit_length())
        self.rw = 2 * self.idw + self.ww

    def setup(self, st):
        ctx = st["ctx"]
        own = [(ctx.node, v, ctx.weights[v]) for v in ctx.neighbors if v > ctx.node]
        st.update(records=list(own), ended=set(), asm={}, end_sent=False, own_sent=False)

    def _record(self, u, v, w):
        return u | (v << self.idw) | (w << (2 * self.idw))

    def _unrecord(self, r):
        m = (1 << self.idw) - 1
        return r & m, (r >> self.idw) & m, r >> (2 * self.idw)

    def _push(self, st, rec):
        if st["ctx"].node == self.root:
            st["records"].append(rec)
        else:
            self.send_value(st, st["parent"], DATA, self._record(*rec), self.rw)

    def on_message(self, st, u, tag, body, t):
        if tag == DATA:
            r = st["asm"].setdefault(u, _Reassembler(self.rw, st["pbits"]))
            v = r.feed(body)
            if v is not None:
                self._push(st, self._unrecord(v))
        elif tag == END:
            st["ended"].add(u)
        elif tag == VERDICT:
            self._decide(st, bool(body & 1))

    def _decide(self, st, verdict):
        st["out"] = verdict
        for c in sorted(st["children"]):
            self.send(st, c, VERDICT, int(verdict), 1)
        st["done"] = True

    def on_step(self, st, t):
        is_root = st["ctx"].node == self.root
        if not is_root and not st["own_sent"]:
            st["own_sent"] = True
            own, st["records"] = st["records"], []
            for rec in own:
                self._push(st, rec)
        if st["end_sent"] or not st["ended"] >= st["children"]:
            return
        st["end_sent"] = True
        if is_root:
            g = Graph(self.n, st["records"])
            self._decide(st, bool(self.predicate(g)))
        else:
            self.send(st, st["parent"], END)
