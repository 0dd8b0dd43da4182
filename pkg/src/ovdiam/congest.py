"""Lockstep synchronous message-passing simulator with per-edge bit budgets.

The model: in every round each node may send one message of at most B bits
to each neighbor; all round-r messages are computed from round-(r-1) state
and delivered simultaneously. Nodes know the network size N and their own
id. Messages are explicit '0'/'1' strings so the trace counts actual
payload bits, not worst-case bounds.

`two_party_simulate` runs the same program with the node states split
between two parties along a gadget cut; only the messages that cross the
cut are charged to the bit ledger, and the outputs provably match an
un-partitioned run because both drivers share the per-node step semantics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .gadget import CutPartition, GadgetGraph
from .metrics import adjacency_of


class ProtocolViolation(RuntimeError):
    """A node emitted an invalid or oversized message."""


class ConfigError(ValueError):
    """Simulator or program configuration is unusable."""


def default_bandwidth(n_nodes: int) -> int:
    """Enough bits for one distance value (<= N) plus a two-bit margin."""
    return n_nodes.bit_length() + 2


@dataclass(frozen=True)
class NetworkConfig:
    """Topology plus limits. Port p of node u is its p-th smallest neighbor;
    `reverse_port[u][p]` is the port on that neighbor that points back."""

    adjacency: tuple[tuple[int, ...], ...]
    bandwidth: int
    max_rounds: int
    reverse_port: tuple[tuple[int, ...], ...] = field(repr=False, default=())

    def __post_init__(self):
        if self.bandwidth < 1:
            raise ConfigError(f"bandwidth must be >= 1, got {self.bandwidth}")
        if self.max_rounds < 1:
            raise ConfigError(f"max_rounds must be >= 1, got {self.max_rounds}")
        if not self.reverse_port:
            port_of = [
                {v: p for p, v in enumerate(nbrs)} for nbrs in self.adjacency
            ]
            rev = tuple(
                tuple(port_of[v][u] for v in nbrs)
                for u, nbrs in enumerate(self.adjacency)
            )
            object.__setattr__(self, "reverse_port", rev)

    @property
    def n_nodes(self) -> int:
        return len(self.adjacency)

    @classmethod
    def from_graph(
        cls,
        graph,
        bandwidth: int | None = None,
        max_rounds: int | None = None,
    ) -> "NetworkConfig":
        adj = tuple(tuple(sorted(nbrs)) for nbrs in adjacency_of(graph))
        n = len(adj)
        if bandwidth is None:
            bandwidth = default_bandwidth(n)
        if max_rounds is None:
            max_rounds = n * n + 2 * n + 16
        return cls(adjacency=adj, bandwidth=bandwidth, max_rounds=max_rounds)


class NodeProgram:
    """Factory for per-node behaviors.

    `spawn` returns an object with

        step(round_no, inbox) -> (outbox, output, halt)

    where inbox maps ports to received '0'/'1' strings, outbox maps ports
    to strings to send (at most B bits each), output is an optional local
    result, and halt=True retires the node after its outbox is delivered.
    Behavior must be a deterministic function of the spawn arguments, the
    round number, and received messages.
    """

    def spawn(self, node: int, degree: int, n_nodes: int):
        raise NotImplementedError


@dataclass(frozen=True)
class RoundTrace:
    rounds: int
    per_round_edge_bits: tuple[dict[tuple[int, int], int], ...]
    outputs: dict[int, object]
    bandwidth: int

    @property
    def total_bits(self) -> int:
        return sum(sum(r.values()) for r in self.per_round_edge_bits)

    def per_round_total_bits(self) -> list[int]:
        return [sum(r.values()) for r in self.per_round_edge_bits]


@dataclass(frozen=True)
class BitLedger:
    """Cut-crossing communication of a two-party run."""

    rounds_used: int
    bits_a_to_b: int
    bits_b_to_a: int
    cut_size: int
    per_round_cut_bits: tuple[int, ...]
    outputs: dict[int, object]

    @property
    def total_cut_bits(self) -> int:
        return self.bits_a_to_b + self.bits_b_to_a

    def max_round_cut_bits(self) -> int:
        return max(self.per_round_cut_bits, default=0)


_EMPTY_INBOX: Mapping[int, str] = {}


def _checked_outbox(
    outbox: dict[int, str], node: int, degree: int, round_no: int, bandwidth: int
):
    if not outbox:
        return
    for port, msg in outbox.items():
        if not 0 <= port < degree:
            raise ProtocolViolation(
                f"node {node} round {round_no}: invalid port {port}"
            )
        if not isinstance(msg, str) or any(c not in "01" for c in msg):
            raise ProtocolViolation(
                f"node {node} round {round_no}: message must be a '0'/'1' string"
            )
        if len(msg) > bandwidth:
            raise ProtocolViolation(
                f"node {node} round {round_no}: message of {len(msg)} bits "
                f"exceeds bandwidth {bandwidth}"
            )


def run(config: NetworkConfig, program: NodeProgram) -> RoundTrace:
    """Execute until every node halts or max_rounds is reached."""
    n = config.n_nodes
    adj = config.adjacency
    rev = config.reverse_port
    bw = config.bandwidth
    behaviors = [program.spawn(u, len(adj[u]), n) for u in range(n)]
    halted = [False] * n
    inboxes: dict[int, dict[int, str]] = {}
    outputs: dict[int, object] = {}
    per_round: list[dict[tuple[int, int], int]] = []

    for round_no in range(config.max_rounds):
        next_inboxes: dict[int, dict[int, str]] = {}
        edge_bits: dict[tuple[int, int], int] = {}
        for u in range(n):
            if halted[u]:
                continue
            inbox = inboxes.get(u, _EMPTY_INBOX)
            outbox, output, halt = behaviors[u].step(round_no, inbox)
            if outbox:
                _checked_outbox(outbox, u, len(adj[u]), round_no, bw)
                for port, msg in outbox.items():
                    v = adj[u][port]
                    next_inboxes.setdefault(v, {})[rev[u][port]] = msg
                    edge_bits[(u, v)] = len(msg)
            if output is not None:
                outputs[u] = output
            if halt:
                halted[u] = True
        per_round.append(edge_bits)
        inboxes = next_inboxes
        if all(halted):
            break

    return RoundTrace(
        rounds=len(per_round),
        per_round_edge_bits=tuple(per_round),
        outputs=outputs,
        bandwidth=bw,
    )


def two_party_simulate(
    g: GadgetGraph,
    cut: CutPartition,
    program: NodeProgram,
    bandwidth: int | None = None,
    max_rounds: int | None = None,
) -> BitLedger:
    """Run `program` on `g` with one party simulating each cut side.

    Each party steps only its own nodes against its own inbox buffers;
    messages between the parties exist only on the cut edges and their
    bits are totaled per round and per direction. Lockstep semantics make
    the outputs identical to `run` on the whole graph.
    """
    config = NetworkConfig.from_graph(g, bandwidth=bandwidth, max_rounds=max_rounds)
    n = config.n_nodes
    adj = config.adjacency
    rev = config.reverse_port
    bw = config.bandwidth
    side = cut.side_of
    parties = {"A": [u for u in range(n) if side[u] == "A"],
               "B": [u for u in range(n) if side[u] == "B"]}
    behaviors = {
        u: program.spawn(u, len(adj[u]), n)
        for party in parties.values()
        for u in party
    }
    halted = {u: False for u in behaviors}
    inboxes: dict[str, dict[int, dict[int, str]]] = {"A": {}, "B": {}}
    outputs: dict[int, object] = {}
    bits_ab = 0
    bits_ba = 0
    per_round_cut: list[int] = []

    for round_no in range(config.max_rounds):
        next_inboxes: dict[str, dict[int, dict[int, str]]] = {"A": {}, "B": {}}
        exchanges: list[tuple[str, int, int, str]] = []  # (to_party, v, port, msg)
        cut_bits = 0
        for party in ("A", "B"):
            buffers = inboxes[party]
            for u in parties[party]:
                if halted[u]:
                    continue
                outbox, output, halt = behaviors[u].step(
                    round_no, buffers.get(u, _EMPTY_INBOX)
                )
                if outbox:
                    _checked_outbox(outbox, u, len(adj[u]), round_no, bw)
                    for port, msg in outbox.items():
                        v = adj[u][port]
                        v_party = side[v]
                        if v_party == party:
                            next_inboxes[party].setdefault(v, {})[
                                rev[u][port]
                            ] = msg
                        else:
                            exchanges.append((v_party, v, rev[u][port], msg))
                            cut_bits += len(msg)
                            if party == "A":
                                bits_ab += len(msg)
                            else:
                                bits_ba += len(msg)
                if output is not None:
                    outputs[u] = output
                if halt:
                    halted[u] = True
        for to_party, v, port, msg in exchanges:
            next_inboxes[to_party].setdefault(v, {})[port] = msg
        per_round_cut.append(cut_bits)
        inboxes = next_inboxes
        if all(halted.values()):
            break

    return BitLedger(
        rounds_used=len(per_round_cut),
        bits_a_to_b=bits_ab,
        bits_b_to_a=bits_ba,
        cut_size=cut.size,
        per_round_cut_bits=tuple(per_round_cut),
        outputs=outputs,
    )


# -- a concrete distributed diameter program ----------------------------------

class DiameterProgram(NodeProgram):
    """Deliberately naive exact-diameter algorithm: N breadth-first phases
    of N rounds each (phase t floods distances from node t), then a
    convergecast of the running maximum over the phase-0 tree and a
    broadcast of the result. Every node outputs the diameter within
    N*N + 2*N rounds. Requires a connected graph."""

    def __init__(self, n_nodes: int, bandwidth: int):
        width = n_nodes.bit_length()
        if bandwidth < width:
            raise ConfigError(
                f"bandwidth {bandwidth} too small: distance values need "
                f"{width} bits"
            )
        self.n_nodes = n_nodes
        self.width = width

    def spawn(self, node: int, degree: int, n_nodes: int):
        if n_nodes != self.n_nodes:
            raise ConfigError(
                f"program built for {self.n_nodes} nodes, network has {n_nodes}"
            )
        return _DiameterNode(node, degree, self.n_nodes, self.width)


class _DiameterNode:
    __slots__ = (
        "node", "degree", "n", "width", "ecc", "phase", "dist",
        "parent_port", "children", "reports", "sent_up", "result",
    )

    def __init__(self, node: int, degree: int, n: int, width: int):
        self.node = node
        self.degree = degree
        self.n = n
        self.width = width
        self.ecc = 0
        self.phase = -1
        self.dist: Optional[int] = None
        self.parent_port: Optional[int] = None
        self.children: Optional[frozenset[int]] = None
        self.reports: dict[int, int] = {}
        self.sent_up = False
        self.result: Optional[int] = None

    def _enc(self, value: int) -> str:
        return format(value, f"0{self.width}b")

    def _fold_phase(self) -> None:
        if self.phase >= 0 and self.dist is not None:
            self.ecc = max(self.ecc, self.dist)
        self.dist = None

    def step(self, round_no: int, inbox: Mapping[int, str]):
        n = self.n
        bfs_rounds = n * n
        if round_no < bfs_rounds:
            phase, idx = divmod(round_no, n)
            if phase != self.phase:
                self._fold_phase()
                self.phase = phase
                if self.node == phase:
                    self.dist = 0
            improved = idx == 0 and self.node == phase
            if inbox:
                for port in sorted(inbox):
                    cand = int(inbox[port], 2) + 1
                    if self.dist is None or cand < self.dist:
                        if self.dist is None and phase == 0:
                            self.parent_port = port
                        self.dist = cand
                        improved = True
            if improved and idx != n - 1:
                # last-round sends are useless (no node can sit farther than
                # N-1) and would leak into the next phase's inboxes
                msg = self._enc(self.dist)
                return {port: msg for port in range(self.degree)}, None, False
            return None, None, False

        if round_no == bfs_rounds:
            self._fold_phase()
            if self.parent_port is not None:
                return {self.parent_port: "1"}, None, False
            return None, None, False

        if self.children is None:
            # first round after the notify round: senders are our children
            self.children = frozenset(inbox)
        else:
            for port, msg in inbox.items():
                if port == self.parent_port:
                    self.result = int(msg, 2)
                else:
                    self.reports[port] = int(msg, 2)

        if self.result is not None:
            msg = self._enc(self.result)
            return (
                {port: msg for port in self.children},
                self.result,
                True,
            )

        if not self.sent_up and len(self.reports) == len(self.children):
            agg = max([self.ecc, *self.reports.values()])
            if self.parent_port is None:  # root: aggregate is the diameter
                self.result = agg
                msg = self._enc(agg)
                return ({port: msg for port in self.children}, agg, True)
            self.sent_up = True
            return {self.parent_port: self._enc(agg)}, None, False
        return None, None, False


def exact_diameter_program(n_nodes: int, bandwidth: int) -> DiameterProgram:
    """Program whose every node outputs the exact diameter of a connected
    network of `n_nodes` nodes. `bandwidth` must fit one distance value."""
    return DiameterProgram(n_nodes, bandwidth)


def lower_bound_budget(n_bits: int, cut_size: int, bandwidth: int) -> int:
    """Minimum rounds forced by a communication requirement of `n_bits`
    across a cut of `cut_size` edges carrying `bandwidth` bits per
    direction per round: ceil(n_bits / (2 * cut_size * bandwidth))."""
    if n_bits < 1 or cut_size < 1 or bandwidth < 1:
        raise ValueError("n_bits, cut_size, and bandwidth must all be >= 1")
    capacity = 2 * cut_size * bandwidth
    return -(-n_bits // capacity)


# -- structured exports -------------------------------------------------------

def trace_doc(trace: RoundTrace) -> dict:
    return {
        "rounds": trace.rounds,
        "total_bits": trace.total_bits,
        "per_round_bits": trace.per_round_total_bits(),
        "outputs": {str(node): value for node, value in sorted(trace.outputs.items())},
    }


def ledger_doc(ledger: BitLedger) -> dict:
    return {
        "rounds": ledger.rounds_used,
        "cut_size": ledger.cut_size,
        "bits_a_to_b": ledger.bits_a_to_b,
        "bits_b_to_a": ledger.bits_b_to_a,
        "total_bits": ledger.total_cut_bits,
        "per_round_cut_bits": list(ledger.per_round_cut_bits),
        "outputs": {str(node): value for node, value in sorted(ledger.outputs.items())},
    }
