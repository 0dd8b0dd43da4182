"""Builder for the path gadget whose diameter separates OV answers.

Given an OV instance (n vectors of dimension d per side) and parameters
(ell, p, q) with ell >= 1, p in {0, 1}, q >= 0, the graph consists of
exterior vertices

    u_1..u_n, v_1..v_n  on each of the two sides (L and R),
    w_1..w_d            on each side,
    x, y                on each side,

joined by paths, each path contributing its own fresh interior vertices:

    u_i -- v_i      length ell - p        (both sides, every i)
    v_i -- x        length ell            (both sides, every i)
    v_i -- w_k      length ell            (side L iff left[i][k] = 1,
                                           side R iff right[i][k] = 1)
    y   -- w_k      length ell            (both sides, every k)
    w_k^L -- w_k^R  length q              (crossing)
    x   -- y        length ell - p        (both sides)
    y^L -- y^R      length p + q          (crossing)

A stated length of 0 identifies the two endpoints instead of adding a
path, which happens exactly when q = 0 (w pairs merge), p + q = 0 (the y
pair merges), and when ell = 1 and p = 1 (u_i merges into v_i and x into
y on each side).

The resulting diameter is 6*ell - 3*p + q if the instance contains an
orthogonal pair and 4*ell - 2*p + q otherwise; the verifiers in
`ovdiam.metrics` machine-check this on every built graph.

Construction is deterministic: exterior vertices are numbered first, in
the order listed above, then interior vertices in path-creation order.
Identifications are resolved by union-find over provisional ids before
final compaction, so a merged vertex carries every role of its class.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ovcore import OVInstance


class ParameterError(ValueError):
    """Invalid gadget parameters."""


class UnsupportedCut(ValueError):
    """Cut requested on a gadget whose sides share identified vertices."""


def map_ell(ell: int) -> tuple[int, int]:
    """Split a target length ell >= 1 into builder parameters (ell', p).

    Even ell maps to (ell / 2, 0) and odd ell to (ceil(ell / 2), 1), so that
    4*ell' - 2*p == 2*ell and 6*ell' - 3*p == 3*ell always hold.
    """
    if ell < 1:
        raise ParameterError(f"ell must be >= 1, got {ell}")
    if ell % 2 == 0:
        return ell // 2, 0
    return (ell + 1) // 2, 1


@dataclass(frozen=True)
class GadgetParams:
    ell: int
    p: int
    q: int

    def __post_init__(self):
        if self.ell < 1:
            raise ParameterError(f"ell must be >= 1, got {self.ell}")
        if self.p not in (0, 1):
            raise ParameterError(f"p must be 0 or 1, got {self.p}")
        if self.q < 0:
            raise ParameterError(f"q must be >= 0, got {self.q}")

    @classmethod
    def from_target(cls, ell: int, q: int) -> "GadgetParams":
        """Params distinguishing diameter 2*ell + q from 3*ell + q."""
        ell_prime, p = map_ell(ell)
        return cls(ell_prime, p, q)

    @property
    def no_pair_diameter(self) -> int:
        return 4 * self.ell - 2 * self.p + self.q

    @property
    def pair_diameter(self) -> int:
        return 6 * self.ell - 3 * self.p + self.q


@dataclass(frozen=True, order=True)
class Label:
    """Role of a vertex: an exterior name or a position inside a path.

    kind is one of uL, uR, vL, vR, wL, wR, xL, xR, yL, yR or "interior".
    Exterior kinds carry their 1-based index (0 when the role is unique);
    interior labels carry the creating path's ordinal and the 1-based
    position along it.
    """

    kind: str
    index: int = 0
    position: int = 0

    def role_string(self) -> str:
        if self.kind == "interior":
            return f"interior {self.index} {self.position}"
        if self.index:
            return f"{self.kind} {self.index}"
        return self.kind


@dataclass(frozen=True)
class PathRecord:
    """One constructed path: identity, stated length, and realized vertices.

    `vertices` runs from the first endpoint to the second, interiors
    included; a length-0 path is a single (identified) vertex.
    """

    ordinal: int
    kind: str  # uv, vx, vw, yw, ww, xy, yy
    side: str  # "L", "R", or "" for crossing paths
    i: int = 0  # 1-based vector index, 0 when not applicable
    k: int = 0  # 1-based dimension index, 0 when not applicable
    length: int = 0
    vertices: tuple[int, ...] = ()

    @property
    def key(self) -> tuple:
        return (self.kind, self.side, self.i, self.k)


@dataclass(frozen=True)
class GadgetGraph:
    """Immutable simple undirected graph with labeled vertices.

    `adjacency[v]` is the sorted tuple of v's neighbors (its index in the
    tuple is v's port number for the message-passing simulator). `edges`
    lists each edge once as (u, v) with u < v, sorted.
    """

    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]
    labels: dict[int, tuple[Label, ...]]
    paths: tuple[PathRecord, ...]
    params: GadgetParams
    n: int
    d: int
    exterior: dict[tuple[str, int], int] = field(repr=False, default_factory=dict)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def vertex_of(self, kind: str, index: int = 0) -> int:
        """Vertex id carrying the exterior role (kind, index)."""
        return self.exterior[(kind, index)]

    def path(self, kind: str, side: str, i: int = 0, k: int = 0) -> PathRecord:
        """The unique path record with the given identity."""
        return self._path_index[(kind, side, i, k)]

    @property
    def _path_index(self) -> dict[tuple, PathRecord]:
        idx = getattr(self, "_path_index_cache", None)
        if idx is None:
            idx = {rec.key: rec for rec in self.paths}
            object.__setattr__(self, "_path_index_cache", idx)
        return idx


def _path_specs(inst: OVInstance, params: GadgetParams) -> list[tuple]:
    """(kind, side, i, k, endpoint_a, endpoint_b, length) in creation order.

    Endpoints are provisional exterior ids; see `build_gadget` for the
    numbering.
    """
    n, d = inst.n, inst.dimension
    ell, p, q = params.ell, params.p, params.q
    uL = lambda i: i - 1
    uR = lambda i: n + i - 1
    vL = lambda i: 2 * n + i - 1
    vR = lambda i: 3 * n + i - 1
    wL = lambda k: 4 * n + k - 1
    wR = lambda k: 4 * n + d + k - 1
    xL, xR = 4 * n + 2 * d, 4 * n + 2 * d + 1
    yL, yR = 4 * n + 2 * d + 2, 4 * n + 2 * d + 3

    specs: list[tuple] = []
    for i in range(1, n + 1):
        specs.append(("uv", "L", i, 0, uL(i), vL(i), ell - p))
        specs.append(("uv", "R", i, 0, uR(i), vR(i), ell - p))
    for i in range(1, n + 1):
        specs.append(("vx", "L", i, 0, vL(i), xL, ell))
        specs.append(("vx", "R", i, 0, vR(i), xR, ell))
    for i in range(1, n + 1):
        for k in range(1, d + 1):
            if inst.left[i - 1][k - 1]:
                specs.append(("vw", "L", i, k, vL(i), wL(k), ell))
    for j in range(1, n + 1):
        for k in range(1, d + 1):
            if inst.right[j - 1][k - 1]:
                specs.append(("vw", "R", j, k, vR(j), wR(k), ell))
    for k in range(1, d + 1):
        specs.append(("yw", "L", 0, k, yL, wL(k), ell))
        specs.append(("yw", "R", 0, k, yR, wR(k), ell))
    for k in range(1, d + 1):
        specs.append(("ww", "", 0, k, wL(k), wR(k), q))
    specs.append(("xy", "L", 0, 0, xL, yL, ell - p))
    specs.append(("xy", "R", 0, 0, xR, yR, ell - p))
    specs.append(("yy", "", 0, 0, yL, yR, p + q))
    return specs


def _exterior_labels(n: int, d: int) -> list[Label]:
    """Labels of the provisional exterior ids 0 .. 4n + 2d + 3 in order."""
    out = [Label("uL", i) for i in range(1, n + 1)]
    out += [Label("uR", i) for i in range(1, n + 1)]
    out += [Label("vL", i) for i in range(1, n + 1)]
    out += [Label("vR", i) for i in range(1, n + 1)]
    out += [Label("wL", k) for k in range(1, d + 1)]
    out += [Label("wR", k) for k in range(1, d + 1)]
    out += [Label("xL"), Label("xR"), Label("yL"), Label("yR")]
    return out


def build_gadget(inst: OVInstance, params: GadgetParams) -> GadgetGraph:
    """Construct the gadget graph for `inst` under `params`.

    Deterministic: identical inputs give identical vertex numbering, edge
    sets, and path records.
    """
    if not isinstance(params, GadgetParams):
        params = GadgetParams(*params)
    n, d = inst.n, inst.dimension
    n_ext = 4 * n + 2 * d + 4
    specs = _path_specs(inst, params)

    # union-find over provisional exterior ids; length-0 paths identify
    parent = list(range(n_ext))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for _, _, _, _, a, b, length in specs:
        if length == 0:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

    final_of = [0] * n_ext
    root_final: dict[int, int] = {}
    for v in range(n_ext):
        r = find(v)
        if r not in root_final:
            root_final[r] = len(root_final)
        final_of[v] = root_final[r]

    labels: dict[int, list[Label]] = {v: [] for v in range(len(root_final))}
    exterior: dict[tuple[str, int], int] = {}
    for prov, lab in enumerate(_exterior_labels(n, d)):
        fid = final_of[prov]
        labels[fid].append(lab)
        exterior[(lab.kind, lab.index)] = fid

    adjacency: list[set[int]] = [set() for _ in range(len(root_final))]
    edges: list[tuple[int, int]] = []

    def add_edge(a: int, b: int, allow_existing: bool = False) -> None:
        if a == b:
            raise ParameterError(f"construction produced a self-loop at {a}")
        if b in adjacency[a]:
            if allow_existing:
                return
            raise ParameterError(f"construction produced a duplicate edge {a}-{b}")
        adjacency[a].add(b)
        adjacency[b].add(a)
        edges.append((a, b) if a < b else (b, a))

    # with ell = 1, p = 0, q = 0 the w pairs and the y pair all merge, so
    # the left and right y--w_k paths land on the same single edge
    yw_coincide = params.ell == 1 and params.p == 0 and params.q == 0

    records: list[PathRecord] = []
    for ordinal, (kind, side, i, k, a, b, length) in enumerate(specs):
        fa, fb = final_of[a], final_of[b]
        if length == 0:
            records.append(PathRecord(ordinal, kind, side, i, k, 0, (fa,)))
            continue
        chain = [fa]
        for pos in range(1, length):
            vid = len(adjacency)
            adjacency.append(set())
            labels[vid] = [Label("interior", ordinal, pos)]
            chain.append(vid)
        chain.append(fb)
        shared = yw_coincide and kind == "yw" and side == "R"
        for s, t in zip(chain, chain[1:]):
            add_edge(s, t, allow_existing=shared)
        records.append(PathRecord(ordinal, kind, side, i, k, length, tuple(chain)))

    return GadgetGraph(
        vertex_count=len(adjacency),
        adjacency=tuple(tuple(sorted(nb)) for nb in adjacency),
        edges=tuple(sorted(edges)),
        labels={v: tuple(sorted(labs)) for v, labs in labels.items()},
        paths=tuple(records),
        params=params,
        n=n,
        d=d,
        exterior=exterior,
    )


def exact_size(
    n: int, d: int, ones_left: int, ones_right: int, params: GadgetParams
) -> tuple[int, int]:
    """Closed-form (vertex count, edge count) of the built gadget.

    Edges are the sum of all path lengths; vertices are the exteriors that
    survive identification plus one interior per unit of length beyond the
    first on every path.
    """
    ell, p, q = params.ell, params.p, params.q
    interior = lambda m: max(m - 1, 0)
    ones = ones_left + ones_right

    edge_count = (
        2 * n * (ell - p)
        + 2 * n * ell
        + ones * ell
        + 2 * d * ell
        + d * q
        + 2 * (ell - p)
        + (p + q)
    )
    if ell == 1 and p == 0 and q == 0:
        # the left/right y--w_k paths coincide on one edge per dimension
        edge_count -= d

    merged = 0
    if q == 0:
        merged += d
    if p + q == 0:
        merged += 1
    if ell == 1 and p == 1:
        merged += 2 * n + 2
    vertex_count = (
        4 * n + 2 * d + 4
        - merged
        + 2 * n * interior(ell - p)
        + 2 * n * interior(ell)
        + ones * interior(ell)
        + 2 * d * interior(ell)
        + d * interior(q)
        + 2 * interior(ell - p)
        + interior(p + q)
    )
    return vertex_count, edge_count


# -- cut partition ---------------------------------------------------------

@dataclass(frozen=True)
class CutPartition:
    """Two-party split of a gadget.

    Side A holds everything determined by the left vectors, side B the
    mirror; the only edges between them are one midpoint edge on each
    crossing path: d from the w pairs plus one from the y pair.
    """

    side_of: tuple[str, ...]  # "A" or "B" per vertex id
    cut_edges: tuple[tuple[int, int], ...]  # (A-endpoint, B-endpoint)

    @property
    def size(self) -> int:
        return len(self.cut_edges)


def cut_partition(g: GadgetGraph) -> CutPartition:
    """Split `g` into the left-determined and right-determined halves.

    Requires q >= 1; with q = 0 the two sides share identified w vertices
    and no edge cut of size d + 1 separates them.
    """
    if g.params.q < 1:
        raise UnsupportedCut("q >= 1 required: with q = 0 the sides share vertices")
    side = [""] * g.vertex_count
    cut: list[tuple[int, int]] = []
    for rec in g.paths:
        if rec.side == "L":
            for v in rec.vertices:
                side[v] = "A"
        elif rec.side == "R":
            for v in rec.vertices:
                side[v] = "B"
        else:  # crossing path: left half to A, right half to B
            m = rec.length
            split = m // 2
            for pos, v in enumerate(rec.vertices):
                side[v] = "A" if pos <= split else "B"
            cut.append((rec.vertices[split], rec.vertices[split + 1]))
    return CutPartition(tuple(side), tuple(cut))


# -- structural edits for negative controls ---------------------------------

def remove_edge(g: GadgetGraph, u: int, v: int) -> GadgetGraph:
    """Copy of `g` without edge (u, v). Path records are kept as built, so
    the result is only meant for distance checks, not for re-cutting."""
    a, b = (u, v) if u < v else (v, u)
    if (a, b) not in g.edges:
        raise ValueError(f"no edge {a}-{b} in graph")
    adjacency = list(g.adjacency)
    adjacency[a] = tuple(x for x in adjacency[a] if x != b)
    adjacency[b] = tuple(x for x in adjacency[b] if x != a)
    return GadgetGraph(
        vertex_count=g.vertex_count,
        adjacency=tuple(adjacency),
        edges=tuple(e for e in g.edges if e != (a, b)),
        labels=g.labels,
        paths=g.paths,
        params=g.params,
        n=g.n,
        d=g.d,
        exterior=g.exterior,
    )


def negative_control_edge(g: GadgetGraph) -> tuple[int, int]:
    """Deterministic edge whose removal must break verification.

    The first edge of u_1's chain when that path has length >= 1 (removal
    strands u_1); otherwise u_1 is merged into v_1 and the first edge of
    v_1's path toward x is used, which either strands the chain or skews
    the u-to-y distance.
    """
    rec = g.path("uv", "L", 1)
    if rec.length == 0:
        rec = g.path("vx", "L", 1)
    return rec.vertices[0], rec.vertices[1]


# -- text formats ------------------------------------------------------------
#
# Edge list: header "p edge V E", then one "e u v" line per edge with
# 1-based ids, sorted. Companion label file: "<id> <role>" lines, 1-based
# ids, one line per role. Both are byte-deterministic for equal inputs.

def to_edgelist_text(g: GadgetGraph) -> str:
    lines = [f"p edge {g.vertex_count} {g.edge_count}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def to_labels_text(g: GadgetGraph) -> str:
    lines = []
    for v in range(g.vertex_count):
        for lab in g.labels[v]:
            lines.append(f"{v + 1} {lab.role_string()}")
    return "\n".join(lines) + "\n"


def parse_edgelist_text(text: str) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Read an edge-list export back as (vertex_count, edges), 0-based."""
    from .ovcore import ParseError

    def as_int(token: str, lineno: int) -> int:
        try:
            return int(token)
        except ValueError:
            raise ParseError(f"expected an integer, got {token!r}", lineno) from None

    header = None
    edges = []
    declared = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if header is not None:
                raise ParseError("duplicate header line", lineno)
            if len(parts) != 4 or parts[1] != "edge":
                raise ParseError(f"expected 'p edge V E', got {line!r}", lineno)
            header = as_int(parts[2], lineno)
            declared = as_int(parts[3], lineno)
        elif parts[0] == "e":
            if header is None:
                raise ParseError("edge before header", lineno)
            if len(parts) != 3:
                raise ParseError(f"expected 'e u v', got {line!r}", lineno)
            u, v = as_int(parts[1], lineno) - 1, as_int(parts[2], lineno) - 1
            if not (0 <= u < header and 0 <= v < header) or u == v:
                raise ParseError(f"edge endpoints out of range: {line!r}", lineno)
            edges.append((u, v) if u < v else (v, u))
        else:
            raise ParseError(f"unrecognized line {line!r}", lineno)
    if header is None:
        raise ParseError("missing 'p edge V E' header", 1)
    if len(edges) != declared:
        raise ParseError(f"header declared {declared} edges, found {len(edges)}", 1)
    return header, tuple(sorted(edges))


def parse_labels_text(text: str) -> dict[int, tuple[str, ...]]:
    """Read a label export back as {0-based id: sorted role strings}."""
    from .ovcore import ParseError

    out: dict[int, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        vid, _, role = line.partition(" ")
        try:
            v = int(vid) - 1
        except ValueError:
            raise ParseError(f"expected '<id> <role>', got {line!r}", lineno) from None
        if v < 0 or not role:
            raise ParseError(f"expected '<id> <role>', got {line!r}", lineno)
        out.setdefault(v, []).append(role)
    return {v: tuple(sorted(roles)) for v, roles in out.items()}


def to_json_doc(g: GadgetGraph) -> dict:
    """Structured one-object description of the graph (1-based ids, like
    the text exports)."""
    return {
        "vertex_count": g.vertex_count,
        "edge_count": g.edge_count,
        "params": {"ell": g.params.ell, "p": g.params.p, "q": g.params.q},
        "source": {"n": g.n, "d": g.d},
        "edges": [[u + 1, v + 1] for u, v in g.edges],
        "labels": {
            str(v + 1): [lab.role_string() for lab in g.labels[v]]
            for v in range(g.vertex_count)
        },
    }
