"""Marked graphs, tightened edge paths and circuits.

Conventions used throughout the package:

* An unoriented edge is named by a string like ``"E1"``.  The two
  orientations of an edge are the name itself and the name with a trailing
  apostrophe (``"E1'"`` is ``E1`` read backwards).  Tokens of this shape are
  called oriented edges.
* A path is a tightened sequence of oriented edges in which consecutive
  edges are incident.  Tightened means no ``X`` immediately followed by
  ``X'`` (or vice versa).  A trivial path carries its basepoint so that
  endpoint bookkeeping stays exact.
* Values are immutable; every operation returns fresh objects.
"""

from .errors import MalformedPath, EndpointMismatch


def inverse(edge):
    """Reverse an oriented edge token.

    >>> inverse("E1"), inverse("E1'")
    ("E1'", 'E1')
    """
    return edge[:-1] if edge.endswith("'") else edge + "'"


def base_name(edge):
    """Unoriented name of an oriented edge."""
    return edge[:-1] if edge.endswith("'") else edge


def is_positive(edge):
    return not edge.endswith("'")


class MarkedGraph:
    """A finite connected graph with named unoriented edges.

    ``edges`` is an iterable of ``(name, init, term)`` triples; the order of
    this iterable is remembered and used as the tie-breaking total order on
    edges everywhere in the package, so all downstream computations are
    deterministic.

    Valence-one vertices are rejected unless ``intermediate=True`` (used for
    restrictions of a map to a filtration prefix, where dangling vertices
    are legitimate).
    """

    def __init__(self, vertices, edges, intermediate=False):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise MalformedPath("duplicate vertex names")
        vset = set(self.vertices)
        self.edge_names = []
        self._ends = {}
        for name, init, term in edges:
            if name.endswith("'"):
                raise MalformedPath("edge name %r may not end with an apostrophe" % name)
            if name in self._ends:
                raise MalformedPath("duplicate edge name %r" % name)
            if init not in vset or term not in vset:
                raise MalformedPath("edge %r has an unknown endpoint" % name)
            self.edge_names.append(name)
            self._ends[name] = (init, term)
        self.edge_names = tuple(self.edge_names)
        self._index = {n: i for i, n in enumerate(self.edge_names)}
        self.intermediate = intermediate
        if not intermediate:
            for v in self.vertices:
                if self.valence(v) == 1:
                    raise MalformedPath("vertex %r has valence one" % v)
                if self.valence(v) == 0 and len(self.vertices) > 1:
                    raise MalformedPath("vertex %r is isolated" % v)

    # -- edge bookkeeping ------------------------------------------------

    def has_edge(self, edge):
        return base_name(edge) in self._ends

    def edge_index(self, edge):
        """Position of the underlying unoriented edge in construction order."""
        return self._index[base_name(edge)]

    def init(self, edge):
        """Initial vertex of an oriented edge."""
        init, term = self._ends[base_name(edge)]
        return term if edge.endswith("'") else init

    def term(self, edge):
        """Terminal vertex of an oriented edge."""
        init, term = self._ends[base_name(edge)]
        return init if edge.endswith("'") else term

    def is_loop(self, edge):
        i, t = self._ends[base_name(edge)]
        return i == t

    def directions(self, v=None):
        """Oriented edges, optionally only those based (initial) at ``v``.

        Ordered by (edge construction order, orientation), which fixes the
        deterministic order used for tie-breaking.
        """
        out = []
        for name in self.edge_names:
            for e in (name, name + "'"):
                if v is None or self.init(e) == v:
                    out.append(e)
        return out

    def valence(self, v):
        return len(self.directions(v))

    # -- paths -----------------------------------------------------------

    def trivial_path(self, v):
        if v not in set(self.vertices):
            raise MalformedPath("unknown basepoint %r" % v)
        return Path(self, (), base=v)

    def path(self, edges, base=None):
        """Build a Path from an already tight sequence of oriented edges.

        Raises MalformedPath if the sequence is not incident-consecutive or
        contains an adjacent inverse pair.  Use :meth:`tighten` for raw
        sequences.
        """
        edges = tuple(edges)
        if not edges:
            if base is None:
                raise MalformedPath("a trivial path needs a basepoint")
            return self.trivial_path(base)
        for e in edges:
            if not self.has_edge(e):
                raise MalformedPath("unknown edge %r" % e)
        for a, b in zip(edges, edges[1:]):
            if self.term(a) != self.init(b):
                raise MalformedPath("edges %r and %r are not incident" % (a, b))
            if b == inverse(a):
                raise MalformedPath("path contains backtracking %r %r" % (a, b))
        return Path(self, edges)

    def tighten(self, edges, base=None):
        """Free reduction: cancel adjacent inverse pairs until none remain.

        ``edges`` must still be incident-consecutive (a genuine unreduced
        edge path); ``base`` is required only when everything cancels and
        the sequence is empty to begin with.  Idempotent.
        """
        edges = list(edges)
        for e in edges:
            if not self.has_edge(e):
                raise MalformedPath("unknown edge %r" % e)
        for a, b in zip(edges, edges[1:]):
            if self.term(a) != self.init(b):
                raise MalformedPath("edges %r and %r are not incident" % (a, b))
        if edges and base is None:
            base = self.init(edges[0])
        stack = []
        for e in edges:
            if stack and stack[-1] == inverse(e):
                stack.pop()
            else:
                stack.append(e)
        if not stack:
            return self.trivial_path(base)
        return Path(self, tuple(stack))

    # -- subgraphs and invariants -----------------------------------------

    def incident_vertices(self, edge_subset):
        out = set()
        for name in edge_subset:
            i, t = self._ends[base_name(name)]
            out.add(i)
            out.add(t)
        return out

    def euler_characteristic(self, edge_subset=None):
        """|V| - |E| of the subgraph spanned by ``edge_subset``.

        With no argument, of the whole graph.  The spanned subgraph keeps
        only vertices incident to a chosen edge.
        """
        if edge_subset is None:
            return len(self.vertices) - len(self.edge_names)
        edge_subset = {base_name(e) for e in edge_subset}
        return len(self.incident_vertices(edge_subset)) - len(edge_subset)

    def components(self, edge_subset=None):
        """Connected components of the subgraph spanned by an edge set.

        Returns a list of (frozenset of vertices, frozenset of edge names),
        ordered by least contained edge.  Isolated vertices of the ambient
        graph are not reported when ``edge_subset`` is given.
        """
        if edge_subset is None:
            edge_subset = set(self.edge_names)
        edge_subset = {base_name(e) for e in edge_subset}
        parent = {}

        def find(x):
            while parent.get(x, x) != x:
                parent[x] = parent.get(parent[x], parent[x])
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for name in edge_subset:
            i, t = self._ends[name]
            parent.setdefault(i, i)
            parent.setdefault(t, t)
            union(i, t)
        groups = {}
        for name in sorted(edge_subset, key=self._index.get):
            root = find(self._ends[name][0])
            groups.setdefault(root, ([], set()))[0].append(name)
            groups[root][1].update(self._ends[name])
        comps = [(frozenset(vs), frozenset(es)) for es, vs in groups.values()]
        comps.sort(key=lambda c: min(self._index[e] for e in c[1]))
        return comps

    def is_forest(self, edge_subset):
        """True when the spanned subgraph contains no cycle."""
        for vs, es in self.components(edge_subset):
            if len(es) != len(vs) - 1:
                return False
        return True

    def rank(self, edge_subset=None):
        """Rank of the fundamental group of the spanned subgraph.

        Sum of first Betti numbers over components: for a connected graph
        this is 1 - euler characteristic.
        """
        comps = self.components(edge_subset)
        return sum(len(es) - len(vs) + 1 for vs, es in comps)

    def __repr__(self):
        return "MarkedGraph(%d vertices, %d edges)" % (
            len(self.vertices),
            len(self.edge_names),
        )


class Path:
    """A tightened edge path in a fixed MarkedGraph.

    Do not call the constructor directly in normal code; use
    ``graph.path``, ``graph.tighten`` or ``graph.trivial_path`` which
    validate their input.
    """

    __slots__ = ("graph", "edges", "base")

    def __init__(self, graph, edges, base=None):
        self.graph = graph
        self.edges = tuple(edges)
        self.base = base if not self.edges else None

    @property
    def start(self):
        return self.base if not self.edges else self.graph.init(self.edges[0])

    @property
    def end(self):
        return self.base if not self.edges else self.graph.term(self.edges[-1])

    def is_trivial(self):
        return not self.edges

    def is_closed(self):
        return self.start == self.end

    def reverse(self):
        if not self.edges:
            return self
        return Path(self.graph, tuple(inverse(e) for e in reversed(self.edges)))

    def concat(self, other):
        """Concatenate and tighten.  Endpoints must match."""
        if other.graph is not self.graph:
            raise EndpointMismatch("paths live in different graphs")
        if self.end != other.start:
            raise EndpointMismatch(
                "cannot concatenate: %r ends at %r, %r starts at %r"
                % (self, self.end, other, other.start)
            )
        return self.graph.tighten(self.edges + other.edges, base=self.start)

    def power(self, k):
        """k-th power of a closed path (k may be negative)."""
        if not self.is_closed():
            raise EndpointMismatch("only closed paths have powers")
        core = self if k >= 0 else self.reverse()
        out = self.graph.trivial_path(self.start)
        for _ in range(abs(k)):
            out = out.concat(core)
        return out

    def subpath(self, i, j):
        """Edges i..j-1 as a path (trivial subpaths keep the right basepoint)."""
        if not 0 <= i <= j <= len(self.edges):
            raise MalformedPath("bad subpath bounds")
        if i == j:
            v = self.start if i == 0 else self.graph.term(self.edges[i - 1])
            return self.graph.trivial_path(v)
        return Path(self.graph, self.edges[i:j])

    def starts_with(self, other):
        return self.edges[: len(other.edges)] == other.edges

    def ends_with(self, other):
        n = len(other.edges)
        return n == 0 or self.edges[-n:] == other.edges

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __getitem__(self, i):
        return self.edges[i]

    def __eq__(self, other):
        if not isinstance(other, Path):
            return NotImplemented
        return bool(
            self.graph is other.graph
            and self.edges == other.edges
            and (self.edges or self.base == other.base)
        )

    def __hash__(self):
        return hash((id(self.graph), self.edges, self.base))

    def __repr__(self):
        if not self.edges:
            return "<trivial path at %s>" % self.base
        return "<path %s>" % " ".join(self.edges)


TRIVIAL_CIRCUIT = None  # set below once Circuit exists


class Circuit:
    """A cyclically reduced cyclic word of oriented edges.

    Stored in the canonical rotation: the lexicographically least rotation
    with respect to the construction order of edges (positive orientation
    before negative).  Equality of Circuit objects is equality of oriented
    circuits; use :meth:`same_unoriented` to ignore the direction.
    """

    __slots__ = ("graph", "edges")

    def __init__(self, graph, edges):
        self.graph = graph
        self.edges = tuple(edges)

    @staticmethod
    def _key(graph, edge):
        return (graph.edge_index(edge), not is_positive(edge))

    @classmethod
    def from_path(cls, path):
        """Normalize a closed path: cyclically reduce, then rotate canonically.

        A trivial loop collapses to the designated trivial circuit (a
        single shared value with no edges).
        """
        if not path.is_closed():
            raise EndpointMismatch("circuits come from closed paths")
        edges = list(path.edges)
        # cyclic reduction: first tighten (paths are already tight), then
        # peel matching first/last edges
        while len(edges) >= 2 and edges[-1] == inverse(edges[0]):
            edges = edges[1:-1]
        if not edges:
            return TRIVIAL_CIRCUIT
        g = path.graph
        rots = [tuple(edges[i:] + edges[:i]) for i in range(len(edges))]
        best = min(rots, key=lambda r: [cls._key(g, e) for e in r])
        return cls(g, best)

    def is_trivial(self):
        return not self.edges

    def reverse(self):
        if not self.edges:
            return self
        rev = [inverse(e) for e in reversed(self.edges)]
        return Circuit.from_path(Path(self.graph, rev))

    def same_unoriented(self, other):
        """Orientation-insensitive comparison."""
        return self == other or self == other.reverse()

    def is_primitive(self):
        """True unless the cyclic word is a proper power.

        Checked over divisor periods of the length, exactly.
        """
        n = len(self.edges)
        if n == 0:
            return False
        for p in range(1, n):
            if n % p == 0 and self.edges == self.edges[p:] + self.edges[:p]:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.graph is other.graph and self.edges == other.edges

    def __hash__(self):
        return hash((id(self.graph), self.edges))

    def __repr__(self):
        if not self.edges:
            return "<trivial circuit>"
        return "<circuit %s>" % " ".join(self.edges)


class _TrivialCircuit(Circuit):
    """The designated value returned when a loop tightens away completely."""

    __slots__ = ()

    def __init__(self):
        Circuit.__init__(self, None, ())

    def __eq__(self, other):
        return isinstance(other, _TrivialCircuit)

    def __hash__(self):
        return hash("trivial-circuit")


TRIVIAL_CIRCUIT = _TrivialCircuit()


def circuit_normalize(path):
    """Module-level alias for Circuit.from_path."""
    return Circuit.from_path(path)


def word_root(seq):
    """Smallest period decomposition of a tuple: return (root, k), seq = root^k.

    >>> word_root(("a", "b", "a", "b"))
    (('a', 'b'), 2)
    """
    seq = tuple(seq)
    n = len(seq)
    for p in range(1, n + 1):
        if n % p == 0 and seq == seq[:p] * (n // p):
            return seq[:p], n // p
    return seq, 1
