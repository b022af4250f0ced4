"""Annotated graph instances for the chordal-deletion kernel.

An instance couples a simple undirected graph with a deletion budget ``k`` and
two disjoint edge annotations: *irrelevant* edges (induced long cycles through
them may be ignored when hitting cycles) and *mandatory* edges (at least one
endpoint must be part of any solution within budget).  All reduction rules
rewrite objects of this type in place; pipelines copy their input once.

Vertex ids are non-negative ints, unique for the lifetime of an instance, and
never reused: deleting a vertex never renames another, and fresh ids come from
a monotone counter.  All set-valued accessors return ascending ids so that
repeated runs are bit-for-bit reproducible.
"""

import enum


class EdgeLabel(enum.Enum):
    RELEVANT = "relevant"
    IRRELEVANT = "irrelevant"
    MANDATORY = "mandatory"


class BudgetExhausted(Exception):
    """Raised when a rule must place a vertex in the solution but k is 0."""


def edge_key(u, v):
    return (u, v) if u < v else (v, u)


class AnnotatedInstance:
    def __init__(self, k):
        if k < 0:
            raise ValueError("budget must be non-negative")
        self.k = k
        self._adj = {}
        self._irrelevant = set()
        self._mandatory = set()
        self.forced = []
        self._next_id = 1
        # bumped on every structural change; callers may key caches on it
        self.stamp = 0

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def from_edges(cls, n, edges, k, mandatory=(), irrelevant=()):
        """Instance on vertices 1..n with the given plain edges and annotations."""
        inst = cls(k)
        for v in range(1, n + 1):
            inst._adj[v] = set()
        inst._next_id = n + 1
        for u, v in edges:
            inst.add_edge(u, v)
        for u, v in mandatory:
            if not inst.has_edge(u, v):
                raise ValueError("mandatory annotation on missing edge {%d,%d}" % (u, v))
            inst._mandatory.add(edge_key(u, v))
        for u, v in irrelevant:
            if not inst.has_edge(u, v):
                raise ValueError("irrelevant annotation on missing edge {%d,%d}" % (u, v))
            key = edge_key(u, v)
            if key in inst._mandatory:
                raise ValueError("edge {%d,%d} annotated both ways" % (u, v))
            inst._irrelevant.add(key)
        return inst

    def copy(self):
        dup = AnnotatedInstance(self.k)
        dup._adj = {v: set(nb) for v, nb in self._adj.items()}
        dup._irrelevant = set(self._irrelevant)
        dup._mandatory = set(self._mandatory)
        dup.forced = list(self.forced)
        dup._next_id = self._next_id
        dup.stamp = self.stamp
        return dup

    # ------------------------------------------------------------------
    # queries

    @property
    def adj(self):
        """Internal adjacency mapping; treat as read-only."""
        return self._adj

    def vertices(self):
        return sorted(self._adj)

    def vertex_count(self):
        return len(self._adj)

    def edge_count(self):
        return sum(len(nb) for nb in self._adj.values()) // 2

    def has_vertex(self, v):
        return v in self._adj

    def has_edge(self, u, v):
        return u in self._adj and v in self._adj[u]

    def edges(self):
        return sorted(edge_key(u, v) for u in self._adj for v in self._adj[u] if u < v)

    def mandatory_edges(self):
        return sorted(self._mandatory)

    def irrelevant_edges(self):
        return sorted(self._irrelevant)

    def label(self, u, v):
        if not self.has_edge(u, v):
            raise ValueError("no edge {%d,%d}" % (u, v))
        key = edge_key(u, v)
        if key in self._mandatory:
            return EdgeLabel.MANDATORY
        if key in self._irrelevant:
            return EdgeLabel.IRRELEVANT
        return EdgeLabel.RELEVANT

    def neighbors(self, v):
        return sorted(self._adj[v])

    def relevant_neighbors(self, v):
        """Neighbors joined to v by an edge that is neither irrelevant nor mandatory."""
        out = []
        for w in self._adj[v]:
            key = edge_key(v, w)
            if key not in self._irrelevant and key not in self._mandatory:
                out.append(w)
        return sorted(out)

    def mandatory_degree(self, v):
        return sum(1 for w in self._adj[v] if edge_key(v, w) in self._mandatory)

    # ------------------------------------------------------------------
    # mutation primitives

    def add_vertex(self):
        v = self._next_id
        self._next_id += 1
        self._adj[v] = set()
        self.stamp += 1
        return v

    def add_edge(self, u, v, label=EdgeLabel.RELEVANT):
        if u == v:
            raise ValueError("self-loop at %d" % u)
        if u not in self._adj or v not in self._adj:
            raise ValueError("edge endpoint missing")
        if v in self._adj[u]:
            raise ValueError("edge {%d,%d} already present" % (u, v))
        self._adj[u].add(v)
        self._adj[v].add(u)
        if label is EdgeLabel.MANDATORY:
            self._mandatory.add(edge_key(u, v))
        elif label is EdgeLabel.IRRELEVANT:
            self._irrelevant.add(edge_key(u, v))
        self.stamp += 1

    def add_mandatory_edge(self, u, v):
        """Insert {u,v} if absent and label it mandatory.

        Upgrading a relevant edge is fine, re-marking a mandatory edge is a
        no-op, and marking an irrelevant edge is a contract violation: the
        caller must explicitly lift the irrelevant mark first.
        """
        if u not in self._adj or v not in self._adj:
            raise ValueError("edge endpoint missing")
        key = edge_key(u, v)
        if v not in self._adj[u]:
            self.add_edge(u, v, EdgeLabel.MANDATORY)
            return
        if key in self._mandatory:
            return
        if key in self._irrelevant:
            raise ValueError("edge {%d,%d} is irrelevant; cannot mark mandatory" % key)
        self._mandatory.add(key)
        self.stamp += 1

    def mark_irrelevant(self, u, v):
        """Downgrade a relevant edge; marking twice is a no-op."""
        if not self.has_edge(u, v):
            raise ValueError("no edge {%d,%d}" % (u, v))
        key = edge_key(u, v)
        if key in self._irrelevant:
            return
        if key in self._mandatory:
            raise ValueError("edge {%d,%d} is mandatory; cannot mark irrelevant" % key)
        self._irrelevant.add(key)
        self.stamp += 1

    def unmark_irrelevant(self, u, v):
        """Lift an irrelevant mark, restoring the edge to relevant."""
        key = edge_key(u, v)
        if key not in self._irrelevant:
            raise ValueError("edge {%d,%d} is not irrelevant" % key)
        self._irrelevant.discard(key)
        self.stamp += 1

    def unmark_mandatory(self, u, v):
        """Lift a mandatory mark, restoring the edge to relevant."""
        key = edge_key(u, v)
        if key not in self._mandatory:
            raise ValueError("edge {%d,%d} is not mandatory" % key)
        self._mandatory.discard(key)
        self.stamp += 1

    def clear_irrelevant(self):
        """Drop every irrelevant mark (safe: it only re-imposes cycle hitting)."""
        self._irrelevant.clear()
        self.stamp += 1

    def remove_vertex(self, v):
        """Delete v without touching the budget (used where deletion is free)."""
        if v not in self._adj:
            raise ValueError("no vertex %d" % v)
        for w in self._adj[v]:
            self._adj[w].discard(v)
            key = edge_key(v, w)
            self._irrelevant.discard(key)
            self._mandatory.discard(key)
        del self._adj[v]
        self.stamp += 1

    def remove_vertex_into_solution(self, v):
        """Commit v to the solution: delete it and spend one unit of budget."""
        if v not in self._adj:
            raise ValueError("no vertex %d" % v)
        if self.k == 0:
            raise BudgetExhausted("vertex %d is forced but the budget is spent" % v)
        self.remove_vertex(v)
        self.k -= 1
        self.forced.append(v)

    def saturate_and_remove(self, u):
        """Delete u after completing its neighborhood into a clique.

        Fill edges carry the relevant label; existing edges keep theirs.
        """
        if u not in self._adj:
            raise ValueError("no vertex %d" % u)
        nb = sorted(self._adj[u])
        for i, x in enumerate(nb):
            for y in nb[i + 1:]:
                if y not in self._adj[x]:
                    self.add_edge(x, y)
        self.remove_vertex(u)

    # ------------------------------------------------------------------
    # serialization and comparison

    def fresh_id_floor(self):
        return self._next_id

    def state(self):
        return (
            self.k,
            tuple(self.vertices()),
            tuple(self.edges()),
            tuple(self.mandatory_edges()),
            tuple(self.irrelevant_edges()),
        )

    def __eq__(self, other):
        return isinstance(other, AnnotatedInstance) and self.state() == other.state()

    def __repr__(self):
        return "AnnotatedInstance(n=%d, m=%d, k=%d, mand=%d, irr=%d)" % (
            self.vertex_count(), self.edge_count(), self.k,
            len(self._mandatory), len(self._irrelevant))
