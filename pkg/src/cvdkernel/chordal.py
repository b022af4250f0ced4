"""Chordal graph toolkit: recognition, hole extraction, clique forests.

All functions take a plain adjacency mapping ``{vertex: set(neighbors)}`` and
ignore any annotations; callers slice annotated instances down to the edge set
they care about.  Every routine is deterministic: ties are broken by vertex id
and all returned collections are in ascending order.
"""

from collections import deque


class NotChordalError(Exception):
    def __init__(self, hole):
        super().__init__("graph has a chordless cycle of length %d" % len(hole))
        self.hole = hole


def induced(adj, keep):
    keep = set(keep)
    return {v: adj[v] & keep for v in keep}


def components(adj):
    """Connected components as sorted lists, ordered by smallest member."""
    seen = set()
    out = []
    for s in sorted(adj):
        if s in seen:
            continue
        comp = {s}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        out.append(sorted(comp))
    return out


def mcs_order(adj):
    """Maximum cardinality search visit order; ties go to the smallest id."""
    weight = {v: 0 for v in adj}
    order = []
    visited = set()
    for _ in range(len(adj)):
        best = None
        for v in sorted(weight):
            if v in visited:
                continue
            if best is None or weight[v] > weight[best]:
                best = v
        order.append(best)
        visited.add(best)
        for w in adj[best]:
            if w not in visited:
                weight[w] += 1
    return order


def _peo_violation(adj, order):
    """First vertex whose earlier-visited neighborhood is not a clique.

    Returns (v, [nonadjacent pairs among earlier neighbors]) or None.  The
    reverse of an MCS order is a perfect elimination ordering exactly when no
    vertex violates; that is the chordality test.
    """
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        earlier = [w for w in adj[v] if pos[w] < pos[v]]
        if len(earlier) <= 1:
            continue
        parent = max(earlier, key=lambda w: pos[w])
        missing = [w for w in earlier if w != parent and w not in adj[parent]]
        if missing:
            pairs = [(min(w, parent), max(w, parent)) for w in sorted(missing)]
            # a full pair scan gives the hole search more starting points
            for i, a in enumerate(sorted(earlier)):
                for b in sorted(earlier)[i + 1:]:
                    if b not in adj[a] and (a, b) not in pairs:
                        pairs.append((a, b))
            return v, pairs
    return None


def is_chordal(adj):
    return _peo_violation(adj, mcs_order(adj)) is None


def peo(adj):
    """A perfect elimination ordering (first vertex is eliminated first)."""
    order = mcs_order(adj)
    if _peo_violation(adj, order) is not None:
        raise NotChordalError(find_hole(adj))
    return list(reversed(order))


def _bfs_path(adj, allowed, src, dst):
    """Shortest src-dst path inside ``allowed`` (which contains both), or None."""
    parent = {src: None}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        if v == dst:
            path = []
            while v is not None:
                path.append(v)
                v = parent[v]
            return list(reversed(path))
        for w in sorted(adj[v]):
            if w in allowed and w not in parent:
                parent[w] = v
                queue.append(w)
    return None


def _canonical_cycle(cycle):
    """Rotate/flip so the cycle starts at its smallest vertex and then moves
    toward the smaller of that vertex's two cycle neighbors."""
    n = len(cycle)
    i = cycle.index(min(cycle))
    rot = cycle[i:] + cycle[:i]
    if rot[1] > rot[-1]:
        rot = [rot[0]] + rot[:0:-1]
    return rot


def _hole_through(adj, v, a, b):
    """Chordless cycle through v built from a shortest a-b path that avoids the
    rest of v's closed neighborhood; None when a and b are not so connected."""
    allowed = (set(adj) - adj[v] - {v}) | {a, b}
    path = _bfs_path(adj, allowed, a, b)
    if path is None:
        return None
    return _canonical_cycle([v] + path)


def _hole_by_peeling(adj):
    """Guaranteed hole extraction: peel vertices while the rest stays
    non-chordal; what remains is exactly one chordless cycle."""
    cur = {v: set(nb) for v, nb in adj.items()}
    changed = True
    while changed:
        changed = False
        for v in sorted(cur):
            rest = induced(cur, set(cur) - {v})
            if not is_chordal(rest):
                cur = rest
                changed = True
    order = [min(cur)]
    prev = None
    while len(order) < len(cur):
        nxt = min(w for w in cur[order[-1]] if w != prev)
        prev = order[-1]
        order.append(nxt)
    return _canonical_cycle(order)


def find_hole(adj):
    """Some chordless cycle of length >= 4, canonically rotated, or None.

    The fast path turns the failed elimination check into a cycle directly;
    peeling backs it up so a hole is always produced on non-chordal input.
    """
    violation = _peo_violation(adj, mcs_order(adj))
    if violation is None:
        return None
    v, pairs = violation
    for a, b in pairs:
        hole = _hole_through(adj, v, a, b)
        if hole is not None:
            return hole
    return _hole_by_peeling(adj)


def is_valid_hole(adj, cycle):
    n = len(cycle)
    if n < 4 or len(set(cycle)) != n:
        return False
    for i, u in enumerate(cycle):
        for j in range(i + 1, n):
            w = cycle[j]
            adjacent = w in adj[u]
            consecutive = j - i == 1 or (i == 0 and j == n - 1)
            if adjacent != consecutive:
                return False
    return True


def mis_chordal(adj):
    """Maximum independent set of a chordal graph.

    Greedy along a perfect elimination ordering built on the fly: repeatedly
    take the smallest simplicial vertex and drop its closed neighborhood.
    """
    if not is_chordal(adj):
        raise NotChordalError(find_hole(adj))
    cur = {v: set(nb) for v, nb in adj.items()}
    chosen = []
    while cur:
        v = _smallest_simplicial(cur)
        chosen.append(v)
        cur = induced(cur, set(cur) - cur[v] - {v})
    return sorted(chosen)


def clique_cover_chordal(adj):
    """Partition of a chordal graph into cliques, one per greedy MIS pick.

    Perfection makes the count equal the independence number.
    """
    if not is_chordal(adj):
        raise NotChordalError(find_hole(adj))
    cur = {v: set(nb) for v, nb in adj.items()}
    classes = []
    while cur:
        v = _smallest_simplicial(cur)
        cls = sorted(cur[v] | {v})
        classes.append(cls)
        cur = induced(cur, set(cur) - set(cls))
    return classes


def _smallest_simplicial(adj):
    for v in sorted(adj):
        nb = sorted(adj[v])
        if all(nb[j] in adj[nb[i]] for i in range(len(nb)) for j in range(i + 1, len(nb))):
            return v
    raise NotChordalError(find_hole(adj))


def max_clique_size(adj):
    """Size of a maximum clique of a chordal graph (via elimination prefixes)."""
    order = mcs_order(adj)
    if _peo_violation(adj, order) is not None:
        raise NotChordalError(find_hole(adj))
    pos = {v: i for i, v in enumerate(order)}
    best = 0
    for v in order:
        best = max(best, 1 + sum(1 for w in adj[v] if pos[w] < pos[v]))
    return best


class CliqueForest:
    """Clique forest of a chordal graph: one node per maximal clique, with the
    running-intersection property along the (max-weight spanning) tree edges."""

    def __init__(self, bags, tree_edges):
        self.bags = bags  # list of frozensets, lexicographically sorted
        self.tree = {i: [] for i in range(len(bags))}
        for i, j in tree_edges:
            self.tree[i].append(j)
            self.tree[j].append(i)
        for i in self.tree:
            self.tree[i].sort()
        self.bag_index_of = {}
        for i, bag in enumerate(bags):
            for v in bag:
                self.bag_index_of.setdefault(v, []).append(i)

    def degree(self, i):
        return len(self.tree[i])

    def bags_containing(self, v):
        return self.bag_index_of.get(v, [])

    def path_between(self, i, j):
        """Bag-index path from i to j, or None across components."""
        parent = {i: None}
        queue = deque([i])
        while queue:
            x = queue.popleft()
            if x == j:
                path = []
                while x is not None:
                    path.append(x)
                    x = parent[x]
                return list(reversed(path))
            for y in self.tree[x]:
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        return None

    def distances_from(self, i):
        dist = {i: 0}
        queue = deque([i])
        while queue:
            x = queue.popleft()
            for y in self.tree[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    def rooted_at(self, root):
        """(parent, children, depth-first preorder) for root's component."""
        parent = {root: None}
        order = []
        stack = [root]
        while stack:
            x = stack.pop()
            order.append(x)
            for y in reversed(self.tree[x]):
                if y not in parent:
                    parent[y] = x
                    stack.append(y)
        children = {x: [] for x in parent}
        for x, p in parent.items():
            if p is not None:
                children[p].append(x)
        for x in children:
            children[x].sort()
        return parent, children, order

    def validate(self, adj):
        """Check bags are maximal cliques covering all edges, with coherent
        subtrees per vertex.  Raises AssertionError on any defect."""
        seen_edges = set()
        for bag in self.bags:
            bs = sorted(bag)
            for i, u in enumerate(bs):
                for w in bs[i + 1:]:
                    assert w in adj[u], "bag is not a clique"
                    seen_edges.add((u, w))
        all_edges = {(u, w) for u in adj for w in adj[u] if u < w}
        assert seen_edges == all_edges, "bags do not cover the edge set"
        for v in adj:
            idxs = self.bags_containing(v)
            assert idxs, "vertex %d in no bag" % v
            # subtree coherence: bags holding v form a connected subtree
            inside = set(idxs)
            start = idxs[0]
            reach = {start}
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for y in self.tree[x]:
                    if y in inside and y not in reach:
                        reach.add(y)
                        queue.append(y)
            assert reach == inside, "bags of %d not connected in the forest" % v
        for i, a in enumerate(self.bags):
            for b in self.bags[i + 1:]:
                assert not a < b and not b < a, "non-maximal bag"


def clique_forest(adj):
    """Build the clique forest of a chordal graph; raises NotChordalError
    (carrying a witness hole) otherwise."""
    order = mcs_order(adj)
    if _peo_violation(adj, order) is not None:
        raise NotChordalError(find_hole(adj))
    pos = {v: i for i, v in enumerate(order)}
    candidates = []
    for v in order:
        clique = frozenset([v] + [w for w in adj[v] if pos[w] < pos[v]])
        candidates.append(clique)
    candidates = sorted(set(candidates), key=lambda c: (-len(c), sorted(c)))
    bags = []
    for cand in candidates:
        if not any(cand <= kept for kept in bags):
            bags.append(cand)
    bags.sort(key=lambda b: sorted(b))
    weighted = []
    for i in range(len(bags)):
        for j in range(i + 1, len(bags)):
            shared = len(bags[i] & bags[j])
            if shared:
                weighted.append((-shared, i, j))
    weighted.sort()
    parent = list(range(len(bags)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree_edges = []
    for negw, i, j in weighted:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            tree_edges.append((i, j))
    return CliqueForest(bags, tree_edges)
