"""Bipartite matching and q-expansions.

Given a bipartite graph with sides A and B where |B| >= c|A| and no B-vertex
is isolated, there are non-empty X <= A and Y <= B such that X has c disjoint
private B-partners per vertex inside Y (a c-expansion) and Y has no neighbors
outside X.  The construction clones every A-vertex c times, computes a maximum
matching, and discards the A-vertices reachable from unsaturated clones by
alternating paths; the matching restricted to the rest is the expansion.
"""

from dataclasses import dataclass


def max_bipartite_matching(adj_a):
    """Maximum matching for a bipartite adjacency {a: iterable of b}.

    Returns {a: b} for the matched A-vertices.  Augmenting paths explore the
    smallest ids first, so the result is deterministic.
    """
    order = sorted(adj_a)
    nbrs = {a: sorted(adj_a[a]) for a in order}
    match_b = {}

    def try_assign(a, banned):
        for b in nbrs[a]:
            if b in banned:
                continue
            banned.add(b)
            if b not in match_b or try_assign(match_b[b], banned):
                match_b[b] = a
                return True
        return False

    for a in order:
        try_assign(a, set())
    out = {}
    for b, a in match_b.items():
        out[a] = b
    return out


@dataclass
class Expansion:
    x: list          # chosen A-vertices, ascending
    y: list          # chosen B-vertices, ascending
    stars: dict      # a -> its c private partners in y, ascending


def q_expansion(a_side, b_side, adj_a, c):
    """A c-expansion (X, Y) with no Y-neighbors outside X.

    adj_a maps each A-vertex to its B-neighbors.  Preconditions: both sides
    non-empty, c >= 1, |B| >= c|A|, and every B-vertex has a neighbor.
    """
    a_side = sorted(a_side)
    b_side = sorted(b_side)
    if not a_side:
        raise ValueError("expansion requires a non-empty A side")
    if not b_side:
        raise ValueError("expansion requires a non-empty B side")
    if c < 1:
        raise ValueError("expansion factor must be at least 1")
    if len(b_side) < c * len(a_side):
        raise ValueError("need |B| >= c|A| (got %d < %d*%d)" % (len(b_side), c, len(a_side)))
    adj_a = {a: sorted(set(adj_a.get(a, ()))) for a in a_side}
    covered = set()
    for a in a_side:
        covered.update(adj_a[a])
    missing = [b for b in b_side if b not in covered]
    if missing:
        raise ValueError("isolated B-vertices: %s" % missing)

    clones = {(a, i): adj_a[a] for a in a_side for i in range(c)}
    matching = max_bipartite_matching(clones)

    unsaturated = [cl for cl in sorted(clones) if cl not in matching]
    if unsaturated:
        match_of_b = {b: cl for cl, b in matching.items()}
        reached_clones = set(unsaturated)
        reached_b = set()
        frontier = list(unsaturated)
        while frontier:
            nxt = []
            for cl in frontier:
                for b in clones[cl]:
                    if b in reached_b:
                        continue
                    reached_b.add(b)
                    back = match_of_b.get(b)
                    if back is not None and back not in reached_clones:
                        reached_clones.add(back)
                        nxt.append(back)
            frontier = nxt
        bad_a = {cl[0] for cl in reached_clones}
        x = [a for a in a_side if a not in bad_a]
    else:
        x = list(a_side)

    assert x, "counting guarantees a non-empty X"
    stars = {a: sorted(matching[(a, i)] for i in range(c)) for a in x}
    y = sorted(b for partners in stars.values() for b in partners)
    assert len(y) == c * len(x) and len(set(y)) == len(y)
    for a in a_side:
        if a not in stars:
            assert not set(adj_a[a]) & set(y), "Y must have no neighbors outside X"
    return Expansion(x=x, y=y, stars=stars)
