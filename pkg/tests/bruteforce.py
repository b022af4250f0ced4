"""Independent brute-force oracles used to pin expected values in the tests.

Everything here works on a plain adjacency mapping ``{vertex: set(neighbors)}``
and deliberately shares no code with the package under test.  The routines are
exponential; keep inputs small (the callers guard sizes).
"""

from itertools import combinations


def _bit_layout(adj):
    verts = sorted(adj)
    pos = {v: i for i, v in enumerate(verts)}
    nbmask = [0] * len(verts)
    for v in verts:
        for w in adj[v]:
            nbmask[pos[v]] |= 1 << pos[w]
    return verts, pos, nbmask


def _mask_connected(mask, nbmask):
    start = mask & -mask
    seen = start
    frontier = start
    while frontier:
        nxt = 0
        m = frontier
        while m:
            b = m & -m
            m ^= b
            nxt |= nbmask[b.bit_length() - 1] & mask
        frontier = nxt & ~seen
        seen |= frontier
    return seen == mask


def brute_holes(adj):
    """All vertex sets inducing a chordless cycle of length >= 4, as sorted tuples."""
    verts, _, nbmask = _bit_layout(adj)
    n = len(verts)
    out = []
    for size in range(4, n + 1):
        for combo in combinations(range(n), size):
            mask = 0
            for i in combo:
                mask |= 1 << i
            # an induced cycle is exactly a connected 2-regular induced subgraph
            if all(bin(nbmask[i] & mask).count("1") == 2 for i in combo) and _mask_connected(mask, nbmask):
                out.append(tuple(verts[i] for i in combo))
    return out


def brute_is_chordal(adj):
    verts, _, nbmask = _bit_layout(adj)
    n = len(verts)
    for size in range(4, n + 1):
        for combo in combinations(range(n), size):
            mask = 0
            for i in combo:
                mask |= 1 << i
            if all(bin(nbmask[i] & mask).count("1") == 2 for i in combo) and _mask_connected(mask, nbmask):
                return False
    return True


def brute_independence_number(adj):
    verts, pos, nbmask = _bit_layout(adj)
    n = len(verts)
    best = 0
    full = (1 << n) - 1

    def grow(candidates, size):
        nonlocal best
        if size + bin(candidates).count("1") <= best:
            return
        if not candidates:
            best = max(best, size)
            return
        b = candidates & -candidates
        i = b.bit_length() - 1
        grow(candidates & ~(b | nbmask[i]), size + 1)  # take i
        grow(candidates ^ b, size)  # skip i
    grow(full, 0)
    return best


def brute_cvd(adj, k):
    """Smallest deletion set of size <= k leaving no induced long cycle, else None.

    Ties broken by (size, sorted tuple) so the answer is unique.
    """
    verts = sorted(adj)
    for size in range(0, min(k, len(verts)) + 1):
        for combo in combinations(verts, size):
            drop = set(combo)
            sub = {v: adj[v] - drop for v in verts if v not in drop}
            if brute_is_chordal(sub):
                return sorted(combo)
    return None


def brute_annotated_yes(adj, k, irrelevant, mandatory):
    """Decide the annotated instance: some S, |S| <= k, hits every hole that uses
    no irrelevant edge and contains an endpoint of every mandatory edge."""
    irr = {frozenset(e) for e in irrelevant}
    holes = []
    for hole in brute_holes(adj):
        hs = set(hole)
        edges = [frozenset((u, v)) for u in hole for v in adj[u] & hs]
        if not any(e in irr for e in edges):
            holes.append(hs)
    man = [tuple(e) for e in mandatory]
    verts = sorted(adj)
    for size in range(0, min(k, len(verts)) + 1):
        for combo in combinations(verts, size):
            s = set(combo)
            if all(h & s for h in holes) and all(u in s or v in s for u, v in man):
                return True
    return False


def brute_max_matching_size(a_side, b_side, edges):
    """Maximum bipartite matching size by exhaustive augmentation-free search."""
    by_a = {a: sorted(b for x, b in edges if x == a) for a in a_side}
    a_list = sorted(a_side)

    def rec(i, used):
        if i == len(a_list):
            return 0
        best = rec(i + 1, used)
        for b in by_a[a_list[i]]:
            if b not in used:
                best = max(best, 1 + rec(i + 1, used | {b}))
        return best
    return rec(0, frozenset())


def brute_simple_paths(adj, src, dst, allowed_interior):
    """All simple src->dst paths whose interior vertices stay in allowed_interior."""
    out = []

    def walk(path, seen):
        at = path[-1]
        for w in sorted(adj[at]):
            if w == dst:
                out.append(path + [w])
            elif w not in seen and w in allowed_interior:
                walk(path + [w], seen | {w})
    if dst in adj[src]:
        out.append([src, dst])
    walk([src], {src, dst})
    # drop the duplicate direct edge if the walk found it again
    uniq = []
    for p in out:
        if p not in uniq:
            uniq.append(p)
    return uniq
