"""Bounding maximal cliques of G minus a solution by witness marking.

Given a solution D (so G \\ D is chordal) and an oversized maximal clique K
of G \\ D, a bounded number of clique vertices is marked so that deleting the
rest preserves the set of budget-sized solutions.  Marking revolves around
*dangerous* vertices: relevant neighbors of some t in D that can reach K
along paths whose interior is blind to t.  Holes through t and K must enter
K through such a vertex, so keeping enough witnesses per danger clique keeps
a representative of every such hole alive.  Two escape hatches exist: the
analysis can instead certify a vertex that every small solution contains, or
a vertex pair of which every small solution contains at least one (a new
mandatory edge).

All traversals stick to non-irrelevant edges.  Holes that use an irrelevant
edge never constrain a solution, so paths discovered over them could not
back a forced-vertex or mandatory-edge claim; restricting the search keeps
those claims honest and costs nothing for marking (extra marks are always
safe, missing ignorable holes is not a loss).
"""

from dataclasses import dataclass, field

from .chordal import (
    clique_cover_chordal,
    clique_forest,
    induced,
    is_valid_hole,
)
from .graph import BudgetExhausted, EdgeLabel, edge_key


class InvariantViolation(RuntimeError):
    """A structural bound the reduction relies on failed to hold."""


def _live_neighbors(inst, v):
    """Neighbors of v over non-irrelevant edges (mandatory ones count)."""
    return sorted(
        u for u in inst.neighbors(v)
        if inst.label(v, u) is not EdgeLabel.IRRELEVANT
    )


def _check_maximal_clique(inst, d_set, clique):
    kset = set(clique)
    if kset & d_set:
        raise ValueError("clique intersects the solution set")
    for u in kset:
        if not inst.has_vertex(u):
            raise ValueError("clique vertex %d not in graph" % u)
    klist = sorted(kset)
    for i, u in enumerate(klist):
        for w in klist[i + 1:]:
            if not inst.has_edge(u, w):
                raise ValueError("not a clique: %d and %d" % (u, w))
    for w in sorted(set(inst.vertices()) - d_set - kset):
        if kset <= set(inst.neighbors(w)):
            raise ValueError("clique not maximal: %d extends it" % w)


@dataclass
class DangerReport:
    t: int
    t_dangerous: list
    t_star_dangerous: list
    t_witnesses: dict
    t_star_witnesses: dict
    witness_paths: dict
    paths: dict


def dangerous_sets(inst, d_set, clique, t):
    """Classify reach-into-K vertices for one solution vertex t.

    A candidate v (a non-irrelevant neighbor of t, outside D and K) is
    explored by BFS over non-irrelevant edges where only vertices with no
    edge to t and outside D may be traversed.  Reached clique vertices u
    split v's status: u with no edge at all to t makes v plainly dangerous;
    u that is itself a non-irrelevant neighbor of t and non-adjacent to v
    makes v doubly dangerous (the starred kind).
    """
    if t not in d_set:
        raise ValueError("%d is not in the solution set" % t)
    _check_maximal_clique(inst, d_set, clique)
    kset = set(clique)
    nbrs_t = set(inst.neighbors(t))
    live_t = set(_live_neighbors(inst, t))
    allowed = set(inst.vertices()) - d_set - nbrs_t - {t}

    t_dang, t_star = [], []
    t_wit, t_star_wit = {}, {}
    rep_paths, all_paths = {}, {}
    for v in sorted(live_t - d_set - kset):
        parent = {v: None}
        frontier = [v]
        while frontier:
            nxt = []
            for x in frontier:
                for y in _live_neighbors(inst, x):
                    if y in parent:
                        continue
                    parent[y] = x
                    if y in allowed:
                        nxt.append(y)
            frontier = nxt
        plain, starred = [], []
        for u in sorted(kset):
            if u not in parent or u == v:
                continue
            if u not in nbrs_t:
                plain.append(u)
            if u in live_t and u not in inst.neighbors(v):
                starred.append(u)
            if u in parent:
                path = [u]
                while path[-1] != v:
                    path.append(parent[path[-1]])
                all_paths[(v, u)] = path[::-1]
        if plain:
            t_dang.append(v)
            t_wit[v] = plain
        if starred:
            t_star.append(v)
            t_star_wit[v] = starred
        if plain or starred:
            first = (plain or starred)[0]
            rep_paths[v] = all_paths[(v, first)]
    return DangerReport(
        t=t,
        t_dangerous=t_dang,
        t_star_dangerous=t_star,
        t_witnesses=t_wit,
        t_star_witnesses=t_star_wit,
        witness_paths=rep_paths,
        paths=all_paths,
    )


@dataclass
class MarkBudget:
    d_size: int
    k: int
    delta: int

    @property
    def t_witness_cap(self):
        return self.d_size * 6 * self.k**2 * (self.k + 1)

    @property
    def t_star_witness_cap(self):
        return self.d_size * self.delta * (self.k + 2) ** 3

    @property
    def fragment_cap(self):
        return self.d_size**3 * (self.k + 2)

    @property
    def mandatory_cap(self):
        return 2 * self.k**2

    @property
    def kappa(self):
        return (
            self.t_witness_cap
            + self.t_star_witness_cap
            + self.fragment_cap
            + self.mandatory_cap
        )


def kappa_threshold(d_size, k, delta):
    return MarkBudget(d_size, k, delta).kappa


@dataclass
class MarkOutcome:
    marks: set = field(default_factory=set)
    forced: int | None = None
    mandatory: tuple | None = None
    counts: dict = field(default_factory=dict)
    over_budget: list = field(default_factory=list)


def _plain_adj(inst):
    return {v: set(inst.neighbors(v)) for v in inst.vertices()}


def _vertex_distance(forest, dist_by_bag, u):
    best = None
    for i in forest.bags_containing(u):
        d = dist_by_bag.get(i)
        if d is not None and (best is None or d < best):
            best = d
    return best if best is not None else len(forest.bags) + 1


def _first_bag_containing(forest, vertices):
    want = set(vertices)
    for i, bag in enumerate(forest.bags):
        if want <= bag:
            return i
    return None


def _relevant_hole(inst, cycle):
    if not is_valid_hole(_plain_adj(inst), cycle):
        return False
    m = len(cycle)
    for i in range(m):
        if inst.label(cycle[i], cycle[(i + 1) % m]) is EdgeLabel.IRRELEVANT:
            return False
    return True


def _mark_plain_danger(inst, k, forest, report, clique, marks, counts):
    """k+1 witnesses per clique of plainly dangerous vertices suffice: any
    budget deletion leaves one marked witness alive whenever it leaves an
    unmarked one."""
    dang = report.t_dangerous
    if not dang:
        return
    cover = clique_cover_chordal(induced(_plain_adj(inst), set(dang)))
    if len(cover) > 6 * k * k:
        raise InvariantViolation(
            "independent set of dangerous vertices for %d exceeds 6k^2"
            % report.t
        )
    for q in cover:
        witnesses = sorted({u for v in q for u in report.t_witnesses.get(v, [])})
        if not witnesses:
            continue
        bag_q = _first_bag_containing(forest, q)
        dist = forest.distances_from(bag_q)
        witnesses.sort(key=lambda u: (_vertex_distance(forest, dist, u), u))
        chosen = witnesses[: k + 1]
        marks.update(chosen)
        counts["t_witness"] = counts.get("t_witness", 0) + len(chosen)


def _interleave(u_keys, v_keys):
    """Alternating strictly increasing subsequence of v- and u-positions.

    Returns index pairs (beta_i, alpha_i) into the sorted vertex lists;
    alpha of the last entry may be None when no later u exists.
    """
    seq = []
    beta = 0
    while beta is not None and beta < len(v_keys):
        alpha = None
        for j in range(len(u_keys)):
            if u_keys[j] > v_keys[beta]:
                alpha = j
                break
        seq.append((beta, alpha))
        if alpha is None:
            break
        nxt = None
        for i in range(beta + 1, len(v_keys)):
            if v_keys[i] > u_keys[alpha]:
                nxt = i
                break
        beta = nxt
    return seq


def _mark_starred_danger(inst, k, d_size, delta, forest, report, clique,
                         marks, counts, over_budget):
    """Witness marking for the starred danger cliques along the clique tree.

    Positions of witnesses (first bag on the tree path holding them) and of
    danger vertices (last such bag) interleave into an increasing sequence;
    marking a k+2 block of witnesses per step keeps a replacement inside any
    budget-sized deletion.  A very long sequence instead certifies either a
    forced vertex (disjoint holes sharing only t) or a mandatory pair
    (holes sharing only t and one other vertex), both verified explicitly
    before being reported.
    """
    t = report.t
    dang = report.t_star_dangerous
    if not dang:
        return None
    cover = clique_cover_chordal(induced(_plain_adj(inst), set(dang)))
    if len(cover) > max(delta, 1):
        raise InvariantViolation(
            "independent set of starred dangerous vertices for %d exceeds "
            "the degree threshold" % t
        )
    kset = set(clique)
    live_t = set(_live_neighbors(inst, t))
    y_bag = _first_bag_containing(forest, kset)
    for q in cover:
        u_all = sorted(kset & live_t)
        if not u_all:
            continue
        x_bag = _first_bag_containing(forest, q)
        path = forest.path_between(x_bag, y_bag)
        pos = {b: i + 1 for i, b in enumerate(path)}

        def first_pos(w):
            return min(pos[b] for b in forest.bags_containing(w) if b in pos)

        def last_pos(w):
            return max(pos[b] for b in forest.bags_containing(w) if b in pos)

        u_list = sorted(u_all, key=lambda u: (first_pos(u), 0, u))
        u_keys = [(first_pos(u), 0, u) for u in u_list]
        v_list = sorted(q, key=lambda v: (last_pos(v), 1, v))
        v_keys = [(last_pos(v), 1, v) for v in v_list]
        seq = _interleave(u_keys, v_keys)
        ell = len(seq)

        if ell > (k + 2) ** 2:
            got = _starred_escape(inst, k, report, seq, u_list, v_list)
            if got is not None:
                return got
            over_budget.append("starred danger sequence had no certificate")
            steps = [a for _, a in seq if a is not None]
        else:
            steps = [a for _, a in seq if a is not None]
        for a in steps:
            block = u_list[a: a + k + 2]
            marks.update(block)
            counts["t_star_witness"] = (
                counts.get("t_star_witness", 0) + len(block)
            )
    return None


def _starred_escape(inst, k, report, seq, u_list, v_list):
    """Forced vertex or mandatory pair out of an overlong witness sequence."""
    t = report.t
    picks = []
    for j in range(1, k + 2):
        idx = (k + 2) * j - 1
        if idx >= len(seq) or seq[idx][1] is None:
            return None
        beta, alpha = seq[idx]
        v, u = v_list[beta], u_list[alpha]
        path = report.paths.get((v, u))
        if path is None:
            return None
        picks.append((idx, v, u, path))

    cycles = [[t] + path for _, _, _, path in picks]
    if not all(_relevant_hole(inst, c) for c in cycles):
        return None
    interiors = [set(c) - {t} for c in cycles]
    shared = None
    for i in range(len(cycles)):
        for j in range(i + 1, len(cycles)):
            common = interiors[i] & interiors[j]
            if common:
                shared = (picks[i][0], picks[j][0], min(common))
                break
        if shared:
            break
    if shared is None:
        return MarkOutcome(forced=t)

    lo_idx, _, w = shared
    quads = []
    for i in range(1, k + 2):
        idx = lo_idx + i
        if idx >= len(seq) or seq[idx][1] is None:
            return None
        beta, alpha = seq[idx]
        quads.append([t, v_list[beta], w, u_list[alpha]])
    used = set()
    for c in quads:
        if not _relevant_hole(inst, c):
            return None
        mid = {c[1], c[3]}
        if mid & used:
            return None
        used |= mid
    if w in used or inst.has_edge(t, w):
        return None
    return MarkOutcome(mandatory=(t, w))


def _subtree_vertices(forest, root_bag):
    """Root every tree of the forest and accumulate per-bag subtree vertices.

    The tree holding root_bag is rooted there; any remaining tree (the
    residual graph need not be connected) is rooted at its smallest bag
    index.  Orientation of those extra trees is immaterial: a closing path
    confined to another component avoids every clique vertex automatically,
    so any anchor inside that tree supports the same replacement argument.
    """
    parent, children, order = forest.rooted_at(root_bag)
    for extra in range(len(forest.bags)):
        if extra not in parent:
            p2, c2, o2 = forest.rooted_at(extra)
            parent.update(p2)
            children.update(c2)
            order.extend(o2)
    verts = {i: set(forest.bags[i]) for i in order}
    for i in reversed(order):
        for c in children[i]:
            verts[i] |= verts[c]
    return parent, children, order, verts


def _fragment_pairs(inst, d_set):
    out = []
    dl = sorted(d_set)
    for i, l1 in enumerate(dl):
        for l2 in dl[i + 1:]:
            if not inst.has_edge(l1, l2):
                out.append((l1, l2))
    return out


def _mark_fragments(inst, k, d_set, forest, clique, marks, counts,
                    over_budget):
    """Marks covering holes that meet K in exactly one vertex.

    Such a hole enters and leaves K's vertex through two non-adjacent
    solution vertices and closes through a region of the clique tree hanging
    off the far side.  Per label pair, the deepest tree bags admitting such a
    closing path act as anchors: k+1 nearby doubly-labeled clique vertices
    are marked per anchor.  Too many pairwise-incomparable anchors instead
    certify the label pair itself as mandatory.  A third-label exclusion
    pass covers holes meeting three or more solution vertices.
    """
    kset = set(clique)
    dl = sorted(d_set)
    for l1, l2 in _fragment_pairs(inst, d_set):
        live1 = set(_live_neighbors(inst, l1))
        live2 = set(_live_neighbors(inst, l2))
        for l3 in dl:
            if l3 in (l1, l2):
                continue
            cand = sorted(
                u for u in kset & live1 & live2
                if l3 not in inst.neighbors(u)
            )
            chosen = cand[: k + 1]
            marks.update(chosen)
            counts["fragment"] = counts.get("fragment", 0) + len(chosen)

    y_bag = _first_bag_containing(forest, kset)
    parent, children, order, sub_verts = _subtree_vertices(forest, y_bag)

    for l1, l2 in _fragment_pairs(inst, d_set):
        live1 = set(_live_neighbors(inst, l1))
        live2 = set(_live_neighbors(inst, l2))
        doubly = sorted(u for u in kset & live1 & live2)
        if not doubly:
            continue
        anchors = set()
        for u in doubly:
            base = (
                set(inst.vertices()) - d_set - set(inst.neighbors(u)) - {u}
            )
            for w in order:
                zone = base & sub_verts[w]
                if _links_pair(inst, l1, l2, zone):
                    anchors.add(w)
        deepest = {
            w for w in anchors
            if not any(c in anchors or _has_anchor_below(c, children, anchors)
                       for c in children[w])
        }
        q = len(deepest)
        if q >= k + 2:
            got = _fragment_escape(inst, k, d_set, l1, l2, sorted(deepest),
                                   sub_verts)
            if got is not None:
                return got
            over_budget.append(
                "fragment anchors for (%d,%d) had no certificate" % (l1, l2)
            )
        for w in sorted(deepest):
            dist = forest.distances_from(w)
            ranked = sorted(
                doubly, key=lambda u: (_vertex_distance(forest, dist, u), u)
            )
            chosen = ranked[: k + 1]
            marks.update(chosen)
            counts["fragment"] = counts.get("fragment", 0) + len(chosen)
    return None


def _has_anchor_below(bag, children, anchors):
    stack = [bag]
    while stack:
        b = stack.pop()
        if b in anchors:
            return True
        stack.extend(children[b])
    return False


def _links_pair(inst, l1, l2, zone):
    """Can l1 reach l2 through non-irrelevant edges with interior in zone?"""
    seen = set()
    frontier = [x for x in _live_neighbors(inst, l1) if x in zone]
    seen.update(frontier)
    while frontier:
        nxt = []
        for x in frontier:
            for y in _live_neighbors(inst, x):
                if y == l2:
                    return True
            for y in _live_neighbors(inst, x):
                if y in zone and y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return False


def _shortest_link(inst, l1, l2, zone):
    parent = {}
    frontier = []
    for x in sorted(_live_neighbors(inst, l1)):
        if x in zone:
            parent[x] = None
            frontier.append(x)
    while frontier:
        nxt = []
        for x in frontier:
            for y in _live_neighbors(inst, x):
                if y == l2:
                    path = [x]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return path[::-1]
                if y in zone and y not in parent:
                    parent[y] = x
                    nxt.append(y)
        frontier = nxt
    return None


def _fragment_escape(inst, k, d_set, l1, l2, anchor_bags, sub_verts):
    """Mandatory pair certificate from many disjoint closing paths."""
    base = set(inst.vertices()) - d_set
    paths = []
    for w in anchor_bags:
        zone = base & sub_verts[w]
        zone -= {l1, l2}
        p = _shortest_link(inst, l1, l2, zone)
        if p is not None:
            paths.append(p)
        if len(paths) == k + 2:
            break
    if len(paths) < k + 2:
        return None
    for i in range(len(paths)):
        for j in range(i + 1, len(paths)):
            cycle = [l1] + paths[i] + [l2] + paths[j][::-1]
            if not _relevant_hole(inst, cycle):
                return None
    return MarkOutcome(mandatory=(l1, l2))


def mark_clique(inst, d_set, delta, clique):
    """Witness marks for one oversized maximal clique of G \\ D.

    Returns marks to keep (everything else in the clique is deletable), or a
    forced vertex, or a new mandatory pair; the caller applies escapes and
    rescans.  Mark counts per category are reported against their budgets.
    """
    _check_maximal_clique(inst, d_set, clique)
    k = inst.k
    rest = induced(_plain_adj(inst), set(inst.vertices()) - d_set)
    forest = clique_forest(rest)
    if frozenset(clique) not in forest.bags:
        raise ValueError("clique is not maximal in the residual graph")

    marks = set()
    counts = {}
    over_budget = []
    for t in sorted(d_set):
        report = dangerous_sets(inst, d_set, clique, t)
        _mark_plain_danger(inst, k, forest, report, clique, marks, counts)
        got = _mark_starred_danger(
            inst, k, len(d_set), delta, forest, report, clique,
            marks, counts, over_budget,
        )
        if got is not None:
            return got

    got = _mark_fragments(inst, k, d_set, forest, clique, marks, counts,
                          over_budget)
    if got is not None:
        return got

    kset = set(clique)
    for u, w in inst.mandatory_edges():
        for x in (u, w):
            if x in kset:
                marks.add(x)
                counts["mandatory_endpoint"] = (
                    counts.get("mandatory_endpoint", 0) + 1
                )
    return MarkOutcome(marks=marks, counts=counts, over_budget=over_budget)


@dataclass
class ShrinkReport:
    removed: list = field(default_factory=list)
    forced: list = field(default_factory=list)
    mandatory_added: list = field(default_factory=list)
    scans: int = 0
    over_budget: list = field(default_factory=list)
    stalled: list = field(default_factory=list)
    d_after: set = field(default_factory=set)


def _apply_mandatory_degree_rule(inst, report, journal=None):
    """A vertex carrying more than k mandatory edges is in every solution."""
    changed = True
    while changed:
        changed = False
        for v in sorted(inst.vertices()):
            if inst.mandatory_degree(v) >= inst.k + 1:
                inst.remove_vertex_into_solution(v)
                report.forced.append(v)
                if journal is not None:
                    journal([("forced", v)])
                changed = True
                break


def shrink_cliques(inst, d_set, delta, kappa_override=None, journal=None):
    """Cut every maximal clique of G \\ D down to the marking threshold.

    Scans residual maximal cliques largest-budget-first, replacing each
    oversized one by its marked vertices.  Forced vertices are spent against
    the budget immediately (raising BudgetExhausted when it runs out) and
    mandatory pairs are recorded on the instance; both trigger a rescan.
    `kappa_override` substitutes the size threshold, for exercising the
    machinery on small graphs.  `journal`, when given, is called with the
    list of primitive mutations after each rule firing, in execution order,
    so callers can keep a replayable trace.
    """
    d_set = set(d_set)
    report = ShrinkReport()
    while True:
        if len(inst.mandatory_edges()) > inst.k**2:
            if not any(
                inst.mandatory_degree(v) >= inst.k + 1
                for v in inst.vertices()
            ):
                raise BudgetExhausted(
                    "mandatory edges exceed what any budget solution covers"
                )
            _apply_mandatory_degree_rule(inst, report, journal)
            d_set -= set(report.forced)
            continue

        kappa = (
            kappa_override if kappa_override is not None
            else kappa_threshold(len(d_set), inst.k, delta)
        )
        rest = induced(
            _plain_adj(inst), set(inst.vertices()) - d_set
        )
        if not rest:
            break
        bags = clique_forest(rest).bags
        target = None
        for bag in bags:
            if len(bag) > kappa and bag not in report.stalled:
                target = sorted(bag)
                break
        if target is None:
            break
        report.scans += 1
        out = mark_clique(inst, d_set, delta, target)
        report.over_budget.extend(out.over_budget)
        if out.forced is not None:
            inst.remove_vertex_into_solution(out.forced)
            report.forced.append(out.forced)
            if journal is not None:
                journal([("forced", out.forced)])
            d_set.discard(out.forced)
            report.stalled.clear()
            _apply_mandatory_degree_rule(inst, report, journal)
            d_set -= set(report.forced)
            continue
        if out.mandatory is not None:
            u, w = out.mandatory
            inst.add_mandatory_edge(u, w)
            report.mandatory_added.append(edge_key(u, w))
            if journal is not None:
                journal([("mandatory", u, w)])
            report.stalled.clear()
            _apply_mandatory_degree_rule(inst, report, journal)
            d_set -= set(report.forced)
            continue
        doomed = [u for u in target if u not in out.marks]
        if not doomed:
            report.stalled.append(frozenset(target))
            continue
        for u in doomed:
            inst.remove_vertex(u)
            report.removed.append(u)
        if journal is not None:
            journal([("remove", u) for u in doomed])
    report.d_after = d_set
    return report
