"""The kernelization driver.

Stages, in the order a pass runs them: spend budget on vertices carrying too
many mandatory edges, cap every vertex's independent degree, shrink oversized
residual cliques, drop vertices whose relevant neighborhood is a clique,
decompose the residual clique forest into degree-2 paths, shorten every
manageable stretch of those paths, and finally discharge the annotations
(mandatory edges become budget gadgets, irrelevant marks are lifted).  The
whole sequence runs twice by default: the second pass sees a smaller graph,
so the solution-size estimate f that scales every threshold is smaller and
the rules bite harder.

Every mutation is recorded as a trace entry (rule name plus a list of
primitive operations); replaying the trace on a copy of the input reproduces
the output instance bit for bit.  Each rule firing must strictly shrink the
measure (vertex count, unannotated-edge count, non-adjacent pair count) in
lexicographic order; the terminal discharge stage is exempt because it
deliberately adds gadget vertices and lifts marks.

Irrelevant marks are treated as erasable bookkeeping: lifting them at the end
of a pass assumes any solution hitting every unmarked hole also hits the
marked ones.  That holds for every mark this module writes (it is what the
marking rules certify) and vacuously for unannotated input; callers feeding
externally marked edges get reductions honoring the marks but an output whose
equivalence guarantee covers only marks with that property.
"""

from dataclasses import dataclass, field

from .chordal import clique_forest, components, induced, is_chordal, mis_chordal
from .expansion import q_expansion
from .graph import BudgetExhausted, EdgeLabel
from .shrink import InvariantViolation, kappa_threshold, shrink_cliques
from .solvers import BlockerResult, GreedyProvider, greedy_solution, redundant_solution, v_blocker


# ---------------------------------------------------------------------------
# outcomes


@dataclass
class RunReport:
    """Thresholds and rule tallies, one stats dict per pass."""
    passes: list = field(default_factory=list)
    forced: list = field(default_factory=list)
    outcome: str = ""

    def as_dict(self):
        return {
            "outcome": self.outcome,
            "forced": list(self.forced),
            "passes": [dict(p) for p in self.passes],
        }


@dataclass
class DecidedYes:
    """Solvable within budget.  `solution` lists the vertices the rules
    committed, which accounts for the budget spent; it is not by itself a
    hitting set of the original graph (free deletions also happened)."""
    solution: list
    report: RunReport | None = None


@dataclass
class DecidedNo:
    reason: str
    report: RunReport | None = None


@dataclass
class Reduced:
    instance: object
    trace: list
    report: RunReport | None = None


KernelOutcome = (DecidedYes, DecidedNo, Reduced)


# ---------------------------------------------------------------------------
# trace replay and the progress measure


def _measure(inst):
    n = inst.vertex_count()
    m = inst.edge_count()
    plain = m - len(inst.irrelevant_edges()) - len(inst.mandatory_edges())
    return (n, plain, n * (n - 1) // 2 - m)


def _attach_gadget(inst, x, y):
    """Replace the mandatory mark on {x,y} by k+1 fresh length-3 paths.

    Each path x - xi - yi - y closes an induced 4-cycle with the edge {x,y},
    and the cycles share only x and y, so a solution within budget must take
    one of the two endpoints; the mark becomes redundant.
    """
    for _ in range(inst.k + 1):
        xi = inst.add_vertex()
        yi = inst.add_vertex()
        inst.add_edge(x, xi)
        inst.add_edge(xi, yi)
        inst.add_edge(yi, y)
    inst.unmark_mandatory(x, y)


def _apply_op(inst, op):
    tag = op[0]
    if tag == "remove":
        inst.remove_vertex(op[1])
    elif tag == "forced":
        inst.remove_vertex_into_solution(op[1])
    elif tag == "irrelevant":
        inst.mark_irrelevant(op[1], op[2])
    elif tag == "mandatory":
        inst.add_mandatory_edge(op[1], op[2])
    elif tag == "convert-mandatory":
        inst.unmark_irrelevant(op[1], op[2])
        inst.add_mandatory_edge(op[1], op[2])
    elif tag == "saturate":
        inst.saturate_and_remove(op[1])
    elif tag == "gadget":
        _attach_gadget(inst, op[1], op[2])
    elif tag == "clear-irrelevant":
        inst.clear_irrelevant()
    else:
        raise ValueError("unknown trace op %r" % (op,))


def apply_trace(inst, trace):
    """Replay a recorded trace; mutates and returns `inst`."""
    for _rule, ops in trace:
        for op in ops:
            _apply_op(inst, op)
    return inst


class _Recorder:
    """Appends trace entries and enforces the measure per rule firing."""

    def __init__(self, inst, trace):
        self.inst = inst
        self.trace = trace
        self.mark = _measure(inst)

    def fire(self, rule, ops, terminal=False):
        """Record one firing whose ops were already applied to the instance."""
        if not ops:
            return
        now = _measure(self.inst)
        if not terminal and not now < self.mark:
            raise InvariantViolation(
                "rule %s did not shrink the measure: %r -> %r" % (rule, self.mark, now)
            )
        self.mark = now
        if self.trace is not None:
            self.trace.append((rule, list(ops)))

    def journal_for(self, rule):
        def callback(ops):
            self.fire(rule, ops)
        return callback


def _plain_adj(inst):
    return {v: set(inst.neighbors(v)) for v in inst.vertices()}


# ---------------------------------------------------------------------------
# thresholds


class Thresholds:
    """Every size cap scales with f, the largest provider answer or blocker
    seen so far in the current pass.  f only grows, so a cap that held when
    checked keeps holding later in the pass."""

    def __init__(self):
        self.f = 1

    def observe(self, size):
        if size > self.f:
            self.f = size

    def indep_cap(self, k):
        return (k + 3) * self.f

    def indep_cap_full(self, k):
        """Independence cap with the mandatory-partner allowance added."""
        return self.indep_cap(k) + k

    def clique_cap(self, d_size, k):
        return kappa_threshold(d_size, k, self.indep_cap(k))

    @staticmethod
    def interior_cap(kappa, k):
        return 2 * (k + 1) + 6 * kappa


# ---------------------------------------------------------------------------
# mandatory-degree rule


def rule_incident_mandatory(inst, trace=None):
    """Spend budget on every vertex carrying k+1 mandatory edges, then rule
    the instance out if more than k^2 mandatory edges remain (k vertices
    cover at most k each).

    Returns DecidedNo on that overflow, else None.  Raises BudgetExhausted
    when a vertex is forced with no budget left.
    """
    rec = _Recorder(inst, trace)
    while True:
        pick = None
        for v in inst.vertices():
            if inst.mandatory_degree(v) >= inst.k + 1:
                pick = v
                break
        if pick is None:
            break
        inst.remove_vertex_into_solution(pick)
        rec.fire("incident-mandatory", [("forced", pick)])
    if len(inst.mandatory_edges()) > inst.k ** 2:
        return DecidedNo(
            "%d mandatory edges exceed the k^2 = %d that k vertices can cover"
            % (len(inst.mandatory_edges()), inst.k ** 2)
        )
    return None


# ---------------------------------------------------------------------------
# independent-degree bounding


@dataclass
class IndependentDegreeContext:
    """Neighborhood split certifying a vertex's independent degree.

    `indep` is a maximum independent set of the relevant neighborhood of v
    with the blocker removed (that graph is chordal since the blocker is a
    solution avoiding v); `excluded` is the rest of N(v); each entry of
    `pieces` is one connected component of the graph minus v, the blocker
    and `excluded`, restricted to those holding an `indep` vertex; `rep`
    lists that vertex per piece.
    """
    v: int
    blocker: list
    indep: list
    excluded: list
    pieces: list
    rep: list

    def validate(self, inst):
        nb = set(inst.neighbors(self.v))
        for i, piece in enumerate(self.pieces):
            if set(piece) & set(self.indep) != {self.rep[i]}:
                raise InvariantViolation(
                    "piece %d does not hold exactly its representative" % i
                )
            if set(piece) & nb != {self.rep[i]}:
                raise InvariantViolation(
                    "piece %d touches the neighborhood of %d beyond its "
                    "representative" % (i, self.v)
                )
        piece_sets = [set(p) for p in self.pieces]
        for x in self.excluded:
            xnb = set(inst.neighbors(x))
            for i, ps in enumerate(piece_sets):
                if xnb & ps and self.rep[i] not in xnb:
                    raise InvariantViolation(
                        "excluded vertex %d reaches piece %d but not its "
                        "representative" % (x, i)
                    )


@dataclass
class HHatGraph:
    """Contact graph between blocker vertices and pieces.

    A blocker vertex adjacent to v ("close") links to a piece when it
    touches the piece anywhere except the representative; one away from v
    ("far") links when it touches the piece at all.  Either link witnesses
    a potential hole through v surviving the representative edge.
    """
    close: list
    far: list
    links: dict        # blocker vertex -> ascending piece indices
    piece_links: dict  # piece index -> ascending blocker vertices

    def isolated_pieces(self):
        return sorted(i for i, bs in self.piece_links.items() if not bs)


def build_degree_context(inst, v, blocker):
    adj = _plain_adj(inst)
    rel = set(inst.relevant_neighbors(v))
    sub = induced(adj, rel - set(blocker))
    indep = mis_chordal(sub)
    excluded = sorted(set(adj[v]) - set(blocker) - set(indep))
    keep = set(adj) - {v} - set(blocker) - set(excluded)
    pieces = []
    reps = []
    for comp in components(induced(adj, keep)):
        hit = sorted(set(comp) & set(indep))
        if not hit:
            continue
        pieces.append(comp)
        reps.append(hit[0])
    ctx = IndependentDegreeContext(
        v=v,
        blocker=sorted(blocker),
        indep=indep,
        excluded=excluded,
        pieces=pieces,
        rep=reps,
    )
    ctx.validate(inst)
    return ctx


def build_hhat(inst, ctx):
    close = set(b for b in ctx.blocker if inst.has_edge(b, ctx.v))
    links = {b: [] for b in ctx.blocker}
    piece_links = {i: [] for i in range(len(ctx.pieces))}
    for i, piece in enumerate(ctx.pieces):
        touch = set()
        for y in piece:
            touch.update(inst.neighbors(y))
        rep_nb = set(inst.neighbors(ctx.rep[i]))
        for b in ctx.blocker:
            if b not in touch:
                continue
            if b in close and b in rep_nb:
                continue
            links[b].append(i)
            piece_links[i].append(b)
    return HHatGraph(
        close=sorted(close),
        far=sorted(set(ctx.blocker) - close),
        links=links,
        piece_links=piece_links,
    )


def _indep_proxy(inst, v, blocker):
    """Certified upper bound on the independent degree of v: an independent
    set among its relevant neighbors has at most |blocker| vertices inside
    the blocker and at most the chordal-MIS size outside."""
    adj = _plain_adj(inst)
    rel = set(inst.relevant_neighbors(v))
    sub = induced(adj, rel - set(blocker))
    return len(mis_chordal(sub)) + len(blocker)


def bound_independent_degree(inst, blocker_fn, thresholds, trace=None):
    """Cap every vertex's independent degree at (k+3)f.

    Per offending vertex: a piece linked to nothing in the contact graph
    shows its representative edge lies on no unmarked hole (marked
    irrelevant); otherwise a (k+2)-expansion names blocker vertices every
    v-avoiding solution must take (their edges to v become mandatory) and
    pieces whose representative edges become ignorable.  Each vertex ends
    with a certificate that its independent degree fits the cap: relevant
    degree within it, or the blocker proxy within it.  Later marks only
    shrink relevant neighborhoods, so certificates survive the sweep.

    Returns True when a blocker query certified a forced vertex instead;
    the caller restarts the pass with the decremented budget.
    """
    rec = _Recorder(inst, trace)
    for v in list(inst.vertices()):
        if not inst.has_vertex(v):
            continue
        while True:
            if len(inst.relevant_neighbors(v)) <= thresholds.indep_cap(inst.k):
                break
            res = blocker_fn(v)
            if res.forced is not None:
                inst.remove_vertex_into_solution(res.forced)
                rec.fire("degree-forced", [("forced", res.forced)])
                return True
            blocker = res.blocker
            if _indep_proxy(inst, v, blocker) <= thresholds.indep_cap(inst.k):
                break
            ctx = build_degree_context(inst, v, blocker)
            hhat = build_hhat(inst, ctx)
            isolated = hhat.isolated_pieces()
            if isolated:
                ops = []
                for i in isolated:
                    inst.mark_irrelevant(ctx.v, ctx.rep[i])
                    ops.append(("irrelevant", ctx.v, ctx.rep[i]))
                rec.fire("isolated-piece", ops)
                continue
            if len(ctx.pieces) < (inst.k + 2) * len(ctx.blocker):
                raise InvariantViolation(
                    "vertex %d: %d pieces cannot host a %d-expansion of %d "
                    "blocker vertices"
                    % (v, len(ctx.pieces), inst.k + 2, len(ctx.blocker))
                )
            exp = q_expansion(
                ctx.blocker,
                list(range(len(ctx.pieces))),
                hhat.links,
                inst.k + 2,
            )
            ops = []
            for b in exp.x:
                if inst.has_edge(b, v) and inst.label(b, v) is EdgeLabel.IRRELEVANT:
                    inst.unmark_irrelevant(b, v)
                    inst.add_mandatory_edge(b, v)
                    ops.append(("convert-mandatory", b, v))
                else:
                    inst.add_mandatory_edge(b, v)
                    ops.append(("mandatory", b, v))
            for i in exp.y:
                inst.mark_irrelevant(v, ctx.rep[i])
                ops.append(("irrelevant", v, ctx.rep[i]))
            rec.fire("degree-expansion", ops)
    return False


# ---------------------------------------------------------------------------
# simplicial removal


def rule_simplicial_removal(inst, d_prime, trace=None):
    """Remove vertices outside d_prime whose relevant neighbors are a clique.

    An unmarked hole through such a vertex would turn at two of its relevant
    neighbors, which are adjacent, a chord; so no unmarked hole passes the
    vertex and it constrains nothing (mandatory endpoints all sit inside
    d_prime and are skipped).  Exhaustive; returns the removal count.
    """
    rec = _Recorder(inst, trace)
    shielded = set(d_prime)
    count = 0
    changed = True
    while changed:
        changed = False
        for v in inst.vertices():
            if v in shielded or inst.mandatory_degree(v):
                continue
            rel = inst.relevant_neighbors(v)
            if all(
                inst.has_edge(a, b)
                for i, a in enumerate(rel)
                for b in rel[i + 1:]
            ):
                inst.remove_vertex(v)
                rec.fire("simplicial", [("remove", v)])
                count += 1
                changed = True
                break
    return count


# ---------------------------------------------------------------------------
# clique-forest analysis


@dataclass
class PathDecomposition:
    forest: object
    private_bags: list
    terminals: list
    paths: list
    leaf_count: int
    splits: dict = field(default_factory=dict)


def analyze_clique_forest(inst, d_prime, cap):
    """Clique forest of the graph minus d_prime, cut into degree-2 paths.

    Terminals are nodes of tree degree >= 3 or holding a private vertex
    (one appearing in no other bag); leaves always hold one, so every
    non-terminal has degree exactly 2 and lies on exactly one terminal-to-
    terminal chain.  The private-bag, leaf and path counts must stay within
    what the earlier stages paid for: `cap` per d_prime vertex.
    """
    adj = _plain_adj(inst)
    residual = induced(adj, set(adj) - set(d_prime))
    forest = clique_forest(residual)
    n_nodes = len(forest.bags)

    private_bags = [
        i for i, bag in enumerate(forest.bags)
        if any(len(forest.bags_containing(v)) == 1 for v in bag)
    ]
    terminals = sorted(
        set(private_bags) | {i for i in range(n_nodes) if forest.degree(i) >= 3}
    )
    term_set = set(terminals)
    for i in range(n_nodes):
        if i not in term_set and forest.degree(i) != 2:
            raise InvariantViolation(
                "bag %d has degree %d yet holds no private vertex"
                % (i, forest.degree(i))
            )

    paths = []
    seen_internal = set()
    for start in terminals:
        for nxt in forest.tree[start]:
            walk = [start]
            prev, cur = start, nxt
            while cur not in term_set:
                walk.append(cur)
                ahead = [x for x in forest.tree[cur] if x != prev]
                prev, cur = cur, ahead[0]
            walk.append(cur)
            if walk[0] < walk[-1]:
                paths.append(walk)
                seen_internal.update(walk[1:-1])
    if seen_internal != set(range(n_nodes)) - term_set:
        raise InvariantViolation("degree-2 chains do not cover the forest")

    bound = len(set(d_prime)) * cap
    leaf_count = sum(1 for i in range(n_nodes) if forest.degree(i) <= 1)
    if len(private_bags) > bound or leaf_count > bound:
        raise InvariantViolation(
            "%d private bags / %d leaves exceed the budget %d"
            % (len(private_bags), leaf_count, bound)
        )
    if len(paths) > 2 * bound:
        raise InvariantViolation(
            "%d degree-2 paths exceed the budget %d" % (len(paths), 2 * bound)
        )
    return PathDecomposition(
        forest=forest,
        private_bags=private_bags,
        terminals=terminals,
        paths=paths,
        leaf_count=leaf_count,
    )


# ---------------------------------------------------------------------------
# path splitting


def _complies(bags, nbd):
    """A bag path suits a vertex d when every bag sits inside N(d) or the
    per-bag traces of N(d) are nested toward one end."""
    if all(bag <= nbd for bag in bags):
        return True
    traces = [bag & nbd for bag in bags]
    if all(traces[i] <= traces[i + 1] for i in range(len(traces) - 1)):
        return True
    return all(traces[i + 1] <= traces[i] for i in range(len(traces) - 1))


def split_path_complying(inst, forest, path, d_prime):
    """Cut at most two bags per d_prime vertex out of a degree-2 path so
    every kept stretch complies with all of them.

    A vertex's bags along the path form one contiguous run, so for each d
    the cuts are the leftmost position where some N(d)-run ends and the
    rightmost where one starts: strictly between those cuts every bag is
    met by all surviving runs, outside them the traces are nested.
    Vertices the whole path already complies with cut nothing.  Returns
    (cut positions, stretches as position lists), compliance machine-
    checked per stretch.
    """
    bags = [set(forest.bags[i]) for i in path]
    on_path = {}
    for pos, bag in enumerate(bags):
        for v in bag:
            on_path.setdefault(v, []).append(pos)

    cut = set()
    for d in sorted(set(d_prime)):
        if not inst.has_vertex(d):
            continue
        nbd = set(inst.neighbors(d))
        if _complies(bags, nbd):
            continue
        runs = [on_path[v] for v in sorted(nbd) if v in on_path]
        cut.add(min(run[-1] for run in runs))
        cut.add(max(run[0] for run in runs))

    stretches = []
    cur = []
    for pos in range(len(path)):
        if pos in cut:
            if cur:
                stretches.append(cur)
            cur = []
        else:
            cur.append(pos)
    if cur:
        stretches.append(cur)

    for stretch in stretches:
        piece = [bags[p] for p in stretch]
        for d in sorted(set(d_prime)):
            if inst.has_vertex(d) and not _complies(piece, set(inst.neighbors(d))):
                raise InvariantViolation(
                    "stretch %s fails to comply with %d" % (stretch, d)
                )
    return sorted(cut), stretches


# ---------------------------------------------------------------------------
# manageable-path reduction


def _merge_run(bags, u):
    """Collapse u's contiguous run of bags into their union after u left the
    graph, then drop bags swallowed by a neighbor so adjacent bags stay
    incomparable."""
    first = min(i for i, b in enumerate(bags) if u in b)
    last = max(i for i, b in enumerate(bags) if u in b)
    merged = set()
    for i in range(first, last + 1):
        merged |= bags[i]
    merged.discard(u)
    out = bags[:first] + [merged] + bags[last + 1:]
    changed = True
    while changed:
        changed = False
        for i in range(len(out) - 1):
            if out[i] <= out[i + 1] or out[i + 1] <= out[i]:
                del out[i if out[i] <= out[i + 1] else i + 1]
                changed = True
                break
    return out


def reduce_manageable_path(inst, bags, d_prime, kappa, trace=None):
    """Shorten one complying bag stretch until its interior fits the budget.

    While the interior (vertices of the stretch outside both end bags)
    exceeds 2(k+1) + 6*kappa: d_prime vertices adjacent to the whole
    stretch pairwise gain mandatory edges (two such vertices non-adjacent
    pin enough disjoint holes that one of the two is in every solution);
    then the separators a minimum solution might reroute through are
    protected, and the smallest unprotected interior vertex is deleted with
    its neighborhood saturated.  Returns the final bag list.
    """
    rec = _Recorder(inst, trace)
    bags = [set(b) for b in bags]
    k = inst.k
    cap = Thresholds.interior_cap(kappa, k)
    while len(bags) >= 3:
        span = set()
        for b in bags:
            span |= b
        interior = span - (bags[0] | bags[-1])
        if len(interior) <= cap:
            break
        core = set(bags[0])
        for b in bags[1:]:
            core &= b

        anchored = [
            d for d in sorted(set(d_prime))
            if inst.has_vertex(d) and span <= set(inst.neighbors(d))
        ]
        for i, d1 in enumerate(anchored):
            for d2 in anchored[i + 1:]:
                if not inst.has_edge(d1, d2):
                    inst.add_mandatory_edge(d1, d2)
                    rec.fire("anchored-pair", [("mandatory", d1, d2)])

        families = {}
        for i in range(len(bags) - 1):
            sep = bags[i] & bags[i + 1]
            outer = frozenset(sep - core - interior)
            if len(outer) > k or len(sep & interior) > k:
                continue
            families.setdefault(outer, []).append(i)
        if len(families) > 2 * k + 1:
            raise InvariantViolation(
                "%d separator families on one stretch exceed 2k+1 = %d"
                % (len(families), 2 * k + 1)
            )
        protected = set()
        for outer in sorted(families, key=sorted):
            best = min(
                families[outer],
                key=lambda i: (len(bags[i] & bags[i + 1] & interior), i),
            )
            protected |= bags[best] & bags[best + 1] & interior
        pool = sorted(interior - protected)
        if not pool:
            raise InvariantViolation(
                "interior above the cap yet every vertex is protected"
            )
        u = pool[0]
        inst.saturate_and_remove(u)
        rec.fire("interior-removal", [("saturate", u)])
        bags = _merge_run(bags, u)

        for d in sorted(set(d_prime)):
            if inst.has_vertex(d) and not _complies(bags, set(inst.neighbors(d))):
                raise InvariantViolation(
                    "stretch stopped complying with %d after removing %d" % (d, u)
                )
    return bags


# ---------------------------------------------------------------------------
# discharge of annotations


def rule_unmark_mandatory(inst, trace=None):
    """Discharge every mandatory edge into k+1 fresh 4-cycle gadgets."""
    rec = _Recorder(inst, trace)
    for x, y in inst.mandatory_edges():
        _attach_gadget(inst, x, y)
        rec.fire("mandatory-gadget", [("gadget", x, y)], terminal=True)


def _discharge_annotations(inst, trace):
    rec = _Recorder(inst, trace)
    if inst.irrelevant_edges():
        inst.clear_irrelevant()
        rec.fire("lift-irrelevant", [("clear-irrelevant",)], terminal=True)
    for x, y in inst.mandatory_edges():
        _attach_gadget(inst, x, y)
        rec.fire("mandatory-gadget", [("gadget", x, y)], terminal=True)


# ---------------------------------------------------------------------------
# the driver


class _Restart(Exception):
    """A rule certified a forced vertex; the pass starts over."""


class _Decided(Exception):
    def __init__(self, decision):
        self.decision = decision


class _Pass:
    """One full run of the stage sequence over a shared instance."""

    def __init__(self, inst, provider, trace, stats):
        self.inst = inst
        self.provider = provider
        self.trace = trace
        self.thresholds = Thresholds()
        self.stats = stats

    def blocker(self, v):
        """Blocker for v; only an exact provider may certify v as forced,
        a heuristic miss falls back to a fresh v-avoiding greedy solution."""
        adj = _plain_adj(self.inst)
        res = v_blocker(adj, v, self.provider, self.inst.k)
        if res.forced is not None and not getattr(self.provider, "exact", False):
            res = BlockerResult(blocker=greedy_solution(adj, avoid=v))
        if res.blocker is not None:
            self.thresholds.observe(len(res.blocker))
        return res

    def run(self):
        inst = self.inst
        while True:
            self.stats["rounds"] = self.stats.get("rounds", 0) + 1
            decision = rule_incident_mandatory(inst, self.trace)
            if decision is not None:
                raise _Decided(decision)
            if inst.vertex_count() == 0 or inst.k == 0:
                break
            try:
                self.stages()
            except _Restart:
                continue
            break
        _discharge_annotations(inst, self.trace)
        self.stats["f"] = self.thresholds.f
        self.stats["indep_cap"] = self.thresholds.indep_cap(inst.k)

    def stages(self):
        inst = self.inst
        adj = _plain_adj(inst)
        base = sorted(self.provider(adj))
        self.thresholds.observe(len(base))
        grown = redundant_solution(adj, base, self.provider, inst.k, blocker_fn=self.blocker)
        if grown.forced is not None:
            rec = _Recorder(inst, self.trace)
            inst.remove_vertex_into_solution(grown.forced)
            rec.fire("blocker-forced", [("forced", grown.forced)])
            raise _Restart

        if bound_independent_degree(inst, self.blocker, self.thresholds, self.trace):
            raise _Restart

        delta = self.thresholds.indep_cap(inst.k)
        rec = _Recorder(inst, self.trace)
        shrink = shrink_cliques(
            inst, base, delta, journal=rec.journal_for("clique-shrink")
        )
        self.stats["shrink_removed"] = (
            self.stats.get("shrink_removed", 0) + len(shrink.removed)
        )
        if shrink.forced:
            raise _Restart

        def current_d_prime():
            anchors = set(grown.solution) | {
                v for e in inst.mandatory_edges() for v in e
            }
            return sorted(anchors & set(inst.adj))

        self.stats["simplicial"] = self.stats.get("simplicial", 0) + (
            rule_simplicial_removal(inst, current_d_prime(), self.trace)
        )

        kappa = self.thresholds.clique_cap(len(shrink.d_after), inst.k)
        self.stats["kappa"] = kappa
        self.stats["interior_cap"] = Thresholds.interior_cap(kappa, inst.k)
        while True:
            d_prime = current_d_prime()
            decomp = analyze_clique_forest(
                inst, d_prime, self.thresholds.indep_cap_full(inst.k)
            )
            self.stats["paths"] = len(decomp.paths)
            mutated = False
            for idx, path in enumerate(decomp.paths):
                cut, stretches = split_path_complying(
                    inst, decomp.forest, path, d_prime
                )
                decomp.splits[idx] = (cut, stretches)
                for stretch in stretches:
                    bag_sets = [set(decomp.forest.bags[path[p]]) for p in stretch]
                    before = inst.vertex_count()
                    reduce_manageable_path(inst, bag_sets, d_prime, kappa, self.trace)
                    if inst.vertex_count() != before:
                        self.stats["path_removed"] = self.stats.get(
                            "path_removed", 0
                        ) + (before - inst.vertex_count())
                        mutated = True
                        break
                if mutated:
                    break
            if not mutated:
                break

        spent = len(inst.forced)
        decision = rule_incident_mandatory(inst, self.trace)
        if decision is not None:
            raise _Decided(decision)
        if len(inst.forced) != spent:
            raise _Restart


def kernelize(source, provider=None, passes=2):
    """Kernelize an annotated instance; the input is left untouched.

    Runs the stage sequence `passes` times (twice by default: the rerun
    recomputes the provider estimate on the already reduced graph, which
    tightens every threshold).  Returns DecidedYes when the graph becomes
    chordal with every annotation discharged, DecidedNo when a counting
    argument rules out any solution within budget, else Reduced with the
    replayable trace.
    """
    if source.k < 0:
        raise ValueError("budget must be non-negative")
    if passes < 1:
        raise ValueError("need at least one pass")
    if provider is None:
        provider = GreedyProvider()
    inst = source.copy()
    trace = []
    report = RunReport()

    def wrap_no(decision):
        report.outcome = "no"
        report.forced = list(inst.forced)
        decision.report = report
        return decision

    try:
        for _ in range(passes):
            stats = {}
            report.passes.append(stats)
            try:
                _Pass(inst, provider, trace, stats).run()
            except _Decided as stop:
                return wrap_no(stop.decision)
            if is_chordal(_plain_adj(inst)) or inst.k == 0:
                break
    except BudgetExhausted as stop:
        return wrap_no(DecidedNo(str(stop)))

    report.forced = list(inst.forced)
    if is_chordal(_plain_adj(inst)):
        report.outcome = "yes"
        return DecidedYes(solution=list(inst.forced), report=report)
    if inst.k == 0:
        report.outcome = "no"
        return DecidedNo("a hole survived with no budget left", report=report)
    report.outcome = "reduced"
    return Reduced(instance=inst, trace=trace, report=report)
