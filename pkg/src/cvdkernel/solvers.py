"""Solution providers: exact branching, greedy hole hitting, blockers.

A *solution* for a plain graph is a vertex set whose removal leaves the graph
chordal.  A *v-blocker* is a solution that avoids v; blockers are built by
cloning v into a clique of true twins and normalizing whatever the provider
returns on that padded graph.  When the padded graph admits no small solution
the construction instead reports that v is unavoidable, which is only a sound
conclusion for providers with an optimality guarantee; callers without one
must treat the signal as advisory (the pipeline swaps in a direct avoid-one
greedy solution in that case).
"""

from dataclasses import dataclass

from .chordal import find_hole, induced, is_chordal


def exact_cvd(adj, k):
    """Minimum deletion set of size <= k leaving a chordal graph, or None.

    Branches on the vertices of some hole, depth-capped at k.  Among minimum
    solutions the lexicographically smallest sorted tuple is returned, so the
    result is unique and deterministic.
    """
    best = None
    seen = set()

    def rec(cur, removed, budget):
        nonlocal best
        key = frozenset(removed)
        if key in seen:
            return
        seen.add(key)
        hole = find_hole(cur)
        if hole is None:
            cand = sorted(removed)
            if best is None or (len(cand), cand) < (len(best), best):
                best = cand
            return
        if budget == 0:
            return
        for v in hole:
            rec(induced(cur, set(cur) - {v}), removed + [v], budget - 1)

    rec(adj, [], max(k, 0))
    return best


def exact_min_cvd(adj):
    """Smallest solution regardless of budget (exponential; desk scale only)."""
    for k in range(len(adj) + 1):
        got = exact_cvd(adj, k)
        if got is not None:
            return got
    return sorted(adj)  # unreachable: deleting everything is always enough


def greedy_solution(adj, avoid=None):
    """Hole-hitting heuristic: delete the max-degree vertex of some hole.

    Ties go to the smallest id; `avoid` is never deleted (every hole has at
    least four vertices, so a different one is always available).
    """
    cur = {v: set(nb) for v, nb in adj.items()}
    out = []
    while True:
        hole = find_hole(cur)
        if hole is None:
            return sorted(out)
        pick = None
        for v in sorted(hole):
            if v == avoid:
                continue
            if pick is None or len(cur[v]) > len(cur[pick]):
                pick = v
        out.append(pick)
        cur = induced(cur, set(cur) - {pick})


class GreedyProvider:
    name = "greedy"
    exact = False

    def __call__(self, adj):
        return greedy_solution(adj)


class ExactProvider:
    """Minimum solutions via branching; only usable on small graphs."""
    name = "exact"
    exact = True

    def __call__(self, adj):
        return exact_min_cvd(adj)


@dataclass
class BlockerResult:
    forced: int | None = None
    blocker: list | None = None


def v_blocker(adj, v, provider, budget):
    """Blocker for v, or a report that v is in every small solution.

    Pads the graph with `budget` true-twin clones of v (forming a clique with
    v), runs the provider, and strips the twin clique from the answer.  Any
    answer larger than `budget` means the padded graph had no small solution
    avoiding the twins, which with an exact provider certifies that every
    solution of size <= budget for the original graph contains v.
    """
    if v not in adj:
        raise ValueError("no vertex %d" % v)
    if budget < 1:
        raise ValueError("blocker budget must be at least 1")
    fresh = max(adj) + 1
    clones = list(range(fresh, fresh + budget))
    padded = {u: set(nb) for u, nb in adj.items()}
    twins = [v] + clones
    for c in clones:
        padded[c] = set(adj[v])
        for w in adj[v]:
            padded[w].add(c)
    for i, a in enumerate(twins):
        for b in twins[i + 1:]:
            padded[a].add(b)
            padded[b].add(a)

    raw = list(provider(padded))
    if len(raw) > budget:
        return BlockerResult(forced=v)
    # fewer picks than twins, so one twin survives and dropping the twin
    # clique from the answer keeps it a solution of the padded graph
    blocker = sorted(set(raw) - set(twins))
    assert is_chordal(induced(adj, set(adj) - set(blocker)))
    return BlockerResult(blocker=blocker)


@dataclass
class RedundantResult:
    forced: int | None = None
    solution: list | None = None


def redundant_solution(adj, d0, provider, budget, blocker_fn=None):
    """Grow a solution d0 so that dropping any single vertex keeps it one.

    The union of d0 with a blocker for each of its members does the job: a
    d0-member's loss is covered by its blocker, and a blocker member's loss
    is covered by d0 itself.  Blocker construction may instead surface a
    vertex no small solution avoids; that is propagated to the caller.
    `blocker_fn(v)` overrides how blockers are produced (the pipeline injects
    a fallback-aware version).
    """
    grown = set(d0)
    for v in sorted(d0):
        if blocker_fn is not None:
            res = blocker_fn(v)
        else:
            res = v_blocker(adj, v, provider, budget)
        if res.forced is not None:
            return RedundantResult(forced=res.forced)
        grown.update(res.blocker)
    return RedundantResult(solution=sorted(grown))


def is_redundant_solution(adj, d):
    """Check that d stays a solution after removing any one member."""
    d = set(d)
    if not is_chordal(induced(adj, set(adj) - d)):
        return False
    for u in sorted(d):
        if not is_chordal(induced(adj, set(adj) - (d - {u}))):
            return False
    return True
