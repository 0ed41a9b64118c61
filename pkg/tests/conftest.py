"""Shared helpers and small independent oracles.

The oracles here deliberately use different algorithms than the
package: subset sums as a bitset, satisfiability by truth table,
hitting sets by subset enumeration, DAG counting by filtering all
digraphs. Tests compare the package against these, never against
itself.
"""

import itertools

from socialpolls.graphkit import graph_of, heuristic_td, make_nice


def nice_td_of(inst):
    return make_nice(heuristic_td(graph_of(inst)))


def equal_split_possible(numbers):
    """Can the multiset split into two parts of equal sum? Bit k of
    `sums` is set when some subset sums to k."""
    total = sum(numbers)
    if total % 2:
        return False
    sums = 1
    for v in numbers:
        sums |= sums << v
    return bool((sums >> (total // 2)) & 1)


def satisfying_assignments(n_vars, clauses):
    """All satisfying assignments of a DIMACS-style clause list, as
    boolean tuples indexed by variable - 1."""
    out = []
    for bits in itertools.product((False, True), repeat=n_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in cl) for cl in clauses):
            out.append(bits)
    return out


def cnf_satisfiable(n_vars, clauses):
    for bits in itertools.product((False, True), repeat=n_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in cl) for cl in clauses):
            return True
    return False


def hitting_sets(n_elements, sets, budget, min_hits=1):
    """All element subsets of size <= budget meeting every set at least
    `min_hits` times, by plain enumeration."""
    found = []
    for r in range(budget + 1):
        for combo in itertools.combinations(range(n_elements), r):
            chosen = set(combo)
            if all(len(chosen & set(s)) >= min_hits for s in sets):
                found.append(chosen)
    return found


def brute_count_dags(t):
    """Count labeled DAGs on t vertices by checking all digraphs."""
    pairs = [(u, v) for u in range(t) for v in range(t) if u != v]
    count = 0
    for picks in itertools.product((False, True), repeat=len(pairs)):
        arcs = [p for p, take in zip(pairs, picks) if take]
        succ = [[] for _ in range(t)]
        indeg = [0] * t
        for u, v in arcs:
            succ[u].append(v)
            indeg[v] += 1
        ready = [x for x in range(t) if indeg[x] == 0]
        seen = 0
        while ready:
            x = ready.pop()
            seen += 1
            for y in succ[x]:
                indeg[y] -= 1
                if indeg[y] == 0:
                    ready.append(y)
        if seen == t:
            count += 1
    return count


def brute_acyclic_orientations(g):
    """All acyclic orientations of a graph by filtering every edge
    direction assignment."""
    edges = sorted(g.edges)
    out = set()
    for picks in itertools.product((0, 1), repeat=len(edges)):
        arcs = tuple(
            (u, v) if not flip else (v, u)
            for (u, v), flip in zip(edges, picks)
        )
        succ = [[] for _ in range(g.n)]
        indeg = [0] * g.n
        for u, v in arcs:
            succ[u].append(v)
            indeg[v] += 1
        ready = [x for x in range(g.n) if indeg[x] == 0]
        seen = 0
        while ready:
            x = ready.pop()
            seen += 1
            for y in succ[x]:
                indeg[y] -= 1
                if indeg[y] == 0:
                    ready.append(y)
        if seen == g.n:
            out.add(frozenset(arcs))
    return out
