"""Independent brute-force oracles the library is checked against.

Deliberately different algorithms from the implementation: closeness via
a Floyd-Warshall distance matrix instead of BFS, visibility as a direct
per-statement scan. Keep these free of igpipe graph/metric imports.
"""

import numpy as np

INF = 10**9


def floyd_warshall_closeness(n_vertices: int, edges: set[tuple[int, int]]):
    """Component-corrected closeness for an undirected graph on
    vertices 0..n-1, computed from an all-pairs distance matrix."""
    d = np.full((n_vertices, n_vertices), INF, dtype=np.int64)
    np.fill_diagonal(d, 0)
    for u, v in edges:
        d[u, v] = 1
        d[v, u] = 1
    for k in range(n_vertices):
        d = np.minimum(d, d[:, k : k + 1] + d[k : k + 1, :])
    out = []
    for v in range(n_vertices):
        reachable = d[v] < INF
        n_v = int(reachable.sum())
        total = int(d[v][reachable].sum())
        if n_v <= 1 or total == 0 or n_vertices <= 1:
            out.append(0.0)
        else:
            out.append(((n_v - 1) / total) * ((n_v - 1) / (n_vertices - 1)))
    return out


def brute_force_visibility(entity, per_statement_classes, n_statements):
    """per_statement_classes: list of dicts entity -> set of classes the
    entity occupies in that statement. Best class per statement wins."""
    total = 0.0
    for classes in per_statement_classes:
        if entity in classes and classes[entity]:
            total += max(classes[entity])
    return total / n_statements


# hand-derived mention classes for the bundled six-statement mini-corpus
MINI_STATEMENT_CLASSES = [
    {"State Party": {6}, "request": {5}, "Committee": {4}},          # s1
    {"Committee": {6}, "report": {5}, "State Party": {2},
     "General Assembly": {4}},                                       # s2
    {"State Party": {6}, "report": {5}, "fund": {2}},                # s3
    {},                                                              # s4
    {"Secretariat": {6}},                                            # s5
    {"fund": {6}},                                                   # s6
]

MINI_N_STATEMENTS = 6

MINI_ENTITIES = [
    "Committee",
    "General Assembly",
    "Secretariat",
    "State Party",
    "fund",
    "report",
    "request",
]

# co-occurrence pairs implied by the statement membership above
MINI_TWO_SECTION_EDGES = {
    ("State Party", "request"),
    ("State Party", "Committee"),
    ("request", "Committee"),
    ("Committee", "report"),
    ("Committee", "General Assembly"),
    ("report", "General Assembly"),
    ("report", "State Party"),
    ("General Assembly", "State Party"),
    ("State Party", "fund"),
    ("report", "fund"),
}


def mini_visibility():
    return {
        e: brute_force_visibility(e, MINI_STATEMENT_CLASSES, MINI_N_STATEMENTS)
        for e in MINI_ENTITIES
    }


def mini_closeness():
    index = {e: i for i, e in enumerate(MINI_ENTITIES)}
    edges = {(index[u], index[v]) for u, v in MINI_TWO_SECTION_EDGES}
    values = floyd_warshall_closeness(len(MINI_ENTITIES), edges)
    return {e: values[index[e]] for e in MINI_ENTITIES}
