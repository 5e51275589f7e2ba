#!/usr/bin/env python3
"""Regenerate the bundled GKM graph fixtures in ../fixtures."""

import itertools
import json
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def write(name, doc):
    path = os.path.join(OUT, name + ".json")
    with open(path, "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def unit(k, i):
    v = [0] * k
    v[i] = 1
    return v


def cube(n, projection=None, with_connection=False):
    """n-cube; edge i carries projection[i] (coordinate vector by default)."""
    if projection is None:
        projection = [unit(n, i) for i in range(n)]
    k = len(projection[0])
    verts = ["".join(b) for b in itertools.product("01", repeat=n)]

    def edge_id(p, i):
        # the edge in direction i at vertex p, named by its lower endpoint
        low = list(p)
        low[i] = "0"
        return "d%d@%s" % (i + 1, "".join(low))

    edges = []
    for p in verts:
        for i in range(n):
            if p[i] == "0":
                q = p[:i] + "1" + p[i + 1:]
                edges.append({"id": edge_id(p, i), "from": p, "to": q, "weight": projection[i]})
    doc = {"torus_rank": k, "dimension": n, "vertices": verts, "edges": edges}
    if with_connection:
        conn = []
        for e in edges:
            p, q = e["from"], e["to"]
            conn.append({"along": e["id"], "map": [[edge_id(p, j), edge_id(q, j)] for j in range(n)]})
        doc["connection"] = conn
    return doc


def projected_cube(n):
    proj = [unit(n - 1, i) for i in range(n - 1)] + [[1] * (n - 1)]
    return cube(n, proj, with_connection=True)


def octahedron():
    pts = {}
    for i in range(3):
        pts["+%d" % (i + 1)] = unit(3, i)
        pts["-%d" % (i + 1)] = [-x for x in unit(3, i)]
    names = sorted(pts)
    edges = []
    for p, q in itertools.combinations(names, 2):
        if p[1] == q[1]:
            continue  # antipodal
        w = [b - a for a, b in zip(pts[p], pts[q])]
        edges.append({"id": "%s_%s" % (p, q), "from": p, "to": q, "weight": w})
    return {"torus_rank": 3, "dimension": 4, "vertices": names, "edges": edges}


def projective(n):
    """K_{n+1} with weights eps_j - eps_i, eps_0 = 0."""
    def eps(i):
        return [0] * n if i == 0 else unit(n, i - 1)

    verts = [str(i) for i in range(n + 1)]
    edges = []
    for i, j in itertools.combinations(range(n + 1), 2):
        w = [b - a for a, b in zip(eps(i), eps(j))]
        edges.append({"id": "%d-%d" % (i, j), "from": str(i), "to": str(j), "weight": w})
    return {"torus_rank": n, "dimension": n, "vertices": verts, "edges": edges}


def hp2():
    # tangent weights eps_j - eps_i and eps_i + eps_j between quaternionic lines i, j
    verts = ["1", "2", "3"]
    edges = []
    for i, j in itertools.combinations(range(3), 2):
        a, b = unit(3, i), unit(3, j)
        edges.append({"id": "%d%d-" % (i + 1, j + 1), "from": verts[i], "to": verts[j],
                      "weight": [y - x for x, y in zip(a, b)]})
        edges.append({"id": "%d%d+" % (i + 1, j + 1), "from": verts[i], "to": verts[j],
                      "weight": [x + y for x, y in zip(a, b)]})
    return {"torus_rank": 3, "dimension": 4, "vertices": verts, "edges": edges}


def main():
    write("sphere", {"torus_rank": 1, "dimension": 1, "vertices": ["N", "S"],
                     "edges": [{"id": "e", "from": "N", "to": "S", "weight": [1]}]})
    write("octahedron", octahedron())
    write("hp2-shell", hp2())
    for n in range(2, 6):
        write("cube%d" % n, cube(n))
    for n in range(3, 6):
        write("cube%d-projected" % n, projected_cube(n))
    for n in range(2, 5):
        write("cp%d" % n, projective(n))
    bad = {"torus_rank": 1, "dimension": 1, "vertices": ["N", "S"],
           "edges": [{"id": "e", "from": "N", "to": "S", "weight": [1]},
                     {"id": "e", "from": "S", "to": "N", "weight": [1]}]}
    with open(os.path.join(OUT, "invalid", "bad-twin.json"), "w") as f:
        json.dump(bad, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
