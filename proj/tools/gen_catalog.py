#!/usr/bin/env python3
"""Regenerate the face-lattice catalog under data/catalog/.

Polygons and the Lobell polyhedra R(n) are built from explicit vertex
cycles; the dodecahedron is R(5). The 120-cell is the dual of the 600-cell,
whose 120 vertices are the standard {3,3,5} coordinates: the 600-cell
simplices of each dimension are the cliques of its edge graph, and reversing
their inclusion order yields the 120-cell lattice.

Usage: gen_catalog.py [OUTDIR]
"""
import itertools
import math
import os
import sys

import numpy as np


def write_lattice(path, name, dim, faces):
    """faces[d] is a list of covered (d-1)-face id lists, for d = 1..dim."""
    fvec = [None] * (dim + 1)
    fvec[0] = 1 + max(v for f in faces[1] for v in f)
    for d in range(1, dim + 1):
        fvec[d] = len(faces[d])
    with open(path, "w") as out:
        out.write(f"lattice {name}\n")
        out.write(f"dim {dim}\n")
        out.write("fvector " + " ".join(str(x) for x in fvec[:dim]) + "\n")
        for d in range(1, dim + 1):
            for fid, subs in enumerate(faces[d]):
                for s in sorted(subs):
                    out.write(f"{d} {fid} {s}\n")


def polygon(n):
    edges = [[i, (i + 1) % n] for i in range(n)]
    return {1: edges, 2: [list(range(n))]}


def from_cycles(nverts, cycles):
    """3-polytope from vertex cycles of its 2-faces."""
    edge_ids = {}
    edges = []
    faces2 = []
    for cyc in cycles:
        fe = []
        for i in range(len(cyc)):
            e = tuple(sorted((cyc[i], cyc[(i + 1) % len(cyc)])))
            if e not in edge_ids:
                edge_ids[e] = len(edges)
                edges.append(list(e))
            fe.append(edge_ids[e])
        faces2.append(fe)
    assert max(max(e) for e in edges) == nverts - 1
    return {1: edges, 2: faces2, 3: [list(range(len(cycles)))]}


def lobell(n):
    a = lambda i: i % n
    b = lambda i: n + i % n
    c = lambda i: 2 * n + i % n
    d = lambda i: 3 * n + i % n
    cycles = [[a(i) for i in range(n)], [b(i) for i in range(n)]]
    for i in range(n):
        cycles.append([a(i), a(i + 1), c(i + 1), d(i), c(i)])
    for i in range(n):
        cycles.append([b(i), b(i + 1), d(i + 1), c(i + 1), d(i)])
    return from_cycles(4 * n, cycles)


def cell120():
    phi = (1 + math.sqrt(5)) / 2
    pts = set()

    def add(p):
        pts.add(tuple(round(x, 9) + 0.0 for x in p))

    for i in range(4):
        for s in (1, -1):
            p = [0.0] * 4
            p[i] = s
            add(p)
    for signs in itertools.product((0.5, -0.5), repeat=4):
        add(signs)
    base = (phi / 2, 0.5, 1 / (2 * phi), 0.0)
    even = [p for p in itertools.permutations(range(4))
            if sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j]) % 2 == 0]
    for perm in even:
        for signs in itertools.product((1, -1), repeat=3):
            v = [base[0] * signs[0], base[1] * signs[1], base[2] * signs[2], 0.0]
            q = [0.0] * 4
            for k in range(4):
                q[perm[k]] = v[k]
            add(q)
    verts = sorted(pts)
    assert len(verts) == 120, len(verts)
    P = np.array(verts)
    dist = np.linalg.norm(P[:, None, :] - P[None, :, :], axis=2)
    adj = np.abs(dist - 1 / phi) < 1e-6
    nbrs = [set(np.nonzero(adj[i])[0].tolist()) for i in range(120)]
    e600 = sorted((i, j) for i in range(120) for j in nbrs[i] if i < j)
    t600 = sorted((i, j, k) for (i, j) in e600 for k in nbrs[i] & nbrs[j] if k > j)
    c600 = sorted((i, j, k, l) for (i, j, k) in t600
                  for l in nbrs[i] & nbrs[j] & nbrs[k] if l > k)
    assert (len(e600), len(t600), len(c600)) == (720, 1200, 600)
    tri_id = {t: n for n, t in enumerate(t600)}
    edge_id = {e: n for n, e in enumerate(e600)}
    # 120-cell: vertex <-> tetrahedron, edge <-> triangle, pentagon <-> 600-edge,
    # dodecahedron <-> 600-vertex.
    edges = [[] for _ in t600]
    for ci, tet in enumerate(c600):
        for tri in itertools.combinations(tet, 3):
            edges[tri_id[tri]].append(ci)
    pent = [[] for _ in e600]
    for ti, tri in enumerate(t600):
        for e in itertools.combinations(tri, 2):
            pent[edge_id[e]].append(ti)
    dodec = [[] for _ in range(120)]
    for ei, (i, j) in enumerate(e600):
        dodec[i].append(ei)
        dodec[j].append(ei)
    assert all(len(x) == 2 for x in edges)
    assert all(len(x) == 5 for x in pent)
    assert all(len(x) == 12 for x in dodec)
    return {1: edges, 2: pent, 3: dodec, 4: [list(range(120))]}


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(os.path.abspath(__file__)), "..", "data", "catalog")
    os.makedirs(out, exist_ok=True)
    write_lattice(os.path.join(out, "pentagon.lattice"), "pentagon", 2, polygon(5))
    write_lattice(os.path.join(out, "hexagon.lattice"), "hexagon", 2, polygon(6))
    write_lattice(os.path.join(out, "dodecahedron.lattice"), "dodecahedron", 3, lobell(5))
    write_lattice(os.path.join(out, "lobell6.lattice"), "lobell6", 3, lobell(6))
    write_lattice(os.path.join(out, "120cell.lattice"), "120cell", 4, cell120())


if __name__ == "__main__":
    main()
