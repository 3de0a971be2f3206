"""Finite samples of the orthograph of mutual strong BJ orthogonality.

Vertices are projective classes ``[a] = C a`` of nonzero elements, stored by a
canonical representative; edges join mutually strongly orthogonal classes.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import bj
from .core import AlgebraElement, AlgebraShape, as_shape, block_rng, ginibre, haar_unitary, op_norm
from .jsonio import dumps, element_to_json


def projective_normal(a: AlgebraElement, tol: float = 1e-12) -> AlgebraElement:
    """Unit-norm representative whose first nonzero entry is real positive."""
    nrm = op_norm(a)
    if nrm == 0:
        raise ValueError("zero has no projective class")
    a = a * (1 / nrm)
    flat = np.concatenate([b.reshape(-1) for b in a.blocks])
    z = flat[np.flatnonzero(np.abs(flat) > tol)[0]]
    return a * (abs(z) / z)


@dataclass
class OrthographSample:
    shape: AlgebraShape
    vertices: list[AlgebraElement]
    edges: list[tuple[int, int]]
    seed: int
    tol: float
    labels: list[str] = field(default_factory=list)

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in self.vertices]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def degrees(self) -> list[int]:
        return [len(s) for s in self.adjacency()]

    def basename(self) -> str:
        return f"orthograph_{self.shape}_seed{self.seed}"


def structured_vertices(shape: AlgebraShape):
    """Matrix units, single-block identities and identities with one vacant block."""
    out = []
    for i, n in enumerate(shape.dims):
        for r, c in itertools.product(range(n), repeat=2):
            E = np.zeros((n, n))
            E[r, c] = 1
            out.append((f"E{i}_{r}{c}", AlgebraElement.from_block(shape, i, E)))
    if shape.k > 1:
        for i, n in enumerate(shape.dims):
            out.append((f"I{i}", AlgebraElement.from_block(shape, i, np.eye(n))))
        for i in range(shape.k):
            bs = [np.eye(n) * (l != i) for l, n in enumerate(shape.dims)]
            out.append((f"I-I{i}", AlgebraElement(shape, bs)))
    return out


def _random_vertices(shape: AlgebraShape, n: int, seed: int):
    out = []
    for t in range(n):
        rng = block_rng(seed, t, 60)
        kind = t % 3
        if kind == 0:
            a = AlgebraElement(shape, [ginibre(rng, m) for m in shape.dims])
        else:
            # rank-deficient samples, so the graph has edges to show
            bs = []
            for m in shape.dims:
                U, V = haar_unitary(rng, m), haar_unitary(rng, m)
                d = rng.uniform(0.1, 1.0, m) * (rng.random(m) < 0.5)
                bs.append(U @ np.diag(d) @ V.conj().T)
            a = AlgebraElement(shape, bs)
            if op_norm(a) == 0:
                a = AlgebraElement(shape, [ginibre(rng, m) for m in shape.dims])
        out.append((f"r{t}", a))
    return out


def orthograph_on(shape, elements, labels=None, seed: int = 0, tol: float = bj.BJ_TOL) -> OrthographSample:
    """Orthograph on the given nonzero elements (normalised projectively)."""
    shape = as_shape(shape)
    verts = [projective_normal(a) for a in elements]
    labels = list(labels) if labels is not None else [str(i) for i in range(len(verts))]
    edges = [(i, j) for i, j in itertools.combinations(range(len(verts)), 2)
             if bj.mutual_strong_bj(verts[i], verts[j], tol)]
    return OrthographSample(shape, verts, edges, seed, tol, labels)


def build_orthograph(shape, n_samples: int, seed: int, structured: bool = True,
                     tol: float = bj.BJ_TOL) -> OrthographSample:
    """Sampled orthograph: ``n_samples`` random vertices plus structured ones when requested."""
    shape = as_shape(shape)
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    items = structured_vertices(shape) if structured else []
    items += _random_vertices(shape, n_samples, seed)
    return orthograph_on(shape, [a for _, a in items], [l for l, _ in items], seed, tol)


def components(g: OrthographSample) -> list[list[int]]:
    """Connected components (union-find), each sorted, ordered by smallest vertex."""
    parent = list(range(len(g.vertices)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in g.edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for v in range(len(parent)):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values(), key=lambda c: c[0])


def sampled_diameters(g: OrthographSample) -> list[int]:
    """Diameter of each component of the sampled graph (not of the true orthograph)."""
    adj = g.adjacency()
    out = []
    for comp in components(g):
        best = 0
        for s in comp:
            dist = {s: 0}
            q = deque([s])
            while q:
                x = q.popleft()
                for y in adj[x]:
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        q.append(y)
            best = max(best, max(dist.values()))
        out.append(best)
    return out


def export_dot(g: OrthographSample) -> str:
    if not g.vertices and not g.edges:
        return "graph G { }\n"
    lines = ["graph G {", f'  label="sampled orthograph, shape {g.shape}, seed {g.seed}";']
    for i, lab in enumerate(g.labels):
        lines.append(f'  {i} [label="{lab}"];')
    for i, j in g.edges:
        lines.append(f"  {i} -- {j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_json(g: OrthographSample) -> str:
    comps = components(g)
    return dumps({
        "shape": list(g.shape.dims),
        "seed": g.seed,
        "tol": g.tol,
        "vertices": [{"label": l, "element": element_to_json(v)} for l, v in zip(g.labels, g.vertices)],
        "edges": [list(e) for e in g.edges],
        "components": comps,
        "sampled_diameters": sampled_diameters(g),
    })
