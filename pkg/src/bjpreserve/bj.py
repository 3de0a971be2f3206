"""Strong and mutual strong Birkhoff-James orthogonality.

``a`` is strongly BJ orthogonal to ``b`` when ``|a + b c| >= |a|`` for every
``c`` in the algebra.  Two independent deciders are provided:

* :func:`strong_bj` evaluates ``min_c |a + b c|`` in closed form
  (:func:`dist_to_right_ideal`) and compares it with ``|a|``;
* :func:`strong_bj_witness` searches for a unit vector ``x`` with
  ``|A_i x| = |a|`` and ``B_i^* A_i x = 0`` in some block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .core import (
    CLUSTER_TOL,
    RANK_TOL,
    AlgebraElement,
    ShapeMismatch,
    as_shape,
    block_norms,
    block_rng,
    ginibre,
    haar_unitary,
    perp_unit,
    spectral_norm,
)

BJ_TOL = 1e-8


@dataclass(frozen=True)
class OrthWitness:
    block: int
    x: np.ndarray
    norm_residual: float  # | |A_i x| - |a| |
    kernel_residual: float  # |B_i^* A_i x|

    def to_dict(self):
        return {
            "block": self.block,
            "x": [[float(z.real), float(z.imag)] for z in self.x],
            "norm_residual": float(self.norm_residual),
            "kernel_residual": float(self.kernel_residual),
        }


def _same_shape(a: AlgebraElement, b: AlgebraElement):
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes {a.shape} and {b.shape} differ")


def _range_residual(A: np.ndarray, B: np.ndarray) -> float:
    """``|(I - P) A|`` with P the orthogonal projection onto the column space of B."""
    n = B.shape[0]
    U, s, _ = np.linalg.svd(B)
    r = 0 if s[0] == 0 else int(np.count_nonzero(s > RANK_TOL * s[0] * n))
    if r == n:
        return 0.0
    if r == 0:
        return spectral_norm(A)
    Ur = U[:, :r]
    return spectral_norm(A - Ur @ (Ur.conj().T @ A))


def dist_to_right_ideal(a: AlgebraElement, b: AlgebraElement) -> float:
    """``min_c |a + b c|``.

    Blockwise the minimum is ``|(I - P_i) A_i|`` and it is attained at
    ``C_i = -B_i^+ A_i``; the algebra norm is the maximum over blocks.
    """
    _same_shape(a, b)
    return max(_range_residual(A, B) for A, B in zip(a.blocks, b.blocks))


def strong_bj(a: AlgebraElement, b: AlgebraElement, tol: float = BJ_TOL) -> bool:
    _same_shape(a, b)
    na = float(block_norms(a).max())
    if na == 0:
        return True
    return dist_to_right_ideal(a, b) >= na * (1 - tol)


def strong_bj_witness(a: AlgebraElement, b: AlgebraElement, tol: float = BJ_TOL,
                      cluster_tol: float = CLUSTER_TOL) -> OrthWitness | None:
    """Unit vector certifying ``a`` strongly orthogonal to ``b``, or None.

    Only blocks where ``a`` attains its norm can host the witness; inside such
    a block the candidates are the norm-attaining right singular vectors, and
    the witness is a kernel vector of ``B_i^* A_i`` restricted to them.
    """
    _same_shape(a, b)
    norms = block_norms(a)
    na = float(norms.max())
    if na == 0:
        raise ValueError("witness undefined for zero")
    nb = float(block_norms(b).max())
    best = None
    for i in np.flatnonzero(norms >= na * (1 - cluster_tol)):
        A, B = a.blocks[i], b.blocks[i]
        _, s, Vh = np.linalg.svd(A)
        r = int(np.count_nonzero(s >= s[0] * (1 - cluster_tol)))
        X = Vh[:r].conj().T
        M = B.conj().T @ (A @ X)
        # smallest right singular vector of the restricted map
        _, _, Wh = np.linalg.svd(M)
        x = X @ Wh[-1].conj()
        x = x / np.linalg.norm(x)
        r1 = abs(float(np.linalg.norm(A @ x)) - na)
        r2 = float(np.linalg.norm(B.conj().T @ (A @ x)))
        if r1 <= tol * na and r2 <= tol * na * max(nb, 1e-300):
            w = OrthWitness(int(i), x, r1, r2)
            if best is None or r2 < best.kernel_residual:
                best = w
    return best


def mutual_strong_bj(a: AlgebraElement, b: AlgebraElement, tol: float = BJ_TOL) -> bool:
    return strong_bj(a, b, tol) and strong_bj(b, a, tol)


def mutual_by_witness(a: AlgebraElement, b: AlgebraElement, tol: float = BJ_TOL) -> bool:
    """Mutual orthogonality decided with the witness criterion only."""
    def one(x, y):
        if float(block_norms(x).max()) == 0:
            return True
        return strong_bj_witness(x, y, tol) is not None
    return one(a, b) and one(b, a)


def bj_numeric(a: AlgebraElement, b: AlgebraElement, grid: int = 41, radius: float | None = None):
    """Probe of plain BJ orthogonality: approximate ``min_lambda |a + lambda b|``.

    Coarse grid over a square in the complex plane followed by Nelder-Mead.
    Returns ``(value, lambda)``; the value is an upper bound of the true minimum.
    """
    _same_shape(a, b)
    na, nb = float(block_norms(a).max()), float(block_norms(b).max())
    if nb == 0:
        return na, 0j
    R = radius if radius is not None else 2 * na / nb + 1

    def f(p):
        lam = p[0] + 1j * p[1]
        return float(max(np.linalg.norm(A + lam * B, 2) for A, B in zip(a.blocks, b.blocks)))

    ts = np.linspace(-R, R, grid)
    best = min(((f((x, y)), x, y) for x in ts for y in ts))
    res = optimize.minimize(f, x0=[best[1], best[2]], method="Nelder-Mead",
                            options={"xatol": 1e-12, "fatol": 1e-14})
    if res.fun < best[0]:
        return float(res.fun), complex(res.x[0], res.x[1])
    return best[0], complex(best[1], best[2])


# pair generators

def gen_mutual_pair(shape, seed: int):
    """``a = U D1 V^*``, ``b = U D2 V^*`` with disjointly supported diagonals.

    Every block of ``b^* a`` vanishes, so the pair is mutually orthogonal.
    A block of size 1 goes entirely to one side, leaving the other zero there.
    """
    shape = as_shape(shape)
    ab, bb = [], []
    for i, n in enumerate(shape.dims):
        rng = block_rng(seed, i, 10)
        U, V = haar_unitary(rng, n), haar_unitary(rng, n)
        perm = rng.permutation(n)
        cut = int(rng.integers(0, n + 1)) if n == 1 else int(rng.integers(1, n))
        d1, d2 = np.zeros(n), np.zeros(n)
        d1[perm[:cut]] = rng.uniform(0.1, 1.0, cut)
        d2[perm[cut:]] = rng.uniform(0.1, 1.0, n - cut)
        ab.append(U @ np.diag(d1) @ V.conj().T)
        bb.append(U @ np.diag(d2) @ V.conj().T)
    return AlgebraElement(shape, ab), AlgebraElement(shape, bb)


def gen_peaked_pair(shape, seed: int, low: float = 0.85):
    """Mutually orthogonal pair whose ranges overlap.

    Both elements share singular frames ``U, V`` per block.  ``a`` has its
    unique peak (value 1) at position ``p`` where ``b`` vanishes, ``b`` peaks
    at ``q != p`` where ``a`` vanishes; every other diagonal entry is drawn
    from ``[0, low]``.  The peak directions are the only norm-attaining ones,
    so each side has a witness although ``b^* a != 0`` in general.
    """
    shape = as_shape(shape)
    rng = block_rng(seed, 0, 11)
    slots = [(i, j) for i, n in enumerate(shape.dims) for j in range(n)]
    if len(slots) < 2:
        raise ValueError("need at least two diagonal slots")
    p, q = rng.choice(len(slots), size=2, replace=False)
    p, q = slots[p], slots[q]
    ab, bb = [], []
    for i, n in enumerate(shape.dims):
        U, V = haar_unitary(rng, n), haar_unitary(rng, n)
        d1 = rng.uniform(0, low, n)
        d2 = rng.uniform(0, low, n)
        for (bi, j), d, other in ((p, d1, d2), (q, d2, d1)):
            if bi == i:
                d[j] = 1.0
                other[j] = 0.0
        ab.append(U @ np.diag(d1) @ V.conj().T)
        bb.append(U @ np.diag(d2) @ V.conj().T)
    return AlgebraElement(shape, ab), AlgebraElement(shape, bb)


def gen_rank_one_pair(shape, seed: int):
    """Rank-one ``x (x) y`` and ``x' (x) z`` with ``x' perp x`` (so ``a^* b = 0 = b^* a``).

    On a block of size 1 the partner goes to another block instead.
    """
    shape = as_shape(shape)
    rng = block_rng(seed, 0, 12)
    big = [i for i, n in enumerate(shape.dims) if n >= 2]
    if big and (shape.k == 1 or rng.random() < 0.7):
        i = int(rng.choice(big))
        n = shape.dims[i]
        x, y, z = ginibre(rng, n, 1)[:, 0], ginibre(rng, n, 1)[:, 0], ginibre(rng, n, 1)[:, 0]
        if n == 2:
            xp = perp_unit(x) * np.linalg.norm(ginibre(rng, 2, 1))
        else:
            w = ginibre(rng, n, 1)[:, 0]
            u = x / np.linalg.norm(x)
            xp = w - u * np.vdot(u, w)
        A = np.outer(x, y.conj())
        B = np.outer(xp, z.conj())
        return AlgebraElement.from_block(shape, i, A), AlgebraElement.from_block(shape, i, B)
    if shape.k < 2:
        raise ValueError("shape (1) has no nonzero orthogonal rank-one pair")
    i, j = rng.choice(shape.k, size=2, replace=False)
    ni, nj = shape.dims[i], shape.dims[j]
    A = np.outer(ginibre(rng, ni, 1)[:, 0], ginibre(rng, ni, 1)[:, 0].conj())
    B = np.outer(ginibre(rng, nj, 1)[:, 0], ginibre(rng, nj, 1)[:, 0].conj())
    return AlgebraElement.from_block(shape, int(i), A), AlgebraElement.from_block(shape, int(j), B)


def gen_slot_pair(shape, seed: int):
    """Equal-norm pattern with a vacant slot: ``(X_1, .., 0_i, .., X_k)`` vs ``(.., 0_j, ..)``.

    Every block of both elements has norm 1 except the vacant ones, so each
    side attains its norm on the block the other leaves empty.
    """
    shape = as_shape(shape)
    if shape.k < 2:
        raise ValueError("needs at least two blocks")
    rng = block_rng(seed, 0, 13)
    i, j = rng.choice(shape.k, size=2, replace=False)
    shared = rng.random() < 0.5
    ab, bb = [], []
    for l, n in enumerate(shape.dims):
        W = haar_unitary(rng, n) * np.exp(2j * np.pi * rng.random())
        W2 = W if shared else haar_unitary(rng, n)
        ab.append(np.zeros((n, n)) if l == i else W)
        bb.append(np.zeros((n, n)) if l == j else W2)
    return AlgebraElement(shape, ab), AlgebraElement(shape, bb)


def gen_projection_pair(shape, seed: int):
    """``(x (x) x + S, x' (x) x' + S)`` where ``S`` fills the other blocks with a
    common contraction.

    The rank-one parts are unit projections on one block of size >= 2; both
    elements attain their norm there, on ``x`` and ``x'`` respectively.
    """
    shape = as_shape(shape)
    big = [i for i, n in enumerate(shape.dims) if n >= 2]
    if not big:
        raise ValueError("needs a block of size >= 2")
    rng = block_rng(seed, 0, 14)
    i = int(rng.choice(big))
    n = shape.dims[i]
    x = ginibre(rng, n, 1)[:, 0]
    x /= np.linalg.norm(x)
    xp = perp_unit(x)
    if n > 2:
        w = ginibre(rng, n, 1)[:, 0]
        w = w - x * np.vdot(x, w)
        xp = w / np.linalg.norm(w)
    ab, bb = [], []
    for l, m in enumerate(shape.dims):
        if l == i:
            ab.append(np.outer(x, x.conj()))
            bb.append(np.outer(xp, xp.conj()))
        else:
            S = haar_unitary(rng, m) * rng.uniform(0.0, 1.0) if rng.random() < 0.5 else haar_unitary(rng, m)
            ab.append(S)
            bb.append(S)
    return AlgebraElement(shape, ab), AlgebraElement(shape, bb)
