"""Additive surjections that map singular elements to singular elements.

Over C (with continuous field automorphisms only) every such map has, block by
block, the form ``A -> P A^s Q`` or ``A -> P (A^T)^s Q`` where ``s`` is the
identity or entrywise conjugation, composed with a size-respecting block
permutation.  :func:`factor_singularity_preserver` recovers that form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import RANK_TOL, AlgebraElement, as_shape, block_rng, embed, ginibre
from .preservers import (
    DECOMPOSE_TOL,
    DecompositionError,
    RealLinearMap,
    block_map,
    block_permutation,
    check_permutation,
    is_surjection,
    linearity_type,
    map_distance,
    random_permutation,
)

MAX_POLY_DEGREE = 12


def det_shift_polynomial(T: AlgebraElement, F: AlgebraElement, degree_bound: int) -> np.ndarray:
    """Coefficients (constant term first) of ``p -> det(p F + T)`` on the embedded matrices.

    The determinant is evaluated at ``p = 0, 1, ..., degree_bound`` and the
    Vandermonde system is solved by LU with partial pivoting.
    """
    if T.shape != F.shape:
        raise ValueError("T and F must have the same shape")
    d = int(degree_bound)
    if d < 0:
        raise ValueError("degree_bound must be nonnegative")
    if d > MAX_POLY_DEGREE:
        raise ValueError(f"degree bound {d} > {MAX_POLY_DEGREE}: the Vandermonde solve is too "
                         "ill-conditioned, use a smaller instance")
    Tm, Fm = embed(T), embed(F)
    ps = np.arange(d + 1, dtype=float)
    vals = np.array([np.linalg.det(p * Fm + Tm) for p in ps])
    V = np.vander(ps, d + 1, increasing=True)
    return np.linalg.solve(V, vals)


def poly_degree(coeffs, tol: float = 1e-8) -> int:
    """Index of the last coefficient above ``tol`` times the largest; -1 for zero."""
    c = np.abs(np.asarray(coeffs))
    if c.max() == 0:
        return -1
    return int(np.flatnonzero(c > tol * c.max())[-1])


def nonnegative_integer_roots(coeffs, tol: float = 1e-6) -> list[int]:
    """Nonnegative integers that are (numerical) roots of the polynomial."""
    deg = poly_degree(coeffs)
    if deg <= 0:
        return []
    c = np.asarray(coeffs, dtype=complex)[:deg + 1]
    roots = np.roots(c[::-1])
    out = set()
    for r in roots:
        k = round(r.real)
        if k >= 0 and abs(r - k) <= tol * max(1.0, abs(k)):
            out.add(int(k))
    return sorted(out)


def shift_instance(m1: int, m2: int, seed: int):
    """Random ``T`` in M_{m1+m2} with invertible lower-right block, and ``F = I_{m1} + 0``."""
    rng = block_rng(seed, 0, 50)
    n = m1 + m2
    T = ginibre(rng, n)
    while abs(np.linalg.det(T[m1:, m1:])) < 1e-3:
        T = ginibre(rng, n)
    F = np.zeros((n, n))
    F[:m1, :m1] = np.eye(m1)
    return AlgebraElement((n,), [T]), AlgebraElement((n,), [F])


@dataclass(frozen=True, eq=False)
class BlockFactor:
    """One block of a semilinear factorization: ``A -> P op(A) Q``.

    ``op`` conjugates entrywise unless ``linear`` and transposes when
    ``transpose``.  For blocks of size 1, P holds the multiplier and Q is 1.
    """

    P: np.ndarray
    Q: np.ndarray
    linear: bool = True
    transpose: bool = False

    def __call__(self, A: np.ndarray) -> np.ndarray:
        if self.transpose:
            A = A.T
        if not self.linear:
            A = A.conj()
        return self.P @ A @ self.Q


@dataclass(frozen=True, eq=False)
class SemilinearFactorization:
    shape: object
    pi: tuple[int, ...]
    factors: tuple[BlockFactor, ...]

    def __post_init__(self):
        shape = as_shape(self.shape)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "pi", tuple(int(p) for p in self.pi))
        object.__setattr__(self, "factors", tuple(self.factors))
        check_permutation(shape, self.pi)
        if len(self.factors) != shape.k:
            raise ValueError("one factor per block required")
        for n, f in zip(shape.dims, self.factors):
            if f.P.shape != (n, n) or f.Q.shape != (n, n):
                raise ValueError("factor sizes do not match the blocks")

    def __call__(self, a: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(self.shape, [f(a.blocks[src]) for f, src in zip(self.factors, self.pi)])

    def to_map(self) -> RealLinearMap:
        return RealLinearMap.from_function(self.shape, self)


def random_factorization(shape, seed: int, linear=None, transpose=None) -> SemilinearFactorization:
    """Random invertible factors; ``linear``/``transpose`` fix the flags when given."""
    shape = as_shape(shape)
    rng = block_rng(seed, 0, 51)
    pi = random_permutation(shape, rng)
    fs = []
    for n in shape.dims:
        lin = bool(rng.random() < 0.5) if linear is None else linear
        tr = (bool(rng.random() < 0.5) if transpose is None else transpose) and n >= 2
        P = ginibre(rng, n) + (np.eye(n) if n > 1 else 0)
        Q = ginibre(rng, n) + (np.eye(n) if n > 1 else 0)
        if n == 1:
            Q = np.ones((1, 1), dtype=complex)
        fs.append(BlockFactor(P, Q, lin, tr))
    return SemilinearFactorization(shape, pi, fs)


def _rank1_split(M: np.ndarray, tol: float):
    """``(column, row)`` with ``M = column @ row`` when M has numerical rank one."""
    U, s, Vh = np.linalg.svd(M)
    if s[0] == 0 or (s.size > 1 and s[1] > tol * s[0]):
        return None
    return U[:, :1] * s[0], Vh[:1]


def _same_column_space(X, Y, tol):
    s = np.linalg.svd(np.hstack([X, Y]), compute_uv=False)
    return s[1] <= tol * s[0]


def _same_row_space(X, Y, tol):
    s = np.linalg.svd(np.vstack([X, Y]), compute_uv=False)
    return s[1] <= tol * s[0]


def _factor_block(f, n: int, j: int, tol: float, struct_tol: float) -> BlockFactor:
    linear = linearity_type(f, n, tol, step=2)
    psi = f if linear else (lambda A: f(np.conj(A)))
    if n == 1:
        return BlockFactor(psi(np.ones((1, 1))), np.ones((1, 1), dtype=complex), linear, False)

    def unit(r, c):
        E = np.zeros((n, n), dtype=complex)
        E[r, c] = 1
        return psi(E)

    E11, E12, E21 = unit(0, 0), unit(0, 1), unit(1, 0)
    col = _same_column_space(E11, E12, struct_tol)
    row = _same_row_space(E11, E12, struct_tol)
    if col == row:
        raise DecompositionError(3, f"block {j}: images of E_11 and E_12 share "
                                    f"{'both' if col else 'neither'} column and row space",
                                 {"E11": E11, "E12": E12})
    transpose = row
    # confirm with E_21: shares the other kind of space with E_11
    confirm = _same_column_space(E11, E21, struct_tol) if transpose else _same_row_space(E11, E21, struct_tol)
    if not confirm:
        raise DecompositionError(3, f"block {j}: image of E_21 contradicts the "
                                    f"{'transposed' if transpose else 'direct'} form", E21)
    # phi(E_kl) = p_k r_l, with (k, l) swapped in the transposed form
    g = (lambda r, c: unit(c, r)) if transpose else unit
    split = _rank1_split(g(0, 0), struct_tol)
    if split is None:
        raise DecompositionError(4, f"block {j}: image of E_11 is not rank one", g(0, 0))
    p1, r1 = split
    ps, rs = [], []
    for k in range(n):
        Mk = g(k, 0)
        ps.append(Mk @ r1.conj().T / (r1 @ r1.conj().T))
        Ml = g(0, k)
        rs.append(p1.conj().T @ Ml / (p1.conj().T @ p1))
    P = np.hstack(ps)
    Q = np.vstack(rs)
    for M, name in ((P, "P"), (Q, "Q")):
        s = np.linalg.svd(M, compute_uv=False)
        if s[-1] <= RANK_TOL * s[0] * n:
            raise DecompositionError(4, f"block {j}: recovered {name} is singular", M)
    return BlockFactor(P, Q, linear, transpose)


def factor_singularity_preserver(m: RealLinearMap, tol: float = DECOMPOSE_TOL,
                                 struct_tol: float = 1e-7) -> SemilinearFactorization:
    """Recover ``pi`` and per-block ``(P_i, Q_i, linear, transpose)``.

    Steps: 0 surjectivity, 1 block permutation, 2 linear/conjugate-linear,
    3 transpose flag, 4 factors P and Q, 5 reconstruction.
    """
    shape = m.shape
    if not is_surjection(m):
        raise DecompositionError(0, "map is not surjective")
    pi = block_permutation(m, tol)
    factors = [_factor_block(block_map(m, j, i), shape.dims[j], j, tol, struct_tol)
               for j, i in enumerate(pi)]
    fac = SemilinearFactorization(shape, pi, factors)
    err = map_distance(fac.to_map(), m)
    if err > tol * m.op_norm():
        raise DecompositionError(5, f"reconstruction error {err:.3g} exceeds tolerance", err)
    return fac
