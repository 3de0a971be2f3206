"""Additive maps on the algebra and preservers of mutual strong BJ orthogonality.

Additive continuous maps on a finite-dimensional complex space are exactly the
real-linear ones, so a map is stored as a real ``D x D`` matrix acting on the
realified coordinates of :meth:`AlgebraElement.realify`.

The canonical preservers are ``a -> gamma * u * pi(a)^dagger * v``.  With the
conventions used here the output block ``j`` is::

    gamma * u_j * op_j(A_{pi[j]}) * v_j

where ``op_j`` is the identity when ``j`` is in ``J`` and entrywise
conjugation otherwise.  Block indices are zero-based.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import bj
from .core import (
    RANK_TOL,
    AlgebraElement,
    AlgebraShape,
    ShapeMismatch,
    as_shape,
    block_norms,
    block_rng,
    haar_unitary,
    is_singular,
    is_unitary,
    matrix_unit,
    op_norm,
    rank,
    rank_one,
    ginibre,
)

DECOMPOSE_TOL = 1e-8
# threshold for structural checks (projections, unitarity) inside decompose
STRUCT_TOL = 1e-7
EXCEPTIONAL_SHAPES = {(1,), (1, 1), (2,)}


class NotSurjective(ValueError):
    pass


class DecompositionError(Exception):
    """Principled failure of a decomposition; ``step`` names the failing stage."""

    def __init__(self, step, reason, witness=None):
        super().__init__(f"step {step}: {reason}")
        self.step = step
        self.reason = reason
        self.witness = witness


class ExceptionalShape(DecompositionError):
    def __init__(self, shape):
        super().__init__(0, f"exceptional shape {tuple(shape.dims)}: nonstandard preservers exist "
                            "on C, C+C and M_2")


@dataclass(frozen=True, eq=False)
class RealLinearMap:
    shape: AlgebraShape
    matrix: np.ndarray

    def __post_init__(self):
        shape = as_shape(self.shape)
        M = np.array(self.matrix, dtype=float)
        if M.shape != (shape.D, shape.D):
            raise ShapeMismatch(f"map matrix {M.shape} does not fit shape {shape} (D={shape.D})")
        M.setflags(write=False)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "matrix", M)

    def __call__(self, a: AlgebraElement) -> AlgebraElement:
        return apply(self, a)

    @classmethod
    def identity(cls, shape) -> RealLinearMap:
        shape = as_shape(shape)
        return cls(shape, np.eye(shape.D))

    @classmethod
    def from_function(cls, shape, f: Callable[[AlgebraElement], AlgebraElement]) -> RealLinearMap:
        """Matrix of a real-linear ``f``, read off from the images of the real basis."""
        shape = as_shape(shape)
        cols = []
        for k in range(shape.D):
            e = np.zeros(shape.D)
            e[k] = 1.0
            cols.append(f(AlgebraElement.from_real(shape, e)).realify())
        return cls(shape, np.column_stack(cols))

    def op_norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))


def apply(m: RealLinearMap, a: AlgebraElement) -> AlgebraElement:
    if a.shape != m.shape:
        raise ShapeMismatch(f"map on {m.shape} applied to element of {a.shape}")
    return AlgebraElement.from_real(m.shape, m.matrix @ a.realify())


def compose(m1: RealLinearMap, m2: RealLinearMap) -> RealLinearMap:
    """``m1 o m2``."""
    if m1.shape != m2.shape:
        raise ShapeMismatch("cannot compose maps on different shapes")
    return RealLinearMap(m1.shape, m1.matrix @ m2.matrix)


def is_surjection(m: RealLinearMap, tol: float = RANK_TOL) -> bool:
    s = np.linalg.svd(m.matrix, compute_uv=False)
    return s[0] > 0 and s[-1] > tol * s[0] * m.shape.D


def map_distance(m1: RealLinearMap, m2: RealLinearMap) -> float:
    """Realified operator norm of the difference."""
    return float(np.linalg.norm(m1.matrix - m2.matrix, 2))


# canonical forms

@dataclass(frozen=True, eq=False)
class CanonicalForm:
    gamma: float
    u: AlgebraElement
    v: AlgebraElement
    pi: tuple[int, ...]
    J: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "pi", tuple(int(p) for p in self.pi))
        object.__setattr__(self, "J", frozenset(int(j) for j in self.J))

    @property
    def shape(self) -> AlgebraShape:
        return self.u.shape

    def validate(self, tol: float = 1e-10):
        shape = self.shape
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if self.v.shape != shape:
            raise ShapeMismatch("u and v have different shapes")
        if not (is_unitary(self.u, tol) and is_unitary(self.v, tol)):
            raise ValueError("u and v must be unitary")
        check_permutation(shape, self.pi)
        if not self.J <= set(range(shape.k)):
            raise ValueError(f"J {sorted(self.J)} contains invalid block indices")

    def __call__(self, a: AlgebraElement) -> AlgebraElement:
        out = []
        for j, src in enumerate(self.pi):
            A = a.blocks[src]
            if j not in self.J:
                A = A.conj()
            out.append(self.gamma * self.u.blocks[j] @ A @ self.v.blocks[j])
        return AlgebraElement(self.shape, out)


def check_permutation(shape: AlgebraShape, pi) -> None:
    pi = tuple(pi)
    if sorted(pi) != list(range(shape.k)):
        raise ValueError(f"{pi} is not a permutation of the blocks")
    for j, src in enumerate(pi):
        if shape.dims[src] != shape.dims[j]:
            raise ValueError(f"permutation {pi} sends a block of size {shape.dims[src]} "
                             f"to one of size {shape.dims[j]}")


def from_canonical(c: CanonicalForm) -> RealLinearMap:
    c.validate()
    return RealLinearMap.from_function(c.shape, c)


def random_permutation(shape: AlgebraShape, rng: np.random.Generator) -> tuple[int, ...]:
    """Uniform block permutation among those respecting block sizes."""
    pi = list(range(shape.k))
    for n in set(shape.dims):
        idx = [i for i, m in enumerate(shape.dims) if m == n]
        for i, src in zip(idx, rng.permutation(idx)):
            pi[i] = int(src)
    return tuple(pi)


def random_canonical(shape, seed: int) -> CanonicalForm:
    shape = as_shape(shape)
    rng = block_rng(seed, 0, 20)
    gamma = float(rng.uniform(0.5, 2.0))
    pi = random_permutation(shape, rng)
    J = frozenset(int(j) for j in range(shape.k) if rng.random() < 0.5)
    u = AlgebraElement(shape, [haar_unitary(rng, n) for n in shape.dims])
    v = AlgebraElement(shape, [haar_unitary(rng, n) for n in shape.dims])
    return CanonicalForm(gamma, u, v, pi, J)


def fix_gauge(c: CanonicalForm) -> CanonicalForm:
    """Representative with the first (nonzero) entry of every ``v`` block real positive.

    ``(u_j, v_j) -> (e^{i t} u_j, e^{-i t} v_j)`` leaves the map unchanged.
    """
    us, vs = [], []
    for U, V in zip(c.u.blocks, c.v.blocks):
        flat = V.reshape(-1)
        z = flat[0] if abs(flat[0]) > 1e-8 else flat[np.flatnonzero(np.abs(flat) > 1e-8)[0]]
        ph = z / abs(z)
        us.append(U * ph)
        vs.append(V / ph)
    return CanonicalForm(c.gamma, AlgebraElement(c.shape, us), AlgebraElement(c.shape, vs), c.pi, c.J)


# block structure of a map

def _block_slices(shape: AlgebraShape):
    return [slice(off, off + 2 * n * n) for n, off in zip(shape.dims, shape.offsets())]


def block_permutation(m: RealLinearMap, tol: float = DECOMPOSE_TOL) -> tuple[int, ...]:
    """Permutation ``pi`` with ``m(block pi[j]) = block j``, or DecompositionError(1).

    Every real basis element of source block ``i`` must land in a single
    target block of the same size, and the induced assignment must be a
    bijection.
    """
    shape = m.shape
    sl = _block_slices(shape)
    scale = max(float(np.abs(m.matrix).max()), 1e-300)
    target_of = {}
    for i in range(shape.k):
        hit = set()
        for col in range(sl[i].start, sl[i].stop):
            rows = [j for j in range(shape.k) if np.abs(m.matrix[sl[j], col]).max() > tol * scale]
            if len(rows) > 1:
                e = np.zeros(shape.D)
                e[col] = 1.0
                raise DecompositionError(1, f"basis element of block {i} spreads over blocks {rows}",
                                         AlgebraElement.from_real(shape, e))
            hit.update(rows)
        if len(hit) != 1:
            raise DecompositionError(1, f"block {i} is mapped to blocks {sorted(hit)}, not exactly one",
                                     AlgebraElement.from_block(shape, i, np.eye(shape.dims[i])))
        j = hit.pop()
        if shape.dims[j] != shape.dims[i]:
            raise DecompositionError(1, f"block {i} of size {shape.dims[i]} lands in block {j} "
                                        f"of size {shape.dims[j]}",
                                     AlgebraElement.from_block(shape, i, np.eye(shape.dims[i])))
        if j in target_of:
            raise DecompositionError(1, f"blocks {target_of[j]} and {i} both land in block {j}")
        target_of[j] = i
    return tuple(target_of[j] for j in range(shape.k))


def block_map(m: RealLinearMap, j: int, i: int) -> Callable[[np.ndarray], np.ndarray]:
    """The component ``M_n -> M_n`` of ``m`` from source block ``i`` to target block ``j``."""
    sl = _block_slices(m.shape)
    sub = m.matrix[sl[j], sl[i]]
    n = m.shape.dims[i]

    def f(A):
        A = np.asarray(A, dtype=complex)
        x = np.empty(2 * n * n)
        x[0::2] = A.real.reshape(-1)
        x[1::2] = A.imag.reshape(-1)
        y = sub @ x
        return (y[0::2] + 1j * y[1::2]).reshape(n, n)
    return f


def linearity_type(f, n: int, tol: float, step: int) -> bool:
    """True when ``f`` is complex-linear on ``E_11``, False when conjugate-linear."""
    E = np.zeros((n, n), dtype=complex)
    E[0, 0] = 1
    c1, c2 = f(E), f(1j * E)
    s = np.linalg.norm(c1)
    if s == 0:
        raise DecompositionError(step, "E_11 is mapped to zero")
    if np.linalg.norm(c2 - 1j * c1) <= tol * s:
        return True
    if np.linalg.norm(c2 + 1j * c1) <= tol * s:
        return False
    raise DecompositionError(step, "image of i*E_11 is neither i nor -i times the image of E_11 "
                                   "(neither linear nor conjugate-linear)", {"E11": c1, "iE11": c2})


def _unitary_defect(U: np.ndarray) -> float:
    return float(np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0]), 2))


def _decompose_block(f, n: int, j: int, tol: float):
    """``(linear, gamma_j, U_j, V_j)`` for one block map ``A -> gamma U op(A) V``."""
    linear = linearity_type(f, n, tol, step=2)
    psi = f if linear else (lambda A: f(np.conj(A)))
    if n == 1:
        c = psi(np.ones((1, 1)))[0, 0]
        return linear, abs(c), np.array([[c / abs(c)]]), np.ones((1, 1), dtype=complex)

    W = psi(np.eye(n))
    sw = np.linalg.svd(W, compute_uv=False)
    if sw[-1] <= RANK_TOL * sw[0] * n:
        raise DecompositionError(3, f"block {j}: image of the identity is singular", W)
    Winv = np.linalg.inv(W)

    def L(A):
        return psi(A) @ Winv

    us = []
    for r in range(n):
        E = np.zeros((n, n), dtype=complex)
        E[r, r] = 1
        P = L(E)
        herm = np.linalg.norm(P - P.conj().T, 2)
        w, vecs = np.linalg.eigh((P + P.conj().T) / 2)
        target = np.zeros(n)
        target[-1] = 1
        if herm > STRUCT_TOL or np.abs(w - target).max() > STRUCT_TOL:
            raise DecompositionError(3, f"block {j}: normalised image of E_{r}{r} is not a rank-one "
                                        "orthogonal projection (left factor is not a multiple of a unitary)",
                                     {"matrix_unit": (r, r), "image": P})
        u = vecs[:, -1]
        if r > 0:
            E = np.zeros((n, n), dtype=complex)
            E[r - 1, r] = 1
            z = np.vdot(u, L(E).conj().T @ us[-1])
            if abs(z) > 0.5:
                u = u * (z / abs(z))
        us.append(u)
    U = np.column_stack(us)
    if _unitary_defect(U) > STRUCT_TOL:
        raise DecompositionError(3, f"block {j}: recovered left factor is not unitary", U)
    gamma = float(sw[0])
    V = U.conj().T @ W / gamma
    if _unitary_defect(V) > STRUCT_TOL:
        raise DecompositionError(4, f"block {j}: right factor is not a multiple of a unitary "
                                    f"(defect {_unitary_defect(V):.3g})", V)
    return linear, gamma, U, V


def decompose(m: RealLinearMap, tol: float = DECOMPOSE_TOL) -> CanonicalForm:
    """Recover ``(gamma, u, v, pi, J)`` with ``m(a) = gamma u pi(a)^dagger v``.

    Raises :class:`ExceptionalShape` on C, C+C and M_2, and
    :class:`DecompositionError` naming the failing step otherwise:

    0. surjectivity
    1. blocks are permuted (respecting sizes)
    2. each block component is linear or conjugate-linear
    3. normalised images of the diagonal matrix units are orthogonal projections
    4. the right factor is a multiple of a unitary
    6. the scale is the same on every block
    7. the assembled form reproduces ``m``
    """
    shape = m.shape
    if tuple(shape.dims) in EXCEPTIONAL_SHAPES:
        raise ExceptionalShape(shape)
    if not is_surjection(m):
        raise DecompositionError(0, "map is not surjective")
    pi = block_permutation(m, tol)
    gammas, us, vs, J = [], [], [], set()
    for j, i in enumerate(pi):
        linear, g, U, V = _decompose_block(block_map(m, j, i), shape.dims[j], j, tol)
        if linear:
            J.add(j)
        gammas.append(g)
        us.append(U)
        vs.append(V)
    gammas = np.array(gammas)
    if gammas.max() - gammas.min() > tol * gammas.max():
        raise DecompositionError(6, f"block scales differ: {gammas.tolist()}", gammas)
    gamma = float(gammas.mean())
    c = fix_gauge(CanonicalForm(gamma, AlgebraElement(shape, us), AlgebraElement(shape, vs), pi, J))
    rec = RealLinearMap.from_function(shape, c)
    err = map_distance(rec, m)
    if err > tol * m.op_norm():
        raise DecompositionError(7, f"reconstruction error {err:.3g} exceeds tolerance", err)
    return c


def reconstruction_error(m: RealLinearMap, c: CanonicalForm) -> float:
    """Relative realified operator-norm distance between ``m`` and the canonical map."""
    return map_distance(RealLinearMap.from_function(m.shape, c), m) / m.op_norm()


# verification

@dataclass(frozen=True, eq=False)
class ViolationWitness:
    a: AlgebraElement
    b: AlgebraElement
    image_a: AlgebraElement
    image_b: AlgebraElement
    family: str

    def diagnostics(self) -> dict:
        fa, fb = self.image_a, self.image_b
        return {
            "family": self.family,
            "norm_a": op_norm(self.a),
            "norm_b": op_norm(self.b),
            "norm_image_a": op_norm(fa),
            "norm_image_b": op_norm(fb),
            "dist_image_ab": bj.dist_to_right_ideal(fa, fb),
            "dist_image_ba": bj.dist_to_right_ideal(fb, fa),
            "image_strong_ab": bj.strong_bj(fa, fb),
            "image_strong_ba": bj.strong_bj(fb, fa),
        }


def structured_pairs(shape: AlgebraShape):
    """Deterministic mutually orthogonal pairs that probe the usual failure modes."""
    out = []
    for i, n in enumerate(shape.dims):
        if n >= 2:
            e = np.eye(n)
            # transposition probe: e1 (x) e1  vs  e2 (x) (e1 + e2)
            out.append(("transpose-probe", rank_one(shape, i, e[0], e[0]), rank_one(shape, i, e[1], e[0] + e[1])))
            # rational rank-one projection and its complement
            f = (e[0] + e[1]) / np.sqrt(2)
            E = np.outer(f, f)
            out.append(("projection-complement", AlgebraElement.from_block(shape, i, E),
                        AlgebraElement.from_block(shape, i, np.eye(n) - E)))
            # (x (x) x, I) vs (x' (x) x', I) across blocks
            if shape.k > 1:
                rest = [np.eye(m) for m in shape.dims]
                a_b, b_b = list(rest), list(rest)
                a_b[i] = np.outer(e[0], e[0])
                b_b[i] = np.outer(e[1], e[1])
                out.append(("projection-identity", AlgebraElement(shape, a_b), AlgebraElement(shape, b_b)))
    # vacant-slot patterns (x, .., 0_i, .., x) vs (x, .., 0_j, .., x)
    for i, j in itertools.permutations(range(shape.k), 2):
        a_b = [np.eye(n) * (0 if l == i else 1) for l, n in enumerate(shape.dims)]
        b_b = [np.eye(n) * (0 if l == j else 1) for l, n in enumerate(shape.dims)]
        out.append(("vacant-slot", AlgebraElement(shape, a_b), AlgebraElement(shape, b_b)))
    return out


def _families(shape: AlgebraShape):
    fams = [("mutual-pair", bj.gen_mutual_pair)]
    if shape.N >= 2:
        fams.append(("peaked", bj.gen_peaked_pair))
    if shape.k >= 2 or max(shape.dims) >= 2:
        fams.append(("rank-one", bj.gen_rank_one_pair))
    if shape.k >= 2:
        fams.append(("vacant-slot", bj.gen_slot_pair))
    if max(shape.dims) >= 2:
        fams.append(("projection", bj.gen_projection_pair))
    return fams


def candidate_pairs(shape, trials: int, seed: int):
    """Structured pairs followed by ``trials`` random ones cycling through the families."""
    shape = as_shape(shape)
    yield from structured_pairs(shape)
    fams = _families(shape)
    for t in range(trials):
        name, gen = fams[t % len(fams)]
        s = int(np.random.SeedSequence([seed, t]).generate_state(1, np.uint64)[0])
        a, b = gen(shape, s)
        yield (name, a, b)


def verify_mutual_preserver(m: RealLinearMap, trials: int = 1000, seed: int = 0,
                            require_surjective: bool = True, tol: float = bj.BJ_TOL):
    """Search for a mutually orthogonal pair whose image is not; None when none is found.

    Passing is evidence, not proof.
    """
    if require_surjective and not is_surjection(m):
        raise NotSurjective("map is not surjective")
    for name, a, b in candidate_pairs(m.shape, trials, seed):
        if not bj.mutual_strong_bj(a, b, tol):
            continue
        fa, fb = apply(m, a), apply(m, b)
        if not bj.mutual_strong_bj(fa, fb, tol):
            return ViolationWitness(a, b, fa, fb, name)
    return None


@dataclass(frozen=True, eq=False)
class SingularityWitness:
    element: AlgebraElement
    image: AlgebraElement
    kind: str  # "singular-to-invertible" or "rank-one-to-higher-rank"


def _singular_candidates(shape: AlgebraShape, trials: int, seed: int):
    for i, n in enumerate(shape.dims):
        bs = [np.eye(m, dtype=complex) for m in shape.dims]
        bs[i] = np.eye(n) - np.diag(np.eye(n)[0])
        yield AlgebraElement(shape, bs)
    for t in range(trials):
        rng = block_rng(seed, t, 30)
        bs = [ginibre(rng, n) for n in shape.dims]
        i = int(rng.integers(shape.k))
        U, s, Vh = np.linalg.svd(bs[i])
        s[-1] = 0
        bs[i] = (U * s) @ Vh
        yield AlgebraElement(shape, bs)


def _rank_one_candidates(shape: AlgebraShape, count: int, seed: int):
    for i, n in enumerate(shape.dims):
        yield matrix_unit(shape, i, 0, 0)
    for t in range(count):
        rng = block_rng(seed, t, 31)
        i = int(rng.integers(shape.k))
        n = shape.dims[i]
        yield rank_one(shape, i, ginibre(rng, n, 1)[:, 0], ginibre(rng, n, 1)[:, 0])


def verify_singularity_preserver(m: RealLinearMap, trials: int = 200, seed: int = 0):
    """Search for a singular element with invertible image, or a rank-one element
    whose image has rank >= 2.  None when nothing is found."""
    shape = m.shape
    for a in _singular_candidates(shape, trials, seed):
        fa = apply(m, a)
        if not is_singular(fa):
            return SingularityWitness(a, fa, "singular-to-invertible")
    for a in _rank_one_candidates(shape, 10 * shape.D, seed):
        fa = apply(m, a)
        if rank(fa) > 1:
            return SingularityWitness(a, fa, "rank-one-to-higher-rank")
    return None


