"""Block-diagonal complex matrix algebras  M_{n_1} + ... + M_{n_k}.

An element is stored as a tuple of square complex blocks.  Everything here is
pure: operations return new elements and never mutate their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

# relative rank threshold: sigma is zero when sigma <= RANK_TOL * sigma_max * n
RANK_TOL = 1e-9
# top singular cluster: sigma_j >= sigma_max * (1 - CLUSTER_TOL)
CLUSTER_TOL = 1e-8


class ShapeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class AlgebraShape:
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if not dims or any(n < 1 for n in dims):
            raise ValueError(f"invalid block sizes {self.dims!r}")
        object.__setattr__(self, "dims", dims)

    @property
    def k(self) -> int:
        return len(self.dims)

    @property
    def N(self) -> int:
        """Size of the block-diagonal embedding."""
        return sum(self.dims)

    @property
    def D(self) -> int:
        """Real dimension of the algebra."""
        return 2 * sum(n * n for n in self.dims)

    def offsets(self) -> list[int]:
        """Start of each block in realified coordinates."""
        out, acc = [], 0
        for n in self.dims:
            out.append(acc)
            acc += 2 * n * n
        return out

    def __str__(self):
        return "x".join(str(n) for n in self.dims)


def as_shape(shape) -> AlgebraShape:
    if isinstance(shape, AlgebraShape):
        return shape
    if isinstance(shape, int):
        return AlgebraShape((shape,))
    return AlgebraShape(tuple(shape))


class AlgebraElement:
    """One complex ``n_i x n_i`` matrix per block."""

    __slots__ = ("shape", "blocks")

    def __init__(self, shape, blocks: Sequence[np.ndarray]):
        shape = as_shape(shape)
        if len(blocks) != shape.k:
            raise ShapeMismatch(f"expected {shape.k} blocks, got {len(blocks)}")
        bs = []
        for n, b in zip(shape.dims, blocks):
            b = np.array(b, dtype=complex)
            if b.shape != (n, n):
                raise ShapeMismatch(f"block of shape {b.shape}, expected {(n, n)}")
            b.setflags(write=False)
            bs.append(b)
        self.shape = shape
        self.blocks = tuple(bs)

    # construction helpers
    @classmethod
    def zeros(cls, shape) -> AlgebraElement:
        shape = as_shape(shape)
        return cls(shape, [np.zeros((n, n)) for n in shape.dims])

    @classmethod
    def identity(cls, shape) -> AlgebraElement:
        shape = as_shape(shape)
        return cls(shape, [np.eye(n) for n in shape.dims])

    @classmethod
    def from_block(cls, shape, i: int, block) -> AlgebraElement:
        """Element that is ``block`` in slot ``i`` and zero elsewhere."""
        shape = as_shape(shape)
        bs = [np.zeros((n, n), dtype=complex) for n in shape.dims]
        bs[i] = np.asarray(block, dtype=complex)
        return cls(shape, bs)

    @classmethod
    def from_scalars(cls, values) -> AlgebraElement:
        """Element of C + ... + C from a list of complex numbers."""
        values = list(values)
        return cls((1,) * len(values), [np.array([[v]]) for v in values])

    @classmethod
    def from_real(cls, shape, vec) -> AlgebraElement:
        """Inverse of :meth:`realify`."""
        shape = as_shape(shape)
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (shape.D,):
            raise ShapeMismatch(f"expected real vector of length {shape.D}")
        bs = []
        for n, off in zip(shape.dims, shape.offsets()):
            chunk = vec[off:off + 2 * n * n]
            bs.append((chunk[0::2] + 1j * chunk[1::2]).reshape(n, n))
        return cls(shape, bs)

    def realify(self) -> np.ndarray:
        """Real coordinates: block-major, row-major, real part before imaginary."""
        parts = []
        for b in self.blocks:
            flat = b.reshape(-1)
            pair = np.empty(2 * flat.size)
            pair[0::2] = flat.real
            pair[1::2] = flat.imag
            parts.append(pair)
        return np.concatenate(parts)

    # arithmetic
    def _check(self, other: AlgebraElement):
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"expected AlgebraElement, got {type(other).__name__}")
        if other.shape != self.shape:
            raise ShapeMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.shape, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.shape, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __neg__(self):
        return AlgebraElement(self.shape, [-a for a in self.blocks])

    def __mul__(self, scalar):
        if isinstance(scalar, AlgebraElement):
            return NotImplemented
        return AlgebraElement(self.shape, [scalar * a for a in self.blocks])

    __rmul__ = __mul__

    def __matmul__(self, other):
        self._check(other)
        return AlgebraElement(self.shape, [a @ b for a, b in zip(self.blocks, other.blocks)])

    def adjoint(self) -> AlgebraElement:
        return AlgebraElement(self.shape, [a.conj().T for a in self.blocks])

    def conj(self) -> AlgebraElement:
        """Entrywise conjugation in the standard basis."""
        return AlgebraElement(self.shape, [a.conj() for a in self.blocks])

    def transpose(self) -> AlgebraElement:
        return AlgebraElement(self.shape, [a.T for a in self.blocks])

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement) or other.shape != self.shape:
            return False
        return all(np.array_equal(a, b) for a, b in zip(self.blocks, other.blocks))

    def __hash__(self):
        return hash((self.shape, self.realify().tobytes()))

    def __repr__(self):
        return f"AlgebraElement(shape={self.shape.dims}, blocks={[b.tolist() for b in self.blocks]})"


def embed(a: AlgebraElement) -> np.ndarray:
    """Block-diagonal ``N x N`` matrix with the blocks of ``a`` in order."""
    N = a.shape.N
    out = np.zeros((N, N), dtype=complex)
    s = 0
    for b in a.blocks:
        n = b.shape[0]
        out[s:s + n, s:s + n] = b
        s += n
    return out


def spectral_norm(M: np.ndarray) -> float:
    """Largest singular value; cheaper than ``np.linalg.norm(M, 2)`` for small matrices."""
    if M.shape == (1, 1):
        return float(abs(M[0, 0]))
    return float(np.linalg.svd(M, compute_uv=False)[0]) if M.size else 0.0


def block_norms(a: AlgebraElement) -> np.ndarray:
    return np.array([spectral_norm(b) for b in a.blocks])


def op_norm(a: AlgebraElement) -> float:
    return float(block_norms(a).max())


def _numerical_rank(s: np.ndarray, n: int) -> int:
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > RANK_TOL * s[0] * n))


def block_ranks(a: AlgebraElement) -> list[int]:
    return [_numerical_rank(np.linalg.svd(b, compute_uv=False), b.shape[0]) for b in a.blocks]


def rank(a: AlgebraElement) -> int:
    return sum(block_ranks(a))


def is_invertible(a: AlgebraElement) -> bool:
    return all(r == n for r, n in zip(block_ranks(a), a.shape.dims))


def is_singular(a: AlgebraElement) -> bool:
    return not is_invertible(a)


def svd_block(a: AlgebraElement, i: int):
    """``(s, U, V)`` with ``A_i = U diag(s) V^*``; columns of U, V are the singular vectors."""
    U, s, Vh = np.linalg.svd(a.blocks[i])
    return s, U, Vh.conj().T


def max_singular_subspace(a: AlgebraElement, i: int, tol: float = CLUSTER_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the unit vectors where ``A_i`` attains its norm."""
    s, _, V = svd_block(a, i)
    if s[0] == 0:
        raise ValueError("no norm-attaining direction: block is zero")
    r = int(np.count_nonzero(s >= s[0] * (1 - tol)))
    return V[:, :r]


def perp_unit(x) -> np.ndarray:
    """A unit vector orthogonal to ``x``.

    Deterministic: ``x/|x|`` is completed to a basis by appending the standard
    basis vectors, the result is orthonormalised and the first vector past
    ``x`` is returned.
    """
    x = np.asarray(x, dtype=complex).reshape(-1)
    n = x.size
    if n < 2:
        raise ValueError("no orthogonal direction in dimension 1")
    nrm = np.linalg.norm(x)
    if nrm == 0:
        raise ValueError("x must be nonzero")
    Q, _ = np.linalg.qr(np.column_stack([x / nrm, np.eye(n, dtype=complex)]))
    y = Q[:, 1]
    # QR already makes y orthogonal to x; one projection pass cleans rounding
    u = x / nrm
    y = y - u * np.vdot(u, y)
    return y / np.linalg.norm(y)


def rank_one(shape, i: int, x, y) -> AlgebraElement:
    """``x (x) y = x y^*`` placed in block ``i``."""
    x = np.asarray(x, dtype=complex).reshape(-1)
    y = np.asarray(y, dtype=complex).reshape(-1)
    return AlgebraElement.from_block(shape, i, np.outer(x, y.conj()))


@dataclass(frozen=True)
class RankOneSpec:
    block: int
    x: np.ndarray
    y: np.ndarray

    def realize(self, shape) -> AlgebraElement:
        return rank_one(shape, self.block, self.x, self.y)


def matrix_unit(shape, i: int, r: int, c: int, scale: complex = 1.0) -> AlgebraElement:
    shape = as_shape(shape)
    n = shape.dims[i]
    E = np.zeros((n, n), dtype=complex)
    E[r, c] = scale
    return AlgebraElement.from_block(shape, i, E)


# random generation

def block_rng(seed: int, i: int, salt: int = 0) -> np.random.Generator:
    """Independent stream for block ``i``, derived by hashing ``(seed, salt, i)``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2**64 - 1), salt, i]))


def ginibre(rng: np.random.Generator, n: int, m: int | None = None) -> np.ndarray:
    m = n if m is None else m
    return (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / np.sqrt(2)


def haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix with phase-fixed R."""
    Q, R = np.linalg.qr(ginibre(rng, n))
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_element(shape, seed: int) -> AlgebraElement:
    shape = as_shape(shape)
    return AlgebraElement(shape, [ginibre(block_rng(seed, i, 1), n) for i, n in enumerate(shape.dims)])


def random_unitary(shape, seed: int) -> AlgebraElement:
    shape = as_shape(shape)
    return AlgebraElement(shape, [haar_unitary(block_rng(seed, i, 2), n) for i, n in enumerate(shape.dims)])


def is_unitary(u: AlgebraElement, tol: float = 1e-10) -> bool:
    return all(
        np.linalg.norm(b.conj().T @ b - np.eye(b.shape[0]), 2) <= tol
        and np.linalg.norm(b @ b.conj().T - np.eye(b.shape[0]), 2) <= tol
        for b in u.blocks
    )
