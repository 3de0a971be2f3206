"""Fixture maps: the exceptional algebras and maps that are not canonical preservers."""

from __future__ import annotations

import numpy as np

from .core import AlgebraElement, AlgebraShape, as_shape, block_rng, ginibre, haar_unitary
from .preservers import (
    DecompositionError,
    ExceptionalShape,
    RealLinearMap,
    decompose,
    random_canonical,
    verify_mutual_preserver,
    verify_singularity_preserver,
)


def _blockwise(shape, f):
    shape = as_shape(shape)
    return RealLinearMap.from_function(
        shape, lambda a: AlgebraElement(shape, [f(i, A) for i, A in enumerate(a.blocks)]))


def scalar_c_map(alpha=2 + 1j, beta=0.5) -> RealLinearMap:
    """``lambda -> alpha lambda + beta conj(lambda)`` on C; surjective when |alpha| != |beta|."""
    return _blockwise((1,), lambda i, A: alpha * A + beta * A.conj())


def c2_scale_map() -> RealLinearMap:
    """``(lambda, mu) -> (lambda, 2 mu)`` on C + C."""
    return _blockwise((1, 1), lambda i, A: A * (1 if i == 0 else 2))


def c2_embed_map() -> RealLinearMap:
    """``(lambda, mu) -> lambda (1, 1)`` on C + C (not surjective)."""
    shape = AlgebraShape((1, 1))
    return RealLinearMap.from_function(shape, lambda a: AlgebraElement(shape, [a.blocks[0], a.blocks[0]]))


def transpose_map(shape) -> RealLinearMap:
    return _blockwise(shape, lambda i, A: A.T)


def m2_general_map(seed: int = 0) -> RealLinearMap:
    """``A -> P A Q`` on M_2 with P a multiple of a unitary and Q an arbitrary invertible matrix."""
    rng = block_rng(seed, 0, 40)
    P = 1.3 * haar_unitary(rng, 2)
    Q = _invertible(rng, 2)
    return _blockwise((2,), lambda i, A: P @ A @ Q)


def _invertible(rng, n, min_sv=0.3):
    U, _, Vh = np.linalg.svd(ginibre(rng, n))
    return U @ np.diag(rng.uniform(min_sv, 2.0, n)) @ Vh


def _nonunitary(rng, n, cond):
    s = np.linspace(1.0, cond, n) if n > 1 else np.ones(1)
    return haar_unitary(rng, n) @ np.diag(s) @ haar_unitary(rng, n)


def nonunitary_left_map(shape, seed: int, cond: float = 2.5) -> RealLinearMap:
    """``A_i -> P_i A_i Q_i`` with P_i of condition number ``cond`` on every block of size >= 2."""
    shape = as_shape(shape)
    rng = block_rng(seed, 0, 41)
    Ps = [_nonunitary(rng, n, cond) if n >= 2 else np.ones((1, 1)) for n in shape.dims]
    Qs = [_invertible(rng, n) if n >= 2 else np.ones((1, 1)) for n in shape.dims]
    return _blockwise(shape, lambda i, A: Ps[i] @ A @ Qs[i])


def transpose_right_map(shape, seed: int) -> RealLinearMap:
    """``A_i -> A_i^T Q_i`` with Q_i invertible (identity on blocks of size 1)."""
    shape = as_shape(shape)
    rng = block_rng(seed, 0, 42)
    Qs = [_invertible(rng, n) if n >= 2 else np.ones((1, 1)) for n in shape.dims]
    return _blockwise(shape, lambda i, A: A.T @ Qs[i])


def unequal_scale_map(shape, seed: int) -> RealLinearMap:
    """A canonical map whose scale differs between blocks (needs two or more blocks)."""
    shape = as_shape(shape)
    if shape.k < 2:
        raise ValueError("unequal block scales need at least two blocks")
    c = random_canonical(shape, seed)
    rng = block_rng(seed, 0, 43)
    scales = 1 + rng.uniform(0.2, 1.0, shape.k)
    scales[int(rng.integers(shape.k))] = 1.0

    def f(a):
        b = c(a)
        return AlgebraElement(shape, [s * B for s, B in zip(scales, b.blocks)])
    return RealLinearMap.from_function(shape, f)


def noisy_map(m: RealLinearMap, seed: int, eps: float = 1e-3) -> RealLinearMap:
    rng = np.random.default_rng([seed, 44])
    E = rng.standard_normal(m.matrix.shape)
    return RealLinearMap(m.shape, m.matrix + eps * m.op_norm() * E / np.linalg.norm(E, 2))


GALLERY = ("c", "c2-scale", "c2-embed", "m2-general", "transpose")


def _decompose_outcome(m):
    try:
        decompose(m)
    except ExceptionalShape:
        return "exceptional-shape"
    except DecompositionError as e:
        return f"failed at step {e.step}"
    return "succeeded"


def run_gallery(name: str, seed: int = 0, trials: int = 1000) -> dict:
    """Run one fixture and report which checks pass."""
    if name == "c":
        m, surj = scalar_c_map(), True
        note = "on C every additive map preserves mutual strong BJ orthogonality"
    elif name == "c2-scale":
        m, surj = c2_scale_map(), True
        note = "(l, m) -> (l, 2m) preserves but is not canonical"
    elif name == "c2-embed":
        m, surj = c2_embed_map(), False
        note = "(l, m) -> l(1, 1) preserves yet sends the singular (1, 0) to the invertible (1, 1)"
    elif name == "m2-general":
        m, surj = m2_general_map(seed), True
        note = "A -> PAQ on M_2 preserves for every invertible Q"
    elif name == "transpose":
        m, surj = transpose_map((3,)), True
        note = "A -> A^T on M_3 does not preserve"
    else:
        raise KeyError(f"unknown gallery fixture {name!r}; choose from {', '.join(GALLERY)}")
    w = verify_mutual_preserver(m, trials, seed, require_surjective=surj)
    sw = verify_singularity_preserver(m, seed=seed)
    report = {
        "name": name,
        "shape": list(m.shape.dims),
        "note": note,
        "mutual_preserver": w is None,
        "violation": None,
        "singularity_preserver": sw is None,
        "singularity_witness": None,
        "decompose": _decompose_outcome(m),
    }
    if w is not None:
        report["violation"] = {"a": w.a, "b": w.b, "image_a": w.image_a, "image_b": w.image_b,
                               **w.diagnostics()}
    if sw is not None:
        report["singularity_witness"] = {"element": sw.element, "image": sw.image, "kind": sw.kind}
    return report
