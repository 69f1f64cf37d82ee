"""Shared samplers and independent oracles for the test suite.

The oracles here deliberately avoid the library code paths they check:
the Liouville oracle builds the matrix column by column from the action
on basis matrices (no Kronecker products), the inner-product oracle is a
double loop, and the pencil oracle goes through an explicit inverse
square root.
"""

import numpy as np

from hsdecomp import LRSum, apply_superop, matrix_unit, vec

COMPLEX = np.complex128


def random_matrix(rng, d, scale=1.0):
    return scale * (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)


def random_hermitian(rng, d, scale=1.0):
    x = random_matrix(rng, d, scale)
    return (x + x.conj().T) / 2


def random_unitary(rng, d):
    q, r = np.linalg.qr(random_matrix(rng, d))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_psd(rng, d, rank=None):
    rank = d if rank is None else rank
    x = (rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))) / np.sqrt(2)
    return x @ x.conj().T


def random_pd(rng, d, floor=0.2):
    return random_psd(rng, d) / d + floor * np.eye(d)


def kernel_disjoint_psd_family(rng, d, count):
    """PSD matrices, each rank deficient, with jointly trivial kernel."""
    while True:
        mats = [random_psd(rng, d, rank=int(rng.integers(1, d))) for _ in range(count)]
        stacked = np.vstack(mats)
        svals = np.linalg.svd(stacked, compute_uv=False)
        if svals[-1] > 1e-8 * svals[0]:
            return mats


def random_lrsum(rng, d, n_terms, scale=1.0):
    return LRSum.from_pairs(
        [(random_matrix(rng, d, scale), random_matrix(rng, d, scale)) for _ in range(n_terms)], d
    )


def random_hermitian_liouville(rng, d, scale=1.0):
    return random_hermitian(rng, d * d, scale)


def random_pd_liouville(rng, d, margin=(0.3, 1.5)):
    h = random_hermitian(rng, d * d)
    lo = np.linalg.eigvalsh(h)[0]
    return h + (abs(lo) + rng.uniform(*margin)) * np.eye(d * d)


def liouville_by_action(s: LRSum) -> np.ndarray:
    """Independent Liouville oracle: columns are the stacked images of basis matrices."""
    d = s.dim
    m = np.zeros((d * d, d * d), dtype=COMPLEX)
    for n in range(1, d + 1):
        for mm in range(1, d + 1):
            unit = matrix_unit(d, n, mm)
            col = (mm - 1) * d + (n - 1)
            m[:, col] = vec(apply_superop(s, unit))
    return m


def frob_inner_loops(eta, tau) -> complex:
    d = eta.shape[0]
    total = 0.0 + 0.0j
    for r in range(d):
        for c in range(d):
            total += np.conj(eta[r, c]) * tau[r, c]
    return total


def pencil_oracle(b, c) -> np.ndarray:
    """Generalized eigenvalues via an explicit inverse square root of c."""
    b = (b + b.conj().T) / 2
    c = (c + c.conj().T) / 2
    w, v = np.linalg.eigh(c)
    c_isqrt = (v / np.sqrt(w)) @ v.conj().T
    return np.linalg.eigvalsh(c_isqrt @ b @ c_isqrt)


def stacked_kernel_trivial(mats, tol=1e-9) -> bool:
    stacked = np.vstack(mats)
    svals = np.linalg.svd(stacked, compute_uv=False)
    return bool(svals[0] > 0 and svals[-1] > tol * svals[0])


def rel_err(m, ref) -> float:
    denom = max(np.linalg.norm(ref), 1e-300)
    return float(np.linalg.norm(m - ref) / denom)


def counterexample_liouville_oracle(t: float) -> np.ndarray:
    """Hand-built Liouville matrix of the d=2 counterexample operator.

    Reads the defining display directly: basis images are
    E11 -> E11 + (1-t) E22, E22 -> E22 + (1-t) E11, E12 -> t E12,
    E21 -> t E21, written in stacked coordinates (column-major order
    E11, E21, E12, E22).
    """
    m = np.zeros((4, 4), dtype=COMPLEX)
    m[0, 0] = 1.0
    m[3, 0] = 1.0 - t
    m[3, 3] = 1.0
    m[0, 3] = 1.0 - t
    m[1, 1] = t
    m[2, 2] = t
    return m


def counterexample_form_oracle(t: float, eta) -> float:
    """The displayed quadratic form t ||eta||^2 + (1-t) |eta_11 + eta_22|^2."""
    return float(
        t * (np.abs(eta) ** 2).sum() + (1 - t) * abs(eta[0, 0] + eta[1, 1]) ** 2
    )
