"""
Dense complex matrix kernel.

Matrices are plain ``numpy`` complex arrays. A unitary is any array that has
passed ``certify_unitary``; the certification is repeated after operations
that can accumulate drift (exponentials, long products).
"""
import logging

import numpy as np
from django.conf import settings
from django.db import models
from scipy import linalg
from scipy.sparse.linalg import svds

from .exceptions import EigensolverFailure, NotSkewHermitian, NotUnitary

logger = logging.getLogger(__name__)


class NormKind(models.TextChoices):
    OPERATOR = 'op', 'Operator'
    FROBENIUS = 'frob', 'Frobenius'
    NORMALIZED_HS = 'hs', 'Normalized Hilbert-Schmidt'


def as_generator(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def operator_norm(a, dense_limit=None, rtol=None):
    """Largest singular value; iterative above ``dense_limit``."""
    a = np.asarray(a)
    dense_limit = settings.ASYMLAB_OP_NORM_DENSE_LIMIT if dense_limit is None else dense_limit
    if a.shape[0] <= dense_limit:
        return float(linalg.svdvals(a)[0])
    rtol = settings.ASYMLAB_OP_NORM_RTOL if rtol is None else rtol
    logger.debug(f'Operator norm of a {a.shape[0]}x{a.shape[0]} matrix by Lanczos')
    return float(svds(a, k=1, tol=rtol, return_singular_vectors=False)[0])


def norm(a, kind=NormKind.FROBENIUS):
    a = np.asarray(a)
    kind = NormKind(kind)
    if kind == NormKind.OPERATOR:
        return operator_norm(a)
    frobenius = float(np.linalg.norm(a))
    if kind == NormKind.NORMALIZED_HS:
        return frobenius / np.sqrt(a.shape[0])
    return frobenius


def _small_in_operator_norm(a, tol):
    # ||a||_op <= ||a||_frob
    frobenius = float(np.linalg.norm(a))
    if frobenius <= tol:
        return True, frobenius
    deviation = operator_norm(a)
    return deviation <= tol, deviation


def adjoint(a):
    return np.conj(a).T


def is_unitary(u, tol=None):
    tol = settings.ASYMLAB_UNITARY_TOLERANCE if tol is None else tol
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    ok, _ = _small_in_operator_norm(adjoint(u) @ u - np.eye(u.shape[0]), tol)
    return ok


def certify_unitary(u, tol=None):
    tol = settings.ASYMLAB_UNITARY_TOLERANCE if tol is None else tol
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise NotUnitary(float('inf'), tol)
    ok, deviation = _small_in_operator_norm(adjoint(u) @ u - np.eye(u.shape[0]), tol)
    if not ok:
        raise NotUnitary(deviation, tol)
    return u


def skew_part(a):
    a = np.asarray(a)
    return (a - adjoint(a)) / 2


def hermitian_part(a):
    a = np.asarray(a)
    return (a + adjoint(a)) / 2


def absolute_value(a):
    """|A| = (A*A)^(1/2), the positive factor of the right polar decomposition."""
    try:
        _, p = linalg.polar(np.asarray(a, dtype=complex), side='right')
    except (linalg.LinAlgError, ValueError) as error:
        raise EigensolverFailure(f'Polar decomposition failed: {error}') from error
    return hermitian_part(p)


def nearest_involution(a, residual_tol=None):
    """
    A self-adjoint unitary B with ||B - A|| <= ||1 - A^2|| in every unitarily
    invariant norm: diagonalize A and send each eigenvalue to +1 when its real
    part is >= 0 and to -1 otherwise.
    """
    residual_tol = settings.ASYMLAB_EIG_RESIDUAL_TOLERANCE if residual_tol is None else residual_tol
    a = np.asarray(a, dtype=complex)
    try:
        t, z = linalg.schur(a, output='complex')
    except (linalg.LinAlgError, ValueError) as error:
        raise EigensolverFailure(f'Schur decomposition failed: {error}') from error
    eigenvalues = np.diag(t)
    residual = operator_norm(a @ z - z * eigenvalues)
    if residual > residual_tol:
        raise EigensolverFailure(
            f'Eigendecomposition residual {residual:.3e} exceeds {residual_tol:.1e}; input is not normal'
        )
    signs = np.where(eigenvalues.real >= 0, 1.0, -1.0)
    return hermitian_part((z * signs) @ adjoint(z))


def exp_skew(x, tol=None):
    """exp(X) for skew-hermitian X via the hermitian eigendecomposition of iX."""
    tol = settings.ASYMLAB_SKEW_TOLERANCE if tol is None else tol
    x = np.asarray(x, dtype=complex)
    ok, deviation = _small_in_operator_norm(x + adjoint(x), tol)
    if not ok:
        raise NotSkewHermitian(deviation, tol)
    try:
        w, v = linalg.eigh(1j * skew_part(x))
    except (linalg.LinAlgError, ValueError) as error:
        raise EigensolverFailure(f'Hermitian eigendecomposition failed: {error}') from error
    return certify_unitary((v * np.exp(-1j * w)) @ adjoint(v))


def haar_unitary(k, seed=None):
    """Haar-distributed unitary: QR of a complex Ginibre matrix with phase-corrected R."""
    if k < 1:
        raise ValueError(f"Dimension must be positive, got {k}")
    rng = as_generator(seed)
    z = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) / np.sqrt(2)
    q, r = linalg.qr(z)
    d = np.diag(r)
    return certify_unitary(q * (d / np.abs(d)))


def random_matrix(k, seed=None):
    rng = as_generator(seed)
    return rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))


def random_skew(k, seed=None, frobenius=1.0):
    x = skew_part(random_matrix(k, seed))
    return x * (frobenius / np.linalg.norm(x))


def matrix_to_json(a):
    a = np.asarray(a, dtype=complex)
    return {
        'dim': int(a.shape[0]),
        'entries': [[float(z.real), float(z.imag)] for z in a.ravel()],
    }


def matrix_from_json(data):
    dim = int(data['dim'])
    entries = np.asarray(data['entries'], dtype=float)
    if entries.shape != (dim * dim, 2):
        raise ValueError(f"Expected {dim * dim} (re, im) pairs, got shape {entries.shape}")
    return (entries[:, 0] + 1j * entries[:, 1]).reshape(dim, dim)
