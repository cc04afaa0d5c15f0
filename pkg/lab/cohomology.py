"""
Defect diminishing through the second cohomology.

Pipeline for one step, with eps the current Frobenius defect:

    lift -> c(g, h) = (v(g) v(h) - v(gh)) / eps          (Hochschild cocycle)
         -> alpha(g, h) = c(g, h) v(gh)*                  (group 2-cocycle)
         -> beta = argmin ||d beta - alpha||, minimal norm (least squares)
         -> beta <- (beta - beta*) / 2, beta(1) = 0
         -> psi(s) = exp(-eps beta(s)) v(s)               (correction)

All cochains are truncated to a window: 1-cochains live on its elements,
2-cochains on its admissible pairs (rows of ``window.pairs``).
"""
import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from django.conf import settings
from scipy import linalg, sparse
from scipy.sparse.linalg import lsmr

from . import normkit
from .almostrep import AlmostRep, Lift, defect, lift, stack_norms
from .exceptions import NotSkewHermitian, PresentationMismatch, SolverError
from .groups import NormalFormGroup, Window, ball
from .normkit import NormKind

logger = logging.getLogger(__name__)

ZERO_DEFECT = 1e-12
# complex entries above which the direct solve goes through the normal equations
DENSE_ENTRY_LIMIT = 4_000_000


def _adjoints(stack):
    return np.conj(np.swapaxes(stack, -1, -2))


def _check_window(window: Window, lifted: Lift):
    if window is not lifted.window:
        raise PresentationMismatch("Cochain and lift live on different windows")


@dataclass(frozen=True, eq=False)
class Cochain1:
    window: Window
    values: np.ndarray

    def at(self, element):
        return self.values[self.window.index[element]]


@dataclass(frozen=True, eq=False)
class Cochain2:
    window: Window
    values: np.ndarray
    eps: float = 0.0

    def at(self, g, h):
        position = self.window.pair_position[self.window.index[g], self.window.index[h]]
        if position < 0:
            raise KeyError(f"({g}, {h}) is not an admissible pair of the window")
        return self.values[position]


@dataclass
class CorrectionReport:
    defect_before: float
    defect_after: float
    residual: float
    beta_norm: float
    iterations: int
    stalled: bool = False

    def __post_init__(self):
        for field in ('defect_before', 'defect_after', 'residual', 'beta_norm', 'iterations'):
            if getattr(self, field) < 0:
                raise ValueError(f"{field} must be nonnegative")


class CoboundarySolution(NamedTuple):
    beta: Cochain1
    residual: float
    iterations: int
    method: str


def zero_cochain2(window: Window, k: int) -> Cochain2:
    return Cochain2(window, np.zeros((len(window.pairs), k, k), dtype=complex))


def hochschild_cocycle(lifted: Lift, eps: float) -> Cochain2:
    """c(g, h) = (v(g) v(h) - v(gh)) / eps; the zero cochain when eps is 0."""
    if eps < 0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    window = lifted.window
    if eps == 0:
        return zero_cochain2(window, lifted.dim)
    v = lifted.values
    g, h, gh = window.pairs.T
    values = (v[g] @ v[h] - v[gh]) / eps
    # vanish identically because v(1) = 1 and v(g^-1) = v(g)*
    trivial = (g == window.identity_index) | (h == window.identity_index) | (h == window.inverse[g])
    values[trivial] = 0
    return Cochain2(window, values, eps)


def to_group_cocycle(c: Cochain2, lifted: Lift) -> Cochain2:
    """alpha(g, h) = c(g, h) v(gh)*."""
    _check_window(c.window, lifted)
    gh = c.window.pairs[:, 2]
    return Cochain2(c.window, c.values @ _adjoints(lifted.values[gh]), c.eps)


def coboundary1(beta: Cochain1, lifted: Lift) -> Cochain2:
    """d beta(g, h) = v(g) beta(h) v(g)* - beta(gh) + beta(g)."""
    _check_window(beta.window, lifted)
    v, b = lifted.values, beta.values
    g, h, gh = beta.window.pairs.T
    values = v[g] @ b[h] @ _adjoints(v[g]) - b[gh] + b[g]
    return Cochain2(beta.window, values)


def coboundary_matrix(lifted: Lift) -> sparse.csr_matrix:
    """
    Sparse matrix of beta -> d beta on row-major vectorized matrices.

    Columns are the k^2 entries of beta(g) for every non-identity window
    element (beta(1) is pinned to 0); rows are the k^2 entries of each
    admissible pair. vec(V X V*) = (V kron conj(V)) vec(X) for row-major vec.
    """
    window = lifted.window
    k = lifted.dim
    block = k * k
    identity = window.identity_index
    column = np.full(len(window), -1, dtype=int)
    unknown = [i for i in range(len(window)) if i != identity]
    column[unknown] = np.arange(len(unknown)) * block

    pairs = window.pairs
    row = np.arange(len(pairs)) * block
    local = np.arange(block)
    rows, cols, data = [], [], []

    acting = pairs[:, 1] != identity
    if acting.any():
        v = lifted.values[pairs[acting, 0]]
        kron = np.einsum('pij,pkl->pikjl', v, np.conj(v)).reshape(-1, block, block)
        rows.append(np.broadcast_to(row[acting, None, None] + local[None, :, None], kron.shape).ravel())
        cols.append(np.broadcast_to(
            column[pairs[acting, 1]][:, None, None] + local[None, None, :], kron.shape).ravel())
        data.append(kron.ravel())

    for position, sign in ((2, -1.0), (0, 1.0)):
        mask = pairs[:, position] != identity
        count = int(mask.sum())
        rows.append((row[mask, None] + local[None, :]).ravel())
        cols.append((column[pairs[mask, position]][:, None] + local[None, :]).ravel())
        data.append(np.full(count * block, sign, dtype=complex))

    shape = (len(pairs) * block, len(unknown) * block)
    return sparse.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))), shape=shape
    ).tocsr()


def _solve_direct(matrix, rhs, rcond):
    rows, cols = matrix.shape
    try:
        if rows * cols <= DENSE_ENTRY_LIMIT:
            x = linalg.lstsq(matrix.toarray(), rhs, cond=rcond, lapack_driver='gelsd')[0]
            return x, 'dense-lstsq'
        # ker(M*M) = ker(M), so the minimal-norm solutions coincide
        adjoint = matrix.conj().T.tocsr()
        normal = (adjoint @ matrix).toarray()
        x = linalg.lstsq(normal, adjoint @ rhs, cond=rcond, lapack_driver='gelsd')[0]
        return x, 'normal-lstsq'
    except (linalg.LinAlgError, ValueError) as error:
        raise SolverError(f'Least-squares factorization failed: {error}', iterations=0) from error


def _solve_iterative(matrix, rhs, rtol, maxiter):
    # LSMR started at 0 converges to the minimal-norm least-squares solution
    result = lsmr(matrix, rhs, atol=rtol, btol=rtol, maxiter=maxiter)
    x, istop, iterations, residual = result[0], result[1], result[2], result[3]
    if istop == 7:
        raise SolverError(
            f'LSMR did not converge in {iterations} iterations (residual {residual:.3e})',
            residual=float(residual), iterations=int(iterations),
        )
    return x, int(iterations)


def solve_coboundary(alpha: Cochain2, lifted: Lift, method='auto', rtol=None, rcond=None,
                     direct_limit=None) -> CoboundarySolution:
    """
    Minimal-norm least-squares solution of d beta = alpha over the window,
    made skew-hermitian afterwards with beta(1) = 0. The reported residual
    is sqrt(sum ||d beta - alpha||^2) for the skew-hermitian beta.
    """
    _check_window(alpha.window, lifted)
    window = alpha.window
    k = lifted.dim
    rtol = settings.ASYMLAB_LSTSQ_RTOL if rtol is None else rtol
    rcond = settings.ASYMLAB_LSTSQ_RCOND if rcond is None else rcond
    direct_limit = settings.ASYMLAB_LSTSQ_DIRECT_LIMIT if direct_limit is None else direct_limit

    unknown = [i for i in range(len(window)) if i != window.identity_index]
    raw = np.zeros((len(window), k, k), dtype=complex)
    rhs = alpha.values.reshape(-1)
    iterations = 0
    if not unknown or not np.any(rhs):
        used = 'trivial'
    else:
        matrix = coboundary_matrix(lifted)
        real_unknowns = 2 * matrix.shape[1]
        if method == 'auto':
            method = 'direct' if real_unknowns <= direct_limit else 'iterative'
        if method == 'direct':
            x, used = _solve_direct(matrix, rhs, rcond)
        elif method == 'iterative':
            x, iterations = _solve_iterative(matrix, rhs, rtol, maxiter=10 * real_unknowns)
            used = 'lsmr'
        else:
            raise ValueError(f"Unknown solver method {method!r}")
        logger.debug(f'Coboundary solve: {matrix.shape[0]}x{matrix.shape[1]} system by {used}')
        raw[unknown] = x.reshape(len(unknown), k, k)

    values = (raw - _adjoints(raw)) / 2
    values[window.identity_index] = 0
    beta = Cochain1(window, values)
    difference = coboundary1(beta, lifted).values - alpha.values
    residual = float(np.sqrt(np.sum(np.abs(difference) ** 2)))
    return CoboundarySolution(beta=beta, residual=residual, iterations=iterations, method=used)


def _check_skew(beta: Cochain1, indices, tol):
    tol = settings.ASYMLAB_SKEW_TOLERANCE if tol is None else tol
    values = beta.values[list(indices)]
    deviation = float(np.max(stack_norms(values + _adjoints(values)), initial=0.0))
    if deviation > tol:
        raise NotSkewHermitian(deviation, tol)


def corrected_values(lifted: Lift, beta: Cochain1, eps: float, tol=None) -> np.ndarray:
    """psi(g) = exp(-eps beta(g)) v(g) on every window element."""
    _check_window(beta.window, lifted)
    _check_skew(beta, range(len(beta.window)), tol)
    return np.stack([
        normkit.exp_skew(-eps * beta.values[i]) @ lifted.values[i] for i in range(len(beta.window))
    ])


def correct(lifted: Lift, beta: Cochain1, eps: float, tol=None) -> AlmostRep:
    """The corrected map psi restricted to the generators."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    _check_window(beta.window, lifted)
    window = beta.window
    if min(window.generator_indices, default=0) < 0:
        raise ValueError("Window must contain every generator; use radius >= 1")
    _check_skew(beta, window.generator_indices, tol)
    images = tuple(
        normkit.exp_skew(-eps * beta.values[i]) @ lifted.values[i] for i in window.generator_indices
    )
    return AlmostRep(window.group.presentation, images)


def diminish(phi: AlmostRep, group: NormalFormGroup, radius=None, max_iters=None,
             stall_factor=None, kind=NormKind.FROBENIUS):
    """
    Iterate lift -> cocycle -> solve -> correct while the defect (measured in
    ``kind``) shrinks by at least ``stall_factor`` per step. A step that does
    not shrink the defect is discarded; a step that shrinks it too little is
    kept and ends the run as stalled.
    """
    radius = settings.ASYMLAB_RADIUS if radius is None else radius
    max_iters = settings.ASYMLAB_MAX_ITERS if max_iters is None else max_iters
    stall_factor = settings.ASYMLAB_STALL_FACTOR if stall_factor is None else stall_factor
    if radius < 2:
        raise ValueError(f"Radius must be at least 2, got {radius}")
    if not 0 < stall_factor < 1:
        raise ValueError(f"Stall factor must lie in (0, 1), got {stall_factor}")

    window = ball(group, radius)
    current = phi
    eps = defect(current, NormKind.FROBENIUS)
    measured = defect(current, kind)
    report = CorrectionReport(measured, measured, 0.0, 0.0, 0)

    while report.iterations < max_iters and eps > ZERO_DEFECT:
        lifted = lift(current, group, window)
        alpha = to_group_cocycle(hochschild_cocycle(lifted, eps), lifted)
        solution = solve_coboundary(alpha, lifted)
        candidate = correct(lifted, solution.beta, eps)
        report.iterations += 1
        report.residual = solution.residual
        report.beta_norm = float(np.max(stack_norms(solution.beta.values), initial=0.0))

        candidate_measured = defect(candidate, kind)
        logger.info(
            f'Diminish step {report.iterations} on {group.name}: defect {measured:.3e} -> '
            f'{candidate_measured:.3e} (residual {solution.residual:.3e})'
        )
        if candidate_measured > stall_factor * measured:
            report.stalled = True
            if candidate_measured < measured:
                current, measured = candidate, candidate_measured
            logger.warning(f'Diminish stalled on {group.name} after {report.iterations} step(s)')
            break
        current, measured = candidate, candidate_measured
        eps = defect(current, NormKind.FROBENIUS)

    report.defect_after = measured
    return current, report


class CocycleResiduals(NamedTuple):
    hochschild_residual: float
    symmetry_residual: float
    group_cocycle_residual: float
    group_cocycle_defect: float


def cocycle_residuals(c: Cochain2, lifted: Lift) -> CocycleResiduals:
    """
    Maxima of the identity defects of c over the window:

    - v(g) c(h, k) - c(gh, k) + c(g, hk) - c(g, h) v(k)     (exact algebra)
    - c(g, h)* - c(h^-1, g^-1)
    - d alpha(g, h, k) with the conjugation action through v, after removing
      eps (v(g) c(h, k) c(g, hk)* - c(g, h) v(k) c(gh, k)*), the term by which
      v fails to be multiplicative. The raw maximum of ||d alpha|| is
      reported as ``group_cocycle_defect``.
    """
    _check_window(c.window, lifted)
    window = c.window
    v, values, position = lifted.values, c.values, window.pair_position

    g, h, gh = window.pairs.T
    partner = position[window.inverse[h], window.inverse[g]]
    symmetry = stack_norms(_adjoints(values) - values[partner])

    triples = window.triples()
    if not len(triples):
        return CocycleResiduals(0.0, float(np.max(symmetry, initial=0.0)), 0.0, 0.0)
    g, h, k, gh, hk, ghk = triples.T
    c_hk = values[position[h, k]]
    c_gh_k = values[position[gh, k]]
    c_g_hk = values[position[g, hk]]
    c_g_h = values[position[g, h]]
    hochschild = v[g] @ c_hk - c_gh_k + c_g_hk - c_g_h @ v[k]

    def alpha(c_values, product):
        return c_values @ _adjoints(v[product])

    d_alpha = (v[g] @ alpha(c_hk, hk) @ _adjoints(v[g]) - alpha(c_gh_k, ghk)
               + alpha(c_g_hk, ghk) - alpha(c_g_h, gh))
    second_order = c.eps * (v[g] @ c_hk @ _adjoints(c_g_hk) - c_g_h @ v[k] @ _adjoints(c_gh_k))

    return CocycleResiduals(
        hochschild_residual=float(np.max(stack_norms(hochschild))),
        symmetry_residual=float(np.max(symmetry, initial=0.0)),
        group_cocycle_residual=float(np.max(stack_norms(d_alpha - second_order))),
        group_cocycle_defect=float(np.max(stack_norms(d_alpha))),
    )


class IotaResiduals(NamedTuple):
    unit_residual: float
    inverse_residual: float
    hochschild_fit: float


def iota_residuals(beta: Cochain1, c: Cochain2, lifted: Lift) -> IotaResiduals:
    """
    How far beta is from satisfying beta(1) = 0,
    beta(g) = -v(g) beta(g^-1) v(g)*, and
    c(g, h) = v(g) beta(h) v(h) - beta(gh) v(gh) + beta(g) v(gh).
    """
    _check_window(beta.window, lifted)
    window = beta.window
    v, b = lifted.values, beta.values
    inverse = b + v @ b[window.inverse] @ _adjoints(v)
    g, h, gh = window.pairs.T
    fit = c.values - (v[g] @ b[h] @ v[h] - b[gh] @ v[gh] + b[g] @ v[gh])
    return IotaResiduals(
        unit_residual=float(np.linalg.norm(b[window.identity_index])),
        inverse_residual=float(np.max(stack_norms(inverse))),
        hochschild_fit=float(np.max(stack_norms(fit), initial=0.0)),
    )


class ConverseCochain(NamedTuple):
    beta: Cochain1
    hochschild_residual: float
    coboundary_residual: float


def converse_cochain(lift_phi: Lift, lift_psi: Lift, eps: float) -> ConverseCochain:
    """
    From an improved map psi, build gamma = (v_phi - v_psi) / eps and
    beta = gamma v_phi*. When psi is multiplicative on the window,
    c(g, h) = v_phi(g) gamma(h) - gamma(gh) + gamma(g) v_psi(h) holds exactly and
    d beta = alpha up to O(eps).
    """
    if lift_phi.window is not lift_psi.window:
        raise PresentationMismatch("Both lifts must live on the same window")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    window = lift_phi.window
    v, w = lift_phi.values, lift_psi.values
    gamma = (v - w) / eps
    c = hochschild_cocycle(lift_phi, eps)
    g, h, gh = window.pairs.T
    hochschild = c.values - (v[g] @ gamma[h] - gamma[gh] + gamma[g] @ w[h])

    beta = Cochain1(window, gamma @ _adjoints(v))
    alpha = to_group_cocycle(c, lift_phi)
    difference = coboundary1(beta, lift_phi).values - alpha.values
    return ConverseCochain(
        beta=beta,
        hochschild_residual=float(np.max(stack_norms(hochschild), initial=0.0)),
        coboundary_residual=float(np.sqrt(np.sum(np.abs(difference) ** 2))),
    )
