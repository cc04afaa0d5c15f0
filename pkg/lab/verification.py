"""
Invariant suites run by ``manage.py verify``.

Every check takes a seeded generator and a per-dimension trial count and
returns ``{"pass", "measured", "bound", "detail"}``. ``measured`` is the
worst value seen and ``bound`` the threshold it was compared against.
"""
import logging

import numpy as np

from . import normkit
from .almostrep import defect, lift, lift_bound_check
from .cohomology import (Cochain1, coboundary1, cocycle_residuals, diminish,
                         hochschild_cocycle, solve_coboundary)
from .examples import (bs23_block_bound, bs23_defect, block_constant,
                       near_identity_commutator, perturbed_rep,
                       voiculescu_rep)
from .groups import ball, cyclic, free_abelian
from .normkit import NormKind

logger = logging.getLogger(__name__)

DIMENSIONS = (2, 4, 8)
RELATIVE_TOLERANCE = 1e-10
GAIN_EPSILONS = (1e-1, 1e-2, 1e-3)


def _outcome(passed, measured, bound, detail=''):
    return {'pass': bool(passed), 'measured': float(measured), 'bound': float(bound), 'detail': detail}


def _worst_relative_excess(pairs):
    """max of (lhs - rhs) / max(1, rhs) over (lhs, rhs) pairs."""
    return max((lhs - rhs) / max(1.0, rhs) for lhs, rhs in pairs)


def check_unitary_invariance(rng, trials):
    worst = 0.0
    for k in DIMENSIONS:
        for _ in range(trials):
            a = normkit.random_matrix(k, rng)
            u, v = normkit.haar_unitary(k, rng), normkit.haar_unitary(k, rng)
            for kind in NormKind:
                reference = normkit.norm(a, kind)
                worst = max(worst, abs(normkit.norm(u @ a @ v, kind) - reference) / reference)
    return _outcome(worst <= RELATIVE_TOLERANCE, worst, RELATIVE_TOLERANCE)


def check_operator_sandwich(rng, trials):
    """||ABC|| <= ||A||_op ||B|| ||C||_op."""
    pairs = []
    for k in DIMENSIONS:
        for _ in range(trials):
            a, b, c = (normkit.random_matrix(k, rng) for _ in range(3))
            outer = normkit.norm(a, NormKind.OPERATOR) * normkit.norm(c, NormKind.OPERATOR)
            for kind in NormKind:
                pairs.append((normkit.norm(a @ b @ c, kind), outer * normkit.norm(b, kind)))
    worst = _worst_relative_excess(pairs)
    return _outcome(worst <= RELATIVE_TOLERANCE, worst, RELATIVE_TOLERANCE)


def check_adjoint_absolute(rng, trials):
    worst = 0.0
    for k in DIMENSIONS:
        for _ in range(trials):
            a = normkit.random_matrix(k, rng)
            absolute = normkit.absolute_value(a)
            for kind in NormKind:
                reference = normkit.norm(a, kind)
                for other in (normkit.adjoint(a), absolute):
                    worst = max(worst, abs(normkit.norm(other, kind) - reference) / reference)
    return _outcome(worst <= RELATIVE_TOLERANCE, worst, RELATIVE_TOLERANCE)


def check_monotonicity(rng, trials):
    """0 <= A <= B implies ||A|| <= ||B||."""
    worst = -np.inf
    for k in DIMENSIONS:
        for _ in range(trials):
            g, h = normkit.random_matrix(k, rng), normkit.random_matrix(k, rng)
            a = g @ normkit.adjoint(g)
            b = a + h @ normkit.adjoint(h)
            for kind in NormKind:
                worst = max(worst, normkit.norm(a, kind) - normkit.norm(b, kind))
    return _outcome(worst <= 1e-12, worst, 1e-12)


def _submultiplicative(rng, trials, kind):
    pairs = []
    for k in DIMENSIONS:
        for _ in range(trials):
            a, b = normkit.random_matrix(k, rng), normkit.random_matrix(k, rng)
            pairs.append((normkit.norm(a @ b, kind), normkit.norm(a, kind) * normkit.norm(b, kind)))
    worst = _worst_relative_excess(pairs)
    return _outcome(worst <= RELATIVE_TOLERANCE, worst, RELATIVE_TOLERANCE)


def check_submult_op(rng, trials):
    return _submultiplicative(rng, trials, NormKind.OPERATOR)


def check_submult_frob(rng, trials):
    return _submultiplicative(rng, trials, NormKind.FROBENIUS)


def check_hs_submult(rng, trials):
    """The normalized Hilbert-Schmidt norm is not submultiplicative."""
    a = np.diag([1.0, 0.0]).astype(complex)
    product = normkit.norm(a @ a, NormKind.NORMALIZED_HS)
    bound = normkit.norm(a, NormKind.NORMALIZED_HS) ** 2
    margin = product - bound
    detail = f'A = B = diag(1, 0): ||AB||_hs = {product:.6f} > ||A||_hs ||B||_hs = {bound:.6f}'
    return _outcome(margin >= 0.2, margin, 0.2, detail)


def check_quadclose(rng, trials):
    """B = nearest_involution(A) is a self-adjoint unitary with ||B - A|| <= ||1 - A^2||."""
    worst = 0.0
    for k in DIMENSIONS:
        identity = np.eye(k)
        for _ in range(min(trials, 100)):
            a = normkit.haar_unitary(k, rng)
            b = normkit.nearest_involution(a)
            worst = max(
                worst,
                np.linalg.norm(b - normkit.adjoint(b), 2),
                np.linalg.norm(b @ b - identity, 2),
            )
            for kind in NormKind:
                excess = normkit.norm(b - a, kind) - normkit.norm(identity - a @ a, kind)
                worst = max(worst, excess)
    return _outcome(worst <= RELATIVE_TOLERANCE, worst, RELATIVE_TOLERANCE)


def check_exp_bounds(rng, trials):
    """
    ||1 - exp(X)|| <= ||X|| e^||X|| in every norm and
    ||exp(X) - 1 - X|| <= ||X||^2 e^||X|| in the submultiplicative ones,
    for skew X with ||X||_op <= 2.
    """
    pairs = []
    for k in DIMENSIONS:
        identity = np.eye(k)
        for _ in range(trials):
            x = normkit.random_skew(k, rng)
            x *= 2 * rng.random() / normkit.norm(x, NormKind.OPERATOR)
            e = normkit.exp_skew(x)
            for kind in NormKind:
                size = normkit.norm(x, kind)
                pairs.append((normkit.norm(identity - e, kind), size * np.exp(size)))
                if kind != NormKind.NORMALIZED_HS:
                    pairs.append((normkit.norm(e - identity - x, kind), size ** 2 * np.exp(size)))
    worst = _worst_relative_excess(pairs)
    return _outcome(worst <= RELATIVE_TOLERANCE, worst, RELATIVE_TOLERANCE)


def check_norm_chain(rng, trials):
    """||T||_op <= ||T||_frob <= sqrt(n) ||T||_op for differences of unitaries."""
    pairs = []
    for k in DIMENSIONS:
        for _ in range(trials):
            t = normkit.haar_unitary(k, rng) - normkit.haar_unitary(k, rng)
            op = normkit.norm(t, NormKind.OPERATOR)
            frob = normkit.norm(t, NormKind.FROBENIUS)
            pairs.extend([(op, frob), (frob, np.sqrt(k) * op)])
    worst = _worst_relative_excess(pairs)
    return _outcome(worst <= RELATIVE_TOLERANCE, worst, RELATIVE_TOLERANCE)


def check_near_identity_commutator(rng, trials):
    worst = -np.inf
    for k in DIMENSIONS:
        for _ in range(trials):
            t = normkit.exp_skew(normkit.random_skew(k, rng, frobenius=rng.random()))
            s = normkit.exp_skew(normkit.random_skew(k, rng, frobenius=rng.random()))
            for kind in (NormKind.OPERATOR, NormKind.FROBENIUS):
                estimate = near_identity_commutator(t, s, kind)
                worst = max(worst, estimate.lhs - estimate.bound)
    return _outcome(worst <= RELATIVE_TOLERANCE, worst, RELATIVE_TOLERANCE)


def _cocycle_inputs(rng):
    yield free_abelian(2), voiculescu_rep(8), 3
    yield free_abelian(2), perturbed_rep(free_abelian(2), 8, 1e-2, rng), 3
    yield cyclic(6), perturbed_rep(cyclic(6), 8, 1e-2, rng), 3


def check_cocycle_identities(rng, trials):
    worst = 0.0
    for group, phi, radius in _cocycle_inputs(rng):
        lifted = lift(phi, group, ball(group, radius))
        c = hochschild_cocycle(lifted, defect(phi))
        scale = 1 + float(np.max(np.linalg.norm(c.values, axis=(1, 2))))
        residuals = cocycle_residuals(c, lifted)
        worst = max(worst, residuals.hochschild_residual / scale,
                    residuals.symmetry_residual / scale, residuals.group_cocycle_residual / scale)
    return _outcome(worst <= RELATIVE_TOLERANCE, worst, RELATIVE_TOLERANCE)


def check_lift_bound(rng, trials):
    group = free_abelian(2)
    phi = perturbed_rep(group, 4, 1e-2, rng)
    bound = lift_bound_check(phi, group, ball(group, 2))
    detail = f'{bound.checked} pairs, witness constants up to {bound.max_constant}'
    return _outcome(bound.ok, bound.violations, 0, detail)


def check_plant_recover(rng, trials):
    worst = 0.0
    for group, radius in ((cyclic(5), 2), (free_abelian(2), 2)):
        window = ball(group, radius)
        lifted = lift(perturbed_rep(group, 4, 0.0, rng), group, window)
        planted = np.stack([normkit.random_skew(4, rng) for _ in range(len(window))])
        planted[window.identity_index] = 0
        alpha = coboundary1(Cochain1(window, planted), lifted)
        worst = max(worst, solve_coboundary(alpha, lifted).residual)
    return _outcome(worst <= 1e-8, worst, 1e-8)


def check_involution_lift(rng, trials):
    group = cyclic(6)
    window = ball(group, 3)
    lifted = lift(perturbed_rep(group, 8, 1e-2, rng), group, window)
    identity = np.eye(8)
    worst = 0.0
    for i, (cost, bound) in lifted.repairs.items():
        value = lifted.values[i]
        worst = max(worst, np.linalg.norm(value - normkit.adjoint(value)),
                    np.linalg.norm(value @ value - identity), cost - bound)
    passed = bool(lifted.repairs) and worst <= RELATIVE_TOLERANCE
    return _outcome(passed, worst, RELATIVE_TOLERANCE, f'{len(lifted.repairs)} involution(s) repaired')


def check_quadratic_gain(rng, trials):
    """
    One correction step: defect_after <= 10 eps defect_before, and the ratio
    defect_after / defect_before falls at least threefold per decade of eps.
    """
    worst = 0.0
    slowest = np.inf
    for group, radius in ((free_abelian(2), 2), (cyclic(6), 3)):
        seed = int(rng.integers(2 ** 32))
        ratios = []
        for eps in GAIN_EPSILONS:
            phi = perturbed_rep(group, 8, eps, seed)
            _, report = diminish(phi, group, radius=radius, max_iters=1, stall_factor=0.99)
            worst = max(worst, report.defect_after / (eps * report.defect_before))
            ratios.append(report.defect_after / report.defect_before)
        slowest = min([slowest] + [coarse / fine for coarse, fine in zip(ratios, ratios[1:])])
    return _outcome(worst <= 10 and slowest >= 3, worst, 10, f'slowest ratio drop {slowest:.1f}')


def check_block_constant(rng, trials):
    value = block_constant()
    return _outcome(abs(value - 6) <= 1e-10, value, 6)


def check_voiculescu_exact(rng, trials):
    worst_op = worst_frob = 0.0
    for n in (2, 4, 8, 16, 32, 64, 128, 256, 512):
        phi = voiculescu_rep(n)
        gap = abs(1 - np.exp(2j * np.pi / n))
        worst_op = max(worst_op, abs(defect(phi, NormKind.OPERATOR) - gap))
        worst_frob = max(worst_frob, abs(defect(phi, NormKind.FROBENIUS) - np.sqrt(n) * gap))
    passed = worst_op <= 1e-10 and worst_frob <= 1e-8
    return _outcome(passed, worst_frob, 1e-8, f'operator-norm deviation {worst_op:.3e}')


def check_bs23_block_bound(rng, trials):
    worst = -np.inf
    for n in (1, 2, 4, 8, 16):
        worst = max(worst, bs23_defect(n, NormKind.FROBENIUS) ** 2 - bs23_block_bound(n))
    return _outcome(worst <= 1e-8, worst, 1e-8)


CHECKS = {
    'unitary-invariance': check_unitary_invariance,
    'operator-sandwich': check_operator_sandwich,
    'adjoint-absolute': check_adjoint_absolute,
    'monotonicity': check_monotonicity,
    'submult-op': check_submult_op,
    'submult-frob': check_submult_frob,
    'hs-submult': check_hs_submult,
    'quadclose': check_quadclose,
    'exp-bounds': check_exp_bounds,
    'norm-chain': check_norm_chain,
    'near-identity-commutator': check_near_identity_commutator,
    'cocycle-identities': check_cocycle_identities,
    'lift-bound': check_lift_bound,
    'plant-recover': check_plant_recover,
    'involution-lift': check_involution_lift,
    'quadratic-gain': check_quadratic_gain,
    'block-constant': check_block_constant,
    'voiculescu-exact': check_voiculescu_exact,
    'bs23-block-bound': check_bs23_block_bound,
}


def run_check(name, seed, trials):
    """Run one check with a generator derived from the seed and the check's position."""
    rng = np.random.default_rng([seed, list(CHECKS).index(name)])
    outcome = CHECKS[name](rng, trials)
    log = logger.info if outcome['pass'] else logger.warning
    log(f'Check {name}: measured {outcome["measured"]:.3e} against {outcome["bound"]:.3e}')
    return outcome
