"""
Explicit matrix families and their measurements.

``voiculescu`` is the clock/shift pair, almost commuting with no nearby
commuting pair; ``bs23`` is a pair in U(6n) almost satisfying the
Baumslag-Solitar relation b^-1 a^2 b = a^3 while keeping a^(b^-1 a b)
far from commuting; ``perturbed`` are small rotations of a genuine
diagonal representation, the inputs of the correction pipeline.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, NamedTuple, Tuple

import numpy as np

from . import normkit
from .almostrep import AlmostRep, defect, homdist_lower_bound_voiculescu
from .exceptions import NoNormalFormBackend, WordSyntaxError
from .groups import (CyclicGroup, FreeAbelianGroup, NormalFormGroup,
                     bs_presentation, free_abelian, group_by_name)
from .normkit import NormKind

logger = logging.getLogger(__name__)

PERTURBED_EPS = 0.01

B_BLOCK = np.array([
    [1, 1, 0, 0, 0, 0],
    [1, -1, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 0],
    [0, 0, 1, -1, 0, 0],
    [0, 0, 0, 0, 1, 1],
    [0, 0, 0, 0, 1, -1],
]) / np.sqrt(2)


def _root_of_unity(n):
    return np.exp(2j * np.pi / n)


def voiculescu_pair(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Clock A = diag(1, w, ..., w^(n-1)) and shift B e_i = e_(i+1), so A B A* B* = w."""
    if n < 2:
        raise ValueError(f"Dimension must be at least 2, got {n}")
    clock = np.diag(_root_of_unity(n) ** np.arange(n))
    shift = np.roll(np.eye(n, dtype=complex), 1, axis=0)
    return clock, shift


def voiculescu_rep(n: int) -> AlmostRep:
    return AlmostRep(free_abelian(2).presentation, voiculescu_pair(n))


@dataclass(frozen=True)
class BSBlockData:
    n: int
    omega: complex
    s_basis: Tuple[Tuple[int, ...], ...]
    c_basis: Tuple[Tuple[int, ...], ...]
    b_block: np.ndarray

    @classmethod
    def build(cls, n: int):
        if n < 1:
            raise ValueError(f"Block count must be positive, got {n}")
        s_basis = tuple(
            (3 * j, 3 * j + 1, 3 * j + 2, 3 * j + 3 * n, 3 * j + 3 * n + 1, 3 * j + 3 * n + 2)
            for j in range(n)
        )
        c_basis = tuple(
            (2 * j, 2 * j + 2 * n, 2 * j + 4 * n, 2 * j + 1, 2 * j + 2 * n + 1, 2 * j + 4 * n + 1)
            for j in range(n)
        )
        return cls(n=n, omega=_root_of_unity(6 * n), s_basis=s_basis, c_basis=c_basis, b_block=B_BLOCK)


def bs23_pair(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    A = diag(w^i) in U(6n), w = exp(2 pi i / 6n); B maps the j-th ordered C-basis
    onto the j-th ordered S-basis through the fixed 6x6 block.
    """
    data = BSBlockData.build(n)
    size = 6 * n
    a = np.diag(data.omega ** np.arange(size))
    b = np.zeros((size, size), dtype=complex)
    for s_rows, c_cols in zip(data.s_basis, data.c_basis):
        b[np.ix_(s_rows, c_cols)] = data.b_block
    return a, normkit.certify_unitary(b)


def bs23_rep(n: int) -> AlmostRep:
    return AlmostRep(bs_presentation(2, 3), bs23_pair(n))


def bs23_restrictions(n: int, j: int) -> Tuple[np.ndarray, np.ndarray]:
    """A restricted to the ordered S- and C-bases of block j."""
    data = BSBlockData.build(n)
    if not 0 <= j < n:
        raise IndexError(f"Block index {j} outside 0..{n - 1}")
    a, _ = bs23_pair(n)
    s_rows, c_rows = data.s_basis[j], data.c_basis[j]
    return a[np.ix_(s_rows, s_rows)], a[np.ix_(c_rows, c_rows)]


def bs23_defect(n: int, kind=NormKind.FROBENIUS) -> float:
    """||B^-1 A^2 B - A^3||."""
    a, b = bs23_pair(n)
    b_star = normkit.adjoint(b)
    return normkit.norm(b_star @ a @ a @ b - a @ a @ a, kind)


def bs23_block_bound(n: int) -> float:
    """Sum over blocks of ||S_j^2 - w^6j||^2 + ||C_j^3 - w^6j||^2 as a closed form."""
    omega = _root_of_unity(6 * n)
    per_block = (2 * (abs(1 - omega ** 2) ** 2 + abs(1 - omega ** 4) ** 2)
                 + 3 * abs(1 - omega ** 3) ** 2)
    return float(n * per_block)


def bs23_commutator_gap(n: int) -> float:
    """||A B^-1 A B - B^-1 A B A||_Frob; close to sqrt(6n)."""
    a, b = bs23_pair(n)
    conjugated = normkit.adjoint(b) @ a @ b
    return normkit.norm(a @ conjugated - conjugated @ a, NormKind.FROBENIUS)


def block_constant() -> float:
    s_tilde = np.diag([1, 1, 1, -1, -1, -1]).astype(complex)
    tau = np.exp(2j * np.pi / 3)
    c_tilde = np.diag([1, tau, tau ** 2, 1, tau, tau ** 2])
    conjugated = B_BLOCK.T @ s_tilde @ B_BLOCK
    return float(np.linalg.norm(c_tilde @ conjugated - conjugated @ c_tilde) ** 2)


def perturbed_rep(group: NormalFormGroup, k: int, eps: float, seed=None) -> AlmostRep:
    """s -> exp(eps X_s) pi(s) with pi diagonal and X_s skew of unit Frobenius norm."""
    if eps < 0:
        raise ValueError(f"Perturbation size must be nonnegative, got {eps}")
    if k < 1:
        raise ValueError(f"Dimension must be positive, got {k}")
    rng = normkit.as_generator(seed)
    if isinstance(group, CyclicGroup):
        phases = [rng.integers(group.m, size=k) / group.m for _ in range(group.rank)]
    elif isinstance(group, FreeAbelianGroup):
        phases = [rng.random(k) for _ in range(group.rank)]
    else:
        raise NoNormalFormBackend(f"No diagonal representation available for {group.name}")
    images = tuple(
        normkit.exp_skew(eps * normkit.random_skew(k, rng)) @ np.diag(np.exp(2j * np.pi * phase))
        for phase in phases
    )
    return AlmostRep(group.presentation, images)


class CommutatorEstimate(NamedTuple):
    lhs: float
    bound: float
    ok: bool


def near_identity_commutator(t, s, kind=NormKind.OPERATOR) -> CommutatorEstimate:
    """||T S T* S* - 1|| <= 2 ||T - 1|| ||S - 1|| for unitaries in a submultiplicative norm."""
    kind = NormKind(kind)
    if kind == NormKind.NORMALIZED_HS:
        raise ValueError("The estimate needs a submultiplicative norm")
    t, s = normkit.certify_unitary(t), normkit.certify_unitary(s)
    identity = np.eye(t.shape[0])
    lhs = normkit.norm(t @ s @ normkit.adjoint(t) @ normkit.adjoint(s) - identity, kind)
    bound = 2 * normkit.norm(t - identity, kind) * normkit.norm(s - identity, kind)
    return CommutatorEstimate(lhs, bound, lhs <= bound + 1e-10)


def _defect_columns(phi: AlmostRep):
    return {f'defect_{kind.value}': defect(phi, kind) for kind in NormKind}


def _measure_voiculescu(n, seed=None):
    row = _defect_columns(voiculescu_rep(n))
    row['homdist_lb'] = homdist_lower_bound_voiculescu(n)
    return row


def _measure_bs23(n, seed=None):
    row = {f'defect_{kind.value}': bs23_defect(n, kind) for kind in NormKind}
    gap = bs23_commutator_gap(n)
    row['commutator_gap'] = gap
    row['sqrt6n_minus_gap'] = float(np.sqrt(6 * n) - gap)
    return row


def _construct_perturbed(k, seed=None):
    return perturbed_rep(free_abelian(2), k, PERTURBED_EPS, seed)


def _measure_perturbed(k, seed=None):
    return _defect_columns(_construct_perturbed(k, seed))


@dataclass(frozen=True)
class Example:
    name: str
    construct: Callable
    measure: Callable
    extra_columns: Tuple[str, ...] = ()

    @property
    def columns(self):
        return ('n',) + tuple(f'defect_{kind.value}' for kind in NormKind) + self.extra_columns


EXAMPLES: Dict[str, Example] = {
    'voiculescu': Example('voiculescu', lambda n, seed=None: voiculescu_rep(n),
                          _measure_voiculescu, ('homdist_lb',)),
    'bs23': Example('bs23', lambda n, seed=None: bs23_rep(n),
                    _measure_bs23, ('commutator_gap', 'sqrt6n_minus_gap')),
    'perturbed': Example('perturbed', _construct_perturbed, _measure_perturbed),
}


def _selector_int(text, selector):
    try:
        return int(text)
    except ValueError:
        raise WordSyntaxError(f"Expected an integer in {selector!r}, got {text!r}") from None


def resolve_rep(selector: str):
    """
    Build ``(phi, group)`` from ``voiculescu:n``, ``bs23:n`` or
    ``perturbed:<group>:<k>:<eps>:<seed>``. ``group`` is None when the
    presentation has no normal-form backend.
    """
    kind, _, rest = selector.strip().partition(':')
    if kind == 'voiculescu':
        return voiculescu_rep(_selector_int(rest, selector)), free_abelian(2)
    if kind == 'bs23':
        return bs23_rep(_selector_int(rest, selector)), None
    if kind == 'perturbed':
        parts = rest.rsplit(':', 3)
        if len(parts) != 4:
            raise WordSyntaxError(f"Expected perturbed:<group>:<k>:<eps>:<seed>, got {selector!r}")
        group = group_by_name(parts[0])
        try:
            eps = float(parts[2])
        except ValueError:
            raise WordSyntaxError(f"Expected a real perturbation in {selector!r}") from None
        k, seed = _selector_int(parts[1], selector), _selector_int(parts[3], selector)
        return perturbed_rep(group, k, eps, seed), group
    raise WordSyntaxError(f"Unknown rep selector {selector!r}")
