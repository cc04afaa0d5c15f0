"""
Almost-representations S -> U(k) of a finitely presented group.

``defect`` and ``dist`` follow the usual local definitions (maximum over
relators, resp. generators). ``lift`` extends a map on generators to a
window of the group through the section sigma, normalized so that the
identity goes to 1 and inverses go to adjoints.
"""
import logging
from dataclasses import dataclass
from typing import Dict, NamedTuple, Tuple

import numpy as np
from django.conf import settings

from . import normkit, words
from .exceptions import (DimensionMismatch, MissingGenerator,
                         NotAHomomorphism, PresentationMismatch,
                         WitnessMismatch)
from .groups import NormalFormGroup, Presentation, Window
from .normkit import NormKind

logger = logging.getLogger(__name__)

BOUND_SLACK = 1e-10


@dataclass(frozen=True, eq=False)
class AlmostRep:
    presentation: Presentation
    images: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.images) != self.presentation.rank:
            raise MissingGenerator(
                f"{self.presentation.name} has {self.presentation.rank} generators, "
                f"got {len(self.images)} images"
            )
        shapes = {np.shape(image) for image in self.images}
        if len(shapes) != 1:
            raise DimensionMismatch(f"Generator images have different shapes: {sorted(shapes)}")
        frozen = []
        for image in self.images:
            image = normkit.certify_unitary(np.array(image, dtype=complex))
            image.setflags(write=False)
            frozen.append(image)
        object.__setattr__(self, 'images', tuple(frozen))

    @property
    def dim(self):
        return self.images[0].shape[0]

    @property
    def assignment(self) -> Dict[int, np.ndarray]:
        return dict(enumerate(self.images))

    def evaluate(self, word):
        return words.evaluate(word, self.assignment, dim=self.dim)

    def __repr__(self):
        return f"AlmostRep({self.presentation.name}, k={self.dim})"


def conjugate(phi: AlmostRep, u) -> AlmostRep:
    u = normkit.certify_unitary(u)
    u_star = normkit.adjoint(u)
    return AlmostRep(phi.presentation, tuple(u @ image @ u_star for image in phi.images))


def defect(phi: AlmostRep, kind=NormKind.FROBENIUS) -> float:
    identity = np.eye(phi.dim)
    return max(
        (normkit.norm(phi.evaluate(r) - identity, kind) for r in phi.presentation.relators),
        default=0.0,
    )


def _check_compatible(phi: AlmostRep, psi: AlmostRep):
    if phi.presentation != psi.presentation:
        raise PresentationMismatch(
            f"Cannot compare maps on {phi.presentation.name} and {psi.presentation.name}"
        )
    if phi.dim != psi.dim:
        raise DimensionMismatch(f"Cannot compare dimensions {phi.dim} and {psi.dim}")


def dist(phi: AlmostRep, psi: AlmostRep, kind=NormKind.FROBENIUS) -> float:
    _check_compatible(phi, psi)
    return max(normkit.norm(a - b, kind) for a, b in zip(phi.images, psi.images))


def dist_to_hom(phi: AlmostRep, pi: AlmostRep, kind=NormKind.FROBENIUS, tol=None) -> float:
    """Distance to a supplied genuine representation ``pi``."""
    tol = settings.ASYMLAB_HOM_TOLERANCE if tol is None else tol
    pi_defect = defect(pi, NormKind.OPERATOR)
    if pi_defect > tol:
        raise NotAHomomorphism(f"Candidate has operator-norm defect {pi_defect:.3e} > {tol:.1e}")
    return dist(phi, pi, kind)


def homdist_lower_bound_voiculescu(n: int) -> float:
    """sqrt(2 - |1 - omega_n|) - 1, a lower bound for the operator and Frobenius homdist."""
    if n < 2:
        raise ValueError(f"Dimension must be at least 2, got {n}")
    omega = np.exp(2j * np.pi / n)
    return float(np.sqrt(2 - abs(1 - omega)) - 1)


@dataclass(frozen=True, eq=False)
class Lift:
    """
    Values of an extension of phi to a window. ``repairs`` maps each
    involution index to ``(cost, bound)`` where ``cost`` is the distance moved
    to reach a self-adjoint unitary and ``bound`` is ||1 - phi(sigma(g))^2||.
    """
    window: Window
    values: np.ndarray
    repairs: Dict[int, Tuple[float, float]]

    @property
    def dim(self):
        return self.values.shape[1]

    def value(self, element):
        return self.values[self.window.index[element]]


def lift(phi: AlmostRep, group: NormalFormGroup, window: Window) -> Lift:
    if window.group is not group and window.group.name != group.name:
        raise PresentationMismatch(f"Window belongs to {window.group.name}, not {group.name}")
    if phi.presentation != group.presentation:
        raise PresentationMismatch(
            f"Map is defined on {phi.presentation.name}, group is {group.name}"
        )

    k = phi.dim
    identity = np.eye(k, dtype=complex)
    values = np.empty((len(window), k, k), dtype=complex)
    repairs = {}
    for i, element in enumerate(window.elements):
        if i == window.identity_index:
            values[i] = identity
        elif i in window.involutions:
            raw = phi.evaluate(group.section(element))
            values[i] = normkit.nearest_involution(raw)
            repairs[i] = (
                normkit.norm(values[i] - raw, NormKind.FROBENIUS),
                normkit.norm(identity - raw @ raw, NormKind.FROBENIUS),
            )
        elif group.is_positive(element):
            values[i] = phi.evaluate(group.section(element))
            values[window.inverse[i]] = normkit.adjoint(values[i])
    if repairs:
        logger.debug(f'Lift repaired {len(repairs)} involution(s) in {group.name}')
    values.setflags(write=False)
    return Lift(window=window, values=values, repairs=repairs)


def stack_norms(stack, kind=NormKind.FROBENIUS):
    """Norms of every matrix in a ``(m, k, k)`` stack."""
    stack = np.asarray(stack)
    if not len(stack):
        return np.zeros(0)
    kind = NormKind(kind)
    if kind == NormKind.OPERATOR:
        return np.linalg.norm(stack, ord=2, axis=(1, 2))
    frobenius = np.linalg.norm(stack, axis=(1, 2))
    if kind == NormKind.NORMALIZED_HS:
        return frobenius / np.sqrt(stack.shape[1])
    return frobenius


def multiplication_defect(values, window: Window, kind=NormKind.FROBENIUS) -> float:
    """max over admissible pairs of ||v(gh) - v(g) v(h)||."""
    g, h, gh = window.pairs.T
    return float(np.max(stack_norms(values[gh] - values[g] @ values[h], kind), initial=0.0))


class RelatorBound(NamedTuple):
    lhs: float
    bound: float
    ok: bool


def relator_bound_check(phi: AlmostRep, r, witness, kind=NormKind.FROBENIUS) -> RelatorBound:
    """||phi(r) - 1|| <= K defect(phi) with K the number of conjugates in the witness."""
    r = words.reduce(r.letters)
    if words.conjugation_product(witness) != r:
        raise WitnessMismatch("Witness does not multiply out to the given word")
    lhs = normkit.norm(phi.evaluate(r) - np.eye(phi.dim), kind)
    bound = len(witness) * defect(phi, kind)
    return RelatorBound(lhs=lhs, bound=bound, ok=lhs <= bound + BOUND_SLACK)


class LiftBound(NamedTuple):
    checked: int
    violations: int
    max_lhs: float
    max_constant: int
    ok: bool


def lift_bound_check(phi: AlmostRep, group: NormalFormGroup, window: Window,
                     kind=NormKind.FROBENIUS) -> LiftBound:
    """
    Check ||lift(gh) - lift(g) lift(h)|| <= K defect(phi) on every admissible
    pair away from involutions, K being the witness length of
    sigma(g) sigma(h) sigma(gh)^-1.
    """
    lifted = lift(phi, group, window)
    phi_defect = defect(phi, kind)
    checked = violations = max_constant = 0
    max_lhs = 0.0
    for g, h, gh in window.pairs:
        if {g, h, gh} & window.involutions:
            continue
        sections = [group.section(window.elements[i]) for i in (g, h, gh)]
        r = words.multiply(words.multiply(sections[0], sections[1]), words.invert(sections[2]))
        constant = len(group.relator_witness(r))
        lhs = normkit.norm(lifted.values[gh] - lifted.values[g] @ lifted.values[h], kind)
        checked += 1
        max_lhs = max(max_lhs, lhs)
        max_constant = max(max_constant, constant)
        if lhs > constant * phi_defect + BOUND_SLACK:
            violations += 1
    return LiftBound(checked, violations, max_lhs, max_constant, violations == 0)
