"""
Presentations, normal-form group backends and finite windows.

A backend represents group elements by hashable canonical values and knows
how to turn each element into a word of the free group (the section sigma).
Cochains live on a ``Window``: a finite, inversion-closed ball around the
identity together with its multiplication table.
"""
import logging
import string
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Hashable, List, Sequence, Tuple

import numpy as np

from . import words
from .exceptions import NoNormalFormBackend, WitnessMismatch, WordSyntaxError
from .words import EMPTY, Word

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Presentation:
    name: str
    generators: Tuple[str, ...]
    relators: Tuple[Word, ...]

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise ValueError(f"Duplicate generator names in {self.generators}")
        for name in self.generators:
            if not name or name[0] not in string.ascii_lowercase or not name.isalnum():
                raise ValueError(f"Invalid generator name: {name!r}")
        for relator in self.relators:
            if relator.is_empty:
                raise ValueError("Relators must be non-empty words")
            if any(g >= len(self.generators) for g in relator.generators()):
                raise ValueError(f"Relator uses a generator outside {self.generators}")

    @property
    def rank(self):
        return len(self.generators)

    def parse(self, text: str) -> Word:
        return words.parse_word(text, self.generators)

    def format(self, word: Word) -> str:
        return words.format_word(word, self.generators)

    @classmethod
    def from_text(cls, name: str, generators: Sequence[str], relators: Sequence[str]):
        generators = tuple(generators)
        parsed = tuple(words.parse_word(text, generators) for text in relators)
        return cls(name=name, generators=generators, relators=parsed)


def generator_names(rank: int) -> Tuple[str, ...]:
    if rank <= len(string.ascii_lowercase):
        return tuple(string.ascii_lowercase[:rank])
    return tuple(f"x{i}" for i in range(1, rank + 1))


class NormalFormGroup(ABC):
    """A group with solvable word problem given through canonical normal forms."""

    presentation: Presentation
    # longest normal form; None for infinite groups
    diameter = None

    @property
    def name(self):
        return self.presentation.name

    @property
    def rank(self):
        return self.presentation.rank

    @abstractmethod
    def identity(self) -> Hashable:
        ...

    @abstractmethod
    def multiply(self, g, h):
        ...

    @abstractmethod
    def invert(self, g):
        ...

    @abstractmethod
    def generator(self, index: int):
        ...

    @abstractmethod
    def normal_form(self, g) -> Word:
        ...

    @abstractmethod
    def is_positive(self, g) -> bool:
        """Pick the canonical member of each pair {g, g^-1} with g^2 != 1."""

    @abstractmethod
    def relator_witness(self, word: Word) -> List[Tuple[Word, Word, int]]:
        """Express a word in the normal closure of the relators as a product of conjugates."""

    def is_involution(self, g) -> bool:
        return g != self.identity() and self.multiply(g, g) == self.identity()

    def section(self, g) -> Word:
        """
        The section sigma: sigma(1) is empty and sigma(g^-1) = sigma(g)^-1
        whenever g^2 != 1.
        """
        if g == self.identity() or self.is_involution(g) or self.is_positive(g):
            return self.normal_form(g)
        return words.invert(self.normal_form(self.invert(g)))

    def element_of(self, word: Word):
        element = self.identity()
        for index, sign in word.letters:
            factor = self.generator(index)
            if sign == -1:
                factor = self.invert(factor)
            element = self.multiply(element, factor)
        return element


class FreeAbelianGroup(NormalFormGroup):
    """Z^d with normal form a_1^i_1 ... a_d^i_d."""

    def __init__(self, d: int):
        if d < 1:
            raise ValueError(f"Rank must be positive, got {d}")
        self.d = d
        names = generator_names(d)
        relators = []
        self._relator_of_pair = {}
        for i in range(d):
            for j in range(i + 1, d):
                self._relator_of_pair[(i, j)] = len(relators)
                relators.append(words.commutator(words.letter(i), words.letter(j)))
        self.presentation = Presentation(name=f"z^{d}", generators=names, relators=tuple(relators))

    def identity(self):
        return (0,) * self.d

    def multiply(self, g, h):
        return tuple(x + y for x, y in zip(g, h))

    def invert(self, g):
        return tuple(-x for x in g)

    def generator(self, index):
        return tuple(1 if i == index else 0 for i in range(self.d))

    def normal_form(self, g):
        letters = []
        for index, exponent in enumerate(g):
            letters.extend(words.power(index, exponent).letters)
        return Word(tuple(letters))

    def is_positive(self, g):
        for exponent in g:
            if exponent:
                return exponent > 0
        return True

    def _swap_witness(self, i, s, j, t):
        """Write [a_i^s, a_j^t] (i > j) as a conjugate of the relator [a_j, a_i]^(+-1)."""
        relator = self.presentation.relators[self._relator_of_pair[(j, i)]]
        if s == 1 and t == 1:
            return EMPTY, relator, -1
        if s == -1 and t == 1:
            return words.letter(i, -1), relator, 1
        if s == 1 and t == -1:
            return words.letter(j, -1), relator, 1
        return Word(((i, -1), (j, -1))), relator, -1

    def relator_witness(self, word):
        if any(word.exponent_sums(self.d)):
            raise WitnessMismatch(f"{self.presentation.format(word)} is not trivial in {self.name}")
        witness = []
        current = list(word.letters)
        while True:
            current = list(words.reduce(current).letters)
            for position in range(len(current) - 1):
                (gx, sx), (gy, sy) = current[position], current[position + 1]
                if gx > gy:
                    break
            else:
                break
            # u x y v = (u [x, y] u^-1) (u y x v)
            prefix = Word(tuple(current[:position]))
            conjugator, relator, sign = self._swap_witness(gx, sx, gy, sy)
            witness.append((words.multiply(prefix, conjugator), relator, sign))
            current[position], current[position + 1] = current[position + 1], current[position]
        return witness


class CyclicGroup(NormalFormGroup):
    """Z/m with exponents in the symmetric range (-ceil(m/2), floor(m/2)]."""

    def __init__(self, m: int):
        if m < 1:
            raise ValueError(f"Order must be positive, got {m}")
        self.m = m
        self.diameter = m // 2
        self.presentation = Presentation(
            name=f"cyclic:{m}", generators=('a',), relators=(words.power(0, m),)
        )

    def _normalize(self, exponent):
        residue = exponent % self.m
        return residue - self.m if residue > self.m // 2 else residue

    def identity(self):
        return 0

    def multiply(self, g, h):
        return self._normalize(g + h)

    def invert(self, g):
        return self._normalize(-g)

    def generator(self, index):
        if index != 0:
            raise IndexError(f"{self.name} has a single generator")
        return self._normalize(1)

    def normal_form(self, g):
        return words.power(0, g)

    def is_positive(self, g):
        return g > 0

    def relator_witness(self, word):
        (exponent,) = word.exponent_sums(1)
        if exponent % self.m:
            raise WitnessMismatch(f"{self.presentation.format(word)} is not trivial in {self.name}")
        sign = 1 if exponent >= 0 else -1
        relator = self.presentation.relators[0]
        return [(EMPTY, relator, sign)] * (abs(exponent) // self.m)


def free_abelian(d: int) -> FreeAbelianGroup:
    return FreeAbelianGroup(d)


def cyclic(m: int) -> CyclicGroup:
    return CyclicGroup(m)


def bs_presentation(m: int, n: int) -> Presentation:
    """The Baumslag-Solitar presentation <a, b | b^-1 a^m b a^-n>."""
    if m == 0 or n == 0:
        raise ValueError("Baumslag-Solitar exponents must be nonzero")
    a, b = 0, 1
    relator = words.reduce(
        ((b, -1),) + words.power(a, m).letters + ((b, 1),) + words.power(a, -n).letters
    )
    return Presentation(name=f"bs:{m}:{n}", generators=('a', 'b'), relators=(relator,))


def _positive_int(text, selector):
    try:
        value = int(text)
    except ValueError:
        raise WordSyntaxError(f"Expected an integer in {selector!r}, got {text!r}") from None
    if value < 1:
        raise WordSyntaxError(f"Expected a positive integer in {selector!r}, got {value}")
    return value


def group_by_name(name: str) -> NormalFormGroup:
    """Resolve ``z^d`` or ``cyclic:m``; ``bs:m:n`` has no normal-form backend."""
    name = name.strip()
    if name.startswith('z^'):
        return free_abelian(_positive_int(name[2:], name))
    if name.startswith('cyclic:'):
        return cyclic(_positive_int(name[len('cyclic:'):], name))
    if name.startswith('bs:'):
        raise NoNormalFormBackend(f"{name} has a presentation but no normal-form backend")
    raise WordSyntaxError(f"Unknown group {name!r}; expected z^d, cyclic:m or bs:m:n")


def presentation_by_name(name: str) -> Presentation:
    name = name.strip()
    if name.startswith('bs:'):
        parts = name.split(':')
        if len(parts) != 3:
            raise WordSyntaxError(f"Expected bs:m:n, got {name!r}")
        try:
            m, n = int(parts[1]), int(parts[2])
        except ValueError:
            raise WordSyntaxError(f"Expected integer exponents in {name!r}") from None
        return bs_presentation(m, n)
    return group_by_name(name).presentation


class Window:
    """
    A finite, inversion-closed set of group elements containing the identity.

    ``product[i, j]`` is the index of ``elements[i] * elements[j]`` or -1 when
    the product leaves the window. A pair is admissible when its product is
    inside; ``pairs`` lists them as rows ``(g, h, gh)`` in row-major order.
    """

    def __init__(self, group: NormalFormGroup, elements: Sequence[Hashable]):
        self.group = group
        self.elements = tuple(elements)
        self.index = {element: i for i, element in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("Window elements must be distinct")
        identity = group.identity()
        if identity not in self.index:
            raise ValueError("Window must contain the identity")
        self.identity_index = self.index[identity]

        size = len(self.elements)
        self.inverse = np.empty(size, dtype=int)
        for i, element in enumerate(self.elements):
            inverse = group.invert(element)
            if inverse not in self.index:
                raise ValueError("Window must be closed under inversion")
            self.inverse[i] = self.index[inverse]

        self.product = np.full((size, size), -1, dtype=int)
        for i, g in enumerate(self.elements):
            for j, h in enumerate(self.elements):
                self.product[i, j] = self.index.get(group.multiply(g, h), -1)

        rows, cols = np.nonzero(self.product >= 0)
        self.pairs = np.stack([rows, cols, self.product[rows, cols]], axis=1)
        self.pair_position = np.full((size, size), -1, dtype=int)
        self.pair_position[rows, cols] = np.arange(len(rows))

        self.generator_indices = tuple(
            self.index.get(group.generator(i), -1) for i in range(group.rank)
        )
        self.involutions = frozenset(
            i for i, element in enumerate(self.elements) if group.is_involution(element)
        )

    def __len__(self):
        return len(self.elements)

    def __contains__(self, element):
        return element in self.index

    def triples(self) -> np.ndarray:
        """Rows ``(g, h, k, gh, hk, ghk)`` with every product inside the window."""
        rows = []
        for g, h, gh in self.pairs:
            hk = self.product[h]
            ghk = self.product[gh]
            ks = np.nonzero((hk >= 0) & (ghk >= 0))[0]
            if len(ks):
                block = np.empty((len(ks), 6), dtype=int)
                block[:, 0], block[:, 1], block[:, 2] = g, h, ks
                block[:, 3], block[:, 4], block[:, 5] = gh, hk[ks], ghk[ks]
                rows.append(block)
        if not rows:
            return np.empty((0, 6), dtype=int)
        return np.concatenate(rows)


def ball(group: NormalFormGroup, radius: int) -> Window:
    """All elements of word length at most ``radius``, in breadth-first order."""
    if radius < 0:
        raise ValueError(f"Radius must be nonnegative, got {radius}")
    steps = []
    for i in range(group.rank):
        steps.append(group.generator(i))
        steps.append(group.invert(group.generator(i)))

    elements = [group.identity()]
    seen = {group.identity()}
    frontier = [group.identity()]
    for _ in range(radius):
        next_frontier = []
        for element in frontier:
            for step in steps:
                candidate = group.multiply(element, step)
                if candidate not in seen:
                    seen.add(candidate)
                    elements.append(candidate)
                    next_frontier.append(candidate)
        frontier = next_frontier
    logger.debug(f'Ball of radius {radius} in {group.name}: {len(elements)} elements')
    return Window(group, elements)
