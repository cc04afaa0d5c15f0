"""
Free-group words over a finite generator alphabet.

A word is a tuple of ``(generator, sign)`` letters, ``sign`` being +1 or -1.
Generators are integer indices into a presentation's alphabet; names only
matter for parsing and printing.
"""
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Tuple

import numpy as np

from .exceptions import DimensionMismatch, MissingGenerator, WordSyntaxError

Letter = Tuple[int, int]

_SUFFIX = re.compile(r"'|\^(-?\d+)")


@dataclass(frozen=True)
class Word:
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        for generator, sign in self.letters:
            if generator < 0 or sign not in (1, -1):
                raise ValueError(f"Invalid letter ({generator}, {sign})")
        for (g1, s1), (g2, s2) in zip(self.letters, self.letters[1:]):
            if g1 == g2 and s1 == -s2:
                raise ValueError("Word is not freely reduced; build it with reduce()")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other):
        return multiply(self, other)

    def __invert__(self):
        return invert(self)

    @property
    def is_empty(self):
        return not self.letters

    def generators(self):
        return {generator for generator, _ in self.letters}

    def exponent_sums(self, rank):
        sums = [0] * rank
        for generator, sign in self.letters:
            sums[generator] += sign
        return tuple(sums)


EMPTY = Word()


def reduce(letters: Iterable[Letter]) -> Word:
    stack = []
    for generator, sign in letters:
        if stack and stack[-1] == (generator, -sign):
            stack.pop()
        else:
            stack.append((generator, sign))
    return Word(tuple(stack))


def letter(generator: int, sign: int = 1) -> Word:
    return Word(((generator, sign),))


def power(generator: int, exponent: int) -> Word:
    sign = 1 if exponent >= 0 else -1
    return Word(((generator, sign),) * abs(exponent))


def multiply(w1: Word, w2: Word) -> Word:
    return reduce(w1.letters + w2.letters)


def invert(w: Word) -> Word:
    return Word(tuple((generator, -sign) for generator, sign in reversed(w.letters)))


def conjugate(x: Word, r: Word) -> Word:
    """Return x r x^-1."""
    return multiply(multiply(x, r), invert(x))


def commutator(x: Word, y: Word) -> Word:
    """Return x y x^-1 y^-1."""
    return reduce(x.letters + y.letters + invert(x).letters + invert(y).letters)


def conjugation_product(witness: Sequence[Tuple[Word, Word, int]]) -> Word:
    """
    Multiply out x_1 r_1^(s_1) x_1^-1 ... x_k r_k^(s_k) x_k^-1.

    The witness length k bounds ||phi(r) - 1|| by k times the defect of phi.
    """
    letters = []
    for x, r, sign in witness:
        if sign not in (1, -1):
            raise ValueError(f"Witness sign must be +1 or -1, got {sign}")
        factor = r if sign == 1 else invert(r)
        letters.extend(conjugate(x, factor).letters)
    return reduce(letters)


def evaluate(w: Word, assignment: Mapping[int, np.ndarray], dim: int = None) -> np.ndarray:
    """
    Evaluate ``w`` under a generator-to-unitary assignment.

    Inverse letters are evaluated as adjoints, so the assignment must be
    unitary for the result to be the image of ``w`` under the induced
    homomorphism of the free group.
    """
    sizes = {np.shape(matrix) for matrix in assignment.values()}
    if dim is not None:
        sizes.add((dim, dim))
    if len(sizes) > 1:
        raise DimensionMismatch(f"Assigned matrices have different shapes: {sorted(sizes)}")
    if not sizes:
        raise DimensionMismatch("Cannot evaluate without an assignment or an explicit dimension")
    (shape,) = sizes
    if len(shape) != 2 or shape[0] != shape[1]:
        raise DimensionMismatch(f"Assigned matrices must be square, got shape {shape}")

    missing = w.generators() - set(assignment)
    if missing:
        raise MissingGenerator(f"No image assigned to generators {sorted(missing)}")

    result = np.eye(shape[0], dtype=complex)
    adjoints = {}
    for generator, sign in w.letters:
        if sign == 1:
            factor = assignment[generator]
        else:
            if generator not in adjoints:
                adjoints[generator] = np.conj(assignment[generator]).T
            factor = adjoints[generator]
        result = result @ factor
    return result


def parse_word(text: str, names: Sequence[str]) -> Word:
    """
    Parse the text syntax ``b' a a b a^-1 a' a^-1``.

    Generators are matched longest-name first, so juxtaposition without
    spaces works whenever no name is a prefix of another. ``x^k`` with an
    integer ``k`` expands to ``|k|`` letters. ``1`` alone is the empty word.
    """
    stripped = text.strip()
    if stripped in ('', '1'):
        return EMPTY
    by_length = sorted(enumerate(names), key=lambda item: -len(item[1]))

    letters = []
    position = 0
    while position < len(text):
        if text[position].isspace():
            position += 1
            continue
        for index, name in by_length:
            if text.startswith(name, position):
                position += len(name)
                break
        else:
            raise WordSyntaxError(f"Unknown generator at position {position} in {text!r}")

        exponent = 1
        match = _SUFFIX.match(text, position)
        if match:
            position = match.end()
            if match.group(1) is not None:
                exponent = int(match.group(1))
            else:
                exponent = -1
        letters.extend(power(index, exponent).letters)
    return reduce(letters)


def format_word(w: Word, names: Sequence[str]) -> str:
    if w.is_empty:
        return '1'
    return ' '.join(names[g] if s == 1 else f"{names[g]}'" for g, s in w.letters)
