"""Intuitionistic propositional formulas over meet, join, implication and the two constants.

Negation and bi-implication are parsed as sugar: ``~x`` is ``x -> 0`` and ``x <-> y`` is
``(x -> y) & (y -> x)``.
"""
import itertools
import re
from abc import ABC, abstractmethod
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

from km_forge import errors


class Formula(ABC):
    __slots__ = ("depth", "size", "arity")

    # binding strength used by the printer; atoms bind tightest
    precedence = 5
    # position in the constructor order Var < Bot < Top < Meet < Join < Impl
    rank = 0

    @abstractmethod
    def variables(self) -> FrozenSet[int]:
        ...

    @abstractmethod
    def key(self) -> tuple:
        ...

    def sort_key(self) -> tuple:
        return self.depth, self.size, self.key()

    def __eq__(self, other) -> bool:
        return isinstance(other, Formula) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __lt__(self, other: "Formula") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({to_text(self)})"


class Var(Formula):
    __slots__ = ("index",)

    def __init__(self, index: int):
        if index < 0:
            raise ValueError(f"Invalid variable index: {index}")
        self.index = index
        self.depth = 0
        self.size = 1
        self.arity = index + 1

    def variables(self) -> FrozenSet[int]:
        return frozenset((self.index,))

    def key(self) -> tuple:
        return self.rank, self.index


class Constant(Formula):
    __slots__ = ()

    def __init__(self):
        self.depth = 0
        self.size = 1
        self.arity = 0

    def variables(self) -> FrozenSet[int]:
        return frozenset()

    def key(self) -> tuple:
        return (self.rank,)


class Bot(Constant):
    __slots__ = ()
    rank = 1
    symbol = "0"


class Top(Constant):
    __slots__ = ()
    rank = 2
    symbol = "1"


class Binary(Formula):
    __slots__ = ("left", "right", "_key")

    symbol = ""
    # name of the operation table evaluating this connective
    operation = ""

    def __init__(self, left: Formula, right: Formula):
        self.left = left
        self.right = right
        self.depth = max(left.depth, right.depth) + 1
        self.size = left.size + right.size + 1
        self.arity = max(left.arity, right.arity)
        self._key = None

    def variables(self) -> FrozenSet[int]:
        return self.left.variables() | self.right.variables()

    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.rank, self.left.key(), self.right.key())
        return self._key


class Meet(Binary):
    __slots__ = ()
    rank = 3
    precedence = 3
    symbol = "&"
    operation = "meet"


class Join(Binary):
    __slots__ = ()
    rank = 4
    precedence = 2
    symbol = "|"
    operation = "join"


class Impl(Binary):
    __slots__ = ()
    rank = 5
    precedence = 1
    symbol = "->"
    operation = "impl"


BOT = Bot()
TOP = Top()
CONNECTIVES = (Meet, Join, Impl)


def neg(f: Formula) -> Formula:
    return Impl(f, BOT)


def biimp(f: Formula, g: Formula) -> Formula:
    return Meet(Impl(f, g), Impl(g, f))


def substitute(f: Formula, replacements: Dict[int, Formula]) -> Formula:
    if isinstance(f, Var):
        return replacements.get(f.index, f)
    if isinstance(f, Binary):
        return type(f)(substitute(f.left, replacements), substitute(f.right, replacements))
    return f


def variable_name(index: int) -> str:
    return f"p{index}"


def _paren_if(cond: bool, text: str) -> str:
    return f"({text})" if cond else text


def to_text(f: Formula) -> str:
    if isinstance(f, Var):
        return variable_name(f.index)
    if isinstance(f, Constant):
        return f.symbol
    if isinstance(f, Impl):
        # right-associative
        left = _paren_if(f.left.precedence <= f.precedence, to_text(f.left))
        right = _paren_if(f.right.precedence < f.precedence, to_text(f.right))
    else:
        # left-associative
        left = _paren_if(f.left.precedence < f.precedence, to_text(f.left))
        right = _paren_if(f.right.precedence <= f.precedence, to_text(f.right))
    return f"{left} {f.symbol} {right}"


_TOKEN = re.compile(r"\s*(<->|->|[&|~()]|[01⊥⊤]|[A-Za-z][A-Za-z0-9_]*)")
_INDEXED_VARIABLE = re.compile(r"p(\d+)")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = self._tokenize(text)
        self.pos = 0
        self.variables = self._number_variables()

    @staticmethod
    def _tokenize(text: str) -> List[Tuple[str, int]]:
        tokens = []
        i = 0
        while i < len(text):
            if text[i].isspace():
                i += 1
                continue
            match = _TOKEN.match(text, i)
            if match is None:
                raise errors.ParseError(f"unexpected character {text[i]!r}", position=i)
            tokens.append((match.group(1), match.start(1)))
            i = match.end()
        return tokens

    def _number_variables(self) -> Dict[str, int]:
        names = []
        for token, _ in self.tokens:
            if token[0].isalpha() and token not in names:
                names.append(token)
        if all(_INDEXED_VARIABLE.fullmatch(name) for name in names):
            return {name: int(name[1:]) for name in names}
        return {name: i for i, name in enumerate(names)}

    def peek(self) -> Optional[str]:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][0]
        return None

    def position(self) -> int:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][1]
        return len(self.text)

    def take(self, expected: Optional[str] = None) -> str:
        token = self.peek()
        if token is None:
            raise errors.ParseError("unexpected end of input", position=self.position())
        if expected is not None and token != expected:
            raise errors.ParseError(f"expected {expected!r}, found {token!r}", position=self.position())
        self.pos += 1
        return token

    def parse(self) -> Formula:
        if not self.tokens:
            raise errors.ParseError("empty formula", position=0)
        f = self.biimplication()
        if self.peek() is not None:
            raise errors.ParseError(f"unexpected {self.peek()!r}", position=self.position())
        return f

    def biimplication(self) -> Formula:
        left = self.implication()
        if self.peek() == "<->":
            self.take()
            return biimp(left, self.biimplication())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Impl(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == "|":
            self.take()
            f = Join(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = Meet(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.peek() == "~":
            self.take()
            return neg(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        position = self.position()
        token = self.take()
        if token == "(":
            f = self.biimplication()
            self.take(")")
            return f
        if token in ("0", "⊥"):
            return BOT
        if token in ("1", "⊤"):
            return TOP
        if token[0].isalpha():
            return Var(self.variables[token])
        raise errors.ParseError(f"unexpected {token!r}", position=position)


def parse(text: str) -> Formula:
    """Parse formula text.

    Variables are either all of the form ``p<k>`` (keeping k) or arbitrary identifiers numbered from 0
    in order of first appearance. Precedence from tightest: ``~``, ``&``, ``|``, ``->``, ``<->``;
    ``->`` and ``<->`` associate to the right.

    Raises:
        ParseError: malformed input, with the character offset of the offending token.
    """
    return _Parser(text).parse()


def atoms(nvars: int) -> List[Formula]:
    return [Var(i) for i in range(nvars)] + [BOT, TOP]


def enumerate_terms(nvars: int, max_depth: int) -> Iterator[Formula]:
    """Yield every formula over nvars variables and the constants up to max_depth, once each.

    Formulas come ordered by depth, then size, then constructor order of their subterms.
    """
    levels: List[List[Formula]] = [atoms(nvars)]
    yield from levels[0]
    for depth in range(1, max_depth + 1):
        shallower = list(itertools.chain.from_iterable(levels[:-1]))
        previous = levels[-1]
        level = []
        for connective in CONNECTIVES:
            for left, right in itertools.chain(
                itertools.product(previous, shallower),
                itertools.product(shallower, previous),
                itertools.product(previous, previous),
            ):
                level.append(connective(left, right))
        level.sort(key=Formula.sort_key)
        levels.append(level)
        yield from level
