"""
Formulas of intuitionistic inquisitive and dependence logic.

Syntax trees over atoms with bottom, conjunction, inquisitive disjunction,
implication and tensor; the ASCII parser and printer; standard
substitution, disjunctive normal form, the axiom schemata and the seeded
formula corpus used by the test suites.
"""
import itertools
import logging
import random
import re
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import pyparsing as pp


logger = logging.getLogger("InqWorkbench")

pp.ParserElement.enable_packrat()


class FormulaError(Exception):
    """Base class for syntax-level errors."""


class FormulaSyntaxError(FormulaError):
    """Text does not conform to the formula grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(message)
        self.position = position


class UnknownTokenError(FormulaSyntaxError):
    """A character sequence that is no token of the grammar."""


class NonStandardSubstituent(FormulaError):
    """A substitution maps an atom to a formula containing a disjunction."""


class SchemaArityMismatch(FormulaError):
    """Wrong number of arguments for an axiom schema."""


class NonStandardSlot(FormulaError):
    """A standard-only slot of an axiom schema received a disjunction."""


class UnknownSchema(FormulaError):
    """No axiom schema with the requested id."""


class _Node:
    """Behaviour shared by every formula node."""

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Atom(_Node):
    name: str

    def __post_init__(self):
        if not self.name:
            raise FormulaError("atom names must be nonempty")


@dataclass(frozen=True)
class Bot(_Node):
    pass


@dataclass(frozen=True)
class And(_Node):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or(_Node):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Impl(_Node):
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Tensor(_Node):
    left: "Formula"
    right: "Formula"


Formula = Union[Atom, Bot, And, Or, Impl, Tensor]
BINARY = (And, Or, Impl, Tensor)


# ---------------------------------------------------------------------------
# Derived operators (definitional rewrites, never separate nodes)
# ---------------------------------------------------------------------------

def neg(phi: Formula) -> Formula:
    return Impl(phi, Bot())


def top() -> Formula:
    return Impl(Bot(), Bot())


def conj(formulas: Sequence[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is top."""
    if not formulas:
        return top()
    result = formulas[0]
    for phi in formulas[1:]:
        result = And(result, phi)
    return result


def disj(formulas: Sequence[Formula]) -> Formula:
    """Left-nested inquisitive disjunction; the empty disjunction is bottom."""
    if not formulas:
        return Bot()
    result = formulas[0]
    for phi in formulas[1:]:
        result = Or(result, phi)
    return result


def _as_formula(item: Union[str, Formula]) -> Formula:
    return Atom(item) if isinstance(item, str) else item


def dep(antecedents: Sequence[Union[str, Formula]],
        consequent: Optional[Union[str, Formula]] = None) -> Formula:
    """
    Dependence atom.

    Args:
        antecedents: the determining formulas; a single one without
            consequent gives the constancy atom dep(p) = p or not p
        consequent: the determined formula

    Returns:
        The rewritten formula
    """
    def constancy(phi: Formula) -> Formula:
        return Or(phi, neg(phi))

    items = [_as_formula(a) for a in antecedents]
    if consequent is None:
        if len(items) != 1:
            raise FormulaError("dep without consequent takes exactly one argument")
        return constancy(items[0])
    if not items:
        return constancy(_as_formula(consequent))
    return Impl(conj([constancy(a) for a in items]), constancy(_as_formula(consequent)))


# ---------------------------------------------------------------------------
# Syntactic measures
# ---------------------------------------------------------------------------

def atoms(phi: Formula) -> List[str]:
    """Atom names of phi in lexicographic order."""
    found = set()
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            found.add(node.name)
        elif isinstance(node, BINARY):
            stack.extend((node.left, node.right))
    return sorted(found)


def subformulas(phi: Formula) -> List[Formula]:
    """Distinct subformulas, children before parents."""
    result: List[Formula] = []
    seen = set()

    def visit(node: Formula) -> None:
        if isinstance(node, BINARY):
            visit(node.left)
            visit(node.right)
        if node not in seen:
            seen.add(node)
            result.append(node)

    visit(phi)
    return result


def size(phi: Formula) -> int:
    if isinstance(phi, BINARY):
        return 1 + size(phi.left) + size(phi.right)
    return 1


def _contains(phi: Formula, kind: type) -> bool:
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, kind):
            return True
        if isinstance(node, BINARY):
            stack.extend((node.left, node.right))
    return False


def is_standard(phi: Formula) -> bool:
    """True iff phi contains no inquisitive disjunction."""
    return not _contains(phi, Or)


def in_lint(phi: Formula) -> bool:
    """True iff phi contains no tensor."""
    return not _contains(phi, Tensor)


def is_negation(phi: Formula) -> bool:
    return isinstance(phi, Impl) and isinstance(phi.right, Bot)


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

_SYMBOLS = {And: "&", Or: "\\/", Impl: "->", Tensor: "(*)"}
_PRECEDENCE = {Impl: 1, Or: 2, Tensor: 3, And: 4}
_TIGHTEST = 5


def _precedence(phi: Formula) -> int:
    if isinstance(phi, (Atom, Bot)) or is_negation(phi):
        return _TIGHTEST
    return _PRECEDENCE[type(phi)]


def _wrap(phi: Formula, minimum: int) -> str:
    text = to_text(phi)
    return text if _precedence(phi) >= minimum else f"({text})"


def to_text(phi: Formula) -> str:
    """Print phi in the ASCII grammar with minimal parentheses."""
    if isinstance(phi, Atom):
        return phi.name
    if isinstance(phi, Bot):
        return "_|_"
    if is_negation(phi):
        return "~" + _wrap(phi.left, _TIGHTEST)
    level = _PRECEDENCE[type(phi)]
    if isinstance(phi, Impl):
        # right-associative
        left, right = _wrap(phi.left, level + 1), _wrap(phi.right, level)
    else:
        left, right = _wrap(phi.left, level), _wrap(phi.right, level + 1)
    return f"{left} {_SYMBOLS[type(phi)]} {right}"


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s+|_\|_|->|\\/|\(\*\)|[()~&,;]|[a-z][a-z0-9]*")


def _scan_tokens(text: str) -> None:
    position = 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None:
            raise UnknownTokenError(
                f"unknown token {text[position]!r} at position {position}", position)
        position = match.end()


def _negation_action(tokens):
    items = list(tokens)
    body = items[-1]
    for _ in items[:-1]:
        body = neg(body)
    return body


def _left_action(node: Callable[[Formula, Formula], Formula]):
    def action(tokens):
        items = list(tokens)
        result = items[0]
        for operand in items[2::2]:
            result = node(result, operand)
        return result
    return action


def _implication_action(tokens):
    items = list(tokens)
    result = items[-1]
    for operand in reversed(items[:-1:2]):
        result = Impl(operand, result)
    return result


def _dependence_action(tokens):
    names = list(tokens[0])
    if len(tokens) > 1:
        return dep(names, tokens[1])
    if len(names) == 1:
        return dep(names)
    return dep(names[:-1], names[-1])


def _build_grammar() -> pp.ParserElement:
    name = pp.Regex(r"[a-z][a-z0-9]*")
    atom = name.copy().set_parse_action(lambda t: Atom(t[0]))
    bottom = pp.Literal("_|_").set_parse_action(lambda: Bot())

    names = pp.Group(name + pp.ZeroOrMore(pp.Suppress(",") + name))
    dependence = (
        pp.Regex(r"dep(?=\s*\()").suppress()
        + pp.Suppress("(")
        + names
        + pp.Optional(pp.Suppress(";") + name)
        + pp.Suppress(")")
    ).set_parse_action(_dependence_action)

    # one level per binding strength, tightest first; each level folds its
    # operator chain in the parse action so only parentheses recurse
    formula = pp.Forward()
    primary = bottom | dependence | atom | pp.Suppress("(") + formula + pp.Suppress(")")
    negation = (pp.ZeroOrMore(pp.Literal("~")) + primary).set_parse_action(_negation_action)

    def level(operand: pp.ParserElement, operator: pp.ParserElement, action) -> pp.ParserElement:
        return (operand + pp.ZeroOrMore(operator + operand)).set_parse_action(action)

    conjunction = level(negation, pp.Literal("&"), _left_action(And))
    tensor = level(conjunction, pp.Literal("(*)") | pp.Literal("(x)"), _left_action(Tensor))
    disjunction = level(tensor, pp.Literal("\\/"), _left_action(Or))
    formula <<= level(disjunction, pp.Literal("->"), _implication_action)
    return formula


_GRAMMAR = _build_grammar()


def parse(text: str) -> Formula:
    """
    Parse a formula written in the ASCII grammar.

    Args:
        text: formula text, e.g. "p -> (q \\/ r)"

    Returns:
        The syntax tree; negation, top and dependence atoms are rewritten

    Raises:
        UnknownTokenError: on a character outside the grammar
        FormulaSyntaxError: on any other parse failure, including nesting
            deeper than the interpreter stack allows
    """
    _scan_tokens(text)
    try:
        result = _GRAMMAR.parse_string(text, parse_all=True)
    except pp.ParseException as exc:
        raise FormulaSyntaxError(
            f"cannot parse formula at position {exc.loc}: {exc.msg}", exc.loc) from exc
    except RecursionError as exc:
        raise FormulaSyntaxError("formula nests too deeply to parse", 0) from exc
    return result[0]


# ---------------------------------------------------------------------------
# Substitution and normal form
# ---------------------------------------------------------------------------

def _substitute(phi: Formula, sigma: Mapping[str, Formula]) -> Formula:
    if isinstance(phi, Atom):
        return sigma.get(phi.name, phi)
    if isinstance(phi, Bot):
        return phi
    return type(phi)(_substitute(phi.left, sigma), _substitute(phi.right, sigma))


def substitute_standard(phi: Formula, sigma: Mapping[str, Formula]) -> Formula:
    """Simultaneous substitution of standard formulas for atoms."""
    for name, image in sorted(sigma.items()):
        if not is_standard(image):
            raise NonStandardSubstituent(f"substituent for {name} is not standard: {to_text(image)}")
    return _substitute(phi, sigma)


def dnf(phi: Formula) -> List[Formula]:
    """
    Standard disjuncts whose disjunction is team-equivalent to phi.

    Normalises children first; implication distributes over the
    antecedent's disjuncts and splits over the consequent's, the tensor
    and conjunction distribute over disjunction.
    """
    if isinstance(phi, (Atom, Bot)):
        return [phi]
    if isinstance(phi, Or):
        return dnf(phi.left) + dnf(phi.right)
    left, right = dnf(phi.left), dnf(phi.right)
    if isinstance(phi, And):
        return [And(a, b) for a in left for b in right]
    if isinstance(phi, Tensor):
        return [Tensor(a, b) for a in left for b in right]
    # Impl: (a1 or .. or an) -> (b1 or .. or bm)
    disjuncts = []
    for choice in itertools.product(range(len(right)), repeat=len(left)):
        disjuncts.append(conj([Impl(a, right[j]) for a, j in zip(left, choice)]))
    return disjuncts


# ---------------------------------------------------------------------------
# Axiom schemata
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AxiomSchema:
    """An axiom schema with its arity and the slots restricted to standard formulas."""
    name: str
    arity: int
    standard_slots: Tuple[int, ...]
    build: Callable[..., Formula]


def _schemas() -> Dict[str, AxiomSchema]:
    table = [
        ("A1", 2, (), lambda f, g: Impl(f, Impl(g, f))),
        ("A2", 3, (), lambda f, g, h: Impl(Impl(f, Impl(g, h)), Impl(Impl(f, g), Impl(f, h)))),
        ("A3", 2, (), lambda f, g: Impl(And(f, g), f)),
        ("A4", 2, (), lambda f, g: Impl(And(f, g), g)),
        ("A5", 2, (), lambda f, g: Impl(f, Impl(g, And(f, g)))),
        ("A6", 2, (), lambda f, g: Impl(f, Or(f, g))),
        ("A7", 2, (), lambda f, g: Impl(g, Or(f, g))),
        ("A8", 3, (), lambda f, g, h: Impl(Impl(f, h), Impl(Impl(g, h), Impl(Or(f, g), h)))),
        ("A9", 1, (), lambda f: Impl(Bot(), f)),
        ("A10", 3, (0,), lambda a, f, g: Impl(Impl(a, Or(f, g)), Or(Impl(a, f), Impl(a, g)))),
        ("A11", 2, (0, 1), lambda a, b: Impl(a, Tensor(a, b))),
        ("A12", 2, (0, 1), lambda a, b: Impl(Tensor(a, b), Tensor(b, a))),
        ("A13", 3, (), lambda f, g, h: Impl(Tensor(f, Or(g, h)), Or(Tensor(f, g), Tensor(f, h)))),
        ("A14", 4, (), lambda f, g, h, k: Impl(Impl(f, h), Impl(Impl(g, k), Impl(Tensor(f, g), Tensor(h, k))))),
        ("A15", 3, (0, 1, 2), lambda a, b, c: Impl(Impl(a, c), Impl(Impl(b, c), Impl(Tensor(a, b), c)))),
        # inqB: double negation for standard formulas
        ("DN", 1, (0,), lambda a: Impl(neg(neg(a)), a)),
    ]
    return {name: AxiomSchema(name, arity, slots, build) for name, arity, slots, build in table}


AXIOMS = _schemas()
INQI_SCHEMAS = tuple(f"A{i}" for i in range(1, 11))
DEPENDENCE_SCHEMAS = tuple(f"A{i}" for i in range(11, 16))


def axiom_instances(schema: str, args: Sequence[Union[str, Formula]]) -> Formula:
    """
    Instantiate an axiom schema.

    Args:
        schema: schema id, A1..A15 or DN (case-insensitive)
        args: one formula (or formula text) per slot

    Returns:
        The instantiated axiom
    """
    key = schema.upper()
    if key not in AXIOMS:
        raise UnknownSchema(f"unknown axiom schema {schema}")
    axiom = AXIOMS[key]
    formulas = [parse(a) if isinstance(a, str) else a for a in args]
    if len(formulas) != axiom.arity:
        raise SchemaArityMismatch(f"{key} takes {axiom.arity} arguments, got {len(formulas)}")
    for slot in axiom.standard_slots:
        if not is_standard(formulas[slot]):
            raise NonStandardSlot(f"slot {slot + 1} of {key} requires a standard formula")
    return axiom.build(*formulas)


def double_negation_instance(alpha: Formula) -> Formula:
    return axiom_instances("DN", [alpha])


# ---------------------------------------------------------------------------
# Corpus generation
# ---------------------------------------------------------------------------

def random_formula(rng: random.Random, depth: int, atom_names: Sequence[str],
                   tensor: bool = True) -> Formula:
    """Random formula of depth at most `depth` over the given atoms."""
    if depth <= 0 or rng.random() < 0.2:
        if rng.random() < 0.1:
            return Bot()
        return Atom(rng.choice(list(atom_names)))
    kinds = [And, Or, Impl, "neg"] + ([Tensor] if tensor else [])
    kind = rng.choice(kinds)
    if kind == "neg":
        return neg(random_formula(rng, depth - 1, atom_names, tensor))
    return kind(random_formula(rng, depth - 1, atom_names, tensor),
                random_formula(rng, depth - 1, atom_names, tensor))


def atomic_axiom_instances(atom_names: Sequence[str],
                           schemas: Iterable[str] = INQI_SCHEMAS + DEPENDENCE_SCHEMAS) -> List[Formula]:
    """Every instance of the given schemas with atoms in all slots."""
    instances = []
    for name in schemas:
        schema = AXIOMS[name]
        for choice in itertools.product(atom_names, repeat=schema.arity):
            instances.append(schema.build(*[Atom(a) for a in choice]))
    return instances


def build_corpus(atom_names: Sequence[str] = ("p", "q"), count: int = 110,
                 depth: int = 3, seed: Optional[int] = 7) -> List[Formula]:
    """
    Axiom instances with atomic slots followed by seeded random formulas.

    Args:
        atom_names: atoms to draw from
        count: number of random formulas to draw
        depth: maximum depth of the random formulas
        seed: seed fixing the draw order, None for an unseeded draw

    Returns:
        Distinct formulas in a reproducible order
    """
    rng = random.Random(seed)
    candidates = atomic_axiom_instances(atom_names)
    candidates += [random_formula(rng, depth, atom_names) for _ in range(count)]
    corpus = list(dict.fromkeys(candidates))
    logger.debug(f"Corpus built: {len(corpus)} formulas (seed {seed})")
    return corpus
