"""
Finite inquisitive and dependence algebras.

An algebra is given by a finite lattice order, a flagged core and an
optional tensor. Carriers are indexed 0..n-1; the order is stored as
bitmask rows (up[i] has bit j iff i <= j) and every operation as a lookup
table derived from the order.
"""
import itertools
import logging
from dataclasses import dataclass, replace
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from formula import And, Atom, Bot, Formula, Impl, Or, Tensor, atoms as formula_atoms, dnf, in_lint, subformulas
from reports import CheckReport


logger = logging.getLogger("InqWorkbench")

Table = Tuple[Tuple[int, ...], ...]
# atom name -> element index of the algebra it is used with
CoreValuation = Dict[str, int]

INQ = "inq"
DEP = "dep"


class AlgebraError(Exception):
    """Base class for algebra errors."""


class NotAPartialOrder(AlgebraError):
    """The given order is not antisymmetric."""


class NotALattice(AlgebraError):
    """A pair without glb or lub, or a zero that is not the bottom."""

    def __init__(self, pair: Tuple[str, ...], operation: str):
        super().__init__(f"no {operation} for {', '.join(pair)}")
        self.pair = pair
        self.operation = operation


class UnknownElement(AlgebraError):
    pass


class MissingAtom(AlgebraError):
    pass


class MissingTensor(AlgebraError):
    pass


class NotCoreElement(AlgebraError):
    pass


class NotInCoreClosure(AlgebraError):
    pass


class NotCoreSubset(AlgebraError):
    pass


class NotClosed(AlgebraError):
    """A carrier subset is not closed under a required operation."""


class XIsTop(AlgebraError):
    pass


class PhiIsValid(AlgebraError):
    pass


class NotWellConnected(AlgebraError):
    pass


@dataclass(frozen=True)
class FiniteAlgebra:
    """Finite lattice with Heyting implication tables, a core and an optional tensor."""
    elements: Tuple[str, ...]
    up: Tuple[int, ...]
    down: Tuple[int, ...]
    zero: int
    top: int
    core: FrozenSet[int]
    meet: Table
    join: Table
    impl: Table
    tensor: Optional[Table] = None

    @property
    def size(self) -> int:
        return len(self.elements)

    def le(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1)

    def lt(self, x: int, y: int) -> bool:
        return x != y and self.le(x, y)

    def neg(self, x: int) -> int:
        return self.impl[x][self.zero]

    def index(self, label: str) -> int:
        try:
            return self.elements.index(label)
        except ValueError:
            raise UnknownElement(f"unknown element {label}") from None

    def label(self, x: int) -> str:
        return self.elements[x]

    def labels(self, xs: Iterable[int]) -> List[str]:
        return [self.elements[x] for x in sorted(xs)]

    def operations(self) -> List[Table]:
        tables = [self.meet, self.join, self.impl]
        if self.tensor is not None:
            tables.append(self.tensor)
        return tables

    def with_core(self, core: Iterable[int]) -> "FiniteAlgebra":
        return replace(self, core=frozenset(core))

    def with_tensor(self, tensor: Optional[Table]) -> "FiniteAlgebra":
        return replace(self, tensor=tensor)

    def covers(self) -> List[Tuple[int, int]]:
        """Pairs x < y with nothing strictly between."""
        pairs = []
        for x in range(self.size):
            for y in range(self.size):
                if self.lt(x, y) and not any(self.lt(x, z) and self.lt(z, y) for z in range(self.size)):
                    pairs.append((x, y))
        return pairs

    def to_dict(self) -> Dict:
        """Convert to the algebra file format, tables included."""
        names = self.elements

        def render(table: Table) -> List[List[str]]:
            return [[names[v] for v in row] for row in table]

        data = {
            "elements": list(names),
            "leq": [[names[x], names[y]] for x, y in self.covers()],
            "zero": names[self.zero],
            "core": self.labels(self.core),
            "tables": {"meet": render(self.meet), "join": render(self.join), "impl": render(self.impl)},
        }
        if self.tensor is not None:
            data["tensor"] = [
                [names[x], names[y], names[self.tensor[x][y]]]
                for x in range(self.size) for y in range(self.size)
            ]
        return data

    @classmethod
    def from_dict(cls, data: Mapping) -> "FiniteAlgebra":
        """Load the algebra file format; operation tables are rederived from the order."""
        elements = list(data["elements"])
        tensor = None
        if data.get("tensor") is not None:
            tensor = {(x, y): z for x, y, z in data["tensor"]}
        return derive_tables(elements, data.get("leq", []), data["zero"],
                             data.get("core", elements), tensor)


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def assemble(elements: Sequence[str], up: Sequence[int], zero: int, core: Iterable[int],
             meet: Optional[Table] = None, join: Optional[Table] = None,
             impl: Optional[Table] = None, tensor: Optional[Table] = None) -> FiniteAlgebra:
    """
    Build an algebra from closed order rows, deriving any table not given.

    Args:
        elements: element labels
        up: reflexive, transitive order rows
        zero: index of the bottom
        core: core indices
        meet, join, impl, tensor: precomputed tables

    Returns:
        The algebra

    Raises:
        NotAPartialOrder: the rows are not antisymmetric
        NotALattice: a pair lacks a glb or lub, or zero is not the bottom
    """
    n = len(elements)
    if len(set(elements)) != n:
        raise AlgebraError("element labels must be distinct")
    down = [0] * n
    for i in range(n):
        for j in range(n):
            if up[i] >> j & 1:
                down[j] |= 1 << i
    for i in range(n):
        for j in range(i + 1, n):
            if up[i] >> j & 1 and up[j] >> i & 1:
                raise NotAPartialOrder(f"{elements[i]} and {elements[j]} are mutually below each other")
    full = (1 << n) - 1
    for x in range(n):
        if not up[zero] >> x & 1:
            raise NotALattice((elements[zero], elements[x]), "zero below")

    if meet is None:
        by_down = {row: i for i, row in enumerate(down)}
        meet = tuple(tuple(_lookup(by_down, down[x] & down[y], elements, x, y, "meet")
                           for y in range(n)) for x in range(n))
    if join is None:
        by_up = {row: i for i, row in enumerate(up)}
        join = tuple(tuple(_lookup(by_up, up[x] & up[y], elements, x, y, "join")
                           for y in range(n)) for x in range(n))
    top = zero
    for x in range(n):
        top = join[top][x]
    if down[top] != full:
        raise NotALattice((elements[top],), "top")
    if impl is None:
        impl = _residuation(n, down, join, zero)
    return FiniteAlgebra(tuple(elements), tuple(up), tuple(down), zero, top,
                         frozenset(core), meet, join, impl, tensor)


def _lookup(index: Dict[int, int], key: int, elements: Sequence[str], x: int, y: int, operation: str) -> int:
    if key not in index:
        raise NotALattice((elements[x], elements[y]), operation)
    return index[key]


def _residuation(n: int, down: Sequence[int], join: Table, zero: int) -> Table:
    """x -> y as the join of every c with c meet x below y."""
    rows = []
    for x in range(n):
        row = []
        for y in range(n):
            bad = down[x] & ~down[y]
            result = zero
            for c in range(n):
                if not down[c] & bad:
                    result = join[result][c]
            row.append(result)
        rows.append(tuple(row))
    return tuple(rows)


def derive_tables(elements: Sequence[str], leq: Iterable[Sequence[str]], zero: str,
                  core: Optional[Iterable[str]] = None,
                  tensor: Optional[Mapping[Tuple[str, str], str]] = None) -> FiniteAlgebra:
    """
    Build an algebra from labelled order pairs.

    Args:
        elements: element labels
        leq: pairs (a, b) meaning a <= b; closed reflexively and transitively
        zero: label of the bottom
        core: core labels (all elements when omitted)
        tensor: total map (x, y) -> x tensor y, by labels

    Returns:
        The algebra with meet, join and implication tables
    """
    position = {label: i for i, label in enumerate(elements)}

    def locate(label: str) -> int:
        if label not in position:
            raise UnknownElement(f"unknown element {label}")
        return position[label]

    n = len(elements)
    up = [1 << i for i in range(n)]
    for a, b in leq:
        up[locate(a)] |= 1 << locate(b)
    for k in range(n):
        for i in range(n):
            if up[i] >> k & 1:
                up[i] |= up[k]
    core_idx = [locate(c) for c in (elements if core is None else core)]
    table = None
    if tensor is not None:
        rows = []
        for x in elements:
            row = []
            for y in elements:
                if (x, y) not in tensor:
                    raise AlgebraError(f"tensor table is missing ({x}, {y})")
                row.append(locate(tensor[(x, y)]))
            rows.append(tuple(row))
        table = tuple(rows)
    algebra = assemble(list(elements), up, locate(zero), core_idx, tensor=table)
    logger.debug(f"Derived tables for a {n}-element algebra with {len(algebra.core)} core elements")
    return algebra


def chain(labels: Sequence[str], core: Optional[Iterable[str]] = None,
          tensor: bool = False) -> FiniteAlgebra:
    """Linear order in the given label order; tensor, when asked, is the join."""
    algebra = derive_tables(labels, zip(labels, labels[1:]), labels[0], core)
    return algebra.with_tensor(algebra.join) if tensor else algebra


def boolean_square(tensor: Optional[str] = None) -> FiniteAlgebra:
    """The four-element Boolean algebra 0 < a, b < 1 with full core; tensor 'join' or 'meet'."""
    algebra = derive_tables(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")], "0")
    if tensor == "join":
        return algebra.with_tensor(algebra.join)
    if tensor == "meet":
        return algebra.with_tensor(algebra.meet)
    return algebra


def product(first: FiniteAlgebra, second: FiniteAlgebra) -> FiniteAlgebra:
    """Componentwise product with product core; tensor when both factors carry one."""
    pairs = list(itertools.product(range(first.size), range(second.size)))
    labels = [f"({first.label(x)},{second.label(y)})" for x, y in pairs]
    up = []
    for x, y in pairs:
        row = 0
        for j, (u, v) in enumerate(pairs):
            if first.le(x, u) and second.le(y, v):
                row |= 1 << j
        up.append(row)
    position = {pair: i for i, pair in enumerate(pairs)}
    core = [position[(x, y)] for x, y in pairs if x in first.core and y in second.core]
    tensor = None
    if first.tensor is not None and second.tensor is not None:
        tensor = tuple(
            tuple(position[(first.tensor[x][u], second.tensor[y][v])] for u, v in pairs)
            for x, y in pairs
        )
    return assemble(labels, up, position[(first.zero, second.zero)], core, tensor=tensor)


# ---------------------------------------------------------------------------
# Closures and substructures
# ---------------------------------------------------------------------------

def close_under(seeds: Iterable[int], tables: Sequence[Table]) -> FrozenSet[int]:
    """Least superset of `seeds` closed under the binary tables."""
    result = set(seeds)
    frontier = list(result)
    while frontier:
        fresh = []
        for x in frontier:
            for y in list(result):
                for table in tables:
                    for z in (table[x][y], table[y][x]):
                        if z not in result:
                            result.add(z)
                            fresh.append(z)
        frontier = fresh
    return frozenset(result)


def core_closure(A: FiniteAlgebra) -> FrozenSet[int]:
    """The core superstructure: closure of core and zero under every operation."""
    return close_under(A.core | {A.zero}, A.operations())


def maximal_elements(A: FiniteAlgebra, xs: Iterable[int]) -> List[int]:
    pool = sorted(set(xs))
    return [x for x in pool if not any(A.lt(x, y) for y in pool)]


def _restrict(A: FiniteAlgebra, carrier: Iterable[int], core: Iterable[int],
              impl: Optional[Callable[[int, int], int]] = None,
              tensor: Optional[Callable[[int, int], int]] = None,
              derive_impl: bool = False, keep_tensor: bool = True) -> FiniteAlgebra:
    """
    Substructure on `carrier`, reindexed in carrier order.

    Meet and join are copied from A, implication and tensor are copied
    unless replacement functions (over A's indices) are given or the
    implication is to be derived from the restricted order.
    """
    order = sorted(set(carrier))
    position = {x: i for i, x in enumerate(order)}
    if A.zero not in position:
        raise NotClosed("carrier does not contain zero")

    def copy(function: Callable[[int, int], int], name: str) -> Table:
        rows = []
        for x in order:
            row = []
            for y in order:
                z = function(x, y)
                if z not in position:
                    raise NotClosed(f"{A.label(x)} {name} {A.label(y)} = {A.label(z)} leaves the carrier")
                row.append(position[z])
            rows.append(tuple(row))
        return tuple(rows)

    up = []
    for x in order:
        row = 0
        for j, y in enumerate(order):
            if A.le(x, y):
                row |= 1 << j
        up.append(row)
    meet = copy(lambda x, y: A.meet[x][y], "meet")
    join = copy(lambda x, y: A.join[x][y], "join")
    impl_table = None
    if impl is not None:
        impl_table = copy(impl, "impl")
    elif not derive_impl:
        impl_table = copy(lambda x, y: A.impl[x][y], "impl")
    tensor_table = None
    if tensor is not None:
        tensor_table = copy(tensor, "tensor")
    elif keep_tensor and A.tensor is not None:
        tensor_table = copy(lambda x, y: A.tensor[x][y], "tensor")
    return assemble([A.label(x) for x in order], up, position[A.zero],
                    [position[c] for c in core if c in position],
                    meet, join, impl_table, tensor_table)


def core_subalgebra(A: FiniteAlgebra) -> FiniteAlgebra:
    """A restricted to its core superstructure."""
    return _restrict(A, core_closure(A), A.core)


def substructures(A: FiniteAlgebra) -> Iterator[FiniteAlgebra]:
    """Every subset containing zero closed under all operations, with the inherited core."""
    if A.size > 16:
        raise AlgebraError("substructure enumeration is limited to 16 elements")
    others = [x for x in range(A.size) if x != A.zero]
    tables = A.operations()
    for bits in range(1 << len(others)):
        carrier = {A.zero} | {others[i] for i in range(len(others)) if bits >> i & 1}
        if close_under(carrier, tables) == carrier:
            yield _restrict(A, carrier, carrier & A.core)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

_OPERATION_SYMBOLS = {"meet": "&", "join": "\\/", "impl": "->", "tensor": "(*)"}


def _check_core_closed(A: FiniteAlgebra, names: Sequence[str]) -> CheckReport:
    if A.zero not in A.core:
        return CheckReport.violation("core-closure", A.label(A.zero), detail="zero is not core")
    core = sorted(A.core)
    for name in names:
        table = getattr(A, name)
        for a in core:
            for b in core:
                if table[a][b] not in A.core:
                    return CheckReport.violation(
                        "core-closure", A.label(a), _OPERATION_SYMBOLS[name], A.label(b),
                        detail=f"result {A.label(table[a][b])} is not core")
    return CheckReport.passed()


def _check_heyting(A: FiniteAlgebra, carrier: Sequence[int]) -> CheckReport:
    for x in carrier:
        for y in carrier:
            for z in carrier:
                if A.meet[x][A.join[y][z]] != A.join[A.meet[x][y]][A.meet[x][z]]:
                    return CheckReport.violation("distributivity", *A.labels((x, y, z)))
                if A.le(A.meet[x][y], z) != A.le(x, A.impl[y][z]):
                    return CheckReport.violation("residuation", A.label(x), A.label(y), A.label(z))
    return CheckReport.passed()


def _check_split(A: FiniteAlgebra, carrier: Sequence[int]) -> CheckReport:
    for a in sorted(A.core):
        for x in carrier:
            for y in carrier:
                if A.impl[a][A.join[x][y]] != A.join[A.impl[a][x]][A.impl[a][y]]:
                    return CheckReport.violation("split", A.label(a), A.label(x), A.label(y))
    return CheckReport.passed()


def validate_inq_algebra(A: FiniteAlgebra) -> CheckReport:
    """
    Check the inquisitive algebra laws.

    The core must contain zero and be closed under meet and implication,
    the core superstructure must be a Heyting algebra, and Split must hold
    for core antecedents.

    Returns:
        The first violation found, or a passing report
    """
    report = _check_core_closed(A, ["meet", "impl"])
    if not report:
        return report
    carrier = sorted(core_closure(A))
    report = _check_heyting(A, carrier)
    if not report:
        return report
    return _check_split(A, carrier)


def validate_dep_algebra(A: FiniteAlgebra) -> CheckReport:
    """
    Check the dependence algebra laws: the inquisitive laws, a Heyting core
    with the tensor as its join, Dist, and Mon (as the A14 inequality).
    """
    if A.tensor is None:
        return CheckReport.violation("tensor-missing")
    report = validate_inq_algebra(A)
    if not report:
        return report
    report = _check_core_closed(A, ["tensor"])
    if not report:
        return report
    core = sorted(A.core)
    for a in core:
        for b in core:
            t = A.tensor[a][b]
            bounds = [c for c in core if A.le(a, c) and A.le(b, c)]
            if not (A.le(a, t) and A.le(b, t)) or any(not A.le(t, c) for c in bounds):
                return CheckReport.violation("core-join", A.label(a), A.label(b))
            for c in core:
                if A.meet[a][A.tensor[b][c]] != A.tensor[A.meet[a][b]][A.meet[a][c]]:
                    return CheckReport.violation("core-distributivity", *A.labels((a, b, c)))
    carrier = sorted(core_closure(A))
    tensor, impl = A.tensor, A.impl
    for x in carrier:
        for y in carrier:
            for z in carrier:
                if tensor[x][A.join[y][z]] != A.join[tensor[x][y]][tensor[x][z]]:
                    return CheckReport.violation("dist", A.label(x), A.label(y), A.label(z))
    for x, y, z, k in itertools.product(carrier, repeat=4):
        if not A.le(A.meet[impl[x][z]][impl[y][k]], impl[tensor[x][y]][tensor[z][k]]):
            return CheckReport.violation("mon", A.label(x), A.label(y), A.label(z), A.label(k))
    return CheckReport.passed()


# ---------------------------------------------------------------------------
# Core semantics
# ---------------------------------------------------------------------------

def eval_core(A: FiniteAlgebra, mu: Mapping[str, int], phi: Formula) -> int:
    """Interpretation of phi under the core valuation mu."""
    if isinstance(phi, Atom):
        if phi.name not in mu:
            raise MissingAtom(f"valuation does not cover {phi.name}")
        value = mu[phi.name]
        if value not in A.core:
            raise NotCoreElement(f"{phi.name} is mapped to non-core element {A.label(value)}")
        return value
    if isinstance(phi, Bot):
        return A.zero
    left = eval_core(A, mu, phi.left)
    right = eval_core(A, mu, phi.right)
    if isinstance(phi, And):
        return A.meet[left][right]
    if isinstance(phi, Or):
        return A.join[left][right]
    if isinstance(phi, Impl):
        return A.impl[left][right]
    if isinstance(phi, Tensor):
        if A.tensor is None:
            raise MissingTensor("formula uses the tensor but the algebra has none")
        return A.tensor[left][right]
    raise TypeError(f"not a formula: {phi!r}")


def core_valuations(A: FiniteAlgebra, atom_names: Sequence[str]) -> Iterator[CoreValuation]:
    core = sorted(A.core)
    for values in itertools.product(core, repeat=len(atom_names)):
        yield dict(zip(atom_names, values))


def refuting_valuation(A: FiniteAlgebra, phi: Formula) -> Optional[CoreValuation]:
    """First core valuation (in canonical order) under which phi is not 1."""
    for mu in core_valuations(A, formula_atoms(phi)):
        if eval_core(A, mu, phi) != A.top:
            return mu
    return None


def algebra_valid(A: FiniteAlgebra, phi: Formula) -> bool:
    return refuting_valuation(A, phi) is None


def _compile_term(A: FiniteAlgebra, phi: Formula, variables: Sequence[str]) -> Callable[[Tuple[int, ...]], int]:
    if isinstance(phi, Atom):
        slot = variables.index(phi.name)
        return lambda env: env[slot]
    if isinstance(phi, Bot):
        zero = A.zero
        return lambda env: zero
    if isinstance(phi, Tensor) and A.tensor is None:
        raise MissingTensor("formula uses the tensor but the algebra has none")
    table = {And: A.meet, Or: A.join, Impl: A.impl, Tensor: A.tensor}[type(phi)]
    left = _compile_term(A, phi.left, variables)
    right = _compile_term(A, phi.right, variables)
    return lambda env: table[left(env)][right(env)]


def horn_check(A: FiniteAlgebra, target: Union[Formula, Tuple[Formula, Formula]]) -> bool:
    """
    Truth of the universal Horn sentence for a formula (term equals 1) or an
    equation (both terms equal), with variables ranging over core elements.
    """
    if isinstance(target, tuple):
        lhs_formula, rhs_formula = target
        variables = sorted(set(formula_atoms(lhs_formula)) | set(formula_atoms(rhs_formula)))
        lhs = _compile_term(A, lhs_formula, variables)
        rhs = _compile_term(A, rhs_formula, variables)
        holds = lambda env: lhs(env) == rhs(env)
    else:
        variables = formula_atoms(target)
        term = _compile_term(A, target, variables)
        one = A.top
        holds = lambda env: term(env) == one
    return all(holds(env) for env in itertools.product(sorted(A.core), repeat=len(variables)))


# ---------------------------------------------------------------------------
# Structure theory
# ---------------------------------------------------------------------------

def join_irreducibles(A: FiniteAlgebra) -> FrozenSet[int]:
    """Elements of the core superstructure that are no join of two strictly smaller ones."""
    carrier = core_closure(A)
    result = set()
    for x in carrier:
        below = [y for y in carrier if A.lt(y, x)]
        if not any(A.join[a][b] == x for a in below for b in below):
            result.add(x)
    return frozenset(result)


def is_well_connected(A: FiniteAlgebra) -> bool:
    carrier = sorted(core_closure(A))
    for x in carrier:
        for y in carrier:
            if A.join[x][y] == A.top and x != A.top and y != A.top:
                return False
    return True


def is_core_generated(A: FiniteAlgebra) -> bool:
    return len(core_closure(A)) == A.size


def second_greatest(A: FiniteAlgebra) -> Optional[int]:
    """The unique coatom of the core superstructure, if every non-top element lies below it."""
    rest = [x for x in core_closure(A) if x != A.top]
    coatoms = maximal_elements(A, rest)
    if len(coatoms) != 1:
        return None
    return coatoms[0]


def disjunctive_rep(A: FiniteAlgebra, x: int) -> List[int]:
    """Maximal core elements below x; their join is x."""
    if x not in core_closure(A):
        raise NotInCoreClosure(f"{A.label(x)} is not generated by the core")
    return maximal_elements(A, (c for c in A.core if A.le(c, x)))


def generated_subalgebra(A: FiniteAlgebra, X: Iterable[int]) -> FiniteAlgebra:
    """
    Smallest inquisitive subalgebra of A containing the core elements X.

    The core is the closure of X under meet, implication (and tensor) with
    zero; the carrier its closure under meet and join (and tensor). The
    implication is recomputed from disjunctive representations.
    """
    seeds = set(X)
    if not seeds <= A.core:
        raise NotCoreSubset(f"not core elements: {A.labels(seeds - A.core)}")
    extra = [A.tensor] if A.tensor is not None else []
    generated_core = close_under(seeds | {A.zero}, [A.meet, A.impl] + extra)
    carrier = close_under(generated_core, [A.meet, A.join] + extra)

    reps = {x: maximal_elements(A, (c for c in generated_core if A.le(c, x))) for x in carrier}

    def implication(x: int, y: int) -> int:
        # meet over c in rep(x) of the join over d in rep(y) of c -> d
        result = A.top
        for c in reps[x]:
            branch = A.zero
            for d in reps[y]:
                branch = A.join[branch][A.impl[c][d]]
            result = A.meet[result][branch]
        return result

    mismatches = [(x, y) for x in carrier for y in carrier if implication(x, y) != A.impl[x][y]]
    if mismatches:
        x, y = mismatches[0]
        logger.warning(f"Recomputed implication differs from the host at "
                       f"{A.label(x)} -> {A.label(y)} ({len(mismatches)} pairs)")
    return _restrict(A, carrier, generated_core, impl=implication)


# ---------------------------------------------------------------------------
# Homomorphisms and filters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraHom:
    """An element map between algebras with its flavour."""
    source: FiniteAlgebra
    target: FiniteAlgebra
    mapping: Tuple[int, ...]
    flavour: str = INQ
    report: Optional[CheckReport] = None

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def is_surjective(self) -> bool:
        return set(self.mapping) == set(range(self.target.size))

    def to_dict(self) -> Dict:
        data = {
            "flavour": self.flavour,
            "mapping": {self.source.label(x): self.target.label(y) for x, y in enumerate(self.mapping)},
        }
        if self.report is not None:
            data["check"] = self.report.to_dict()
        return data


def check_hom(h: AlgebraHom) -> CheckReport:
    """Commutation with meet, join, implication, zero (and tensor); core into core."""
    A, B, f = h.source, h.target, h.mapping
    if len(f) != A.size or any(not 0 <= y < B.size for y in f):
        return CheckReport.violation("mapping", detail="not a total map into the target")
    if f[A.zero] != B.zero:
        return CheckReport.violation("zero", A.label(A.zero))
    for a in sorted(A.core):
        if f[a] not in B.core:
            return CheckReport.violation("core", A.label(a))
    tables = [("meet", A.meet, B.meet), ("join", A.join, B.join), ("impl", A.impl, B.impl)]
    if h.flavour == DEP:
        if A.tensor is None or B.tensor is None:
            return CheckReport.violation("tensor-missing")
        tables.append(("tensor", A.tensor, B.tensor))
    for name, source_table, target_table in tables:
        for x in range(A.size):
            for y in range(A.size):
                if f[source_table[x][y]] != target_table[f[x]][f[y]]:
                    return CheckReport.violation(name, A.label(x), A.label(y))
    return CheckReport.passed()


def compose_homs(outer: AlgebraHom, inner: AlgebraHom) -> AlgebraHom:
    """outer after inner."""
    mapping = tuple(outer.mapping[y] for y in inner.mapping)
    flavour = DEP if outer.flavour == inner.flavour == DEP else INQ
    return AlgebraHom(inner.source, outer.target, mapping, flavour)


def filters(A: FiniteAlgebra) -> List[FrozenSet[int]]:
    """All filters; in a finite lattice these are the principal ones, listed by generator."""
    return [frozenset(y for y in range(A.size) if A.le(a, y)) for a in range(A.size)]


def wronski_quotient(H: FiniteAlgebra, x: int) -> Tuple[AlgebraHom, FiniteAlgebra]:
    """
    Quotient of a finite Heyting algebra sending x to the second greatest element.

    The filter is the one generated by the first minimal element not below
    x, i.e. a maximal filter avoiding x. The quotient is presented on the
    interval below that generator, with b mapped to a meet b.

    Returns:
        (surjective homomorphism, quotient algebra); the quotient's core is
        the image of H's core
    """
    if x == H.top:
        raise XIsTop(f"{H.label(x)} is the top element")
    avoiding = [a for a in range(H.size) if not H.le(a, x)]
    generator = min(a for a in avoiding if not any(H.lt(b, a) for b in avoiding))
    logger.debug(f"Wronski filter generated by {H.label(generator)} avoids {H.label(x)}")

    carrier = [b for b in range(H.size) if H.le(b, generator)]
    position = {b: i for i, b in enumerate(carrier)}
    up = []
    for b in carrier:
        row = 0
        for j, c in enumerate(carrier):
            if H.le(b, c):
                row |= 1 << j
        up.append(row)
    image = tuple(position[H.meet[generator][b]] for b in range(H.size))
    core = {image[c] for c in H.core}
    B = assemble([H.label(b) for b in carrier], up, position[H.zero], core)
    return AlgebraHom(H, B, image, INQ), B


# ---------------------------------------------------------------------------
# Finite refuters
# ---------------------------------------------------------------------------

def core_join_table(A: FiniteAlgebra) -> Dict[Tuple[int, int], int]:
    """Least core upper bound of each pair of core elements."""
    core = sorted(A.core)
    table = {}
    for a in core:
        for b in core:
            bound = A.top
            for c in core:
                if A.le(a, c) and A.le(b, c):
                    bound = A.meet[bound][c]
            table[(a, b)] = bound
    return table


def lift_tensor(A: FiniteAlgebra, core_tensor: Mapping[Tuple[int, int], int]) -> Callable[[int, int], int]:
    """x tensor y as the join of a tensor b over core pairs a <= x, b <= y."""
    core = sorted({a for a, _ in core_tensor})
    cache: Dict[Tuple[int, int], int] = {}

    def tensor(x: int, y: int) -> int:
        if (x, y) not in cache:
            result = A.zero
            for a in core:
                if not A.le(a, x):
                    continue
                for b in core:
                    if A.le(b, y):
                        result = A.join[result][core_tensor[(a, b)]]
            cache[(x, y)] = result
        return cache[(x, y)]

    return tensor


def _tabulate(A: FiniteAlgebra, function: Callable[[int, int], int]) -> Table:
    return tuple(tuple(function(x, y) for y in range(A.size)) for x in range(A.size))


def birkhoff_reduce(A: FiniteAlgebra, phi: Formula, flavour: str = INQ) -> FiniteAlgebra:
    """
    Finite, core-generated, well-connected algebra refuting phi.

    Restricts A to its core superstructure, takes the first refuting core
    valuation, and applies the Wronski quotient at the interpretation of
    phi. For the dependence flavour the quotient core gets the least core
    upper bound as tensor, lifted to the whole algebra.

    Raises:
        PhiIsValid: A validates phi
        MissingTensor: phi or the flavour needs a tensor A lacks
    """
    if (flavour == DEP or not in_lint(phi)) and A.tensor is None:
        raise MissingTensor("the dependence flavour needs a tensor")
    if not in_lint(phi) and flavour != DEP:
        raise MissingTensor("formulas with the tensor need the dependence flavour")
    D = core_subalgebra(A)
    mu = refuting_valuation(D, phi)
    if mu is None:
        raise PhiIsValid(f"{phi} is valid in the algebra")
    x = eval_core(D, mu, phi)
    hom, B = wronski_quotient(D, x)
    if flavour == DEP:
        B = B.with_tensor(_tabulate(B, lift_tensor(B, core_join_table(B))))
    logger.info(f"Reduced {A.size} elements to {B.size} refuting {phi} "
                f"(valuation {({p: D.label(v) for p, v in mu.items()})})")
    return B


def dep_finite_refuter(A: FiniteAlgebra, phi: Formula) -> FiniteAlgebra:
    """
    Finite dependence algebra refuting phi, built from the interpretations
    of the subformulas of phi's standard disjuncts.

    The core is their closure under meet and tensor (with 0 and 1), the
    carrier its closure under meet and join. The implication is the join of
    every c in the carrier with c meet x below y, and the tensor is lifted
    from the core.

    Raises:
        MissingTensor: A has no tensor
        NotWellConnected: A is not well-connected
        PhiIsValid: A validates phi
    """
    if A.tensor is None:
        raise MissingTensor("dependence algebras carry a tensor")
    if not is_well_connected(A):
        raise NotWellConnected("the host algebra must be well-connected")
    mu = refuting_valuation(A, phi)
    if mu is None:
        raise PhiIsValid(f"{phi} is valid in the algebra")
    seeds = {A.zero, A.top}
    for disjunct in dnf(phi):
        for tau in subformulas(disjunct):
            seeds.add(eval_core(A, mu, tau))
    generated_core = close_under(seeds, [A.meet, A.tensor])
    carrier = close_under(generated_core, [A.meet, A.join])
    core_tensor = {(a, b): A.tensor[a][b] for a in generated_core for b in generated_core}
    B = _restrict(A, carrier, generated_core, tensor=lift_tensor(A, core_tensor), derive_impl=True)
    mu_b = {p: B.index(A.label(v)) for p, v in mu.items()}
    if eval_core(B, mu_b, phi) == B.top:
        logger.warning(f"Finite refuter does not refute {phi}")
    logger.info(f"Finite refuter for {phi}: {B.size} elements, {len(B.core)} core")
    return B
