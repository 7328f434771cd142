"""
Shared fixtures: the seeded formula corpus, the algebra zoo and small models.
"""
import pytest

from algebra import boolean_square, chain, product
from duality import dual_algebra
from formula import build_corpus, in_lint, parse
from team import Frame, enumerate_frames, valuations


@pytest.fixture(scope="session")
def corpus():
    return build_corpus(("p", "q"), count=110, depth=3, seed=7)


@pytest.fixture(scope="session")
def lint_corpus(corpus):
    return [phi for phi in corpus if in_lint(phi)]


@pytest.fixture(scope="session")
def zoo():
    """Validated inquisitive algebras with at most 9 elements."""
    fork = Frame.from_names(["w1", "w2", "w3"], [("w1", "w2"), ("w1", "w3")])
    c3 = chain(["0", "s", "1"])
    return {
        "two": chain(["0", "1"]),
        "chain3": c3,
        "chain3_bool_core": chain(["0", "s", "1"], core=["0", "1"]),
        "chain4": chain(["0", "a", "b", "1"]),
        "square": boolean_square(),
        "square_bool_core": boolean_square().with_core([0, 3]),
        "e2": dual_algebra(Frame.discrete(2)).algebra,
        "fork": dual_algebra(fork).algebra,
        "chain3_squared": product(c3, c3),
    }


@pytest.fixture(scope="session")
def dep_zoo():
    """Validated dependence algebras."""
    return {
        "two": chain(["0", "1"], tensor=True),
        "chain3": chain(["0", "s", "1"], tensor=True),
        "square_join": boolean_square(tensor="join"),
        "e2": dual_algebra(Frame.discrete(2), "dep").algebra,
        "chain2_dual": dual_algebra(Frame.chain(2), "dep").algebra,
    }


@pytest.fixture(scope="session")
def small_models():
    """Every persistent valuation of p, q on every frame with at most 3 worlds."""
    return [model for frame in enumerate_frames(3) for model in valuations(frame, ["p", "q"])]


@pytest.fixture(scope="session")
def theorems():
    """Theorems of the inquisitive intuitionistic calculus."""
    return [parse(text) for text in [
        "p -> p",
        "p & q -> q & p",
        "p \\/ q -> q \\/ p",
        "p -> ~~p",
        "~~~p -> ~p",
        "~(p & ~p)",
        "(p -> q) -> ~q -> ~p",
        "((p \\/ q) -> r) -> p -> r",
        "(p -> q \\/ r) -> (p -> q) \\/ (p -> r)",
        "(p -> q) -> (q -> r) -> p -> r",
    ]]


@pytest.fixture(scope="session")
def non_theorems():
    return [parse(text) for text in [
        "~~p -> p",
        "p \\/ ~p",
        "p (*) q -> p \\/ q",
        "~p \\/ ~~p",
        "(p -> q) \\/ (q -> p)",
        "((p -> q) -> p) -> p",
        "(~p -> ~q) -> q -> p",
        "((p -> q) -> q) -> p \\/ q",
        "dep(p,q)",
        "q -> p",
    ]]
