#!/usr/bin/env python3
"""
Tests for frames, models, team support, enumeration and countermodel search.
"""
import pytest

from formula import atomic_axiom_instances, disj, dnf, double_negation_instance, is_standard, parse
from team import (KOHLER, PMORPHISM, ForeignWorldError, Frame, FrameError, FrameMap, Model,
                  PersistenceError, TeamEvaluator, check_map, compose_maps, countermodel_search,
                  enumerate_frames, eval_classical, eval_team, flatness_check, frame_valid,
                  frames_isomorphic, model_valid, r_image, restrict_model, submasks, truth_set,
                  validate_frame, validate_model, valuations)


@pytest.fixture
def chain_model():
    """2-chain w1 R w2 with p true at w2 only."""
    return Model.from_dict({"worlds": ["w1", "w2"], "order": [["w1", "w2"]],
                            "valuation": {"w2": ["p"]}})


@pytest.fixture
def split_model():
    """Classical 2-world model with p at w1 and q at w2."""
    return Model.from_atom_masks(Frame.discrete(2), {"p": 0b01, "q": 0b10})


def test_validate_frame():
    assert validate_frame(Frame.chain(2))
    missing = Frame.from_pairs(["w1", "w2"], [(0, 0)], close=False)
    report = validate_frame(missing)
    assert report.law == "reflexivity"
    assert report.witness == ("w2",)
    cycle = Frame.from_pairs(["w1", "w2"], [(0, 0), (1, 1), (0, 1), (1, 0)], close=False)
    assert validate_frame(cycle).law == "antisymmetry"
    with pytest.raises(FrameError):
        Frame.from_dict({"worlds": ["w1", "w2"], "order": [["w1", "w2"], ["w2", "w1"]]})


def test_model_loading_errors():
    with pytest.raises(PersistenceError):
        Model.from_dict({"worlds": ["w1", "w2"], "order": [["w1", "w2"]], "valuation": {"w1": ["p"]}})
    with pytest.raises(ForeignWorldError):
        Model.from_dict({"worlds": ["w1"], "order": [], "valuation": {"w9": ["p"]}})


def test_model_roundtrip(chain_model):
    data = chain_model.to_dict()
    assert data == {"worlds": ["w1", "w2"], "order": [["w1", "w2"]], "valuation": {"w2": ["p"]}}
    assert Model.from_dict(data) == chain_model
    assert validate_model(chain_model)


def test_r_image():
    assert r_image(Frame.chain(2), [0]) == frozenset({0, 1})
    assert r_image(Frame.chain(2), []) == frozenset()
    assert r_image(Frame.discrete(2), [0]) == frozenset({0})


def test_submasks_order():
    assert list(submasks(0b101)) == [0b101, 0b100, 0b001, 0]


def test_double_negation_on_chain(chain_model):
    phi = parse("~~p -> p")
    assert not eval_team(chain_model, [0, 1], phi)
    assert eval_team(chain_model, [0], parse("~~p"))
    assert not eval_team(chain_model, [0], parse("p"))
    # subsets of t itself: the classical clause validates it
    assert eval_classical(chain_model, [0, 1], phi)


def test_frame_validity_of_double_negation():
    phi = double_negation_instance(parse("p"))
    assert frame_valid(Frame.discrete(1), phi)
    assert not frame_valid(Frame.chain(2), phi)


def test_empty_team_and_bottom(chain_model):
    assert eval_team(chain_model, [], parse("_|_"))
    assert not eval_team(chain_model, [1], parse("_|_"))


def test_tensor_against_disjunction(split_model):
    assert eval_team(split_model, [0, 1], parse("p (*) q"))
    assert not eval_team(split_model, [0, 1], parse("p \\/ q"))
    assert eval_team(split_model, [0], parse("p \\/ q"))
    assert eval_team(split_model, [1], parse("p \\/ q"))


def test_flatness_examples(split_model):
    for model in (split_model, Model.from_atom_masks(Frame.chain(3), {"p": 0b110, "q": 0b100})):
        assert flatness_check(model, parse("p & q"))
        assert flatness_check(model, parse("_|_"))
    one_world_p = Model.from_atom_masks(Frame.discrete(2), {"p": 0b01})
    assert not flatness_check(one_world_p, parse("p \\/ ~p"))


def test_truth_set(chain_model):
    assert truth_set(chain_model, parse("p")) == [frozenset(), frozenset({1})]


def test_restrict_model(chain_model):
    sub = restrict_model(chain_model, [1])
    assert sub.frame.worlds == ("w2",)
    assert model_valid(sub, parse("p"))
    with pytest.raises(FrameError):
        restrict_model(chain_model, [0])


def test_enumerate_frame_counts():
    assert len(list(enumerate_frames(1))) == 1
    assert len(list(enumerate_frames(2, min_worlds=2))) == 2
    assert len(list(enumerate_frames(3, min_worlds=3))) == 5
    assert len(list(enumerate_frames(4, min_worlds=4))) == 16
    assert len(list(enumerate_frames(3, dedup=False, min_worlds=3))) == 19
    assert len(list(enumerate_frames(3))) == 8


def test_enumeration_order():
    discrete, chain = list(enumerate_frames(2, min_worlds=2))
    assert discrete.is_discrete()
    assert chain == Frame.chain(2)


def test_dedup_agrees_with_isomorphism():
    for size in (2, 3):
        kept = list(enumerate_frames(size, min_worlds=size))
        for i, first in enumerate(kept):
            for second in kept[i + 1:]:
                assert frames_isomorphic(first, second) is None
        for labelled in enumerate_frames(size, dedup=False, min_worlds=size):
            assert any(frames_isomorphic(labelled, frame) is not None for frame in kept)


def test_frames_isomorphic_witness():
    flipped = Frame.from_pairs(["w1", "w2"], [(1, 0)])
    assert frames_isomorphic(Frame.chain(2), flipped) == {"w1": "w2", "w2": "w1"}


def test_countermodel_for_double_negation():
    hit = countermodel_search(parse("~~p -> p"), 2)
    assert hit is not None
    model, team = hit
    assert model.to_dict() == {"worlds": ["w1", "w2"], "order": [["w1", "w2"]],
                               "valuation": {"w2": ["p"]}}
    assert team == frozenset({0, 1})


def test_countermodel_none_for_valid_formulas():
    assert countermodel_search(parse("p -> p"), 3) is None
    assert countermodel_search(parse("(p -> q \\/ r) -> (p -> q) \\/ (p -> r)"), 3) is None


def test_classical_search_skips_chains():
    assert countermodel_search(parse("~~p -> p"), 3, classical=True) is None
    hit = countermodel_search(parse("p \\/ ~p"), 3, classical=True)
    assert hit is not None and hit[0].frame.is_discrete()


@pytest.mark.slow
def test_parallel_search_matches_serial():
    phi = parse("~p \\/ ~~p")
    assert countermodel_search(phi, 3, jobs=2) == countermodel_search(phi, 3, jobs=1)


def test_structure_map_examples():
    c2 = Frame.chain(2)
    point = Frame.discrete(1)
    assert check_map(FrameMap.identity(c2))
    assert check_map(FrameMap(c2, point, (), KOHLER))
    assert check_map(FrameMap.from_dict(c2, point, {0: 0, 1: 0}))


def test_structure_map_violations():
    d2, c2 = Frame.discrete(2), Frame.chain(2)
    assert check_map(FrameMap.from_dict(d2, c2, {0: 0, 1: 1})).law == "back"
    assert check_map(FrameMap.from_dict(c2, d2, {0: 0, 1: 1})).law == "forth"
    assert check_map(FrameMap.from_dict(c2, c2, {1: 1})).law == "totality"
    assert check_map(FrameMap.from_dict(c2, c2, {1: 1}, KOHLER))


def test_compose_maps():
    c3, c2, point = Frame.chain(3), Frame.chain(2), Frame.discrete(1)
    first = FrameMap.from_dict(c3, c2, {0: 0, 1: 1, 2: 1})
    second = FrameMap.from_dict(c2, point, {0: 0, 1: 0})
    assert check_map(first)
    composed = compose_maps(first, second)
    assert composed.table == {0: 0, 1: 0, 2: 0}
    assert composed.role == PMORPHISM
    assert check_map(composed)


def test_theorems_have_no_small_countermodel(theorems):
    for phi in theorems:
        assert countermodel_search(phi, 3) is None, str(phi)


def test_non_theorems_are_refuted(non_theorems):
    for phi in non_theorems:
        hit = countermodel_search(phi, 3)
        assert hit is not None, str(phi)
        model, team = hit
        assert not eval_team(model, team, phi)


@pytest.mark.slow
def test_team_laws_on_small_models(small_models, corpus):
    for model in small_models:
        frame = model.frame
        for phi in corpus:
            evaluator = TeamEvaluator(model)
            assert evaluator.supports(0, phi)
            for team in range(frame.full + 1):
                if not evaluator.supports(team, phi):
                    continue
                assert evaluator.supports(frame.r_mask(team), phi), (str(phi), team)
                for w in range(frame.size):
                    if team >> w & 1:
                        assert evaluator.supports(team & ~(1 << w), phi), (str(phi), team)
            if is_standard(phi):
                assert flatness_check(model, phi), str(phi)


@pytest.mark.slow
def test_axioms_are_frame_valid():
    instances = atomic_axiom_instances(["p", "q"])
    for frame in enumerate_frames(3):
        for phi in instances:
            assert frame_valid(frame, phi), (frame.to_dict(), str(phi))


@pytest.mark.slow
def test_double_negation_on_discrete_frames():
    for text in ["p", "p & q", "p -> q", "p (*) q", "~p"]:
        phi = double_negation_instance(parse(text))
        for size in (1, 2, 3):
            assert frame_valid(Frame.discrete(size), phi)


@pytest.mark.slow
def test_dnf_is_team_equivalent(small_models, corpus):
    normal_forms = [(phi, disj(dnf(phi))) for phi in corpus]
    for model in small_models:
        evaluator = TeamEvaluator(model)
        for phi, normal in normal_forms:
            for team in range(model.frame.full + 1):
                assert evaluator.supports(team, phi) == evaluator.supports(team, normal), (
                    model.to_dict(), str(phi), team)


def test_discrete_frames_are_classical(corpus, split_model):
    for size in (1, 2, 3):
        for model in valuations(Frame.discrete(size), ["p", "q"]):
            intuitionistic, classical = TeamEvaluator(model), TeamEvaluator(model, classical=True)
            for phi in corpus:
                for team in range(model.frame.full + 1):
                    assert intuitionistic.supports(team, phi) == classical.supports(team, phi), (
                        model.to_dict(), str(phi), team)
    either = parse("p \\/ q")
    assert eval_team(split_model, [0, 1], either) == eval_classical(split_model, [0, 1], either)
