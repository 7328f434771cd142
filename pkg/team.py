"""
Finite intuitionistic Kripke frames and models with team semantics.

Worlds are indexed 0..n-1 and teams are handled internally as bitmasks
over those indices; the public operations accept and return frozensets of
indices.
"""
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from formula import And, Atom, Bot, Formula, Impl, Or, Tensor, atoms as formula_atoms
from reports import CheckReport


logger = logging.getLogger("InqWorkbench")

Team = FrozenSet[int]

PMORPHISM = "pmorphism"
KOHLER = "kohler"


class TeamError(Exception):
    """Base class for frame and model errors."""


class ForeignWorldError(TeamError):
    """A world index or name that does not belong to the frame."""


class FrameError(TeamError):
    """The accessibility relation is not a partial order."""


class PersistenceError(TeamError):
    """The valuation is not persistent along the order."""


def submasks(mask: int) -> Iterator[int]:
    """All submasks of `mask`, largest first, ending with 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def mask_to_team(mask: int) -> Team:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


@dataclass(frozen=True)
class Frame:
    """A finite Kripke frame: world names and a relation on world indices."""
    worlds: Tuple[str, ...]
    relation: FrozenSet[Tuple[int, int]]

    @classmethod
    def from_pairs(cls, worlds: Sequence[str], pairs: Iterable[Tuple[int, int]],
                   close: bool = True) -> "Frame":
        """
        Build a frame from index pairs.

        Args:
            worlds: world names
            pairs: related index pairs
            close: apply the reflexive-transitive closure

        Returns:
            The frame (not validated)
        """
        n = len(worlds)
        relation = set(pairs)
        for a, b in relation:
            if not (0 <= a < n and 0 <= b < n):
                raise ForeignWorldError(f"pair ({a}, {b}) outside a frame of {n} worlds")
        if close:
            rows = [1 << i for i in range(n)]
            for a, b in relation:
                rows[a] |= 1 << b
            for k in range(n):
                for i in range(n):
                    if rows[i] >> k & 1:
                        rows[i] |= rows[k]
            relation = {(a, b) for a in range(n) for b in range(n) if rows[a] >> b & 1}
        return cls(tuple(worlds), frozenset(relation))

    @classmethod
    def from_names(cls, worlds: Sequence[str], order: Iterable[Sequence[str]],
                   close: bool = True) -> "Frame":
        position = {name: i for i, name in enumerate(worlds)}
        pairs = []
        for a, b in order:
            if a not in position or b not in position:
                raise ForeignWorldError(f"order pair ({a}, {b}) mentions an unknown world")
            pairs.append((position[a], position[b]))
        return cls.from_pairs(worlds, pairs, close)

    @classmethod
    def from_dict(cls, data: Mapping) -> "Frame":
        """Load the frame part of the JSON file format and validate it."""
        frame = cls.from_names(list(data["worlds"]), data.get("order", []))
        report = validate_frame(frame)
        if not report:
            raise FrameError(f"not a partial order: {report.law} at {', '.join(map(str, report.witness))}")
        return frame

    @classmethod
    def discrete(cls, n: int) -> "Frame":
        return cls.from_pairs([f"w{i + 1}" for i in range(n)], [])

    @classmethod
    def chain(cls, n: int) -> "Frame":
        return cls.from_pairs([f"w{i + 1}" for i in range(n)], [(i, i + 1) for i in range(n - 1)])

    @property
    def size(self) -> int:
        return len(self.worlds)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    @cached_property
    def successors(self) -> Tuple[int, ...]:
        rows = [0] * self.size
        for a, b in self.relation:
            rows[a] |= 1 << b
        return tuple(rows)

    @cached_property
    def _positions(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.worlds)}

    def index(self, name: str) -> int:
        if name not in self._positions:
            raise ForeignWorldError(f"unknown world {name}")
        return self._positions[name]

    def related(self, a: int, b: int) -> bool:
        return bool(self.successors[a] >> b & 1)

    def r_mask(self, mask: int) -> int:
        image = 0
        for i in range(self.size):
            if mask >> i & 1:
                image |= self.successors[i]
        return image

    def is_upset(self, mask: int) -> bool:
        return self.r_mask(mask) == mask

    def upset_masks(self) -> List[int]:
        """R-upsets as bitmasks in increasing order."""
        return [mask for mask in range(1 << self.size) if self.is_upset(mask)]

    def is_discrete(self) -> bool:
        return all(a == b for a, b in self.relation)

    def names(self, team: Iterable[int]) -> List[str]:
        return [self.worlds[i] for i in sorted(team)]

    def mask_names(self, mask: int) -> List[str]:
        return self.names(mask_to_team(mask))

    def to_dict(self) -> Dict:
        """Convert to dictionary for serialization (strict pairs only)."""
        order = sorted((a, b) for a, b in self.relation if a != b)
        return {
            "worlds": list(self.worlds),
            "order": [[self.worlds[a], self.worlds[b]] for a, b in order],
        }


@dataclass(frozen=True)
class Model:
    """A frame with a valuation assigning a set of atoms to each world."""
    frame: Frame
    valuation: Tuple[FrozenSet[str], ...]

    @classmethod
    def from_atom_masks(cls, frame: Frame, masks: Mapping[str, int]) -> "Model":
        valuation = tuple(
            frozenset(p for p, mask in masks.items() if mask >> i & 1)
            for i in range(frame.size)
        )
        return cls(frame, valuation)

    @classmethod
    def from_dict(cls, data: Mapping) -> "Model":
        """
        Load the JSON file format: worlds, order, valuation.

        Raises:
            FrameError: the closed order is not antisymmetric
            PersistenceError: the valuation is not persistent
        """
        frame = Frame.from_dict(data)
        valuation: List[FrozenSet[str]] = [frozenset()] * frame.size
        for name, props in data.get("valuation", {}).items():
            valuation[frame.index(name)] = frozenset(props)
        model = cls(frame, tuple(valuation))
        report = validate_model(model)
        if not report:
            raise PersistenceError(f"valuation not persistent: {', '.join(map(str, report.witness))}")
        return model

    @cached_property
    def _masks(self) -> Dict[str, int]:
        masks: Dict[str, int] = {}
        for i, props in enumerate(self.valuation):
            for p in props:
                masks[p] = masks.get(p, 0) | 1 << i
        return masks

    @property
    def atoms(self) -> List[str]:
        return sorted(self._masks)

    def atom_mask(self, name: str) -> int:
        return self._masks.get(name, 0)

    def to_dict(self) -> Dict:
        data = self.frame.to_dict()
        data["valuation"] = {
            self.frame.worlds[i]: sorted(props)
            for i, props in enumerate(self.valuation) if props
        }
        return data


def team_mask(frame: Frame, team: Iterable[int]) -> int:
    mask = 0
    for w in team:
        if not 0 <= w < frame.size:
            raise ForeignWorldError(f"world index {w} outside a frame of {frame.size} worlds")
        mask |= 1 << w
    return mask


def team_from_names(frame: Frame, names: Iterable[str]) -> Team:
    return frozenset(frame.index(name) for name in names)


def validate_frame(frame: Frame) -> CheckReport:
    """Check that the relation is reflexive, antisymmetric and transitive."""
    names = frame.worlds
    for w in range(frame.size):
        if not frame.related(w, w):
            return CheckReport.violation("reflexivity", names[w])
    for a, b in sorted(frame.relation):
        if a != b and frame.related(b, a):
            return CheckReport.violation("antisymmetry", names[a], names[b])
    for a, b in sorted(frame.relation):
        for c in range(frame.size):
            if frame.related(b, c) and not frame.related(a, c):
                return CheckReport.violation("transitivity", names[a], names[b], names[c])
    return CheckReport.passed()


def validate_model(model: Model) -> CheckReport:
    """Check persistence of the valuation."""
    frame = model.frame
    for a, b in sorted(frame.relation):
        missing = model.valuation[a] - model.valuation[b]
        if missing:
            return CheckReport.violation(
                "persistence", frame.worlds[a], frame.worlds[b], min(missing))
    return CheckReport.passed()


def r_image(frame: Frame, team: Iterable[int]) -> Team:
    return mask_to_team(frame.r_mask(team_mask(frame, team)))


class TeamEvaluator:
    """Support relation of one model, memoised on (subformula, team)."""

    def __init__(self, model: Model, classical: bool = False):
        """
        Args:
            model: the model to evaluate in
            classical: use the classical implication clause (s subset of t)
        """
        self.model = model
        self.classical = classical
        self._memo: Dict[Tuple[int, int], bool] = {}
        # keeps subformulas alive so their ids stay unique
        self._pinned: Dict[int, Formula] = {}

    def supports(self, team: int, phi: Formula) -> bool:
        key = (id(phi), team)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        self._pinned[id(phi)] = phi
        result = self._evaluate(team, phi)
        self._memo[key] = result
        return result

    def _evaluate(self, team: int, phi: Formula) -> bool:
        if isinstance(phi, Atom):
            return (team & ~self.model.atom_mask(phi.name)) == 0
        if isinstance(phi, Bot):
            return team == 0
        if isinstance(phi, And):
            return self.supports(team, phi.left) and self.supports(team, phi.right)
        if isinstance(phi, Or):
            return self.supports(team, phi.left) or self.supports(team, phi.right)
        if isinstance(phi, Tensor):
            # covers s | r == team, overlaps allowed
            for s in submasks(team):
                if not self.supports(s, phi.left):
                    continue
                rest = team & ~s
                for extra in submasks(s):
                    if self.supports(rest | extra, phi.right):
                        return True
            return False
        if isinstance(phi, Impl):
            extension = team if self.classical else self.model.frame.r_mask(team)
            return all(
                self.supports(s, phi.right)
                for s in submasks(extension) if self.supports(s, phi.left)
            )
        raise TypeError(f"not a formula: {phi!r}")


def eval_team(model: Model, team: Iterable[int], phi: Formula) -> bool:
    """Does the team support phi in the model?"""
    return TeamEvaluator(model).supports(team_mask(model.frame, team), phi)


def eval_classical(model: Model, team: Iterable[int], phi: Formula) -> bool:
    """Support under the classical clauses, where implication ranges over s subset of t."""
    return TeamEvaluator(model, classical=True).supports(team_mask(model.frame, team), phi)


def model_valid(model: Model, phi: Formula) -> bool:
    evaluator = TeamEvaluator(model)
    return all(evaluator.supports(team, phi) for team in range(model.frame.full + 1))


def truth_set(model: Model, phi: Formula) -> List[Team]:
    """All teams supporting phi, in increasing mask order."""
    evaluator = TeamEvaluator(model)
    return [mask_to_team(team) for team in range(model.frame.full + 1)
            if evaluator.supports(team, phi)]


def valuations(frame: Frame, atom_names: Sequence[str]) -> Iterator[Model]:
    """Every persistent valuation of the given atoms on the frame."""
    upsets = frame.upset_masks()
    for choice in itertools.product(upsets, repeat=len(atom_names)):
        yield Model.from_atom_masks(frame, dict(zip(atom_names, choice)))


def frame_valid(frame: Frame, phi: Formula) -> bool:
    return all(model_valid(model, phi) for model in valuations(frame, formula_atoms(phi)))


def flatness_check(model: Model, phi: Formula) -> bool:
    """True iff every team supports phi exactly when each of its singletons does."""
    evaluator = TeamEvaluator(model)
    for team in range(model.frame.full + 1):
        pointwise = all(evaluator.supports(1 << w, phi) for w in mask_to_team(team))
        if evaluator.supports(team, phi) != pointwise:
            return False
    return True


def restrict_model(model: Model, upset: Iterable[int]) -> Model:
    """The submodel on an upset of the frame."""
    frame = model.frame
    mask = team_mask(frame, upset)
    if not frame.is_upset(mask):
        raise FrameError(f"{frame.mask_names(mask)} is not an upset")
    kept = sorted(mask_to_team(mask))
    position = {w: i for i, w in enumerate(kept)}
    pairs = [(position[a], position[b]) for a, b in frame.relation if a in position and b in position]
    sub = Frame.from_pairs([frame.worlds[w] for w in kept], pairs, close=False)
    return Model(sub, tuple(model.valuation[w] for w in kept))


# ---------------------------------------------------------------------------
# Frame enumeration and isomorphism
# ---------------------------------------------------------------------------

def _strict_orders(k: int) -> Iterator[FrozenSet[Tuple[int, int]]]:
    pairs = [(i, j) for i in range(k) for j in range(k) if i != j]
    for bits in range(1 << len(pairs)):
        relation = frozenset(pairs[b] for b in range(len(pairs)) if bits >> b & 1)
        if _is_strict_order(relation):
            yield relation


def _is_strict_order(relation: FrozenSet[Tuple[int, int]]) -> bool:
    for a, b in relation:
        if (b, a) in relation:
            return False
        for c, d in relation:
            if b == c and (a, d) not in relation:
                return False
    return True


def _canonical_key(k: int, relation: FrozenSet[Tuple[int, int]]) -> Tuple:
    return min(
        tuple(sorted((perm[a], perm[b]) for a, b in relation))
        for perm in itertools.permutations(range(k))
    )


def enumerate_frames(max_worlds: int, dedup: bool = True, min_worlds: int = 1) -> Iterator[Frame]:
    """
    All finite partial orders with min_worlds..max_worlds worlds.

    Args:
        max_worlds: largest frame size
        dedup: keep only the first labelled frame of each isomorphism class
        min_worlds: smallest frame size

    Yields:
        Frames with worlds w1..wk, by size and then generation order
    """
    for k in range(max(min_worlds, 1), max_worlds + 1):
        names = [f"w{i + 1}" for i in range(k)]
        seen = set()
        for relation in _strict_orders(k):
            if dedup:
                key = _canonical_key(k, relation)
                if key in seen:
                    continue
                seen.add(key)
            yield Frame.from_pairs(names, relation)


def frame_graph(frame: Frame) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(frame.size))
    graph.add_edges_from((a, b) for a, b in frame.relation if a != b)
    return graph


def frames_isomorphic(first: Frame, second: Frame) -> Optional[Dict[str, str]]:
    """An order isomorphism first -> second by world names, or None."""
    if first.size != second.size:
        return None
    matcher = nx.algorithms.isomorphism.DiGraphMatcher(frame_graph(first), frame_graph(second))
    if not matcher.is_isomorphic():
        return None
    return {first.worlds[a]: second.worlds[b] for a, b in sorted(matcher.mapping.items())}


# ---------------------------------------------------------------------------
# Countermodel search
# ---------------------------------------------------------------------------

def _teams_largest_first(n: int) -> List[int]:
    return sorted(range(1 << n), key=lambda mask: (-bin(mask).count("1"), mask))


def _refute_on_frame(frame: Frame, phi: Formula, classical: bool) -> Optional[Tuple[Model, Team]]:
    teams = _teams_largest_first(frame.size)
    for model in valuations(frame, formula_atoms(phi)):
        evaluator = TeamEvaluator(model, classical)
        for team in teams:
            if not evaluator.supports(team, phi):
                return model, mask_to_team(team)
    return None


def _candidate_frames(max_worlds: int, classical: bool, dedup: bool) -> Iterator[Frame]:
    if classical:
        for k in range(1, max_worlds + 1):
            yield Frame.discrete(k)
    else:
        yield from enumerate_frames(max_worlds, dedup)


def countermodel_search(phi: Formula, max_worlds: int, classical: bool = False,
                        dedup: bool = True, jobs: int = 1) -> Optional[Tuple[Model, Team]]:
    """
    First falsifying (model, team) in enumeration order.

    Args:
        phi: formula to refute
        max_worlds: largest frame size to try
        classical: restrict to discrete frames
        dedup: skip isomorphic copies of frames
        jobs: worker processes; results are reported in enumeration order

    Returns:
        (model, team) or None when phi holds on every candidate up to max_worlds
    """
    frames = list(_candidate_frames(max_worlds, classical, dedup))
    logger.debug(f"Searching {len(frames)} frames for a countermodel to {phi}")
    if jobs <= 1:
        hits: Iterable[Optional[Tuple[Model, Team]]] = (
            _refute_on_frame(frame, phi, classical) for frame in frames)
        return _first_hit(hits, phi)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        hits = pool.map(_refute_on_frame, frames,
                        itertools.repeat(phi), itertools.repeat(classical))
        result = _first_hit(hits, phi)
        pool.shutdown(wait=False, cancel_futures=True)
        return result


def _first_hit(hits: Iterable[Optional[Tuple[Model, Team]]], phi: Formula) -> Optional[Tuple[Model, Team]]:
    for hit in hits:
        if hit is not None:
            model, team = hit
            logger.info(f"Countermodel to {phi} on {model.frame.size} worlds, "
                        f"team {model.frame.names(team)}")
            return hit
    logger.info(f"No countermodel to {phi} found")
    return None


# ---------------------------------------------------------------------------
# Structure maps between frames
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrameMap:
    """A (possibly partial) map between frames with a declared role."""
    source: Frame
    target: Frame
    mapping: Tuple[Tuple[int, int], ...]
    role: str = PMORPHISM

    @classmethod
    def from_dict(cls, source: Frame, target: Frame, mapping: Mapping[int, int],
                  role: str = PMORPHISM) -> "FrameMap":
        return cls(source, target, tuple(sorted(mapping.items())), role)

    @classmethod
    def identity(cls, frame: Frame, role: str = PMORPHISM) -> "FrameMap":
        return cls(frame, frame, tuple((w, w) for w in range(frame.size)), role)

    @cached_property
    def table(self) -> Dict[int, int]:
        return dict(self.mapping)

    def preimage_mask(self, mask: int) -> int:
        pre = 0
        for x, y in self.mapping:
            if mask >> y & 1:
                pre |= 1 << x
        return pre


def check_map(m: FrameMap) -> CheckReport:
    """Verify the forth and back conditions for the declared role."""
    src, tgt, f = m.source, m.target, m.table
    if m.role not in (PMORPHISM, KOHLER):
        return CheckReport.violation("role", m.role)
    for x, y in m.mapping:
        if not (0 <= x < src.size and 0 <= y < tgt.size):
            return CheckReport.violation("domain", x, y)
    if m.role == PMORPHISM:
        for x in range(src.size):
            if x not in f:
                return CheckReport.violation("totality", src.worlds[x])
    for x in f:
        for y in f:
            if src.related(x, y) and not tgt.related(f[x], f[y]):
                return CheckReport.violation("forth", src.worlds[x], src.worlds[y])
    for x in f:
        for target_world in range(tgt.size):
            if not tgt.related(f[x], target_world):
                continue
            if not any(src.related(x, z) and f.get(z) == target_world for z in range(src.size)):
                return CheckReport.violation("back", src.worlds[x], tgt.worlds[target_world])
    return CheckReport.passed()


def compose_maps(first: FrameMap, second: FrameMap) -> FrameMap:
    """second after first, defined where both are."""
    inner, outer = first.table, second.table
    mapping = {x: outer[y] for x, y in inner.items() if y in outer}
    role = PMORPHISM if first.role == second.role == PMORPHISM else KOHLER
    return FrameMap.from_dict(first.source, second.target, mapping, role)
