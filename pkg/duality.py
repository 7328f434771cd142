"""
Finite duality between Kripke frames and core-generated, well-connected algebras.

A frame is sent to the algebra of nonempty downward-closed families of its
upsets, with the principal families as core. Families are bitmasks over the
indices of the frame's upsets (in increasing upset-mask order).
"""
import logging
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from algebra import (DEP, INQ, AlgebraHom, CoreValuation, FiniteAlgebra, assemble, check_hom,
                     eval_core, is_core_generated, is_well_connected, maximal_elements,
                     validate_inq_algebra)
from formula import Formula, atoms as formula_atoms, in_lint
from team import (KOHLER, PMORPHISM, Frame, FrameMap, Model, check_map, model_valid,
                  restrict_model)


logger = logging.getLogger("InqWorkbench")


class DualityError(Exception):
    """Base class for duality errors."""


class NotFCGW(DualityError):
    """The algebra is not finite, core-generated and well-connected."""


class MapRoleMismatch(DualityError):
    pass


class InvalidStructureMap(DualityError):
    pass


@dataclass(frozen=True)
class UpsetLattice:
    """The upsets of a frame, ordered by inclusion."""
    frame: Frame
    members: Tuple[int, ...]

    def index(self, mask: int) -> int:
        return self.members.index(mask)

    def names(self, i: int) -> List[str]:
        return self.frame.mask_names(self.members[i])

    def label(self, i: int) -> str:
        return "{" + ",".join(self.names(i)) + "}"

    def to_list(self) -> List[List[str]]:
        return [self.names(i) for i in range(len(self.members))]


def upsets(F: Frame) -> UpsetLattice:
    return UpsetLattice(F, tuple(F.upset_masks()))


@dataclass(frozen=True)
class DualAlgebra:
    """
    Dual algebra of a frame with provenance.

    downsets[x] is the family of element x as a bitmask over upset indices;
    principals[u] is the element {U_u} down-closed.
    """
    frame: Frame
    flavour: str
    algebra: FiniteAlgebra
    lattice: UpsetLattice
    downsets: Tuple[int, ...]
    principals: Tuple[int, ...]
    positions: Dict[int, int] = field(compare=False, hash=False, repr=False, default_factory=dict)

    def element_of(self, downset: int) -> int:
        return self.positions[downset]

    def principal(self, upset_mask: int) -> int:
        """Element generated by one upset of the frame."""
        return self.principals[self.lattice.index(upset_mask)]

    def interpretation_upsets(self, x: int) -> List[int]:
        """Upset masks belonging to the family x."""
        family = self.downsets[x]
        return [u for i, u in enumerate(self.lattice.members) if family >> i & 1]

    def maximal_upsets(self, x: int) -> List[int]:
        members = self.interpretation_upsets(x)
        return [u for u in members if not any(u != v and u & v == u for v in members)]

    def to_dict(self) -> Dict:
        data = self.algebra.to_dict()
        data["provenance"] = {
            "frame": self.frame.to_dict(),
            "flavour": self.flavour,
            "generators": {
                self.algebra.label(self.principals[i]): self.lattice.names(i)
                for i in range(len(self.lattice.members))
            },
        }
        return data


@dataclass(frozen=True)
class IsoReport:
    """Outcome of a round trip: an explicit isomorphism or a failure detail."""
    ok: bool
    mapping: Tuple[Tuple[str, str], ...] = ()
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> Dict:
        data = {"ok": self.ok, "mapping": {a: b for a, b in self.mapping}}
        if self.detail:
            data["detail"] = self.detail
        return data


@lru_cache(maxsize=256)
def dual_algebra(F: Frame, flavour: str = INQ) -> DualAlgebra:
    """
    Build the dual algebra of a frame.

    Args:
        F: validated frame
        flavour: "inq", or "dep" to add the tensor (union of generating upsets)

    Returns:
        The dual algebra; element 0 is the family holding only the empty upset
    """
    lattice = upsets(F)
    members = lattice.members
    m = len(members)
    # below[i]: upsets contained in members[i], as a bitmask over upset indices
    below = tuple(
        sum(1 << j for j in range(m) if members[j] & members[i] == members[j])
        for i in range(m)
    )
    families = [d for d in range(1, 1 << m)
                if all(below[i] & ~d == 0 for i in range(m) if d >> i & 1)]
    families.sort(key=lambda d: (bin(d).count("1"), d))
    n = len(families)
    positions = {d: x for x, d in enumerate(families)}

    def maximal(d: int) -> List[int]:
        inside = [i for i in range(m) if d >> i & 1]
        return [i for i in inside if not any(j != i and below[j] >> i & 1 for j in inside)]

    labels = ["|".join(lattice.label(i) for i in maximal(d)) for d in families]
    up = [sum(1 << y for y in range(n) if families[x] & ~families[y] == 0) for x in range(n)]
    meet = tuple(tuple(positions[a & b] for b in families) for a in families)
    join = tuple(tuple(positions[a | b] for b in families) for a in families)
    impl = tuple(
        tuple(positions[sum(1 << k for k in range(m) if below[k] & a & ~b == 0)] for b in families)
        for a in families
    )
    principals = tuple(positions[below[i]] for i in range(m))
    tensor = None
    if flavour == DEP:
        union_index = {u: i for i, u in enumerate(members)}
        tops = [maximal(d) for d in families]

        def product(x: int, y: int) -> int:
            result = 0
            for i in tops[x]:
                for j in tops[y]:
                    result |= below[union_index[members[i] | members[j]]]
            return positions[result]

        tensor = tuple(tuple(product(x, y) for y in range(n)) for x in range(n))
    elif flavour != INQ:
        raise DualityError(f"unknown flavour {flavour}")
    algebra = assemble(labels, up, 0, principals, meet, join, impl, tensor)
    logger.debug(f"Dual {flavour} algebra of a {F.size}-world frame: {n} elements, {m} core")
    return DualAlgebra(F, flavour, algebra, lattice, tuple(families), principals, positions)


def frame_points(A: FiniteAlgebra) -> List[int]:
    """
    Nonzero join-irreducibles of the core lattice, by element index.

    Raises:
        NotFCGW: A fails the inquisitive laws, is not core-generated or not well-connected
    """
    report = validate_inq_algebra(A)
    if not report:
        raise NotFCGW(f"algebra violates {report.law} at {', '.join(map(str, report.witness))}")
    if not is_core_generated(A):
        raise NotFCGW("algebra is not core-generated")
    if not is_well_connected(A):
        raise NotFCGW("algebra is not well-connected")
    core = sorted(A.core)
    points = []
    for c in core:
        if c == A.zero:
            continue
        lower_covers = maximal_elements(A, (d for d in core if A.lt(d, c)))
        if len(lower_covers) == 1:
            points.append(c)
    return points


def algebra_to_frame(A: FiniteAlgebra) -> Frame:
    """Frame of core join-irreducibles, w_i R w_j iff point_j <= point_i."""
    points = frame_points(A)
    pairs = [(i, j) for i, a in enumerate(points) for j, b in enumerate(points) if A.le(b, a)]
    return Frame.from_pairs([f"w{i + 1}" for i in range(len(points))], pairs, close=False)


def round_trip_check(F: Frame, flavour: str = INQ) -> IsoReport:
    """Frame -> dual algebra -> frame; the witness sends w to the point of its principal upset."""
    D = dual_algebra(F, flavour)
    try:
        points = frame_points(D.algebra)
    except NotFCGW as e:
        return IsoReport(False, detail=str(e))
    G = algebra_to_frame(D.algebra)
    image = []
    for w in range(F.size):
        element = D.principal(F.successors[w])
        if element not in points:
            return IsoReport(False, detail=f"{F.worlds[w]} has no matching point")
        image.append(points.index(element))
    if len(set(image)) != F.size or G.size != F.size:
        return IsoReport(False, detail="world map is not a bijection")
    for a in range(F.size):
        for b in range(F.size):
            if F.related(a, b) != G.related(image[a], image[b]):
                return IsoReport(False, detail=f"order differs at {F.worlds[a]}, {F.worlds[b]}")
    return IsoReport(True, tuple((F.worlds[w], G.worlds[image[w]]) for w in range(F.size)))


def round_trip_check_alg(A: FiniteAlgebra, flavour: str = INQ) -> IsoReport:
    """
    Algebra -> frame -> dual algebra.

    The witness sends x to the family of upsets {k : point_k <= c} for the
    core elements c below x.
    """
    try:
        points = frame_points(A)
    except NotFCGW as e:
        return IsoReport(False, detail=str(e))
    if flavour == DEP and A.tensor is None:
        return IsoReport(False, detail="dependence round trip needs a tensor")
    F = algebra_to_frame(A)
    D = dual_algebra(F, flavour)
    B = D.algebra
    generated = {c: sum(1 << k for k, p in enumerate(points) if A.le(p, c)) for c in A.core}
    image = []
    for x in range(A.size):
        family = 0
        for c in A.core:
            if A.le(c, x):
                family |= 1 << D.lattice.index(generated[c])
        if family not in D.positions:
            return IsoReport(False, detail=f"{A.label(x)} is not sent to a downset")
        image.append(D.element_of(family))
    if len(set(image)) != A.size or B.size != A.size:
        return IsoReport(False, detail="element map is not a bijection")
    for x in range(A.size):
        if (x in A.core) != (image[x] in B.core):
            return IsoReport(False, detail=f"core flag differs at {A.label(x)}")
        for y in range(A.size):
            if A.le(x, y) != B.le(image[x], image[y]):
                return IsoReport(False, detail=f"order differs at {A.label(x)}, {A.label(y)}")
            if flavour == DEP and image[A.tensor[x][y]] != B.tensor[image[x]][image[y]]:
                return IsoReport(False, detail=f"tensor differs at {A.label(x)}, {A.label(y)}")
    return IsoReport(True, tuple((A.label(x), B.label(image[x])) for x in range(A.size)))


def canonical_core_valuation(M: Model, flavour: str = INQ,
                             atom_names: Optional[Sequence[str]] = None) -> Tuple[DualAlgebra, CoreValuation]:
    """Dual algebra of the frame with each atom sent to the family of its truth set."""
    D = dual_algebra(M.frame, flavour)
    names = M.atoms if atom_names is None else atom_names
    return D, {p: D.principal(M.atom_mask(p)) for p in names}


def canonical_frame_valuation(A: FiniteAlgebra, mu: CoreValuation) -> Model:
    """Model on algebra_to_frame(A) where p holds at w_k iff point_k <= mu(p)."""
    points = frame_points(A)
    F = algebra_to_frame(A)
    valuation = tuple(frozenset(p for p, value in mu.items() if A.le(point, value)) for point in points)
    return Model(F, valuation)


def flavour_for(phi: Formula, flavour: Optional[str] = None) -> str:
    """The given flavour, or inq for tensor-free formulas and dep otherwise."""
    if flavour is not None:
        return flavour
    return INQ if in_lint(phi) else DEP


def semantic_verdicts(M: Model, phi: Formula, flavour: Optional[str] = None) -> Tuple[bool, bool]:
    """(team validity, algebraic validity on the dual model)."""
    D, mu = canonical_core_valuation(M, flavour_for(phi, flavour), formula_atoms(phi))
    team_verdict = model_valid(M, phi)
    algebra_verdict = eval_core(D.algebra, mu, phi) == D.algebra.top
    return team_verdict, algebra_verdict


def cross_check(M: Model, phi: Formula, flavour: Optional[str] = None) -> bool:
    team_verdict, algebra_verdict = semantic_verdicts(M, phi, flavour)
    if team_verdict != algebra_verdict:
        logger.warning(f"Verdicts disagree on {phi}: team {team_verdict}, algebra {algebra_verdict}")
    return team_verdict == algebra_verdict


def restricted_dual_model(M: Model, team: Sequence[int], flavour: str = INQ,
                          atom_names: Optional[Sequence[str]] = None) -> Tuple[DualAlgebra, CoreValuation]:
    """Dual algebraic model of the submodel on an upset."""
    names = M.atoms if atom_names is None else atom_names
    return canonical_core_valuation(restrict_model(M, team), flavour, names)


def dual_map(p: FrameMap, flavour: str = INQ) -> AlgebraHom:
    """
    Contravariant dual of a structure map, from the target's dual algebra to the source's.

    Each generating upset goes to its preimage, R-closed for the inquisitive
    flavour. The homomorphism check is attached as the report.

    Raises:
        MapRoleMismatch: the dependence flavour needs a p-morphism
        InvalidStructureMap: the map fails its forth or back condition
    """
    if flavour == DEP and p.role != PMORPHISM:
        raise MapRoleMismatch(f"dependence duals need a {PMORPHISM}, got {p.role}")
    if p.role not in (PMORPHISM, KOHLER):
        raise MapRoleMismatch(f"unknown role {p.role}")
    report = check_map(p)
    if not report:
        raise InvalidStructureMap(f"map fails {report.law} at {', '.join(map(str, report.witness))}")
    source = dual_algebra(p.target, flavour)
    target = dual_algebra(p.source, flavour)
    images = []
    for u in source.lattice.members:
        pre = p.preimage_mask(u)
        if flavour == INQ:
            pre = p.source.r_mask(pre)
        images.append(target.downsets[target.principal(pre)])
    mapping = []
    for family in source.downsets:
        result = 0
        for i, image in enumerate(images):
            if family >> i & 1:
                result |= image
        mapping.append(target.element_of(result))
    hom = AlgebraHom(source.algebra, target.algebra, tuple(mapping), flavour)
    check = check_hom(hom)
    if not check:
        logger.warning(f"Dual of the {p.role} map fails {check.law} at {', '.join(map(str, check.witness))}")
    return replace(hom, report=check)
