"""Generalized cone complexes: combinatorial Artin fans.

A complex is a finite diagram of strongly convex rational cones with face
maps; two face maps may share source and target, which is how self-gluing
(the nodal cubic "waffle cone") is represented without ever quotienting a
cone.  Products, stellar subdivisions and subdivision along a morphism (the
diagonal picture) live here.

Complexes built from honest fans are "embedded": every cone sits in one
ambient lattice and every face map is an identity matrix.  Subdivision
machinery requires embedded complexes; self-glued complexes only support the
no-op cases.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import _geometry as geom
from .errors import NotAFan, NotSimplicial, RayOutsideSupport, ScopeExceeded
from .lattice import (IntMatrix, Vector, det as _det, hnf_rows, primitive,
                      saturate_subgroup, solve_integer, solve_rational)


@dataclass(frozen=True)
class Cone:
    """Strongly convex rational cone given by primitive ray generators."""

    lattice_rank: int
    rays: tuple[Vector, ...]

    @staticmethod
    def make(rays, rank: int) -> "Cone":
        prims = []
        for r in rays:
            p = primitive(r)
            if len(p) != rank:
                raise ValueError("ray length does not match the lattice rank")
            if not geom.is_zero(p) and p not in prims:
                prims.append(p)
        c = Cone(rank, tuple(sorted(prims)))
        if not c.geometry.is_sharp:
            raise ValueError("cone is not strongly convex")
        # double-description consistency: rays must all be extreme
        if set(c.geometry.rays) != set(c.rays):
            c = Cone(rank, c.geometry.rays)
        return c

    @staticmethod
    def zero(rank: int = 0) -> "Cone":
        return Cone(rank, ())

    @cached_property
    def geometry(self) -> geom.ConeGeometry:
        return geom.ConeGeometry.of(self.rays, self.lattice_rank)

    @property
    def dim(self) -> int:
        return self.geometry.span_dim

    @property
    def facet_normals(self) -> tuple[Vector, ...]:
        return self.geometry.normals

    @property
    def is_simplicial(self) -> bool:
        return len(self.rays) == self.dim

    @cached_property
    def multiplicity(self) -> int:
        """Lattice-normalized volume; 1 for unimodular simplicial cones."""
        if not self.rays:
            return 1
        total = 0
        for s in geom.triangulate(list(self.rays), self.lattice_rank):
            total += geom.simplicial_index([self.rays[i] for i in s])
        return total

    @property
    def is_unimodular(self) -> bool:
        return self.is_simplicial and self.multiplicity == 1

    def contains(self, v) -> bool:
        return self.geometry.contains(v)

    @cached_property
    def face_ray_sets(self) -> tuple[frozenset, ...]:
        """All faces, as frozensets of ray indices (zero face to the whole cone)."""
        full = frozenset(range(len(self.rays)))
        found = {full, frozenset()}
        queue = [full]
        while queue:
            cur = queue.pop()
            for n in self.facet_normals:
                sub = frozenset(i for i in cur if geom.dot(n, self.rays[i]) == 0)
                if sub not in found:
                    found.add(sub)
                    queue.append(sub)
        return tuple(sorted(found, key=lambda s: (len(s), sorted(s))))

    def faces(self) -> list["Cone"]:
        return [Cone.make([self.rays[i] for i in s], self.lattice_rank)
                for s in self.face_ray_sets]

    def span_basis(self) -> tuple[Vector, ...]:
        """Canonical basis of the saturated span lattice."""
        return saturate_subgroup(self.rays, self.lattice_rank)


@dataclass(frozen=True)
class FaceMap:
    """Lattice map carrying the source cone isomorphically onto a face of the target."""

    source: int
    target: int
    matrix: IntMatrix

    def is_identity(self) -> bool:
        return (self.source == self.target
                and self.matrix == IntMatrix.identity(self.matrix.rows))


def _is_face_of(sub: Cone, sup: Cone) -> bool:
    """Face test for cones in a common lattice."""
    if sub.lattice_rank != sup.lattice_rank:
        return False
    want = set(sub.rays)
    return any(want == {sup.rays[i] for i in s} for s in sup.face_ray_sets)


def _face_map_valid(src: Cone, dst: Cone, matrix: IntMatrix) -> bool:
    if (matrix.rows, matrix.cols) != (dst.lattice_rank, src.lattice_rank):
        return False
    image_rays = [primitive(matrix.apply(r)) for r in src.rays]
    image = Cone.make(image_rays, dst.lattice_rank) if image_rays else Cone.zero(dst.lattice_rank)
    if not _is_face_of(image, dst):
        return False
    # isomorphism onto the face: saturated span lattices must correspond
    src_basis = src.span_basis()
    if len(src_basis) != image.dim:
        return False
    mapped = [matrix.apply(b) for b in src_basis]
    return hnf_rows(mapped) == image.span_basis()


@dataclass(frozen=True)
class GeneralizedConeComplex:
    """Finite diagram of cones and face maps; self-gluing allowed."""

    cones: tuple[Cone, ...]
    face_maps: tuple[FaceMap, ...]

    def __post_init__(self):
        n = len(self.cones)
        for fm in self.face_maps:
            if not (0 <= fm.source < n and 0 <= fm.target < n):
                raise ValueError("face map endpoints out of range")

    def validate(self) -> None:
        """Full structural check: identities, legality, closure, face-completeness."""
        for i, c in enumerate(self.cones):
            if not any(fm.source == i and fm.is_identity() for fm in self.face_maps):
                raise ValueError(f"missing identity face map for cone {i}")
        for fm in self.face_maps:
            if not _face_map_valid(self.cones[fm.source], self.cones[fm.target], fm.matrix):
                raise ValueError(f"illegal face map {fm.source} -> {fm.target}")
        key = {(fm.source, fm.target, fm.matrix) for fm in self.face_maps}
        for a in self.face_maps:
            for b in self.face_maps:
                if a.target == b.source:
                    comp = (a.source, b.target, b.matrix @ a.matrix)
                    if comp not in key:
                        raise ValueError("face maps are not closed under composition")
        for j, c in enumerate(self.cones):
            for s in c.face_ray_sets:
                face_rays = {c.rays[i] for i in s}
                hit = False
                for fm in self.face_maps:
                    if fm.target != j:
                        continue
                    img = {primitive(fm.matrix.apply(r))
                           for r in self.cones[fm.source].rays}
                    if img == face_rays:
                        hit = True
                        break
                if not hit:
                    raise ValueError(f"face of cone {j} is not the image of any face map")

    @property
    def cone_count(self) -> int:
        return len(self.cones)

    @property
    def ray_count(self) -> int:
        return sum(1 for c in self.cones if c.dim == 1)

    def maps_between(self, i: int, j: int) -> list[FaceMap]:
        return [fm for fm in self.face_maps if fm.source == i and fm.target == j]

    def nontrivial_face_maps(self) -> list[FaceMap]:
        return [fm for fm in self.face_maps if not fm.is_identity()]

    @cached_property
    def is_embedded(self) -> bool:
        """One ambient lattice, all face maps identity matrices."""
        ranks = {c.lattice_rank for c in self.cones}
        if len(ranks) > 1:
            return False
        return all(fm.matrix == IntMatrix.identity(fm.matrix.rows)
                   for fm in self.face_maps)

    def maximal_cone_indices(self) -> list[int]:
        out = []
        for i in range(len(self.cones)):
            proper_into = any(fm.source == i and fm.target != i
                              for fm in self.face_maps)
            if not proper_into:
                out.append(i)
        return out

    def dimension(self) -> int:
        return max((c.dim for c in self.cones), default=0)


def point_complex() -> GeneralizedConeComplex:
    z = Cone.zero(0)
    return GeneralizedConeComplex((z,), (FaceMap(0, 0, IntMatrix.identity(0)),))


def _embedded_from_cones(cones, rank: int) -> GeneralizedConeComplex:
    """Embedded complex from a face-closed family of cones in Z^rank."""
    seen: dict[tuple, Cone] = {}
    for c in cones:
        for f in c.faces():
            seen.setdefault(f.rays, f)
    ordered = sorted(seen.values(), key=lambda c: (c.dim, c.rays))
    index = {c.rays: i for i, c in enumerate(ordered)}
    ident = IntMatrix.identity(rank)
    maps = []
    for c in ordered:
        for f in c.faces():
            maps.append(FaceMap(index[f.rays], index[c.rays], ident))
    maps = sorted(set(maps), key=lambda m: (m.source, m.target))
    return GeneralizedConeComplex(tuple(ordered), tuple(maps))


def from_toric_fan(rays, maximal_cones, rank: int) -> GeneralizedConeComplex:
    """Complex of a toric fan: all faces of the input cones, inclusion maps.

    Raises NotAFan when two input cones intersect in a non-face.
    """
    rays = [tuple(int(x) for x in r) for r in rays]
    tops = [Cone.make([rays[i] for i in mc], rank) for mc in maximal_cones]
    if not tops:
        tops = [Cone.zero(rank)]
    for a, b in itertools.combinations(tops, 2):
        inter_rays = a.geometry.intersect_rays(b.geometry)
        inter = (Cone.make(inter_rays, rank) if inter_rays else Cone.zero(rank))
        if not (_is_face_of(inter, a) and _is_face_of(inter, b)):
            raise NotAFan(f"cones {a.rays} and {b.rays} intersect in a non-face")
    return _embedded_from_cones(tops, rank)


def snc_artin_fan(simplices) -> GeneralizedConeComplex:
    """Cone over an intersection complex: one smooth k-cone per (k-1)-simplex.

    `simplices` is an iterable of vertex tuples (the nonempty faces, or just
    the maximal ones; the downward closure is taken).  Raises NotSimplicial
    for degenerate input.
    """
    closed: set[tuple] = set()
    for s in simplices:
        s = tuple(s)
        if len(set(s)) != len(s):
            raise NotSimplicial(f"simplex {s} repeats a vertex")
        s = tuple(sorted(s))
        for k in range(1, len(s) + 1):
            closed.update(itertools.combinations(s, k))
    ordered = [()] + sorted(closed, key=lambda s: (len(s), s))
    cones = []
    for s in ordered:
        k = len(s)
        rays = [tuple(1 if i == j else 0 for j in range(k)) for i in range(k)]
        cones.append(Cone.make(rays, k) if k else Cone.zero(0))
    index = {s: i for i, s in enumerate(ordered)}
    maps = []
    for s in ordered:
        for k in range(0, len(s) + 1):
            for t in itertools.combinations(s, k):
                if t not in index:
                    continue
                cols = [tuple(1 if s.index(v) == i else 0 for i in range(len(s)))
                        for v in t]
                m = IntMatrix.from_columns(cols, rows=len(s))
                maps.append(FaceMap(index[t], index[s], m))
    return GeneralizedConeComplex(tuple(cones), tuple(maps))


def nodal_cubic_complex() -> GeneralizedConeComplex:
    """The waffle cone: one quadrant with both facets glued onto a single ray."""
    zero = Cone.zero(0)
    rho = Cone.make([(1,)], 1)
    sigma = Cone.make([(1, 0), (0, 1)], 2)
    cones = (zero, rho, sigma)
    maps = (
        FaceMap(0, 0, IntMatrix.identity(0)),
        FaceMap(1, 1, IntMatrix.identity(1)),
        FaceMap(2, 2, IntMatrix.identity(2)),
        FaceMap(0, 1, IntMatrix.zero(1, 0)),
        FaceMap(0, 2, IntMatrix.zero(2, 0)),
        FaceMap(1, 2, IntMatrix.from_columns([(1, 0)], rows=2)),
        FaceMap(1, 2, IntMatrix.from_columns([(0, 1)], rows=2)),
    )
    return GeneralizedConeComplex(cones, maps)


@dataclass(frozen=True)
class ComplexMorphism:
    """Morphism of complexes: a cone assignment commuting with face maps."""

    source: GeneralizedConeComplex
    target: GeneralizedConeComplex
    assignment: tuple[tuple[int, IntMatrix], ...]

    def __post_init__(self):
        if len(self.assignment) != len(self.source.cones):
            raise ValueError("assignment must cover every source cone")
        for i, (j, m) in enumerate(self.assignment):
            src, dst = self.source.cones[i], self.target.cones[j]
            if (m.rows, m.cols) != (dst.lattice_rank, src.lattice_rank):
                raise ValueError("assignment matrix shape mismatch")
            for r in src.rays:
                if not dst.contains(m.apply(r)):
                    raise ValueError(f"cone {i} does not land inside target cone {j}")
        for fm in self.source.face_maps:
            ja, ma = self.assignment[fm.source]
            jb, mb = self.assignment[fm.target]
            want = mb @ fm.matrix
            ok = any(psi.matrix @ ma == want
                     for psi in self.target.maps_between(ja, jb))
            if not ok:
                raise ValueError("assignment does not commute with a face map")

    def image_cone_rays(self, i: int) -> tuple[Vector, ...]:
        j, m = self.assignment[i]
        prims = []
        for r in self.source.cones[i].rays:
            p = primitive(m.apply(r))
            if not geom.is_zero(p) and p not in prims:
                prims.append(p)
        return tuple(sorted(prims))


def identity_morphism(F: GeneralizedConeComplex) -> ComplexMorphism:
    return ComplexMorphism(F, F, tuple(
        (i, IntMatrix.identity(c.lattice_rank)) for i, c in enumerate(F.cones)))


def product(F: GeneralizedConeComplex, G: GeneralizedConeComplex) -> GeneralizedConeComplex:
    """Product complex: pairs of cones, pairs of face maps, sum lattices."""
    cones = []
    for cf in F.cones:
        for cg in G.cones:
            rank = cf.lattice_rank + cg.lattice_rank
            rays = [r + (0,) * cg.lattice_rank for r in cf.rays] + \
                   [(0,) * cf.lattice_rank + s for s in cg.rays]
            cones.append(Cone.make(rays, rank) if rays else Cone.zero(rank))

    def idx(i, j):
        return i * len(G.cones) + j

    maps = []
    for mf in F.face_maps:
        for mg in G.face_maps:
            rows = mf.matrix.rows + mg.matrix.rows
            cols = mf.matrix.cols + mg.matrix.cols
            entries = []
            for r in range(rows):
                for c in range(cols):
                    if r < mf.matrix.rows and c < mf.matrix.cols:
                        entries.append(mf.matrix.at(r, c))
                    elif r >= mf.matrix.rows and c >= mf.matrix.cols:
                        entries.append(mg.matrix.at(r - mf.matrix.rows, c - mf.matrix.cols))
                    else:
                        entries.append(0)
            maps.append(FaceMap(idx(mf.source, mg.source), idx(mf.target, mg.target),
                                IntMatrix(rows, cols, tuple(entries))))
    return GeneralizedConeComplex(tuple(cones), tuple(maps))


def product_projections(F, G) -> tuple[ComplexMorphism, ComplexMorphism]:
    P = product(F, G)
    left, right = [], []
    for i, cf in enumerate(F.cones):
        for j, cg in enumerate(G.cones):
            lm = IntMatrix.from_rows(
                [[1 if c == r else 0 for c in range(cf.lattice_rank + cg.lattice_rank)]
                 for r in range(cf.lattice_rank)]) if cf.lattice_rank else \
                IntMatrix.zero(0, cf.lattice_rank + cg.lattice_rank)
            rm = IntMatrix.from_rows(
                [[1 if c == cf.lattice_rank + r else 0
                  for c in range(cf.lattice_rank + cg.lattice_rank)]
                 for r in range(cg.lattice_rank)]) if cg.lattice_rank else \
                IntMatrix.zero(0, cf.lattice_rank + cg.lattice_rank)
            left.append((i, lm))
            right.append((j, rm))
    return (ComplexMorphism(P, F, tuple(left)), ComplexMorphism(P, G, tuple(right)))


def diagonal_morphism(F: GeneralizedConeComplex) -> ComplexMorphism:
    """The diagonal F -> F x F."""
    P = product(F, F)
    n = len(F.cones)
    assignment = []
    for i, c in enumerate(F.cones):
        r = c.lattice_rank
        cols = [tuple(1 if k == j else 0 for k in range(r)) * 2 for j in range(r)]
        m = IntMatrix.from_columns(cols, rows=2 * r)
        assignment.append((i * n + i, m))
    return ComplexMorphism(F, P, tuple(assignment))


@dataclass(frozen=True)
class Subdivision:
    """A refinement of a complex together with its structure morphism."""

    refined: GeneralizedConeComplex
    structure: ComplexMorphism        # refined -> original
    flags: dict = field(compare=False, default_factory=dict)

    @property
    def original(self) -> GeneralizedConeComplex:
        return self.structure.target

    def is_trivial(self) -> bool:
        return self.refined == self.structure.target

    def all_unimodular(self) -> bool:
        uni = self.flags.get("unimodular", {})
        return all(uni.values())

    def support_volumes_ok(self) -> bool:
        """Support preservation: refined pieces tile each original maximal cone.

        Volumes are compared after truncating by a fixed positive functional
        on the original cone, which makes the lattice-normalized volume
        additive across the subdivision.  All arithmetic is exact.
        """
        orig = self.structure.target
        for j in orig.maximal_cone_indices():
            cone = orig.cones[j]
            if cone.dim == 0:
                continue
            ell = cone.facet_normals[0]
            for nrm in cone.facet_normals[1:]:
                ell = geom.vadd(ell, nrm)
            total = Fraction(0)
            for rc in self.refined.cones:
                if rc.dim == cone.dim and cone.geometry.contains_cone(rc.geometry):
                    total += _truncated_volume(rc, ell)
            if total != _truncated_volume(cone, ell):
                return False
        return True


def _truncated_volume(c: Cone, ell) -> Fraction:
    """Normalized volume of the cone truncated at ell(x) <= 1."""
    total = Fraction(0)
    for s in geom.triangulate(list(c.rays), c.lattice_rank):
        block = [c.rays[i] for i in s]
        denom = 1
        for r in block:
            h = geom.dot(ell, r)
            assert h > 0, "height functional must be positive on the cone"
            denom *= h
        total += Fraction(geom.simplicial_index(block), denom)
    return total


def _structure_to(refined: GeneralizedConeComplex,
                  original: GeneralizedConeComplex) -> ComplexMorphism:
    """Each refined cone goes to the smallest original cone containing it."""
    assignment = []
    for rc in refined.cones:
        best = None
        for j, oc in enumerate(original.cones):
            if oc.geometry.contains_cone(rc.geometry):
                if best is None or oc.dim < original.cones[best].dim:
                    best = j
        if best is None:
            raise ValueError("refined cone escapes the original support")
        assignment.append((best, IntMatrix.identity(rc.lattice_rank)))
    return ComplexMorphism(refined, original, tuple(assignment))


def _unimodularity_flags(K: GeneralizedConeComplex) -> dict:
    return {"unimodular": {i: K.cones[i].is_unimodular
                           for i in K.maximal_cone_indices()}}


def star_subdivision(F: GeneralizedConeComplex, cone_index: int, ray) -> Subdivision:
    """Stellar subdivision at a primitive ray located in a named cone.

    Subdividing at an existing ray is the identity subdivision.  Genuine
    subdivision requires an embedded complex (no self-gluing).
    """
    v = primitive(ray)
    if geom.is_zero(v):
        raise RayOutsideSupport("the zero vector generates no ray")
    if not (0 <= cone_index < len(F.cones)):
        raise ValueError("cone index out of range")
    home = F.cones[cone_index]
    if not home.contains(v):
        home = None
        for i, c in enumerate(F.cones):
            if c.lattice_rank == len(v) and c.contains(v):
                home = c
                cone_index = i
                break
        if home is None:
            raise RayOutsideSupport(f"{v} lies in no cone of the complex")
    if v in home.rays:
        return Subdivision(F, identity_morphism(F), _unimodularity_flags(F))
    if not F.is_embedded:
        raise ScopeExceeded("stellar subdivision of self-glued complexes is not supported")

    rank = home.lattice_rank
    # minimal cone containing v in its relative interior
    tau = None
    for c in F.cones:
        if c.geometry.contains_relative_interior(v):
            tau = c
            break
    assert tau is not None, "embedded complex must have a relative-interior home"
    if v in tau.rays:
        return Subdivision(F, identity_morphism(F), _unimodularity_flags(F))

    keep = []
    new_tops = []
    for c in F.cones:
        if _is_face_of(tau, c):
            for s in c.face_ray_sets:
                face_rays = [c.rays[i] for i in s]
                fc = Cone.make(face_rays, rank) if face_rays else Cone.zero(rank)
                if not _is_face_of(tau, fc):
                    new_tops.append(Cone.make(list(fc.rays) + [v], rank))
        else:
            keep.append(c)
    refined = _embedded_from_cones(keep + new_tops, rank)
    structure = _structure_to(refined, F)
    return Subdivision(refined, structure, _unimodularity_flags(refined))


def _naive_star_is_fan(target: Cone, image: geom.ConeGeometry) -> bool:
    """Would coning the image cone to the target's faces tile convexly?

    This is the "naive" one-shot subdivision along an image cone.  When
    wedges overlap in full dimension the honest pieces are non-convex, which
    is recorded as a flag and resolved by successive stellar subdivisions.
    """
    if image.span_dim < 2:
        return True
    rank = target.lattice_rank
    wedges = []
    for s in target.face_ray_sets:
        face_rays = [target.rays[i] for i in s]
        fc = geom.ConeGeometry.of(face_rays, rank)
        if len(s) == len(target.rays):
            continue
        if fc.meets_interior_of(image) or image.contains_cone(fc):
            continue
        w = geom.ConeGeometry.of(list(image.rays) + face_rays, rank)
        if w.span_dim == target.dim:
            wedges.append(w)
    for a, b in itertools.combinations(wedges, 2):
        inter = geom.ConeGeometry.of(a.intersect_rays(b), rank)
        if inter.span_dim == target.dim:
            return False
    return True


@dataclass(frozen=True)
class DiagonalSubdivision:
    """Result of subdividing along a morphism.

    Carries the fan refinement of the target, the subcomplex of refined
    cones inside the image closure, and (when the image cones survived as
    cones of the refinement) the factoring morphism through that subcomplex.
    """

    morphism: ComplexMorphism
    subdivision: Subdivision
    image_subcomplex: GeneralizedConeComplex
    factoring: ComplexMorphism | None
    image_flags: dict = field(compare=False, default_factory=dict)


def subdivide_along(phi: ComplexMorphism) -> DiagonalSubdivision:
    """Refine the target of phi along the images of the source cones.

    Deterministic star-subdivision order: primitive image rays first in lex
    order, then barycenters of still-unresolved image cones.  Non-convex
    intermediate pieces are reported in flags, never returned as cones.
    """
    target = phi.target
    if not target.is_embedded:
        raise ScopeExceeded("subdividing a self-glued target is not supported")
    if any(c.dim > 2 for c in phi.source.cones):
        raise ScopeExceeded("source cones of dimension > 2 are out of scope")
    if any(c.dim > 4 for c in target.cones) or \
            any(not c.is_simplicial for c in target.cones):
        raise ScopeExceeded("target must be simplicial of dimension <= 4")
    rank = target.cones[0].lattice_rank if target.cones else 0

    image_geoms = []
    image_ray_pool = set()
    for i in range(len(phi.source.cones)):
        rays = phi.image_cone_rays(i)
        image_geoms.append(geom.ConeGeometry.of(rays, rank))
        image_ray_pool.update(rays)

    image_flags = {}
    for i, ig in enumerate(image_geoms):
        if ig.span_dim >= 2:
            homes = [c for c in target.cones
                     if c.geometry.contains_cone(ig) and c.dim > ig.span_dim]
            image_flags[i] = {
                "dim": ig.span_dim,
                "naive_star_convex": all(_naive_star_is_fan(c, ig) for c in homes),
            }

    current = target
    for v in sorted(image_ray_pool):
        current = _subdivide_once(current, v)

    def covered(K: GeneralizedConeComplex, ig: geom.ConeGeometry) -> bool:
        """Is the image cone a union of refined cones?  Exact volume count
        against a fixed height functional, so pieces from later stellar cuts
        still add up correctly."""
        if ig.span_dim == 0:
            return True
        ell = ig.normals[0]
        for nrm in ig.normals[1:]:
            ell = geom.vadd(ell, nrm)
        target_vol = _truncated_geometry_volume(ig, ell, rank)
        have = Fraction(0)
        for c in K.cones:
            if c.dim == ig.span_dim and ig.contains_cone(c.geometry):
                have += _truncated_geometry_volume(c.geometry, ell, rank)
        return have == target_vol

    rounds = 0
    while True:
        pending = [ig for ig in image_geoms if not covered(current, ig)]
        if not pending:
            break
        rounds += 1
        if rounds > 16:
            raise ScopeExceeded("image cones did not resolve after 16 barycenter rounds")
        bary = pending[0].rays[0]
        for r in pending[0].rays[1:]:
            bary = geom.vadd(bary, r)
        current = _subdivide_once(current, primitive(bary))

    structure = _structure_to(current, target)
    sub = Subdivision(current, structure, _unimodularity_flags(current))

    inside = [c for c in current.cones
              if any(ig.contains_cone(c.geometry) for ig in image_geoms)]
    image_subcomplex = _embedded_from_cones(inside, rank) if inside else point_complex()

    factoring = None
    lookup = {c.rays: i for i, c in enumerate(image_subcomplex.cones)}
    assignment = []
    for i in range(len(phi.source.cones)):
        rays = tuple(sorted(image_geoms[i].rays))
        j = lookup.get(rays)
        if j is None:
            assignment = None
            break
        assignment.append((j, phi.assignment[i][1]))
    if assignment is not None:
        factoring = ComplexMorphism(phi.source, image_subcomplex, tuple(assignment))
    else:
        image_flags["diagonal_subdivided"] = True

    return DiagonalSubdivision(phi, sub, image_subcomplex, factoring, image_flags)


def _truncated_geometry_volume(g: geom.ConeGeometry, ell, rank: int) -> Fraction:
    total = Fraction(0)
    for s in geom.triangulate(list(g.rays), rank):
        block = [g.rays[i] for i in s]
        denom = 1
        for r in block:
            h = geom.dot(ell, r)
            assert h > 0
            denom *= h
        total += Fraction(geom.simplicial_index(block), denom)
    return total


def _subdivide_once(K: GeneralizedConeComplex, v: Vector) -> GeneralizedConeComplex:
    """Stellar subdivision step used inside subdivide_along."""
    home = next((i for i, c in enumerate(K.cones) if c.contains(v)), None)
    if home is None:
        raise RayOutsideSupport(f"{v} lies in no cone of the complex")
    return star_subdivision(K, home, v).refined


def b_subcomplex(F: GeneralizedConeComplex,
                 d: DiagonalSubdivision) -> GeneralizedConeComplex:
    """Subcomplex of refined cones through which the diagonal factors.

    `d` must come from subdivide_along of the diagonal morphism of F.  The
    output is face-closed and the recomposition check re-verifies that the
    diagonal lands inside it.
    """
    if d.morphism.source is not F and d.morphism.source != F:
        raise ValueError("subdivision does not belong to this complex")
    sub = d.image_subcomplex
    if d.factoring is not None:
        assert d.factoring.target == sub
    return sub


# ------------------------------------------------------------------ rendering

def face_poset_text(K: GeneralizedConeComplex) -> str:
    lines = [f"cones: {K.cone_count}"]
    for i, c in enumerate(K.cones):
        rays = ", ".join(str(r) for r in c.rays) or "origin"
        lines.append(f"  [{i}] dim {c.dim} rank {c.lattice_rank}: {rays}")
    lines.append("face maps (nontrivial):")
    for fm in K.nontrivial_face_maps():
        lines.append(f"  {fm.source} -> {fm.target} via {fm.matrix.as_rows()}")
    return "\n".join(lines) + "\n"


def face_poset_dot(K: GeneralizedConeComplex) -> str:
    out = ["digraph face_poset {"]
    for i, c in enumerate(K.cones):
        out.append(f'  c{i} [label="c{i} (dim {c.dim})"];')
    for fm in K.nontrivial_face_maps():
        out.append(f"  c{fm.source} -> c{fm.target};")
    out.append("}")
    return "\n".join(out) + "\n"


# ------------------------------------------------------------- isomorphism

def _tighten(K: GeneralizedConeComplex) -> GeneralizedConeComplex:
    """Re-express every cone in the saturated lattice of its own span."""
    bases = []
    new_cones = []
    for c in K.cones:
        basis = c.span_basis()
        bases.append(basis)
        if not basis:
            new_cones.append(Cone.zero(0))
            continue
        B = IntMatrix.from_columns(basis, rows=c.lattice_rank)
        coords = [solve_integer(B, r) for r in c.rays]
        new_cones.append(Cone.make(coords, len(basis)))
    new_maps = []
    for fm in K.face_maps:
        sb, tb = bases[fm.source], bases[fm.target]
        if not tb:
            new_maps.append(FaceMap(fm.source, fm.target, IntMatrix.zero(0, len(sb))))
            continue
        Bt = IntMatrix.from_columns(tb, rows=K.cones[fm.target].lattice_rank)
        cols = []
        for b in sb:
            img = fm.matrix.apply(b)
            col = solve_integer(Bt, img)
            assert col is not None
            cols.append(col)
        new_maps.append(FaceMap(fm.source, fm.target,
                                IntMatrix.from_columns(cols, rows=len(tb))))
    return GeneralizedConeComplex(tuple(new_cones), tuple(new_maps))


def _cone_invariant(K: GeneralizedConeComplex, i: int):
    c = K.cones[i]
    ins = sum(1 for fm in K.face_maps if fm.target == i)
    outs = sum(1 for fm in K.face_maps if fm.source == i)
    return (c.dim, len(c.rays), c.multiplicity, ins, outs)


def _iso_candidates(c1: Cone, c2: Cone) -> list[IntMatrix]:
    """Unimodular maps carrying c1 onto c2 (tight cones only)."""
    if c1.lattice_rank != c2.lattice_rank or len(c1.rays) != len(c2.rays):
        return []
    n = c1.lattice_rank
    if n == 0:
        return [IntMatrix.identity(0)]
    out = []
    src_cols = IntMatrix.from_columns(c1.rays, rows=n)
    for perm in itertools.permutations(range(len(c2.rays))):
        dst_cols = IntMatrix.from_columns([c2.rays[p] for p in perm], rows=n)
        U = _solve_matrix(src_cols, dst_cols)
        if U is None:
            continue
        if abs(_det(U)) != 1:
            continue
        if {tuple(primitive(U.apply(r))) for r in c1.rays} == set(c2.rays):
            if U not in out:
                out.append(U)
    return out


def _solve_matrix(A: IntMatrix, B: IntMatrix) -> IntMatrix | None:
    """Integer U with U @ A == B, when A's columns span over Q."""
    rows = []
    for i in range(B.rows):
        sol = solve_rational(A.transpose, B.row(i))
        if sol is None:
            return None
        if any(f.denominator != 1 for f in sol):
            return None
        rows.append([int(f) for f in sol])
    return IntMatrix.from_rows(rows)


def is_isomorphic(F: GeneralizedConeComplex, G: GeneralizedConeComplex) -> bool:
    """Isomorphism search over cone bijections with lattice identifications."""
    if len(F.cones) != len(G.cones) or len(F.face_maps) != len(G.face_maps):
        return False
    Ft, Gt = _tighten(F), _tighten(G)
    n = len(Ft.cones)
    inv_f = [_cone_invariant(Ft, i) for i in range(n)]
    inv_g = [_cone_invariant(Gt, i) for i in range(n)]
    if sorted(inv_f) != sorted(inv_g):
        return False
    order = sorted(range(n), key=lambda i: (-Ft.cones[i].dim, inv_f[i]))
    gmap_index = {}
    for fm in Gt.face_maps:
        gmap_index.setdefault((fm.source, fm.target), []).append(fm.matrix)

    def extend(pos: int, bij: dict, isos: dict) -> bool:
        if pos == n:
            return True
        i = order[pos]
        for j in range(n):
            if j in bij.values() or inv_g[j] != inv_f[i]:
                continue
            for u in _iso_candidates(Ft.cones[i], Gt.cones[j]):
                bij[i] = j
                isos[i] = u
                if _consistent(Ft, Gt, bij, isos, gmap_index) and \
                        extend(pos + 1, bij, isos):
                    return True
                del bij[i]
                del isos[i]
        return False

    return extend(0, {}, {})


def _consistent(Ft, Gt, bij, isos, gmap_index) -> bool:
    for fm in Ft.face_maps:
        if fm.source in bij and fm.target in bij:
            ja, jb = bij[fm.source], bij[fm.target]
            ua, ub = isos[fm.source], isos[fm.target]
            want_candidates = gmap_index.get((ja, jb), [])
            if not want_candidates:
                return False
            lhs = ub @ fm.matrix
            # need psi with psi @ ua == ub @ fm.matrix
            if not any(psi @ ua == lhs for psi in want_candidates):
                return False
            if len(Ft.maps_between(fm.source, fm.target)) != len(want_candidates):
                return False
    return True
