"""Fine and fine-saturated monoids inside finitely generated abelian groups.

A fine monoid is stored by its ambient group and a reduced generator list,
so integrality is automatic.  Saturation runs through a Hilbert basis of the
rational cone over the free parts and absorbs the full torsion subgroup of
the groupification; this is exactly what makes the "r disjoint lines"
pushout come out right.

The fs pushout is the chart-level engine for fs fiber products: amalgamated
sum inside the cokernel, image monoid, then saturation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from . import _geometry as geom
from .errors import NotSaturated, NotStronglyConvex
from .lattice import (FgAbelianGroup, IntMatrix, Vector, hnf_rows, in_lattice,
                      lattice_rank as _span_rank, reduce_mod_lattice,
                      smith_normal_form, solve_integer)


@dataclass(frozen=True)
class FineMonoid:
    """Finitely generated submonoid of a finitely generated abelian group."""

    ambient: FgAbelianGroup
    generators: tuple[Vector, ...]

    @staticmethod
    def make(ambient: FgAbelianGroup, generators) -> "FineMonoid":
        """Canonical construction: reduce, drop zeros, dedupe, sort."""
        seen = []
        for g in generators:
            g = ambient.reduce(g)
            if any(x != 0 for x in g) and g not in seen:
                seen.append(g)
        return FineMonoid(ambient, tuple(sorted(seen)))

    @staticmethod
    def free(rank: int, generators=None) -> "FineMonoid":
        """Monoid in Z^rank; defaults to N^rank on the standard basis."""
        G = FgAbelianGroup(rank)
        if generators is None:
            generators = [tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank)]
        return FineMonoid.make(G, generators)

    @property
    def free_rank(self) -> int:
        return self.ambient.free_rank

    def free_parts(self) -> list[Vector]:
        return [self.ambient.free_part(g) for g in self.generators]

    @cached_property
    def _relation_rows(self) -> tuple[Vector, ...]:
        f = self.ambient.free_rank
        n = self.ambient.num_coords
        return tuple(tuple(d if j == f + i else 0 for j in range(n))
                     for i, d in enumerate(self.ambient.torsion_orders))

    @cached_property
    def gp_lattice(self) -> tuple[Vector, ...]:
        """HNF basis of the groupification, in presentation coordinates."""
        return hnf_rows(list(self.generators) + list(self._relation_rows))

    @cached_property
    def _gp_torsion(self) -> tuple[int, tuple[Vector, ...]]:
        """Order and cyclic generators of the torsion subgroup of P^gp."""
        f = self.ambient.free_rank
        k = len(self.ambient.torsion_orders)
        if k == 0:
            return 1, ()
        K = [row for row in self.gp_lattice
             if all(row[j] == 0 for j in range(f))]
        BK = IntMatrix.from_rows([row[f:] for row in K]) if K else IntMatrix.zero(0, k)
        rel = IntMatrix.from_rows([row[f:] for row in self._relation_rows])
        # express each relation in the K basis
        coeffs = []
        for i in range(rel.rows):
            c = solve_integer(BK.transpose, rel.row(i))
            assert c is not None
            coeffs.append(c)
        E = IntMatrix.from_rows(coeffs)
        snf = smith_normal_form(E)
        order = 1
        for d in snf.diagonal():
            order *= max(d, 1)
        newbasis = snf.V_inverse @ BK
        gens = []
        for i, d in enumerate(snf.diagonal()):
            if d >= 2:
                gens.append(self.ambient.reduce((0,) * f + tuple(newbasis.row(i))))
        return order, tuple(gens)

    @property
    def gp_torsion_order(self) -> int:
        return self._gp_torsion[0]

    @cached_property
    def free_cone(self) -> geom.ConeGeometry:
        return geom.ConeGeometry.of(self.free_parts(), self.free_rank)

    def __contains__(self, x) -> bool:
        return contains(self, x)


def hilbert_basis(cone_generators, lattice_rank: int) -> list[Vector]:
    """Minimal generating set of cone(generators) intersected with Z^rank.

    Triangulates into simplicial subcones (placing triangulation in lex ray
    order), enumerates each half-open fundamental parallelepiped, unions with
    the primitive rays, and minimizes by pairwise-sum elimination.  Output is
    sorted lexicographically.

    Raises NotStronglyConvex when the cone contains a line.
    """
    rays = [tuple(int(x) for x in v) for v in cone_generators]
    for r in rays:
        if len(r) != lattice_rank:
            raise ValueError("generator length mismatch")
    rays = [r for r in rays if not geom.is_zero(r)]
    if not rays:
        return []
    cone = geom.ConeGeometry.of(rays, lattice_rank)
    if not cone.is_sharp:
        raise NotStronglyConvex("cone contains a line; quotient by it first")
    basis, coords = geom.cone_lattice_coords(rays, lattice_rank)
    span_dim = len(basis)
    B = IntMatrix.from_columns(basis, rows=lattice_rank)
    hb = _hilbert_basis_full_dim(coords, span_dim)
    return sorted(B.apply(h) for h in hb)


def _hilbert_basis_full_dim(rays, dim: int) -> list[Vector]:
    """Hilbert basis of a sharp cone spanning Z^dim."""
    if dim == 0:
        return []
    cone = geom.ConeGeometry.of(rays, dim)
    candidates = {geom.primitive(r) for r in rays if not geom.is_zero(r)}
    for simplex in geom.triangulate(list(cone.rays), dim):
        block = [cone.rays[i] for i in simplex]
        assert len(block) == dim
        for p in geom.parallelepiped_points(block):
            if not geom.is_zero(p):
                candidates.add(p)
    minimal = []
    for h in sorted(candidates):
        reducible = False
        for g in candidates:
            if g != h and cone.contains(geom.vsub(h, g)):
                reducible = True
                break
        if not reducible:
            minimal.append(h)
    return minimal


def _unit_subgroup_rows(P: FineMonoid) -> list[Vector]:
    """Presentation-space generators of the unit group of P.

    The units are exactly the submonoid generated by the generators whose
    free part lies in the lineality space of the free cone; for a fine
    monoid this submonoid is a group.
    """
    lin = P.free_cone.lineality_basis
    if not lin:
        return []
    lin_rank = len(lin)
    units = []
    for g in P.generators:
        fp = P.ambient.free_part(g)
        if _span_rank(list(lin) + [fp]) == lin_rank:
            units.append(g)
    return units


def _quotient_by_subgroup(G: FgAbelianGroup, rows) -> tuple[FgAbelianGroup, IntMatrix]:
    """Quotient of G by the subgroup generated by `rows` (plus relations).

    Returns the quotient group and the matrix of the projection in
    presentation coordinates.
    """
    n = G.num_coords
    f = G.free_rank
    rel = [tuple(d if j == f + i else 0 for j in range(n))
           for i, d in enumerate(G.torsion_orders)]
    cols = [tuple(r) for r in rows] + rel
    M = IntMatrix.from_columns(cols, rows=n)
    snf = smith_normal_form(M)
    diag = snf.diagonal()
    free_idx, tors_idx, tors_orders = [], [], []
    for j in range(n):
        d = diag[j] if j < len(diag) else 0
        if d == 0:
            free_idx.append(j)
        elif d >= 2:
            tors_idx.append(j)
            tors_orders.append(d)
    H = FgAbelianGroup(len(free_idx), tuple(tors_orders))
    proj_rows = [snf.U.row(j) for j in free_idx] + [snf.U.row(j) for j in tors_idx]
    proj = IntMatrix.from_rows(proj_rows) if proj_rows else IntMatrix.zero(0, n)
    return H, proj


def contains(P: FineMonoid, x) -> bool:
    """Exact membership of an ambient element in the monoid."""
    G = P.ambient
    x = G.reduce(x)
    if geom.is_zero(x):
        return True
    if not P.generators:
        return False
    units = _unit_subgroup_rows(P)
    if units:
        H, proj = _quotient_by_subgroup(G, units)
        Q = FineMonoid.make(H, [proj.apply(g) for g in P.generators])
        return _contains_sharp(Q, H.reduce(proj.apply(x)))
    return _contains_sharp(P, x)


def _contains_sharp(P: FineMonoid, x) -> bool:
    G = P.ambient
    f = G.free_rank
    cone = P.free_cone
    assert cone.is_sharp
    mixed = [g for g in P.generators if not geom.is_zero(G.free_part(g))]
    torsion_gens = [g for g in P.generators if geom.is_zero(G.free_part(g))]
    tors_lat = hnf_rows([g[f:] for g in torsion_gens]
                        + [tuple(d if j == i else 0 for j in range(len(G.torsion_orders)))
                           for i, d in enumerate(G.torsion_orders)])

    memo: dict[Vector, bool] = {}

    def search(rem: Vector) -> bool:
        if rem in memo:
            return memo[rem]
        fp = G.free_part(rem)
        if geom.is_zero(fp):
            ok = in_lattice(rem[f:], tors_lat)
            memo[rem] = ok
            return ok
        if not cone.contains(fp):
            memo[rem] = False
            return False
        for g in mixed:
            if search(G.reduce(geom.vsub(rem, g))):
                memo[rem] = True
                return True
        memo[rem] = False
        return False

    return search(G.reduce(x))


@dataclass(frozen=True)
class SaturationReport:
    """Result of saturating a fine monoid."""

    saturated: FineMonoid
    torsion_order: int
    index_data: tuple[Vector, ...]   # generators the saturation added
    idempotent: bool = field(default=True)

    def summary(self) -> str:
        added = ", ".join(str(v) for v in self.index_data) or "none"
        return (f"saturation added generators: {added}; "
                f"torsion order {self.torsion_order}")


def _saturate_generators(P: FineMonoid) -> tuple[tuple[Vector, ...], int]:
    """Generators of P^sat inside the ambient group, plus |torsion(P^gp)|."""
    G = P.ambient
    f = G.free_rank
    L1 = P.gp_lattice
    torsion_order, torsion_gens = P._gp_torsion
    K = hnf_rows([row for row in L1 if all(row[j] == 0 for j in range(f))])

    # lattice of free parts of P^gp
    free_basis = hnf_rows([row[:f] for row in L1])
    r = len(free_basis)
    out: list[Vector] = list(torsion_gens)
    if r:
        BF = IntMatrix.from_columns(free_basis, rows=f)
        ws = []
        for g in P.generators:
            w = solve_integer(BF, G.free_part(g))
            assert w is not None
            ws.append(w)
        cone = geom.ConeGeometry.of(ws, r)
        lam_gens: list[Vector] = []
        lin = cone.lineality_basis
        if lin:
            lin_cols = IntMatrix.from_columns(lin, rows=r)
            snf = smith_normal_form(lin_cols)
            assert all(d == 1 for d in snf.diagonal())
            proj_rows = [snf.U.row(j) for j in range(len(lin), r)]
            proj = (IntMatrix.from_rows(proj_rows) if proj_rows
                    else IntMatrix.zero(0, r))
            projected = [proj.apply(w) for w in ws]
            hb = _hilbert_basis_full_dim_or_span(projected, r - len(lin))
            lin_hnf = hnf_rows(lin)
            for h in hb:
                lift = solve_integer(proj, h)
                assert lift is not None
                lam_gens.append(reduce_mod_lattice(lift, lin_hnf))
            for l in lin:
                lam_gens.append(tuple(l))
                lam_gens.append(geom.vneg(l))
        else:
            lam_gens.extend(_hilbert_basis_full_dim_or_span(ws, r))
        # lift each lattice-coordinate generator into P^gp
        L1_free = IntMatrix.from_rows([row[:f] for row in L1]).transpose
        for u in lam_gens:
            target = BF.apply(u)
            c = solve_integer(L1_free, target)
            assert c is not None
            vec = tuple(sum(c[i] * L1[i][j] for i in range(len(L1)))
                        for j in range(G.num_coords))
            vec = reduce_mod_lattice(vec, K)
            out.append(G.reduce(vec))
    return tuple(out), torsion_order


def _hilbert_basis_full_dim_or_span(rays, dim: int) -> list[Vector]:
    """Hilbert basis allowing rays that span a sublattice of Z^dim."""
    rays = [r for r in rays if not geom.is_zero(r)]
    if not rays or dim == 0:
        return []
    basis, coords = geom.cone_lattice_coords(rays, dim)
    B = IntMatrix.from_columns(basis, rows=dim)
    return [B.apply(h) for h in _hilbert_basis_full_dim(coords, len(basis))]


def saturate(P: FineMonoid) -> SaturationReport:
    """Saturation P^sat = {g in P^gp : n*g in P for some n >= 1}.

    Computed as the preimage in P^gp of the rational cone over the free
    parts; the full torsion subgroup of P^gp is absorbed.  The report stores
    an idempotence certificate (re-saturating changes nothing).
    """
    gens, torsion_order = _saturate_generators(P)
    sat = FineMonoid.make(P.ambient, gens)
    added = tuple(g for g in sat.generators if g not in set(P.generators))
    gens2, _ = _saturate_generators(sat)
    idem = FineMonoid.make(P.ambient, gens2) == sat
    assert idem, "saturation failed to be idempotent"
    return SaturationReport(sat, torsion_order, added, idem)


def is_saturated(P: FineMonoid) -> bool:
    """True iff P equals its saturation as a submonoid of the ambient group."""
    sat = saturate(P).saturated
    return all(contains(P, g) for g in sat.generators)


@dataclass(frozen=True)
class MonoidHom:
    """Homomorphism of fine monoids, given on ambient groups.

    The matrix acts on presentation coordinates (target coords x source
    coords).  Construction checks that torsion is respected and that every
    source generator lands inside the target monoid.
    """

    source: FineMonoid
    target: FineMonoid
    matrix: IntMatrix

    def __post_init__(self):
        if (self.matrix.rows, self.matrix.cols) != (
                self.target.ambient.num_coords, self.source.ambient.num_coords):
            raise ValueError("hom matrix has wrong shape")
        if not hom_well_defined(self.source.ambient, self.target.ambient, self.matrix):
            raise ValueError("matrix does not define a map of ambient groups")
        for g in self.source.generators:
            if not contains(self.target, self.matrix.apply(g)):
                raise ValueError(f"generator {g} does not map into the target monoid")

    def apply(self, v) -> Vector:
        return self.target.ambient.reduce(self.matrix.apply(self.source.ambient.reduce(v)))


def hom_well_defined(src: FgAbelianGroup, dst: FgAbelianGroup, matrix: IntMatrix) -> bool:
    """Does the coordinate matrix send src relations into dst relations?"""
    fs = src.free_rank
    for i, d in enumerate(src.torsion_orders):
        col = matrix.column(fs + i)
        image = tuple(d * x for x in col)
        if any(image[:dst.free_rank]):
            return False
        for j, dj in enumerate(dst.torsion_orders):
            if image[dst.free_rank + j] % dj != 0:
                return False
    return True


@dataclass(frozen=True)
class PushoutData:
    """fs pushout together with the chart maps into it."""

    report: SaturationReport
    ambient: FgAbelianGroup
    unsaturated: FineMonoid
    leg_left: IntMatrix    # target-of-f coords -> pushout coords
    leg_right: IntMatrix   # target-of-g coords -> pushout coords


def amalgamated_sum(f: MonoidHom, g: MonoidHom) -> PushoutData:
    """P +_R Q inside coker(P^gp + Q^gp <- R^gp), integralized and saturated."""
    if f.source != g.source:
        raise ValueError("pushout legs must share their source monoid")
    P, Q = f.target, g.target
    nP, nQ = P.ambient.num_coords, Q.ambient.num_coords
    nR = f.source.ambient.num_coords
    N = nP + nQ

    cols = []
    fP = P.ambient.free_rank
    for i, d in enumerate(P.ambient.torsion_orders):
        cols.append(tuple(d if j == fP + i else 0 for j in range(N)))
    fQ = Q.ambient.free_rank
    for i, d in enumerate(Q.ambient.torsion_orders):
        cols.append(tuple(d if j == nP + fQ + i else 0 for j in range(N)))
    for j in range(nR):
        fc = f.matrix.column(j)
        gc = g.matrix.column(j)
        cols.append(tuple(fc) + tuple(-x for x in gc))

    M = IntMatrix.from_columns(cols, rows=N)
    snf = smith_normal_form(M)
    diag = snf.diagonal()
    free_idx = [j for j in range(N) if (diag[j] if j < len(diag) else 0) == 0]
    tors_idx = [j for j in range(N) if j < len(diag) and diag[j] >= 2]
    H = FgAbelianGroup(len(free_idx), tuple(diag[j] for j in tors_idx))
    proj = IntMatrix.from_rows([snf.U.row(j) for j in free_idx]
                               + [snf.U.row(j) for j in tors_idx])

    leg_left = IntMatrix.from_columns(
        [proj.apply(tuple(1 if t == j else 0 for t in range(N))) for j in range(nP)],
        rows=H.num_coords)
    leg_right = IntMatrix.from_columns(
        [proj.apply(tuple(1 if t == nP + j else 0 for t in range(N))) for j in range(nQ)],
        rows=H.num_coords)

    gens = [leg_left.apply(v) for v in P.generators] + \
           [leg_right.apply(v) for v in Q.generators]
    unsat = FineMonoid.make(H, gens)
    return PushoutData(saturate(unsat), H, unsat, leg_left, leg_right)


def fs_pushout(f: MonoidHom, g: MonoidHom) -> SaturationReport:
    """Fine-saturated pushout of P <- R -> Q; chart form of fs fiber products."""
    return amalgamated_sum(f, g).report


def spec_component_count(P: FineMonoid, require_saturated: bool = True) -> int:
    """Connected components of Spec k[P], k algebraically closed of char 0.

    For an fs monoid this is the order of the torsion subgroup of P^gp.  The
    flag makes the fs precondition explicit; only that case is asserted.
    """
    if require_saturated and not is_saturated(P):
        raise NotSaturated("component count by torsion order needs a saturated monoid")
    return P.gp_torsion_order
