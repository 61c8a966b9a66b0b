"""Exact rational polyhedral kernel for desk-scale cones.

Cones are handed around as tuples of integer ray generators.  The double
description step converts between ray and inequality descriptions with the
classic incremental algorithm (lineality handled explicitly, adjacency by
zero-set inclusion), entirely over Python integers.  Dimensions stay tiny
(<= 8 after products), so no effort is spent on asymptotics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .lattice import (IntMatrix, Vector, hnf_rows, kernel_basis,
                      lattice_rank, primitive, smith_normal_form,
                      solve_integer, solve_rational)


def dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def vadd(a, b) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vneg(a) -> Vector:
    return tuple(-x for x in a)


def vscale(c, a) -> Vector:
    return tuple(c * x for x in a)


def is_zero(a) -> bool:
    return all(x == 0 for x in a)


def dual_generators(constraints, dim: int) -> tuple[tuple[Vector, ...], tuple[Vector, ...]]:
    """Generators (lines, rays) of {y : y . c >= 0 for every constraint c}.

    Incremental double description.  Lines come back as an HNF basis of the
    lineality space; rays are primitive, minimal and sorted.
    """
    constraints = [tuple(int(x) for x in c) for c in constraints]
    lines: list[Vector] = [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
    rays: list[tuple[Vector, frozenset]] = []
    processed = 0
    for a in constraints:
        if is_zero(a):
            processed += 1
            continue
        pivot = next((l for l in lines if dot(l, a) != 0), None)
        if pivot is not None:
            d0 = dot(pivot, a)
            if d0 < 0:
                pivot = vneg(pivot)
                d0 = -d0
            new_lines = []
            for l in lines:
                if l == pivot or l == vneg(pivot):
                    continue
                dl = dot(l, a)
                if dl != 0:
                    l = primitive(vsub(vscale(d0, l), vscale(dl, pivot)))
                new_lines.append(l)
            new_rays = []
            for r, z in rays:
                dr = dot(r, a)
                if dr != 0:
                    r = primitive(vsub(vscale(d0, r), vscale(dr, pivot)))
                new_rays.append((r, z | {processed}))
            new_rays.append((primitive(pivot), frozenset(range(processed))))
            lines = new_lines
            rays = new_rays
        else:
            plus = [(r, z) for r, z in rays if dot(r, a) > 0]
            zero = [(r, z | {processed}) for r, z in rays if dot(r, a) == 0]
            minus = [(r, z) for r, z in rays if dot(r, a) < 0]
            combos = []
            for rp, zp in plus:
                for rm, zm in minus:
                    common = zp & zm
                    if any((common <= z) and r != rp and r != rm for r, z in rays):
                        continue
                    # (a.rp) rm - (a.rm) rp: tight on a, nonnegative combination
                    vec = primitive(vsub(vscale(dot(rp, a), rm), vscale(dot(rm, a), rp)))
                    combos.append((vec, common | {processed}))
            rays = [(r, z | {processed}) for r, z in plus] + zero + combos
        processed += 1
    seen = {}
    for r, z in rays:
        if is_zero(r):
            continue
        if r in seen:
            seen[r] = seen[r] | z
        else:
            seen[r] = z
    return hnf_rows(lines), tuple(sorted(seen))


@dataclass(frozen=True)
class ConeGeometry:
    """Cached double description of a single rational cone."""

    dim: int
    rays: tuple[Vector, ...]

    @staticmethod
    def of(rays, dim: int) -> "ConeGeometry":
        prims = []
        for r in rays:
            p = primitive(r)
            if not is_zero(p) and p not in prims:
                prims.append(p)
        return ConeGeometry(dim, tuple(sorted(prims)))

    @cached_property
    def _dual(self):
        return dual_generators(self.rays, self.dim)

    @property
    def equations(self) -> tuple[Vector, ...]:
        """Covectors vanishing on the cone (basis of span(cone)-perp)."""
        return self._dual[0]

    @property
    def normals(self) -> tuple[Vector, ...]:
        """Facet inequalities: minimal generators of the dual modulo lineality."""
        return self._dual[1]

    @cached_property
    def lineality_basis(self) -> tuple[Vector, ...]:
        stacked = list(self.equations) + list(self.normals)
        if not stacked:
            return hnf_rows([tuple(1 if i == j else 0 for j in range(self.dim))
                             for i in range(self.dim)])
        A = IntMatrix.from_rows(stacked)
        return hnf_rows(kernel_basis(A))

    @property
    def is_sharp(self) -> bool:
        return not self.lineality_basis

    @cached_property
    def span_dim(self) -> int:
        return self.dim - len(self.equations)

    def contains(self, x) -> bool:
        x = tuple(x)
        return (all(dot(e, x) == 0 for e in self.equations)
                and all(dot(n, x) >= 0 for n in self.normals))

    def contains_relative_interior(self, x) -> bool:
        x = tuple(x)
        if self.span_dim == 0:
            return is_zero(x)
        return (all(dot(e, x) == 0 for e in self.equations)
                and all(dot(n, x) > 0 for n in self.normals))

    def contains_cone(self, other: "ConeGeometry") -> bool:
        return all(self.contains(r) for r in other.rays)

    def intersect_rays(self, other: "ConeGeometry") -> tuple[Vector, ...]:
        """Ray generators of the intersection with another cone."""
        cons = []
        for e in self.equations + other.equations:
            cons.append(e)
            cons.append(vneg(e))
        cons.extend(self.normals)
        cons.extend(other.normals)
        lines, rays = dual_generators(cons, self.dim)
        assert not lines, "intersection of sharp cones grew a line"
        return rays

    def meets_interior_of(self, other: "ConeGeometry") -> bool:
        """Does this cone meet the relative interior of `other`?

        Checked exactly: the intersection must have a point strictly inside
        `other`, i.e. some positive combination of intersection rays is
        strictly positive on every facet normal of `other`.
        """
        rays = self.intersect_rays(other)
        if not rays:
            return False
        s = rays[0]
        for r in rays[1:]:
            s = vadd(s, r)
        # The sum of all rays is relatively interior to the intersection,
        # which meets rel-int(other) iff this point lies there.
        return other.contains_relative_interior(s)


def simplicial_index(rays) -> int:
    """Lattice-normalized volume of the cone spanned by independent rays.

    Equals the index of the subgroup the rays generate inside the saturated
    lattice of their span; 1 means unimodular.
    """
    rays = [tuple(r) for r in rays]
    if not rays:
        return 1
    A = IntMatrix.from_columns(rays, rows=len(rays[0]))
    diag = smith_normal_form(A).diagonal()
    vol = 1
    for d in diag:
        if d == 0:
            raise ValueError("rays are linearly dependent")
        vol *= d
    return vol


def triangulate(rays, dim: int) -> list[tuple[int, ...]]:
    """Placing triangulation of cone(rays), rays inserted in lex order.

    Returns maximal simplices as tuples of ray indices.  Rays interior to the
    cone already placed are skipped (they are redundant generators).
    """
    order = sorted(range(len(rays)), key=lambda i: rays[i])
    placed: list[int] = []
    simplices: list[tuple[int, ...]] = []
    for idx in order:
        v = rays[idx]
        if is_zero(v):
            continue
        if not placed:
            placed.append(idx)
            simplices = [(idx,)]
            continue
        support = ConeGeometry.of([rays[i] for i in placed], dim)
        if support.contains(v):
            continue
        placed_rank = lattice_rank([rays[i] for i in placed])
        if lattice_rank([rays[i] for i in placed] + [v]) > placed_rank:
            simplices = [s + (idx,) for s in simplices]
        else:
            new = []
            for n in support.normals:
                if dot(n, v) >= 0:
                    continue
                for s in simplices:
                    tight = tuple(i for i in s if dot(n, rays[i]) == 0)
                    if len(tight) == len(s) - 1:
                        new.append(tight + (idx,))
            simplices.extend(new)
        placed.append(idx)
    return simplices


def parallelepiped_points(basis) -> list[Vector]:
    """Lattice points of the half-open parallelepiped spanned by a basis.

    `basis` is a list of k linearly independent integer vectors of length k.
    Returns all x in Z^k with x = sum t_i b_i, 0 <= t_i < 1.
    """
    basis = [tuple(b) for b in basis]
    k = len(basis)
    if k == 0:
        return [()]
    W = IntMatrix.from_columns(basis, rows=k)
    snf = smith_normal_form(W)
    diag = snf.diagonal()
    assert all(d != 0 for d in diag), "parallelepiped basis is degenerate"
    reps = [()]
    for d in diag:
        reps = [r + (i,) for r in reps for i in range(d)]
    points = set()
    for rep in reps:
        x = snf.U_inverse.apply(rep)
        t = solve_rational(W, x)
        shift = tuple(int(Fraction(ti).__floor__()) for ti in t)
        x = vsub(x, W.apply(shift))
        t2 = solve_rational(W, x)
        assert all(0 <= ti < 1 for ti in t2)
        points.add(tuple(x))
    expected = 1
    for d in diag:
        expected *= d
    assert len(points) == expected
    return sorted(points)


def cone_lattice_coords(rays, dim: int):
    """Coordinates of rays in the saturated lattice of their span.

    Returns (span_basis_rows, coords) where coords[i] expresses rays[i] in the
    basis; the basis is the canonical HNF basis from lattice saturation.
    """
    from .lattice import saturate_subgroup
    basis = saturate_subgroup(rays, dim)
    if not basis:
        return (), [() for _ in rays]
    B = IntMatrix.from_columns(basis, rows=dim)
    coords = []
    for r in rays:
        c = solve_integer(B, r)
        assert c is not None, "ray escapes the saturated span lattice"
        coords.append(c)
    return basis, coords
