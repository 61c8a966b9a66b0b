"""Desk-scale log-smooth models: an Artin fan plus a log Hodge table.

A model packages exactly what the homology calculators consume: its cone
complex, its dimension, flags, and the table h^p(X, Omega^{q,log}).  For
affine models the entries are weight-graded dimension series truncated at a
configurable order; for complete models they are plain integers.  The two
kinds never mix inside one table.

Model classes provided: complete smooth toric, affine toric, P^1 with n
marked points, the nodal cubic, mixed-affine spaces (A^n with a designated
log subset, the orbifold substrate), products, and subdivided toric models.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from math import comb

from . import _geometry as geom
from . import monoid as monoid_mod
from .conecomplex import (GeneralizedConeComplex, Subdivision, from_toric_fan,
                          point_complex, product as complex_product,
                          snc_artin_fan)
from .conecomplex import nodal_cubic_complex
from .errors import KindMismatch, NotComplete, ScopeExceeded, SeriesNotSupported
from .lattice import primitive

DEFAULT_TRUNCATION = 10

FINITE = "finite"
SERIES = "series"


@dataclass(frozen=True)
class GradedEntry:
    """A dimension: a plain count, or a truncated weight-graded series."""

    kind: str
    value: int | tuple[int, ...]

    @staticmethod
    def finite(n: int) -> "GradedEntry":
        if n < 0:
            raise ValueError("dimensions are nonnegative")
        return GradedEntry(FINITE, int(n))

    @staticmethod
    def series(coeffs, truncation: int | None = None) -> "GradedEntry":
        coeffs = [int(c) for c in coeffs]
        if truncation is not None:
            coeffs = (coeffs + [0] * (truncation + 1))[:truncation + 1]
        if any(c < 0 for c in coeffs):
            raise ValueError("series coefficients are nonnegative")
        return GradedEntry(SERIES, tuple(coeffs))

    @property
    def truncation(self) -> int | None:
        return len(self.value) - 1 if self.kind == SERIES else None

    def is_zero(self) -> bool:
        if self.kind == FINITE:
            return self.value == 0
        return not any(self.value)

    def total(self) -> int:
        """Finite value, or sum of the stored coefficients."""
        return self.value if self.kind == FINITE else sum(self.value)

    def coefficient(self, w: int) -> int:
        if self.kind == FINITE:
            raise SeriesNotSupported("finite entries carry no weight grading")
        if w > self.truncation:
            from .errors import TruncationTooSmall
            raise TruncationTooSmall(f"weight {w} beyond truncation {self.truncation}")
        return self.value[w]

    def __add__(self, other: "GradedEntry") -> "GradedEntry":
        if self.kind != other.kind:
            raise KindMismatch("cannot add finite and series entries")
        if self.kind == FINITE:
            return GradedEntry.finite(self.value + other.value)
        n = min(len(self.value), len(other.value))
        return GradedEntry.series([self.value[i] + other.value[i] for i in range(n)])

    def __mul__(self, other: "GradedEntry") -> "GradedEntry":
        if self.kind == FINITE and other.kind == FINITE:
            return GradedEntry.finite(self.value * other.value)
        if self.kind == FINITE:
            return GradedEntry.series([self.value * c for c in other.value])
        if other.kind == FINITE:
            return other * self
        n = min(len(self.value), len(other.value))
        out = [0] * n
        for i, a in enumerate(self.value):
            if a == 0:
                continue
            for j, b in enumerate(other.value):
                if i + j < n:
                    out[i + j] += a * b
        return GradedEntry.series(out)

    def shifted(self, w: int) -> "GradedEntry":
        """Multiply a series by t^w."""
        if self.kind == FINITE:
            raise SeriesNotSupported("shift applies to series entries")
        n = len(self.value)
        return GradedEntry.series([0] * w + list(self.value), truncation=n - 1)

    def to_json(self):
        if self.kind == FINITE:
            return self.value
        return {"series": list(self.value), "truncation": self.truncation}

    def render(self) -> str:
        if self.kind == FINITE:
            return str(self.value)
        terms = []
        for w, c in enumerate(self.value):
            if c == 0:
                continue
            if w == 0:
                terms.append(str(c))
            else:
                base = "t" if w == 1 else f"t^{w}"
                terms.append(base if c == 1 else f"{c}{base}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(t^{len(self.value)})"


def _zero_entry(kind: str, truncation: int | None) -> GradedEntry:
    if kind == FINITE:
        return GradedEntry.finite(0)
    return GradedEntry.series([0] * (truncation + 1))


@dataclass(frozen=True)
class HodgeTable:
    """h^p(X, Omega^{q,log}) for 0 <= p, q <= dim, one entry kind per table."""

    dim: int
    cells: tuple[tuple[tuple[int, int], GradedEntry], ...]

    @staticmethod
    def build(dim: int, entries: dict) -> "HodgeTable":
        kinds = {e.kind for e in entries.values() if not e.is_zero()}
        if len(kinds) > 1:
            raise KindMismatch("finite and series entries mixed within one table")
        cells = []
        for (p, q), e in sorted(entries.items()):
            if not (0 <= p <= dim and 0 <= q <= dim):
                if not e.is_zero():
                    raise ValueError("entry outside the Hodge square")
                continue
            if not e.is_zero():
                cells.append(((p, q), e))
        return HodgeTable(dim, tuple(cells))

    @property
    def kind(self) -> str:
        return self.cells[0][1].kind if self.cells else FINITE

    @property
    def truncation(self) -> int | None:
        for _, e in self.cells:
            if e.kind == SERIES:
                return e.truncation
        return None

    def entry(self, p: int, q: int) -> GradedEntry:
        for key, e in self.cells:
            if key == (p, q):
                return e
        return _zero_entry(self.kind, self.truncation)

    def as_dict(self) -> dict:
        return {key: e for key, e in self.cells}

    def total(self) -> int:
        return sum(e.total() for _, e in self.cells)

    def convolve(self, other: "HodgeTable") -> "HodgeTable":
        if self.kind == SERIES and other.kind == SERIES:
            raise KindMismatch("series x series products are out of scope")
        dim = self.dim + other.dim
        out: dict = {}
        for (p1, q1), e1 in self.cells:
            for (p2, q2), e2 in other.cells:
                key = (p1 + p2, q1 + q2)
                prod = e1 * e2
                out[key] = out[key] + prod if key in out else prod
        return HodgeTable.build(dim, out)

    def to_json(self):
        return {f"{p},{q}": e.to_json() for (p, q), e in self.cells}


@dataclass(frozen=True)
class LogModel:
    """A log-smooth combinatorial model; omega_log_rank always equals dim."""

    name: str
    dimension: int
    artin_fan: GeneralizedConeComplex
    hodge: HodgeTable
    dual_hodge: HodgeTable | None
    kind: str
    complete: bool
    affine: bool
    weakly_log_separated: bool = True
    log_coords: tuple[int, ...] = ()
    truncation: int | None = None

    def __post_init__(self):
        if self.affine:
            for (p, q), e in self.hodge.cells:
                if p > 0 and not e.is_zero():
                    raise ValueError("affine models have no higher cohomology")

    @property
    def omega_log_rank(self) -> int:
        return self.dimension

    @property
    def entry_kind(self) -> str:
        return self.hodge.kind


def point_model() -> LogModel:
    table = HodgeTable.build(0, {(0, 0): GradedEntry.finite(1)})
    return LogModel("point", 0, point_complex(), table, table,
                    kind="point", complete=True, affine=False)


def _angular_complete(rays, maximal_cones, rank: int) -> bool:
    """Support check for rank <= 2 fans (sector-volume coverage)."""
    if rank == 0:
        return True
    if rank == 1:
        return {(1,), (-1,)} <= {primitive(r) for r in rays}
    def cmp(a, b):
        def half(v):
            return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1
        ha, hb = half(a), half(b)
        if ha != hb:
            return ha - hb
        cross = a[0] * b[1] - a[1] * b[0]
        return -1 if cross > 0 else (1 if cross < 0 else 0)
    prims = sorted({primitive(r) for r in rays}, key=cmp_to_key(cmp))
    if len(prims) < 3:
        return False
    pairs = {frozenset((prims[i], prims[(i + 1) % len(prims)]))
             for i in range(len(prims))}
    given = {frozenset(primitive(rays[i]) for i in mc) for mc in maximal_cones}
    return pairs == given


def toric_model(rays, maximal_cones, rank: int, complete: bool,
                name: str = "toric", truncation: int = DEFAULT_TRUNCATION) -> LogModel:
    """Toric variety with its full boundary divisor; Omega^{1,log} is trivial.

    Complete models get finite tables h^{0,q} = C(d,q).  Affine models (one
    full-dimensional maximal cone) get weight series: the coordinate ring
    graded by pairing with the sum of the primitive rays.
    """
    fan = from_toric_fan(rays, maximal_cones, rank)
    if complete:
        if rank <= 2 and not _angular_complete(rays, maximal_cones, rank):
            raise NotComplete("fan support is not the whole space")
        entries = {(0, q): GradedEntry.finite(comb(rank, q)) for q in range(rank + 1)}
        table = HodgeTable.build(rank, entries)
        return LogModel(name, rank, fan, table, table,
                        kind="toric", complete=True, affine=False)
    if len(maximal_cones) != 1:
        raise ScopeExceeded("affine toric models use a single maximal cone")
    sigma = [tuple(int(x) for x in rays[i]) for i in maximal_cones[0]]
    if geom.ConeGeometry.of(sigma, rank).span_dim != rank:
        raise ScopeExceeded("affine toric models need a full-dimensional cone")
    S = _affine_weight_series(sigma, rank, truncation)
    entries = {(0, q): GradedEntry.finite(comb(rank, q)) * S for q in range(rank + 1)}
    table = HodgeTable.build(rank, entries)
    dual = None
    if geom.simplicial_index(sigma) == 1 and len(sigma) == rank:
        dual_entries = {(0, q): (GradedEntry.finite(comb(rank, q)) * S).shifted(q)
                        for q in range(rank + 1)}
        dual = HodgeTable.build(rank, dual_entries)
    return LogModel(name, rank, fan, table, dual,
                    kind="toric", complete=False, affine=True,
                    log_coords=tuple(range(rank)), truncation=truncation)


def _affine_weight_series(sigma_rays, rank: int, truncation: int) -> GradedEntry:
    """Monomial count of k[dual(sigma) cap M] by weight against sum of rays."""
    dual = geom.ConeGeometry.of(sigma_rays, rank)
    hb = monoid_mod.hilbert_basis(dual.normals, rank)
    w = (0,) * rank
    for r in sigma_rays:
        w = geom.vadd(w, primitive(r))
    counts = [0] * (truncation + 1)
    seen = {(0,) * rank}
    counts[0] = 1
    frontier = [(0,) * rank]
    while frontier:
        nxt = []
        for p in frontier:
            for h in hb:
                cand = geom.vadd(p, h)
                wt = geom.dot(w, cand)
                if wt <= truncation and cand not in seen:
                    seen.add(cand)
                    counts[wt] += 1
                    nxt.append(cand)
        frontier = nxt
    return GradedEntry.series(counts)


def affine_space_model(d: int, truncation: int = DEFAULT_TRUNCATION) -> LogModel:
    """A^d with its full toric boundary."""
    if d == 0:
        return point_model()
    rays = [tuple(1 if i == j else 0 for j in range(d)) for i in range(d)]
    return toric_model(rays, [tuple(range(d))], d, complete=False,
                       name=f"A^{d}", truncation=truncation)


def p1_toric_model() -> LogModel:
    return toric_model([(1,), (-1,)], [(0,), (1,)], 1, complete=True, name="P^1")


def p2_toric_model() -> LogModel:
    return toric_model([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (2, 0)], 2,
                       complete=True, name="P^2")


def _line_bundle_h0(m: int) -> int:
    return max(0, m + 1)


def _line_bundle_h1(m: int) -> int:
    return max(0, -m - 1)


def marked_p1(n: int) -> LogModel:
    """P^1 with n distinct marked points; Omega^{1,log} = O(n-2)."""
    if n < 0:
        raise ValueError("marked point count is nonnegative")
    entries = {
        (0, 0): GradedEntry.finite(1),
        (1, 0): GradedEntry.finite(0),
        (0, 1): GradedEntry.finite(_line_bundle_h0(n - 2)),
        (1, 1): GradedEntry.finite(_line_bundle_h1(n - 2)),
    }
    dual_entries = {
        (0, 0): GradedEntry.finite(1),
        (1, 0): GradedEntry.finite(0),
        (0, 1): GradedEntry.finite(_line_bundle_h0(2 - n)),
        (1, 1): GradedEntry.finite(_line_bundle_h1(2 - n)),
    }
    fan = snc_artin_fan([(i,) for i in range(n)]) if n else point_complex()
    return LogModel(f"P^1 with {n} marked points", 1, fan,
                    HodgeTable.build(1, entries), HodgeTable.build(1, dual_entries),
                    kind="marked_p1", complete=True, affine=False)


def nodal_cubic() -> LogModel:
    """The nodal cubic, log smooth over a rank-one base point.

    The log cotangent bundle is trivial and the curve has arithmetic genus 1,
    so all four Hodge entries equal 1 (classical; not recomputed here).
    """
    one = GradedEntry.finite(1)
    entries = {(0, 0): one, (1, 0): one, (0, 1): one, (1, 1): one}
    table = HodgeTable.build(1, entries)
    return LogModel("nodal cubic", 1, nodal_cubic_complex(), table, table,
                    kind="nodal_cubic", complete=True, affine=False)


def mixed_affine(num_coords: int, log_coords, *,
                 truncation: int = DEFAULT_TRUNCATION, name: str | None = None) -> LogModel:
    """A^n with the divisorial log structure on a subset of the coordinates.

    Weight convention: a monomial contributes its total degree, a dx_j form
    index contributes 1, a dlog x_i contributes 0.
    """
    log_coords = tuple(sorted(set(int(i) for i in log_coords)))
    if any(i < 0 or i >= num_coords for i in log_coords):
        raise ValueError("log coordinate out of range")
    l = len(log_coords)
    m = num_coords - l
    if num_coords == 0:
        poly = GradedEntry.series([1], truncation=truncation)
    else:
        poly = GradedEntry.series([comb(w + num_coords - 1, num_coords - 1)
                                   for w in range(truncation + 1)])
    entries = {}
    for q in range(num_coords + 1):
        acc = _zero_entry(SERIES, truncation)
        for a in range(q + 1):
            b = q - a
            if a > l or b > m:
                continue
            acc = acc + (GradedEntry.finite(comb(l, a) * comb(m, b)) * poly).shifted(b)
        entries[(0, q)] = acc
    if name is None:
        marks = ",".join(f"x{i}" for i in log_coords) or "no log"
        name = f"A^{num_coords} (log at {marks})" if log_coords else f"A^{num_coords} ({marks})"
    if l:
        rays = [tuple(1 if i == j else 0 for j in range(l)) for i in range(l)]
        fan = from_toric_fan(rays, [tuple(range(l))], l)
    else:
        fan = point_complex()
    return LogModel(name, num_coords, fan, HodgeTable.build(num_coords, entries),
                    None, kind="mixed_affine", complete=(num_coords == 0),
                    affine=True, log_coords=log_coords, truncation=truncation)


def product_model(X: LogModel, Y: LogModel) -> LogModel:
    """Product: Artin fans multiply, Hodge tables convolve (Kunneth)."""
    if X.entry_kind == SERIES and Y.entry_kind == SERIES:
        raise KindMismatch("series x series product models are out of scope")
    table = X.hodge.convolve(Y.hodge)
    dual = None
    if X.dual_hodge is not None and Y.dual_hodge is not None:
        try:
            dual = X.dual_hodge.convolve(Y.dual_hodge)
        except KindMismatch:
            dual = None
    fan = complex_product(X.artin_fan, Y.artin_fan)
    return LogModel(f"{X.name} x {Y.name}", X.dimension + Y.dimension, fan,
                    table, dual, kind="product",
                    complete=X.complete and Y.complete,
                    affine=X.affine or Y.affine,
                    weakly_log_separated=X.weakly_log_separated and Y.weakly_log_separated,
                    truncation=X.truncation if X.truncation is not None else Y.truncation)


def subdivided_model(X: LogModel, s: Subdivision) -> LogModel:
    """Log alteration instance: subdividing the fan keeps the Hodge table.

    Scope: complete smooth toric models and unimodular subdivisions.
    """
    if not (X.kind == "toric" and X.complete):
        raise ScopeExceeded("subdivided models require a complete toric model")
    if s.structure.target != X.artin_fan:
        raise ScopeExceeded("subdivision does not refine this model's fan")
    if not s.all_unimodular():
        raise ScopeExceeded("subdivision must be unimodular (log modification)")
    return LogModel(f"{X.name} (subdivided)", X.dimension, s.refined,
                    X.hodge, X.dual_hodge, kind="toric",
                    complete=True, affine=False)
