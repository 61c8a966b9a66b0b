"""Log Hochschild homology/cohomology tables, the log diagonal picture, and
periodic cyclic homology.

The formality of the derived self-intersection of the log diagonal reduces
every computation here to bookkeeping over the log Hodge table:

  homology degree n   = sum over q - p = n of h^p(Omega^{q,log})
  cohomology degree n = sum over p + q = n of h^p(Lambda^q T^log)
  periodic cyclic     = even/odd halves of the whole table

Degree conventions: homology is indexed by q - p (negative degrees happen),
cohomology by p + q >= 0.  The sign dictionary against the usual homological
indexing is spelled out in the README.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .conecomplex import (DiagonalSubdivision, GeneralizedConeComplex,
                          Subdivision, diagonal_morphism, subdivide_along)
from .errors import ScopeExceeded, SeriesNotSupported
from .logmodel import FINITE, GradedEntry, LogModel


@dataclass(frozen=True)
class HHTable:
    """Graded dimensions of log Hochschild homology or cohomology."""

    variant: str                                  # "homology" | "cohomology"
    degrees: tuple[tuple[int, GradedEntry], ...]  # sorted, nonzero entries only

    @staticmethod
    def build(variant: str, entries: dict) -> "HHTable":
        cells = tuple(sorted((n, e) for n, e in entries.items() if not e.is_zero()))
        return HHTable(variant, cells)

    def entry(self, n: int) -> GradedEntry | None:
        for d, e in self.degrees:
            if d == n:
                return e
        return None

    def support(self) -> tuple[int, ...]:
        return tuple(n for n, _ in self.degrees)

    def dimension(self, n: int) -> int:
        e = self.entry(n)
        return 0 if e is None else e.total()

    def as_dict(self) -> dict:
        return dict(self.degrees)

    def to_json(self):
        return {str(n): e.to_json() for n, e in self.degrees}

    def render(self) -> str:
        width = max((len(str(n)) for n, _ in self.degrees), default=1)
        lines = [f"log Hochschild {self.variant}"]
        for n, e in self.degrees:
            lines.append(f"  degree {str(n).rjust(width)}: {e.render()}")
        return "\n".join(lines) + "\n"


def hh_homology(X: LogModel) -> HHTable:
    """Anti-diagonal sums of the Hodge table: degree n = sum over q - p = n."""
    out: dict[int, GradedEntry] = {}
    for (p, q), e in X.hodge.cells:
        n = q - p
        out[n] = out[n] + e if n in out else e
    return HHTable.build("homology", out)


def hh_cohomology(X: LogModel) -> HHTable:
    """Diagonal sums of the dual Hodge table: degree n = sum over p + q = n."""
    if X.dual_hodge is None:
        raise ScopeExceeded(f"no polyvector table rule for model {X.name!r}")
    out: dict[int, GradedEntry] = {}
    for (p, q), e in X.dual_hodge.cells:
        n = p + q
        out[n] = out[n] + e if n in out else e
    return HHTable.build("cohomology", out)


@dataclass(frozen=True)
class BDescription:
    """What the log diagonal's middle object looks like."""

    text: str
    torus_rank: int | None = None


@dataclass(frozen=True)
class LogDiagonalPicture:
    """The factorization X -> B -> X x X at the cone-complex level."""

    base_model: LogModel
    b_description: BDescription
    diagonal_subdivision: Subdivision
    b_subcomplex: GeneralizedConeComplex
    conormal_rank: int
    details: DiagonalSubdivision = field(compare=False, default=None)


def log_diagonal(X: LogModel) -> LogDiagonalPicture:
    """Assemble the diagonal picture: subdivision of fan x fan along the
    diagonal, the subcomplex the diagonal factors through, and the conormal
    rank (always the model dimension, since the conormal is Omega^{1,log})."""
    fan = X.artin_fan
    if not fan.is_embedded:
        raise ScopeExceeded("diagonal pictures need an embedded (fan-like) Artin fan")
    phi = diagonal_morphism(fan)
    details = subdivide_along(phi)
    if X.kind == "point" or X.dimension == 0:
        desc = BDescription("point", 0)
    elif X.kind == "toric":
        d = X.dimension
        torus = "G_m" if d == 1 else f"G_m^{d}"
        desc = BDescription(f"{X.name} x {torus}", d)
    else:
        desc = BDescription(f"B({X.name})", None)
    assert details.factoring is not None, "diagonal should factor through its image"
    return LogDiagonalPicture(X, desc, details.subdivision,
                              details.image_subcomplex, X.dimension, details)


@dataclass(frozen=True)
class CyclicTable:
    """Periodic cyclic homology: 2-periodic even/odd totals."""

    even: GradedEntry
    odd: GradedEntry

    def to_json(self):
        return {"even": self.even.to_json(), "odd": self.odd.to_json()}

    def render(self) -> str:
        return (f"periodic cyclic homology\n  even: {self.even.render()}\n"
                f"  odd:  {self.odd.render()}\n")


def periodic_cyclic(X: LogModel) -> CyclicTable:
    """Even/odd sums of the Hodge table, via log Hodge-to-de Rham degeneration."""
    if X.hodge.kind != FINITE:
        raise SeriesNotSupported("periodic cyclic homology needs a complete model")
    even = odd = 0
    for (p, q), e in X.hodge.cells:
        if (p + q) % 2 == 0:
            even += e.total()
        else:
            odd += e.total()
    assert even + odd == X.hodge.total()
    return CyclicTable(GradedEntry.finite(even), GradedEntry.finite(odd))


def euler_check(X: LogModel) -> int:
    """Alternating sum of HH dimensions, cross-checked against the table."""
    if X.hodge.kind != FINITE:
        raise SeriesNotSupported("euler characteristics need a complete model")
    hh = hh_homology(X)
    from_hh = sum((-1 if n % 2 else 1) * e.total() for n, e in hh.degrees)
    from_table = sum((-1 if (q - p) % 2 else 1) * e.total()
                     for (p, q), e in X.hodge.cells)
    assert from_hh == from_table
    return from_hh
