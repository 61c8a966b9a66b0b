"""Firm finite-group actions and the orbifold Hochschild decomposition.

An action is diagonal: a finite abelian group acting by characters on the
coordinates of a mixed-affine model (or on the marked points of P^1, where
only firmness detection applies).  A permutation part may be supplied but is
used solely to detect non-firm actions; sector machinery requires a genuine
diagonal action.

For a firm action the g-twisted sector is empty as soon as g scales a log
coordinate nontrivially (the twisted diagonal misses the log diagonal);
otherwise it is the mixed-affine submodel on the fixed coordinates.
Invariants are taken by exact monomial enumeration up to the truncation
order, no cyclotomic arithmetic anywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotFirm, ScopeExceeded, TruncationTooSmall
from .hkr import HHTable, hh_homology
from .logmodel import (DEFAULT_TRUNCATION, GradedEntry, HodgeTable, LogModel,
                       mixed_affine)


@dataclass(frozen=True)
class DiagonalAction:
    """Finite abelian group acting by characters on model coordinates.

    group_orders are the cyclic factor orders; characters[j][i] is the
    exponent by which the j-th generator scales the i-th coordinate, modulo
    the generator order.  The optional permutation detects non-firmness.
    """

    model: LogModel
    group_orders: tuple[int, ...]
    characters: tuple[tuple[int, ...], ...]
    permutation: tuple[int, ...] | None = None

    def __post_init__(self):
        for d in self.group_orders:
            if d < 2:
                raise ValueError("cyclic factor orders must be >= 2")
        if len(self.characters) != len(self.group_orders):
            raise ValueError("one character row per group generator")
        n = self._coord_count()
        for row in self.characters:
            if len(row) != n:
                raise ValueError("character row length must match the coordinate count")
        object.__setattr__(self, "characters", tuple(
            tuple(x % d for x in row)
            for row, d in zip(self.characters, self.group_orders)))
        if self.permutation is not None:
            if sorted(self.permutation) != list(range(n)):
                raise ValueError("permutation must permute the coordinates")
        if self.group_orders and self.model.kind not in ("mixed_affine", "marked_p1"):
            raise ScopeExceeded(
                "nontrivial actions are supported on mixed-affine models and marked P^1")

    def _coord_count(self) -> int:
        if self.model.kind == "marked_p1":
            return self.model.artin_fan.ray_count
        return self.model.dimension

    @property
    def is_trivial_group(self) -> bool:
        return not self.group_orders

    def elements(self):
        """Group elements in a fixed lexicographic order."""
        if not self.group_orders:
            return [()]
        return list(itertools.product(*(range(d) for d in self.group_orders)))

    def identity(self):
        return (0,) * len(self.group_orders)

    def character(self, g, coord: int) -> Fraction:
        """Character exponent of g on a coordinate, as a fraction mod 1."""
        total = Fraction(0)
        for gj, row, d in zip(g, self.characters, self.group_orders):
            total += Fraction(gj * row[coord], d)
        return total % 1

    def acts_trivially(self, g, coord: int) -> bool:
        return self.character(g, coord) == 0

    def _permutation_moves_rays(self) -> bool:
        if self.permutation is None:
            return False
        if self.model.kind == "marked_p1":
            return any(self.permutation[i] != i for i in range(len(self.permutation)))
        moved_log = any(self.permutation[i] != i for i in self.model.log_coords)
        leaves_log = any(self.permutation[i] not in self.model.log_coords
                         for i in self.model.log_coords)
        return moved_log or leaves_log


def check_firm(a: DiagonalAction) -> bool:
    """Firmness: the induced action on the Artin fan is trivial.

    Diagonal character parts always fix the fan.  A permutation moving log
    coordinates (equivalently, rays) breaks firmness; permuting marked
    points of P^1 does too.
    """
    return not a._permutation_moves_rays()


@dataclass(frozen=True)
class TwistedSector:
    """The g-summand of the orbifold decomposition."""

    g: tuple[int, ...]
    locus: LogModel | None
    hodge_contribution: HodgeTable | None

    @property
    def is_empty(self) -> bool:
        return self.locus is None


def twisted_sector(a: DiagonalAction, g) -> TwistedSector:
    """Log fixed locus of g: empty when g moves a log coordinate, otherwise
    the mixed-affine submodel on the chi-trivial coordinates."""
    if not check_firm(a):
        raise NotFirm("the action moves the Artin fan")
    g = tuple(g)
    if g == a.identity() or not a.group_orders:
        return TwistedSector(g, a.model, a.model.hodge)
    if a.model.kind != "mixed_affine":
        raise ScopeExceeded("twisted sectors are computed for mixed-affine models")
    if a.permutation is not None and any(a.permutation[i] != i
                                         for i in range(len(a.permutation))):
        raise ScopeExceeded("sector machinery needs a purely diagonal action")
    if any(not a.acts_trivially(g, i) for i in a.model.log_coords):
        return TwistedSector(g, None, None)
    fixed = [i for i in range(a.model.dimension) if a.acts_trivially(g, i)]
    log_positions = [fixed.index(i) for i in a.model.log_coords]
    locus = mixed_affine(len(fixed), log_positions,
                         truncation=a.model.truncation or DEFAULT_TRUNCATION,
                         name=f"{a.model.name} ^ g={g}")
    return TwistedSector(g, locus, locus.hodge)


def orbifold_hh(a: DiagonalAction, truncation: int | None = None) -> HHTable:
    """Orbifold log Hochschild homology: sector sum followed by G-invariants.

    Sectors are affine here, so homology degree n only sees q = n.  The
    invariant dimensions are exact monomial counts: a basis element is a
    monomial on the sector coordinates wedged with dlog's (weight 0, trivial
    character) and dx's (weight 1, coordinate character).
    """
    if not check_firm(a):
        raise NotFirm("the action moves the Artin fan")
    if a.is_trivial_group:
        return hh_homology(a.model)
    if a.model.kind != "mixed_affine":
        raise ScopeExceeded("orbifold tables are computed for mixed-affine models")
    N = a.model.truncation or DEFAULT_TRUNCATION
    if truncation is not None:
        if truncation > N:
            raise TruncationTooSmall(
                f"model series are truncated at {N}, requested {truncation}")
        N = truncation

    counts: dict[int, list[int]] = {}
    for g in a.elements():
        sector = twisted_sector(a, g)
        if sector.is_empty:
            continue
        coords = ([i for i in range(a.model.dimension) if a.acts_trivially(g, i)]
                  if g != a.identity() else list(range(a.model.dimension)))
        log_set = [i for i in coords if i in a.model.log_coords]
        dx_set = [i for i in coords if i not in a.model.log_coords]
        for q in range(len(coords) + 1):
            for a_size in range(min(q, len(log_set)) + 1):
                b_size = q - a_size
                if b_size > len(dx_set):
                    continue
                for A in itertools.combinations(log_set, a_size):
                    for B in itertools.combinations(dx_set, b_size):
                        base_w = len(B)
                        if base_w > N:
                            continue
                        for mono in _monomials(coords, N - base_w):
                            if _invariant(a, coords, mono, B):
                                w = sum(mono) + base_w
                                counts.setdefault(q, [0] * (N + 1))[w] += 1
    entries = {q: GradedEntry.series(c) for q, c in counts.items()}
    return HHTable.build("homology", entries)


def _monomials(coords, max_weight: int):
    """Exponent tuples on `coords` with total degree at most max_weight."""
    if not coords:
        yield ()
        return
    head, tail = coords[0], coords[1:]
    for e in range(max_weight + 1):
        for rest in _monomials(tail, max_weight - e):
            yield (e,) + rest


def _invariant(a: DiagonalAction, coords, mono, dx_indices) -> bool:
    """Total character of x^mono wedge dx's trivial for every generator?"""
    for j, d in enumerate(a.group_orders):
        g = tuple(1 if t == j else 0 for t in range(len(a.group_orders)))
        total = Fraction(0)
        for i, e in zip(coords, mono):
            total += e * a.character(g, i)
        for i in dx_indices:
            total += a.character(g, i)
        if total % 1 != 0:
            return False
    return True
