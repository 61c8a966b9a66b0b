"""Monoid layer: Hilbert bases, saturation, fs pushouts, component counts."""

import itertools
import random
from fractions import Fraction

import pytest

from logfan.errors import NotSaturated, NotStronglyConvex
from logfan.lattice import FgAbelianGroup, IntMatrix
from logfan.monoid import (FineMonoid, MonoidHom, amalgamated_sum, contains,
                           fs_pushout, hilbert_basis, hom_well_defined,
                           is_saturated, saturate, spec_component_count)

N = FineMonoid.free(1)
N2 = FineMonoid.free(2)


# ------------------------------------------------------ independent oracles

def in_cone_bruteforce(x, rays):
    """Membership by Caratheodory: nonnegative solution over some independent
    subset of the rays.  Shares no code with the double-description path."""
    rank = len(x)
    for k in range(1, min(len(rays), rank) + 1):
        for subset in itertools.combinations(rays, k):
            sol = _solve_nonneg(subset, x)
            if sol is not None:
                return True
    return all(v == 0 for v in x)


def _solve_nonneg(rays, x):
    rows = len(x)
    cols = len(rays)
    aug = [[Fraction(rays[j][i]) for j in range(cols)] + [Fraction(x[i])]
           for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        sel = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if sel is None:
            continue
        aug[r], aug[sel] = aug[sel], aug[r]
        pv = aug[r][c]
        aug[r] = [v / pv for v in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, rows):
        if aug[i][cols] != 0:
            return None
    if len(pivots) < cols:
        return None   # dependent subset; a smaller one will cover it
    sol = [aug[i][cols] for i in range(len(pivots))]
    return sol if all(v >= 0 for v in sol) else None


def brute_hilbert(rays, rank, box=5):
    pts = [p for p in itertools.product(range(-box, box + 1), repeat=rank)
           if any(p) and in_cone_bruteforce(p, rays)]
    pset = set(pts)
    out = []
    for h in pts:
        decomposable = any(
            tuple(a - b for a, b in zip(h, g)) in pset and g != h
            for g in pts)
        if not decomposable:
            out.append(h)
    return sorted(out)


# ------------------------------------------------------------- hilbert basis

def test_hilbert_basis_examples():
    assert hilbert_basis([(1, 0), (0, 1)], 2) == [(0, 1), (1, 0)]
    assert hilbert_basis([(1, 0), (1, 2)], 2) == [(1, 0), (1, 1), (1, 2)]
    assert hilbert_basis([(0, 1), (2, -1)], 2) == [(0, 1), (1, 0), (2, -1)]


def test_hilbert_basis_against_bruteforce():
    cases = [
        [(1, 0), (1, 2)],
        [(0, 1), (2, -1)],
        [(1, 0), (1, 3)],
        [(2, 1), (1, 2)],
        [(1, 0), (2, 3)],
    ]
    for rays in cases:
        assert hilbert_basis(rays, 2) == brute_hilbert(rays, 2)


def test_hilbert_basis_line_rejected():
    with pytest.raises(NotStronglyConvex):
        hilbert_basis([(1, 0), (-1, 0)], 2)
    with pytest.raises(NotStronglyConvex):
        hilbert_basis([(1, 1), (-1, 0), (0, -1)], 2)


def test_hilbert_basis_lower_dimensional_cone():
    # cone on a ray of index 2 in its span
    assert hilbert_basis([(2, 2)], 2) == [(1, 1)]


# ----------------------------------------------------------------- saturation

def closure_upto(gens, bound):
    """Brute-force membership closure of a numerical semigroup up to bound."""
    reach = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = v + g
                if w <= bound and w not in reach:
                    reach.add(w)
                    nxt.append(w)
        frontier = nxt
    return reach


def test_saturate_numerical_semigroup():
    P = FineMonoid.free(1, [(2,), (3,)])
    rep = saturate(P)
    assert rep.saturated.generators == ((1,),)
    # brute-force oracle: 1 is absent from <2,3> but 2*1 is present
    reach = closure_upto([2, 3], 20)
    assert 1 not in reach and 2 in reach
    assert not is_saturated(P)


def test_saturate_idempotent_on_N():
    rep = saturate(N)
    assert rep.saturated == N
    assert rep.idempotent
    assert rep.index_data == ()


def test_saturation_absorbs_pushout_torsion():
    mul2 = MonoidHom(N, N, IntMatrix.from_rows([[2]]))
    rep = fs_pushout(mul2, mul2)
    assert rep.saturated.ambient == FgAbelianGroup(1, (2,))
    assert rep.torsion_order == 2


def test_is_saturated_examples():
    assert is_saturated(N2)
    assert not is_saturated(FineMonoid.free(1, [(2,), (3,)]))
    # The monoid on (1,0), (1,2) is free on its generators, hence saturated
    # inside its own groupification (an index-2 sublattice of Z^2).  The
    # missing-lattice-point phenomenon needs the groupification to be all of
    # Z^2, e.g. by adding (2,1): then (1,1) is missing but 2*(1,1) is not.
    assert is_saturated(FineMonoid.free(2, [(1, 0), (1, 2)]))
    P = FineMonoid.free(2, [(1, 0), (1, 2), (2, 1)])
    assert not is_saturated(P)
    assert (1, 1) in saturate(P).index_data


def test_saturate_keeps_groupification():
    rng = random.Random(5)
    for _ in range(25):
        rank = rng.randint(1, 3)
        torsion = rng.choice([(), (2,), (3,)])
        G = FgAbelianGroup(rank, torsion)
        gens = [tuple(rng.randint(-2, 2) for _ in range(rank))
                + tuple(rng.randint(0, d - 1) for d in torsion)
                for _ in range(rng.randint(1, 4))]
        P = FineMonoid.make(G, gens)
        rep = saturate(P)
        assert rep.saturated.gp_lattice == P.gp_lattice
        assert saturate(rep.saturated).saturated == rep.saturated
        for g in P.generators:
            assert contains(rep.saturated, g)


# ---------------------------------------------------------------- membership

def test_membership_numerical():
    P = FineMonoid.free(1, [(2,), (3,)])
    reach = closure_upto([2, 3], 20)
    for v in range(21):
        assert contains(P, (v,)) == (v in reach)


def test_membership_with_units():
    P = FineMonoid.free(2, [(1, 0), (-1, 0), (0, 1)])
    assert contains(P, (-7, 3))
    assert not contains(P, (0, -1))
    assert is_saturated(P)


def test_membership_with_torsion():
    G = FgAbelianGroup(1, (2,))
    P = FineMonoid.make(G, [(1, 1)])
    assert contains(P, (2, 0))
    assert not contains(P, (1, 0))
    assert contains(P, (3, 1))


# ---------------------------------------------------------------- fs pushout

def test_pushout_coproduct_is_plane():
    zero = FineMonoid.make(FgAbelianGroup(0), [])
    inc = MonoidHom(zero, N, IntMatrix.zero(1, 0))
    rep = fs_pushout(inc, inc)
    assert rep.saturated.ambient == FgAbelianGroup(2)
    assert rep.saturated.generators == ((0, 1), (1, 0))


def test_pushout_r_lines():
    for r in (2, 3, 5):
        mul = MonoidHom(N, N, IntMatrix.from_rows([[r]]))
        rep = fs_pushout(mul, mul)
        assert rep.saturated.ambient == FgAbelianGroup(1, (r,))
        assert rep.torsion_order == r
        assert spec_component_count(rep.saturated) == r


def test_pushout_diagonal_chart():
    diag = MonoidHom(N, N2, IntMatrix.from_rows([[1], [1]]))
    ident = MonoidHom(N, N, IntMatrix.from_rows([[1]]))
    rep = fs_pushout(diag, ident)
    S = rep.saturated
    assert S.ambient == FgAbelianGroup(2)
    assert rep.torsion_order == 1
    # abstractly N^2: two generators forming a lattice basis
    assert len(S.generators) == 2
    M = IntMatrix.from_columns(S.generators, rows=2)
    from logfan.lattice import det
    assert abs(det(M)) == 1
    assert is_saturated(S)


def test_component_count_examples():
    assert spec_component_count(N2) == 1
    with pytest.raises(NotSaturated):
        spec_component_count(FineMonoid.free(1, [(2,), (3,)]))
    # unchecked variant just reads the torsion order
    assert spec_component_count(FineMonoid.free(1, [(2,), (3,)]),
                                require_saturated=False) == 1


def test_component_count_multiplicative_over_coproduct():
    zero = FineMonoid.make(FgAbelianGroup(0), [])
    G = FgAbelianGroup(1, (2,))
    P = saturate(FineMonoid.make(G, [(1, 1), (1, 0)])).saturated
    incP = MonoidHom(zero, P, IntMatrix.zero(2, 0))
    G3 = FgAbelianGroup(1, (3,))
    Q = saturate(FineMonoid.make(G3, [(1, 1), (1, 0)])).saturated
    incQ = MonoidHom(zero, Q, IntMatrix.zero(2, 0))
    rep = fs_pushout(incP, incQ)
    assert spec_component_count(rep.saturated) == \
        spec_component_count(P) * spec_component_count(Q)


def test_hom_validation():
    with pytest.raises(ValueError):
        MonoidHom(N, N, IntMatrix.from_rows([[-1]]))   # image leaves N
    G2 = FgAbelianGroup(0, (2,))
    G4 = FgAbelianGroup(0, (4,))
    M = IntMatrix.from_rows([[1]])
    # Z/2 -> Z/4 by 1 -> 1 is not well defined
    assert not hom_well_defined(G2, G4, M)
    assert hom_well_defined(G2, G4, IntMatrix.from_rows([[2]]))


def test_pushout_universal_property_small():
    """Mediating map exists and is unique for commuting cocones on N <- N -> N."""
    mul2 = MonoidHom(N, N, IntMatrix.from_rows([[2]]))
    mul3 = MonoidHom(N, N, IntMatrix.from_rows([[3]]))
    data = amalgamated_sum(mul2, mul3)
    H = data.ambient
    # cocone alpha, beta: N -> N with alpha(2 x) = beta(3 x): alpha = 3k, beta = 2k
    for k in range(3):
        alpha, beta = 3 * k, 2 * k
        # find row vectors phi with phi . legL = alpha and phi . legR = beta
        found = []
        for phi in itertools.product(range(-6, 7), repeat=H.num_coords):
            ok = True
            v = sum(p * c for p, c in zip(phi, data.leg_left.column(0)))
            w = sum(p * c for p, c in zip(phi, data.leg_right.column(0)))
            for j, d in enumerate(H.torsion_orders):
                if phi[H.free_rank + j] * d != 0:
                    ok = False
            if ok and v == alpha and w == beta:
                found.append(phi)
        assert found, f"no mediating hom for k={k}"
        # uniqueness modulo torsion relations of H: all solutions act equally
        # on the generators of H
        images = set()
        for phi in found:
            img = tuple(sum(p * c for p, c in zip(phi, col))
                        for col in [data.leg_left.column(0), data.leg_right.column(0)])
            images.add(img)
        assert len(images) == 1
