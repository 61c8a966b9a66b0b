"""Seeded randomized cross-checks of the polyhedral kernel.

Each implementation path is compared against an oracle that shares no code
with it: membership against Caratheodory enumeration, triangulations
against pointwise coverage, Hilbert bases against box enumeration, monoid
membership and saturation against reachability closures.
"""

import itertools
import random

from logfan._geometry import ConeGeometry, triangulate
from logfan.errors import NotStronglyConvex
from logfan.lattice import FgAbelianGroup, hnf_rows, in_lattice, primitive
from logfan.monoid import FineMonoid, contains, hilbert_basis, saturate

from test_monoid import brute_hilbert, in_cone_bruteforce


def test_membership_against_caratheodory():
    rng = random.Random(42)
    for _ in range(120):
        dim = rng.randint(1, 3)
        rays = [tuple(rng.randint(-3, 3) for _ in range(dim))
                for _ in range(rng.randint(1, 4))]
        rays = [r for r in rays if any(r)]
        if not rays:
            continue
        g = ConeGeometry.of(rays, dim)
        for _ in range(6):
            x = tuple(rng.randint(-4, 4) for _ in range(dim))
            assert g.contains(x) == in_cone_bruteforce(x, rays), (rays, x)


def test_triangulation_covers_exactly():
    rng = random.Random(7)
    for _ in range(80):
        dim = rng.randint(2, 3)
        rays = [primitive(tuple(rng.randint(-2, 2) for _ in range(dim)))
                for _ in range(rng.randint(2, 4))]
        rays = [r for r in rays if any(r)]
        if not rays:
            continue
        g = ConeGeometry.of(rays, dim)
        if not g.is_sharp:
            continue
        parts = [ConeGeometry.of([g.rays[i] for i in s], dim)
                 for s in triangulate(list(g.rays), dim)]
        for _ in range(8):
            x = tuple(rng.randint(-3, 3) for _ in range(dim))
            assert g.contains(x) == any(p.contains(x) for p in parts), (g.rays, x)


def test_random_hilbert_bases_against_bruteforce():
    rng = random.Random(3)
    done = 0
    while done < 40:
        rays = [tuple(rng.randint(-3, 3) for _ in range(2)) for _ in range(2)]
        rays = [r for r in rays if any(r)]
        if not rays:
            continue
        if not ConeGeometry.of(rays, 2).is_sharp:
            continue
        try:
            hb = hilbert_basis(rays, 2)
        except NotStronglyConvex:
            raise AssertionError(f"sharp cone rejected: {rays}")
        if all(abs(c) <= 7 for h in hb for c in h):
            assert sorted(hb) == brute_hilbert(rays, 2, box=7), rays
            done += 1


def _brute_closure(P, coord_bound, steps):
    G = P.ambient
    reach = {G.zero()}
    frontier = [G.zero()]
    for _ in range(steps):
        nxt = []
        for v in frontier:
            for g in P.generators:
                w = G.add(v, g)
                if all(abs(c) <= coord_bound for c in G.free_part(w)) and w not in reach:
                    reach.add(w)
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return reach


def test_membership_and_saturation_against_closure():
    rng = random.Random(99)
    for _ in range(60):
        rank = rng.randint(1, 2)
        torsion = rng.choice([(), (2,), (3,), (2, 4)])
        G = FgAbelianGroup(rank, torsion)
        gens = [tuple(rng.randint(-2, 2) for _ in range(rank))
                + tuple(rng.randint(0, d - 1) for d in torsion)
                for _ in range(rng.randint(1, 4))]
        P = FineMonoid.make(G, gens)
        if not P.generators:
            continue
        bound = 4
        reach = _brute_closure(P, 2 * bound, 30)
        for v in itertools.product(range(-bound, bound + 1), repeat=rank):
            for t in itertools.product(*(range(d) for d in torsion)):
                x = v + t
                assert contains(P, x) == (x in reach), (P.generators, G, x)
        S = saturate(P).saturated
        gp = P.gp_lattice
        for v in itertools.product(range(-2, 3), repeat=rank):
            for t in itertools.product(*(range(d) for d in torsion)):
                x = v + t
                want = in_lattice(x, gp) and any(
                    contains(P, tuple(n * c for c in x)) for n in range(1, 13))
                assert contains(S, x) == want, (P.generators, G, x)
