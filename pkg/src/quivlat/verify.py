"""Randomized self-check suites behind the command line's verify verb.

Each suite runs `size` independent cases from a seeded generator and
reports pass/fail counts with the first counterexample, so failures are
data rather than exceptions.  All suites are deterministic for a fixed
seed and size.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import Inconclusive, QuivlatError
from .homology import check_base_change, hom_ext, is_exceptional, is_rigid, rigid_hom_ext_ranks
from .mutation import ExcSequence, braid_act, left_mutate, orbit_search, right_mutate, standard_sequence
from .quiver import (
    Quiver,
    Rep,
    base_change,
    direct_sum_many,
    euler_form,
    is_isomorphic_rigid,
    tensor_free,
)
from .rings import ExactMatrix, Feps, GF, QQ, RingSpec, ZZ, Zmod, canonical_hom, invert
from .structure import _schur_orbit, decompose_rigid, exceptional_lattice, generic_dims

A2 = Quiver(2, ((1, 2),))
A3 = Quiver(3, ((1, 2), (2, 3)))
A4 = Quiver(4, ((1, 2), (2, 3), (3, 4)))
KRONECKER = Quiver(2, ((1, 2), (1, 2)))
LOOP = Quiver(1, ((1, 1),))

SUITES = ("euler", "basechange", "braid", "theoremA", "theoremB", "theoremC")


def _entry_pool(ring: RingSpec):
    if ring.is_finite:
        return list(ring.elements())
    if ring.kind == "Q":
        return [Fraction(v) for v in (-2, -1, 0, 1, 2)]
    return [-2, -1, 0, 1, 2]


def random_rep(ring: RingSpec, quiver: Quiver, dims, rng: random.Random) -> Rep:
    pool = _entry_pool(ring)
    dims = tuple(dims)
    mats = []
    for a in range(quiver.arrow_count):
        r, c = dims[quiver.head(a)], dims[quiver.tail(a)]
        mats.append(ExactMatrix(ring, r, c, tuple(
            tuple(rng.choice(pool) for _ in range(c)) for _ in range(r))))
    return Rep(ring, quiver, dims, tuple(mats))


def random_unimodular(n: int, rng: random.Random, shears: int = 4) -> ExactMatrix:
    """Product of integer shear operations; determinant is exactly 1."""
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(shears * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.choice((-1, 1))
        for k in range(n):
            m[i][k] += c * m[j][k]
    return ExactMatrix(ZZ, n, n, tuple(tuple(r) for r in m))


def conjugate_rep(x: Rep, mats, inverses) -> Rep:
    """Change of basis at every vertex; the result is isomorphic to x."""
    q = x.quiver
    new = tuple(mats[q.head(a)].mul(x.mats[a]).mul(inverses[q.tail(a)])
                for a in range(q.arrow_count))
    return Rep(x.ring, q, x.dims, new)


def _report(name, seed, size, passes, failures, counterexample):
    return {"suite": name, "seed": seed, "size": size,
            "cases": passes + failures, "passes": passes,
            "failures": failures, "counterexample": counterexample}


def _suite_euler(seed, size):
    rng = random.Random(seed)
    quivers = (A2, A3, KRONECKER)
    rings = (GF(2), GF(3), GF(5))
    passes, failures, ce = 0, 0, None
    for k in range(size):
        q = quivers[k % len(quivers)]
        ring = rings[(k // len(quivers)) % len(rings)]
        dx = tuple(rng.randint(0, 4) for _ in range(q.vertex_count))
        dy = tuple(rng.randint(0, 4) for _ in range(q.vertex_count))
        x = random_rep(ring, q, dx, rng)
        y = random_rep(ring, q, dy, rng)
        he = hom_ext(x, y)
        if he.hom.free_rank - he.ext.free_rank == euler_form(q, dx, dy):
            passes += 1
        else:
            failures += 1
            if ce is None:
                ce = {"quiver": q.to_json(), "ring": str(ring),
                      "dimsX": list(dx), "dimsY": list(dy)}
    return _report("euler", seed, size, passes, failures, ce)


def _suite_basechange(seed, size):
    rng = random.Random(seed)
    quivers = (A2, KRONECKER, LOOP)
    homs = [canonical_hom(ZZ, t) for t in (GF(2), GF(3), Zmod(4), QQ)]
    passes, failures, ce = 0, 0, None

    def run_case(x, y, hom):
        nonlocal passes, failures, ce
        rep = check_base_change(x, y, hom)
        if rep["ok"]:
            passes += 1
        else:
            failures += 1
            if ce is None:
                ce = {"quiver": x.quiver.to_json(), "target": str(hom.target),
                      "dimsX": list(x.dims), "dimsY": list(y.dims),
                      "transported": [str(d) for d in rep["transported"].invariant_factors],
                      "direct": [str(d) for d in rep["direct"].invariant_factors]}

    # pinned witness: loop-quiver pair with Hom = 0 and Ext = Z/2
    wx = Rep.from_matrix_rows(ZZ, LOOP, (1,), [[[0]]])
    wy = Rep.from_matrix_rows(ZZ, LOOP, (1,), [[[2]]])
    for target in (GF(2), GF(3)):
        run_case(wx, wy, canonical_hom(ZZ, target))
    for k in range(size):
        q = quivers[k % len(quivers)]
        dx = tuple(rng.randint(0, 3) for _ in range(q.vertex_count))
        dy = tuple(rng.randint(0, 3) for _ in range(q.vertex_count))
        x = random_rep(ZZ, q, dx, rng)
        y = random_rep(ZZ, q, dy, rng)
        run_case(x, y, homs[k % len(homs)])
    return _report("basechange", seed, size, passes, failures, ce)


def _iso_items(a: ExcSequence, b: ExcSequence) -> bool:
    if len(a) != len(b):
        return False
    for u, v in zip(a.items, b.items):
        if u.dims != v.dims or not is_isomorphic_rigid(u, v):
            return False
    return True


def _suite_braid(seed, size):
    rng = random.Random(seed)
    quivers = (A2, A3, A4)
    passes, failures, ce = 0, 0, None
    for k in range(size):
        q = quivers[k % len(quivers)]
        seq = standard_sequence(ZZ, q)
        for _ in range(rng.randint(0, 3)):
            i = rng.randint(1, len(seq) - 1)
            seq = braid_act(seq, i, inverse=rng.choice((False, True)))
        checks = []
        i = rng.randint(1, len(seq) - 1)
        checks.append(("inverse", _iso_items(
            braid_act(braid_act(seq, i), i, inverse=True), seq)))
        checks.append(("inverse2", _iso_items(
            braid_act(braid_act(seq, i, inverse=True), i), seq)))
        if len(seq) >= 3:
            j = rng.randint(1, len(seq) - 2)
            lhs = braid_act(braid_act(braid_act(seq, j), j + 1), j)
            rhs = braid_act(braid_act(braid_act(seq, j + 1), j), j + 1)
            checks.append(("adjacent", _iso_items(lhs, rhs)))
        if len(seq) >= 4:
            lhs = braid_act(braid_act(seq, 1), 3)
            rhs = braid_act(braid_act(seq, 3), 1)
            checks.append(("commute", _iso_items(lhs, rhs)))
        bad = [name for name, ok in checks if not ok]
        if not bad:
            passes += 1
        else:
            failures += 1
            if ce is None:
                ce = {"quiver": q.to_json(), "failed": bad,
                      "sequence": [list(d) for d in seq.dims_tuple()]}
    return _report("braid", seed, size, passes, failures, ce)


def _roots_for(quiver: Quiver, bound: int = 8):
    return sorted(_schur_orbit(ZZ, quiver, bound))


def _suite_theorem_a(seed, size):
    rng = random.Random(seed)
    quivers = (A2, A3, KRONECKER)
    passes, failures, ce = 0, 0, None
    for k in range(size):
        q = quivers[k % len(quivers)]
        roots = _roots_for(q)
        alpha, beta = rng.choice(roots), rng.choice(roots)
        try:
            xa = exceptional_lattice(q, alpha, ZZ, bound=8)
            xb = exceptional_lattice(q, beta, ZZ, bound=8)
            ranks = rigid_hom_ext_ranks(xa, xb)
            gd = generic_dims(q, alpha, beta, bound=8)
            ok = (ranks == (gd.hom_rank, gd.ext_rank)
                  and gd.hom_rank - gd.ext_rank == euler_form(q, alpha, beta))
        except QuivlatError:
            ok = False
        if ok:
            passes += 1
        else:
            failures += 1
            if ce is None:
                ce = {"quiver": q.to_json(), "alpha": list(alpha),
                      "beta": list(beta)}
    return _report("theoremA", seed, size, passes, failures, ce)


def _suite_theorem_b(seed, size):
    rng = random.Random(seed)
    quivers = (A2, A3, KRONECKER)
    rings = (ZZ, Zmod(4), Zmod(6), GF(3), Feps(2, 2))
    passes, failures, ce = 0, 0, None
    for k in range(size):
        q = quivers[k % len(quivers)]
        roots = _roots_for(q)
        alpha = rng.choice(roots)
        ring = rings[k % len(rings)]
        try:
            first = exceptional_lattice(q, alpha, ring, bound=8)
            # second path: search again from a braid-shifted starting sequence
            start = standard_sequence(ZZ, q)
            for _ in range(rng.randint(1, 2)):
                start = braid_act(start, rng.randint(1, len(start) - 1),
                                  inverse=rng.choice((False, True)))
            second_z = orbit_search(start, alpha, bound=max(8, sum(alpha) + 4))
            ok = (is_exceptional(first) and second_z is not None)
            if ok:
                second = second_z if ring == ZZ else base_change(
                    second_z, canonical_hom(ZZ, ring))
                ok = is_isomorphic_rigid(first, second)
        except QuivlatError:
            ok = False
        if ok:
            passes += 1
        else:
            failures += 1
            if ce is None:
                ce = {"quiver": q.to_json(), "alpha": list(alpha),
                      "ring": str(ring)}
    return _report("theoremB", seed, size, passes, failures, ce)


def _orthogonal_multiset(q: Quiver, rng: random.Random, bound: int = 6):
    """Random ext-orthogonal roots with multiplicities, nonempty."""
    roots = _roots_for(q, bound)
    rng.shuffle(roots)
    lattices = {}
    chosen = []
    for root in roots:
        if len(chosen) == 2:
            break
        lattices.setdefault(root, exceptional_lattice(q, root, ZZ, bound=bound))
        ok = True
        for other in chosen:
            a, b = lattices[root], lattices[other]
            if not (hom_ext(a, b).ext.is_zero and hom_ext(b, a).ext.is_zero):
                ok = False
                break
        if ok:
            chosen.append(root)
    return [(root, rng.randint(1, 2), lattices[root]) for root in chosen]


def _bounded_conjugate(x: Rep, rng: random.Random, limit: int = 10) -> Rep:
    for shears in (3, 2, 1, 0):
        mats = [random_unimodular(d, rng, shears) for d in x.dims]
        invs = [invert(m) for m in mats]
        out = conjugate_rep(x, mats, invs)
        worst = max((abs(v) for m in out.mats for row in m.entries for v in row),
                    default=0)
        if worst <= limit:
            return out
    return x


def _suite_theorem_c(seed, size):
    rng = random.Random(seed)
    quivers = (A2, A3, KRONECKER)
    passes, failures, ce = 0, 0, None
    for k in range(size):
        q = quivers[k % len(quivers)]
        planted = _orthogonal_multiset(q, rng)
        if not planted:
            continue
        x = direct_sum_many([tensor_free(lat, m) for _, m, lat in planted])
        x = _bounded_conjugate(x, rng)
        want = sorted((tuple(root), m) for root, m, _ in planted)
        try:
            results = [decompose_rigid(x, aux_prime=p) for p in (2, 3)]
            got = [sorted((tuple(r.dims), m) for r, m in d.summands)
                   for d in results]
            ok = all(g == want for g in got)
            ok = ok and all(d.certificate.is_isomorphism() for d in results)
        except QuivlatError:
            ok = False
        if ok:
            passes += 1
        else:
            failures += 1
            if ce is None:
                ce = {"quiver": q.to_json(), "planted": [
                    {"dims": list(r), "multiplicity": m} for r, m, _ in planted]}
    return _report("theoremC", seed, size, passes, failures, ce)


_RUNNERS = {
    "euler": _suite_euler,
    "basechange": _suite_basechange,
    "braid": _suite_braid,
    "theoremA": _suite_theorem_a,
    "theoremB": _suite_theorem_b,
    "theoremC": _suite_theorem_c,
}


def run_suite(name: str, seed: int = 0, size: int = 20) -> dict:
    """Run one named suite; unknown names raise ParseError."""
    if name not in _RUNNERS:
        from .errors import ParseError
        raise ParseError("unknown suite %r; choose from %s" % (
            name, ", ".join(SUITES)))
    return _RUNNERS[name](seed, size)
