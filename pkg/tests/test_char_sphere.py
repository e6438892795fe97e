import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from rinfty import char_sphere as cs
from rinfty.char_sphere import (MonomialMatrix, NotRealizable, OrbitSumError, RationalCharacter,
                                SpherePoint, SpherePointSet)

chi = RationalCharacter.from_terms


# -- independent solver --------------------------------------------------------------------

def sympy_membership(n, c):
    """First A then B (lexicographic) whose span contains c, by solving directly."""
    vec = sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in c.coords])
    cands = [("A", (p, q), [cs.RationalCharacter.basis(n, p, q), cs.RationalCharacter.basis(n, q, p)])
             for p, q in itertools.combinations(range(1, n + 1), 2)]
    for i, j, k in itertools.combinations(range(1, n + 1), 3):
        e = lambda a, b: cs.RationalCharacter.basis(n, a, b)
        cands.append(("B", (i, j, k), [e(i, j) - e(k, j), e(j, k) - e(i, k), e(k, i) - e(j, i)]))
    for kind, idx, basis in cands:
        A = sympy.Matrix([[int(x) for x in b.coords] for b in basis]).T
        syms = sympy.symbols(f"a0:{len(basis)}")
        sol = sympy.linsolve((A, vec), *syms)
        if sol != sympy.EmptySet:
            return kind, idx
    return "outside", ()


def random_character(rng, n, support=4, scale=3):
    ps = cs.pairs(n)
    terms = {p: rng.randint(-scale, scale) for p in rng.sample(ps, rng.randint(1, support))}
    c = chi(n, terms)
    return c if not c.is_zero() else cs.RationalCharacter.basis(n, 1, 2)


# -- characters and membership -------------------------------------------------------------

def test_json_round_trip():
    c = chi(3, {(1, 2): Fraction(1, 3), (3, 1): -2})
    data = c.to_json()
    assert data == {"n": 3, "coords": {"1,2": "1/3", "3,1": "-2"}}
    assert RationalCharacter.from_json(data) == c


def test_membership_examples():
    assert str(cs.sigma_c_membership(3, chi(3, {(1, 2): 1}))) == "InA(1,2)"
    assert str(cs.sigma_c_membership(4, chi(4, {(1, 2): 1, (3, 2): -1}))) == "InB(1,2,3)"
    assert str(cs.sigma_c_membership(3, chi(3, {(1, 2): 1, (2, 3): 1}))) == "Outside"
    assert str(cs.sigma_c_membership(4, chi(4, {(4, 2): 5, (2, 4): -1}))) == "InA(2,4)"


def test_membership_rejects_zero_and_small_n():
    with pytest.raises(ValueError):
        cs.sigma_c_membership(3, RationalCharacter.zero(3))
    with pytest.raises(ValueError):
        cs.sigma_c_membership(2, chi(2, {(1, 2): 1}))


def test_subspace_ranks():
    for p, q in itertools.combinations(range(1, 5), 2):
        assert cs.subspace_A(4, p, q).rank() == 2
    for i, j, k in itertools.combinations(range(1, 5), 3):
        assert cs.subspace_B(4, i, j, k).rank() == 3
    # relabelings of the same triple span the same space
    b1, b2 = cs.subspace_B(4, 1, 2, 3), cs.subspace_B(4, 2, 3, 1)
    assert all(b1.contains(v) for v in b2.vectors) and all(b2.contains(v) for v in b1.vectors)


def test_membership_matches_direct_solver():
    rng = random.Random(0)
    for n in (3, 4):
        for _ in range(150):
            c = random_character(rng, n, support=rng.choice((2, 3, 6)))
            m = cs.sigma_c_membership(n, c)
            assert (m.kind, m.indices) == sympy_membership(n, c)


def test_membership_invariant_under_relabeling():
    rng = random.Random(1)
    for _ in range(200):
        n = rng.choice((3, 4))
        pi = tuple(rng.sample(range(1, n + 1), n))
        c = random_character(rng, n)
        before = cs.sigma_c_membership(n, c)
        after = cs.sigma_c_membership(n, cs.pi_star(pi)(c))
        assert after == cs.pullback_membership(before, pi)


def test_sign_action_preserves_A_blocks():
    rng = random.Random(2)
    for _ in range(200):
        t = tuple(rng.choice((1, -1)) for _ in range(4))
        p, q = rng.sample(range(1, 5), 2)
        c = chi(4, {(p, q): rng.randint(1, 4), (q, p): rng.randint(-4, 4)})
        assert cs.sigma_c_membership(4, cs.t_star(t)(c)) == cs.sigma_c_membership(4, c)


def test_sign_action_with_product_signs_moves_B_classes():
    # with signs t_i t_j the B-generator chi12 - chi32 leaves the union
    c = chi(3, {(1, 2): 1, (3, 2): -1})
    assert str(cs.sigma_c_membership(3, c)) == "InB(1,2,3)"
    assert str(cs.sigma_c_membership(3, cs.t_star((-1, 1, 1))(c))) == "Outside"


# -- monomial matrices ---------------------------------------------------------------------

def test_dp_examples():
    assert cs.dp_decompose([[1, 0], [0, 1]]) == MonomialMatrix.identity(2)
    pi = (2, 3, 1)
    M = cs.pi_star(pi)
    assert cs.dp_decompose(M.matrix()) == M and set(M.signs) == {1}
    t = (1, -1, -1)
    T = cs.t_star(t)
    assert T.perm == tuple(range(6))
    for (i, j), s in zip(cs.pairs(3), T.signs):
        assert s == t[i - 1] * t[j - 1]
    with pytest.raises(NotRealizable):
        cs.dp_decompose([[1, 1], [0, 1]])
    with pytest.raises(NotRealizable):
        cs.dp_decompose([[2, 0], [0, 1]])


def test_matrix_convention_is_D_times_P():
    rng = random.Random(3)
    M = cs.random_monomial(rng, 3)
    D = sympy.diag(*M.diagonal())
    Pm = sympy.zeros(6, 6)
    for a in range(6):
        Pm[M.perm[a], a] = 1
    assert D * Pm == sympy.Matrix(M.matrix())
    v = [rng.randint(-3, 3) for _ in range(6)]
    assert list(sympy.Matrix(M.matrix()) * sympy.Matrix(v)) == list(M.apply(v))


def test_eta_examples():
    sigma, eps = cs.eta_extraction(cs.pi_star((3, 1, 2)), 3)
    assert sigma == (3, 1, 2) and set(eps.values()) == {1}
    sigma, eps = cs.eta_extraction(cs.t_star((-1, 1, 1)), 3)
    assert sigma == (1, 2, 3) and eps[(1, 2)] == -1 and eps[(2, 3)] == 1
    idx = cs.pair_index(3)
    perm = list(range(6))
    # (1,2) -> (2,1) but (2,1) -> (1,3)
    perm[idx[(1, 2)]], perm[idx[(2, 1)]], perm[idx[(1, 3)]] = idx[(2, 1)], idx[(1, 3)], idx[(1, 2)]
    with pytest.raises(NotRealizable):
        cs.eta_extraction(MonomialMatrix(tuple(perm), (1,) * 6), 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([3, 4, 5]))
def test_eta_is_multiplicative(seed, n):
    rng = random.Random(seed)
    A, B = cs.random_monomial(rng, n), cs.random_monomial(rng, n)
    sa, _ = cs.eta_extraction(A, n)
    sb, _ = cs.eta_extraction(B, n)
    sab, _ = cs.eta_extraction(A * B, n)
    assert sab == tuple(sa[sb[i] - 1] for i in range(n))
    assert A * A.inverse() == MonomialMatrix.identity(A.size)


def test_monomial_json_forms():
    M = cs.random_monomial(random.Random(4), 3)
    for data in (M.to_json(3), {"n": 3, "matrix": M.matrix()}, M.to_json()):
        back, _ = MonomialMatrix.from_json(data)
        assert back == M


# -- eigenvectors ---------------------------------------------------------------------------

def test_toy_cycle_eigenvectors():
    found, none = cs.cycle_eigenvectors(MonomialMatrix((1, 0), (1, 1)))
    assert [(p.vector, p.eigenvalue) for p in found] == [((1, 1), 1), ((1, -1), -1)]
    # D = diag(1, -1), P = (1 2): x^2 = -1 on the cycle, no real eigenvector
    T = cs.dp_decompose([[0, 1], [-1, 0]])
    found, none = cs.cycle_eigenvectors(T)
    assert found == [] and none == [(0, 1)]
    _, v, eps = cs.orbit_sum(T, 0)
    assert eps == -1 and T.apply(v) != tuple(-x for x in v)


def test_eigenvectors_verified_against_sympy():
    rng = random.Random(5)
    for _ in range(100):
        perm = list(range(6))
        rng.shuffle(perm)
        T = MonomialMatrix(tuple(perm), tuple(rng.choice((1, -1)) for _ in range(6)))
        found, _ = cs.cycle_eigenvectors(T)
        M = sympy.Matrix(T.matrix())
        for p in found:
            v = sympy.Matrix(p.vector)
            assert M * v == p.eigenvalue * v
        for lam in (1, -1):
            vs = [p.vector for p in found if p.eigenvalue == lam]
            geo = len((M - lam * sympy.eye(6)).nullspace())
            assert len(vs) == geo
        if found:
            assert sympy.Matrix([p.vector for p in found]).rank() == len(found)


# -- u/v construction and witnesses -------------------------------------------------------

def test_build_uv_long_cycle():
    M = cs.from_signed_pairs((2, 3, 1))
    uv = cs.build_uv(M, 3)
    assert uv.case == "long cycle" and uv.eigenvalue == 1 and uv.valid
    assert uv.u == chi(3, {(1, 2): 1, (2, 3): 1, (3, 1): 1})
    assert M(uv.u) == uv.u


def test_build_uv_transposition_with_fixed_point():
    rng = random.Random(6)
    M = cs.random_monomial(rng, 3, (3, 2, 1))
    _, eps = cs.eta_extraction(M, 3)
    uv = cs.build_uv(M, 3)
    assert uv.u == chi(3, {(1, 2): 1, (3, 2): eps[(1, 2)]})
    assert uv.v == chi(3, {(2, 1): 1, (2, 3): eps[(2, 1)]})
    assert uv.relabeling == {1: 1, 2: 2, 3: 3}


def test_build_uv_two_transpositions():
    M = cs.random_monomial(random.Random(7), 4, (3, 4, 1, 2))
    _, eps = cs.eta_extraction(M, 4)
    uv = cs.build_uv(M, 4)
    assert uv.u == chi(4, {(1, 2): 1, (3, 4): eps[(1, 2)]})
    assert uv.v == chi(4, {(2, 1): 1, (4, 3): eps[(2, 1)]})


def test_build_uv_flags_are_honest():
    rng = random.Random(8)
    for _ in range(300):
        n = rng.choice((3, 4))
        M = cs.random_monomial(rng, n)
        if cs.eta_extraction(M, n)[0] == tuple(range(1, n + 1)):
            with pytest.raises(ValueError):
                cs.build_uv(M, n)
            continue
        uv = cs.build_uv(M, n)
        assert uv.u_is_eigen == (M(uv.u) == uv.u.scale(uv.eigenvalue))
        assert uv.v_is_eigen == (M(uv.v) == uv.v.scale(uv.eigenvalue))
        # orbit sums only ever give eigenvalue +1
        if uv.valid:
            assert uv.eigenvalue == 1


def test_commutator_index_examples():
    b = chi(3, {(1, 2): 1})
    c = chi(3, {(2, 1): 1})
    assert cs.commutator_index(b, c) == 1
    assert cs.commutator_index(c, b) == -1
    b2 = chi(3, {(1, 2): 1, (1, 3): 4, (3, 2): -2})
    c2 = chi(3, {(2, 1): 1, (2, 3): 7})
    assert cs.commutator_index(b2, c2) == 1
    assert cs.commutator_index([0, 3, 0, 0, 1, 0], [0, 1, 0, 0, 2, 0], pair=(1, 3)) == 5


def test_witness_for_identity():
    w = cs.gn_witness(MonomialMatrix.identity(6), 3)
    assert isinstance(w, cs.InvariantCharacter)
    assert w.character == chi(3, {(1, 2): 1})


def test_witness_sign_pattern_with_invariant_character():
    w = cs.gn_witness(cs.t_star((-1, -1, 1, 1)), 4)
    assert isinstance(w, cs.InvariantCharacter) and w.character[(1, 2)] != 0


def test_witness_for_transposition_with_all_products_negative():
    # every pair cycle of sigma = (1 3) has sign product -1, so M^2 = -I and
    # neither eigenvalue is real; the witness is an invariant plane
    idx = cs.pair_index(3)
    signs = [1] * 6
    for a, b in ((1, 2), (2, 1), (1, 3)):
        signs[idx[(a, b)]] = -1
    M = cs.from_signed_pairs((3, 2, 1), signs)
    assert M * M == MonomialMatrix(tuple(range(6)), (-1,) * 6)
    assert isinstance(cs.gn_witness(M, 3, plane_fallback=False), cs.NoWitness)
    w = cs.gn_witness(M, 3)
    assert isinstance(w, cs.CommutatorWitness) and w.route == "plane"
    assert abs(w.index) >= 1 and cs.check_witness(M, w)


def test_negated_witness():
    # fixed pair (1,2) with sign -1 and the 3-cycle through (2,1) with product -1
    found = None
    rng = random.Random(9)
    for _ in range(400):
        M = cs.random_monomial(rng, 3)
        w = cs.gn_witness(M, 3)
        if isinstance(w, cs.CommutatorWitness) and w.route == "negated":
            found = (M, w)
            break
    assert found is not None
    M, w = found
    assert M(w.u) == -w.u and M(w.v) == -w.v and w.index == 1


def test_witnesses_check_out():
    rng = random.Random(10)
    for _ in range(300):
        n = rng.choice((3, 4))
        M = cs.random_monomial(rng, n)
        w = cs.gn_witness(M, n)
        if not isinstance(w, cs.NoWitness):
            assert cs.check_witness(M, w)


def test_no_witness_only_for_eighth_roots():
    # the only n=4 failures: sigma a 4-cycle with every pair-cycle product -1
    rng = random.Random(11)
    misses = 0
    for sigma in itertools.permutations(range(1, 5)):
        for _ in range(100):
            M = cs.random_monomial(rng, 4, sigma)
            if isinstance(cs.gn_witness(M, 4), cs.NoWitness):
                misses += 1
                assert all(len(c) == 4 and M.cycle_sign(c) == -1 for c in M.cycles())
                x = sympy.Symbol("x")
                assert sympy.factor(sympy.Matrix(M.matrix()).charpoly(x).as_expr()) == (x**4 + 1) ** 3
    assert misses > 0


# -- sphere point sets -------------------------------------------------------------------------

def _factor(name, labels, pts, cert=None, tag="D_Q"):
    k = len(labels)
    return SpherePointSet(tuple(labels), {name: tuple(range(k))},
                          tuple(SpherePoint(tuple(p), name, tag) for p in pts),
                          {name: tuple(cert)} if cert else {})


def test_points_are_normalized():
    s = _factor("X", "ab", [(2, 4)], (1, 1))
    assert s.points[0].coords == (1, 2)
    with pytest.raises(ValueError):
        _factor("X", "ab", [(1, 1)], tag="bogus")


def test_union():
    x = _factor("X", "ab", [(1, 0), (0, 1)], (1, 1))
    y = _factor("Y", "cd", [(1, 1)], (1, 0), tag="L_Q")
    z = _factor("Z", "e", [(1,)], (1,), tag="L")
    assert cs.product_point_set([x]) == x
    u = cs.product_point_set([x, y])
    assert len(u.points) == 3 and u.factors == {"X": (0, 1), "Y": (2, 3)}
    assert [p.tag for p in u.points] == ["D_Q", "D_Q", "L_Q"]
    assert u.points[2].coords == (0, 0, 1, 1)
    left = cs.product_point_set([cs.product_point_set([x, y]), z])
    right = cs.product_point_set([x, cs.product_point_set([y, z])])
    assert left == right
    with pytest.raises(ValueError):
        cs.product_point_set([x, x])


def test_orbit_sum_single_fixed_point():
    s = _factor("X", "ab", [(1, 2)], (1, 0))
    assert cs.invariant_discrete_character(s, [[1, 0], [0, 1]]) == (1, 2)


def test_orbit_sum_two_point_orbit():
    s = _factor("X", "ab", [(1, 2), (2, 1)], (1, 1))
    lam = cs.invariant_discrete_character(s, [[0, 1], [1, 0]])
    assert lam == (1, 1)


def test_orbit_sum_antipodal_orbit_errors():
    s = _factor("X", "ab", [(1, 2), (-1, -2)], (1, 0))
    with pytest.raises(OrbitSumError, match="orbit sum may vanish"):
        cs.invariant_discrete_character(s, [[-1, 0], [0, -1]])


def test_orbit_sum_errors():
    empty = _factor("X", "ab", [], (1, 1))
    with pytest.raises(OrbitSumError):
        cs.invariant_discrete_character(empty, [[1, 0], [0, 1]])
    s = _factor("X", "ab", [(1, 2)], (1, 1))
    with pytest.raises(OrbitSumError, match="preserve"):
        cs.invariant_discrete_character(s, [[0, 1], [1, 0]])
    uncert = _factor("X", "ab", [(1, 2)])
    with pytest.raises(OrbitSumError, match="may vanish"):
        cs.invariant_discrete_character(uncert, [[1, 0], [0, 1]])
    scaled = _factor("X", "ab", [(1, 0)], (1, 0))
    with pytest.raises(OrbitSumError, match="scale"):
        cs.invariant_discrete_character(scaled, [[2, 0], [0, 1]])


def test_point_set_json():
    s = cs.product_point_set([_factor("X", "ab", [(1, 2)], (1, 1)), _factor("Y", "c", [(3,)], (1,))])
    assert SpherePointSet.from_json(s.to_json()) == s
