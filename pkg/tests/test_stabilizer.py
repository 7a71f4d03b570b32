import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from znlgt.circuits import phase_flip_code
from znlgt.gauss_code import LatticeSpec, build_code
from znlgt.stabilizer import (
    CodeError,
    EnumerationLimit,
    NotInNormalizer,
    StabilizerCode,
    decompose_normalizer,
    distance,
    in_normalizer,
    in_stabilizer_span,
    new_code,
    recompose,
    symplectic_rank,
    syndrome,
)
from znlgt.zn_algebra import GenPauli, mul, pauli_pow


def Zq(N, n, q, k=1):
    return GenPauli.single(N, n, q, z=k)


def test_phase_flip_code_valid():
    code = phase_flip_code(3)
    assert (code.n, code.k, code.n_generators) == (3, 1, 2)


def test_anticommuting_generators_rejected():
    x1 = GenPauli.single(3, 1, 0, x=1)
    z1 = GenPauli.single(3, 1, 0, z=1)
    with pytest.raises(CodeError, match="generators 0 and 1 do not commute"):
        new_code(3, 1, [x1, z1], [], [])


def test_duplicate_generator_rejected():
    g = GenPauli(3, 0, (1, 2, 0), (0, 0, 0))
    with pytest.raises(CodeError, match="dependent"):
        new_code(3, 3, [g, g], [], [])


def test_wrong_logical_pairing_rejected():
    code = phase_flip_code(3)
    with pytest.raises(CodeError, match="logical pair"):
        new_code(3, 3, code.generators, code.logical_x, [pauli_pow(code.logical_z[0], 2)])


def test_symplectic_rank_examples():
    code = build_code(LatticeSpec(1, (4,), "periodic", 3))
    assert symplectic_rank(code.generators) == 4
    p = GenPauli(3, 0, (1, 2), (0, 1))
    assert symplectic_rank([p, p**2]) == 1
    assert symplectic_rank([]) == 0


def test_table_ii_syndromes():
    code = phase_flip_code(3)
    assert list(syndrome(code, Zq(3, 3, 0))) == [2, 0]
    assert list(syndrome(code, Zq(3, 3, 1))) == [1, 2]
    assert list(syndrome(code, Zq(3, 3, 2, 2))) == [0, 2]
    assert list(syndrome(code, GenPauli.identity(3, 3))) == [0, 0]


def test_normalizer_membership():
    code = phase_flip_code(3)
    assert in_normalizer(code, code.logical_z[0])
    assert not in_normalizer(code, Zq(3, 3, 0))
    assert all(in_normalizer(code, g) for g in code.generators)


def test_decompose_site_z_on_gauss_code():
    lat = LatticeSpec(1, (4,), "periodic", 3)
    code = build_code(lat)
    for l in range(4):
        dec = decompose_normalizer(code, Zq(3, 8, lat.site_qudit((l,))))
        assert list(dec.stab_exps) == [int(i == l) for i in range(4)]
        want = np.zeros(4, dtype=int)
        want[l] += 1
        want[(l - 1) % 4] -= 1
        assert list(dec.lz_exps) == list(want % 3)
        assert not dec.lx_exps.any()
        assert dec.phase == l % 2


def test_decompose_identity_and_errors():
    code = phase_flip_code(5)
    dec = decompose_normalizer(code, GenPauli.identity(5, 3))
    assert not dec.stab_exps.any() and not dec.lx_exps.any() and not dec.lz_exps.any() and dec.phase == 0
    with pytest.raises(NotInNormalizer, match="not decomposable"):
        decompose_normalizer(code, Zq(5, 3, 0))


def test_generators_decompose_to_themselves():
    code = build_code(LatticeSpec(2, (2, 2), "periodic", 3))
    for i, g in enumerate(code.generators):
        dec = decompose_normalizer(code, g)
        assert list(dec.stab_exps) == [int(j == i) for j in range(4)]
        assert not dec.lx_exps.any() and not dec.lz_exps.any()
        assert in_stabilizer_span(code, g.symplectic())


def test_distances_gauss_code():
    for N in (3, 5):
        code = build_code(LatticeSpec(1, (4,), "periodic", N))
        assert distance(code, "z", 2) == 1
        assert distance(code, "x", 2) is None
        assert distance(code, "x", 3) == 3


def test_distances_phase_flip():
    code = phase_flip_code(3)
    assert distance(code, "z", 3) == 3
    assert distance(code, "x", 3) == 1


def test_distance_budget():
    code = build_code(LatticeSpec(1, (4,), "periodic", 3))
    with pytest.raises(EnumerationLimit, match="budget"):
        distance(code, "any", 8, budget=1000)
    with pytest.raises(ValueError):
        distance(code, "y", 2)


def test_distance_matches_full_enumeration():
    # every pure-X operator on the phase-flip code, by increasing weight
    code = phase_flip_code(3)
    best = None
    for xs in itertools.product(range(3), repeat=3):
        p = GenPauli(3, 0, xs, (0, 0, 0))
        if p.weight() and in_normalizer(code, p) and not in_stabilizer_span(code, p.symplectic()):
            best = p.weight() if best is None else min(best, p.weight())
    assert distance(code, "x", 3) == best


def test_json_round_trip():
    code = build_code(LatticeSpec(1, (2,), "periodic", 5))
    again = StabilizerCode.from_json(code.to_json())
    assert again == code
    assert again.meta == code.meta
    assert code.to_json()["k"] == 2


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 5]), st.data())
def test_round_trip_random_normalizer_element(N, data):
    code = build_code(LatticeSpec(1, (2,), "periodic", N))
    exps = st.lists(st.integers(0, N - 1), min_size=2, max_size=2)
    s, r, t = data.draw(exps), data.draw(exps), data.draw(exps)
    phase = data.draw(st.integers(0, N - 1))
    p = recompose(code, s, r, t, phase)
    dec = decompose_normalizer(code, p)
    assert recompose(code, dec.stab_exps, dec.lx_exps, dec.lz_exps, dec.phase) == p
    assert list(dec.stab_exps) == s and list(dec.lx_exps) == r and list(dec.lz_exps) == t


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 5]), st.data())
def test_syndrome_is_additive(N, data):
    code = phase_flip_code(N)
    vec = st.lists(st.integers(0, N - 1), min_size=3, max_size=3)
    a = GenPauli(N, 0, tuple(data.draw(vec)), tuple(data.draw(vec)))
    b = GenPauli(N, 0, tuple(data.draw(vec)), tuple(data.draw(vec)))
    assert np.array_equal(syndrome(code, mul(a, b)), (syndrome(code, a) + syndrome(code, b)) % N)
