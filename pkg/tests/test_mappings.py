"""
Code-to-bin mappings, checked against an independent brute-force enumerator.
"""
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from openlbp.core.exceptions import InvalidParameterError
from openlbp.schemas.descriptor import MappingKind
from openlbp.services.mappings import (
    build_code_mapping,
    map_codes,
    min_rotation,
    necklaces,
    rotate_bits,
    transitions,
    uniform_codes,
)


def bits_of(code: int, P: int) -> str:
    return format(code, f"0{P}b")


def brute_transitions(code: int, P: int) -> int:
    text = bits_of(code, P)
    return sum(1 for i in range(P) if text[i] != text[(i + 1) % P])


def brute_orbit_min(code: int, P: int) -> int:
    text = bits_of(code, P)
    return min(int(text[i:] + text[:i], 2) for i in range(P))


def brute_uniform(P: int) -> list:
    return [c for c in range(1 << P) if brute_transitions(c, P) <= 2]


def brute_orbits(P: int) -> list:
    return sorted({brute_orbit_min(c, P) for c in range(1 << P)})


class TestEnumerations:
    def test_uniform_count_p8(self):
        assert len(brute_uniform(8)) == 58
        assert uniform_codes(8).tolist() == brute_uniform(8)

    @pytest.mark.parametrize("kind, bins", [("full", 256), ("u2", 59), ("ri", 36), ("riu2", 10)])
    def test_bin_counts_p8(self, kind, bins):
        mapping = build_code_mapping(kind, 8)
        assert mapping.bin_count == bins
        assert sorted(set(mapping.table.tolist())) == list(range(bins))

    def test_full_is_identity(self):
        assert build_code_mapping(MappingKind.FULL, 8).table.tolist() == list(range(256))

    def test_full_p16_length(self):
        assert build_code_mapping(MappingKind.FULL, 16).bin_count == 65536

    @pytest.mark.parametrize("P", range(4, 15))
    def test_necklaces_match_brute_force(self, P):
        assert necklaces(P).tolist() == brute_orbits(P)

    @pytest.mark.parametrize("P", [4, 6, 8, 12])
    def test_u2_bins_follow_code_order(self, P):
        table = build_code_mapping(MappingKind.U2, P).table
        uniform = brute_uniform(P)
        for index, code in enumerate(uniform):
            assert table[code] == index
        uniform_set = set(uniform)
        others = [c for c in range(1 << P) if c not in uniform_set]
        assert all(table[c] == len(uniform) for c in others)
        assert len(uniform) == P * (P - 1) + 2

    def test_riu2_bins(self):
        table = build_code_mapping(MappingKind.RIU2, 8).table
        for code in range(256):
            expected = bin(code).count("1") if brute_transitions(code, 8) <= 2 else 9
            assert table[code] == expected


class TestRotation:
    def test_ri_invariant_under_rotation(self):
        table = build_code_mapping(MappingKind.RI, 8).table
        for code in range(256):
            for k in range(8):
                assert table[rotate_bits(code, k, 8)] == table[code]

    def test_ri_bins_follow_sorted_minima(self):
        table = build_code_mapping(MappingKind.RI, 8).table
        orbits = brute_orbits(8)
        for code in range(256):
            assert orbits[table[code]] == brute_orbit_min(code, 8)

    @given(st.integers(0, 255), st.integers(0, 16))
    def test_rotation_preserves_transitions(self, code, k):
        assert transitions(rotate_bits(code, k, 8), 8) == brute_transitions(code, 8)

    def test_array_helpers_match_scalars(self):
        codes = np.arange(256)
        assert min_rotation(codes, 8).tolist() == [brute_orbit_min(c, 8) for c in range(256)]
        assert transitions(codes, 8).tolist() == [brute_transitions(c, 8) for c in range(256)]

    def test_riu2_partition_is_u2_then_orbit(self):
        riu2 = build_code_mapping(MappingKind.RIU2, 8).table
        composed = [
            brute_orbit_min(c, 8) if brute_transitions(c, 8) <= 2 else -1 for c in range(256)
        ]
        for a in range(256):
            for b in range(256):
                assert (riu2[a] == riu2[b]) == (composed[a] == composed[b])


class TestLargeP:
    @pytest.mark.parametrize("kind", [MappingKind.U2, MappingKind.RIU2, MappingKind.RI])
    def test_on_the_fly_matches_brute_force(self, kind):
        P = 18
        mapping = build_code_mapping(kind, P)
        assert mapping.table is None
        codes = np.random.default_rng(3).integers(0, 1 << P, 200)
        bins = map_codes(mapping, codes)
        if kind == MappingKind.RI:
            orbits = necklaces(P)
            assert all(orbits[b] == brute_orbit_min(int(c), P) for b, c in zip(bins, codes))
        elif kind == MappingKind.RIU2:
            expected = [
                bin(int(c)).count("1") if brute_transitions(int(c), P) <= 2 else P + 1 for c in codes
            ]
            assert bins.tolist() == expected
        else:
            uniform = uniform_codes(P).tolist()
            expected = [
                uniform.index(int(c)) if brute_transitions(int(c), P) <= 2 else len(uniform)
                for c in codes
            ]
            assert bins.tolist() == expected
        assert bins.max() < mapping.bin_count

    def test_uniform_codes_map_below_shared_bin(self):
        mapping = build_code_mapping(MappingKind.U2, 20)
        uniform = uniform_codes(20)
        assert map_codes(mapping, uniform).tolist() == list(range(uniform.size))
        assert mapping.bin_count == 20 * 19 + 3

    def test_full_above_sixteen_rejected(self):
        with pytest.raises(InvalidParameterError) as info:
            build_code_mapping(MappingKind.FULL, 17)
        assert info.value.code == "unsupported-P"

    @pytest.mark.parametrize("P", [3, 25])
    def test_p_out_of_range(self, P):
        with pytest.raises(InvalidParameterError) as info:
            build_code_mapping(MappingKind.U2, P)
        assert info.value.code == "unsupported-P"
