import itertools
import json

import pytest

from tactons.core import (
    DynamicTacton,
    StaticTacton,
    cycle_length_ms,
    frame_at,
    pattern_from_text,
)
from tactons.library import (
    ALL_DIRECTIONS,
    CENTER_SQUARE,
    DEFAULT_SPEED_TEMPOS,
    DIAGONALS,
    RADIALS,
    RECONSTRUCTED_SETS,
    SET_TEMPO_MS,
    Catalog,
    CircuitComponentKind,
    Direction,
    blinking_direction_space,
    circuit_component,
    direction_space,
    load_catalog,
    marker_pattern,
    mixed,
    speed_tempo,
    static_directional,
    superimpose,
    wave,
)

ALL_SETS = (
    "set1", "set2", "set3", "set4", "set5", "set6",
    "set7", "set8", "set9", "set10", "set10p", "set11", "set11p",
)


def frame_signature(tacton):
    """Full displayed content of a tacton, for injectivity comparisons."""
    if isinstance(tacton, StaticTacton):
        return ("static", tacton.pattern.pins)
    return (
        "dynamic",
        tacton.tempo_ms,
        tacton.cycle_gap_ms,
        tuple((f.pattern.pins, f.duration) for f in tacton.frames),
    )


class TestDirection:
    def test_partition(self):
        assert set(RADIALS) | set(DIAGONALS) == set(ALL_DIRECTIONS)
        assert len(ALL_DIRECTIONS) == 8

    def test_opposite_is_involution(self):
        for d in ALL_DIRECTIONS:
            assert d.opposite.opposite is d
        assert Direction.N.opposite is Direction.S
        assert Direction.NE.opposite is Direction.SW
        assert Direction.NW.opposite is Direction.SE


class TestStaticDirectional:
    def test_pin_counts(self):
        for d in RADIALS:
            assert static_directional(d, "large").raised_count == 4
            assert static_directional(d, "small").raised_count == 2
        for d in DIAGONALS:
            assert static_directional(d, "large").raised_count == 7
            assert static_directional(d, "small").raised_count == 3

    def test_north_large_is_top_row(self):
        p = static_directional(Direction.N, "large")
        assert p.raised() == {(0, 0), (0, 1), (0, 2), (0, 3)}

    def test_northeast_large_is_top_row_plus_east_column(self):
        p = static_directional(Direction.NE, "large")
        assert p.raised() == {(0, 0), (0, 1), (0, 2), (0, 3), (1, 3), (2, 3), (3, 3)}

    def test_northeast_small_is_corner_angle(self):
        p = static_directional(Direction.NE, "small")
        assert p.raised() == {(0, 3), (0, 2), (1, 3)}

    def test_small_radial_is_centered(self):
        assert static_directional(Direction.N, "small").raised() == {(0, 1), (0, 2)}
        assert static_directional(Direction.W, "small").raised() == {(1, 0), (2, 0)}

    def test_opposite_directions_are_180_rotations(self):
        for size in ("small", "large"):
            for d in ALL_DIRECTIONS:
                a = static_directional(d, size)
                b = static_directional(d.opposite, size)
                assert a == b.rotate_180(), (d, size)

    def test_unknown_size_rejected(self):
        with pytest.raises(ValueError):
            static_directional(Direction.N, "huge")


class TestMarkers:
    def test_radial_marker_is_small_line(self):
        assert marker_pattern(Direction.S) == static_directional(Direction.S, "small")

    def test_diagonal_marker_hugs_its_corner(self):
        assert marker_pattern(Direction.NE).raised() == {(0, 3), (1, 2)}
        assert marker_pattern(Direction.SW).raised() == {(3, 0), (2, 1)}

    def test_markers_rotate_to_opposites(self):
        for d in ALL_DIRECTIONS:
            assert marker_pattern(d) == marker_pattern(d.opposite).rotate_180()


class TestWaves:
    def test_tempo_and_durations(self):
        for set_id in ("set3", "set8", "set9"):
            for d in ALL_DIRECTIONS:
                t = wave(set_id, d)
                assert t.tempo_ms == SET_TEMPO_MS
                assert all(f.duration == 1 for f in t.frames)

    def test_set3_equal_frame_counts(self):
        counts = {len(wave("set3", d).frames) for d in ALL_DIRECTIONS}
        assert len(counts) == 1

    def test_set9_frame_counts(self):
        for d in RADIALS:
            assert len(wave("set9", d).frames) == 6
            assert cycle_length_ms(wave("set9", d)) == 600
        for d in DIAGONALS:
            assert len(wave("set9", d).frames) == 9
            assert cycle_length_ms(wave("set9", d)) == 900

    def test_set8_mixes_set3_radials_with_short_cycles(self):
        for d in RADIALS:
            assert frame_signature(wave("set8", d)) == frame_signature(wave("set3", d))
        for d in DIAGONALS:
            assert cycle_length_ms(wave("set8", d)) == 600

    def test_radial_sweep_moves_toward_direction(self):
        t = wave("set9", Direction.E)
        # Columns light west to east, then the trailing blanks.
        cols = []
        for f in t.frames[:4]:
            (col,) = {c for _, c in f.pattern.raised()}
            cols.append(col)
        assert cols == [0, 1, 2, 3]
        assert all(f.pattern.is_blank for f in t.frames[4:])

    def test_diagonal_sweep_covers_whole_array(self):
        t = wave("set9", Direction.NE)
        covered = set()
        for f in t.frames:
            covered |= f.pattern.raised()
        assert len(covered) == 16

    def test_unknown_set_rejected(self):
        with pytest.raises(ValueError):
            wave("set12", Direction.N)


class TestMixed:
    def test_structure(self):
        for set_id in ("set10", "set10p", "set11", "set11p"):
            for d in ALL_DIRECTIONS:
                t = mixed(set_id, d)
                assert isinstance(t, DynamicTacton)
                assert t.tempo_ms == SET_TEMPO_MS
                assert len(t.frames) == 2

    def test_union_is_direction_plus_reference(self):
        for d in ALL_DIRECTIONS:
            t = mixed("set10", d)
            expected = static_directional(d, "large").union(CENTER_SQUARE)
            assert t.frames[0].pattern == expected

    def test_set11_reference_is_opposite_marker(self):
        t = mixed("set11", Direction.N)
        # Direction blinks: the steady frame holds only the reference.
        assert t.frames[1].pattern == marker_pattern(Direction.S)

    def test_primed_blinks_the_reference(self):
        t = mixed("set11p", Direction.N)
        assert t.frames[1].pattern == static_directional(Direction.N, "large")
        t10p = mixed("set10p", Direction.W)
        assert t10p.frames[1].pattern == static_directional(Direction.W, "large")

    def test_parts_never_overlap(self):
        for set_id in ("set10", "set10p", "set11", "set11p"):
            for d in ALL_DIRECTIONS:
                mixed(set_id, d)  # construction itself asserts disjointness

    def test_superimpose_rejects_overlap(self):
        line = static_directional(Direction.N, "large")
        with pytest.raises(ValueError):
            superimpose(line, line, "direction")
        with pytest.raises(ValueError):
            superimpose(line, CENTER_SQUARE, "both")


class TestSpeeds:
    def test_literal_mapping(self):
        assert speed_tempo("slow") == 40
        assert speed_tempo("medium") == 200
        assert speed_tempo("fast") == 500

    def test_override(self):
        table = {"slow": 80, "fast": 320}
        assert speed_tempo("slow", table) == 80
        with pytest.raises(ValueError):
            speed_tempo("medium", table)

    def test_unknown_speed(self):
        with pytest.raises(ValueError):
            speed_tempo("ludicrous")


class TestSpaces:
    def test_cardinalities(self):
        s2 = blinking_direction_space(("slow", "fast"))
        s3 = blinking_direction_space(("slow", "medium", "fast"))
        assert s2.cardinality == 32
        assert s3.cardinality == 48

    def test_encoders_injective(self):
        for speeds in (("slow", "fast"), ("slow", "medium", "fast")):
            space = blinking_direction_space(speeds)
            seen = set()
            for point in space.tuples():
                seen.add(frame_signature(space.encoder(point)))
            assert len(seen) == space.cardinality

    def test_encoded_tactons_blink_at_speed_tempo(self):
        space = blinking_direction_space(("slow", "medium", "fast"))
        t = space.encoder(("NE", "small", "medium"))
        assert t.tempo_ms == 200
        assert t.frames[0].pattern == static_directional(Direction.NE, "small")
        assert t.frames[1].pattern.is_blank
        assert [f.duration for f in t.frames] == [1, 1]

    def test_tempo_override_table(self):
        space = blinking_direction_space(("slow",), tempos={"slow": 64})
        assert space.encoder(("N", "large", "slow")).tempo_ms == 64

    def test_speed_without_tempo_rejected(self):
        with pytest.raises(ValueError):
            blinking_direction_space(("slow", "warp"))

    def test_direction_space_from_set_id(self):
        space = direction_space("set4")
        assert space.cardinality == 8
        t = space.encoder(("NE",))
        assert t.pattern == static_directional(Direction.NE, "small")
        with pytest.raises(KeyError):
            direction_space("set99")


class TestCircuitComponents:
    def test_six_distinct_kinds(self):
        patterns = [circuit_component(k).pattern for k in CircuitComponentKind]
        assert len(patterns) == 6
        assert len({p.pins for p in patterns}) == 6

    def test_pairwise_hamming_at_least_two(self):
        for a, b in itertools.combinations(CircuitComponentKind, 2):
            pa = circuit_component(a).pattern
            pb = circuit_component(b).pattern
            assert pa.hamming(pb) >= 2, (a, b)

    def test_components_are_static(self):
        for k in CircuitComponentKind:
            assert isinstance(circuit_component(k), StaticTacton)


class TestCatalog:
    def test_every_family_total_over_directions(self):
        catalog = Catalog()
        for set_id in ALL_SETS:
            assert set(catalog.families[set_id]) == set(ALL_DIRECTIONS)

    def test_all_dynamic_set_tactons_run_at_100ms(self):
        catalog = Catalog()
        for set_id in ALL_SETS:
            for t in catalog.families[set_id].values():
                if isinstance(t, DynamicTacton):
                    assert t.tempo_ms == SET_TEMPO_MS, set_id

    def test_families_injective(self):
        catalog = Catalog()
        for set_id in ALL_SETS:
            signatures = {frame_signature(t) for t in catalog.families[set_id].values()}
            assert len(signatures) == 8, set_id

    def test_name_lookup(self):
        catalog = Catalog()
        assert catalog.tacton("set4/N") == StaticTacton(static_directional(Direction.N, "large"))
        assert catalog.tacton("circuit/lamp") == circuit_component(CircuitComponentKind.LAMP)
        with pytest.raises(KeyError):
            catalog.tacton("set4")
        with pytest.raises(KeyError):
            catalog.tacton("set99/N")
        with pytest.raises(ValueError):
            catalog.tacton("set4/Q")

    def test_names_cover_every_entry(self):
        catalog = Catalog()
        names = catalog.names()
        assert len(names) == len(ALL_SETS) * 8 + 6
        for name in names:
            catalog.tacton(name)

    def test_reconstructed_flag(self):
        entries = {e["name"]: e for e in Catalog().to_dict()["tactons"]}
        assert entries["set5/N"].get("reconstructed") is True
        assert "reconstructed" not in entries["set4/N"]
        flagged = {n.split("/")[0] for n, e in entries.items() if e.get("reconstructed")}
        assert flagged == set(RECONSTRUCTED_SETS)

    def test_dump_load_round_trip_is_bit_identical(self, tmp_path):
        catalog = Catalog()
        first = catalog.dump_json()
        path = tmp_path / "catalog.json"
        path.write_text(first)
        assert load_catalog(path).dump_json() == first

    def test_override_replaces_entry(self, tmp_path):
        dot = "o...\n....\n....\n...."
        doc = {"tactons": [{"name": "set4/N", "kind": "static", "pattern": dot}]}
        path = tmp_path / "override.json"
        path.write_text(json.dumps(doc))
        catalog = load_catalog(path)
        assert catalog.tacton("set4/N").pattern == pattern_from_text(dot)
        # everything else untouched
        assert catalog.tacton("set4/S") == Catalog().tacton("set4/S")

    def test_space_lookup(self):
        catalog = Catalog()
        assert catalog.space("s2").cardinality == 32
        assert catalog.space("s3").cardinality == 48
        assert catalog.space("set9").cardinality == 8
        with pytest.raises(KeyError):
            catalog.space("s4")

    def test_set1_blinks_set2_holds(self):
        catalog = Catalog()
        for d in ALL_DIRECTIONS:
            blink = catalog.families["set1"][d]
            still = catalog.families["set2"][d]
            assert isinstance(blink, DynamicTacton)
            assert isinstance(still, StaticTacton)
            assert blink.frames[0].pattern == still.pattern
            assert frame_at(blink, 100).is_blank
