"""Surface model sanity and the filling / complementary-region machinery."""

import pytest

from laminatron.arrange import fills, max_arcs_in_complement
from laminatron.surface import S05, SurfaceModel
from laminatron.words import cyclic_key, invert, word


def test_ribbon_structure_is_five_punctured_sphere():
    SurfaceModel()  # construction runs the face-trace check


def test_peripheral_classes():
    assert S05.is_peripheral(word([1]))
    assert S05.is_peripheral(word([-3]))
    assert S05.is_peripheral(word([1, 2, 3, 4]))
    assert S05.is_peripheral(word([2, 3, 4, 1]))  # conjugate rotation
    assert not S05.is_peripheral(word([1, 2]))


def test_side_words():
    assert list(S05.side_curve_word(0)) == [1, 2]
    assert list(S05.side_curve_word(3)) == [-3, -2, -1]
    # block curve around {4,0} equals side 4
    assert cyclic_key(S05.block_curve_word((4, 0))) == cyclic_key(S05.side_curve_word(4))


def test_block_twist_rejects_bad_blocks():
    with pytest.raises(ValueError):
        S05.block_twist((0, 2), 1)  # not a cyclic interval
    with pytest.raises(ValueError):
        S05.block_twist((0, 1, 2, 3, 4), 1)


def test_pants_configuration_does_not_fill(sides):
    r = fills(S05, [sides[0].w, sides[2].w])
    assert not r.verdict and "disconnected" in r.reason


def test_single_curve_never_fills(sides):
    assert not fills(S05, [sides[0].w]).verdict


def test_base_window_fills(sides):
    # the first four curves of the family: sides 0, 2, 4, 1
    r = fills(S05, [sides[0].w, sides[2].w, sides[4].w, sides[1].w])
    assert r.verdict
    kinds = sorted(f.split(":")[0] for f in r.face_words)
    assert kinds.count("puncture") == 5
    assert kinds.count("disk") == 3


def test_all_rotated_windows_fill(sides):
    for s in range(5):
        ws = [sides[s % 5].w, sides[(s + 2) % 5].w, sides[(s + 4) % 5].w, sides[(s + 1) % 5].w]
        assert fills(S05, ws).verdict, f"window starting at side {s}"


def test_two_crossing_curves_do_not_fill(sides):
    r = fills(S05, [sides[0].w, sides[4].w])
    assert not r.verdict
    essential = [f for f in r.face_words if f.startswith("essential")]
    assert len(essential) == 1  # the region holding the two far punctures


def test_relative_filling_inside_subsurface(sides):
    # sides 0 and 4 fill the 3-punctured disk bounded by the curve around
    # punctures {2,3} (= side 2): complement faces are that boundary + disks
    r = fills(S05, [sides[0].w, sides[4].w], delta_words=[sides[2].w])
    assert r.verdict


def test_relative_filling_rejects_crossing_boundary(sides):
    r = fills(S05, [sides[0].w, sides[4].w], delta_words=[sides[1].w])
    assert not r.verdict and "boundary crosses" in r.reason


def test_arc_bound_measurement(sides):
    window = [sides[0].w, sides[2].w, sides[4].w, sides[1].w]
    B = max_arcs_in_complement(S05, window, sides[3].w)
    assert 1 <= B <= 2 * 2 * 2  # ceiling 2*m*b2
    assert B == 2


def test_fill_invariance_under_mapping_class(sides):
    import random

    from conftest import random_mapping_word

    rng = random.Random(17)
    mc = random_mapping_word(rng, 3)
    imgs = [mc.apply(sides[i]) for i in (0, 2, 4, 1)]
    if max(len(c) for c in imgs) < 600:
        assert fills(S05, [c.w for c in imgs]).verdict
