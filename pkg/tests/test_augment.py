"""Orientation group behavior, translations, and joint image/label transforms."""

import numpy as np
import pytest

import oracles
from clickseg.augment import (
    ORIENTATIONS,
    Orientation,
    Translation,
    apply_orientation,
    augment_pair,
    orbit,
    transform_suffix,
    translate,
)
from clickseg.errors import DimensionMismatchError, NonSquareRotationError, ValidationError

ASYM_2 = np.array([[10, 20], [30, 40]], dtype=np.uint8)
ASYM_3 = np.arange(9, dtype=np.uint8).reshape(3, 3)


def test_orientation_validation():
    with pytest.raises(ValidationError):
        Orientation(rotation=45)


def test_identity_orientation():
    img = np.arange(12, dtype=np.uint8).reshape(3, 4)
    assert np.array_equal(apply_orientation(img, Orientation()), img)


def test_rot180_is_involution():
    img = np.arange(12, dtype=np.uint8).reshape(3, 4)
    once = apply_orientation(img, Orientation(180))
    assert np.array_equal(apply_orientation(once, Orientation(180)), img)


def test_rot90_requires_square():
    img = np.zeros((2, 3), np.uint8)
    with pytest.raises(NonSquareRotationError):
        apply_orientation(img, Orientation(90))
    with pytest.raises(NonSquareRotationError):
        apply_orientation(img, Orientation(270))
    # 180 and flips are fine on non-square rasters
    apply_orientation(img, Orientation(180, True))


def test_orientations_match_index_oracle():
    for o in ORIENTATIONS:
        want = oracles.apply_orientation_loop(ASYM_3, o.rotation, o.flipped)
        assert np.array_equal(apply_orientation(ASYM_3, o), want), o


def test_orbit_of_asymmetric_2x2_has_8_distinct_members():
    images = [im.tobytes() for _, im in orbit(ASYM_2)]
    assert len(images) == 8
    assert len(set(images)) == 8


def test_orbit_of_constant_image_repeats():
    images = [im for _, im in orbit(np.full((3, 3), 7, np.uint8))]
    assert len(images) == 8
    for im in images:
        assert np.array_equal(im, images[0])


def test_orbit_is_group_closed():
    # the orbit of any orbit member is the same set of eight images
    base = {im.tobytes() for _, im in orbit(ASYM_2)}
    for _, member in orbit(ASYM_2):
        again = {im.tobytes() for _, im in orbit(member)}
        assert again == base


def test_composition_table_is_dihedral():
    # Compose orientations as permutations of the 9 cells (index oracle) and
    # check closure against the library acting on an asymmetric raster.
    perm = {}
    for o in ORIENTATIONS:
        _, _, mapping = oracles.orientation_index_map(o.rotation, o.flipped, 3, 3)
        perm[o] = mapping

    def as_bytes(o):
        return apply_orientation(ASYM_3, o).tobytes()

    lookup = {as_bytes(o): o for o in ORIENTATIONS}
    assert len(lookup) == 8

    table = {}
    for a in ORIENTATIONS:
        for b in ORIENTATIONS:
            combined = apply_orientation(apply_orientation(ASYM_3, a), b)
            c = lookup[combined.tobytes()]
            table[(a, b)] = c
            # independent check through the permutation oracle
            composed = {pos: perm[a][perm[b][pos]] for pos in perm[b]}
            assert composed == perm[c]

    identity = Orientation()
    for a in ORIENTATIONS:
        assert table[(a, identity)] == a
        assert table[(identity, a)] == a
        assert any(table[(a, b)] == identity for b in ORIENTATIONS), "missing inverse"
    # dihedral, not cyclic or quaternion: exactly five self-inverse non-identity
    # elements (the half turn and the four reflections)
    involutions = [a for a in ORIENTATIONS if a != identity and table[(a, a)] == identity]
    assert len(involutions) == 5
    assert any(table[(a, b)] != table[(b, a)] for a in ORIENTATIONS for b in ORIENTATIONS)


def test_translate_identity_and_full_shift():
    img = np.arange(9, dtype=np.uint8).reshape(3, 3)
    assert np.array_equal(translate(img, Translation(0, 0)), img)
    assert (translate(img, Translation(3, 0, fill=5)) == 5).all()
    assert (translate(img, Translation(-4, 0)) == 0).all()
    assert (translate(img, Translation(0, 3, fill=9)) == 9).all()


def test_translate_down_by_one():
    img = np.arange(9, dtype=np.uint8).reshape(3, 3)
    out = translate(img, Translation(1, 0))
    assert (out[0] == 0).all()
    assert np.array_equal(out[1:], img[:2])


def test_translate_matches_loop_oracle():
    rng = np.random.RandomState(30)
    for _ in range(40):
        img = rng.randint(0, 256, size=(5, 7)).astype(np.uint8)
        dr = int(rng.randint(-6, 7))
        dc = int(rng.randint(-8, 9))
        fill = int(rng.randint(0, 256))
        got = translate(img, Translation(dr, dc, fill))
        assert np.array_equal(got, oracles.translate_loop(img, dr, dc, fill)), (dr, dc)


def test_translate_round_trip_restores_in_bounds_pixels():
    rng = np.random.RandomState(31)
    for _ in range(30):
        img = rng.randint(1, 256, size=(6, 6)).astype(np.uint8)  # no 0s: fill marks loss
        dr = int(rng.randint(-3, 4))
        dc = int(rng.randint(-3, 4))
        there = translate(img, Translation(dr, dc, fill=0))
        back = translate(there, Translation(-dr, -dc, fill=0))
        survived = back != 0
        assert np.array_equal(back[survived], img[survived])


def test_augment_pair_identity():
    img = np.arange(16, dtype=np.uint8).reshape(4, 4)
    lbl = (img > 7).astype(np.uint8)
    pairs = augment_pair(img, lbl, [Orientation()])
    assert len(pairs) == 1
    assert np.array_equal(pairs[0][0], img)
    assert np.array_equal(pairs[0][1], lbl)


def test_augment_pair_full_orbit_moves_label_identically():
    img = np.arange(16, dtype=np.uint8).reshape(4, 4)
    lbl = np.zeros((4, 4), np.uint8)
    lbl[1:3, 2:4] = 1
    pairs = augment_pair(img, lbl, list(ORIENTATIONS))
    assert len(pairs) == 8
    for o, (im, lb) in zip(ORIENTATIONS, pairs):
        assert np.array_equal(im, apply_orientation(img, o))
        assert np.array_equal(lb, apply_orientation(lbl, o))
        assert lb.sum() == lbl.sum(), "orientations must preserve label foreground"


def test_augment_pair_label_fill_is_background():
    img = np.full((3, 3), 100, np.uint8)
    lbl = np.ones((3, 3), np.uint8)
    pairs = augment_pair(img, lbl, [Translation(1, 0, fill=200)])
    im, lb = pairs[0]
    assert (im[0] == 200).all()
    assert (lb[0] == 0).all(), "label fill must stay background even when image fill differs"
    assert lb.sum() <= lbl.sum()


def test_augment_pair_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        augment_pair(np.zeros((3, 3), np.uint8), np.zeros((3, 4), np.uint8), [Orientation()])


def test_transform_suffixes():
    assert transform_suffix(Orientation(0)) == "_r0"
    assert transform_suffix(Orientation(90, True)) == "_r90_f"
    assert transform_suffix(Translation(3, -2)) == "_t+3-2"
    assert transform_suffix(Translation(-1, 0)) == "_t-1+0"
