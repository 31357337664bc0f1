from __future__ import annotations

import random
from fractions import Fraction

import pytest

from tsystem.boundary import (
    StripSpec,
    TubeField,
    WallExtension,
    check_zamolodchikov,
    evolve_strip,
    evolve_tube,
    positivity_report,
    random_tube,
    strip_surface,
    tube_from_json,
    verify_mirror,
    verify_wall_zeros,
    wall_compatibility,
    walled_strip,
)
from tsystem.lattice import EVEN, ODD, DegenerateData, evolve_to


def test_d1_all_ones_first_level():
    surf = strip_surface(1, range(-6, 7), lambda i, j: 1)
    assert evolve_strip(1, surf, (1, 1, 2)) == 2
    assert evolve_strip(1, surf, (1, 0, -1)) == 2
    assert evolve_strip(1, surf, (1, 0, 3)) == 5


def test_boundary_rows_are_synthesized():
    field = TubeField(StripSpec(2), strip_surface(2, range(-4, 5), rng=random.Random(1)))
    assert evolve_strip(2, field, (0, 3, 7)) == 1
    assert evolve_strip(2, field, (3, 0, 1)) == 1
    assert evolve_strip(2, field, (4, 2, 2)) == 0
    assert evolve_strip(2, field, (-1, 1, 0)) == 0
    assert (0, 3, 7) not in field.store


def test_strip_spec_validation():
    with pytest.raises(ValueError):
        StripSpec(0)
    with pytest.raises(ValueError):
        StripSpec(1, True, 0)
    with pytest.raises(ValueError):
        TubeField(StripSpec(1, wall_at_zero=True), strip_surface(1, range(0, 3)))


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("parity", [EVEN, ODD])
def test_wall_zeros(d, parity):
    field = walled_strip(d, parity=parity, rng=random.Random(d))
    rep = verify_wall_zeros(d, field, {"k": range(-4, 5)})
    assert rep.passed, rep.summary()


@pytest.mark.parametrize("d", [1, 2, 3])
def test_mirror(d):
    field = walled_strip(d, rng=random.Random(7 + d))
    rep = verify_mirror(d, field, {"j": range(1, 4), "k": range(-4, 5)})
    assert rep.passed, rep.summary()


def test_mirror_signs():
    f1 = walled_strip(1, rng=random.Random(3))
    e1 = WallExtension(f1)
    assert e1.t(1, -3, 2) == -evolve_to(f1, (1, 1, 2))
    f2 = walled_strip(2, rng=random.Random(3))
    e2 = WallExtension(f2)
    assert e2.t(2, -4, 2) == evolve_to(f2, (1, 1, 2))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_wall_compatibility(d):
    assert wall_compatibility(d, rng=random.Random(d)).passed


def test_tube_d1_l1():
    a = Fraction(3)
    tube = evolve_tube(1, 1, [[a]])
    assert evolve_to(tube, (1, 1, 2)) == 2 / a
    assert evolve_to(tube, (1, 1, 4)) == a
    ones = evolve_tube(1, 1, [[1]])
    assert evolve_to(ones, (1, 1, 2)) == 2


def test_tube_degenerate_and_shape():
    with pytest.raises(DegenerateData, match="degenerate initial data"):
        evolve_tube(1, 2, [[1, 0]])
    with pytest.raises(ValueError):
        evolve_tube(2, 2, [[1, 1]])


def test_tube_json():
    t = tube_from_json({"d": 2, "ell": 3, "grid": [["1/2", "3", "1"], ["2", "5/7", "1"]]})
    assert t.d == 2 and t.spec.second_wall == 3
    assert t.surface.value(1, 1) == Fraction(1, 2)


def test_zamolodchikov_d1_l1():
    rep = check_zamolodchikov(1, 1, evolve_tube(1, 1, [[Fraction(5, 2)]]))
    assert rep.passed
    assert rep.info["p"] == 4
    assert rep.info["minimal_period"] == 4
    assert 2 * rep.info["p"] % rep.info["minimal_period"] == 0


def test_zamolodchikov_d2_l5():
    rep = check_zamolodchikov(2, 5, random_tube(2, 5, random.Random(11)))
    assert rep.passed and rep.info["p"] == 9


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("ell", [1, 2, 3, 4])
def test_zamolodchikov_grid(d, ell):
    rng = random.Random(100 * d + ell)
    tube = random_tube(d, ell, rng)
    assert check_zamolodchikov(d, ell, tube).passed


def test_tube_positivity():
    tube = random_tube(2, 3, random.Random(2))
    assert positivity_report(tube, range(0, 20)).passed
