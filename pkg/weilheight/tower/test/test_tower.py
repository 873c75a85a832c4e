import json
from fractions import Fraction

import pytest

from weilheight.error import BadEmbedding, NoSuchLevel, NotGalois, ParserException
from weilheight.fields.catalog import named_field
from weilheight.tower.tower import (
    Tower,
    check_measure_refinement,
    load_tower,
    named_tower,
    partition,
    refinement_map,
    tower_from_description,
    tower_names,
    tower_to_description,
)

Q = named_field("Q")
QI = named_field("Q(i)")
QZETA8 = named_field("Q(zeta8)")

ZETA8_TOWER = named_tower("Q<Q(i)<Q(zeta8)")


def test_make_tower():
    tower = Tower.make([Q, QI], [[0]])
    assert tower.label == "Q<Q(i)"
    assert tower.top_level == 1
    assert tower == named_tower("Q<Q(i)")


def test_bad_embedding_reports_the_residual():
    # (1 + t)^2 + 1 = 2 + 2t + t^2 in Q(zeta8)
    with pytest.raises(BadEmbedding) as info:
        Tower.make([Q, QI, QZETA8], [[0], [1, 1, 0, 0]])
    assert info.value.residual == ("2", "2", "1", "0")
    assert info.value.code == "BadEmbedding"


@pytest.mark.parametrize(
    "levels, embeddings",
    [
        ([QI], []),
        ([Q, QI], []),
        ([Q, QI], [[1]]),
        ([Q, QZETA8, QI], [[0], [0, 1]]),
    ],
)
def test_bad_towers(levels, embeddings):
    with pytest.raises(BadEmbedding):
        Tower.make(levels, embeddings)


def test_levels_must_be_galois():
    with pytest.raises(NotGalois):
        Tower.make([Q, named_field("Q(cbrt2)")], [[0]])


def test_embed():
    i = QI.generator
    assert ZETA8_TOWER.embed(i, 1, 2) == QZETA8.element([0, 0, 1])
    assert ZETA8_TOWER.embed(i, 1, 1) == i
    assert ZETA8_TOWER.embed(Q.from_rational(3), 0, 2) == QZETA8.from_rational(3)
    assert ZETA8_TOWER.embed(i * i + 1, 1, 2).is_zero
    tower = named_tower("Q<Q(sqrt2)<Q(zeta8)")
    sqrt2 = tower.embed(named_field("Q(sqrt2)").generator, 1, 2)
    assert sqrt2 * sqrt2 == QZETA8.from_rational(2)


def test_missing_level():
    with pytest.raises(NoSuchLevel):
        ZETA8_TOWER.field(3)
    with pytest.raises(NoSuchLevel):
        partition(ZETA8_TOWER, -1, 5)


@pytest.mark.parametrize(
    "name, rational_place, expected",
    [
        ("Q<Q(i)", 2, ["1"]),
        ("Q<Q(i)", 3, ["1"]),
        ("Q<Q(i)", 5, ["1/2", "1/2"]),
        ("Q<Q(i)", 13, ["1/2", "1/2"]),
        ("Q<Q(i)", None, ["1"]),
        ("Q<Q(zeta5)", 2, ["1"]),
        ("Q<Q(zeta5)", 3, ["1"]),
        ("Q<Q(zeta5)", 5, ["1"]),
        ("Q<Q(zeta5)", 11, ["1/4", "1/4", "1/4", "1/4"]),
        ("Q<Q(zeta5)", 19, ["1/2", "1/2"]),
        ("Q<Q(zeta5)", None, ["1/2", "1/2"]),
        ("Q<Q(sqrt2)", None, ["1/2", "1/2"]),
    ],
)
def test_partition_weights(name, rational_place, expected):
    cells = partition(named_tower(name), 1, rational_place)
    assert [cell.weight for cell in cells.cells] == [Fraction(w) for w in expected]
    assert cells.total == 1


@pytest.mark.parametrize("rational_place", [None, 2, 3, 5, 7])
def test_base_level_has_one_cell(rational_place):
    cells = partition(ZETA8_TOWER, 0, rational_place)
    assert [cell.weight for cell in cells.cells] == [1]


@pytest.mark.parametrize(
    "name, level, rational_place, expected",
    [
        ("Q<Q(i)", 0, 5, {"fin:5:2.1": "fin:5:0.1", "fin:5:3.1": "fin:5:0.1"}),
        (
            "Q<Q(i)<Q(zeta8)",
            1,
            5,
            {"fin:5:2.0.1": "fin:5:2.1", "fin:5:3.0.1": "fin:5:3.1"},
        ),
        ("Q<Q(sqrt2)", 0, None, {"arch:r0": "arch:r0", "arch:r1": "arch:r0"}),
        (
            "Q<Q(sqrt2)<Q(zeta8)",
            1,
            None,
            {"arch:c1": "arch:r0", "arch:c3": "arch:r1"},
        ),
        (
            "Q<Q(sqrt2)<Q(zeta8)",
            1,
            7,
            {"fin:7:1.3.1": "fin:7:3.1", "fin:7:1.4.1": "fin:7:4.1"},
        ),
    ],
)
def test_refinement_map(name, level, rational_place, expected):
    psi = refinement_map(named_tower(name), level, rational_place)
    assert dict(psi.assignment) == expected


def test_refinement_map_preimage():
    psi = refinement_map(ZETA8_TOWER, 1, 17)
    assert len(psi.assignment) == 4
    for coarse in partition(ZETA8_TOWER, 1, 17).place_ids:
        assert len(psi.preimage(coarse)) == 2


@pytest.mark.parametrize("name", ["Q<Q(i)<Q(zeta8)", "Q<Q(sqrt5)"])
@pytest.mark.parametrize("rational_place", [None, 2, 3, 5, 7, 13])
def test_measure_refinement(name, rational_place):
    tower = named_tower(name)
    checks = check_measure_refinement(tower, rational_place)
    assert all(check.passed for check in checks)
    coarse_cells = sum(
        len(partition(tower, level, rational_place).cells)
        for level in range(tower.top_level)
    )
    assert len(checks) == coarse_cells


def test_measure_refinement_split_prime():
    (check,) = check_measure_refinement(named_tower("Q<Q(i)"), 5)
    assert check.weight == 1
    assert check.fine_weights == (
        ("fin:5:2.1", Fraction(1, 2)),
        ("fin:5:3.1", Fraction(1, 2)),
    )


def test_single_level_is_vacuous():
    assert check_measure_refinement(named_tower("Q"), 5) == ()


@pytest.mark.parametrize("name", tower_names())
def test_description_round_trip(name):
    tower = named_tower(name)
    assert tower_from_description(tower_to_description(tower)) == tower


def test_load_tower_from_file(tmp_path):
    path = tmp_path / "tower.json"
    description = {"levels": ["Q", "Q(i)"], "embeddings": [["0"]]}
    path.write_text(json.dumps(description))
    assert load_tower(str(path)) == named_tower("Q<Q(i)")
    assert load_tower("Q<Q(sqrt5)") == named_tower("Q<Q(sqrt5)")


@pytest.mark.parametrize(
    "description",
    [
        {"embeddings": []},
        {"levels": "Q", "embeddings": []},
        {"levels": ["Q", 7], "embeddings": [[0]]},
        {"levels": ["Q", "Q(i)"], "embeddings": [["x"]]},
        {"levels": ["Q", "Q(pi)"], "embeddings": [[0]]},
    ],
)
def test_bad_tower_descriptions(description):
    with pytest.raises(ParserException):
        tower_from_description(description)
