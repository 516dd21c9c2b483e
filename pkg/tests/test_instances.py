import json
from fractions import Fraction

import pytest

from netauction.instances import InstanceFormatError, dump_instance, load_instance

from conftest import FIXTURES


@pytest.mark.parametrize("name", ["example1.json", "example2.json", "fig1.json", "idm_case.json"])
def test_roundtrip(tmp_path, name):
    inst = load_instance(FIXTURES / name)
    path = tmp_path / name
    dump_instance(inst, path)
    assert load_instance(path) == inst


def test_decimal_strings_parse_exactly(tmp_path):
    path = tmp_path / "inst.json"
    path.write_text(json.dumps({
        "variant": "homogeneous",
        "requester": {"demand": 1, "reserve": "10.1", "neighbors": ["x"]},
        "suppliers": [{"id": "x", "ability": 1, "cost": 0.1, "neighbors": []}],
    }))
    inst = load_instance(path)
    assert inst.suppliers[1].unit_cost == Fraction(1, 10)  # not the float 0.1
    assert inst.requester.reserve_unit == Fraction(101, 10)


def test_dangling_neighbor_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "variant": "homogeneous",
        "requester": {"demand": 1, "reserve": 10, "neighbors": ["x"]},
        "suppliers": [{"id": "x", "ability": 1, "cost": 1, "neighbors": ["ghost"]}],
    }))
    with pytest.raises(InstanceFormatError):
        load_instance(path)


def test_duplicate_id_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "variant": "homogeneous",
        "requester": {"demand": 1, "reserve": 10, "neighbors": ["x"]},
        "suppliers": [
            {"id": "x", "ability": 1, "cost": 1, "neighbors": []},
            {"id": "x", "ability": 2, "cost": 2, "neighbors": []},
        ],
    }))
    with pytest.raises(InstanceFormatError):
        load_instance(path)


def test_bundle_outside_tasks_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "variant": "heterogeneous",
        "requester": {"tasks": ["t"], "reserve": {"t": 5}, "neighbors": ["x"]},
        "suppliers": [{"id": "x", "ability": ["t", "zz"], "cost": 1, "neighbors": []}],
    }))
    with pytest.raises(InstanceFormatError):
        load_instance(path)


def test_syntax_error_carries_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"variant": "homogeneous",\n  "oops"\n}')
    with pytest.raises(InstanceFormatError) as err:
        load_instance(path)
    assert err.value.line is not None and err.value.column is not None


def test_unknown_variant(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"variant": "mystery"}))
    with pytest.raises(InstanceFormatError):
        load_instance(path)


def test_scalar_reserve_fans_out(tmp_path):
    path = tmp_path / "inst.json"
    path.write_text(json.dumps({
        "variant": "heterogeneous",
        "requester": {"tasks": ["t", "u"], "reserve": 4, "neighbors": ["x"]},
        "suppliers": [{"id": "x", "ability": ["t"], "cost": 1, "neighbors": []}],
    }))
    inst = load_instance(path)
    assert inst.requester.reserve == {"t": Fraction(4), "u": Fraction(4)}
