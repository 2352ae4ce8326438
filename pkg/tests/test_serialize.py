import json

import pytest

from quorumlace.bridges import AsymmetricSystem, FbasSystem, PbqsSystem, SymmetricSystem
from quorumlace.league import is_league
from quorumlace.serialize import (
    InputError,
    dumps,
    league_report_to_json,
    load_config,
    load_model,
    model_from_json,
    model_to_json,
    pfps_from_json,
    pfps_to_json,
)


def write(tmp_path, text: str, name: str = "x.json"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_pfps_round_trip(e4):
    doc = pfps_to_json(e4, e4.universe)
    f, league = pfps_from_json(json.loads(dumps(doc)))
    assert f == e4 and league == e4.universe


def test_sample_files_load(samples):
    for name in ("e4.json", "e1.json", "disjoint.json"):
        load_config(samples / name)
    assert isinstance(load_model(samples / "f4-asymmetric.json"), AsymmetricSystem)
    assert isinstance(load_model(samples / "threshold4-symmetric.json"), SymmetricSystem)
    assert isinstance(load_model(samples / "e4-fbas.json"), FbasSystem)


@pytest.mark.parametrize(
    "model",
    [
        SymmetricSystem.make(["p1", "p2"], [["p1"]]),
        AsymmetricSystem.make(["p1", "p2"], {"p1": [["p2"]], "p2": [[]]}),
        FbasSystem.make({"p1": ["p1", "p2"], "p2": ["p2"]}, {"p1": [["p1", "p2"]], "p2": [["p2"]]}),
        PbqsSystem.make({"p1": [["p1"]], "p2": [["p1", "p2"]]}),
    ],
)
def test_model_round_trip(model):
    doc = model_to_json(model)
    assert model_from_json(json.loads(dumps(doc))) == model


def test_pfps_model_round_trip(e4):
    assert model_from_json(model_to_json(e4)) == e4


def test_dumps_is_canonical(e4):
    assert dumps(pfps_to_json(e4)) == dumps(pfps_to_json(e4))
    assert dumps({"a": 1}).endswith("}\n")


def test_invalid_json_reports_position(tmp_path):
    p = write(tmp_path, '{\n  "format": 1,\n  "processes": {\n')
    with pytest.raises(InputError, match=r"x\.json:4:1"):
        load_config(p)


@pytest.mark.parametrize(
    "doc, where",
    [
        ("[]", "top level"),
        ('{"format": 2, "processes": {}}', "unsupported format"),
        ('{"processes": {}}', "'processes'"),
        ('{"processes": {"p1": []}}', "processes.p1"),
        ('{"processes": {"p1": {"trusted": ["p1"]}}}', "fail_prone"),
        ('{"processes": {"p1": {"trusted": [1], "fail_prone": []}}}', "processes.p1.trusted"),
        ('{"processes": {"p1": {"trusted": [], "fail_prone": []}}}', "non-empty"),
        ('{"processes": {"p1": {"trusted": ["p1", "p2"], "fail_prone": []}}}', "unconfigured"),
        ('{"processes": {"p1": {"trusted": ["p1"], "fail_prone": []}}, "league": ["p7"]}', "league"),
    ],
)
def test_config_errors_name_the_field(tmp_path, doc, where):
    with pytest.raises(InputError, match=where):
        load_config(write(tmp_path, doc))


def test_model_kind_is_required(tmp_path):
    with pytest.raises(InputError, match="'model'"):
        load_model(write(tmp_path, '{"universe": ["p1"]}'))


def test_model_errors_are_input_errors(tmp_path):
    with pytest.raises(InputError):
        load_model(write(tmp_path, '{"model": "fbas", "processes": {"p1": {"known": ["p1"], "slices": [["p2"]]}}}'))


def test_unknown_type_cannot_be_encoded():
    with pytest.raises(TypeError):
        model_to_json(object())


def test_league_report_json(pairs):
    doc = league_report_to_json(is_league(pairs.universe, pairs))
    assert doc["is_league"] is False
    assert doc["consistency_witness"]["set_i"] == ["p1", "p2"]
    assert "availability_witness" not in doc
