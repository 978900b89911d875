import json

import pytest

from reflexmod.docs import DocumentError, canonical_json, load_workspace, parse_workspace
from reflexmod.lattice import OrderHom

from conftest import WORKSPACES, line

BASE = {
    "field": "Q",
    "dim": 2,
    "subspaces": {"e1": [["1", "0"]]},
    "lattice": {"carrier": ["0", "e1", "H"]},
    "homs": {"phi": {"0": "0", "e1": "0", "H": "e1"}},
    "modules": {"U": {"side": "right", "hom": "phi"}},
}


def doc(**overrides):
    d = json.loads(json.dumps(BASE))
    d.update(overrides)
    return d


def test_parse_base():
    ws = parse_workspace(doc())
    assert len(ws.lattice) == 3
    assert ws.homs["phi"](ws.names["H"]) == line(1, 0)
    assert ws.modules == {"U": ("right", "phi")}
    assert ws.name_of(line(1, 0)) == "e1"


def test_closure_names_unnamed_elements():
    ws = parse_workspace({"dim": 2, "subspaces": {"a": [["1", "0"]], "b": [["0", "1"]], "c": [["1", "1"]]},
                          "lattice": {"close": True, "generators": ["a", "b", "c"]}})
    assert len(ws.lattice) == 5
    ws = parse_workspace({"dim": 3, "subspaces": {"a": [["1", "0", "0"]], "b": [["0", "1", "0"]]},
                          "lattice": {"close": True, "generators": ["a", "b"]}})
    assert "L3" in ws.names and ws.names["L3"].dim == 2


def test_hom_forms():
    ws = parse_workspace(doc(homs={"id": "identity", "c": {"complete": "monotone", "values": {"e1": [["0", "1"]]}},
                                   "inline": {"0": [], "e1": [["2", "0"]], "H": "H"}}, modules={}))
    assert ws.homs["id"] == OrderHom.identity(ws.lattice)
    assert ws.homs["c"](ws.names["H"]) == line(0, 1)
    assert ws.homs["inline"](ws.names["e1"]) == line(1, 0)


@pytest.mark.parametrize("overrides,path", [
    ({"field": "R"}, "field"),
    ({"dim": 9}, "dim"),
    ({"dim": "2"}, "dim"),
    ({"subspaces": {"e1": [["1", "x"]]}}, "subspaces.e1"),
    ({"subspaces": {"e1": [["1"]]}}, "subspaces.e1"),
    ({"subspaces": {"H": [["1", "0"]]}}, "subspaces.H"),
    ({"lattice": {"carrier": ["0", "nope", "H"]}}, "lattice.carrier[1]"),
    ({"dim": 3, "subspaces": {"a": [["1", "0", "0"]], "b": [["0", "1", "0"]]},
      "lattice": {"carrier": ["a", "b"]}, "homs": {}, "modules": {}}, "lattice.carrier"),
    ({"lattice": {}}, "lattice"),
    ({"homs": {"phi": {"0": "0", "e1": "H", "H": "e1"}}}, "homs.phi"),
    ({"homs": {"phi": {"0": "0", "e1": "0"}}}, "homs.phi"),
    ({"modules": {"U": {"side": "up", "hom": "phi"}}}, "modules.U.side"),
    ({"modules": {"U": {"side": "right", "hom": "psi"}}}, "modules.U.hom"),
    ({"seeds": {"audit": "zero"}}, "seeds"),
    ({"field": "Q", "subspaces": {"e1": [["i", "0"]]}}, "subspaces.e1"),
])
def test_field_diagnostics(overrides, path):
    with pytest.raises(DocumentError) as info:
        parse_workspace(doc(**overrides))
    assert info.value.path == path
    assert str(info.value).startswith(path + ":")


def test_cap_exceeded_is_input_error():
    d = {"dim": 3, "subspaces": {f"v{i}": [[str(i), "1", str(i * i)]] for i in range(5)},
         "lattice": {"close": True, "generators": [f"v{i}" for i in range(5)], "cap": 6}}
    with pytest.raises(DocumentError, match="cap"):
        parse_workspace(d)


def test_json_syntax_error_has_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "dim": 2,\n  oops\n}')
    with pytest.raises(DocumentError) as info:
        load_workspace(str(p))
    assert info.value.path.startswith("line 3")


def test_golden_workspaces_load():
    for path in sorted(WORKSPACES.glob("*.json")):
        ws = load_workspace(str(path))
        assert ws.lattice.top.dim == ws.n


def test_digest_is_stable():
    a = parse_workspace(doc())
    b = parse_workspace(doc())
    assert a.digest({"x": 1}) == b.digest({"x": 1})
    assert a.digest({"x": 1}) != a.digest({"x": 2})
    assert canonical_json({"b": 1, "a": [line(1, 0)]}) == '{"a":[[["1","0"]]],"b":1}'
