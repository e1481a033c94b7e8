import json

import pytest
from conftest import chain2, chain3, diamond, id2, loop, tot2

from fundlog.errors import FormatError
from fundlog.frames import frames_up_to
from fundlog.io import (
    algebra_to_json,
    detect_kind,
    frame_from_json,
    frame_to_dot,
    frame_to_json,
    hom_from_json,
    hom_to_json,
    lattice_from_json,
    lattice_to_dot,
    lattice_to_json,
    map_to_json,
    modal_frame_from_json,
    modal_frame_to_json,
    modal_lattice_from_json,
    modal_lattice_to_json,
    morphism_from_json,
    morphism_kind,
    write_json,
)
from fundlog.lattice import LatticeHom, find_isomorphism, fundamental_lattices_up_to
from fundlog.modal import ModalLattice, modal_frames_up_to
from fundlog.morphisms import identity_map


def test_frame_roundtrip():
    for f in frames_up_to(3, fundamental_only=True, up_to_iso=True):
        back = frame_from_json(json.loads(json.dumps(frame_to_json(f))))
        assert back.succ == f.succ and back.labels == f.labels


def test_lattice_roundtrip():
    for L in fundamental_lattices_up_to(5):
        back = lattice_from_json(lattice_to_json(L))
        assert back.neg == L.neg
        assert find_isomorphism(back.lattice, L.lattice, back.neg, L.neg) is not None


def test_modal_roundtrips():
    for mf in modal_frames_up_to(2):
        back = modal_frame_from_json(modal_frame_to_json(mf))
        assert back.m == mf.m and back.base.succ == mf.base.succ
    L = ModalLattice(diamond(), tuple(range(4)), tuple(range(4)))
    back = modal_lattice_from_json(modal_lattice_to_json(L))
    assert back.box == L.box and back.diamond == L.diamond


def test_hand_written_lattice():
    data = {
        "elements": ["bot", "a", "top"],
        "leq": [["bot", "a"], ["a", "top"]],
        "neg": {"bot": "top", "a": "bot", "top": "bot"},
    }
    L = lattice_from_json(data)
    assert find_isomorphism(L.lattice, chain3().lattice, L.neg, chain3().neg) is not None


@pytest.mark.parametrize("data", [
    [],
    {"edges": []},
    {"points": ["a", "a"], "edges": []},
    {"points": ["a"], "edges": [["a", "b"]]},
    {"points": ["a"], "edges": [["a"]]},
    {"points": "ab", "edges": []},
])
def test_frame_format_errors(data):
    with pytest.raises(FormatError):
        frame_from_json(data)


def test_lattice_format_errors():
    with pytest.raises(FormatError):
        lattice_from_json({"elements": ["0", "1"], "leq": [["0", "1"]], "neg": {"0": "1"}})
    with pytest.raises(FormatError):
        lattice_from_json({"elements": ["0", "1"], "leq": [["0", "1"]], "neg": ["1", "0"]})


def test_detect_kind():
    assert detect_kind(frame_to_json(id2())) == "frame"
    assert detect_kind(lattice_to_json(chain2())) == "lattice"
    mf = modal_frames_up_to(1)[0]
    assert detect_kind(modal_frame_to_json(mf)) == "modal-frame"
    L = ModalLattice(chain2(), (0, 1), (0, 1))
    assert detect_kind(modal_lattice_to_json(L)) == "modal-lattice"
    assert detect_kind(map_to_json(identity_map(loop()))) == "morphism"
    with pytest.raises(FormatError):
        detect_kind({"nothing": 1})


def test_morphism_files_by_path_and_inline(tmp_path):
    write_json(frame_to_json(tot2()), tmp_path / "src.json")
    write_json(frame_to_json(loop()), tmp_path / "tgt.json")
    data = {"source": "src.json", "target": "tgt.json", "map": {"a": "x", "b": "x"}}
    assert morphism_kind(data, tmp_path) == "frame-map"
    h = morphism_from_json(data, tmp_path)
    assert h.table == (0, 0) and h.source.size == 2
    inline = map_to_json(h)
    assert morphism_from_json(inline).table == h.table
    with pytest.raises(FormatError):
        morphism_from_json({"source": "src.json", "target": "tgt.json", "map": {"a": "x"}}, tmp_path)


def test_hom_roundtrip():
    f = LatticeHom(chain2(), diamond(), (0, 3))
    data = hom_to_json(f)
    assert morphism_kind(data) == "lattice-hom"
    back = hom_from_json(json.loads(json.dumps(data)))
    assert back.table == f.table


def test_algebra_json():
    out = algebra_to_json(id2())
    assert out["size"] == 4 and out["polarity"] == "positive"
    assert out["members"][0] == []
    assert algebra_to_json(tot2(), "negative")["size"] == 2


def test_dot_output():
    dot = frame_to_dot(id2(), annotations={"p": 0b01})
    assert dot.startswith('digraph "frame" {') and dot.rstrip().endswith("}")
    assert dot.count("->") == 2
    assert "p" in dot.splitlines()[1]
    mf = next(m for m in modal_frames_up_to(1) if m.m == (1,))
    assert "dashed" in frame_to_dot(mf)
    ldot = lattice_to_dot(diamond())
    assert ldot.count("arrowhead=none") == 4 and ldot.count("dotted") == 4
