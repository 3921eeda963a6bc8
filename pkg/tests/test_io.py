import numpy as np
import pytest

from ftlestream import FlowMap, NeighborList, SimplicialMesh, io
from ftlestream.errors import FormatError, ValidationError

UNIT_SQUARE_CSV = """\
# unit square, two triangles
#@ FTLE version=1 kind=coords dim=2 count=4
0,0
1,0
0,1
1,1
#@ FTLE version=1 kind=faces dim=2 count=2
0,1,2
1,3,2
"""


def test_load_handwritten_csv(tmp_path):
    p = tmp_path / "sq.csv"
    p.write_text(UNIT_SQUARE_CSV)
    m = io.load_mesh(p)
    assert (m.n_points, m.n_faces, m.dim) == (4, 2, 2)
    assert m.faces.tolist() == [[0, 1, 2], [1, 3, 2]]


def test_csv_index_out_of_range_reports_line(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text(UNIT_SQUARE_CSV.replace("1,3,2", "1,9,2"))
    with pytest.raises(ValidationError, match=r"bad\.csv:9: index out of range"):
        io.load_mesh(p)


def test_csv_repeated_vertex(tmp_path):
    p = tmp_path / "rep.csv"
    p.write_text(UNIT_SQUARE_CSV.replace("0,1,2", "0,1,1"))
    with pytest.raises(ValidationError, match=r":8: vertex repeated"):
        io.load_mesh(p)


def test_csv_unsupported_dim(tmp_path):
    p = tmp_path / "d4.csv"
    p.write_text("#@ kind=coords dim=4\n0,0,0,0\n#@ kind=faces dim=4\n0,0,0,0,0\n")
    with pytest.raises(ValidationError, match="unsupported dim"):
        io.load_mesh(p)


def test_csv_malformed_record(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text(UNIT_SQUARE_CSV.replace("1,1\n", "1,x\n"))
    with pytest.raises(FormatError, match=r":6: unparsable"):
        io.load_mesh(p)


def _tet_mesh():
    coords = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]], dtype=float)
    return SimplicialMesh(coords, np.array([[0, 1, 2, 3], [1, 2, 3, 4]]))


@pytest.mark.parametrize("ext", [".ftle", ".csv"])
def test_tet_mesh_round_trip(tmp_path, ext):
    m = _tet_mesh()
    p = tmp_path / f"tet{ext}"
    io.save_mesh(p, m)
    back = io.load_mesh(p)
    assert back.dim == 3 and back.faces.shape == (2, 4)
    np.testing.assert_array_equal(back.coords, m.coords)
    np.testing.assert_array_equal(back.faces, m.faces)


def test_binary_layout(tmp_path):
    p = tmp_path / "sq.ftle"
    m = SimplicialMesh([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], [[0, 1, 2]])
    io.save_mesh(p, m)
    raw = p.read_bytes()
    assert raw[:4] == b"FTLE"
    assert io.HEADER.unpack_from(raw, 0) == (b"FTLE", 1, 0, 2, 3)
    second = 24 + 3 * 2 * 8
    assert io.HEADER.unpack_from(raw, second) == (b"FTLE", 1, 1, 2, 1)
    assert len(raw) == second + 24 + 3 * 4


def test_binary_bad_magic(tmp_path):
    p = tmp_path / "x.ftle"
    p.write_bytes(b"NOPE" + bytes(40))
    with pytest.raises(FormatError, match="bad magic"):
        io.load_mesh(p)


def test_binary_truncated(tmp_path):
    p = tmp_path / "t.ftle"
    io.save_mesh(p, _tet_mesh())
    p.write_bytes(p.read_bytes()[:-3])
    with pytest.raises(FormatError, match="truncated"):
        io.load_mesh(p)


def test_binary_out_of_range_reports_offset(tmp_path):
    p = tmp_path / "o.ftle"
    with open(p, "wb") as fh:
        io.write_block(fh, "coords", 2, np.zeros((4, 2)))
        io.write_block(fh, "faces", 2, np.array([[0, 1, 2], [1, 9, 2]]))
    faces_payload = 24 + 64 + 24
    with pytest.raises(ValidationError, match=rf"@{faces_payload + 12}: index out of range"):
        io.load_mesh(p)


def test_binary_unsupported_dim(tmp_path):
    p = tmp_path / "d.ftle"
    with open(p, "wb") as fh:
        fh.write(io.HEADER.pack(b"FTLE", 1, 0, 5, 0))
    with pytest.raises(ValidationError, match="@12: unsupported dim"):
        io.load_mesh(p)


def test_missing_file(tmp_path):
    with pytest.raises(FormatError, match="no such file"):
        io.load_mesh(tmp_path / "nothing.ftle")


@pytest.mark.parametrize("ext", [".ftle", ".csv"])
def test_neighbors_and_flowmap_round_trip(tmp_path, ext):
    nl = NeighborList(np.array([[-1, 1, -1, 2], [0, -1, -1, 3]]))
    io.save_neighbors(tmp_path / f"n{ext}", nl)
    np.testing.assert_array_equal(io.load_neighbors(tmp_path / f"n{ext}").entries, nl.entries)
    fm = FlowMap(np.array([[0.1, 0.2], [1 / 3, -2.5]]), t_horizon=2.0)
    io.save_flowmap(tmp_path / f"f{ext}", fm)
    back = io.load_flowmap(tmp_path / f"f{ext}", t_horizon=2.0)
    np.testing.assert_array_equal(back.values, fm.values)


@pytest.mark.parametrize("ext", [".ftle", ".csv"])
def test_field_round_trip_with_nan(tmp_path, ext):
    vals = np.array([0.0, np.nan, 0.6931471805599453, -1e-300])
    io.save_field(tmp_path / f"f{ext}", vals)
    np.testing.assert_array_equal(io.load_field(tmp_path / f"f{ext}"), vals)


def test_field_csv_spelling(tmp_path):
    io.save_field(tmp_path / "f.csv", [1.5, np.nan])
    lines = (tmp_path / "f.csv").read_text().splitlines()
    assert lines[1:] == ["0,1.5", "1,nan"]


def test_field_binary_kind(tmp_path):
    io.save_field(tmp_path / "f.ftle", [1.0, 2.0], dim=2)
    raw = (tmp_path / "f.ftle").read_bytes()
    assert io.HEADER.unpack_from(raw, 0) == (b"FTLE", 1, 4, 2, 2)
    assert len(raw) == 24 + 16


def test_csv_without_directive_infers_dim(tmp_path):
    p = tmp_path / "fm.csv"
    p.write_text("# x,y,z\n0,0,0\n1,2,3\n")
    fm = io.load_flowmap(p)
    assert fm.dim == 3 and fm.n_points == 2


def test_flowmap_rejects_nonfinite(tmp_path):
    p = tmp_path / "fm.csv"
    p.write_text("0,0\nnan,1\n")
    with pytest.raises(ValidationError, match="fm.csv:2"):
        io.load_flowmap(p)


def test_wrong_kind_rejected(tmp_path):
    io.save_field(tmp_path / "f.ftle", [1.0])
    with pytest.raises(FormatError, match="expected one neighbors block"):
        io.load_neighbors(tmp_path / "f.ftle")
