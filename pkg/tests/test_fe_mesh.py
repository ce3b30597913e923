import numpy as np
import pytest

from glpd.corpus import CounterRng
from glpd.fe.mesh import MeshFormatError, format_mesh, notched_strip_mesh, parse_mesh, read_mesh, strip_mesh, write_mesh
from glpd.fe.shape import GAUSS_2X2, shape_derivatives, shape_functions


def test_partition_of_unity_and_derivatives():
    rng = CounterRng(50)
    for _ in range(10):
        xi, eta = rng.uniform(-1, 1), rng.uniform(-1, 1)
        n, dn = shape_derivatives(xi, eta)
        assert n.sum() == pytest.approx(1.0, abs=1e-15)
        assert np.abs(dn.sum(axis=1)).max() < 1e-14
        h = 1e-6
        fd_xi = (shape_functions(xi + h, eta) - shape_functions(xi - h, eta)) / (2 * h)
        fd_eta = (shape_functions(xi, eta + h) - shape_functions(xi, eta - h)) / (2 * h)
        np.testing.assert_allclose(dn[0], fd_xi, atol=1e-9)
        np.testing.assert_allclose(dn[1], fd_eta, atol=1e-9)


def test_gauss_rule_weights():
    assert sum(w for _, _, w in GAUSS_2X2) == pytest.approx(4.0)


def test_round_trip_bit_exact(tmp_path):
    mesh = notched_strip_mesh(5.0, 10.0, 2.0, 4, 5)
    text = format_mesh(mesh)
    again = parse_mesh(text)
    assert again == mesh
    assert format_mesh(again) == text
    path = tmp_path / "m.mesh"
    write_mesh(mesh, path)
    write_mesh(read_mesh(path), tmp_path / "n.mesh")
    assert path.read_bytes() == (tmp_path / "n.mesh").read_bytes()


def test_generated_sets():
    mesh = strip_mesh(1.0, 2.0, 2, 3)
    assert mesh.n_elements == 6
    assert np.all(mesh.coords[mesh.nodes_in("top"), 1] == 2.0)
    assert np.all(mesh.coords[mesh.nodes_in("left"), 0] == 0.0)
    assert len(mesh.elem_sets["all"]) == 6


def test_notched_geometry():
    mesh = notched_strip_mesh(5.0, 10.0, 2.0, 10, 10)
    assert (mesh.n_nodes, mesh.n_elements) == (341, 100)
    bottom = mesh.coords[mesh.nodes_in("bottom")]
    assert bottom[:, 0].max() == pytest.approx(3.0)
    with pytest.raises(KeyError):
        mesh.nodes_in("nope")


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("vertices 1 elements 0\n", 1),
        ("nodes 1 elements 0\n1 0.0\n", 2),
        ("nodes 1 elements 0\n1 0.0 zero\n", 2),
        ("nodes 1 elements 1\n1 0 0\n1 1 1 1 1 1 1 1 9\n", 3),
        ("nodes 1 elements 0\n1 0 0\nfoo bar 1\n", 3),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(MeshFormatError) as err:
        parse_mesh(text)
    assert err.value.line == line


def test_inverted_element_rejected():
    mesh = strip_mesh(1.0, 1.0, 1, 1)
    text = format_mesh(mesh)
    lines = text.splitlines()
    n = mesh.n_nodes
    eid, *nodes = lines[1 + n].split()
    # reverse the orientation
    flipped = [nodes[0], nodes[3], nodes[2], nodes[1], nodes[7], nodes[6], nodes[5], nodes[4]]
    lines[1 + n] = " ".join([eid] + flipped)
    with pytest.raises(MeshFormatError, match="Jacobian"):
        parse_mesh("\n".join(lines) + "\n")
