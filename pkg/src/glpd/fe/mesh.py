"""8-node quadrilateral meshes: text format, generators and geometry checks.

File format (one record per line, ids are arbitrary positive integers)::

    nodes N elements M
    <id> <x> <y>                      N lines
    <id> <n1> ... <n8>                M lines
    set <NAME> <node id> ...          node sets
    elset <NAME> <element id> ...     element sets

Corner nodes come first, counter-clockwise, then the mid-side nodes of edges
1-2, 2-3, 3-4, 4-1.  Coordinates are written with ``repr`` so that
reading and writing is bit-exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .shape import GAUSS_2X2, shape_derivatives


class MeshFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class Mesh:
    node_ids: np.ndarray  # (N,) int
    coords: np.ndarray  # (N, 2)
    elem_ids: np.ndarray  # (M,) int
    connectivity: np.ndarray  # (M, 8) zero-based node indices
    node_sets: dict = field(default_factory=dict)  # name -> zero-based node indices
    elem_sets: dict = field(default_factory=dict)

    @property
    def n_nodes(self) -> int:
        return len(self.node_ids)

    @property
    def n_elements(self) -> int:
        return len(self.elem_ids)

    def validate(self) -> None:
        if self.connectivity.size and (self.connectivity.min() < 0 or self.connectivity.max() >= self.n_nodes):
            raise MeshFormatError("connectivity index out of range")
        for e, conn in enumerate(self.connectivity):
            xy = self.coords[conn]
            for xi, eta, _ in GAUSS_2X2:
                _, dn = shape_derivatives(xi, eta)
                det = np.linalg.det(dn @ xy)
                if not det > 0:
                    raise MeshFormatError(f"non-positive Jacobian in element {self.elem_ids[e]}")

    def element_size(self) -> float:
        """Mean corner-edge length."""
        c = self.coords[self.connectivity[:, :4]]
        edges = np.linalg.norm(c - np.roll(c, -1, axis=1), axis=2)
        return float(edges.mean())

    def nodes_in(self, name: str) -> np.ndarray:
        try:
            return self.node_sets[name]
        except KeyError:
            raise KeyError(f"unknown node set {name!r}") from None

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mesh):
            return NotImplemented
        return (
            np.array_equal(self.node_ids, other.node_ids)
            and np.array_equal(self.coords, other.coords)
            and np.array_equal(self.elem_ids, other.elem_ids)
            and np.array_equal(self.connectivity, other.connectivity)
            and _sets_equal(self.node_sets, other.node_sets)
            and _sets_equal(self.elem_sets, other.elem_sets)
        )


def _sets_equal(a: dict, b: dict) -> bool:
    return a.keys() == b.keys() and all(np.array_equal(a[k], b[k]) for k in a)


def format_mesh(mesh: Mesh) -> str:
    lines = [f"nodes {mesh.n_nodes} elements {mesh.n_elements}"]
    for nid, (x, y) in zip(mesh.node_ids, mesh.coords):
        lines.append(f"{nid} {float(x)!r} {float(y)!r}")
    for eid, conn in zip(mesh.elem_ids, mesh.connectivity):
        lines.append(f"{eid} " + " ".join(str(mesh.node_ids[i]) for i in conn))
    for name, idx in mesh.node_sets.items():
        lines.append(f"set {name} " + " ".join(str(mesh.node_ids[i]) for i in idx))
    for name, idx in mesh.elem_sets.items():
        lines.append(f"elset {name} " + " ".join(str(mesh.elem_ids[i]) for i in idx))
    return "\n".join(lines) + "\n"


def parse_mesh(text: str) -> Mesh:
    lines = text.splitlines()
    if not lines:
        raise MeshFormatError("empty mesh file", 1)
    head = lines[0].split()
    if len(head) != 4 or head[0] != "nodes" or head[2] != "elements":
        raise MeshFormatError("expected header 'nodes N elements M'", 1)
    try:
        n_nodes, n_elem = int(head[1]), int(head[3])
    except ValueError:
        raise MeshFormatError("node/element counts must be integers", 1) from None
    if n_nodes < 0 or n_elem < 0 or len(lines) < 1 + n_nodes + n_elem:
        raise MeshFormatError("file shorter than the header announces", len(lines))

    node_ids = np.empty(n_nodes, dtype=np.int64)
    coords = np.empty((n_nodes, 2))
    for k in range(n_nodes):
        ln = 2 + k
        parts = lines[1 + k].split()
        if len(parts) != 3:
            raise MeshFormatError("node line needs 'id x y'", ln)
        try:
            node_ids[k] = int(parts[0])
            coords[k] = float(parts[1]), float(parts[2])
        except ValueError:
            raise MeshFormatError("bad number in node line", ln) from None
    index = {int(n): i for i, n in enumerate(node_ids)}
    if len(index) != n_nodes:
        raise MeshFormatError("duplicate node id")

    elem_ids = np.empty(n_elem, dtype=np.int64)
    conn = np.empty((n_elem, 8), dtype=np.int64)
    for k in range(n_elem):
        ln = 2 + n_nodes + k
        parts = lines[1 + n_nodes + k].split()
        if len(parts) != 9:
            raise MeshFormatError("element line needs 'id n1..n8'", ln)
        try:
            elem_ids[k] = int(parts[0])
            conn[k] = [index[int(p)] for p in parts[1:]]
        except ValueError:
            raise MeshFormatError("bad integer in element line", ln) from None
        except KeyError as exc:
            raise MeshFormatError(f"unknown node id {exc.args[0]}", ln) from None
    eindex = {int(e): i for i, e in enumerate(elem_ids)}

    node_sets, elem_sets = {}, {}
    for k in range(1 + n_nodes + n_elem, len(lines)):
        ln = k + 1
        parts = lines[k].split()
        if not parts:
            continue
        if parts[0] not in ("set", "elset") or len(parts) < 2:
            raise MeshFormatError("expected 'set NAME ids' or 'elset NAME ids'", ln)
        table, lookup = (node_sets, index) if parts[0] == "set" else (elem_sets, eindex)
        try:
            table[parts[1]] = np.array([lookup[int(p)] for p in parts[2:]], dtype=np.int64)
        except (ValueError, KeyError):
            raise MeshFormatError(f"bad id in {parts[0]} {parts[1]}", ln) from None
    mesh = Mesh(node_ids, coords, elem_ids, conn, node_sets, elem_sets)
    mesh.validate()
    return mesh


def read_mesh(path) -> Mesh:
    return parse_mesh(Path(path).read_text())


def write_mesh(mesh: Mesh, path) -> None:
    Path(path).write_text(format_mesh(mesh))


def _grid_mesh(nx: int, ny: int, mapping) -> Mesh:
    """Structured mesh of the unit square pushed through ``mapping(s, t)``.

    Node sets ``bottom``, ``top``, ``left``, ``right`` are the images of the
    square's edges.
    """
    if nx < 1 or ny < 1:
        raise ValueError("need at least one element in each direction")
    gx, gy = 2 * nx + 1, 2 * ny + 1
    ids = -np.ones((gx, gy), dtype=np.int64)
    coords = []
    for j in range(gy):
        for i in range(gx):
            if i % 2 and j % 2:
                continue  # no centre node
            ids[i, j] = len(coords)
            coords.append(mapping(i / (gx - 1), j / (gy - 1)))
    conn = []
    for ej in range(ny):
        for ei in range(nx):
            i, j = 2 * ei, 2 * ej
            conn.append(
                [
                    ids[i, j], ids[i + 2, j], ids[i + 2, j + 2], ids[i, j + 2],
                    ids[i + 1, j], ids[i + 2, j + 1], ids[i + 1, j + 2], ids[i, j + 1],
                ]
            )
    sets = {
        "bottom": ids[:, 0][ids[:, 0] >= 0],
        "top": ids[:, -1][ids[:, -1] >= 0],
        "left": ids[0, :][ids[0, :] >= 0],
        "right": ids[-1, :][ids[-1, :] >= 0],
    }
    n = len(coords)
    m = len(conn)
    mesh = Mesh(
        np.arange(1, n + 1),
        np.array(coords, dtype=float),
        np.arange(1, m + 1),
        np.array(conn, dtype=np.int64),
        sets,
        {"all": np.arange(m)},
    )
    mesh.validate()
    return mesh


def strip_mesh(width: float, height: float, nx: int, ny: int) -> Mesh:
    """Rectangle ``[0, width] x [0, height]``."""
    return _grid_mesh(nx, ny, lambda s, t: (s * width, t * height))


def notched_strip_mesh(width: float, height: float, radius: float, nx: int, ny: int, grading: float = 2.0) -> Mesh:
    """Quarter of a plane-strain strip with a semicircular edge notch.

    The symmetry planes are ``x = 0`` (set ``left``) and ``y = 0`` (set
    ``bottom``, the minimum section ``0 <= x <= width - radius``).  The notch
    of the given radius is centred at ``(width, 0)``; rows are refined towards
    the minimum section with a power-law ``grading``.
    """
    if not 0 < radius < min(width, height):
        raise ValueError("notch radius must be smaller than the width and the height")

    def mapping(s, t):
        y = height * t**grading
        x_right = width - math.sqrt(radius**2 - y**2) if y < radius else width
        return s * x_right, y

    return _grid_mesh(nx, ny, mapping)
