"""Representations of finite acyclic quivers over F_q.

Morphism spaces, kernels/cokernels, Krull-Schmidt decomposition,
indecomposable enumeration (reflection functors on Dynkin quivers, orbit
enumeration elsewhere), endomorphism/automorphism data, and the Euler form.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import BoundExceededError, BudgetExceededError, ConfigError, InternalCheckError
from .ffield import FieldSpec, Matrix, block_diag, complete_basis, hstack, vstack

DimVector = tuple[int, ...]


@dataclass(frozen=True)
class Arrow:
    id: str
    src: str
    tgt: str


class Quiver:
    """Finite quiver without oriented cycles."""

    def __init__(self, name: str, vertices: Sequence[str], arrows: Sequence[Arrow]):
        if len(set(vertices)) != len(vertices):
            raise ConfigError("duplicate vertex ids")
        if len({a.id for a in arrows}) != len(arrows):
            raise ConfigError("duplicate arrow ids")
        self.name = name
        self.vertices = tuple(vertices)
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        for a in arrows:
            if a.src not in self.vindex or a.tgt not in self.vindex:
                raise ConfigError(f"arrow {a.id} references unknown vertex")
        self.arrows = tuple(arrows)
        self.n = len(self.vertices)
        self.out_arrows: list[list[int]] = [[] for _ in range(self.n)]
        self.in_arrows: list[list[int]] = [[] for _ in range(self.n)]
        for k, a in enumerate(self.arrows):
            self.out_arrows[self.vindex[a.src]].append(k)
            self.in_arrows[self.vindex[a.tgt]].append(k)
        self.topo_order = self._toposort()
        self._roots_cache: list[DimVector] | None = None

    def _toposort(self) -> tuple[int, ...]:
        indeg = [len(self.in_arrows[i]) for i in range(self.n)]
        order = []
        ready = [i for i in range(self.n) if indeg[i] == 0]
        while ready:
            v = ready.pop(0)
            order.append(v)
            for k in self.out_arrows[v]:
                w = self.vindex[self.arrows[k].tgt]
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
        if len(order) != self.n:
            cycle = [self.vertices[i] for i in range(self.n) if indeg[i] > 0]
            raise ConfigError(f"quiver has an oriented cycle through {cycle}")
        return tuple(order)

    @classmethod
    def from_dict(cls, doc: dict) -> "Quiver":
        try:
            name = doc["name"]
            vertices = list(doc["vertices"])
            arrows = [Arrow(a["id"], a["src"], a["tgt"]) for a in doc["arrows"]]
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed quiver document: {exc}") from exc
        return cls(name, vertices, arrows)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt} for a in self.arrows],
        }

    @property
    def digest(self) -> str:
        doc = {
            "name": self.name,
            "vertices": sorted(self.vertices),
            "arrows": sorted(
                ({"id": a.id, "src": a.src, "tgt": a.tgt} for a in self.arrows),
                key=lambda d: d["id"],
            ),
        }
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()

    # -- Tits form -----------------------------------------------------------

    def euler_form(self, d: DimVector, e: DimVector) -> int:
        val = sum(x * y for x, y in zip(d, e))
        for a in self.arrows:
            val -= d[self.vindex[a.src]] * e[self.vindex[a.tgt]]
        return val

    def tits_form(self, d: DimVector) -> int:
        return self.euler_form(d, d)

    def is_representation_finite(self) -> bool:
        """Positive definiteness of the symmetrized Euler form (Dynkin test)."""
        c = [[0] * self.n for _ in range(self.n)]
        for i in range(self.n):
            c[i][i] = 2
        for a in self.arrows:
            i, j = self.vindex[a.src], self.vindex[a.tgt]
            c[i][j] -= 1
            c[j][i] -= 1
        for k in range(1, self.n + 1):
            if _int_det([row[:k] for row in c[:k]]) <= 0:
                return False
        return True

    def positive_roots(self) -> list[DimVector]:
        """All positive roots of the Tits form (Dynkin quivers only)."""
        if self._roots_cache is None:
            if not self.is_representation_finite():
                raise InternalCheckError("positive_roots requested for non-Dynkin quiver")
            # root coefficients of ADE diagrams are bounded by 6
            roots = []
            for d in itertools.product(range(7), repeat=self.n):
                if any(d) and self.tits_form(d) == 1:
                    roots.append(d)
            self._roots_cache = roots
        return list(self._roots_cache)

    def flip_at(self, vi: int) -> "Quiver":
        """Reverse every arrow incident to vertex index vi (reflection step)."""
        arrows = [
            Arrow(a.id, a.tgt, a.src)
            if self.vindex[a.src] == vi or self.vindex[a.tgt] == vi
            else a
            for a in self.arrows
        ]
        return Quiver(self.name, self.vertices, arrows)

    def same_shape(self, other: "Quiver") -> bool:
        return self.vertices == other.vertices and {
            (a.id, a.src, a.tgt) for a in self.arrows
        } == {(a.id, a.src, a.tgt) for a in other.arrows}

    def __repr__(self) -> str:
        return f"Quiver({self.name}: {self.n} vertices, {len(self.arrows)} arrows)"


def _int_det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    det = 0
    for j in range(n):
        if m[0][j]:
            minor = [row[:j] + row[j + 1 :] for row in m[1:]]
            det += (-1) ** j * m[0][j] * _int_det(minor)
    return det


def parse_quiver(text: str) -> Quiver:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"quiver document is not valid JSON: {exc}") from exc
    return Quiver.from_dict(doc)


class Representation:
    """Per-vertex dimensions plus a matrix per arrow (tgt-dim x src-dim)."""

    __slots__ = ("quiver", "field", "dims", "maps")

    def __init__(self, quiver: Quiver, field: FieldSpec, dims: DimVector, maps: Sequence[Matrix]):
        if len(dims) != quiver.n or len(maps) != len(quiver.arrows):
            raise ValueError("dims/maps length mismatch")
        for a, m in zip(quiver.arrows, maps):
            if m.rows != dims[quiver.vindex[a.tgt]] or m.cols != dims[quiver.vindex[a.src]]:
                raise ValueError(f"arrow {a.id}: matrix shape {m.rows}x{m.cols} does not match dims")
        self.quiver = quiver
        self.field = field
        self.dims = tuple(dims)
        self.maps = tuple(maps)

    @classmethod
    def zero(cls, quiver: Quiver, field: FieldSpec) -> "Representation":
        dims = (0,) * quiver.n
        return cls(quiver, field, dims, [Matrix.zeros(field, 0, 0) for _ in quiver.arrows])

    @classmethod
    def simple(cls, quiver: Quiver, field: FieldSpec, vertex: str) -> "Representation":
        vi = quiver.vindex[vertex]
        dims = tuple(1 if i == vi else 0 for i in range(quiver.n))
        maps = []
        for a in quiver.arrows:
            maps.append(Matrix.zeros(field, dims[quiver.vindex[a.tgt]], dims[quiver.vindex[a.src]]))
        return cls(quiver, field, dims, maps)

    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim() == 0

    def key(self) -> tuple:
        return (self.dims, tuple(m.data for m in self.maps))

    def __eq__(self, other) -> bool:
        return isinstance(other, Representation) and other.key() == self.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Rep{self.dims}"


def direct_sum(parts: Sequence[Representation], quiver: Quiver, field: FieldSpec) -> Representation:
    parts = list(parts)
    if not parts:
        return Representation.zero(quiver, field)
    if any(p.field.q != field.q for p in parts):
        raise ConfigError("field mismatch in direct sum")
    dims = tuple(sum(p.dims[i] for p in parts) for i in range(quiver.n))
    maps = [block_diag(field, [p.maps[k] for p in parts]) for k in range(len(quiver.arrows))]
    return Representation(quiver, field, dims, maps)


class Morphism:
    """Vertex-wise linear maps intertwining the arrow actions."""

    __slots__ = ("source", "target", "maps")

    def __init__(self, source: Representation, target: Representation, maps: Sequence[Matrix]):
        self.source = source
        self.target = target
        self.maps = tuple(maps)

    def validate(self) -> None:
        q = self.source.quiver
        for k, a in enumerate(q.arrows):
            i, j = q.vindex[a.src], q.vindex[a.tgt]
            if self.maps[j] @ self.source.maps[k] != self.target.maps[k] @ self.maps[i]:
                raise InternalCheckError(f"intertwining law fails at arrow {a.id}")

    @classmethod
    def zero(cls, source: Representation, target: Representation) -> "Morphism":
        f = source.field
        return cls(source, target, [Matrix.zeros(f, dt, ds) for ds, dt in zip(source.dims, target.dims)])

    @classmethod
    def identity(cls, rep: Representation) -> "Morphism":
        return cls(rep, rep, [Matrix.identity(rep.field, d) for d in rep.dims])

    def __matmul__(self, other: "Morphism") -> "Morphism":
        """Composition self o other."""
        return Morphism(other.source, self.target, [a @ b for a, b in zip(self.maps, other.maps)])

    def __add__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target, [a + b for a, b in zip(self.maps, other.maps)])

    def __neg__(self) -> "Morphism":
        return Morphism(self.source, self.target, [-a for a in self.maps])

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + (-other)

    def scale(self, c: int) -> "Morphism":
        return Morphism(self.source, self.target, [m.scale(c) for m in self.maps])

    def axpy(self, c: int, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target, [a.axpy(c, b) for a, b in zip(self.maps, other.maps)])

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.maps)

    def is_injective(self) -> bool:
        return all(m.rank() == m.cols for m in self.maps)

    def is_surjective(self) -> bool:
        return all(m.rank() == m.rows for m in self.maps)

    def is_iso(self) -> bool:
        return all(m.rows == m.cols and m.rank() == m.rows for m in self.maps)

    def data_key(self) -> tuple:
        return tuple(m.data for m in self.maps)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Morphism)
            and other.source.dims == self.source.dims
            and other.target.dims == self.target.dims
            and other.data_key() == self.data_key()
        )

    def __hash__(self) -> int:
        return hash(self.data_key())


def hom_basis(m: Representation, n: Representation) -> list[Morphism]:
    """Basis of Hom(m, n): the solution space of the intertwining equations."""
    if m.field.q != n.field.q:
        raise ConfigError("field mismatch in hom_basis")
    quiver = m.quiver
    f = m.field
    offsets = []
    total = 0
    for v in range(quiver.n):
        offsets.append(total)
        total += n.dims[v] * m.dims[v]
    rows = []
    for k, a in enumerate(quiver.arrows):
        i, j = quiver.vindex[a.src], quiver.vindex[a.tgt]
        ma, na = m.maps[k], n.maps[k]
        for r in range(n.dims[j]):
            for c in range(m.dims[i]):
                row = bytearray(total)
                # (f_j @ ma)[r,c] contributes ma[s,c] * f_j[r,s]
                base_j = offsets[j] + r * m.dims[j]
                for s in range(m.dims[j]):
                    row[base_j + s] = f.add_table[row[base_j + s] * f.q + ma.entry(s, c)]
                # -(na @ f_i)[r,c] contributes -na[r,t] * f_i[t,c]
                for t in range(n.dims[i]):
                    idx = offsets[i] + t * m.dims[i] + c
                    row[idx] = f.add_table[row[idx] * f.q + f.neg_table[na.entry(r, t)]]
                rows.append(bytes(row))
    if rows:
        system = Matrix(f, len(rows), total, b"".join(rows))
        kb = system.kernel_basis()
    else:
        kb = Matrix.identity(f, total)
    basis = []
    for col in range(kb.cols):
        maps = []
        for v in range(quiver.n):
            sz = n.dims[v] * m.dims[v]
            data = bytes(kb.entry(offsets[v] + t, col) for t in range(sz))
            maps.append(Matrix(f, n.dims[v], m.dims[v], data))
        basis.append(Morphism(m, n, maps))
    return basis


def hom_dim(m: Representation, n: Representation) -> int:
    return len(hom_basis(m, n))


def iter_morphism_span(basis: Sequence[Morphism]) -> Iterator[tuple[tuple[int, ...], Morphism]]:
    """All F_q-combinations of a morphism basis, amortized one axpy per step."""
    if not basis:
        return
    f = basis[0].source.field
    q = f.q
    zero = Morphism.zero(basis[0].source, basis[0].target)

    def rec(i: int, acc: Morphism, coeffs: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], Morphism]]:
        if i == len(basis):
            yield coeffs, acc
            return
        yield from rec(i + 1, acc, coeffs + (0,))
        for c in range(1, q):
            yield from rec(i + 1, basis[i].axpy(c, acc), coeffs + (c,))

    yield from rec(0, zero, ())


def morphism_from_coords(basis: Sequence[Morphism], coords: Sequence[int], zero: Morphism) -> Morphism:
    acc = zero
    for c, b in zip(coords, basis):
        if c:
            acc = b.axpy(c, acc)
    return acc


def kernel_cokernel(f: Morphism) -> tuple[Representation, Morphism, Representation, Morphism]:
    """(kernel, inclusion, cokernel, projection) of a morphism."""
    m, n = f.source, f.target
    quiver, fld = m.quiver, m.field
    kdims, incl_mats = [], []
    for v in range(quiver.n):
        kb = f.maps[v].kernel_basis()
        kdims.append(kb.cols)
        incl_mats.append(kb)
    kmaps = []
    for k, a in enumerate(quiver.arrows):
        i, j = quiver.vindex[a.src], quiver.vindex[a.tgt]
        rhs = m.maps[k] @ incl_mats[i]
        sol = incl_mats[j].solve(rhs)
        if sol is None:
            raise InternalCheckError("kernel is not arrow-stable")
        kmaps.append(sol)
    ker = Representation(quiver, fld, tuple(kdims), kmaps)
    incl = Morphism(ker, m, incl_mats)

    cdims, proj_mats, sect_mats = [], [], []
    for v in range(quiver.n):
        img = f.maps[v].column_space_basis()
        ident = Matrix.identity(fld, n.dims[v])
        ext = complete_basis(img, ident)
        sect = ident.take_cols(ext)
        sq = hstack([img, sect]) if img.cols + sect.cols else Matrix.zeros(fld, n.dims[v], 0)
        inv = sq.inverse() if sq.rows else Matrix.zeros(fld, 0, 0)
        proj = inv.take_rows(range(img.cols, n.dims[v])) if n.dims[v] else Matrix.zeros(fld, 0, 0)
        cdims.append(len(ext))
        proj_mats.append(proj)
        sect_mats.append(sect)
    cmaps = []
    for k, a in enumerate(quiver.arrows):
        i, j = quiver.vindex[a.src], quiver.vindex[a.tgt]
        cmaps.append(proj_mats[j] @ n.maps[k] @ sect_mats[i])
    coker = Representation(quiver, fld, tuple(cdims), cmaps)
    proj = Morphism(n, coker, proj_mats)
    return ker, incl, coker, proj


def image_subrep(f: Morphism) -> tuple[Representation, Morphism]:
    """(image, inclusion into the target)."""
    n = f.target
    quiver, fld = n.quiver, n.field
    incl_mats = [f.maps[v].column_space_basis() for v in range(quiver.n)]
    dims = tuple(m.cols for m in incl_mats)
    maps = []
    for k, a in enumerate(quiver.arrows):
        i, j = quiver.vindex[a.src], quiver.vindex[a.tgt]
        sol = incl_mats[j].solve(n.maps[k] @ incl_mats[i])
        if sol is None:
            raise InternalCheckError("image is not arrow-stable")
        maps.append(sol)
    img = Representation(quiver, fld, dims, maps)
    return img, Morphism(img, n, incl_mats)


# -- projectives and the standard presentation --------------------------------


class ProjSum:
    """Direct sum of indecomposable projectives P(v) with explicit path bases.

    `summands` lists base vertices; the vertex space at w concatenates, per
    summand, the paths from its base vertex to w (trivial path first).
    """

    def __init__(self, quiver: Quiver, field: FieldSpec, summands: Sequence[str]):
        self.quiver = quiver
        self.field = field
        self.summands = tuple(summands)
        paths = [_paths_from(quiver, v) for v in self.summands]
        self.paths = paths
        dims = []
        offsets = []  # offsets[w][s] = column offset of summand s at vertex w
        for w in range(quiver.n):
            off, total = [], 0
            for s in range(len(self.summands)):
                off.append(total)
                total += len(paths[s][w])
            offsets.append(off)
            dims.append(total)
        self.offsets = offsets
        maps = []
        for k, a in enumerate(quiver.arrows):
            i, j = quiver.vindex[a.src], quiver.vindex[a.tgt]
            mat = bytearray(dims[j] * dims[i])
            for s in range(len(self.summands)):
                base_i = offsets[i][s]
                base_j = offsets[j][s]
                index_j = {p: t for t, p in enumerate(paths[s][j])}
                for c, p in enumerate(paths[s][i]):
                    r = index_j[p + (k,)]
                    mat[(base_j + r) * dims[i] + (base_i + c)] = 1
            maps.append(Matrix(field, dims[j], dims[i], bytes(mat)))
        self.rep = Representation(quiver, field, tuple(dims), maps)

    def top_coordinate(self, s: int) -> tuple[int, int]:
        """(vertex index, coordinate) of the trivial path of summand s."""
        v = self.quiver.vindex[self.summands[s]]
        return v, self.offsets[v][s]

    def path_index(self, s: int, w: int, path: tuple[int, ...]) -> int:
        return self.offsets[w][s] + self.paths[s][w].index(path)


def _paths_from(quiver: Quiver, v: str) -> list[list[tuple[int, ...]]]:
    """Per-vertex lists of paths starting at v (as arrow-index tuples), BFS order."""
    out: list[list[tuple[int, ...]]] = [[] for _ in range(quiver.n)]
    vi = quiver.vindex[v]
    queue: list[tuple[int, tuple[int, ...]]] = [(vi, ())]
    while queue:
        w, path = queue.pop(0)
        out[w].append(path)
        for k in quiver.out_arrows[w]:
            queue.append((quiver.vindex[quiver.arrows[k].tgt], path + (k,)))
    return out


def projective(quiver: Quiver, field: FieldSpec, vertex: str) -> Representation:
    return ProjSum(quiver, field, [vertex]).rep


def standard_presentation(m: Representation) -> tuple[ProjSum, ProjSum, Morphism]:
    """Projective presentation 0 -> P1 -d-> P0 -> m -> 0 (hereditary, functorial).

    P0 = sum_v P(v)^{m_v}, P1 = sum_{a: i->j} P(j)^{m_i};
    d sends (path p, basis vector t of M_i) at the a-summand to
    sum_s M_a[s,t] * p  (in copy s at vertex j)  minus  p.a (in copy t at vertex i).
    """
    quiver, field = m.quiver, m.field
    p0_summands, p0_copy = [], {}
    for v in range(quiver.n):
        for t in range(m.dims[v]):
            p0_copy[(v, t)] = len(p0_summands)
            p0_summands.append(quiver.vertices[v])
    p1_summands, p1_desc = [], []
    for k, a in enumerate(quiver.arrows):
        i = quiver.vindex[a.src]
        for t in range(m.dims[i]):
            p1_desc.append((k, t))
            p1_summands.append(a.tgt)
    p0 = ProjSum(quiver, field, p0_summands)
    p1 = ProjSum(quiver, field, p1_summands)
    f = field
    mats = []
    for w in range(quiver.n):
        rows, cols = p0.rep.dims[w], p1.rep.dims[w]
        mat = bytearray(rows * cols)
        for s1, (k, t) in enumerate(p1_desc):
            a = quiver.arrows[k]
            i, j = quiver.vindex[a.src], quiver.vindex[a.tgt]
            ma = m.maps[k]
            for pnum, path in enumerate(p1.paths[s1][w]):
                col = p1.offsets[w][s1] + pnum
                for s in range(m.dims[j]):
                    coef = ma.entry(s, t)
                    if coef:
                        row = p0.path_index(p0_copy[(j, s)], w, path)
                        mat[row * cols + col] = f.add_table[mat[row * cols + col] * f.q + coef]
                row = p0.path_index(p0_copy[(i, t)], w, (k,) + path)
                mat[row * cols + col] = f.add_table[mat[row * cols + col] * f.q + f.neg_table[1]]
        mats.append(Matrix(f, rows, cols, bytes(mat)))
    d = Morphism(p1.rep, p0.rep, mats)
    return p0, p1, d


def presentation_cover(m: Representation, p0: ProjSum, p0_copy_order: None = None) -> Morphism:
    """The counit map P0 -> m of the standard presentation."""
    quiver, field = m.quiver, m.field
    # copies are enumerated exactly as in standard_presentation
    copies = [(v, t) for v in range(quiver.n) for t in range(m.dims[v])]
    mats = []
    for w in range(quiver.n):
        rows, cols = m.dims[w], p0.rep.dims[w]
        mat = bytearray(rows * cols)
        for s, (v, t) in enumerate(copies):
            for pnum, path in enumerate(p0.paths[s][w]):
                col = p0.offsets[w][s] + pnum
                vec = _apply_path(m, path, v, t)
                for r, coef in enumerate(vec):
                    if coef:
                        mat[r * cols + col] = field.add_table[mat[r * cols + col] * field.q + coef]
        mats.append(Matrix(field, rows, cols, bytes(mat)))
    return Morphism(p0.rep, m, mats)


def _apply_path(m: Representation, path: tuple[int, ...], v: int, t: int) -> list[int]:
    f = m.field
    vec = Matrix(f, m.dims[v], 1, bytes(1 if i == t else 0 for i in range(m.dims[v])))
    for k in path:
        vec = m.maps[k] @ vec
    return list(vec.data)


def ext_dim_resolution(m: Representation, n: Representation) -> int:
    """dim Ext^1(m, n) via the standard presentation (independent of the Euler form)."""
    _, p1, d = standard_presentation(m)
    p0rep = d.target
    b0 = hom_basis(p0rep, n)
    b1 = hom_basis(p1rep := p1.rep, n)
    if not b1:
        return 0
    flat = []
    for phi in b0:
        comp = phi @ d
        flat.append(b"".join(mm.data for mm in comp.maps))
    total = sum(n.dims[v] * p1rep.dims[v] for v in range(m.quiver.n))
    img = Matrix(m.field, len(flat), total, b"".join(flat)) if flat else Matrix.zeros(m.field, 0, total)
    return len(b1) - img.rank()


def euler_and_ext(m: Representation, n: Representation) -> tuple[int, int]:
    """(Euler form <dim m, dim n>, dim Ext^1(m,n)); hereditary identity."""
    if m.quiver is not n.quiver and not m.quiver.same_shape(n.quiver):
        raise ConfigError("different quivers")
    form = m.quiver.euler_form(m.dims, n.dims)
    ext = hom_dim(m, n) - form
    if ext < 0:
        raise InternalCheckError("negative Ext dimension; Hom computation inconsistent")
    return form, ext


# -- reflection functors -------------------------------------------------------


def reflect_source(m: Representation, vi: int) -> Representation:
    """BGP reflection at a source vertex; result lives over the flipped quiver."""
    quiver, field = m.quiver, m.field
    if quiver.in_arrows[vi]:
        raise InternalCheckError("reflect_source at a non-source vertex")
    out = quiver.out_arrows[vi]
    flipped = quiver.flip_at(vi)
    if not out:
        # isolated vertex: reflection kills the vertex component
        dims = tuple(0 if i == vi else d for i, d in enumerate(m.dims))
        maps = []
        for k, a in enumerate(flipped.arrows):
            i, j = flipped.vindex[a.src], flipped.vindex[a.tgt]
            maps.append(Matrix.zeros(field, dims[j], dims[i]) if 0 in (dims[i], dims[j]) else m.maps[k])
        return Representation(flipped, field, dims, maps)
    stacked = vstack([m.maps[k] for k in out])
    img = stacked.column_space_basis()
    ident = Matrix.identity(field, stacked.rows)
    ext = complete_basis(img, ident)
    sect = ident.take_cols(ext)
    sq = hstack([img, sect])
    proj = sq.inverse().take_rows(range(img.cols, stacked.rows)) if stacked.rows else Matrix.zeros(field, 0, 0)
    new_dim_v = len(ext)
    offs = {}
    run = 0
    for k in out:
        offs[k] = run
        run += m.dims[quiver.vindex[quiver.arrows[k].tgt]]
    dims = tuple(new_dim_v if i == vi else d for i, d in enumerate(m.dims))
    maps = []
    for k, a in enumerate(flipped.arrows):
        if k in offs:  # reversed arrow, now tgt == vi
            j = quiver.vindex[quiver.arrows[k].tgt]
            maps.append(proj.take_cols(range(offs[k], offs[k] + m.dims[j])))
        else:
            maps.append(m.maps[k])
    return Representation(flipped, field, dims, maps)


def coxeter_minus(m: Representation) -> Representation:
    """Inverse Coxeter functor: reflect at sources along a topological order."""
    original = m.quiver
    cur = m
    for vi in original.topo_order:
        cur = reflect_source(cur, vi)
    if not cur.quiver.same_shape(original):
        raise InternalCheckError("Coxeter pass did not return to the original orientation")
    return Representation(original, m.field, cur.dims, cur.maps)


# -- endomorphism data ---------------------------------------------------------


@dataclass(frozen=True)
class EndData:
    end_dim: int
    rad_dim: int
    aut_order: int
    d: int | None  # dim End/rad, reported for indecomposables only


def gl_order(m: int, size: int) -> int:
    out = 1
    for i in range(m):
        out *= size**m - size**i
    return out


def end_data(m: Representation, enum_cap: int = 1 << 17, registry: "ModuleRegistry | None" = None) -> EndData:
    """Exact End/Aut data via unit counting.

    Enumerates End(m) when q^dim is under the cap (asserting the local
    structure when m turns out indecomposable); otherwise falls back to the
    Krull-Schmidt unit-count through a registry decomposition.
    """
    if m.is_zero():
        raise ConfigError("end_data of the zero representation")
    f = m.field
    basis = hom_basis(m, m)
    e = len(basis)
    if f.q**e <= enum_cap:
        nonunit_flat = []
        units = 0
        total_dim = m.total_dim()
        for coeffs, phi in iter_morphism_span(basis):
            if phi.is_iso():
                units += 1
            else:
                nonunit_flat.append(bytes(coeffs))
        span = Matrix(f, len(nonunit_flat), e, b"".join(nonunit_flat)) if e else Matrix.zeros(f, len(nonunit_flat), 0)
        r = span.rank()
        local = len(nonunit_flat) == f.q**r
        if local:
            # for a local End ring all non-units must be nilpotent
            for coeffs in nonunit_flat:
                phi = morphism_from_coords(basis, coeffs, Morphism.zero(m, m))
                power = phi
                for _ in range(max(total_dim, 1)):
                    power = power @ phi
                if not power.is_zero():
                    raise InternalCheckError("non-invertible endomorphism is not nilpotent")
            d = e - r
            if units != f.q**r * (f.q**d - 1):
                raise InternalCheckError("unit count disagrees with q^r(q^d - 1)")
            return EndData(end_dim=e, rad_dim=r, aut_order=units, d=d)
        if registry is None:
            raise BudgetExceededError("decomposable module needs a registry for structured End data")
        cls = registry.decompose(m)
        return _end_data_from_class(registry, cls, e)
    if registry is None:
        raise BudgetExceededError(f"End enumeration of size q^{e} exceeds the cap and no registry given")
    cls = registry.decompose(m)
    return _end_data_from_class(registry, cls, e)


def _end_data_from_class(registry: "ModuleRegistry", cls: tuple, e: int) -> EndData:
    f = registry.field
    if len(cls) == 1 and cls[0][1] == 1:
        raise BudgetExceededError("indecomposable End algebra exceeds the enumeration cap")
    semis = sum(registry.end[i].d * mult * mult for i, mult in cls)
    r = e - semis
    aut = f.q**r
    for i, mult in cls:
        aut *= gl_order(mult, f.q ** registry.end[i].d)
    return EndData(end_dim=e, rad_dim=r, aut_order=aut, d=None)


# -- indecomposable registry ---------------------------------------------------

ModuleClass = tuple[tuple[int, int], ...]  # sorted ((registry index, multiplicity), ...)

ZERO_CLASS: ModuleClass = ()


class ModuleRegistry:
    """Representatives of the indecomposables with dims <= bound, plus class algebra."""

    def __init__(
        self,
        quiver: Quiver,
        field: FieldSpec,
        bound: DimVector,
        enum_budget: int = 5_000_000,
        end_cap: int = 1 << 17,
    ):
        if len(bound) != quiver.n or any(b < 0 for b in bound):
            raise ConfigError("bad dimension bound")
        self.quiver = quiver
        self.field = field
        self.bound = tuple(bound)
        self.enum_budget = enum_budget
        self.end_cap = end_cap
        self.is_dynkin = quiver.is_representation_finite()
        if self.is_dynkin:
            reps = _enumerate_dynkin(quiver, field, self.bound)
        else:
            reps = _enumerate_brute(quiver, field, self.bound, enum_budget, end_cap)
        reps.sort(key=lambda r: (r.total_dim(), r.dims, tuple(mm.data for mm in r.maps)))
        self.ind = tuple(reps)
        self.dim_vectors = [r.dims for r in self.ind]
        self.hom_mat = [[hom_dim(a, b) for b in self.ind] for a in self.ind]
        self.end = [end_data(r, end_cap) for r in self.ind]
        for i, r in enumerate(self.ind):
            if self.end[i].d is None:
                raise InternalCheckError(f"registry entry {i} is not indecomposable")
        self._directed_order = self._compute_directed_order()
        self._fingerprints = {}
        for i in range(len(self.ind)):
            fp = tuple(self.hom_mat[j][i] for j in range(len(self.ind)))
            if fp in self._fingerprints:
                raise InternalCheckError("indecomposables share a Hom fingerprint")
            self._fingerprints[fp] = i
        self._rep_cache: dict[ModuleClass, Representation] = {}
        self._classes_by_total: dict[int, list[ModuleClass]] = {}

    # -- registry construction helpers --

    def _compute_directed_order(self) -> list[int] | None:
        n = len(self.ind)
        indeg = [0] * n
        succ = [[] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if i != j and self.hom_mat[i][j] > 0:
                    succ[i].append(j)
                    indeg[j] += 1
        order, ready = [], sorted(i for i in range(n) if indeg[i] == 0)
        while ready:
            v = ready.pop(0)
            order.append(v)
            for w in succ[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
            ready.sort()
        return order if len(order) == n else None

    # -- class utilities --

    def class_of_ind(self, i: int) -> ModuleClass:
        return ((i, 1),)

    def class_dims(self, cls: ModuleClass) -> DimVector:
        dims = [0] * self.quiver.n
        for i, mult in cls:
            for v, d in enumerate(self.dim_vectors[i]):
                dims[v] += d * mult
        return tuple(dims)

    def class_total_dim(self, cls: ModuleClass) -> int:
        return sum(self.dim_vectors[i][v] * mult for i, mult in cls for v in range(self.quiver.n))

    def build_rep(self, cls: ModuleClass) -> Representation:
        cls = tuple(sorted(cls))
        if cls not in self._rep_cache:
            parts = []
            for i, mult in cls:
                parts.extend([self.ind[i]] * mult)
            self._rep_cache[cls] = direct_sum(parts, self.quiver, self.field)
        return self._rep_cache[cls]

    def class_aut_order(self, cls: ModuleClass) -> int:
        if not cls:
            return 1
        e = 0
        for i, mi in cls:
            for j, mj in cls:
                e += mi * mj * self.hom_mat[i][j]
        semis = sum(self.end[i].d * mult * mult for i, mult in cls)
        aut = self.field.q ** (e - semis)
        for i, mult in cls:
            aut *= gl_order(mult, self.field.q ** self.end[i].d)
        return aut

    def class_hom_dim(self, a: ModuleClass, b: ModuleClass) -> int:
        return sum(ma * mb * self.hom_mat[i][j] for i, ma in a for j, mb in b)

    def classes_with_total_dim(self, total: int) -> list[ModuleClass]:
        """All iso classes (as multisets of indecomposables) of the given total dimension."""
        if total not in self._classes_by_total:
            out: list[ModuleClass] = []

            def rec(start: int, remaining: int, acc: list[tuple[int, int]]):
                if remaining == 0:
                    out.append(tuple(acc))
                    return
                for i in range(start, len(self.ind)):
                    sz = sum(self.dim_vectors[i])
                    if sz <= remaining:
                        top = remaining // sz
                        for mult in range(1, top + 1):
                            acc.append((i, mult))
                            rec(i + 1, remaining - mult * sz, acc)
                            acc.pop()

            rec(0, total, [])
            out.sort()
            self._classes_by_total[total] = out
        return list(self._classes_by_total[total])

    def classes_with_dims(self, dims: DimVector) -> list[ModuleClass]:
        return [c for c in self.classes_with_total_dim(sum(dims)) if self.class_dims(c) == dims]

    def _check_cover(self, dims: DimVector) -> None:
        """Every possible indecomposable summand under `dims` must be in the registry."""
        if self.is_dynkin:
            for root in self.quiver.positive_roots():
                if all(r <= d for r, d in zip(root, dims)) and not all(
                    r <= b for r, b in zip(root, self.bound)
                ):
                    raise BoundExceededError(
                        f"decomposition may involve the class of dimension {root}, outside bound {self.bound}"
                    )
        else:
            if not all(d <= b for d, b in zip(dims, self.bound)):
                raise BoundExceededError(
                    f"cannot decompose dims {dims}: registry bound is {self.bound}"
                )

    def decompose(self, m: Representation) -> ModuleClass:
        """Multiset of registry indices with direct sum isomorphic to m."""
        if m.is_zero():
            return ZERO_CLASS
        self._check_cover(m.dims)
        if self._directed_order is not None:
            return self._decompose_directed(m)
        return self._decompose_idempotents(m)

    def _decompose_directed(self, m: Representation) -> ModuleClass:
        n = len(self.ind)
        b = [hom_dim(self.ind[i], m) for i in range(n)]
        order = self._directed_order
        mult = [0] * n
        for s in range(n - 1, -1, -1):
            i = order[s]
            acc = b[i]
            for t in range(s + 1, n):
                j = order[t]
                acc -= self.hom_mat[i][j] * mult[j]
            d = self.hom_mat[i][i]
            if acc % d:
                raise InternalCheckError("non-integral multiplicity in Hom-fingerprint solve")
            mult[i] = acc // d
            if mult[i] < 0:
                raise InternalCheckError("negative multiplicity in Hom-fingerprint solve")
        for i in range(n):
            if sum(self.hom_mat[i][j] * mult[j] for j in range(n)) != b[i]:
                raise InternalCheckError("Hom-fingerprint system inconsistent")
        dims = [0] * self.quiver.n
        for i in range(n):
            for v in range(self.quiver.n):
                dims[v] += self.dim_vectors[i][v] * mult[i]
        if tuple(dims) != m.dims:
            raise InternalCheckError("decomposition does not match the dimension vector")
        return tuple((i, mult[i]) for i in range(n) if mult[i])

    def _decompose_idempotents(self, m: Representation) -> ModuleClass:
        basis = hom_basis(m, m)
        e = len(basis)
        if self.field.q**e > self.end_cap:
            raise BudgetExceededError(f"idempotent search over q^{e} endomorphisms exceeds the cap")
        ident = Morphism.identity(m)
        for _, phi in iter_morphism_span(basis):
            if phi.is_zero():
                continue
            if (phi @ phi).data_key() == phi.data_key() and phi.data_key() != ident.data_key():
                part1, _ = image_subrep(phi)
                part2, _ = image_subrep(ident - phi)
                return _merge_classes(self._decompose_idempotents(part1), self._decompose_idempotents(part2))
        fp = tuple(hom_dim(self.ind[j], m) for j in range(len(self.ind)))
        if fp not in self._fingerprints:
            raise BoundExceededError("indecomposable summand not present in the registry")
        return ((self._fingerprints[fp], 1),)

    def is_isomorphic(self, m: Representation, n: Representation) -> bool:
        if m.field.q != n.field.q:
            raise ConfigError("field mismatch")
        return self.decompose(m) == self.decompose(n)


def _merge_classes(a: ModuleClass, b: ModuleClass) -> ModuleClass:
    counts: dict[int, int] = {}
    for i, mult in itertools.chain(a, b):
        counts[i] = counts.get(i, 0) + mult
    return tuple(sorted(counts.items()))


def class_to_str(cls: ModuleClass) -> str:
    if not cls:
        return "0"
    return "+".join(f"{i}*{mult}" for i, mult in cls)


def class_from_str(text: str) -> ModuleClass:
    if text == "0":
        return ZERO_CLASS
    parts = []
    for tok in text.split("+"):
        i, mult = tok.split("*")
        parts.append((int(i), int(mult)))
    return tuple(sorted(parts))


def _enumerate_dynkin(quiver: Quiver, field: FieldSpec, bound: DimVector) -> list[Representation]:
    reps = []
    for v in quiver.vertices:
        m = projective(quiver, field, v)
        guard = 0
        while not m.is_zero():
            reps.append(m)
            m = coxeter_minus(m)
            guard += 1
            if guard > 10_000:
                raise InternalCheckError("Coxeter chain did not terminate")
    reps = [r for r in reps if all(d <= b for d, b in zip(r.dims, bound))]
    roots = [r for r in quiver.positive_roots() if all(x <= b for x, b in zip(r, bound))]
    if sorted(r.dims for r in reps) != sorted(roots):
        raise InternalCheckError("indecomposable count does not match the positive roots")
    return reps


def _gl_generators(field: FieldSpec, n: int) -> list[tuple[Matrix, Matrix]]:
    """(g, g^{-1}) pairs generating GL_n(F_q): transvections and scalings."""
    gens = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for c in range(1, field.q):
                g = bytearray(Matrix.identity(field, n).data)
                g[i * n + j] = c
                ginv = bytearray(Matrix.identity(field, n).data)
                ginv[i * n + j] = field.neg_table[c]
                gens.append((Matrix(field, n, n, bytes(g)), Matrix(field, n, n, bytes(ginv))))
    for i in range(n):
        for c in range(2, field.q):
            g = bytearray(Matrix.identity(field, n).data)
            g[i * n + i] = c
            ginv = bytearray(Matrix.identity(field, n).data)
            ginv[i * n + i] = field.inv_table[c]
            gens.append((Matrix(field, n, n, bytes(g)), Matrix(field, n, n, bytes(ginv))))
    return gens


def _enumerate_brute(
    quiver: Quiver, field: FieldSpec, bound: DimVector, budget: int, end_cap: int
) -> list[Representation]:
    reps: list[Representation] = []
    q = field.q
    spent = 0
    dim_ranges = [range(b + 1) for b in bound]
    for dims in itertools.product(*dim_ranges):
        if not any(dims):
            continue
        shapes = []
        esize = 0
        for a in quiver.arrows:
            r, c = dims[quiver.vindex[a.tgt]], dims[quiver.vindex[a.src]]
            shapes.append((r, c))
            esize += r * c
        count = q**esize
        spent += count
        if spent > budget:
            raise BudgetExceededError(
                f"brute-force enumeration needs {spent} > {budget} matrix tuples"
            )
        gens = []
        for v in range(quiver.n):
            if dims[v]:
                for g, ginv in _gl_generators(field, dims[v]):
                    gens.append((v, g, ginv))
        visited: set[bytes] = set()
        for flat in itertools.product(range(q), repeat=esize):
            key = bytes(flat)
            if key in visited:
                continue
            # new orbit: BFS closure under the base-change generators
            frontier = [key]
            visited.add(key)
            while frontier:
                cur = frontier.pop()
                mats = _unflatten(field, shapes, cur)
                for v, g, ginv in gens:
                    new_mats = []
                    for k, a in enumerate(quiver.arrows):
                        mmat = mats[k]
                        if quiver.vindex[a.tgt] == v:
                            mmat = g @ mmat
                        if quiver.vindex[a.src] == v:
                            mmat = mmat @ ginv
                        new_mats.append(mmat)
                    nkey = b"".join(mm.data for mm in new_mats)
                    if nkey not in visited:
                        visited.add(nkey)
                        frontier.append(nkey)
            rep = Representation(quiver, field, dims, _unflatten(field, shapes, key))
            if _is_indecomposable(rep, end_cap):
                reps.append(rep)
        del visited
    return reps


def _unflatten(field: FieldSpec, shapes: list[tuple[int, int]], flat: bytes) -> list[Matrix]:
    mats = []
    off = 0
    for r, c in shapes:
        mats.append(Matrix(field, r, c, bytes(flat[off : off + r * c])))
        off += r * c
    return mats


def _is_indecomposable(rep: Representation, end_cap: int) -> bool:
    basis = hom_basis(rep, rep)
    if rep.field.q ** len(basis) > end_cap:
        raise BudgetExceededError("End enumeration exceeds the cap in indecomposability test")
    ident = Morphism.identity(rep)
    for _, phi in iter_morphism_span(basis):
        if phi.is_zero() or phi.data_key() == ident.data_key():
            continue
        if (phi @ phi).data_key() == phi.data_key():
            return False
    return True
