"""A brute-forceable model of the 2-periodic root category.

Objects are Z/2-graded complexes of projective representations (two
projectives, square-zero differentials both ways); morphisms are chain maps
modulo homotopy.  The shift swaps the two halves and negates both
differentials, so T^2 is the identity on the nose.  Every counting set in
the triangle machinery becomes a finite set of matrix tuples.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .errors import BudgetExceededError, ConfigError
from .ffield import Matrix, block_diag, block_matrix, complete_basis, hstack
from .quiver_repr import (
    ModuleRegistry,
    Morphism,
    ProjSum,
    Representation,
    hom_basis as rep_hom_basis,
    kernel_cokernel,
    standard_presentation,
)

ObjClass = tuple[tuple[tuple[int, int], int], ...]  # (((module idx, parity), mult), ...)
GrothClass = tuple[int, ...]

ZERO_OBJ: ObjClass = ()


class TwoPeriodicComplex:
    """P0 <-> P1 with d0: P0 -> P1 and d1: P1 -> P0, both composites zero."""

    __slots__ = ("quiver", "field", "summands0", "summands1", "p0", "p1", "d0", "d1", "_key")

    def __init__(self, p0: ProjSum, p1: ProjSum, d0: Sequence, d1: Sequence, check: bool = True):
        self.quiver = p0.quiver
        self.field = p0.field
        self.p0 = p0
        self.p1 = p1
        self.summands0 = p0.summands
        self.summands1 = p1.summands
        self.d0 = tuple(d0)  # vertex matrices P0_v -> P1_v
        self.d1 = tuple(d1)
        self._key = None
        if check:
            for v in range(self.quiver.n):
                if self.d0[v].rows != p1.rep.dims[v] or self.d0[v].cols != p0.rep.dims[v]:
                    raise ValueError("d0 shape mismatch")
                if self.d1[v].rows != p0.rep.dims[v] or self.d1[v].cols != p1.rep.dims[v]:
                    raise ValueError("d1 shape mismatch")
            d0m = Morphism(p0.rep, p1.rep, self.d0)
            d1m = Morphism(p1.rep, p0.rep, self.d1)
            d0m.validate()
            d1m.validate()
            if not (d0m @ d1m).is_zero() or not (d1m @ d0m).is_zero():
                raise ValueError("differentials do not square to zero")

    def key(self) -> tuple:
        if self._key is None:
            self._key = (
                self.summands0,
                self.summands1,
                tuple(m.data for m in self.d0),
                tuple(m.data for m in self.d1),
            )
        return self._key

    def size(self) -> int:
        return len(self.summands0) + len(self.summands1)

    def is_zero_complex(self) -> bool:
        return self.size() == 0

    def __repr__(self) -> str:
        return f"Cx(P0={list(self.summands0)}, P1={list(self.summands1)})"


class ChainMap:
    """Degree-0 map of 2-periodic complexes (pair of representation morphisms)."""

    __slots__ = ("source", "target", "u0", "u1")

    def __init__(self, source: TwoPeriodicComplex, target: TwoPeriodicComplex, u0, u1):
        self.source = source
        self.target = target
        self.u0 = tuple(u0)
        self.u1 = tuple(u1)

    def validate(self) -> None:
        Morphism(self.source.p0.rep, self.target.p0.rep, self.u0).validate()
        Morphism(self.source.p1.rep, self.target.p1.rep, self.u1).validate()
        for v in range(self.source.quiver.n):
            if self.u1[v] @ self.source.d0[v] != self.target.d0[v] @ self.u0[v]:
                raise ValueError("chain condition (degree 0) fails")
            if self.u0[v] @ self.source.d1[v] != self.target.d1[v] @ self.u1[v]:
                raise ValueError("chain condition (degree 1) fails")

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self o other."""
        return ChainMap(
            other.source,
            self.target,
            [a @ b for a, b in zip(self.u0, other.u0)],
            [a @ b for a, b in zip(self.u1, other.u1)],
        )

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(
            self.source,
            self.target,
            [a + b for a, b in zip(self.u0, other.u0)],
            [a + b for a, b in zip(self.u1, other.u1)],
        )

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, [-a for a in self.u0], [-a for a in self.u1])

    def flat(self) -> bytes:
        return b"".join(m.data for m in self.u0) + b"".join(m.data for m in self.u1)

    @classmethod
    def zero(cls, source: TwoPeriodicComplex, target: TwoPeriodicComplex) -> "ChainMap":
        f = source.field
        u0 = [
            Matrix.zeros(f, target.p0.rep.dims[v], source.p0.rep.dims[v])
            for v in range(source.quiver.n)
        ]
        u1 = [
            Matrix.zeros(f, target.p1.rep.dims[v], source.p1.rep.dims[v])
            for v in range(source.quiver.n)
        ]
        return cls(source, target, u0, u1)

    @classmethod
    def identity(cls, a: TwoPeriodicComplex) -> "ChainMap":
        f = a.field
        return cls(
            a,
            a,
            [Matrix.identity(f, d) for d in a.p0.rep.dims],
            [Matrix.identity(f, d) for d in a.p1.rep.dims],
        )


class HomSpace:
    """Hom(A,B) in the homotopy category: chain maps modulo null-homotopic ones.

    Stores a basis of coset representatives plus a linear projector onto
    quotient coordinates, so composition and equality are plain linear algebra.
    """

    def __init__(self, a: TwoPeriodicComplex, b: TwoPeriodicComplex):
        self.a = a
        self.b = b
        f = a.field
        quiver = a.quiver
        nv = quiver.n
        self._shapes0 = [(b.p0.rep.dims[v], a.p0.rep.dims[v]) for v in range(nv)]
        self._shapes1 = [(b.p1.rep.dims[v], a.p1.rep.dims[v]) for v in range(nv)]
        sizes = [r * c for r, c in self._shapes0] + [r * c for r, c in self._shapes1]
        self._offsets = [0]
        for s in sizes:
            self._offsets.append(self._offsets[-1] + s)
        n_amb = self._offsets[-1]
        self.ambient_dim = n_amb

        rows: list[bytes] = []

        def add_linear_row(entries: dict[int, int]) -> None:
            row = bytearray(n_amb)
            for idx, coef in entries.items():
                row[idx] = f.add_table[row[idx] * f.q + coef]
            rows.append(bytes(row))

        def u0_index(v: int, r: int, c: int) -> int:
            return self._offsets[v] + r * self._shapes0[v][1] + c

        def u1_index(v: int, r: int, c: int) -> int:
            return self._offsets[nv + v] + r * self._shapes1[v][1] + c

        # intertwining constraints for u0 and u1
        for k, arw in enumerate(quiver.arrows):
            i, j = quiver.vindex[arw.src], quiver.vindex[arw.tgt]
            for deg, idxf, srep, trep in (
                (0, u0_index, a.p0.rep, b.p0.rep),
                (1, u1_index, a.p1.rep, b.p1.rep),
            ):
                ma, na = srep.maps[k], trep.maps[k]
                for r in range(trep.dims[j]):
                    for c in range(srep.dims[i]):
                        entries: dict[int, int] = {}
                        for s in range(srep.dims[j]):
                            coef = ma.entry(s, c)
                            if coef:
                                idx = idxf(j, r, s)
                                entries[idx] = f.add_table[entries.get(idx, 0) * f.q + coef]
                        for t in range(trep.dims[i]):
                            coef = f.neg_table[na.entry(r, t)]
                            if coef:
                                idx = idxf(i, t, c)
                                entries[idx] = f.add_table[entries.get(idx, 0) * f.q + coef]
                        if entries:
                            add_linear_row(entries)
        # chain squares: u1 d0a = d0b u0 and u0 d1a = d1b u1, per vertex
        for v in range(nv):
            d0a, d0b = a.d0[v], b.d0[v]
            for r in range(b.p1.rep.dims[v]):
                for c in range(a.p0.rep.dims[v]):
                    entries = {}
                    for s in range(a.p1.rep.dims[v]):
                        coef = d0a.entry(s, c)
                        if coef:
                            idx = u1_index(v, r, s)
                            entries[idx] = f.add_table[entries.get(idx, 0) * f.q + coef]
                    for t in range(b.p0.rep.dims[v]):
                        coef = f.neg_table[d0b.entry(r, t)]
                        if coef:
                            idx = u0_index(v, t, c)
                            entries[idx] = f.add_table[entries.get(idx, 0) * f.q + coef]
                    if entries:
                        add_linear_row(entries)
            d1a, d1b = a.d1[v], b.d1[v]
            for r in range(b.p0.rep.dims[v]):
                for c in range(a.p1.rep.dims[v]):
                    entries = {}
                    for s in range(a.p0.rep.dims[v]):
                        coef = d1a.entry(s, c)
                        if coef:
                            idx = u0_index(v, r, s)
                            entries[idx] = f.add_table[entries.get(idx, 0) * f.q + coef]
                    for t in range(b.p1.rep.dims[v]):
                        coef = f.neg_table[d1b.entry(r, t)]
                        if coef:
                            idx = u1_index(v, t, c)
                            entries[idx] = f.add_table[entries.get(idx, 0) * f.q + coef]
                    if entries:
                        add_linear_row(entries)

        if rows:
            zmat = Matrix(f, len(rows), n_amb, b"".join(rows)).kernel_basis()
        else:
            zmat = Matrix.identity(f, n_amb)
        self._zmat = zmat  # columns: basis of chain maps

        # null-homotopic subspace: u = d1b s0 + s1 d0a,  d0b s1 + s0 d1a
        s0_basis = rep_hom_basis(a.p0.rep, b.p1.rep)
        s1_basis = rep_hom_basis(a.p1.rep, b.p0.rep)
        hcols = []
        for s0 in s0_basis:
            u0 = [b.d1[v] @ s0.maps[v] for v in range(nv)]
            u1 = [s0.maps[v] @ a.d1[v] for v in range(nv)]
            hcols.append(b"".join(m.data for m in u0) + b"".join(m.data for m in u1))
        for s1 in s1_basis:
            u0 = [s1.maps[v] @ a.d0[v] for v in range(nv)]
            u1 = [b.d0[v] @ s1.maps[v] for v in range(nv)]
            hcols.append(b"".join(m.data for m in u0) + b"".join(m.data for m in u1))
        if hcols:
            hmat_t = Matrix(f, len(hcols), n_amb, b"".join(hcols))
            bmat = hmat_t.transpose().column_space_basis()
        else:
            bmat = Matrix.zeros(f, n_amb, 0)
        self._bmat = bmat

        ext = complete_basis(bmat, zmat)
        qmat = zmat.take_cols(ext)
        self.dim = qmat.cols
        self._qcols = [qmat.take_cols([i]).data for i in range(qmat.cols)]
        full = hstack([bmat, qmat]) if bmat.cols + qmat.cols else Matrix.zeros(f, n_amb, 0)
        if full.cols:
            _, prow_idx = full.transpose().rref()
            sub = full.take_rows(prow_idx)
            self._rows = prow_idx
            self._subinv = sub.inverse()
        else:
            self._rows = ()
            self._subinv = Matrix.zeros(f, 0, 0)
        self._bdim = bmat.cols
        self.basis = [self._unflatten(col) for col in self._qcols]

    def _unflatten(self, flat: bytes) -> ChainMap:
        f = self.a.field
        nv = self.a.quiver.n
        u0, u1 = [], []
        for v in range(nv):
            r, c = self._shapes0[v]
            off = self._offsets[v]
            u0.append(Matrix(f, r, c, bytes(flat[off : off + r * c])))
        for v in range(nv):
            r, c = self._shapes1[v]
            off = self._offsets[nv + v]
            u1.append(Matrix(f, r, c, bytes(flat[off : off + r * c])))
        return ChainMap(self.a, self.b, u0, u1)

    def project_flat(self, flat: bytes) -> bytes:
        """Quotient coordinates of a chain map given by its flattened data."""
        if self.dim == 0:
            return b""
        f = self.a.field
        vec = Matrix(f, len(self._rows), 1, bytes(flat[i] for i in self._rows))
        coords = self._subinv @ vec
        return coords.data[self._bdim :]

    def project(self, cm: ChainMap) -> bytes:
        return self.project_flat(cm.flat())

    def lift(self, coords: bytes) -> ChainMap:
        f = self.a.field
        flat = bytes(self.ambient_dim)
        from . import _kernels

        for c, col in zip(coords, self._qcols):
            if c:
                flat = _kernels.axpy(c, col, flat, f.mul_table, f.add_table, f.q)
        return self._unflatten(flat)

    def zero_coords(self) -> bytes:
        return bytes(self.dim)

    def all_coords(self):
        return (bytes(t) for t in itertools.product(range(self.a.field.q), repeat=self.dim))


def shift(a: TwoPeriodicComplex) -> TwoPeriodicComplex:
    return TwoPeriodicComplex(a.p1, a.p0, [-m for m in a.d1], [-m for m in a.d0], check=False)


def direct_sum_complex(parts: list[TwoPeriodicComplex], quiver, field) -> TwoPeriodicComplex:
    s0 = tuple(itertools.chain.from_iterable(p.summands0 for p in parts))
    s1 = tuple(itertools.chain.from_iterable(p.summands1 for p in parts))
    p0 = ProjSum(quiver, field, s0)
    p1 = ProjSum(quiver, field, s1)
    d0 = [block_diag(field, [p.d0[v] for p in parts]) for v in range(quiver.n)]
    d1 = [block_diag(field, [p.d1[v] for p in parts]) for v in range(quiver.n)]
    if not parts:
        d0 = [Matrix.zeros(field, 0, 0) for _ in range(quiver.n)]
        d1 = [Matrix.zeros(field, 0, 0) for _ in range(quiver.n)]
    return TwoPeriodicComplex(p0, p1, d0, d1, check=False)


def cone(f: ChainMap) -> tuple[TwoPeriodicComplex, ChainMap, ChainMap]:
    """Mapping cone C(f) of f: A -> B with the triangle maps B -> C(f) -> TA."""
    a, b = f.source, f.target
    quiver, field = a.quiver, a.field
    s0 = b.summands0 + a.summands1
    s1 = b.summands1 + a.summands0
    p0 = ProjSum(quiver, field, s0)
    p1 = ProjSum(quiver, field, s1)
    d0, d1 = [], []
    for v in range(quiver.n):
        d0.append(
            block_matrix(
                [
                    [b.d0[v], f.u1[v]],
                    [
                        Matrix.zeros(field, a.p0.rep.dims[v], b.p0.rep.dims[v]),
                        -a.d1[v],
                    ],
                ]
            )
        )
        d1.append(
            block_matrix(
                [
                    [b.d1[v], f.u0[v]],
                    [
                        Matrix.zeros(field, a.p1.rep.dims[v], b.p1.rep.dims[v]),
                        -a.d0[v],
                    ],
                ]
            )
        )
    c = TwoPeriodicComplex(p0, p1, d0, d1, check=False)
    ta = shift(a)
    incl = ChainMap(
        b,
        c,
        [
            block_matrix([[Matrix.identity(field, b.p0.rep.dims[v])], [Matrix.zeros(field, a.p1.rep.dims[v], b.p0.rep.dims[v])]])
            if b.p0.rep.dims[v] or a.p1.rep.dims[v]
            else Matrix.zeros(field, 0, 0)
            for v in range(quiver.n)
        ],
        [
            block_matrix([[Matrix.identity(field, b.p1.rep.dims[v])], [Matrix.zeros(field, a.p0.rep.dims[v], b.p1.rep.dims[v])]])
            if b.p1.rep.dims[v] or a.p0.rep.dims[v]
            else Matrix.zeros(field, 0, 0)
            for v in range(quiver.n)
        ],
    )
    proj = ChainMap(
        c,
        ta,
        [
            hcat_zero_identity(field, a.p1.rep.dims[v], b.p0.rep.dims[v])
            for v in range(quiver.n)
        ],
        [
            hcat_zero_identity(field, a.p0.rep.dims[v], b.p1.rep.dims[v])
            for v in range(quiver.n)
        ],
    )
    return c, incl, proj


def hcat_zero_identity(field, n: int, zcols: int) -> Matrix:
    from .ffield import hstack

    if n == 0:
        return Matrix.zeros(field, 0, zcols)
    return hstack([Matrix.zeros(field, n, zcols), Matrix.identity(field, n)])


def minimalize(a: TwoPeriodicComplex) -> TwoPeriodicComplex:
    """Strip contractible summands (identity components of the differentials)."""
    cur = a
    while True:
        step = _cancel_once(cur, use_d0=True)
        if step is None:
            step = _cancel_once(cur, use_d0=False)
        if step is None:
            return _sorted_complex(cur)
        cur = step


def _summand_col_ranges(ps: ProjSum, v: int) -> list[tuple[int, int]]:
    out = []
    for s in range(len(ps.summands)):
        start = ps.offsets[v][s]
        width = len(ps.paths[s][v])
        out.append((start, start + width))
    return out


def _cancel_once(a: TwoPeriodicComplex, use_d0: bool) -> TwoPeriodicComplex | None:
    quiver, field = a.quiver, a.field
    src_ps, tgt_ps = (a.p0, a.p1) if use_d0 else (a.p1, a.p0)
    d = a.d0 if use_d0 else a.d1
    for si, sv in enumerate(src_ps.summands):
        vi = quiver.vindex[sv]
        scol = src_ps.offsets[vi][si]
        for ti, tv in enumerate(tgt_ps.summands):
            if tv != sv:
                continue
            trow = tgt_ps.offsets[vi][ti]
            c = d[vi].entry(trow, scol)
            if c == 0:
                continue
            return _cancel_pair(a, use_d0, si, ti, c)
    return None


def _cancel_pair(a: TwoPeriodicComplex, use_d0: bool, si: int, ti: int, c: int) -> TwoPeriodicComplex:
    quiver, field = a.quiver, a.field
    cinv = field.inv_table[c]
    src_ps, tgt_ps = (a.p0, a.p1) if use_d0 else (a.p1, a.p0)
    d = a.d0 if use_d0 else a.d1
    other = a.d1 if use_d0 else a.d0
    new_src = tuple(s for k, s in enumerate(src_ps.summands) if k != si)
    new_tgt = tuple(s for k, s in enumerate(tgt_ps.summands) if k != ti)
    nsrc_ps = ProjSum(quiver, field, new_src)
    ntgt_ps = ProjSum(quiver, field, new_tgt)
    new_d, new_other = [], []
    for v in range(quiver.n):
        scr = _summand_col_ranges(src_ps, v)
        tcr = _summand_col_ranges(tgt_ps, v)
        s_keep = [j for k, (lo, hi) in enumerate(scr) if k != si for j in range(lo, hi)]
        s_cut = [j for j in range(*scr[si])]
        t_keep = [j for k, (lo, hi) in enumerate(tcr) if k != ti for j in range(lo, hi)]
        t_cut = [j for j in range(*tcr[ti])]
        dm = d[v]
        dd = dm.take_rows(t_keep).take_cols(s_keep)  # D block
        cb = dm.take_rows(t_keep).take_cols(s_cut)  # c' : S -> T'
        bb = dm.take_rows(t_cut).take_cols(s_keep)  # b  : S' -> T
        new_d.append(dd - (cb @ bb).scale(cinv))
        om = other[v]
        new_other.append(om.take_rows(s_keep).take_cols(t_keep))
    if use_d0:
        return TwoPeriodicComplex(nsrc_ps, ntgt_ps, new_d, new_other, check=False)
    return TwoPeriodicComplex(ntgt_ps, nsrc_ps, new_other, new_d, check=False)


def _sorted_complex(a: TwoPeriodicComplex) -> TwoPeriodicComplex:
    """Permute summands into sorted order (canonical form of minimal complexes)."""
    quiver, field = a.quiver, a.field
    perm0 = sorted(range(len(a.summands0)), key=lambda s: a.summands0[s])
    perm1 = sorted(range(len(a.summands1)), key=lambda s: a.summands1[s])
    if perm0 == list(range(len(perm0))) and perm1 == list(range(len(perm1))):
        return a
    new_p0 = ProjSum(quiver, field, tuple(a.summands0[s] for s in perm0))
    new_p1 = ProjSum(quiver, field, tuple(a.summands1[s] for s in perm1))
    d0, d1 = [], []
    for v in range(quiver.n):
        cols0 = [j for s in perm0 for j in range(*_summand_col_ranges(a.p0, v)[s])]
        cols1 = [j for s in perm1 for j in range(*_summand_col_ranges(a.p1, v)[s])]
        d0.append(a.d0[v].take_rows(cols1).take_cols(cols0))
        d1.append(a.d1[v].take_rows(cols0).take_cols(cols1))
    return TwoPeriodicComplex(new_p0, new_p1, d0, d1, check=False)


class RootContext:
    """Object registry and cached Hom machinery for the root-category model."""

    def __init__(self, registry: ModuleRegistry, size_budget: int = 6, hom_enum_cap: int = 1 << 17):
        self.mreg = registry
        self.quiver = registry.quiver
        self.field = registry.field
        self.size_budget = size_budget
        self.hom_enum_cap = hom_enum_cap
        self._hom_cache: dict[tuple, HomSpace] = {}
        self._embed_cache: dict[int, TwoPeriodicComplex] = {}
        self._object_cache: dict[ObjClass, TwoPeriodicComplex] = {}
        self.objects: list[tuple[int, int]] = [
            (i, p) for i in range(len(registry.ind)) for p in (0, 1)
        ]

    # -- objects ---------------------------------------------------------------

    def zero_complex(self) -> TwoPeriodicComplex:
        return direct_sum_complex([], self.quiver, self.field)

    def embed_rep(self, m: Representation) -> TwoPeriodicComplex:
        """Module as a complex: standard presentation wrapped 2-periodically."""
        p0, p1, d = standard_presentation(m)
        zero_up = [
            Matrix.zeros(self.field, p1.rep.dims[v], p0.rep.dims[v]) for v in range(self.quiver.n)
        ]
        cx = TwoPeriodicComplex(p0, p1, zero_up, d.maps, check=False)
        return minimalize(cx)

    def embed_ind(self, idx: int) -> TwoPeriodicComplex:
        if idx not in self._embed_cache:
            self._embed_cache[idx] = self.embed_rep(self.mreg.ind[idx])
        return self._embed_cache[idx]

    def object_complex(self, obj: tuple[int, int]) -> TwoPeriodicComplex:
        idx, parity = obj
        cx = self.embed_ind(idx)
        return shift(cx) if parity else cx

    def build_object(self, cls: ObjClass) -> TwoPeriodicComplex:
        cls = tuple(sorted(cls))
        if cls not in self._object_cache:
            parts = []
            for (idx, parity), mult in cls:
                parts.extend([self.object_complex((idx, parity))] * mult)
            self._object_cache[cls] = direct_sum_complex(parts, self.quiver, self.field)
        return self._object_cache[cls]

    # -- homology and classes ----------------------------------------------------

    def _homology_at(self, mid, out_rep, d_out, src, d_in) -> Representation:
        """ker(d_out: mid -> out_rep) / im(d_in: src -> mid)."""
        ker, incl, _, _ = kernel_cokernel(Morphism(mid, out_rep, d_out))
        sols = []
        for v in range(self.quiver.n):
            sol = incl.maps[v].solve(d_in[v])
            if sol is None:
                raise ConfigError("differential does not land in the kernel")
            sols.append(sol)
        _, _, hrep, _ = kernel_cokernel(Morphism(src, ker, sols))
        return hrep

    def homology(self, a: TwoPeriodicComplex) -> tuple[Representation, Representation]:
        h0 = self._homology_at(a.p0.rep, a.p1.rep, a.d0, a.p1.rep, a.d1)
        h1 = self._homology_at(a.p1.rep, a.p0.rep, a.d1, a.p0.rep, a.d0)
        return h0, h1

    def object_class(self, a: TwoPeriodicComplex) -> ObjClass:
        h0, h1 = self.homology(a)
        c0 = self.mreg.decompose(h0)
        c1 = self.mreg.decompose(h1)
        out: dict[tuple[int, int], int] = {}
        for idx, mult in c0:
            out[(idx, 0)] = out.get((idx, 0), 0) + mult
        for idx, mult in c1:
            out[(idx, 1)] = out.get((idx, 1), 0) + mult
        return tuple(sorted(out.items()))

    def groth_class(self, a: TwoPeriodicComplex) -> GrothClass:
        h0, h1 = self.homology(a)
        return tuple(x - y for x, y in zip(h0.dims, h1.dims))

    def class_groth(self, cls: ObjClass) -> GrothClass:
        out = [0] * self.quiver.n
        for (idx, parity), mult in cls:
            sgn = -1 if parity else 1
            for v, d in enumerate(self.mreg.dim_vectors[idx]):
                out[v] += sgn * d * mult
        return tuple(out)

    def class_homology_dims(self, cls: ObjClass) -> tuple[GrothClass, GrothClass]:
        h0 = [0] * self.quiver.n
        h1 = [0] * self.quiver.n
        for (idx, parity), mult in cls:
            tgt = h1 if parity else h0
            for v, d in enumerate(self.mreg.dim_vectors[idx]):
                tgt[v] += d * mult
        return tuple(h0), tuple(h1)

    def shift_class(self, cls: ObjClass) -> ObjClass:
        return tuple(sorted((((idx, 1 - p), mult) for (idx, p), mult in cls)))

    def class_size(self, cls: ObjClass) -> int:
        return sum(m for _, m in cls)

    # -- hom spaces ----------------------------------------------------------------

    def hom_space(self, a: TwoPeriodicComplex, b: TwoPeriodicComplex) -> HomSpace:
        key = (a.key(), b.key())
        if key not in self._hom_cache:
            self._hom_cache[key] = HomSpace(a, b)
        return self._hom_cache[key]

    def hom_dim(self, a: TwoPeriodicComplex, b: TwoPeriodicComplex) -> int:
        return self.hom_space(a, b).dim

    def is_invertible(self, hs: HomSpace, coords: bytes) -> bool:
        """Two-sided invertibility of a hom class, by linear solvability."""
        if hs.a.key() == hs.b.key():
            table = self.end_table(hs.a)
            return coords in table.unit_inverse
        xi = hs.lift(coords)
        back = self.hom_space(hs.b, hs.a)
        enda = self.end_table(hs.a)
        endb = self.end_table(hs.b)
        # eta with eta o xi = 1 (linear in eta), then eta' with xi o eta' = 1
        cols_l, cols_r = [], []
        for eb in back.basis:
            cols_l.append(enda.hs.project(eb.compose(xi)))
            cols_r.append(endb.hs.project(xi.compose(eb)))
        f = self.field
        ml = Matrix(f, len(cols_l), enda.hs.dim, b"".join(cols_l)).transpose() if cols_l else Matrix.zeros(f, enda.hs.dim, 0)
        mr = Matrix(f, len(cols_r), endb.hs.dim, b"".join(cols_r)).transpose() if cols_r else Matrix.zeros(f, endb.hs.dim, 0)
        one_a = Matrix(f, enda.hs.dim, 1, enda.one)
        one_b = Matrix(f, endb.hs.dim, 1, endb.one)
        return ml.solve(one_a) is not None and mr.solve(one_b) is not None

    # -- End algebra tables ----------------------------------------------------------

    def end_table(self, a: TwoPeriodicComplex) -> "EndTable":
        key = ("end", a.key())
        if key not in self._hom_cache:
            self._hom_cache[key] = EndTable(self, a)  # type: ignore[assignment]
        return self._hom_cache[key]  # type: ignore[return-value]

    def is_isomorphic(self, a: TwoPeriodicComplex, b: TwoPeriodicComplex) -> bool:
        """Explicit isomorphism search (enumeration, budget-guarded)."""
        hs = self.hom_space(a, b)
        if self.field.q**hs.dim > self.hom_enum_cap:
            raise BudgetExceededError("isomorphism search space too large")
        for coords in hs.all_coords():
            if self.is_invertible(hs, coords):
                return True
        return False


class EndTable:
    """End(A) as a finite algebra in quotient coordinates: units and inverses."""

    def __init__(self, ctx: RootContext, a: TwoPeriodicComplex):
        self.ctx = ctx
        self.a = a
        self.hs = ctx.hom_space(a, a)
        f = ctx.field
        e = self.hs.dim
        self.one = self.hs.project(ChainMap.identity(a))
        # left-multiplication structure: table[i] = matrix of x -> e_i o x
        self.left_mats: list[Matrix] = []
        cols_by_gen = []
        for ei in self.hs.basis:
            cols = []
            for ej in self.hs.basis:
                cols.append(self.hs.project(ei.compose(ej)))
            cols_by_gen.append(cols)
        for cols in cols_by_gen:
            m = Matrix(f, e, e, b"".join(cols)).transpose() if e else Matrix.zeros(f, 0, 0)
            self.left_mats.append(m)
        if f.q**e > ctx.hom_enum_cap:
            raise BudgetExceededError(f"End enumeration q^{e} exceeds the cap")
        self.unit_inverse: dict[bytes, bytes] = {}
        self.elements: list[bytes] = []
        one_vec = Matrix(f, e, 1, self.one)
        for coords in itertools.product(range(f.q), repeat=e):
            cb = bytes(coords)
            self.elements.append(cb)
            if e == 0:
                # End of the zero object: the identity is its own inverse
                self.unit_inverse[cb] = cb
                continue
            # u x = 1 solvable <=> u is a unit (finite ring), inverse two-sided
            sol = self._left_mat(cb).solve(one_vec)
            if sol is not None:
                self.unit_inverse[cb] = sol.data
        self.nonunits = [c for c in self.elements if c not in self.unit_inverse]

    def _left_mat(self, coords: bytes) -> Matrix:
        f = self.ctx.field
        e = self.hs.dim
        out = Matrix.zeros(f, e, e)
        for c, m in zip(coords, self.left_mats):
            if c:
                out = m.axpy(c, out)
        return out

    def compose_coords(self, x: bytes, y: bytes) -> bytes:
        """coordinates of x o y."""
        f = self.ctx.field
        lm = self._left_mat(x)
        vec = Matrix(f, self.hs.dim, 1, y)
        return (lm @ vec).data

    def d_value(self) -> tuple[int, int]:
        """(rad_dim, d) for a local End algebra (indecomposable object)."""
        f = self.ctx.field
        e = self.hs.dim
        nonunits = self.nonunits
        flat = b"".join(nonunits)
        span = Matrix(f, len(nonunits), e, flat) if nonunits else Matrix.zeros(f, 0, e)
        r = span.rank()
        if len(nonunits) != f.q**r:
            raise ConfigError("End algebra is not local; d undefined")
        return r, e - r

    def aut_order(self) -> int:
        return len(self.unit_inverse)
