"""Brute-force triangle counting in the root-category model.

Counts the sets W of exact triangles with fixed endpoint classes, the orbit
counts F under endpoint automorphisms, and the paired orbit counts N / N-hat
under the four-factor action, together with the verification sweeps built on
them (the pairwise composition bijection and the stabilizer congruences).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import BudgetExceededError, InternalCheckError
from .ffield import Matrix
from .quiver_repr import gl_order
from .root_category import (
    ChainMap,
    HomSpace,
    ObjClass,
    RootContext,
    TwoPeriodicComplex,
    ZERO_OBJ,
    cone,
    shift,
)


def obj_class_to_str(cls: ObjClass) -> str:
    if not cls:
        return "0"
    return ".".join(f"{i}{'-' if p else '+'}*{m}" for (i, p), m in cls)


def obj_class_from_str(text: str) -> ObjClass:
    if text == "0":
        return ZERO_OBJ
    out = []
    for tok in text.split("."):
        head, mult = tok.split("*")
        parity = 1 if head.endswith("-") else 0
        out.append(((int(head[:-1]), parity), int(mult)))
    return tuple(sorted(out))


def class_sum(*classes: ObjClass) -> ObjClass:
    acc: dict[tuple[int, int], int] = {}
    for cls in classes:
        for key, mult in cls:
            acc[key] = acc.get(key, 0) + mult
    return tuple(sorted(acc.items()))


def congruent(a, b, modulus: int) -> bool:
    """a = b mod modulus for integers or fractions with denominator prime to modulus."""
    if modulus == 1:
        return True
    diff = Fraction(a) - Fraction(b)
    if gcd(diff.denominator, modulus) != 1:
        raise InternalCheckError(f"denominator {diff.denominator} not invertible mod {modulus}")
    return diff.numerator % modulus == 0


def add_coords(field, a: bytes, b: bytes) -> bytes:
    return bytes(field.add_table[x * field.q + y] for x, y in zip(a, b))


@dataclass
class TriangleSet:
    """Exhaustive list of exact triangles Y -> L -> X -> TY for fixed classes."""

    x: ObjClass
    y: ObjClass
    l: ObjClass
    triples: list[tuple[bytes, bytes, bytes]]
    cx: TwoPeriodicComplex
    cy: TwoPeriodicComplex
    cl: TwoPeriodicComplex
    ty: TwoPeriodicComplex
    hs_f: HomSpace
    hs_g: HomSpace
    hs_h: HomSpace

    @property
    def count(self) -> int:
        return len(self.triples)


@dataclass
class OrbitData:
    """Orbit decomposition of a finite group action, with per-orbit stabilizers."""

    group_order: int
    orbit_sizes: list[int]
    stab_orders: list[int]
    reps: list

    @property
    def count(self) -> int:
        return len(self.orbit_sizes)


class TriContext:
    """Triangle counting with memoized W sets and orbit data."""

    def __init__(
        self,
        root_ctx: RootContext,
        hom_enum_cap: int = 1 << 17,
        pair_cap: int = 1 << 20,
        group_cap: int = 1 << 20,
    ):
        self.ctx = root_ctx
        self.field = root_ctx.field
        self.hom_enum_cap = hom_enum_cap
        self.pair_cap = pair_cap
        self.group_cap = group_cap
        self._w_cache: dict[tuple, TriangleSet] = {}
        self._orbitF_cache: dict[tuple, OrbitData] = {}
        self._pairN_cache: dict[tuple, int] = {}
        self._aut_cache: dict[ObjClass, int] = {}
        self._obj_hom_cache: dict[tuple, int] = {}

    # -- object-level helpers ----------------------------------------------------

    def obj_hom_dim(self, a: ObjClass, b: ObjClass) -> int:
        key = (a, b)
        if key not in self._obj_hom_cache:
            ca, cb = self.ctx.build_object(a), self.ctx.build_object(b)
            self._obj_hom_cache[key] = self.ctx.hom_dim(ca, cb)
        return self._obj_hom_cache[key]

    def aut_order(self, cls: ObjClass) -> int:
        if cls not in self._aut_cache:
            cx = self.ctx.build_object(cls)
            e = self.ctx.hom_dim(cx, cx)
            if self.field.q**e <= self.hom_enum_cap:
                self._aut_cache[cls] = self.ctx.end_table(cx).aut_order()
            else:
                # Krull-Schmidt unit count through End modulo its radical
                semis = 0
                aut = 1
                for (i, p), mult in cls:
                    et = self.ctx.end_table(self.ctx.object_complex((i, p)))
                    _, d = et.d_value()
                    semis += d * mult * mult
                    aut *= gl_order(mult, self.field.q**d)
                self._aut_cache[cls] = aut * self.field.q ** (e - semis)
        return self._aut_cache[cls]

    def d_of_ind(self, obj: tuple[int, int]) -> int:
        return self.ctx.end_table(self.ctx.object_complex(obj)).d_value()[1]

    # -- W sets -------------------------------------------------------------------

    def triangles(self, x: ObjClass, y: ObjClass, l: ObjClass) -> TriangleSet:
        x, y, l = tuple(sorted(x)), tuple(sorted(y)), tuple(sorted(l))
        key = (x, y, l)
        if key in self._w_cache:
            return self._w_cache[key]
        ctx = self.ctx
        cx = ctx.build_object(x)
        cy = ctx.build_object(y)
        cl = ctx.build_object(l)
        ty = shift(cy)
        hs_f = ctx.hom_space(cy, cl)
        hs_g = ctx.hom_space(cl, cx)
        hs_h = ctx.hom_space(cx, ty)
        triples: list[tuple[bytes, bytes, bytes]] = []
        q = self.field.q
        if q**hs_f.dim > self.hom_enum_cap:
            raise BudgetExceededError(
                f"W enumeration needs q^{hs_f.dim} maps Y -> L, above the cap"
            )
        gx = ctx.class_groth(x)
        gy = ctx.class_groth(y)
        gl = ctx.class_groth(l)
        if tuple(a + b for a, b in zip(gx, gy)) == gl:
            xdims = self._class_hdims(x)
            et_x = ctx.end_table(cx)
            for f_coords in hs_f.all_coords():
                fmap = hs_f.lift(f_coords)
                c, incl, proj = cone(fmap)
                if self._homology_dims(c) != xdims:
                    continue
                if ctx.object_class(c) != x:
                    continue
                hs_cx = ctx.hom_space(c, cx)
                xi0 = None
                for coords in hs_cx.all_coords():
                    if ctx.is_invertible(hs_cx, coords):
                        xi0 = coords
                        break
                if xi0 is None:
                    raise InternalCheckError("cone class matches X but no isomorphism found")
                xi0_map = hs_cx.lift(xi0)
                xi0_inv = self._invert(hs_cx, xi0)
                g0 = xi0_map.compose(incl)  # CL -> CX
                h0 = proj.compose(xi0_inv)  # CX -> TY
                seen = set()
                for u_coords, uinv_coords in et_x.unit_inverse.items():
                    u = et_x.hs.lift(u_coords)
                    uinv = et_x.hs.lift(uinv_coords)
                    g_coords = hs_g.project(u.compose(g0))
                    h_coords = hs_h.project(h0.compose(uinv))
                    pair = (g_coords, h_coords)
                    if pair not in seen:
                        seen.add(pair)
                        triples.append((f_coords, g_coords, h_coords))
        ts = TriangleSet(x, y, l, triples, cx, cy, cl, ty, hs_f, hs_g, hs_h)
        self._w_cache[key] = ts
        return ts

    def _class_hdims(self, cls: ObjClass) -> tuple:
        return self.ctx.class_homology_dims(cls)

    def _homology_dims(self, a: TwoPeriodicComplex) -> tuple:
        n = self.ctx.quiver.n
        h0, h1 = [], []
        for v in range(n):
            r0 = a.d0[v].rank()
            r1 = a.d1[v].rank()
            h0.append(a.p0.rep.dims[v] - r0 - r1)
            h1.append(a.p1.rep.dims[v] - r0 - r1)
        return tuple(h0), tuple(h1)

    def _invert(self, hs: HomSpace, coords: bytes) -> ChainMap:
        """Two-sided inverse of an invertible hom class (as a chain map B -> A)."""
        ctx = self.ctx
        back = ctx.hom_space(hs.b, hs.a)
        enda = ctx.end_table(hs.a)
        xi = hs.lift(coords)
        cols = [enda.hs.project(eb.compose(xi)) for eb in back.basis]
        f = self.field
        ml = (
            Matrix(f, len(cols), enda.hs.dim, b"".join(cols)).transpose()
            if cols
            else Matrix.zeros(f, enda.hs.dim, 0)
        )
        sol = ml.solve(Matrix(f, enda.hs.dim, 1, enda.one))
        if sol is None:
            raise InternalCheckError("inverse requested for a non-invertible class")
        return back.lift(sol.data)

    def count_w(self, x: ObjClass, y: ObjClass, l: ObjClass) -> int:
        return self.triangles(x, y, l).count

    # -- the literal exactness test (used for spot checks and rotation tests) -----

    def is_exact_triangle(
        self, ts_like: tuple[ObjClass, ObjClass, ObjClass], f_coords: bytes, g_coords: bytes, h_coords: bytes
    ) -> bool:
        """Exactness of a candidate (f,g,h): some iso xi: C(f) -> X matches g and h."""
        x, y, l = ts_like
        ctx = self.ctx
        cx = ctx.build_object(x)
        cy = ctx.build_object(y)
        cl = ctx.build_object(l)
        ty = shift(cy)
        hs_f = ctx.hom_space(cy, cl)
        hs_g = ctx.hom_space(cl, cx)
        hs_h = ctx.hom_space(cx, ty)
        fmap = hs_f.lift(f_coords)
        c, incl, proj = cone(fmap)
        hs_cx = ctx.hom_space(c, cx)
        hs_cty = ctx.hom_space(c, ty)
        hmap = hs_h.lift(h_coords)
        cols = []
        for b in hs_cx.basis:
            top = hs_g.project(b.compose(incl))
            bot = hs_cty.project(hmap.compose(b))
            cols.append(top + bot)
        f = self.field
        n_cond = hs_g.dim + hs_cty.dim
        mat = (
            Matrix(f, len(cols), n_cond, b"".join(cols)).transpose()
            if cols
            else Matrix.zeros(f, n_cond, 0)
        )
        rhs = Matrix(f, n_cond, 1, g_coords + hs_cty.project(proj))
        part = mat.solve(rhs)
        if part is None:
            return False
        kern = mat.kernel_basis()
        q = f.q
        if q**kern.cols > self.hom_enum_cap:
            raise BudgetExceededError("exactness witness space too large")
        for coeffs in itertools.product(range(q), repeat=kern.cols):
            xi = bytearray(part.data)
            for cc, col in zip(coeffs, range(kern.cols)):
                if cc:
                    for r in range(hs_cx.dim):
                        xi[r] = f.add_table[
                            xi[r] * q + f.mul_table[cc * q + kern.entry(r, col)]
                        ]
            if self.ctx.is_invertible(hs_cx, bytes(xi)):
                return True
        return False

    # -- orbit counts F ------------------------------------------------------------

    def orbit_count_F(self, x: ObjClass, y: ObjClass, l: ObjClass) -> OrbitData:
        """Aut(X) x Aut(Y)-orbits on W (the numbers F in the triangulated case)."""
        x, y, l = tuple(sorted(x)), tuple(sorted(y)), tuple(sorted(l))
        key = (x, y, l)
        if key in self._orbitF_cache:
            return self._orbitF_cache[key]
        ts = self.triangles(x, y, l)
        ctx = self.ctx
        et_x = ctx.end_table(ts.cx)
        et_y = ctx.end_table(ts.cy)
        group_order = len(et_x.unit_inverse) * len(et_y.unit_inverse)
        if group_order > self.group_cap:
            raise BudgetExceededError(f"|Aut(X,Y)| = {group_order} exceeds the group cap")
        index = {t: i for i, t in enumerate(ts.triples)}
        perms = []
        # xi in Aut(X): g -> xi g, h -> h xi^{-1}
        for u_coords, uinv_coords in et_x.unit_inverse.items():
            u = et_x.hs.lift(u_coords)
            uinv = et_x.hs.lift(uinv_coords)
            gmat = self._compose_matrix_left(ts.hs_g, u)
            hmat = self._compose_matrix_right(ts.hs_h, uinv)
            perms.append(
                self._coords_perm(ts, index, f_mat=None, g_mat=gmat, h_mat=hmat)
            )
        # eta in Aut(Y): f -> f eta^{-1}, h -> (T eta) h
        for u_coords, uinv_coords in et_y.unit_inverse.items():
            uinv = et_y.hs.lift(uinv_coords)
            tu = self._shift_map(et_y.hs.lift(u_coords))
            fmat = self._compose_matrix_right(ts.hs_f, uinv)
            hmat = self._compose_matrix_left(ts.hs_h, tu)
            perms.append(
                self._coords_perm(ts, index, f_mat=fmat, g_mat=None, h_mat=hmat)
            )
        orbit_sizes, stab_orders, reps = [], [], []
        seen = [False] * len(ts.triples)
        for start in range(len(ts.triples)):
            if seen[start]:
                continue
            frontier = [start]
            seen[start] = True
            orbit = [start]
            while frontier:
                cur = frontier.pop()
                for perm in perms:
                    nxt = perm[cur]
                    if not seen[nxt]:
                        seen[nxt] = True
                        frontier.append(nxt)
                        orbit.append(nxt)
            rep = ts.triples[start]
            stab = self._stabilizer_order_F(ts, rep, et_x, et_y)
            if stab * len(orbit) != group_order:
                raise InternalCheckError("orbit-stabilizer identity fails in F computation")
            orbit_sizes.append(len(orbit))
            stab_orders.append(stab)
            reps.append(rep)
        data = OrbitData(group_order, orbit_sizes, stab_orders, reps)
        if sum(orbit_sizes) != ts.count:
            raise InternalCheckError("orbits do not partition W")
        self._orbitF_cache[key] = data
        return data

    def _coords_perm(self, ts: TriangleSet, index: dict, f_mat, g_mat, h_mat) -> list[int]:
        out = []
        for f_c, g_c, h_c in ts.triples:
            nf = self._apply(f_mat, f_c, ts.hs_f)
            ng = self._apply(g_mat, g_c, ts.hs_g)
            nh = self._apply(h_mat, h_c, ts.hs_h)
            out.append(index[(nf, ng, nh)])
        return out

    @staticmethod
    def _apply(mat, coords: bytes, hs: HomSpace) -> bytes:
        if mat is None:
            return coords
        return (mat @ Matrix(hs.a.field, hs.dim, 1, coords)).data

    def _compose_matrix_left(self, hs: HomSpace, u: ChainMap) -> Matrix:
        """Matrix of phi -> u o phi on quotient coordinates of hs."""
        cols = [hs.project(u.compose(b)) for b in hs.basis]
        f = self.field
        if not cols:
            return Matrix.zeros(f, 0, 0)
        return Matrix(f, len(cols), hs.dim, b"".join(cols)).transpose()

    def _compose_matrix_right(self, hs: HomSpace, u: ChainMap) -> Matrix:
        cols = [hs.project(b.compose(u)) for b in hs.basis]
        f = self.field
        if not cols:
            return Matrix.zeros(f, 0, 0)
        return Matrix(f, len(cols), hs.dim, b"".join(cols)).transpose()

    @staticmethod
    def _shift_map(cm: ChainMap) -> ChainMap:
        return ChainMap(shift(cm.source), shift(cm.target), cm.u1, cm.u0)

    def _stabilizer_order_F(self, ts: TriangleSet, rep, et_x, et_y) -> int:
        """#{(eta, xi): f eta = f, xi g = g, (T eta) h = h xi} among units."""
        f_c, g_c, h_c = rep
        fmap = ts.hs_f.lift(f_c)
        gmap = ts.hs_g.lift(g_c)
        hmap = ts.hs_h.lift(h_c)
        fld = self.field
        ey, ex = et_y.hs.dim, et_x.hs.dim
        cols = []
        for b in et_y.hs.basis:  # eta-bar direction
            c1 = ts.hs_f.project(fmap.compose(b))  # f o eta-bar = 0
            c3 = ts.hs_h.project(self._shift_map(b).compose(hmap))  # (T eta-bar) h
            cols.append(c1 + bytes(ts.hs_g.dim) + c3)
        for b in et_x.hs.basis:  # xi-bar direction
            c2 = ts.hs_g.project(b.compose(gmap))  # xi-bar o g = 0
            c3 = bytes(fld.neg_table[v] for v in ts.hs_h.project(hmap.compose(b)))
            cols.append(bytes(ts.hs_f.dim) + c2 + c3)
        n_cond = ts.hs_f.dim + ts.hs_g.dim + ts.hs_h.dim
        mat = (
            Matrix(fld, len(cols), n_cond, b"".join(cols)).transpose()
            if cols
            else Matrix.zeros(fld, n_cond, 0)
        )
        kern = mat.kernel_basis()
        if fld.q**kern.cols > self.group_cap:
            raise BudgetExceededError("stabilizer solution space too large")
        count = 0
        for coeffs in itertools.product(range(fld.q), repeat=kern.cols):
            vec = bytearray(ey + ex)
            for cc, col in zip(coeffs, range(kern.cols)):
                if cc:
                    for r in range(ey + ex):
                        vec[r] = fld.add_table[
                            vec[r] * fld.q + fld.mul_table[cc * fld.q + kern.entry(r, col)]
                        ]
            eta = add_coords(fld, et_y.one, bytes(vec[:ey]))
            xi = add_coords(fld, et_x.one, bytes(vec[ey:]))
            if eta in et_y.unit_inverse and xi in et_x.unit_inverse:
                count += 1
        return count
