"""Quiver representations: Hom, kernels, enumeration, decomposition, End data."""

import itertools

import pytest

from conftest import a1_quiver, a2_quiver, a3_quiver, kronecker_quiver, named_ind, quiver_doc
from roothall.errors import BoundExceededError, ConfigError
from roothall.ffield import Matrix, make_field
from roothall.quiver_repr import (
    Morphism,
    ModuleRegistry,
    Quiver,
    Representation,
    direct_sum,
    end_data,
    euler_and_ext,
    ext_dim_resolution,
    hom_basis,
    hom_dim,
    iter_morphism_span,
    kernel_cokernel,
    parse_quiver,
    projective,
    standard_presentation,
)

# -- parsing ------------------------------------------------------------------


def test_parse_a2():
    import json

    q = parse_quiver(json.dumps(quiver_doc("A2", ["1", "2"], [("a", "1", "2")])))
    assert q.n == 2 and len(q.arrows) == 1


def test_parse_kronecker():
    import json

    q = parse_quiver(json.dumps(quiver_doc("K", ["1", "2"], [("a", "1", "2"), ("b", "1", "2")])))
    assert q.n == 2 and len(q.arrows) == 2


def test_parse_rejects_loop():
    import json

    with pytest.raises(ConfigError, match="cycle"):
        parse_quiver(json.dumps(quiver_doc("loop", ["1"], [("a", "1", "1")])))


def test_parse_rejects_cycle_and_duplicates():
    import json

    with pytest.raises(ConfigError, match="cycle"):
        parse_quiver(json.dumps(quiver_doc("C2", ["1", "2"], [("a", "1", "2"), ("b", "2", "1")])))
    with pytest.raises(ConfigError):
        parse_quiver(json.dumps(quiver_doc("dup", ["1", "1"], [])))
    with pytest.raises(ConfigError):
        parse_quiver(json.dumps(quiver_doc("dup2", ["1", "2"], [("a", "1", "2"), ("a", "1", "2")])))
    with pytest.raises(ConfigError):
        parse_quiver("{not json")


def test_digest_stable_under_listing_order():
    q1 = Quiver.from_dict(quiver_doc("X", ["1", "2"], [("a", "1", "2"), ("b", "1", "2")]))
    q2 = Quiver.from_dict(quiver_doc("X", ["2", "1"], [("b", "1", "2"), ("a", "1", "2")]))
    assert q1.digest == q2.digest


# -- hom spaces (A2: S1=(k,0), S2=(0,k), P=(k,k,id)) ---------------------------


def _a2_objects(f):
    q = a2_quiver()
    s1 = Representation.simple(q, f, "1")
    s2 = Representation.simple(q, f, "2")
    p = projective(q, f, "1")
    assert p.dims == (1, 1)
    return q, s1, s2, p


def test_hom_dims_a2(f3):
    q, s1, s2, p = _a2_objects(f3)
    assert hom_dim(s2, p) == 1
    assert hom_dim(p, s2) == 0
    assert hom_dim(s1, s1) == 1
    assert hom_dim(p, s1) == 1
    assert hom_dim(s1, p) == 0


def test_hom_basis_actually_intertwines(f3):
    q, s1, s2, p = _a2_objects(f3)
    for m, n in itertools.product([s1, s2, p], repeat=2):
        for b in hom_basis(m, n):
            b.validate()


def test_kernel_cokernel_zero_and_identity(f3):
    q, s1, s2, p = _a2_objects(f3)
    z = Morphism.zero(p, s1)
    ker, _, coker, _ = kernel_cokernel(z)
    assert ker.dims == p.dims and coker.dims == s1.dims
    ident = Morphism.identity(p)
    ker, _, coker, _ = kernel_cokernel(ident)
    assert ker.is_zero() and coker.is_zero()


def test_kernel_of_p_onto_s1_is_s2(f3):
    q, s1, s2, p = _a2_objects(f3)
    (f,) = hom_basis(p, s1)
    ker, incl, coker, _ = kernel_cokernel(f)
    assert ker.dims == s2.dims == (0, 1)
    assert coker.is_zero()
    incl.validate()


def test_direct_sum_shapes(f3):
    q, s1, s2, p = _a2_objects(f3)
    assert direct_sum([], q, f3).is_zero()
    both = direct_sum([s1, s2], q, f3)
    assert both.dims == (1, 1) and both.maps[0].is_zero()
    pp = direct_sum([p, p], q, f3)
    assert pp.dims == (2, 2) and pp.maps[0] == Matrix.identity(f3, 2)


# -- enumeration ---------------------------------------------------------------


def test_enumerate_a2(f3):
    reg = ModuleRegistry(a2_quiver(), f3, (1, 1))
    assert sorted(r.dims for r in reg.ind) == [(0, 1), (1, 0), (1, 1)]


def test_enumerate_a1(f3):
    reg = ModuleRegistry(a1_quiver(), f3, (2,))
    assert [r.dims for r in reg.ind] == [(1,)]


def test_enumerate_kronecker_f3():
    reg = ModuleRegistry(kronecker_quiver(), make_field(3), (1, 1))
    # classes of dims (1,0), (0,1) and q+1 = 4 regular classes of dims (1,1)
    dims = sorted(r.dims for r in reg.ind)
    assert dims == [(0, 1), (1, 0), (1, 1), (1, 1), (1, 1), (1, 1)]


def test_enumerate_a3_matches_positive_roots(f3):
    q = a3_quiver()
    reg = ModuleRegistry(q, f3, (1, 1, 1))
    assert len(reg.ind) == 6 == len(q.positive_roots())


def test_registry_order_deterministic(f3):
    r1 = ModuleRegistry(a2_quiver(), f3, (4, 4))
    r2 = ModuleRegistry(a2_quiver(), f3, (4, 4))
    assert [r.key() for r in r1.ind] == [r.key() for r in r2.ind]


# -- decompose -----------------------------------------------------------------


def test_decompose_direct_sum(a2_reg_f3):
    reg = a2_reg_f3
    s1, p = named_ind(reg, (1, 0)), named_ind(reg, (1, 1))
    m = direct_sum([reg.ind[p], reg.ind[s1]], reg.quiver, reg.field)
    assert reg.decompose(m) == tuple(sorted([(p, 1), (s1, 1)]))


def test_decompose_zero(a2_reg_f3):
    assert a2_reg_f3.decompose(Representation.zero(a2_reg_f3.quiver, a2_reg_f3.field)) == ()


def test_decompose_arrowless_dims11(a2_reg_f3):
    reg = a2_reg_f3
    m = Representation(reg.quiver, reg.field, (1, 1), [Matrix.zeros(reg.field, 1, 1)])
    s1, s2 = named_ind(reg, (1, 0)), named_ind(reg, (0, 1))
    assert reg.decompose(m) == tuple(sorted([(s1, 1), (s2, 1)]))


def test_is_isomorphic(a2_reg_f3):
    reg = a2_reg_f3
    s1, s2, p = named_ind(reg, (1, 0)), named_ind(reg, (0, 1)), named_ind(reg, (1, 1))
    m1 = direct_sum([reg.ind[s1], reg.ind[s2]], reg.quiver, reg.field)
    assert reg.is_isomorphic(m1, m1)
    assert not reg.is_isomorphic(m1, reg.ind[p])
    m2 = direct_sum([reg.ind[s2], reg.ind[s1]], reg.quiver, reg.field)
    assert reg.is_isomorphic(m1, m2)


def test_decompose_bound_exceeded():
    reg = ModuleRegistry(kronecker_quiver(), make_field(3), (1, 1))
    big = direct_sum([reg.ind[2], reg.ind[2]], reg.quiver, reg.field)
    with pytest.raises(BoundExceededError):
        reg.decompose(big)


def test_decompose_additivity_property(a2_reg_f3):
    # dim Hom(I, M + N) = dim Hom(I, M) + dim Hom(I, N) over all registry pairs
    reg = a2_reg_f3
    for i, j in itertools.product(range(len(reg.ind)), repeat=2):
        m = direct_sum([reg.ind[i], reg.ind[j]], reg.quiver, reg.field)
        for t in range(len(reg.ind)):
            assert hom_dim(reg.ind[t], m) == reg.hom_mat[t][i] + reg.hom_mat[t][j]


def test_kronecker_decompose_idempotent_path():
    reg = ModuleRegistry(kronecker_quiver(), make_field(3), (2, 2))
    regs = [i for i, r in enumerate(reg.ind) if r.dims == (1, 1)]
    m = direct_sum([reg.ind[regs[0]], reg.ind[regs[2]]], reg.quiver, reg.field)
    assert reg.decompose(m) == tuple(sorted([(regs[0], 1), (regs[2], 1)]))
    for i in range(len(reg.ind)):
        assert reg.decompose(reg.ind[i]) == ((i, 1),)


# -- end data ------------------------------------------------------------------


def test_end_data_s1_f3(a2_reg_f3):
    ed = end_data(a2_reg_f3.ind[named_ind(a2_reg_f3, (1, 0))])
    assert ed == (ed.__class__(end_dim=1, rad_dim=0, aut_order=2, d=1))


def test_end_data_p_f5():
    q = a2_quiver()
    f5 = make_field(5)
    p = projective(q, f5, "1")
    ed = end_data(p)
    assert ed.end_dim == 1 and ed.d == 1 and ed.aut_order == 4


def test_end_data_kronecker_companion_d2():
    q = kronecker_quiver()
    f3 = make_field(3)
    m = Representation(q, f3, (2, 2), [Matrix.identity(f3, 2), Matrix.from_rows(f3, [[0, -1], [1, 0]])])
    ed = end_data(m)
    assert ed.d == 2 and ed.end_dim == 2 and ed.aut_order == 8


def test_aut_formula_matches_enumeration(a2_reg_f3):
    reg = a2_reg_f3
    for i, j in itertools.product(range(len(reg.ind)), repeat=2):
        cls = tuple(sorted(((i, 1), (j, 1)))) if i != j else ((i, 2),)
        m = reg.build_rep(cls)
        enumerated = end_data(m, registry=reg)
        assert enumerated.aut_order == reg.class_aut_order(cls)


def test_aut_order_identity(a2_reg_f3):
    # |Aut M| = q^rad (q^d - 1) for indecomposables
    for ed in a2_reg_f3.end:
        q = a2_reg_f3.field.q
        assert ed.aut_order == q**ed.rad_dim * (q**ed.d - 1)


# -- Euler form / Ext ----------------------------------------------------------


def test_euler_ext_examples(a2_reg_f3):
    reg = a2_reg_f3
    s1 = reg.ind[named_ind(reg, (1, 0))]
    s2 = reg.ind[named_ind(reg, (0, 1))]
    p = reg.ind[named_ind(reg, (1, 1))]
    assert euler_and_ext(s1, s2) == (-1, 1)
    assert euler_and_ext(s2, s1) == (0, 0)
    for m in (s1, s2, p):
        assert euler_and_ext(p, m)[1] == 0  # projectives have no Ext
        assert euler_and_ext(s2, m)[1] == 0  # S2 = P(2) is projective too


def test_hereditary_euler_identity_vs_resolution_oracle(a2_reg_f3, a3_reg_f3):
    for reg in (a2_reg_f3, a3_reg_f3):
        for a, b in itertools.product(reg.ind, repeat=2):
            form, ext = euler_and_ext(a, b)
            assert ext == ext_dim_resolution(a, b)
            assert hom_dim(a, b) - ext == form


def test_standard_presentation_is_exact(a2_reg_f3):
    # d injective and coker(d) = M: checked via dims and an explicit cover
    from roothall.quiver_repr import presentation_cover

    reg = a2_reg_f3
    for cls in [((0, 1),), ((1, 1), (2, 1))]:
        m = reg.build_rep(cls)
        p0, p1, d = standard_presentation(m)
        assert d.is_injective()
        cover = presentation_cover(m, p0)
        cover.validate()
        assert cover.is_surjective()
        assert (cover @ d).is_zero()
        assert p0.rep.total_dim() - p1.rep.total_dim() == m.total_dim()


def test_nonunits_of_local_end_are_nilpotent(a2_reg_f3):
    reg = a2_reg_f3
    for r in reg.ind:
        basis = hom_basis(r, r)
        for _, phi in iter_morphism_span(basis):
            if not phi.is_iso():
                power = phi
                for _ in range(r.total_dim() + 1):
                    power = power @ phi
                assert power.is_zero()


def test_d_divides_hom_dims(a2_reg_f3):
    # d(X) | dim Hom(Y, X) for indecomposables (division used downstream is exact)
    reg = a2_reg_f3
    for i, ival in enumerate(reg.ind):
        dx = reg.end[i].d
        for j in range(len(reg.ind)):
            assert reg.hom_mat[j][i] % dx == 0
    kreg = ModuleRegistry(kronecker_quiver(), make_field(3), (2, 2))
    for i in range(len(kreg.ind)):
        dx = kreg.end[i].d
        for j in range(len(kreg.ind)):
            assert kreg.hom_mat[j][i] % dx == 0
        assert kreg.end[i].rad_dim % dx == 0
