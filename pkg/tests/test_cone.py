import numpy as np
import pytest
from gmpy2 import mpq

from phl import linalg
from phl.catalog import build, cotton_york_2d, quadric_chart, symplectic_example
from phl.cone import (complex_cone, complex_structure, cone_checks, dq_tensor,
                      einstein_cone_metric, projective_cone, realify, reconstruct_base,
                      ricci_flat_data, symplectic_cone, symplectic_cone_form, transform_chart,
                      zero_data)
from phl.errors import PreconditionError
from phl.jets import Jet, jet_from_polynomial
from phl.pipeline import make_cone
from phl.projective import change_preferred, one_form
from phl.tensors import ConnectionChart, covariant_derivative, curvature, jet_einsum

ORDER = 5


@pytest.mark.parametrize("target", ["flat:3", "cy2d", "quadric:3,1,1", "quadric:2,2,3",
                                    "non-einstein:3", "product:cy2d,flat:1"])
@pytest.mark.parametrize("base", ["origin", "generic"])
def test_real_cone_contract(target, base):
    built = build(target, ORDER, base)
    cone = projective_cone(built.conn)
    chk = cone_checks(cone)
    assert chk["torsion_zero"] and chk["ricci_zero"] and chk["q_independent"]
    assert cone.dim == built.conn.dim + 1
    rebuilt = reconstruct_base(cone)
    assert rebuilt.gamma.agrees_with(built.conn.gamma)


@pytest.mark.parametrize("target,phi", [("cy2d", "x*y + x^2/2 + y^3"),
                                        ("non-einstein:2", "x1^2*x2 - 2*x2")])
def test_splitting_change_is_projective_change(target, phi):
    # the cone of the changed connection is the same cone in the coordinate q' = q - phi
    base = build(target, ORDER, "generic").conn
    cone = projective_cone(base)
    N, q = cone.dim, cone.q_index
    names = list(cone.cone_conn.var_names)
    phi_cone = jet_from_polynomial(phi, names, ORDER + 1)
    A = [[Jet.constant(int(r == c), N, ORDER + 1) for c in range(N)] for r in range(N)]
    for i in range(base.dim):
        A[q][i] = phi_cone.partial(i)
    moved = transform_chart(cone.cone_conn, A)
    phi_base = jet_from_polynomial(phi, list(base.var_names), ORDER + 1)
    ups = one_form([phi_base.partial(i) for i in range(base.dim)], base)
    expected = projective_cone(change_preferred(base, ups)).cone_conn
    assert moved.gamma.agrees_with(expected.gamma)


def test_asymmetric_rho_rejected():
    conn = ConnectionChart.from_christoffels({(0, 0, 1): "x", (0, 1, 0): "x"}, ["x", "y"], 4)
    with pytest.raises(PreconditionError, match="volume"):
        projective_cone(conn)


@pytest.mark.parametrize("s,t,sig", [(3, 0, (3, 0)), (4, 0, (4, 0)), (3, 1, (3, 1))])
def test_einstein_cone_metric(s, t, sig):
    cone = projective_cone(quadric_chart(s, t, 1, 4, "generic"))
    h0 = einstein_cone_metric(cone)
    dh = covariant_derivative(h0, cone.cone_conn)
    assert (dh + dq_tensor(cone, h0).truncate(dh.order).scale(2)).is_zero()
    pos, neg, zero = linalg.inertia(h0.at_base().tolist())
    assert zero == 0 and (max(pos, neg), min(pos, neg)) == sig


def test_symplectic_cone():
    conn, nu = symplectic_example(4, ORDER, "generic")
    data = ricci_flat_data(conn, nu)
    data.check()
    cone = symplectic_cone(conn, data)
    chk = cone_checks(cone)
    assert chk["torsion_zero"] and chk["ricci_zero"] and chk["q_independent"]
    assert cone.dim == 6
    om = symplectic_cone_form(cone)
    assert om.is_antisymmetric()
    assert linalg.det(om.at_base().tolist()) != 0
    dom = covariant_derivative(om, cone.cone_conn)
    assert (dom + dq_tensor(cone, om).truncate(dom.order).scale(2)).is_zero()
    R = curvature(cone.cone_conn)
    q = cone.q_index
    for arr in R.terms.values():
        assert not np.vectorize(bool)(arr[q]).any()
        assert not np.vectorize(bool)(arr[:, :, :, q]).any()


def test_symplectic_zero_data_is_torsion_free():
    conn, nu = symplectic_example(4, ORDER)
    cone = symplectic_cone(conn, zero_data(conn, nu))
    assert cone_checks(cone)["torsion_zero"]


def test_symplectic_needs_nu():
    with pytest.raises(PreconditionError):
        make_cone(build("cy2d", ORDER), "symplectic")
    with pytest.raises(PreconditionError):
        make_cone(build("cy2d", ORDER), "complex")


def test_realify_and_complex_structure():
    m = 2
    J = complex_structure(m, 3).at_base()
    JJ = J.dot(J)
    assert (JJ == -np.identity(2 * m, dtype=object)).all()
    flat = ConnectionChart.flat(m, 3, ["z1", "z2"])
    real = realify(flat)
    assert real.dim == 2 * m and real.gamma.is_zero()


@pytest.mark.parametrize("base", ["generic", "generic2"])
def test_complex_cone(base):
    built = build("cquadric:2", 4, base)
    cone = complex_cone(built.conn, built.rho_c)
    chk = cone_checks(cone)
    assert chk["torsion_zero"] and chk["ricci_zero"] and chk["J_parallel"]
    assert cone.dim == 6
    J = cone.extras["J"]
    jj = jet_einsum("ab,bc->ac", J, J, slots="ud")
    assert (jj.at_base() == -np.identity(6, dtype=object)).all()
