import pytest
from gmpy2 import mpq

from phl import linalg
from phl.catalog import CATALOG, base_point, build, non_einstein_chart, quadric_chart
from phl.errors import ParseError, PreconditionError
from phl.projective import projective_data
from phl.tensors import is_einstein, ricci


@pytest.mark.parametrize("target,dim", [("flat:2", 2), ("quadric:3,0,1", 2), ("quadric:2,2,5", 3),
                                        ("non-einstein:3", 3), ("cy2d", 2), ("symplectic:6", 6),
                                        ("cquadric:2", 2), ("product:cy2d,quadric:3,0,1", 4),
                                        ("product:flat:1,product:flat:1,cy2d", 4)])
def test_targets_build(target, dim):
    built = build(target, 4, "generic")
    assert built.conn.dim == dim
    assert built.conn.is_torsion_free()


def test_product_factors_use_distinct_base_points():
    built = build("product:quadric:3,0,1,quadric:3,0,1", 3, "generic")
    a, b = built.factors
    assert a.conn.gamma.at_base().tolist() != b.conn.gamma.at_base().tolist()
    assert base_point("generic", 2, 2) == base_point("generic", 4)[2:]


@pytest.mark.parametrize("s,t", [(3, 0), (2, 1), (3, 2), (1, 3)])
def test_quadric_invariants(s, t):
    conn = quadric_chart(s, t, 2, 4, "generic")
    pd = projective_data(conn)
    assert pd.weyl.is_zero() and pd.cotton_york.is_zero()
    assert is_einstein(conn).einstein
    pos, neg, _ = linalg.inertia(ricci(conn).at_base().tolist())
    assert (pos, neg) == (s - 1, t)


def test_non_einstein_is_not_einstein_anywhere():
    for base in ("origin", "generic"):
        conn = non_einstein_chart(3, 4, base)
        assert not is_einstein(conn).einstein
        assert ricci(conn).is_symmetric()


@pytest.mark.parametrize("target", ["nope:3", "quadric:3,0", "cy2d:1", "product:cy2d",
                                    "flat:x"])
def test_bad_targets(target):
    with pytest.raises((ParseError, PreconditionError)):
        build(target, 3)


@pytest.mark.parametrize("call", [lambda: quadric_chart(2, 0, 1), lambda: quadric_chart(0, 3, 1),
                                  lambda: quadric_chart(3, 0, -1), lambda: build("symplectic:3"),
                                  lambda: base_point([1, 2], 3)])
def test_preconditions(call):
    with pytest.raises(PreconditionError):
        call()


def test_catalog_names():
    assert set(CATALOG) >= {"flat", "quadric", "non-einstein", "cy2d", "symplectic", "cquadric",
                            "product"}
    assert base_point("origin", 2) == [mpq(0), mpq(0)]
