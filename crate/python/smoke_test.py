"""Smoke test for the pysharpdom extension module."""

import json

import pysharpdom as sd


def quadratic_order():
    o = sd.QuadraticOrder(-3)
    assert not o.is_maximal()
    p = o.ideal("ideal(2,1+w)")
    two = o.ideal("ideal(2,2w)")
    assert str(p) == "ideal(2, 1+w)"
    assert str(p * p) == "ideal(4, 2+2w)"
    assert str(two.colon(p)) == "ideal(2, 1+w)"
    assert p.contains(two)
    assert not p.is_invertible()
    assert p.norm() == "2"
    assert p == o.ideal("ideal(2, 1+w)")
    assert len({p, o.ideal("ideal(2,1+w)")}) == 1


def valuation_domain():
    v = sd.ValuationDomain(["1", "sqrt2"])
    i = v.cut("cut(4,weak)")
    h = v.cut("cut(sqrt3,strict)")
    b = v.colon(i, h)
    assert b.kind == "strict"
    assert str(b) == "cut(4-sqrt3,strict)"
    assert str(v.mul(h, b)) == "cut(4,strict)"
    assert v.diagnose() == (2, "dense", "incomplete", False)
    assert sd.ValuationDomain(["1"]).diagnose()[3]


def reports():
    assert sd.eval("quad:d=-3", "colon(ideal(2,2w),ideal(2,1+w))") == "ideal(2, 1+w)"
    pair = json.loads(sd.check_pair("quad:d=-3", "ideal(2,2w)", "ideal(2,1+w)"))
    assert pair["schema"] == 1 and pair["verdict"] == "fails"
    found = json.loads(sd.check_def("quad:d=-3", "ideal(4,2+2w)", "ideal(2,1+w)", "ideal(2,1+w)"))
    assert found["verdict"] == "holds"
    bundle = json.loads(sd.sweep("quad:d=-1", budget=8))
    assert all(r["verdict"] == "holds" for r in bundle["reports"])
    assert json.loads(sd.diagnose("val:gens=1"))["prediction"]["sharp"]
    try:
        sd.QuadraticOrder(4)
    except ValueError:
        pass
    else:
        raise AssertionError("d=4 accepted")


if __name__ == "__main__":
    quadratic_order()
    valuation_domain()
    reports()
    print("smoke test passed")
