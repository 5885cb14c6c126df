import pytest

aqlab = pytest.importorskip("aqlab")


def test_rank_over_fields():
    assert aqlab.rank([["2", "4"], ["1", "2"]], 2) == 1
    assert aqlab.rank([["1", "1/2"], ["0", "3"]], 0) == 2
    with pytest.raises(aqlab.InvalidInput):
        aqlab.rank([["1", "x"]], 0)


def test_spheres_and_series():
    assert aqlab.sphere_homotopy(0, 1, 2, 6, 4)["dims"] == [1, 0, 1, 0, 1, 0, 1]
    assert aqlab.sphere_series(0, 2, 2, 4) == [1, 0, 2, 0, 3]
    lower, upper, _ = aqlab.phi([1, 0, 1, 0, 1], 2, 1.0)
    assert 0 < lower <= upper


def test_eilenberg_maclane_round_trip():
    obj = aqlab.eilenberg_maclane(3, 1, 2, 4, dump=True)
    assert aqlab.homotopy(obj)["dims"][2] == 1
    assert aqlab.eilenberg_maclane(0, 2, 1, 4)["dims"][:2] == [0, 2]


def test_rational_example_and_audits():
    rep = aqlab.a_rs_tables(1, 2, 5)
    assert rep["pi"] == [1, 0, 1, 0, 0, 0] and rep["matches_expected"]
    assert aqlab.serre_audit(2, {2: 1}, 3)["outcome"] == "contradiction"
    assert aqlab.rational_check({2: 1, 5: 1}, True)["outcome"] == "not-applicable"
    with pytest.raises(aqlab.InvalidInput):
        aqlab.serre_audit(0, {2: 1}, 3)
    with pytest.raises(aqlab.Error):
        aqlab.serre_audit(2, {1: 1, 2: 0}, 3)
