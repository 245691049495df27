import pytest

from ic_cycles.errors import PreconditionViolatedError
from ic_cycles.extremal import (
    ExtremalSpec,
    expected_degree_multiset,
    extremal_graph,
    validate_extremal,
)
from ic_cycles.formats import write_graph6
from ic_cycles.graph import is_two_connected
from ic_cycles.harness import valid_extremal_nus
from ic_cycles.oracle import Outcome, find_ic_cycle_exact


def degree_counts(g):
    out = {}
    for v in range(g.n):
        out[g.degree(v)] = out.get(g.degree(v), 0) + 1
    return out


class TestConstruction:
    def test_8_3_degrees(self):
        g = extremal_graph(8, 3)
        # hubs see everything but each other; every clique vertex sees its
        # clique plus both hubs
        assert g.degree(0) == g.degree(1) == 6
        assert all(g.degree(v) == 3 for v in range(2, 8))

    def test_9_3_third_group(self):
        g = extremal_graph(9, 3)
        assert g.min_degree() == 3
        # third group has n - 2*nu = 3 vertices of degree n - 2*nu + 1 = 4
        assert [g.degree(v) for v in range(6, 9)] == [4, 4, 4]

    def test_7_3_rejected(self):
        with pytest.raises(PreconditionViolatedError):
            extremal_graph(7, 3)

    def test_10_4_rejected(self):
        # 3*4 = 12 is not below 10 + 2
        with pytest.raises(PreconditionViolatedError):
            extremal_graph(10, 4)

    def test_nu_must_exceed_two(self):
        with pytest.raises(PreconditionViolatedError):
            extremal_graph(12, 2)

    def test_groups_partition(self):
        spec = ExtremalSpec(14, 4)
        a1, a2, a3 = spec.groups()
        assert list(a1) == [2, 3, 4]
        assert list(a2) == [5, 6, 7]
        assert list(a3) == [8, 9, 10, 11, 12, 13]

    @pytest.mark.parametrize("n", range(8, 21))
    def test_closed_form_degree_multiset(self, n):
        for nu in valid_extremal_nus(n):
            g = extremal_graph(n, nu)
            assert degree_counts(g) == expected_degree_multiset(n, nu)
            assert g.min_degree() == nu
            assert is_two_connected(g)

    def test_labeling_deterministic(self):
        a = write_graph6(extremal_graph(11, 4))
        b = write_graph6(extremal_graph(11, 4))
        assert a == b


class TestValidation:
    def test_8_3_full(self):
        g = extremal_graph(8, 3)
        report = validate_extremal(g, 8, 3)
        assert report.ok
        assert report.oracle_ran and report.oracle_not_exists
        assert report.certificate.cut == (0, 1)

    def test_14_4_oracle(self):
        g = extremal_graph(14, 4)
        report = validate_extremal(g, 14, 4)
        assert report.ok and report.oracle_ran and report.oracle_not_exists

    def test_20_5_certificate_only(self):
        g = extremal_graph(20, 5)
        report = validate_extremal(g, 20, 5)
        assert report.ok
        assert not report.oracle_ran
        assert report.certificate_ok

    def test_detects_a_broken_instance(self):
        g = extremal_graph(11, 3)
        report = validate_extremal(g, 11, 4)  # wrong nu on purpose
        assert not report.ok
        assert any("minimum degree" in f for f in report.failures)

    def test_json_shape(self):
        report = validate_extremal(extremal_graph(8, 3), 8, 3)
        js = report.to_json()
        assert js["ok"] is True
        assert js["certificate_cut"] == [0, 1]


class TestTightness:
    def test_just_below_threshold(self):
        # every instance sits strictly below the degree bound: 3*nu < n + 2
        for n in range(8, 15):
            for nu in valid_extremal_nus(n):
                g = extremal_graph(n, nu)
                assert 3 * g.min_degree() < g.n + 2

    def test_smallest_instance_is_8_3(self):
        assert valid_extremal_nus(8) == [3]
        res = find_ic_cycle_exact(extremal_graph(8, 3))
        assert res.outcome == Outcome.NOT_EXISTS
