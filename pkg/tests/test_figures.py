import math
from itertools import groupby

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fblec.capacity import theta_upper_bound
from fblec.errors import DomainError
from fblec.figures import (FIG2_COLUMNS, FIG3_COLUMNS, FIG4_COLUMNS, SweepSpec, db_to_linear,
                           fig2_records, fig3_records, fig4_records, linear_to_db)


@pytest.fixture(scope="module")
def fig2():
    return fig2_records()


@pytest.fixture(scope="module")
def fig3():
    return fig3_records()


@pytest.fixture(scope="module")
def fig4():
    return fig4_records()


def series(rows, *keys):
    key = lambda r: tuple(r[k] for k in keys)
    return [list(g) for _, g in groupby(rows, key)]


class TestSweepSpec:
    def test_linear_step(self):
        assert SweepSpec("rho_db", 0.0, 40.0, step=1.0).values() == [float(i) for i in range(41)]

    def test_log_count(self):
        v = SweepSpec("theta", 1e-3, 1e-1, count=3, spacing="log").values()
        assert v == pytest.approx([1e-3, 1e-2, 1e-1], rel=1e-14)

    def test_linear_count(self):
        assert SweepSpec("mu", 0.0, 1.0, count=5).values() == [0.0, 0.25, 0.5, 0.75, 1.0]

    @pytest.mark.parametrize("kw", [
        dict(variable="snr", start=0.0, stop=1.0, step=0.1),
        dict(variable="theta", start=1.0, stop=1.0, step=0.1),
        dict(variable="theta", start=0.0, stop=1.0),
        dict(variable="theta", start=0.0, stop=1.0, step=-0.1),
        dict(variable="theta", start=0.0, stop=1.0, count=1),
        dict(variable="theta", start=0.0, stop=1.0, count=3, spacing="log"),
        dict(variable="theta", start=0.1, stop=1.0, count=3, spacing="cubic"),
    ])
    def test_rejects(self, kw):
        with pytest.raises(DomainError):
            SweepSpec(**kw)


class TestDbConversion:
    @given(st.floats(1e-12, 1e12))
    def test_round_trip(self, x):
        assert abs(db_to_linear(linear_to_db(x)) - x) <= 1e-12 * x

    def test_points(self):
        assert linear_to_db(100.0) == 20.0
        assert db_to_linear(30.0) == pytest.approx(1000.0, rel=1e-15)


class TestFig2:
    def test_shape(self, fig2):
        assert len(fig2) == 3 * 41
        assert {r["theta"] for r in fig2} == {0.001, 0.01, 0.1}
        assert sorted({r["snr_db"] for r in fig2}) == [float(i) for i in range(41)]
        assert all(tuple(r) == FIG2_COLUMNS for r in fig2)

    def test_below_ceiling(self, fig2):
        assert all(r["ec_closed_bpcu"] <= r["ec_bound_bpcu"] for r in fig2)

    def test_high_snr_agreement(self, fig2):
        assert all(r["rel_err"] <= 5e-4 for r in fig2 if r["snr_db"] >= 15)

    def test_shannon_curve_above(self, fig2):
        assert all(r["ec_shannon_infinite_bpcu"] > r["ec_oracle_bpcu"] for r in fig2)

    def test_shannon_curve_unbounded(self, fig2):
        # without decoding errors the EC keeps growing past the finite-blocklength ceiling
        top = [r for r in fig2 if r["snr_db"] == 40.0 and r["theta"] == 0.01][0]
        assert top["ec_shannon_infinite_bpcu"] > top["ec_bound_bpcu"]


class TestFig3:
    def test_infeasible_exactly_past_bound(self, fig3):
        for r in fig3:
            tb = -math.log(1e-4) / (500 * r["ce_bpcu"])
            assert r["theta_bound"] == tb == theta_upper_bound(500, r["ce_bpcu"], 1e-4)
            assert (r["status"] == "infeasible") == (r["theta"] >= tb)

    def test_ce_one_boundary(self, fig3):
        for r in fig3:
            if r["ce_bpcu"] == 1.0:
                assert (r["status"] == "infeasible") == (r["theta"] >= 0.0184207)

    def test_infeasible_rows_have_no_outputs(self, fig3):
        bad = [r for r in fig3 if r["status"] == "infeasible"]
        assert bad
        assert all(r["snr_db_required"] is None and r["message"] for r in bad)

    def test_increasing_in_theta(self, fig3):
        for s in series(fig3, "ce_bpcu"):
            snr = [r["snr_db_required"] for r in s if r["status"] == "ok"]
            assert all(a < b for a, b in zip(snr, snr[1:]))

    def test_small_theta_is_modest(self, fig3):
        first = [r for r in fig3 if r["ce_bpcu"] == 1.0][0]
        assert first["snr_db_required"] < 40.0


class TestFig4:
    def test_shape(self, fig4):
        assert len(fig4) == 2 * 3 * 20
        assert all(tuple(r) == FIG4_COLUMNS for r in fig4)

    def test_zero_mu_no_gain(self, fig4):
        assert all(r["eta_db"] == 0.0 for r in fig4 if r["mu"] == 0.0)

    def test_eta_nondecreasing_in_theta(self, fig4):
        for s in series(fig4, "rho_max_db", "mu"):
            eta = [r["eta_db"] for r in s]
            assert all(a <= b for a, b in zip(eta, eta[1:]))

    def test_eta_nondecreasing_in_mu(self, fig4):
        by = {(r["rho_max_db"], r["theta"], r["mu"]): r["eta_db"] for r in fig4}
        for (rmax, theta, mu), eta in by.items():
            for mu2 in (1e-3, 1e-2):
                if mu2 > mu:
                    assert by[rmax, theta, mu2] >= eta

    def test_ratio_consistent(self, fig4):
        for r in fig4:
            assert linear_to_db(r["eta_ratio"]) == pytest.approx(r["eta_db"], abs=1e-9)

    def test_ec_loss_small(self, fig4):
        rows = [r for r in fig4 if r["mu"] <= 1e-2 and r["theta"] >= 0.01 and r["rho_max_db"] == 30.0]
        assert rows
        assert all(r["ec_loss_rel"] <= 0.1 for r in rows)

    def test_infeasible_cells_kept(self):
        rows = fig4_records(thetas=[0.001, 0.01], mus=[1e-3], rho_max_db=[30.0])
        assert [r["status"] for r in rows] == ["infeasible", "ok"]
        assert rows[0]["eta_db"] is None
