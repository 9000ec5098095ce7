import numpy as np
import pandas as pd
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aethercast.errors import ZeroVariance
from aethercast.featsel import (DEFAULT_BINS, fit_discretizer, mrmr_select,
                                mutual_info, pearson, relevance_report)
from aethercast.series import HourlyFrame
from helpers import hourly_index, make_frame


def frame_from_columns(**cols):
    n = len(next(iter(cols.values())))
    idx = hourly_index(n)
    return HourlyFrame(pd.DataFrame({k: np.asarray(v, dtype=float)
                                     for k, v in cols.items()}, index=idx))


class TestPearson:
    def test_self_correlation(self):
        x = np.random.default_rng(0).normal(size=200)
        assert pearson(x, x) == 1.0

    def test_antisymmetry(self):
        x = np.random.default_rng(1).normal(size=200)
        assert pearson(x, -x) == -1.0

    def test_two_pass_oracle(self):
        x = np.array([1.0, 2.0, 3.0, 4.0])
        y = np.array([2.0, 4.0, 6.0, 8.1])
        # independent brute-force computation
        mx, my = sum(x) / 4, sum(y) / 4
        cov = sum((a - mx) * (b - my) for a, b in zip(x, y)) / 4
        sx = (sum((a - mx) ** 2 for a in x) / 4) ** 0.5
        sy = (sum((b - my) ** 2 for b in y) / 4) ** 0.5
        assert pearson(x, y) == pytest.approx(cov / (sx * sy), abs=1e-12)

    def test_constant_input_rejected(self):
        with pytest.raises(ZeroVariance):
            pearson(np.ones(10), np.arange(10.0))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            pearson(np.arange(3.0), np.arange(4.0))

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=50, deadline=None)
    def test_always_in_unit_interval(self, seed):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=30)
        y = 0.9 * x + rng.normal(size=30) * 0.1
        assert -1.0 <= pearson(x, y) <= 1.0


class TestMutualInfo:
    def test_identity_equals_marginal_entropy(self):
        # distinct values split into exactly equal-mass bins: I(x;x) = ln(B)
        x = np.arange(10_000, dtype=float)
        f = frame_from_columns(a=x, b=x)
        d = fit_discretizer(f, ["a", "b"])
        mi = mutual_info(x, x, d, x_name="a", y_name="b")
        assert mi == pytest.approx(np.log(DEFAULT_BINS), abs=1e-12)

    def test_independence_bias_bound(self):
        rng = np.random.default_rng(42)
        x = rng.normal(size=10_000)
        y = rng.permutation(rng.normal(size=10_000))
        f = frame_from_columns(a=x, b=y)
        d = fit_discretizer(f, ["a", "b"])
        assert mutual_info(x, y, d, x_name="a", y_name="b") < 0.02

    def test_bivariate_gaussian_oracle(self):
        rho = 0.8
        rng = np.random.default_rng(7)
        x = rng.normal(size=10_000)
        y = rho * x + np.sqrt(1 - rho ** 2) * rng.normal(size=10_000)
        f = frame_from_columns(a=x, b=y)
        d = fit_discretizer(f, ["a", "b"])
        mi = mutual_info(x, y, d, x_name="a", y_name="b")
        analytic = 0.5 * np.log(1.0 / (1.0 - rho ** 2))
        assert analytic == pytest.approx(0.5108, abs=5e-4)
        assert abs(mi - analytic) < 0.05

    def test_symmetry(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=2_000)
        y = 0.5 * x + rng.normal(size=2_000)
        f = frame_from_columns(a=x, b=y)
        d = fit_discretizer(f, ["a", "b"])
        assert mutual_info(x, y, d, "a", "b") == pytest.approx(
            mutual_info(y, x, d, "b", "a"), abs=1e-12)

    def test_nonnegative(self):
        rng = np.random.default_rng(9)
        x, y = rng.normal(size=50), rng.normal(size=50)
        f = frame_from_columns(a=x, b=y)
        d = fit_discretizer(f, ["a", "b"])
        assert mutual_info(x, y, d, "a", "b") >= 0.0


class TestMrmr:
    def make_fixture(self, n=3_000, seed=0):
        rng = np.random.default_rng(seed)
        y = rng.normal(size=n)
        strong = y + 0.2 * rng.normal(size=n)
        medium = y + 1.0 * rng.normal(size=n)
        weak = rng.normal(size=n)
        return frame_from_columns(pm2_5=y, strong=strong, medium=medium,
                                  weak=weak)

    def test_k1_picks_max_relevance(self):
        f = self.make_fixture()
        assert mrmr_select(f, "pm2_5", k=1) == ["strong"]

    def test_duplicate_column_deprioritized(self):
        f = self.make_fixture()
        dup = HourlyFrame(f.data.assign(strong2=f.data["strong"]))
        picked = mrmr_select(dup, "pm2_5", k=2)
        assert picked[0] == "strong"
        # the exact duplicate scores relevance minus full redundancy <= 0
        # while an informative non-redundant column scores positive
        assert picked[1] != "strong2"

    def test_exhaustive_selection_is_permutation(self):
        f = self.make_fixture()
        picked = mrmr_select(f, "pm2_5", k=3)
        assert sorted(picked) == ["medium", "strong", "weak"]

    def test_target_must_be_excluded(self):
        f = self.make_fixture()
        with pytest.raises(ValueError):
            mrmr_select(f, "pm2_5", k=1, candidates=["pm2_5", "strong"])

    def test_k_exceeding_candidates(self):
        f = self.make_fixture()
        with pytest.raises(ValueError):
            mrmr_select(f, "pm2_5", k=9)

    def test_deterministic(self):
        f = self.make_fixture()
        assert mrmr_select(f, "pm2_5", k=3) == mrmr_select(f, "pm2_5", k=3)


class TestRelevanceReport:
    def test_ranking_and_csv(self, tmp_path):
        f = make_frame(2_000, seed=5)
        rep = relevance_report(f, "pm2_5")
        assert sorted(rep.ranking) == sorted(["no", "no2", "co", "so2"])
        assert rep.mi[rep.ranking[0]] >= rep.mi[rep.ranking[-1]]
        path = tmp_path / "relevance.csv"
        rep.to_csv(path)
        lines = path.read_text().splitlines()
        assert lines[0] == "feature,pearson,mi,rank"
        assert len(lines) == 5
