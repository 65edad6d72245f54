"""Smoke test for the pytailfit extension.

Build and install first, for example with `maturin develop --release` run
from crates/python, then run `python python/smoke_test.py`.
"""

import math
import pathlib

import pytailfit

CORPUS = pathlib.Path(__file__).resolve().parents[2] / "core" / "data" / "corpus"


def check_zeta():
    assert abs(pytailfit.hurwitz_zeta(2.0, 1) - math.pi**2 / 6) < 1e-14
    try:
        pytailfit.hurwitz_zeta(1.0, 1)
    except pytailfit.TailfitError as e:
        assert str(e).startswith("divergent_series"), e
    else:
        raise AssertionError("alpha = 1 must be rejected")


def check_model():
    m = pytailfit.PowerLaw(2.5, 3)
    assert (m.alpha, m.x0) == (2.5, 3)
    assert m.ccdf(3) == 1.0
    assert abs(m.pmf(3) - (m.ccdf(3) - m.ccdf(4))) < 1e-15
    draws = m.sample(1000, 7)
    assert len(draws) == 1000 and min(draws) >= 3
    assert draws == m.sample(1000, 7)


def check_pipeline():
    name, counts = pytailfit.read_counts(CORPUS / "power_law.counts")
    assert name == "power_law" and len(counts) == 50_000

    fit = pytailfit.estimate_xmin(counts)
    alpha, x0 = fit["model"]["alpha"], fit["model"]["x0"]
    assert 3.2 < alpha < 3.8, fit
    assert fit["n_tail"] == sum(1 for c in counts if c >= x0)

    fixed = pytailfit.fit_at(counts, 1)
    assert fixed["model"]["x0"] == 1 and fixed["n_tail"] == 50_000

    se = pytailfit.bootstrap_se(counts, reps=20, seed=1)
    assert se["se_alpha"] > 0 and se["reps"] == 20

    gof = pytailfit.gof_pvalue(counts, alpha, x0, n_sims=100, seed=3)
    assert gof["n_sims"] + gof["n_failed"] == 100
    assert 0.0 <= gof["p_value"] <= 1.0

    rows = pytailfit.compare_all(counts, alpha, x0)
    families = [r["alternative"] for r in rows]
    assert families == [
        "exponential",
        "weibull",
        "log_normal",
        "tsallis",
        "yule",
        "power_law_cutoff",
    ], families
    exp = rows[0]["result"]
    assert exp["lr"] > 0 and exp["verdict"] == "power_law_favored", exp

    row = pytailfit.analyze_field(
        counts[::10], name="head", config={"bootstrap_reps": 20, "gof_sims": 100}
    )
    assert row["field"] == "head" and not row["skipped"]
    again = pytailfit.analyze_field(
        counts[::10], name="head", config={"bootstrap_reps": 20, "gof_sims": 100}
    )
    assert row == again

    try:
        pytailfit.analyze_field(counts, config={"gof_sims": 50})
    except pytailfit.TailfitError as e:
        assert str(e).startswith("config"), e
    else:
        raise AssertionError("gof_sims below 100 must be rejected")


def check_sampling():
    xs = pytailfit.sample("yule", {"alpha": 2.5}, x0=2, n=500, seed=4)
    assert len(xs) == 500 and min(xs) >= 2
    try:
        pytailfit.sample("weibull", {"q": 0.5}, n=10)
    except pytailfit.TailfitError:
        pass
    else:
        raise AssertionError("missing beta must be rejected")


if __name__ == "__main__":
    check_zeta()
    check_model()
    check_pipeline()
    check_sampling()
    print("pytailfit smoke test: ok", pytailfit.__version__)
