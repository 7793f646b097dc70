import io
import json
import math

import pytest

from randdeg.degseq import DegreeSequence, gen_family
from randdeg.harness import (
    COLUMNS,
    NOT_APPLICABLE,
    PASS,
    ConfigError,
    DegenerateGrid,
    ExperimentConfig,
    InfeasibleCell,
    ResultTable,
    check_colour_distribution,
    check_cycle_mass,
    check_giant,
    check_green_law,
    check_green_tail,
    check_kernel_uniqueness,
    check_scaling,
    check_star_separation,
    check_star_separation_probability,
    cycle_mass_bound,
    doubling_ratios,
    fit_log_squared,
    fit_power,
    gnuplot_script,
    load_config,
    run_experiment,
    sample_replicate,
)
from randdeg.graph import components
from randdeg.harness.checks import binomial_sigma


# ---------------------------------------------------------------- config


def test_config_grid_product_and_list():
    c = ExperimentConfig("regular", {"n": [10, 20], "d": 3})
    assert c.cells() == [{"n": 10, "d": 3}, {"n": 20, "d": 3}]
    c = ExperimentConfig("regular", [{"n": 10, "d": 3}, {"n": 12, "d": 4}])
    assert [D.m for D in c.sequences()] == [15, 24]
    assert ExperimentConfig("regular").cells() == []


@pytest.mark.parametrize("kwargs", [
    {"family": "nope"},
    {"family": "regular", "replicates": 0},
    {"family": "regular", "mode": "guess"},
    {"family": "regular", "measurements": ["colour"]},
    {"family": "regular", "workers": 0},
    {"family": "regular", "grid": "n=3"},
])
def test_config_validation(kwargs):
    with pytest.raises(ConfigError):
        ExperimentConfig(**kwargs)


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"family": "regular", "colour": 1})


def test_config_round_trip(tmp_path):
    c = ExperimentConfig("path-heavy", {"n": [100, 200], "f": 3}, replicates=4, seed=9,
                         measurements=["structure", "mixing"], burn_in=100, options={"alpha": 0.01})
    assert ExperimentConfig.from_json(c.to_json()) == c
    c.save(tmp_path / "c.json")
    assert load_config(tmp_path / "c.json") == c
    assert json.loads(c.to_json())["h_function"] == "ln ln n"


def test_infeasible_cell_is_reported_before_sampling():
    c = ExperimentConfig("clique-leaves", {"n": [12, 10], "D": 3})
    buf = io.StringIO()
    with pytest.raises(InfeasibleCell) as exc:
        run_experiment(c, buf)
    assert exc.value.cell == 1
    assert buf.getvalue() == ""


# ---------------------------------------------------------------- runner


def test_regular_rows_have_a_giant():
    c = ExperimentConfig("regular", {"n": 1024, "d": 3}, replicates=5, seed=1)
    t = run_experiment(c)
    assert len(t) == 5
    assert all(int(r["largest"]) >= 0.99 * 1024 for r in t.rows)
    assert all(r["status"] == "ok" and r["schema"] == "1" for r in t.rows)


def test_two_stars_diameter_three():
    c = ExperimentConfig("two-stars", {"n": 64}, measurements=["structure", "diameter"])
    (row,) = run_experiment(c).rows
    assert row["diameter"] == "3" and row["diameter_exact"] == "1"


def test_empty_grid_gives_header_only():
    buf = io.StringIO()
    t = run_experiment(ExperimentConfig("regular"), buf)
    assert len(t) == 0
    assert buf.getvalue().strip() == ",".join(COLUMNS)


def test_rerun_is_byte_identical(tmp_path):
    c = ExperimentConfig("three-regular-leaves", {"k": [20, 40]}, replicates=3, seed=5,
                         measurements=["structure", "diameter", "mixing", "bounds"])
    run_experiment(c, tmp_path / "a.csv")
    run_experiment(c, tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    c.workers = 2
    run_experiment(c, tmp_path / "c.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "c.csv").read_bytes()


def test_different_seeds_differ():
    rows = [run_experiment(ExperimentConfig("path-heavy", {"n": 300, "f": 4}, replicates=3, seed=s)).to_csv()
            for s in (1, 2)]
    assert rows[0] != rows[1]


def test_rows_agree_with_sampled_graph():
    c = ExperimentConfig("path-heavy", {"n": [200, 400], "f": 4}, replicates=3, seed=2)
    t = run_experiment(c)
    for row in t.rows:
        G = sample_replicate(c, int(row["cell"]), int(row["replicate"])).graph
        D = DegreeSequence.of(G.degrees.tolist())
        assert (int(row["n"]), int(row["m"]), int(row["m_ne2"]), int(row["n2"])) == (D.n, D.m, D.m_ne2, D.n2)
        sizes = sorted((len(p) for p in components(G)), reverse=True)
        assert int(row["largest"]) == sizes[0]
        assert row["seed_key"] == f"2:{row['cell']}:{row['replicate']}"


def test_bound_columns_record_both_sides():
    c = ExperimentConfig("clique-leaves", {"n": 24, "D": 4}, replicates=2, seed=0,
                         measurements=["structure", "bounds"])
    for row in run_experiment(c).rows:
        for side in ("walk_bound_lhs", "walk_bound_rhs", "diam_cond_lhs", "diam_cond_rhs"):
            assert row[side] != ""
        assert float(row["walk_bound_lhs"]) <= float(row["walk_bound_rhs"])
        assert row["walk_bound_holds"] == "1"


def test_exhausted_rows_are_marked_and_run_continues():
    c = ExperimentConfig("two-stars", {"n": [200, 6]}, replicates=1, mode="reject")
    t = run_experiment(c)
    assert [r["status"] for r in t.rows] == ["exhausted", "ok"]
    assert t.rows[0]["n"] == ""


def test_result_table_csv_round_trip(tmp_path):
    c = ExperimentConfig("regular", {"n": 30, "d": 3}, replicates=2)
    t = run_experiment(c, tmp_path / "r.csv")
    back = ResultTable.read_csv(tmp_path / "r.csv")
    assert back.rows == t.rows
    assert back.column("m", int) == [45, 45]
    with pytest.raises(ValueError):
        ResultTable.read_csv(io.StringIO("a,b\n1,2\n"))


# ---------------------------------------------------------------- fitting


def test_fit_power_recovers_exponent():
    xs = [10, 100, 1000, 10000]
    f = fit_power(xs, [3 * x ** 0.5 for x in xs])
    assert f.slope == pytest.approx(0.5) and f.r2 == pytest.approx(1.0)


def test_fit_log_squared():
    xs = [2 ** k for k in range(9, 14)]
    f = fit_log_squared(xs, [2 * math.log(x) ** 2 + 1 for x in xs])
    assert f.slope == pytest.approx(2) and f.intercept == pytest.approx(1)


def test_fit_degenerate_grids():
    with pytest.raises(DegenerateGrid):
        fit_power([1, 2, 3], [1, 2, 3])
    with pytest.raises(DegenerateGrid):
        fit_power([10, 20, 40, 80], [1, 2, 3, 4])
    with pytest.raises(ValueError):
        fit_power([1, 10, 100, 1000], [1, 0, 1, 1])


def test_doubling_ratios():
    assert doubling_ratios([4, 2, 8], [10, 5, 20]) == [2, 2]
    with pytest.raises(DegenerateGrid):
        doubling_ratios([2, 5], [1, 2])


def test_gnuplot_script():
    f = fit_power([10, 100, 1000, 10000], [1, 2, 4, 8])
    s = gnuplot_script(f, "d.dat", "o.png")
    assert "set logscale xy" in s and "'d.dat'" in s and "o.png" in s


# ---------------------------------------------------------------- checks


def test_binomial_sigma():
    assert binomial_sigma(0.5, 100) == 0.05
    assert binomial_sigma(0.5, 0) == math.inf


def test_cycle_mass_not_applicable_without_excess():
    r = check_cycle_mass(ExperimentConfig("regular", {"n": 30, "d": 2}, replicates=2))
    assert r.verdict == NOT_APPLICABLE


def test_cycle_mass_cubic_always_passes():
    D = gen_family("regular", n=200, d=3)
    assert cycle_mass_bound(D) == pytest.approx(203 * math.log(300))
    r = check_cycle_mass(ExperimentConfig("regular", {"n": 200, "d": 3}, replicates=10))
    assert r.verdict == PASS and r.cells[0]["lhs"] == 1.0


def test_colour_distribution_not_applicable_for_cubic():
    r = check_colour_distribution(ExperimentConfig("regular", {"n": 100, "d": 3}, replicates=2))
    assert r.verdict == NOT_APPLICABLE


def test_green_law_needs_green_edges():
    r = check_green_law(ExperimentConfig("regular", {"n": 50, "d": 3}, replicates=3))
    assert r.verdict == NOT_APPLICABLE


def test_green_law_small_path_heavy():
    c = ExperimentConfig("path-heavy", {"n": 300, "f": 5}, replicates=60, seed=3)
    r = check_green_law(c)
    assert r.verdict == PASS
    assert r.cells[0]["used"] == 60 and r.cells[0]["p_value"] > 0.001


def test_green_tail_check():
    r = check_green_tail(50, 1000, 5, 500, replicates=20_000)
    assert r.verdict == PASS and r.cells[0]["lhs"] <= r.cells[0]["rhs"]


def test_kernel_uniqueness_forest_branch():
    r = check_kernel_uniqueness(ExperimentConfig("subcritical-paths", {"n": 40, "n1": 40}, replicates=3))
    assert r.verdict == PASS
    assert r.cells[0]["branch"] == "kernel empty" and r.cells[0]["max_count"] == 0


def test_kernel_uniqueness_cubic():
    r = check_kernel_uniqueness(ExperimentConfig("regular", {"n": 256, "d": 3}, replicates=10))
    assert r.verdict == PASS and r.cells[0]["max_count"] == 1


def test_star_separation_preconditions():
    with pytest.raises(ValueError):
        check_star_separation_probability(27000, 10)
    with pytest.raises(ValueError):
        check_star_separation_probability(27000, 15, replicates=0)
    with pytest.raises(ValueError):
        check_star_separation(ExperimentConfig("regular", {"n": 10, "d": 3}))


def test_star_separation_records_switching_bound():
    r = check_star_separation_probability(27000, 15, replicates=10, seed=1)
    cell = r.cells[0]
    m = cell["m"]
    assert cell["pair_edge_bound"] == pytest.approx((m ** (2 / 3) / 225) / (2 * m / 3))
    assert cell["centre_degree"] == 2 and cell["replicates"] == 10


def test_scaling_ratio_two_stars():
    c = ExperimentConfig("two-stars", {"n": [64, 128, 256]}, measurements=["structure"],
                         options={"measure": "tau", "form": "ratio"})
    r = check_scaling(c)
    assert r.verdict == PASS
    assert all(1.6 <= q <= 2.4 for q in r.metadata["ratios"])


def test_scaling_degenerate_grid_is_not_applicable():
    c = ExperimentConfig("regular", {"n": [100, 200, 400], "d": 3}, options={"measure": "largest"})
    assert check_scaling(c).verdict == NOT_APPLICABLE


def test_scaling_writes_gnuplot_files(tmp_path):
    prefix = tmp_path / "largest"
    c = ExperimentConfig("regular", {"n": [100, 300, 600, 1200], "d": 3}, seed=1,
                         options={"measure": "largest", "expected": 1.0, "gnuplot": str(prefix)})
    r = check_scaling(c)
    assert r.verdict == PASS and r.metadata["fit"]["slope"] == pytest.approx(1.0, abs=0.05)
    assert (tmp_path / "largest.dat").exists() and (tmp_path / "largest.gp").exists()


def test_giant_small_cells():
    r = check_giant(ExperimentConfig("regular", {"n": 512, "d": 3}, replicates=5))
    assert r.verdict == PASS and r.cells[0]["supercritical"]
    r = check_giant(ExperimentConfig("subcritical-paths", {"n": 4096}, replicates=5))
    assert r.verdict == PASS and not r.cells[0]["supercritical"]
