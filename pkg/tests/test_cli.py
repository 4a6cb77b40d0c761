"""Command-line interface: the simulate / analyze / report contract."""

import csv
import json

from gbh.cli import main


def _write_config(path, **overrides):
    doc = {
        "mode": "oneway",
        "m": 4,
        "n": 10,
        "pi": [0.2, 0.5, 0.8],
        "pi_dot": 0.0,
        "lambda": 0.5,
        "alpha": 0.05,
        "procedures": ["plain_bh", "adaptive_gbh:one_way"],
        "reps": 20,
        "seed": 7,
    }
    doc.update(overrides)
    path.write_text(json.dumps(doc))
    return path


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(ln for ln in fh if not ln.startswith("#")))


class TestSimulate:
    def test_grid_cardinality(self, tmp_path):
        cfg = _write_config(tmp_path / "cfg.json")
        out = tmp_path / "out.csv"
        assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0
        rows = _read_csv(out)
        assert len(rows) == 6  # 3 pi values x 2 procedures
        assert {r["procedure"] for r in rows} == {"plain_bh", "adaptive_gbh:one_way"}
        assert {r["pi"] for r in rows} == {"0.2", "0.5", "0.8"}
        for r in rows:
            assert 0.0 <= float(r["fdr_hat"]) <= 1.0
            assert 0.0 <= float(r["power_hat"]) <= 1.0

    def test_bad_lambda_names_field(self, tmp_path, capsys):
        cfg = _write_config(tmp_path / "cfg.json", **{"lambda": 1.0})
        out = tmp_path / "out.csv"
        assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 2
        assert "lambda" in capsys.readouterr().err

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = _write_config(tmp_path / "cfg.json", typo_field=3)
        assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "o.csv")]) == 2
        assert "typo_field" in capsys.readouterr().err

    def test_rerun_byte_identical(self, tmp_path):
        cfg = _write_config(tmp_path / "cfg.json", pi=[0.3, 0.6], reps=15)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["simulate", "--config", str(cfg), "--out", str(out1)]) == 0
        assert main(["simulate", "--config", str(cfg), "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_env_seed_override(self, tmp_path, monkeypatch):
        cfg = _write_config(tmp_path / "cfg.json", pi=[0.5], reps=15)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["simulate", "--config", str(cfg), "--out", str(out1)]) == 0
        monkeypatch.setenv("GBH_SEED", "12345")
        assert main(["simulate", "--config", str(cfg), "--out", str(out2)]) == 0
        rows1, rows2 = _read_csv(out1), _read_csv(out2)
        assert rows2[0]["seed"] == "12345"
        assert rows1[0]["fdr_hat"] != rows2[0]["fdr_hat"] or (
            rows1[0]["power_hat"] != rows2[0]["power_hat"]
        )

    def test_missing_config_is_io_error(self, tmp_path):
        assert main(["simulate", "--config", str(tmp_path / "nope.json"),
                     "--out", str(tmp_path / "o.csv")]) == 3

    def test_twoway_modes(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "mode": "twoway_cells", "m": 3, "n": 4, "p": 2,
            "pi_rc": [0.4, 0.8], "pi_r": 0.2, "pi_c": 0.2,
            "procedures": ["oracle_gbh:cells_four_term", "naive_adaptive_bh"],
            "reps": 10, "seed": 3,
        }))
        out = tmp_path / "out.csv"
        assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0
        rows = _read_csv(out)
        assert len(rows) == 4
        assert rows[0]["p"] == "2"

    def test_incompatible_variant_for_mode(self, tmp_path, capsys):
        cfg = _write_config(
            tmp_path / "cfg.json", procedures=["adaptive_gbh:cells_four_term"]
        )
        assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "o.csv")]) == 2
        assert "incompatible" in capsys.readouterr().err


def _write_table(path, rows, header=("row_id", "col_id", "member_id", "p_value")):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


class TestAnalyze:
    def test_two_by_two_plain_bh(self, tmp_path):
        table = _write_table(tmp_path / "in.csv", [
            ("fam1", "envA", "", "0.001"),
            ("fam1", "envB", "", "0.9"),
            ("fam2", "envA", "", "0.002"),
            ("fam2", "envB", "", "0.8"),
        ])
        out = tmp_path / "out.csv"
        assert main(["analyze", "--in", str(table), "--proc", "plain_bh",
                     "--alpha", "0.05", "--out", str(out)]) == 0
        rows = _read_csv(out)
        assert [r["rejected"] for r in rows] == ["1", "0", "1", "0"]
        text = out.read_text()
        assert "# rejections=2 N=4" in text
        assert "m=2 n=2" in text

    def test_negative_pvalue_reports_line(self, tmp_path, capsys):
        table = _write_table(tmp_path / "in.csv", [
            ("a", "x", "", "0.5"),
            ("a", "y", "", "-0.1"),
        ])
        code = main(["analyze", "--in", str(table), "--proc", "plain_bh",
                     "--out", str(tmp_path / "o.csv")])
        assert code == 2
        assert "line 3" in capsys.readouterr().err

    def test_ragged_two_way_adaptive(self, tmp_path):
        rows = [
            ("f1", "e1", "m1", "0.001"),
            ("f1", "e1", "m2", "0.004"),
            ("f1", "e2", "m1", "0.2"),
            ("f2", "e1", "m1", "0.003"),
            ("f2", "e2", "m1", "0.6"),
            ("f2", "e2", "m2", "0.7"),
            ("f2", "e2", "m3", "0.8"),
        ]
        table = _write_table(tmp_path / "in.csv", rows)
        out = tmp_path / "out.csv"
        assert main(["analyze", "--in", str(table), "--proc", "adaptive_gbh",
                     "--alpha", "0.05", "--lambda", "0.5", "--out", str(out)]) == 0
        got = _read_csv(out)
        assert len(got) == 7
        # step-up postcondition: every rejected weighted p-value is at
        # most R * alpha / N
        n = len(got)
        n_rej = sum(int(r["rejected"]) for r in got)
        for r in got:
            if r["rejected"] == "1":
                assert float(r["weighted_p"]) <= n_rej * 0.05 / n + 1e-12
        assert "layout=twoway_cells" in out.read_text()

    def test_equal_size_variant_on_ragged_grid_exits_4(self, tmp_path):
        rows = [
            ("f1", "e1", "m1", "0.01"),
            ("f1", "e1", "m2", "0.02"),
            ("f1", "e2", "m1", "0.2"),
            ("f2", "e1", "m1", "0.03"),
            ("f2", "e2", "m1", "0.6"),
        ]
        table = _write_table(tmp_path / "in.csv", rows)
        code = main(["analyze", "--in", str(table), "--proc", "adaptive_gbh",
                     "--variant", "equal_cells_four_term",
                     "--out", str(tmp_path / "o.csv")])
        assert code == 4

    def test_one_way_grouping(self, tmp_path):
        table = _write_table(tmp_path / "in.csv", [
            ("g1", "0.001"), ("g1", "0.02"), ("g2", "0.9"), ("g2", "0.95"),
        ], header=("row_id", "p_value"))
        out = tmp_path / "out.csv"
        assert main(["analyze", "--in", str(table), "--proc", "adaptive_gbh",
                     "--one-way", "--out", str(out)]) == 0
        assert "layout=oneway groups=2" in out.read_text()

    def test_variant_flag_only_for_adaptive(self, tmp_path, capsys):
        table = _write_table(tmp_path / "in.csv", [
            ("a", "x", "", "0.5"), ("a", "y", "", "0.2"),
            ("b", "x", "", "0.1"), ("b", "y", "", "0.9"),
        ])
        code = main(["analyze", "--in", str(table), "--proc", "plain_bh",
                     "--variant", "cells_four_term",
                     "--out", str(tmp_path / "o.csv")])
        assert code == 2
        assert "--variant" in capsys.readouterr().err

    def test_lsl_requires_one_way(self, tmp_path):
        table = _write_table(tmp_path / "in.csv", [
            ("a", "x", "", "0.5"), ("a", "y", "", "0.2"),
            ("b", "x", "", "0.1"), ("b", "y", "", "0.9"),
        ])
        code = main(["analyze", "--in", str(table), "--proc", "lsl_gbh",
                     "--out", str(tmp_path / "o.csv")])
        assert code == 4

    def test_incomplete_grid_rejected(self, tmp_path, capsys):
        table = _write_table(tmp_path / "in.csv", [
            ("a", "x", "", "0.5"), ("b", "y", "", "0.2"),
        ])
        code = main(["analyze", "--in", str(table), "--proc", "plain_bh",
                     "--out", str(tmp_path / "o.csv")])
        assert code == 2
        assert "incomplete grid" in capsys.readouterr().err


class TestReport:
    def _simulate(self, tmp_path, **overrides):
        cfg = _write_config(tmp_path / "cfg.json", **overrides)
        out = tmp_path / "sim.csv"
        assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0
        return out

    def test_pivot_shape_and_round_trip(self, tmp_path):
        sim = self._simulate(tmp_path)
        out = tmp_path / "pivot.csv"
        assert main(["report", "--in", str(sim), "--out", str(out)]) == 0
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        header, data = rows[0], rows[1:]
        assert header == [
            "pi",
            "plain_bh_fdr", "plain_bh_power",
            "adaptive_gbh:one_way_fdr", "adaptive_gbh:one_way_power",
        ]
        assert len(data) == 3
        # round-trip: pivot cells match the simulate rows exactly
        sim_rows = _read_csv(sim)
        lookup = {
            (r["procedure"], r["pi"]): (r["fdr_hat"], r["power_hat"])
            for r in sim_rows
        }
        for row in data:
            pi = row[0]
            assert tuple(row[1:3]) == lookup[("plain_bh", pi)]
            assert tuple(row[3:5]) == lookup[("adaptive_gbh:one_way", pi)]

    def test_empty_data_section(self, tmp_path):
        sim = tmp_path / "sim.csv"
        with open(self._simulate(tmp_path), newline="") as fh:
            header = fh.readline()
        sim.write_text(header)
        assert main(["report", "--in", str(sim), "--out", str(tmp_path / "p.csv")]) == 2

    def test_schema_mismatch(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b,c\n1,2,3\n")
        assert main(["report", "--in", str(bad), "--out", str(tmp_path / "p.csv")]) == 2

    def test_explicit_group_by(self, tmp_path):
        sim = self._simulate(tmp_path, pi=[0.5], **{"lambda": [0.3, 0.6]})
        out = tmp_path / "pivot.csv"
        assert main(["report", "--in", str(sim), "--out", str(out),
                     "--group-by", "lambda"]) == 0
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0][0] == "lambda"
        assert len(rows) == 3

    def test_ambiguous_sweep_needs_group_by(self, tmp_path, capsys):
        sim = self._simulate(tmp_path, pi=[0.2, 0.5], **{"lambda": [0.3, 0.6]})
        assert main(["report", "--in", str(sim), "--out", str(tmp_path / "p.csv")]) == 2
        assert "--group-by" in capsys.readouterr().err
