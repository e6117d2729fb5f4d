"""CLI behaviour: schemas, validation, and byte-level determinism."""

import json

import numpy as np
import pytest

from hclab.cli import ExperimentConfig, main, run


def _read(path):
    with open(path, "rb") as fh:
        return fh.read()


class TestQCurveCommand:
    def test_constant_curve_is_flat(self, tmp_path, capsys):
        out = tmp_path / "q.csv"
        code = main(
            [
                "qcurve",
                "--preset",
                "const",
                "--t-count",
                "5",
                "--order",
                "48",
                "--output",
                str(out),
            ]
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "t,q_value,direction,slack"
        for line in lines[1:]:
            t, qv, direction, slack = line.split(",")
            assert float(qv) == pytest.approx(1.0, abs=1e-12)
            assert direction == "nondecreasing"

    def test_bump_curve_nondecreasing(self, tmp_path):
        out = tmp_path / "q.csv"
        code = main(
            [
                "qcurve",
                "--preset",
                "bump",
                "--p",
                "2",
                "--q",
                "4",
                "--t-count",
                "25",
                "--order",
                "64",
                "--output",
                str(out),
            ]
        )
        assert code == 0
        rows = [line.split(",") for line in out.read_text().strip().splitlines()[1:]]
        qs = [float(r[1]) for r in rows]
        assert all(b >= a - 1e-8 * max(1.0, abs(a)) for a, b in zip(qs, qs[1:]))

    def test_json_format_carries_config_echo(self, tmp_path):
        out = tmp_path / "q.json"
        code = main(
            [
                "qcurve",
                "--preset",
                "const",
                "--t-count",
                "3",
                "--order",
                "48",
                "--format",
                "json",
                "--output",
                str(out),
            ]
        )
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["config"]["command"] == "qcurve"
        assert payload["config"]["preset"] == "const"
        assert len(payload["rows"]) == 3
        assert set(payload["rows"][0]) == {"t", "q_value", "direction", "slack"}


class TestHyperCommand:
    def test_ratio_crosses_one_at_critical_time(self, tmp_path):
        import math

        out = tmp_path / "h.csv"
        code = main(
            [
                "hyper",
                "--preset",
                "exp",
                "--preset-param",
                "a=0.8",
                "--p",
                "2",
                "--q",
                "4",
                "--s-sweep",
                "0.8*:1.2*:21",
                "--order",
                "64",
                "--output",
                str(out),
            ]
        )
        assert code == 0
        rows = [line.split(",") for line in out.read_text().strip().splitlines()[1:]]
        s_vals = np.array([float(r[0]) for r in rows])
        ratios = np.array([float(r[1]) for r in rows])
        crossings = np.nonzero((ratios[:-1] >= 1.0) & (ratios[1:] <= 1.0))[0]
        assert crossings.size == 1
        s_star = math.log(3.0) / 2.0
        step = s_vals[1] - s_vals[0]
        assert abs(s_vals[crossings[0]] - s_star) <= step + 1e-12


class TestClosureCommand:
    def test_exact_flow_passes(self, tmp_path):
        out = tmp_path / "c.csv"
        code = main(
            [
                "closure",
                "--preset",
                "quadratic",
                "--p",
                "2",
                "--q",
                "4",
                "--t-count",
                "12",
                "--t-max",
                "3",
                "--order",
                "160",
                "--inner-order",
                "192",
                "--output",
                str(out),
            ]
        )
        assert code == 0
        rows = out.read_text().strip().splitlines()[1:]
        assert len(rows) == 10  # interior times only
        assert all(line.endswith("true") for line in rows)

    def test_non_polynomial_preset_rejected(self, capsys):
        code = main(["closure", "--preset", "bump", "--t-count", "5"])
        assert code == 1
        assert "polynomial preset" in capsys.readouterr().err


class TestBooleanCommand:
    def test_sweep_table_shape_and_sharpness(self, tmp_path):
        out = tmp_path / "b.csv"
        code = main(
            [
                "boolean",
                "--p",
                "2",
                "--q",
                "4",
                "--eps-count",
                "33",
                "--output",
                str(out),
            ]
        )
        assert code == 0
        rows = [line.split(",") for line in out.read_text().strip().splitlines()[1:]]
        assert len(rows) == 3 * 33
        by_factor = {}
        for r in rows:
            by_factor.setdefault(float(r[0]), []).append(r[4] == "true")
        assert all(by_factor[0.98])
        assert all(by_factor[1.0])
        assert not all(by_factor[1.02])


class TestValidation:
    def test_bad_order_names_field(self, capsys):
        code = run(ExperimentConfig(command="qcurve", order=0))
        assert code == 2
        assert "order" in capsys.readouterr().err

    def test_closure_needs_three_times(self, capsys):
        code = run(ExperimentConfig(command="closure", t_count=2))
        assert code == 2
        assert "t_count" in capsys.readouterr().err

    def test_bad_spacing(self, capsys):
        code = run(ExperimentConfig(command="qcurve", t_spacing="cubic"))
        assert code == 2
        assert "t_spacing" in capsys.readouterr().err

    def test_inadmissible_pair_is_runtime_error(self, capsys):
        code = run(ExperimentConfig(command="qcurve", p=4.0, q=2.0, t_count=3, order=48))
        assert code == 1
        assert "error" in capsys.readouterr().err


class TestDeterminism:
    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_qcurve_reruns_byte_identical(self, tmp_path, fmt):
        paths = [tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"]
        for p in paths:
            assert (
                main(
                    [
                        "qcurve",
                        "--preset",
                        "bump",
                        "--t-count",
                        "10",
                        "--order",
                        "48",
                        "--format",
                        fmt,
                        "--output",
                        str(p),
                    ]
                )
                == 0
            )
        assert _read(paths[0]) == _read(paths[1])
