import numpy as np
import pytest

from jointmeas.cli import cli_dispatch
from jointmeas.io import load_povm, load_state, save_povm
from jointmeas.povm import (
    Povm,
    bloch_pvm,
    noisy_qubit_povm,
    outcome_distribution,
    validate_povm,
)
from jointmeas.smearing import coordinate_maps


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, povm in {
        "z": bloch_pvm((0, 0, 1)),
        "x": bloch_pvm((1, 0, 0)),
        "nz70": noisy_qubit_povm((0, 0, 1), 0.70),
        "nx70": noisy_qubit_povm((1, 0, 0), 0.70),
        "nz72": noisy_qubit_povm((0, 0, 1), 0.72),
        "nx72": noisy_qubit_povm((1, 0, 0), 0.72),
    }.items():
        p = tmp_path / f"{name}.json"
        save_povm(povm, p)
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


def run(argv, capsys):
    code = cli_dispatch(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestValidate:
    def test_valid_file(self, files, capsys):
        code, out, _ = run(["validate", files["z"]], capsys)
        assert code == 0
        assert "valid" in out

    def test_trivial_pair_file(self, tmp_path, capsys):
        trivial = Povm(("h", "t"), np.stack([np.eye(2, dtype=complex) / 2] * 2))
        path = tmp_path / "trivial.json"
        save_povm(trivial, path)
        code, out, _ = run(["validate", str(path)], capsys)
        assert code == 0
        assert "valid" in out

    def test_invalid_file(self, tmp_path, capsys):
        bad = Povm(("a", "b"), np.stack([np.diag([1.1, 0.0]), np.diag([-0.1, 1.0])]))
        path = tmp_path / "bad.json"
        save_povm(bad, path)
        code, out, _ = run(["validate", str(path)], capsys)
        assert code == 1
        assert "positivity" in out

    def test_parse_error(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{nope")
        code, _, err = run(["validate", str(path)], capsys)
        assert code == 2
        assert "line" in err

    def test_missing_file(self, tmp_path, capsys):
        code, _, err = run(["validate", str(tmp_path / "absent.json")], capsys)
        assert code == 2


class TestDistance:
    def test_value_and_witness_file(self, files, capsys):
        witness = str(files["dir"] / "w.json")
        code, out, _ = run(
            ["distance", "--metric", "inf", files["z"], files["x"], "--witness-out", witness],
            capsys,
        )
        assert code == 0
        assert "value = 0.707106781187" in out
        state = load_state(witness)
        a, _ = load_povm(files["z"])
        b, _ = load_povm(files["x"])
        pa = outcome_distribution(a, state).probs
        pb = outcome_distribution(b, state).probs
        assert float(np.abs(pa - pb).max()) == pytest.approx(1 / np.sqrt(2), abs=1e-8)

    def test_l1_metric(self, files, capsys):
        code, out, _ = run(["distance", "--metric", "l1", files["z"], files["x"]], capsys)
        assert code == 0
        assert "witness_subset" in out

    def test_strict_mode_rejects_invalid(self, tmp_path, capsys):
        bad = Povm(("a", "b"), np.stack([np.diag([1.1, 0.0]), np.diag([-0.1, 1.0])]))
        path = tmp_path / "bad.json"
        save_povm(bad, path)
        good = tmp_path / "good.json"
        save_povm(bloch_pvm((0, 0, 1)), good)
        code, _, err = run(["distance", "--metric", "inf", str(path), str(good)], capsys)
        assert code == 1
        assert "not a valid POVM" in err

    def test_lenient_mode_warns(self, tmp_path, capsys):
        slightly_off = Povm(
            ("a", "b"),
            np.stack([1.0000001 * np.eye(2) / 2, 1.0000001 * np.eye(2) / 2]),
        )
        path = tmp_path / "off.json"
        save_povm(slightly_off, path)
        code, out, err = run(
            ["distance", "--metric", "inf", str(path), str(path), "--lenient"], capsys
        )
        assert code == 0
        assert "warning" in err


class TestBounds:
    def test_cor_joint_violated_reports_and_exits_zero(self, files, capsys):
        code, out, _ = run(
            ["bounds", "--inequality", "cor-joint", files["nz72"], files["nx72"]], capsys
        )
        assert code == 0
        assert "satisfied = false" in out
        assert "necessary condition" in out

    def test_theorem1_with_joint_files(self, files, capsys):
        a, _ = load_povm(files["z"])
        b, _ = load_povm(files["x"])
        f_a, f_b = coordinate_maps(a.outcomes, b.outcomes)
        k = len(f_a.source)
        joint = Povm(f_a.source, np.stack([np.eye(2, dtype=complex) / k] * k))
        jpath = files["dir"] / "joint.json"
        save_povm(joint, jpath)
        map_a = files["dir"] / "ma.txt"
        map_b = files["dir"] / "mb.txt"
        map_a.write_text("".join(f"{s} {f_a.assignment[s]}\n" for s in f_a.source))
        map_b.write_text("".join(f"{s} {f_b.assignment[s]}\n" for s in f_b.source))
        code, out, _ = run(
            [
                "bounds",
                "--inequality",
                "theorem1",
                files["z"],
                files["x"],
                "--joint",
                str(jpath),
                "--map-a",
                str(map_a),
                "--map-b",
                str(map_b),
            ],
            capsys,
        )
        assert code == 0
        assert "X = 0.5" in out
        assert "lhs = 3.5" in out
        assert "satisfied = true" in out

    def test_missing_joint_is_usage_error(self, files, capsys):
        code, _, err = run(
            ["bounds", "--inequality", "theorem1", files["z"], files["x"]], capsys
        )
        assert code == 2
        assert "--joint" in err


class TestCheckJoint:
    def test_feasible_writes_witness(self, files, capsys):
        witness = str(files["dir"] / "witness.json")
        code, out, _ = run(
            ["check-joint", files["nz70"], files["nx70"], "--witness-out", witness], capsys
        )
        assert code == 0
        assert "status = feasible" in out
        loaded, violations = load_povm(witness)
        assert violations == []
        assert len(loaded.outcomes) == 4

    def test_infeasible_exits_one(self, files, capsys):
        code, out, _ = run(["check-joint", files["nz72"], files["nx72"]], capsys)
        assert code == 1
        assert "status = infeasible" in out


class TestQubitDemo:
    def test_deterministic_csv(self, files, capsys):
        out1 = files["dir"] / "c1.csv"
        out2 = files["dir"] / "c2.csv"
        for out in (out1, out2):
            code, _, _ = run(
                ["qubit-demo", "--theta", "1.5707963267948966", "--grid", "40", "--out", str(out)],
                capsys,
            )
            assert code == 0
        assert out1.read_bytes() == out2.read_bytes()
        header, first = out1.read_text().splitlines()[:2]
        assert header == "X,Y_cor1,Y_heinosaari"
        assert first == "0,0.5,0.292893218813"


class TestFrontier:
    def test_small_commuting_sweep(self, files, capsys):
        a = Povm(("a0", "a1"), np.stack([np.diag([1.0, 0.0]).astype(complex),
                                         np.diag([0.0, 1.0]).astype(complex)]))
        b = Povm(("b0", "b1"), np.stack([np.diag([0.7, 0.2]).astype(complex),
                                         np.diag([0.3, 0.8]).astype(complex)]))
        pa = files["dir"] / "ca.json"
        pb = files["dir"] / "cb.json"
        save_povm(a, pa)
        save_povm(b, pb)
        out = files["dir"] / "front.csv"
        code, _, _ = run(
            ["frontier", str(pa), str(pb), "--grid", "3", "--out", str(out),
             "--resolution", "1e-3"],
            capsys,
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "X_target,X_achieved,Y_achieved"
        assert len(lines) == 4
        # commuting pair: Y = 0 achievable everywhere
        for line in lines[1:]:
            assert float(line.split(",")[2]) <= 1e-3


class TestSelftest:
    def test_small_run_passes(self, capsys):
        code, out, _ = run(["selftest", "--trials", "5", "--seed", "7"], capsys)
        assert code == 0
        assert "total violations = 0" in out
