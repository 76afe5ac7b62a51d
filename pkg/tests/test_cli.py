import json

import pytest

from liespec.catalog import catalog_names, resolve
from liespec.cli import (
    CLIError,
    algebra_spec_from_dict,
    algebra_spec_to_dict,
    dispatch,
    emit,
    main,
    parse_algebra_spec,
)

ALL_CATALOG = ["abelian1", "abelian2", "abelian3", "heisenberg1",
               "heisenberg2", "heisenberg3", "engel4", "su2", "so3",
               "sl2r", "se2"]


def run(argv, tmp_path=None, fmt=None, capsys=None):
    report, args = dispatch(argv)
    return report


class TestParseAlgebraSpec:
    def test_catalog_name(self):
        spec = parse_algebra_spec("su2")
        assert spec.algebra.dim == 3
        assert spec.bases["canonical"][0] == (0, 1)

    def test_unknown_name(self):
        with pytest.raises(CLIError):
            parse_algebra_spec("sp4")

    def test_file_round_trip_all_catalog(self, tmp_path):
        for name in ALL_CATALOG:
            spec = parse_algebra_spec(name)
            path = tmp_path / f"{name}.json"
            path.write_text(json.dumps(algebra_spec_to_dict(spec)))
            back = parse_algebra_spec(str(path))
            assert back.algebra == spec.algebra, name
            assert back.bases == spec.bases, name
            assert algebra_spec_to_dict(back) == algebra_spec_to_dict(spec)

    def test_jacobi_violation_rejected(self, tmp_path):
        doc = {
            "name": "bad", "dim": 3,
            "brackets": [
                {"i": 1, "j": 2, "c": ["1", "0", "0"]},
                {"i": 1, "j": 3, "c": ["0", "1", "0"]},
            ],
        }
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(CLIError, match=r"\(1, 2, 3\)"):
            parse_algebra_spec(str(path))

    def test_exact_rational_coefficient(self, tmp_path):
        doc = {
            "name": "scaled", "dim": 3,
            "brackets": [{"i": 1, "j": 2, "c": ["0", "0", "1/3"]}],
        }
        path = tmp_path / "scaled.json"
        path.write_text(json.dumps(doc))
        spec = parse_algebra_spec(str(path))
        emitted = algebra_spec_to_dict(spec)
        assert emitted["brackets"][0]["c"] == ["0", "0", "1/3"]
        back = algebra_spec_from_dict(emitted)
        assert back.algebra == spec.algebra

    def test_float_coefficient_rejected(self):
        doc = {"name": "f", "dim": 2,
               "brackets": [{"i": 1, "j": 2, "c": [0.5, 0]}]}
        with pytest.raises(CLIError, match="exact rational"):
            algebra_spec_from_dict(doc)

    def test_json_error_has_position(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"dim": 3,,}')
        with pytest.raises(CLIError, match="line 1"):
            parse_algebra_spec(str(path))

    def test_bad_bracket_indices(self):
        doc = {"dim": 2, "brackets": [{"i": 2, "j": 1, "c": ["0", "0"]}]}
        with pytest.raises(CLIError, match="i < j"):
            algebra_spec_from_dict(doc)


class TestDispatch:
    def test_contract_su2(self):
        report = run(["contract", "su2", "--weights", "1,1"])
        assert report.exit_code == 0
        assert report.notes["Q_star"] == "4"
        assert report.notes["isomorphic_to_heisenberg1"] is True
        table = {t.name: t for t in report.tables}["structure"]
        assert table.rows == [[1, 2, 3, "1"]]

    def test_verify_growth_su2(self):
        report = run(["verify-growth", "su2", "--from", "1e3", "--to", "1e5"])
        assert report.exit_code == 0
        assert abs(report.notes["fitted_exponent"] - 2.0) < 0.05

    def test_verify_growth_torus3(self):
        report = run(["verify-growth", "torus3", "--from", "1e2",
                      "--to", "1e5", "--points-per-decade", "10"])
        assert report.exit_code == 0
        assert abs(report.notes["fitted_exponent"] - 1.5) < 0.05

    def test_failing_screen_gives_exit_one(self):
        report = run(["form", "--kind", "custom", "--weights", "1,1,2",
                      "--coeff", "1,1=-1", "--rockland-check", "8"])
        assert report.exit_code == 1
        assert report.verdicts["rockland_screen"] is False

    def test_exit_code_corpus(self, tmp_path):
        broken_file = tmp_path / "bad.json"
        broken_file.write_text("{broken")
        cases = [
            (["dimension", "se2"], 0),
            (["filtration", "sl2r"], 0),
            (["reduce", "heisenberg1", "--weights", "1,1,3",
              "--indices", "1,2,3"], 0),
            (["annuli", "--times", "1e-2,1e-3"], 0),
            (["multiplier-bound", "heisenberg", "--p", "4/3", "--q", "4"], 0),
            (["form", "--kind", "sublaplacian", "--dim", "2",
              "--rockland-check", "8"], 0),
            (["form", "--kind", "custom", "--weights", "1,1,2",
              "--coeff", "1,1=-1", "--rockland-check", "8"], 1),
        ]
        for argv, expected in cases:
            report = run(argv)
            assert report.exit_code == expected, argv
        assert main(["contract", "nosuchalgebra"]) == 2
        assert main(["contract", str(broken_file)]) == 2
        assert main(["heat-trace", "su2", "--cross-check"]) == 2
        assert main(["verify-growth", "heisenberg", "--from", "10",
                     "--to", "20"]) == 2

    def test_dimension_heisenberg2(self):
        report = run(["dimension", "heisenberg2"])
        assert report.notes["Q_star"] == "6"


class TestEmission:
    def test_json_deterministic(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            report = run(["verify-growth", "heisenberg",
                          "--from", "1e2", "--to", "1e4"])
            emit(report, "json", str(path))
        assert a.read_bytes() == b.read_bytes()

    def test_csv_growth_columns(self, tmp_path):
        report = run(["verify-growth", "heisenberg", "--from", "1e2",
                      "--to", "1e4"])
        path = tmp_path / "g.csv"
        emit(report, "csv", str(path))
        header = path.read_text().splitlines()[0]
        assert header == "s,value,fitted,target,residual,verdict"

    def test_json_schema_fields(self, tmp_path):
        report = run(["dimension", "su2"])
        path = tmp_path / "d.json"
        emit(report, "json", str(path))
        payload = json.loads(path.read_text())
        for key in ("schema", "version", "command", "seed", "tables",
                    "verdicts"):
            assert key in payload
        assert payload["schema"] == "liespec-report/1"

    def test_json_report_round_trip(self, tmp_path):
        report = run(["annuli", "--times", "1e-2"])
        path = tmp_path / "r.json"
        emit(report, "json", str(path))
        payload = json.loads(path.read_text())
        assert payload["tables"]["annuli"]["columns"] == \
            ["t", "integral", "ratio", "certified_tail", "verdict"]

    def test_algebra_document_round_trip(self, tmp_path):
        p1, p2 = tmp_path / "s1.json", tmp_path / "s2.json"
        report = run(["algebra", "engel4"])
        emit(report, "json", str(p1))
        report2 = run(["algebra", str(p1)])
        emit(report2, "json", str(p2))
        assert p1.read_bytes() == p2.read_bytes()

    def test_seed_echoed_and_env_default(self, monkeypatch):
        monkeypatch.setenv("LIESPEC_SEED", "42")
        report = run(["dimension", "su2"])
        assert report.seed == 42
        report = run(["dimension", "su2", "--seed", "7"])
        assert report.seed == 7


class TestCatalogNames:
    def test_listing_mentions_all_families(self):
        names = " ".join(catalog_names())
        for frag in ("abelian", "heisenberg", "engel4", "su2", "so3",
                     "sl2r", "se2"):
            assert frag in names

    def test_resolve_rejects_unknown(self):
        with pytest.raises(KeyError):
            resolve("f4")
