import json

from superhilb.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestReduce:
    def test_monomial_ideal_power(self, capsys):
        code, out, _ = run(
            capsys, "--format", "json", "reduce", "--p", "2", "--q", "1",
            "--params", "zero", "x^3",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["evens"] == ["0", "0"]
        assert payload["odds"] == ["0"]
        assert payload["in_ideal"] is True

    def test_membership_of_generator(self, capsys):
        code, out, _ = run(
            capsys, "--format", "json", "reduce", "--p", "1", "--q", "1",
            "x + b0 + beta0*theta",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["in_ideal"] is True

    def test_nonmember(self, capsys):
        code, out, _ = run(
            capsys, "--format", "json", "reduce", "--p", "2", "--q", "1", "1",
        )
        assert code == 0
        assert json.loads(out)["evens"][0] == "1"

    def test_parse_error_exit_2(self, capsys):
        code, _, err = run(capsys, "reduce", "--p", "2", "--q", "1", "x +* 2")
        assert code == 2
        assert "column" in err

    def test_rank_violation_exit_3(self, capsys):
        code, _, _ = run(capsys, "reduce", "--p", "1", "--q", "2", "x")
        assert code == 3

    def test_set_parameter(self, capsys):
        code, out, _ = run(
            capsys, "--format", "json", "reduce", "--p", "1", "--q", "0",
            "--set", "a0=2", "x + 2",
        )
        assert code == 0
        assert json.loads(out)["in_ideal"] is True


class TestStrata:
    def test_two_one(self, capsys):
        code, out, _ = run(
            capsys, "--format", "json", "strata", "--p", "2", "--q", "1"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["generators"] == ["c0", "gamma0"]
        assert payload["dimension"] == [2, 2]

    def test_one_zero(self, capsys):
        code, out, _ = run(
            capsys, "--format", "json", "strata", "--p", "1", "--q", "0"
        )
        assert code == 0
        assert json.loads(out)["generators"] == []

    def test_rank_violation(self, capsys):
        code, _, _ = run(capsys, "strata", "--p", "1", "--q", "2")
        assert code == 3


class TestTransition:
    def test_pair_13_matches(self, capsys):
        code, out, _ = run(
            capsys, "--format", "json", "transition", "--k", "2",
            "--pair", "13",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["match"] is True
        assert payload["cocycle"] is True

    def test_pair_12_matches(self, capsys):
        code, out, _ = run(
            capsys, "--format", "json", "transition", "--k", "2",
            "--pair", "12",
        )
        assert code == 0
        assert json.loads(out)["match"] is True

    def test_pair_23_cocycle_flag(self, capsys):
        code, out, _ = run(
            capsys, "--format", "json", "transition", "--k", "0",
            "--pair", "23",
        )
        assert code == 0
        payload = json.loads(out)
        assert "match" not in payload
        assert payload["cocycle"] is True


class TestSplitCheck:
    def test_hilb11_single(self, capsys):
        code, out, _ = run(
            capsys, "--format", "json", "split-check", "--target", "hilb11",
            "--k", "4",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["split"] is True
        assert payload["twist"] == -2

    def test_hilb21_case_one(self, capsys):
        code, out, _ = run(
            capsys, "--format", "json", "split-check", "--target", "hilb21",
            "--k", "3",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["split"] is False
        assert payload["case"] == "I"
        assert payload["degrees"] == [0, -4]

    def test_hilb21_twist_zero_reports_certificate(self, capsys):
        code, out, _ = run(
            capsys, "--format", "json", "split-check", "--target", "hilb21",
            "--k", "0",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["split"] is True
        assert payload["case"] == "III"
        assert payload["certificate"] == {"g[0,0]": "1", "h[0,0]": "1"}

    def test_k_range_ordering_and_determinism(self, capsys):
        args = (
            "--format", "json", "split-check", "--target", "hilb11",
            "--k-range", "1..3",
        )
        code, out1, _ = run(capsys, *args)
        assert code == 0
        lines = out1.strip().splitlines()
        assert [json.loads(ln)["k"] for ln in lines] == [1, 2, 3]
        _, out2, _ = run(capsys, *args)
        assert out1 == out2

    def test_degree_bound_note(self, capsys):
        code, out, _ = run(
            capsys, "--format", "json", "split-check", "--target", "hilb21",
            "--k", "1", "--degree-bound", "3",
        )
        assert code == 0
        payload = json.loads(out)
        assert any("no solution" in note for note in payload["notes"])

    def test_negative_range_with_equals_form(self, capsys):
        code, out, _ = run(
            capsys, "split-check", "--target", "hilb11", "--k-range=-1..1",
            "--format", "json",
        )
        assert code == 0
        ks = [json.loads(ln)["k"] for ln in out.strip().splitlines()]
        assert ks == [-1, 0, 1]
