import json
from io import StringIO

import pytest

import catalan_stanley.enumeration
from catalan_stanley.cli import run
from catalan_stanley.verify import run_verification


def invoke(*args):
    out, err = StringIO(), StringIO()
    code = run(list(args), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


class TestCount:
    def test_text(self):
        assert invoke("count", "--size", "14") == (0, "208012\n", "")

    def test_json(self):
        code, out, _ = invoke("count", "--size", "14", "--format", "json")
        assert code == 0
        assert json.loads(out) == {"size": 14, "count": "208012"}

    def test_csv(self):
        assert invoke("count", "--size", "4", "--format", "csv")[1] == "size,count\n4,2\n"

    def test_invalid_size(self):
        code, _, err = invoke("count", "--size", "0")
        assert code == 2
        assert "error:" in err


class TestEnumerate:
    def test_small_listing(self):
        code, out, _ = invoke("enumerate", "--size", "4")
        assert code == 0
        assert out.splitlines() == ["(((())))", "(()()())"]

    def test_json(self):
        code, out, _ = invoke("enumerate", "--size", "3", "--format", "json")
        assert json.loads(out) == {"size": 3, "trees": ["(()())"]}

    def test_golden_order_size_six(self):
        _, out, _ = invoke("enumerate", "--size", "6")
        lines = out.splitlines()
        assert len(lines) == 14
        assert lines[0] == "(((((())))))"
        assert lines[1] == "((((())())))"
        assert lines[-1] == "(()()()()())"


class TestSample:
    def test_deterministic_bytes(self):
        first = invoke("sample", "--size", "30", "--seed", "5")
        second = invoke("sample", "--size", "30", "--seed", "5")
        assert first == second
        assert first[0] == 0

    def test_count_flag(self):
        code, out, _ = invoke("sample", "--size", "6", "--seed", "1", "--count", "3")
        assert code == 0
        assert len(out.splitlines()) == 3

    def test_zero_count(self):
        assert invoke("sample", "--size", "6", "--seed", "1", "--count", "0") == (0, "", "")


class TestAge:
    def test_exact_csv(self):
        code, out, _ = invoke("age", "--size", "5", "--exact")
        assert code == 0
        assert out == "value,numerator,denominator\n1,1,5\n2,4,5\n"

    def test_json(self):
        code, out, _ = invoke("age", "--size", "4", "--format", "json")
        assert json.loads(out)["pmf"] == {"1": "1/2", "2": "1/2"}

    def test_text(self):
        code, out, _ = invoke("age", "--size", "4", "--format", "text")
        assert out == "1 1/2\n2 1/2\n"

    def test_asym(self):
        code, out, _ = invoke("age", "--size", "100", "--asym", "--format", "json")
        payload = json.loads(out)
        assert payload["expected"]["order"] == "O(n^-2)"
        assert 2.6 < payload["expected"]["value"] < 2.8


class TestAncestor:
    def test_exact_csv(self):
        code, out, _ = invoke("ancestor", "--size", "4", "--depth", "1")
        assert out == "value,numerator,denominator\n1,1,2\n2,1,2\n"

    def test_capacity_error(self):
        code, _, err = invoke(
            "ancestor", "--size", "9", "--depth", "1", "--order", "4"
        )
        assert code == 2
        assert "order >= 9" in err

    def test_asym(self):
        code, out, _ = invoke(
            "ancestor", "--size", "10000", "--depth", "1", "--asym", "--format", "json"
        )
        payload = json.loads(out)
        assert payload["expected"]["value"] == pytest.approx(2500.625, abs=1e-3)


class TestConstants:
    def test_default_json_with_30_digits(self):
        code, out, _ = invoke("constants", "--precision", "30")
        payload = json.loads(out)
        assert payload["c0"] == "2.71825364286795285266483619282"
        assert set(payload) == {"c0", "c1", "c2", "c3"}

    def test_text_format(self):
        code, out, _ = invoke("constants", "--precision", "10", "--format", "text")
        assert out.startswith("c0 = 2.718253643")

    def test_precision_capacity(self):
        code, _, err = invoke("constants", "--precision", "80")
        assert code == 2
        assert "60" in err


class TestBijection:
    def test_tree_to_path(self):
        code, out, _ = invoke("bijection", "--tree", "(((()()()))()(()(())))")
        assert code == 0
        assert "path: UUUDUDUDDDUDUUDUUDDD" in out
        assert "is_catalan_stanley: True" in out

    def test_path_to_tree(self):
        code, out, _ = invoke("bijection", "--path", "UUUDDD", "--format", "json")
        payload = json.loads(out)
        assert payload["tree"] == "(((())))"
        assert payload["age"] == 2

    def test_invalid_path(self):
        code, _, err = invoke("bijection", "--path", "UDD")
        assert code == 2
        assert "error:" in err

    def test_invalid_tree_offset(self):
        code, _, err = invoke("bijection", "--tree", "(()")
        assert code == 2
        assert "offset 3" in err


class TestVerifyCommand:
    def test_small_run_passes(self):
        code, out, _ = invoke("verify", "--max-size", "6", "--max-r", "2", "--order", "8")
        assert code == 0
        lines = out.splitlines()
        assert all(line.startswith(("PASS", "FAIL", "passed")) for line in lines)
        assert len([l for l in lines if l.startswith("PASS")]) >= 25
        assert lines[-1].endswith("failed 0")

    def test_includes_named_f_check(self):
        code, out, _ = invoke("verify", "--max-size", "4", "--max-r", "2", "--order", "8")
        assert code == 0
        assert any(line.startswith("PASS f(4,2)=1 ") for line in out.splitlines())

    def test_json_format(self):
        code, out, _ = invoke(
            "verify", "--max-size", "5", "--max-r", "2", "--order", "8",
            "--format", "json",
        )
        payload = json.loads(out)
        assert payload["failed"] == 0
        assert payload["passed"] == len(payload["checks"])

    def test_corrupted_catalan_table_fails(self, monkeypatch):
        healthy = catalan_stanley.enumeration.catalan

        def corrupted(n):
            return healthy(n) + (1 if n == 3 else 0)

        monkeypatch.setattr(catalan_stanley.enumeration, "catalan", corrupted)
        code, out, _ = invoke("verify", "--max-size", "6", "--max-r", "2", "--order", "8")
        assert code == 1
        assert any(line.startswith("FAIL count(5)") for line in out.splitlines())

    def test_byte_identical_runs(self):
        first = invoke("verify", "--max-size", "5", "--max-r", "2", "--order", "6")
        second = invoke("verify", "--max-size", "5", "--max-r", "2", "--order", "6")
        assert first == second


class TestUsageErrors:
    def test_unknown_command(self):
        assert invoke("nonsense")[0] == 2

    def test_unknown_flag(self):
        assert invoke("count", "--sizes", "3")[0] == 2

    def test_missing_required(self):
        assert invoke("count")[0] == 2

    def test_exclusive_flags(self):
        assert invoke("age", "--size", "4", "--exact", "--asym")[0] == 2


class TestReportShape:
    def test_report_counts(self):
        report = run_verification(max_size=5, max_r=2, order=8)
        assert report.ok
        assert report.num_passed == len(report.checks)
        assert report.num_failed == 0
        parsed = json.loads(report.to_json())
        assert parsed["passed"] == report.num_passed

    def test_scope_validation(self):
        with pytest.raises(ValueError):
            run_verification(max_size=3)
