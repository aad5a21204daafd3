import json

from uclab.cli import main

P3_TEXT = "#universe 3\n0 1 2 3 1,2 1,3 2,3 1,2,3\n"


def body_lines(capsys):
    """Report lines without the header (the only line with a timestamp)."""
    out = capsys.readouterr().out.strip().splitlines()
    return out[1:]


def verdict_objs(lines):
    objs = [json.loads(l) for l in lines]
    return [o for o in objs if "conjecture" in o]


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


class TestCheck:
    def test_frankl_one_verdict_per_family(self, tmp_path, capsys):
        path = write(tmp_path, "fams.txt", P3_TEXT + "1 1,2\n")
        assert main(["check", "--conjecture", "frankl", "--input", path]) == 0
        lines = body_lines(capsys)
        verdicts = verdict_objs(lines)
        assert len(verdicts) == 2
        assert all(v["holds"] for v in verdicts)
        summary = json.loads(lines[-1])["summary"]
        assert summary["families"] == 2
        assert summary["per_conjecture"]["frankl"] == {"holds": 2, "fails": 0}

    def test_c21_three_verdict_lines(self, tmp_path, capsys):
        path = write(tmp_path, "fams.txt", P3_TEXT)
        assert main(["check", "--conjecture", "c21", "--input", path]) == 0
        verdicts = verdict_objs(body_lines(capsys))
        assert [v["detail"]["x"] for v in verdicts] == [1, 2, 3]
        assert all(v["holds"] for v in verdicts)

    def test_malformed_line_reports_line_number(self, tmp_path, capsys):
        path = write(tmp_path, "fams.txt", "1\n1,,2\n")
        assert main(["check", "--conjecture", "frankl", "--input", path]) == 1
        assert "line 2" in capsys.readouterr().err

    def test_non_closed_family_is_input_error(self, tmp_path, capsys):
        path = write(tmp_path, "fams.txt", "1 2\n")
        assert main(["check", "--conjecture", "frankl", "--input", path]) == 1
        assert "union-closed" in capsys.readouterr().err

    def test_c41_non_separating_needs_quotient(self, tmp_path, capsys):
        path = write(tmp_path, "fams.txt", "1,2 1,2,3\n")
        assert main(["check", "--conjecture", "c41b", "--input", path]) == 1
        assert "separating_quotient" in capsys.readouterr().err
        assert (
            main(["check", "--conjecture", "c41b", "--input", path, "--quotient"]) == 0
        )
        verdicts = verdict_objs(body_lines(capsys))
        assert verdicts[0]["detail"]["quotiented"] is True

    def test_internal_failure_exit_code(self, tmp_path, capsys, monkeypatch):
        import uclab.cli as cli
        from uclab.conjectures import DOUBLETON, Verdict

        def broken(f):
            return Verdict(DOUBLETON, "00", False, None, {})

        monkeypatch.setattr(cli, "check_doubleton_implication", broken)
        path = write(tmp_path, "fams.txt", "1\n")
        assert main(["check", "--conjecture", "c25", "--input", path]) == 3

    def test_workers_match_single_process(self, tmp_path, capsys, monkeypatch):
        path = write(tmp_path, "fams.txt", P3_TEXT + "1\n1 1,2\n")
        assert main(["check", "--conjecture", "c21", "--input", path]) == 0
        single = body_lines(capsys)
        monkeypatch.setenv("UCLAB_WORKERS", "2")
        assert main(["check", "--conjecture", "c21", "--input", path]) == 0
        assert body_lines(capsys) == single


class TestEnumerate:
    def test_count_only(self, capsys):
        assert main(["enumerate", "--n", "2", "--count-only"]) == 0
        assert capsys.readouterr().out.strip() == "8"

    def test_output_deterministic(self, tmp_path):
        a = tmp_path / "a.txt"
        b = tmp_path / "b.txt"
        assert main(["enumerate", "--n", "3", "--out", str(a)]) == 0
        assert main(["enumerate", "--n", "3", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_output_parses_back(self, tmp_path):
        out = tmp_path / "fams.txt"
        assert main(["enumerate", "--n", "2", "--out", str(out)]) == 0
        from uclab.textio import read_families

        fams = read_families(str(out))
        assert len(fams) == 8
        assert all(f.universe == 0b11 for f in fams)

    def test_size_guard(self, capsys):
        assert main(["enumerate", "--n", "7", "--count-only"]) == 1
        assert "random" in capsys.readouterr().err


class TestPartition:
    def test_golden_power_set_line(self, tmp_path, capsys):
        path = write(tmp_path, "fams.txt", P3_TEXT)
        assert main(["partition", "--input", path]) == 0
        got = body_lines(capsys)[0]
        want = open("tests/golden/partition_powerset3.jsonl").read().strip()
        assert got == want

    def test_verification_line(self, tmp_path, capsys):
        path = write(tmp_path, "fams.txt", P3_TEXT)
        assert main(["partition", "--input", path, "--verify", "exhaustive"]) == 0
        lines = [json.loads(l) for l in body_lines(capsys)]
        verdicts = [l for l in lines if l.get("conjecture") == "t33"]
        assert len(verdicts) == 1 and verdicts[0]["holds"]


class TestWitnessAndReplay:
    def test_chain_golden_and_replay(self, tmp_path, capsys):
        path = write(tmp_path, "fams.txt", P3_TEXT)
        certs = tmp_path / "certs.jsonl"
        assert main(["witness", "--input", path, "--out", str(certs)]) == 0
        got = certs.read_text().strip().splitlines()[1:-1]
        want = open("tests/golden/witness_chain_powerset3.jsonl").read().strip()
        assert "\n".join(got) == want
        assert main(["replay", "--certificates", str(certs), "--family", path]) == 0
        lines = [json.loads(l) for l in body_lines(capsys)]
        assert any(l.get("replay") == "chain" and l["ok"] for l in lines)

    def test_trace_lines_present(self, tmp_path, capsys):
        path = write(tmp_path, "fams.txt", P3_TEXT)
        assert main(["witness", "--input", path, "--trace"]) == 0
        assert any("trace_x" in l for l in body_lines(capsys))

    def test_replay_detects_tampered_counts(self, tmp_path, capsys):
        path = write(tmp_path, "fams.txt", P3_TEXT)
        certs = tmp_path / "certs.jsonl"
        assert main(["witness", "--input", path, "--out", str(certs)]) == 0
        lines = certs.read_text().splitlines()
        tampered = [
            l.replace('"counts": [2, 2]', '"counts": [2, 1]') for l in lines
        ]
        certs.write_text("\n".join(tampered) + "\n")
        assert main(["replay", "--certificates", str(certs), "--family", path]) == 2

    def test_replay_fingerprint_mismatch(self, tmp_path, capsys):
        path = write(tmp_path, "fams.txt", P3_TEXT)
        other = write(tmp_path, "other.txt", "1 1,2\n")
        certs = tmp_path / "certs.jsonl"
        assert main(["witness", "--input", path, "--out", str(certs)]) == 0
        assert main(["replay", "--certificates", str(certs), "--family", other]) == 2
        lines = [json.loads(l) for l in body_lines(capsys)]
        bad = [l for l in lines if l.get("replay") == "chain"][0]
        assert bad["ok"] is False and "mismatch" in bad["reason"]
        assert bad["certificate_fingerprint"]
        assert bad["family_fingerprints"]

    def test_replay_empty_certificate_file(self, tmp_path, capsys):
        path = write(tmp_path, "fams.txt", P3_TEXT)
        empty = write(tmp_path, "certs.jsonl", "")
        assert main(["replay", "--certificates", empty, "--family", path]) == 0
        summary = json.loads(body_lines(capsys)[-1])["summary"]
        assert summary == {"chains": 0, "verdicts": 0, "failures": 0}

    def test_replay_verdict_lines(self, tmp_path, capsys):
        path = write(tmp_path, "fams.txt", P3_TEXT)
        report = tmp_path / "report.jsonl"
        assert main(
            ["check", "--conjecture", "frankl", "--input", path, "--out", str(report)]
        ) == 0
        assert main(["replay", "--certificates", str(report), "--family", path]) == 0
        lines = [json.loads(l) for l in body_lines(capsys)]
        assert any(l.get("replay") == "verdict" and l["ok"] for l in lines)


class TestQ23:
    def test_solution_found(self, tmp_path, capsys):
        path = write(tmp_path, "multis.txt", "1 1 2 0\n")
        assert main(["q23", "--input", path]) == 0
        got = body_lines(capsys)[0]
        want = open("tests/golden/q23_example.jsonl").read().strip()
        assert got == want

    def test_hypothesis_violation_is_input_error(self, tmp_path):
        path = write(tmp_path, "multis.txt", "1 2\n")
        assert main(["q23", "--input", path]) == 1

    def test_absent_solution_is_research_finding(self, tmp_path, capsys, monkeypatch):
        import uclab.cli as cli

        monkeypatch.setattr(cli, "solve_q23", lambda mf, max_members=24: None)
        path = write(tmp_path, "multis.txt", "0 0 0\n")
        assert main(["q23", "--input", path]) == 2
        assert "research finding" in capsys.readouterr().err


class TestRandomCommand:
    def test_deterministic_output(self, tmp_path):
        a = tmp_path / "a.txt"
        b = tmp_path / "b.txt"
        args = ["random", "--n", "4", "--density", "0.3", "--seed", "11", "--count", "5"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        from uclab.textio import read_families
        from uclab.families import is_union_closed

        fams = read_families(str(a))
        assert len(fams) == 5
        assert all(is_union_closed(f) for f in fams)


class TestSequence:
    def test_rows_and_violations(self, capsys):
        assert main(["sequence", "100,50,25,12,5", "60,30,20,10,5"]) == 0
        rows = [json.loads(l) for l in body_lines(capsys)[:-1]]
        assert rows[0]["frankl_ok"] and rows[0]["conj35_ok"]
        assert [2, 30, 35] in rows[1]["corollary34_violations"]

    def test_input_file(self, tmp_path, capsys):
        path = write(tmp_path, "rows.txt", "# header\n100 40 10 5 2\n")
        assert main(["sequence", "--input", path]) == 0
        row = json.loads(body_lines(capsys)[0])
        assert row["sizes"] == [100, 40, 10, 5, 2]

    def test_no_rows_is_usage_error(self, capsys):
        assert main(["sequence"]) == 1

    def test_bad_tokens(self, capsys):
        assert main(["sequence", "10,x,3"]) == 1


class TestDeterminismAcrossRuns:
    def test_check_report_body_identical(self, tmp_path):
        path = write(tmp_path, "fams.txt", P3_TEXT + "1 1,2\n")
        a = tmp_path / "a.jsonl"
        b = tmp_path / "b.jsonl"
        args = ["check", "--conjecture", "c21", "--input", path]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_text().splitlines()[1:] == b.read_text().splitlines()[1:]
