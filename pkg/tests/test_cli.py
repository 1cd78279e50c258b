"""End-to-end command-line coverage: every subcommand, exact output."""

import json

EX_USAGE = 64


class TestBasics:
    def test_version(self, run_cli):
        r = run_cli("--version")
        assert r.returncode == 0
        assert r.stdout == "wordav 0.1.0\n"

    def test_unknown_subcommand_is_usage_error(self, run_cli):
        r = run_cli("nope")
        assert r.returncode == EX_USAGE

    def test_no_subcommand_is_usage_error(self, run_cli):
        r = run_cli()
        assert r.returncode == EX_USAGE


class TestFixedPoint:
    def test_prefix(self, run_cli):
        r = run_cli("fixed-point", "b4", "--length", "32")
        assert r.returncode == 0
        assert r.stdout == "01210321012303210121032301230321\n"

    def test_morphism_file(self, run_cli, tmp_path):
        f = tmp_path / "m.txt"
        f.write_text("0 -> 01\n1 -> 21\n2 -> 03\n3 -> 23\n")
        r = run_cli("fixed-point", "--morphism-file", str(f), "--length", "8")
        assert r.returncode == 0
        assert r.stdout == "01210321\n"

    def test_missing_morphism_is_usage_error(self, run_cli):
        r = run_cli("fixed-point", "--length", "8")
        assert r.returncode == EX_USAGE


class TestApply:
    def test_named(self, run_cli):
        r = run_cli("apply", "g3", "0123")
        assert r.returncode == 0
        assert r.stdout == "0010112202001212\n"

    def test_from_file(self, run_cli, tmp_path):
        f = tmp_path / "rot.txt"
        f.write_text("0 -> 012\n1 -> 120\n2 -> 201\n")
        r = run_cli("apply", "--morphism-file", str(f), "012")
        assert r.returncode == 0
        assert r.stdout == "012120201\n"

    def test_unknown_morphism(self, run_cli):
        r = run_cli("apply", "zz", "01")
        assert r.returncode == EX_USAGE
        assert "unknown morphism 'zz'" in r.stderr


class TestFactors:
    def test_text(self, run_cli):
        r = run_cli("factors", "b4", "--length", "2")
        assert r.returncode == 0
        assert r.stdout == "01\n03\n10\n12\n21\n23\n30\n32\n"

    def test_json(self, run_cli):
        r = run_cli("factors", "g3", "--length", "3", "--format", "json")
        assert r.returncode == 0
        payload = json.loads(r.stdout)
        assert payload["source"] == "g3"
        assert payload["count"] == 14
        assert payload["complete"] is True
        assert payload["factors"][:3] == ["001", "010", "011"]

    def test_explicit_word_source(self, run_cli):
        r = run_cli("factors", "0102010", "--length", "3")
        assert r.returncode == 0
        assert r.stdout == "010\n020\n102\n201\n"


class TestClasses:
    def test_word_classes(self, run_cli):
        r = run_cli("classes", "0102010", "--length", "2")
        assert r.returncode == 0
        assert r.stdout == "01\n02\n"

    def test_json(self, run_cli):
        r = run_cli("classes", "01021202101", "--length", "2", "--format", "json")
        payload = json.loads(r.stdout)
        assert payload == {
            "classes": ["01", "02", "12"],
            "count": 3,
            "length": 2,
            "source": "01021202101",
        }


class TestFreeEnum:
    def test_tsv(self, run_cli):
        r = run_cli("free-enum", "5", "5/4+", "6")
        assert r.returncode == 0
        assert r.stdout == "0\t1\n1\t5\n2\t20\n3\t60\n4\t120\n5\t240\n6\t360\n"

    def test_json_and_plot_dir(self, run_cli, tmp_path):
        plots = tmp_path / "plots"
        r = run_cli(
            "free-enum",
            "3",
            "2+",
            "4",
            "--format",
            "json",
            "--plot-dir",
            str(plots),
        )
        assert r.returncode == 0
        payload = json.loads(r.stdout)
        assert payload["counts"] == [1, 3, 9, 24, 66]
        assert payload["cap_hit"] is False
        assert (plots / "free-enum.csv").read_text() == (
            "length,count\n0,1\n1,3\n2,9\n3,24\n4,66\n"
        )
        assert (plots / "free-enum.png").stat().st_size > 0

    def test_node_cap_exits_inconclusive(self, run_cli):
        r = run_cli("free-enum", "5", "5/4+", "9", "--node-cap", "50")
        assert r.returncode == 2

    def test_out_file(self, run_cli, tmp_path):
        out = tmp_path / "counts.tsv"
        r = run_cli("free-enum", "2", "2+", "3", "--out", str(out))
        assert r.returncode == 0
        assert r.stdout == ""
        assert out.read_text() == "0\t1\n1\t2\n2\t4\n3\t6\n"


class TestFreeCount:
    def test_count(self, run_cli):
        r = run_cli("free-count", "5", "5/4+", "10")
        assert r.returncode == 0
        assert r.stdout == "1080\n"


class TestBound:
    def test_values(self, run_cli):
        assert run_cli("bound", "13/10", "5/4").stdout == "52\n"
        assert run_cli("bound", "97/75", "5/4").stdout == "60\n"

    def test_equal_thresholds_rejected(self, run_cli):
        r = run_cli("bound", "5/4", "5/4")
        assert r.returncode == EX_USAGE


class TestOccurs:
    def test_positive_text(self, run_cli):
        r = run_cli("occurs", "--formula", "AA", "0110")
        assert r.returncode == 0
        assert r.stdout == "AA occurs in 0110: A=1\n"

    def test_negative_text(self, run_cli):
        r = run_cli("occurs", "--formula", "AA", "010")
        assert r.returncode == 0
        assert r.stdout == "AA does not occur in 010\n"

    def test_json(self, run_cli):
        r = run_cli("occurs", "--formula", "AA", "0110", "--format", "json")
        payload = json.loads(r.stdout)
        assert payload["occurs"] is True
        assert payload["assignment"]["images"] == {"A": "1"}

    def test_bounds_flag(self, run_cli):
        r = run_cli("occurs", "--formula", "AA", "--bounds", "A<=1", "0101")
        assert r.stdout == "AA does not occur in 0101\n"

    def test_bad_formula_usage_error(self, run_cli):
        r = run_cli("occurs", "--formula", "A)", "01")
        assert r.returncode == EX_USAGE


class TestDivides:
    def test_negative(self, run_cli):
        r = run_cli("divides", "AA", "AB.AC.BA.CA.CB")
        assert r.returncode == 0
        assert r.stdout == "AA does not divide AB.AC.BA.BC.CA\n"

    def test_positive_json(self, run_cli):
        r = run_cli("divides", "AA", "AA", "--format", "json")
        payload = json.loads(r.stdout)
        assert payload["divides"] is True
        assert payload["divisor"] == "AA"
        assert payload["formula"] == "AA"


class TestCircularReverse:
    def test_circular(self, run_cli):
        assert run_cli("circular", "3").stdout == "ABCA.BCAB.CABC\n"
        assert run_cli("circular", "1").stdout == "AA\n"

    def test_reverse(self, run_cli):
        r = run_cli("reverse", "ABCA.CABC.BCB")
        assert r.stdout == "ABA.BACB.CBAC\n"
        back = run_cli("reverse", r.stdout.strip())
        assert back.stdout == "ABA.BCAB.CABC\n"


class TestCheckSync:
    def test_all_pairs_pass(self, run_cli):
        r = run_cli("check-sync", "g6")
        assert r.returncode == 0
        assert r.stdout == (
            "[PASS] synchronization(g6) letters=4 pairs_checked=16"
            " prefix_length=3 suffix_length=2 width=5\n"
        )

    def test_all_pairs_failure_has_witness_and_exit_1(self, run_cli):
        r = run_cli("check-sync", "g3")
        assert r.returncode == 1
        assert r.stdout == (
            "[FAIL] synchronization(g3) letters=4 pairs_checked=16"
            " prefix_length=2 suffix_length=2 width=4\n"
            '  witness: {"letter": 3, "offset": 2, "pair": [3, 3]}\n'
        )

    def test_restricted_to_base_passes(self, run_cli):
        r = run_cli("check-sync", "g3", "--restrict-to-base")
        assert r.returncode == 0
        assert "pairs_checked=8" in r.stdout


class TestCheckClasses:
    def test_g6(self, run_cli):
        r = run_cli("check-classes", "g6", "--min", "2")
        assert r.returncode == 0
        assert r.stdout == (
            "[PASS] conjugacy-classes(g6) factors_stored=464 lengths_checked=12"
            " max_factor_count=60\n"
            "  [PASS] conjugacy-classes(g6):synchronization letters=4"
            " pairs_checked=8 prefix_length=3 suffix_length=2 width=5\n"
        )

    def test_json_range(self, run_cli):
        r = run_cli("check-classes", "g3", "--min", "3", "--format", "json")
        payload = json.loads(r.stdout)
        assert payload["verdict"] == "pass"
        assert payload["params"]["direct_range"] == [3, 10]


class TestCheckFreeness:
    def test_m6_small_window(self, run_cli):
        r = run_cli(
            "check-freeness",
            "m6",
            "--source-spec",
            "5/4+",
            "--alphabet",
            "5",
            "--target-spec",
            "13/10+,25",
            "--max-len",
            "8",
        )
        assert r.returncode == 0
        assert r.stdout == (
            "[PASS] image-freeness(m6) counts=[0, 5, 20, 60, 120, 240, 360, 480,"
            " 600] max_len=8 period_limit=36 words_enumerated=1885\n"
        )

    def test_m15_fails_with_witness(self, run_cli):
        r = run_cli(
            "check-freeness",
            "m15",
            "--source-spec",
            "5/4+",
            "--alphabet",
            "5",
            "--target-spec",
            "97/75+,61",
            "--format",
            "json",
        )
        assert r.returncode == 1
        payload = json.loads(r.stdout)
        assert payload["verdict"] == "fail"
        w = payload["witnesses"][0]
        assert w["source"] == "01230413201423102413042103240123041"
        assert w["repetition"] == {
            "exponent": "233/180",
            "length": 233,
            "period": 180,
            "start": 281,
        }


class TestCheckExclusion:
    def test_g2_unit_c4(self, run_cli):
        r = run_cli("check-exclusion", "g2", "--formula", "C4", "--bounds", "*<=1")
        assert r.returncode == 0
        assert r.stdout == "[PASS] formula-exclusion(g2,C4) window=5\n"

    def test_m6_reverse_fails_with_witness(self, run_cli):
        r = run_cli(
            "check-exclusion",
            "m6",
            "--formula",
            "ABCA.BCAB.CBC",
            "--bounds",
            "A+B<=24,C<=22",
            "--source-spec",
            "5/4+",
            "--alphabet",
            "5",
            "--format",
            "json",
        )
        assert r.returncode == 1
        payload = json.loads(r.stdout)
        assert payload["verdict"] == "fail"
        assert payload["witnesses"][0]["images"] == {"A": "21", "B": "0", "C": "21"}

    def test_plot_dir_writes_reports(self, run_cli, tmp_path):
        plots = tmp_path / "p"
        r = run_cli(
            "check-exclusion",
            "g2",
            "--formula",
            "C4",
            "--bounds",
            "*<=1",
            "--plot-dir",
            str(plots),
        )
        assert r.returncode == 0
        names = sorted(p.name for p in plots.iterdir())
        assert names == [
            "check-exclusion-components.csv",
            "check-exclusion-verdicts.png",
        ]


class TestBacktrack:
    def test_text(self, run_cli):
        r = run_cli("backtrack", "--formula", "AA", "--alphabet", "2")
        assert r.returncode == 0
        assert r.stdout == (
            "exhausted formula=AA k=2 longest=010 length=3 cap=100 nodes=7\n"
        )

    def test_json(self, run_cli):
        r = run_cli(
            "backtrack", "--formula", "AA", "--alphabet", "2", "--format", "json"
        )
        payload = json.loads(r.stdout)
        assert payload["outcome"] == "exhausted"
        assert payload["longest"] == "010"
        assert payload["longest_length"] == 3
        assert payload["nodes"] == 7
        assert payload["adjusted_nodes"] == 14
        assert payload["milestones"] == [[1, 1], [3, 2], [4, 3]]

    def test_reached_cap_exits_zero(self, run_cli):
        r = run_cli("backtrack", "--formula", "AA", "--alphabet", "3", "--cap", "60")
        assert r.returncode == 0
        assert r.stdout.startswith("reached_cap formula=AA k=3")

    def test_node_cap_exits_two(self, run_cli):
        r = run_cli(
            "backtrack",
            "--formula",
            "C3",
            "--alphabet",
            "2",
            "--node-cap",
            "100",
        )
        assert r.returncode == 2
        assert r.stdout.startswith("node_capped formula=ABCA.BCAB.CABC k=2")

    def test_bad_cap_usage_error(self, run_cli):
        r = run_cli("backtrack", "--formula", "AA", "--alphabet", "2", "--cap", "0")
        assert r.returncode == EX_USAGE


class TestExplore:
    def test_binary_exhausts(self, run_cli):
        r = run_cli("explore", "2")
        assert r.returncode == 0
        assert r.stdout == (
            "exhausted formula=conjugacy-classes>=2 k=2 longest=01 length=2"
            " cap=200 nodes=5\n"
        )

    def test_six_letters_reaches_cap(self, run_cli):
        r = run_cli("explore", "6", "--cap", "200")
        assert r.returncode == 0
        assert r.stdout.startswith("reached_cap formula=conjugacy-classes>=2 k=6")
        assert "length=200" in r.stdout


class TestVerifyPaper:
    def test_capped_run_is_deterministic_and_inconclusive(self, run_cli):
        args = (
            "verify-paper",
            "--node-cap",
            "2000",
            "--backtrack-cap",
            "8",
            "--probe-length",
            "64",
        )
        first = run_cli(*args)
        assert first.returncode == 1  # m15 freeness still fails inside the cap
        head = first.stdout.splitlines()[0]
        assert head.startswith("[FAIL] verify-paper components=17")
        second = run_cli(*args)
        assert second.stdout == first.stdout

    def test_override_mutation_control(self, run_cli, tmp_path):
        f = tmp_path / "broken.txt"
        f.write_text("0 -> 01\n1 -> 01\n2 -> 01\n3 -> 01\n")
        r = run_cli(
            "verify-paper",
            "--override",
            "g6=" + str(f),
            "--node-cap",
            "2000",
            "--backtrack-cap",
            "8",
            "--probe-length",
            "64",
            "--format",
            "json",
        )
        assert r.returncode == 1
        payload = json.loads(r.stdout)
        assert "synchronization(g6)" in payload["stats"]["failed"]
        assert payload["params"]["overrides"] == ["g6"]

    def test_timings_go_to_stderr(self, run_cli):
        r = run_cli(
            "verify-paper",
            "--node-cap",
            "500",
            "--backtrack-cap",
            "4",
            "--probe-length",
            "32",
            "--timings",
        )
        lines = r.stderr.strip().splitlines()
        assert len(lines) == 17
        assert all(": " in line and line.endswith("s") for line in lines)
