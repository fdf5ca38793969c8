"""Tests for the command line front end.

Most tests call run(argv) in-process and inspect stdout/stderr through
capsys; one test exercises the installed console script end to end.
Exit code contract: 0 success/verified, 1 verified-false or empty
result, 2 usage or invalid input, 3 internal failure.
"""

import subprocess
import sys

import numpy as np
import pytest

from skewframes.cli import format_gram, parse_gram, run
from skewframes.equiv import EquivalenceCertificate
from skewframes.paley import FiniteField, paley_gram
from skewframes.search import classify

from reference_rows import FULL_ROWS, row_gram

ROW_BY_KEY = {(r[0], r[1], r[2]): r for r in FULL_ROWS}


# ---------------------------------------------------------------------------
# gram text format


def test_gram_format_roundtrip_with_exact_section():
    G = paley_gram(FiniteField(3))
    text = format_gram(G)
    assert text.startswith("gram 4\n")
    assert "\nexact\n" in text
    back = parse_gram(text)
    assert np.allclose(back.values, G.values, atol=1e-15)
    assert np.array_equal(back.exact_scaled, G.exact_scaled)


def test_gram_format_roundtrip_without_exact_section():
    G = paley_gram(FiniteField(3))
    text = format_gram(G, include_exact=False)
    assert "exact" not in text
    back = parse_gram(text)
    assert back.exact_scaled is None
    assert np.allclose(back.values, G.values, atol=1e-15)


@pytest.mark.parametrize("text", [
    "not a gram\n",
    "gram 3\n1+0i 0+0i\n",          # short row
    "gram 2\n1+0i 0+0i\n",          # missing row
    "gram 1\nbogus\n",              # bad token
])
def test_parse_gram_rejects_malformed_input(text):
    with pytest.raises(ValueError):
        parse_gram(text)


# ---------------------------------------------------------------------------
# verify / decode / encode


def test_verify_good_solution(capsys):
    assert run(["verify", "--a", "F77", "--b", "F4D", "--n", "12"]) == 0
    out = capsys.readouterr().out
    assert out == "skew-Hadamard: yes; ETF(24,12): yes; regular: yes\n"


def test_verify_non_solution(capsys):
    # (8, 0) at n = 4 assembles to a skew but non-Hadamard matrix
    assert run(["verify", "--a", "8", "--b", "0", "--n", "4"]) == 1
    out = capsys.readouterr().out
    assert out == ("skew-Hadamard: no; ETF(8,4): not evaluated; "
                   "regular: not evaluated\n")


def test_verify_bad_hex_is_usage_error(capsys):
    assert run(["verify", "--a", "FFFF", "--b", "0", "--n", "2"]) == 2
    assert "error:" in capsys.readouterr().err


def test_decode_and_encode_are_inverse(capsys):
    assert run(["decode", "--hex", "24", "--n", "6"]) == 0
    signs = capsys.readouterr().out.strip()
    assert signs == "+--+--"
    assert run(["encode", "--signs", signs]) == 0
    assert capsys.readouterr().out.strip() == "24"


def test_encode_rejects_junk(capsys):
    assert run(["encode", "--signs", "+-x"]) == 2
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# paley


def test_paley_writes_parseable_gram(tmp_path, capsys):
    out = tmp_path / "g.txt"
    assert run(["paley", "--q", "7", "--out", str(out)]) == 0
    G = parse_gram(out.read_text(encoding="utf-8"))
    assert G.size == 8
    assert run(["paley", "--q", "3", "--double", "--conj"]) == 0
    G2 = parse_gram(capsys.readouterr().out)
    assert G2.size == 8


def test_paley_usage_errors(capsys):
    assert run(["paley", "--q", "5"]) == 2        # 1 mod 4
    assert run(["paley", "--q", "12"]) == 2       # not a prime power
    assert run(["paley", "--q", "7", "--conj"]) == 2  # --conj needs --double
    err = capsys.readouterr().err
    assert err.count("error:") == 3


# ---------------------------------------------------------------------------
# search / classify


def test_search_writes_rows(tmp_path, capsys):
    out = tmp_path / "rows.tsv"
    assert run(["search", "--n", "6", "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines == ["6\t24\t3D\t-\t0", "6\t2E\t3D\t-\t0",
                     "6\t31\t3D\t-\t0", "6\t3B\t3D\t-\t0"]


def test_search_empty_n_exits_1(capsys):
    assert run(["search", "--n", "18"]) == 1
    assert capsys.readouterr().out == ""


def test_classify_stdout_and_summary(capsys):
    assert run(["classify", "--n", "4"]) == 0
    out = capsys.readouterr().out
    assert "4\t8\tD\tP\t1" in out
    assert out.rstrip().endswith("1 classes")


def test_classify_empty_n(capsys):
    assert run(["classify", "--n", "18"]) == 1
    assert capsys.readouterr().out == "0 classes\n"


def test_classify_from_saved_search(tmp_path, capsys):
    rows = tmp_path / "rows.tsv"
    assert run(["search", "--n", "4", "--out", str(rows)]) == 0
    out = tmp_path / "classes.tsv"
    assert run(["classify", "--n", "4", "--in", str(rows),
                "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    direct = classify(4)
    assert lines == [f"{r.n}\t{r.a_hex}\t{r.b_hex}\t{r.symmetry_type}\t{r.class_id}"
                     for r in direct]


def test_classify_rejects_mismatched_input(tmp_path, capsys):
    rows = tmp_path / "rows.tsv"
    rows.write_text("6\t24\t3D\t-\t0\n", encoding="utf-8")
    assert run(["classify", "--n", "4", "--in", str(rows)]) == 2
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# equiv


def write_gram(path, G):
    path.write_text(format_gram(G), encoding="utf-8")


def test_equiv_detects_equivalent_grams(tmp_path, capsys):
    G = row_gram(ROW_BY_KEY[(6, "24", "02")])
    rng = np.random.default_rng(2)
    perm = tuple(int(x) for x in rng.permutation(G.size))
    phases = tuple(rng.choice([1, -1, 1j, -1j]) for _ in range(G.size))
    H = EquivalenceCertificate(perm, phases).apply(G)
    left, right = tmp_path / "l.txt", tmp_path / "r.txt"
    write_gram(left, G)
    write_gram(right, H)
    assert run(["equiv", "--left", str(left), "--right", str(right)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "equivalent"
    assert out[1].startswith("permutation: ")
    assert out[2].startswith("phases: ")


def test_equiv_detects_inequivalent_grams(tmp_path, capsys):
    left, right = tmp_path / "l.txt", tmp_path / "r.txt"
    write_gram(left, row_gram(ROW_BY_KEY[(8, "F7", "ED")]))
    write_gram(right, row_gram(ROW_BY_KEY[(8, "F7", "E9")]))
    assert run(["equiv", "--left", str(left), "--right", str(right),
                "--transitive"]) == 1
    assert capsys.readouterr().out == "inequivalent\n"


def test_equiv_missing_file(capsys):
    assert run(["equiv", "--left", "/nonexistent/l", "--right", "/nonexistent/r"]) == 2
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# minimize / discover


def test_minimize_converges_quickly(capsys):
    assert run(["minimize", "--n", "2", "--restarts", "3"]) == 0
    out = capsys.readouterr().out
    assert "value: " in out
    assert "coherence-gap: " in out
    assert out.rstrip().endswith("converged: yes")


def test_minimize_nonconvergence(capsys):
    assert run(["minimize", "--n", "3", "--restarts", "1",
                "--max-iterations", "2"]) == 1
    assert "converged: no" in capsys.readouterr().out


def test_discover_prints_record(capsys):
    assert run(["discover", "--n", "2", "--restarts", "5"]) == 0
    out = capsys.readouterr().out.strip()
    n, a_hex, b_hex, t, class_id = out.split("\t")
    assert n == "2"
    assert t == "P"
    assert class_id == "1"


def test_discover_failure_line(capsys):
    assert run(["discover", "--n", "3", "--restarts", "1",
                "--max-iterations", "2"]) == 1
    assert capsys.readouterr().out.startswith("failure: no-convergence")


# ---------------------------------------------------------------------------
# parser level


def test_unknown_command_is_usage_error():
    assert run(["frobnicate"]) == 2


def test_console_script_entry_point():
    proc = subprocess.run(
        ["skewframes", "verify", "--a", "2", "--b", "3", "--n", "2"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "skew-Hadamard: yes; ETF(4,2): yes; regular: yes\n"
