import io
import json
import subprocess
import sys

import pytest

from fdl.cli import decode_witness, encode_witness, run

DOUBLING = '{"s0": 2, "prefix": [], "period": [2]}'
POW2 = '{"s0": 1, "prefix": [], "period": [2]}'
POW3 = '{"s0": 1, "prefix": [], "period": [3]}'


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, _ = call(*argv)
    return code, json.loads(out)


def test_witness_encoding():
    witness = [(0, 1), (0, -1), (3, -1)]
    assert encode_witness(witness) == [0, -1, -4]
    assert decode_witness(encode_witness(witness)) == witness


class TestCommands:
    def test_member_example(self):
        code, data = call_json("member", "--seq", DOUBLING, "--word", "baaaaB")
        assert code == 0 and data["member"] is True and data["witness"] == [1]

    def test_member_explicit_gens(self):
        code, data = call_json("member", "--gens", "a^2,b a B", "--word", "a^-2 b a B")
        assert code == 0 and data["member"] and len(data["witness"]) == 2

    def test_seq_validate(self):
        code, data = call_json("seq-validate", "--seq", DOUBLING, "--count", "4")
        assert code == 0 and data["values"] == [2, 4, 8, 16]
        code, data = call_json("seq-validate", "--seq", '{"s0": 1, "prefix": [], "period": [1]}')
        assert code == 2 and data["error"] == "BoundedSequence"

    def test_sk_member(self):
        code, data = call_json("sk-member", "--seq", DOUBLING, "--k", "3", "--word", "b^3")
        assert code == 0 and data["member"]

    def test_rewrite(self):
        code, data = call_json("rewrite", "--seq", POW2, "--k", "3", "--m", "5")
        assert code == 0 and data["identity_holds"] and (data["q"], data["r"], data["f"]) == (1, 2, 8)
        assert data["target"] == "b^5 a^32 B^5"

    def test_word_problem(self):
        code, data = call_json("word-problem", "--seq", DOUBLING, "--word", "a^2 c^-2")
        assert code == 0 and data["trivial"] and data["syllables"] == []
        code, data = call_json("word-problem", "--seq", DOUBLING, "--word", "a C")
        assert not data["trivial"]
        assert data["syllables"] == [{"factor": "F", "word": "a"}, {"factor": "Fbar", "word": "C"}]

    def test_homology(self):
        code, data = call_json("homology-h1", "--seq", DOUBLING, "--m", "4")
        assert code == 0 and data["h1"] == {"rank": 2, "torsion": [2, 4]}
        code, data = call_json("homology-h2", "--seq", POW2, "--m", "4")
        assert data["h2"] == {"prefix": [2, 1], "tail": 1}
        code, data = call_json("homology-oracle", "--seq", POW3, "--m", "2", "--N", "6")
        assert data["agrees_with_formula"] and data["h2"]["torsion"] == [2] * 6

    def test_distinguish_example(self):
        code, data = call_json("distinguish", "--seq1", POW2, "--seq2", POW3)
        assert code == 0 and data["kind"] == "H2" and data["verdict"] == "non-isomorphic"

    def test_distinguish_equal(self):
        code, data = call_json("distinguish", "--seq1", DOUBLING, "--seq2", DOUBLING)
        assert code == 2 and data["error"] == "EqualSequences"

    def test_separate(self):
        code, data = call_json("separate", "--gens", "a^2", "--word", "a")
        assert code == 0 and data["degree"] == 2

    def test_graph_export(self):
        code, out, _ = call("graph-export", "--seq", DOUBLING, "--depth", "1")
        assert code == 0 and out.startswith("digraph")
        code, data = call_json("--format", "json", "graph-export", "--seq", DOUBLING, "--kind", "Sk", "--k", "3")
        assert code == 0 and data["vertices"] == 14

    def test_recover_and_residually_p(self):
        assert call_json("recover", "--seq", DOUBLING, "--n", "3")[1]["s_n"] == 16
        assert call_json("residually-p", "--seq", DOUBLING, "--p", "2")[1]["residually_p"]
        code, data = call_json("residually-p", "--seq", DOUBLING, "--p", "4")
        assert code == 2 and data["error"] == "NotPrime"

    def test_text_format(self):
        code, out, _ = call("--format", "text", "homology-h1", "--seq", DOUBLING, "--m", "1")
        assert code == 0 and out.splitlines()[0] == "m: 1"

    def test_sequence_from_file(self, tmp_path):
        path = tmp_path / "seq.json"
        path.write_text(DOUBLING, encoding="utf-8")
        assert call_json("member", "--seq", str(path), "--word", "a^2")[1]["witness"] == [0]


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ["bogus"],
        [],
        ["member", "--seq", DOUBLING],
        ["rewrite", "--seq", DOUBLING, "--k", "x", "--m", "2"],
        ["--format", "dot", "member", "--seq", DOUBLING, "--word", "a"],
        ["graph-export", "--kind", "Sk", "--seq", DOUBLING],
    ])
    def test_usage(self, argv):
        assert call(*argv)[0] == 64

    @pytest.mark.parametrize("argv", [
        ["member", "--seq", DOUBLING, "--word", "a x"],
        ["member", "--seq", DOUBLING, "--word", "a c"],
        ["member", "--seq", "{broken", "--word", "a"],
        ["member", "--seq", "/nonexistent/seq.json", "--word", "a"],
        ["separate", "--gens", "a^2", "--word", "a^4"],
    ])
    def test_validation(self, argv):
        code, out, _ = call(*argv)
        assert code == 2 and "error" in json.loads(out)

    def test_size_cap_env(self, monkeypatch):
        monkeypatch.setenv("FDL_SIZE_CAP", "10")
        code, data = call_json("--format", "json", "graph-export", "--seq", DOUBLING, "--depth", "6")
        assert code == 3 and data["error"] == "SizeCap"

    def test_search_cap(self):
        code, data = call_json("recover", "--seq", DOUBLING, "--n", "4", "--limit", "5")
        assert code == 3 and data["error"] == "NotFoundWithinBound"


class TestVerify:
    @pytest.mark.parametrize("argv", [
        ["member", "--seq", DOUBLING, "--word", "b a^4 B a^-2"],
        ["member", "--seq", DOUBLING, "--word", "a"],
        ["member", "--gens", "a^2,b a b", "--word", "b a b a^2"],
        ["separate", "--gens", "a^2,b a B", "--word", "b"],
        ["distinguish", "--seq1", DOUBLING, "--seq2", '{"s0": 3, "prefix": [], "period": [2]}'],
        ["distinguish", "--seq1", POW2, "--seq2", POW3],
        ["word-problem", "--seq", DOUBLING, "--word", "b a^4 B d C^4 D a"],
    ])
    def test_roundtrip(self, argv):
        code, cert = call_json(*argv)
        assert code == 0
        code, data = call_json("verify", json.dumps(cert))
        assert code == 0 and data["verified"] is True

    def test_tampered(self):
        _, cert = call_json("member", "--seq", DOUBLING, "--word", "b a^4 B")
        cert["witness"] = [0]
        assert call_json("verify", json.dumps(cert)) == (1, {"type": "membership", "verified": False})
        _, cert = call_json("separate", "--gens", "a^2", "--word", "a")
        cert["perm_a"] = [0, 1]
        assert call_json("verify", json.dumps(cert))[0] == 1
        _, cert = call_json("distinguish", "--seq1", POW2, "--seq2", POW3)
        cert["right"] = cert["left"]
        assert call_json("verify", json.dumps(cert))[0] == 1

    def test_unknown_type(self):
        assert call("verify", '{"type": "mystery"}')[0] == 2


def test_byte_identical_subprocess():
    argv = [sys.executable, "-m", "fdl", "distinguish", "--seq1", POW2, "--seq2", POW3]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and json.loads(first)["verdict"] == "non-isomorphic"
