import io
import json
import os
import subprocess
import sys

from evoclass.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def run_process(*argv, env=None):
    return subprocess.run([sys.executable, "-m", "evoclass", *argv], capture_output=True, text=True, env=env)


def jsonl(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def test_enumerate():
    code, out = run("enumerate", "--q", "2", "--n", "2")
    assert code == 0
    assert len([l for l in out.splitlines() if l.strip()]) == 16 + 1
    code, out = run("enumerate", "--q", "3", "--n", "2", "--format", "csv")
    assert len(out.splitlines()) == 82
    code, out = run("enumerate", "--q", "4", "--n", "2", "--format", "json")
    rows = jsonl(out)
    assert len(rows) == 256
    assert "[0,1]" in rows[2]["algebra"]


def test_enumerate_p_k_matches_q():
    assert run("enumerate", "--p", "2", "--k", "2", "--format", "csv") == run("enumerate", "--q", "4", "--format", "csv")


def test_check_examples():
    code, out = run("check", "--q", "2", "--left", "1,0;0,0", "--right", "0,1;0,0", "--relation", "isotopism", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["related"] and rec["witness"]["H"] == [["0", "1"], ["1", "0"]]
    code, out = run("check", "--q", "2", "--left", "1,0;0,0", "--right", "0,1;0,0", "--relation", "isomorphism", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and not rec["related"] and rec["witness"] is None
    assert rec["left_signature"] == [1, 1]
    code, out = run("check", "--q", "2", "--left", "0,0;0,0", "--right", "1,0;0,0", "--relation", "isotopism")
    assert code == 0 and "none" in out


def test_check_accepts_tuple_notation_and_strong():
    code, out = run("check", "--q", "5", "--left", "(e1,e1)", "--right", "(e1,-e1)", "--relation", "strong-isotopism", "--format", "json")
    assert code == 0 and json.loads(out)["related"]


def test_classify_examples():
    code, out = run("classify", "--q", "5", "--relation", "isomorphism", "--method", "bruteforce", "--format", "json")
    assert jsonl(out)[0]["class_count"] == 23
    code, out = run("classify", "--q", "7", "--relation", "isotopism", "--method", "invariant", "--format", "json")
    recs = jsonl(out)
    assert recs[0]["class_count"] == 4 and sum(r["size"] for r in recs[1:]) == 7**4
    code, out = run("classify", "--q", "2", "--relation", "isomorphism", "--method", "groebner", "--format", "json")
    assert jsonl(out)[0]["class_count"] == 9


def test_classify_members_and_csv():
    code, out = run("classify", "--q", "2", "--members", "--format", "json")
    recs = jsonl(out)
    assert sum(len(r["members"]) for r in recs[1:]) == 16
    code, out = run("classify", "--q", "2", "--format", "csv")
    assert out.splitlines()[0] == "class,representative,tuple,label,size"
    assert len(out.splitlines()) == 10


def test_count_maps():
    code, out = run("count-maps", "--q", "2", "--left", "0,0;0,0", "--right", "0,0;0,0", "--relation", "isotopism", "--format", "json")
    assert json.loads(out) == {"left": "0,0;0,0", "right": "0,0;0,0", "relation": "isotopism", "method": "groebner", "count": 216}
    code, out = run("count-maps", "--q", "3", "--left", "1,0;1,0", "--right", "1,0;2,0", "--method", "exhaustive", "--format", "json")
    g = run("count-maps", "--q", "3", "--left", "1,0;1,0", "--right", "1,0;2,0", "--encoding", "rabinowitsch", "--format", "json")[1]
    assert json.loads(out)["count"] == json.loads(g)["count"]


def test_groebner_command():
    code, out = run("groebner", "--q", "3", "x^2 - 1", "x - 1", "--order", "lex", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["basis"] == ["x + 2"] and rec["standard_monomials"] == 1
    code, out = run("groebner", "--q", "2", "x*y", "--field-equations", "--format", "json")
    assert json.loads(out)["standard_monomials"] == 3


def test_tables():
    code, out = run("tables", "--format", "json")
    rec = json.loads(out)
    assert code == 0
    assert rec["counts"] == {"2": 9, "3": 13, "5": 23, "7": 38}
    for entry in rec["fields"]:
        assert all(entry["agreement_with_bruteforce"].values())
        assert entry["isotopism_classes"] == 4
        if entry["q"] != 7:
            assert entry["reference_match"]["ok"]
    (q7,) = [e for e in rec["fields"] if e["q"] == 7]
    assert "(e2,2e1)" in q7["adjudication"]["text"]
    code, text = run("tables")
    assert code == 0 and "9 / 13 / 23 / 38" in text


def test_usage_errors_exit_1():
    assert run("classify", "--q", "6")[0] == 1
    assert run("check", "--q", "3", "--left", "1,0", "--right", "1,0;0,0")[0] == 1
    assert run("classify", "--q", "3", "--relation", "similarity")[0] == 1
    assert run("classify", "--q", "3", "--relation", "strong-isotopism", "--method", "invariant")[0] == 1
    assert run("classify", "--q", "3", "--q", "3", "--p", "3")[0] == 1
    assert run("classify", "--q", "3", "--cap", "bogus=3")[0] == 1
    assert run("enumerate")[0] == 1


def test_limits_exit_2():
    assert run("check", "--q", "7", "--left", "1,0;0,0", "--right", "0,1;0,0", "--relation", "isotopism")[0] == 2
    assert run("classify", "--q", "3", "--relation", "isotopism", "--cap", "isotopism_q=2")[0] == 2
    assert run("enumerate", "--q", "5", "--n", "3", "--cap", "enumeration=100")[0] == 2
    assert run("groebner", "--q", "7", "x^3*y - z", "y^2*z - x", "z^3 - x*y", "--cap", "buchberger_steps=1")[0] == 2


def test_process_exit_codes():
    assert run_process("enumerate", "--q", "2").returncode == 0
    assert run_process("nonsense").returncode == 1
    assert run_process("classify", "--q", "9", "--relation", "isotopism").returncode == 2


def test_output_independent_of_workers():
    base = ["classify", "--q", "2", "--relation", "isotopism", "--method", "groebner", "--format", "json", "--members"]
    one = run(*base, "--threads", "1")[1]
    two = run(*base, "--threads", "2")[1]
    assert one == two
    env = {**os.environ, "EVOCLASS_THREADS": "3"}
    assert run_process(*base, env=env).stdout == one


def test_timing_flag():
    code, out = run("classify", "--q", "2", "--format", "json", "--timing")
    assert "timing_ms" in jsonl(out)[0]
    assert "timing_ms" not in run("classify", "--q", "2", "--format", "json")[1]
