import itertools
import os
import subprocess

import pytest

import vssdd


def running_example(mgr):
    a, b, c, d = (mgr.literal(v) for v in range(1, 5))
    return mgr.disjoin(mgr.disjoin(mgr.conjoin(a, b), mgr.conjoin(b, c)), mgr.conjoin(c, d))


def test_running_example():
    mgr = vssdd.Manager(vssdd.Vtree.balanced(4))
    f = running_example(mgr)
    assert mgr.count(f) == 8
    assert mgr.size(f) == 7
    assert mgr.unshared_size(f) == 9
    assert mgr.sdd_size(f) == 9


def test_models_match_brute_force():
    clauses = [[1, -2], [2, 3, -4], [-1, 4]]
    mgr = vssdd.Manager(vssdd.Vtree.right_linear(4), mode="normalized")
    f = mgr.compile_cnf(4, clauses)
    expected = set()
    for bits in itertools.product([False, True], repeat=4):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            expected.add(tuple(v + 1 if bits[v] else -(v + 1) for v in range(4)))
    assert {tuple(m) for m in mgr.models(f)} == expected
    assert mgr.count(f) == len(expected)


def test_canonical_handles_and_queries():
    mgr = vssdd.Manager(vssdd.Vtree.balanced(3))
    f = mgr.compile_cnf(3, [[1, 2], [-3]])
    g = mgr.compile_cnf(3, [[-3], [2, 1]])
    assert f == g and hash(f) == hash(g)
    assert mgr.equivalent(f, g)
    assert mgr.entails(f, mgr.literal(-3))
    assert mgr.negate(mgr.negate(f)) == f
    assert mgr.valid(mgr.disjoin(f, mgr.negate(f)))
    assert not mgr.satisfiable(mgr.xor(f, g))
    assert mgr.count(mgr.condition(f, [3])) == 0
    assert mgr.count(mgr.forget(f, 3)) == 6


def test_counts_over_universe():
    mgr = vssdd.Manager(vssdd.Vtree.balanced(4))
    f = mgr.conjoin(mgr.literal(1), mgr.literal(2))
    assert mgr.count(f, universe=[1, 2]) == 1
    with pytest.raises(vssdd.InvalidUniverse):
        mgr.count(f, universe=[1])


def test_big_counts_are_python_ints():
    mgr = vssdd.Manager(vssdd.Vtree.balanced(100))
    assert mgr.count(mgr.true()) == 2**100


def test_generators():
    expected = {("queens", 4, 0): 2, ("queens", 5, 0): 10, ("grid", 2, 2): 7, ("ftree", 2, 0): 15}
    for (kind, a, b), count in expected.items():
        inst = vssdd.generate(kind, a, b)
        mgr = vssdd.Manager(inst["vtree"])
        f = mgr.compile_cnf(inst["num_vars"], inst["clauses"])
        assert mgr.count(f) == count
        assert mgr.size(f) <= mgr.sdd_size(f)


def test_save_load_round_trip():
    mgr = vssdd.Manager(vssdd.Vtree.balanced(4))
    f = running_example(mgr)
    text = mgr.save(f)
    other, root = vssdd.load_diagram(text)
    assert other.count(root) == 8
    assert other.save(root) == text
    assert mgr.load(text) == f
    assert "digraph" in mgr.export_dot(f)


def test_errors():
    with pytest.raises(vssdd.ParseError):
        vssdd.parse_dimacs("1 2 0\n")
    with pytest.raises(vssdd.InvalidTerm):
        vssdd.Manager(vssdd.Vtree.balanced(2)).condition(vssdd.Manager(vssdd.Vtree.balanced(2)).true(), [1, -1])
    with pytest.raises(vssdd.VssddError):
        vssdd.Manager(vssdd.Vtree.balanced(2), mode="bogus")
    other = vssdd.Manager(vssdd.Vtree.balanced(2))
    mgr = vssdd.Manager(vssdd.Vtree.balanced(2))
    with pytest.raises(vssdd.ContractViolation):
        mgr.conjoin(mgr.literal(1), other.literal(2))


@pytest.mark.skipif("VSSDD_CLI" not in os.environ, reason="CLI path not provided")
def test_cli(tmp_path):
    cli = os.environ["VSSDD_CLI"]
    run = lambda *args: subprocess.run([cli, *args], cwd=tmp_path, capture_output=True, text=True)
    assert run("gen", "queens", "4", "-o", "q4").returncode == 0
    out = run("compile", "--cnf", "q4.cnf", "--vtree", "q4.vtree", "--compare-sdd", "--verify",
              "--porcelain", "--out", "q4.vssdd")
    assert out.returncode == 0, out.stderr
    fields = dict(line.split("=", 1) for line in out.stdout.split())
    assert fields["count"] == "2"
    assert float(fields["ratio"].rstrip("%")) <= 100.0
    assert run("query", "--diagram", "q4.vssdd", "count").stdout.strip() == "2"
    assert run("query", "--diagram", "q4.vssdd", "enumerate").stdout.count("\n") == 2
    assert run("compile", "--cnf", "missing.cnf").returncode == 2
    assert run("compile").returncode == 1
    (tmp_path / "bad.cnf").write_text("p cnf 2 1\n1 5 0\n")
    assert run("compile", "--cnf", "bad.cnf").returncode == 2
