"""Tests for instance files, generators, and the command surface."""

import json

import pytest

from cvdkernel.chordal import clique_forest, is_chordal
from cvdkernel.cli import (
    ParseError,
    canonical_no,
    canonical_yes,
    generate,
    parse_instance,
    run_command,
    write_instance,
)
from cvdkernel.graph import AnnotatedInstance
from cvdkernel.solvers import exact_cvd

C4_TEXT = "p cvd 4 4 1\ne 1 2\ne 2 3\ne 3 4\ne 1 4\n"


def plain(inst):
    return {v: set(inst.adj[v]) for v in inst.adj}


# ---------------------------------------------------------------------------
# parsing

def test_parse_basic_instance():
    inst = parse_instance(C4_TEXT)
    assert inst.vertex_count() == 4
    assert inst.k == 1
    assert inst.edges() == [(1, 2), (1, 4), (2, 3), (3, 4)]
    assert inst.mandatory_edges() == [] and inst.irrelevant_edges() == []


def test_parse_annotations():
    text = "p cvd 3 2 1\ne 1 2\ne 2 3\nm 1 2\ni 2 3\n"
    inst = parse_instance(text)
    assert inst.mandatory_edges() == [(1, 2)]
    assert inst.irrelevant_edges() == [(2, 3)]


def test_parse_accepts_bytes_comments_blanks():
    text = "c hello\n\np cvd 2 1 0\nc mid\ne 1 2\n\n"
    inst = parse_instance(text.encode())
    assert inst.edges() == [(1, 2)]


@pytest.mark.parametrize("text,fragment", [
    ("p cvd 2 1 1\ne 1 2\nm 1 5\n", "line 3"),
    ("p cvd 4 1 1\ne 1 2\nm 3 4\n", "undeclared edge"),
    ("p cvd x 1 1\ne 1 2\n", "header"),
    ("p cvd 2 1\n", "header"),
    ("e 1 2\np cvd 2 1 1\n", "before header"),
    ("p cvd 2 2 1\ne 1 2\ne 2 1\n", "duplicate edge"),
    ("p cvd 2 1 1\ne 1 3\n", "out of range"),
    ("p cvd 2 1 1\ne 1 1\n", "loop"),
    ("p cvd 2 1 1\nq 1 2\n", "unknown line"),
    ("p cvd 2 1 1\ne 1 2\np cvd 2 1 1\n", "duplicate header"),
    ("p cvd 2 2 1\ne 1 2\n", "declares 2 edges"),
    ("p cvd 3 2 1\ne 1 2\ne 2 3\nm 1 2\nm 1 2\n", "annotated twice"),
    ("", "missing header"),
])
def test_parse_rejects_malformed(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_instance(text)


def test_parse_error_names_line():
    try:
        parse_instance("p cvd 2 1 1\ne 1 2\nm 1 5\n")
    except ParseError as exc:
        assert exc.lineno == 3
    else:
        pytest.fail("expected a parse error")


# ---------------------------------------------------------------------------
# writing

def test_roundtrip_preserves_state():
    for family, kwargs in [
        ("gnp", dict(n=10, p=0.4)),
        ("planted-chordal-plus-noise", dict(n=12, holes=2)),
        ("long-clique-path", dict(bags=4, bagsize=3)),
        ("flower", dict(petals=3)),
    ]:
        for seed in range(3):
            inst, comments = generate(family, seed=seed, k=2, **kwargs)
            text = write_instance(inst, comments)
            again = parse_instance(text)
            assert again.state() == inst.state(), family
            assert write_instance(again) == write_instance(inst)


def test_writer_renumbers_gaps():
    inst = AnnotatedInstance.from_edges(4, [(1, 2), (2, 3), (3, 4)], k=1)
    inst.remove_vertex(2)
    out = parse_instance(write_instance(inst))
    assert out.vertices() == [1, 2, 3]
    assert out.edges() == [(2, 3)]


def test_writer_renumbers_annotations():
    inst = AnnotatedInstance.from_edges(5, [(2, 3), (3, 5)], k=1)
    inst.remove_vertex(1)
    inst.remove_vertex(4)
    inst.add_mandatory_edge(2, 3)
    inst.mark_irrelevant(3, 5)
    text = write_instance(inst)
    assert "m 1 2" in text and "i 2 3" in text
    again = parse_instance(text)
    assert again.mandatory_edges() == [(1, 2)]
    assert again.irrelevant_edges() == [(2, 3)]


def test_canonical_instances():
    assert is_chordal(plain(canonical_yes()))
    no = canonical_no()
    assert no.k == 0 and not is_chordal(plain(no))


# ---------------------------------------------------------------------------
# generators

def test_gnp_deterministic():
    a, ca = generate("gnp", seed=7, n=10, p=0.3)
    b, cb = generate("gnp", seed=7, n=10, p=0.3)
    assert write_instance(a, ca) == write_instance(b, cb)


def test_planted_solution_size_holds():
    for seed in range(6):
        inst, comments = generate("planted-chordal-plus-noise", seed=seed, n=13, holes=3, k=3)
        assert exact_cvd(plain(inst), 3) is not None
        assert any("<= 3" in c for c in comments)


def test_long_clique_path_shape():
    inst, _ = generate("long-clique-path", bags=7, bagsize=5)
    adj = plain(inst)
    assert is_chordal(adj)
    forest = clique_forest(adj)
    assert len(forest.bags) == 7
    assert all(len(b) == 5 for b in forest.bags)
    degrees = sorted(forest.degree(i) for i in range(7))
    assert degrees == [1, 1, 2, 2, 2, 2, 2]


def test_flower_center_is_only_answer():
    inst, _ = generate("flower", petals=3, k=1)
    assert exact_cvd(plain(inst), 1) == [1]


def test_unknown_generator_rejected():
    with pytest.raises(ValueError, match="unknown generator"):
        generate("mystery")


# ---------------------------------------------------------------------------
# commands

@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in [
        ("c4", C4_TEXT),
        ("c4_k0", "p cvd 4 4 0\ne 1 2\ne 2 3\ne 3 4\ne 1 4\n"),
        ("tree", "p cvd 3 2 1\ne 1 2\ne 2 3\n"),
        ("bad", "p cvd 2 1 1\nm 1 2\n"),
        ("annot", "p cvd 2 1 1\ne 1 2\nm 1 2\n"),
    ]:
        p = tmp_path / (name + ".cvd")
        p.write_text(text)
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


def test_kernelize_chordal_writes_canonical_yes(files):
    out = str(files["dir"] / "out.cvd")
    assert run_command(["kernelize", files["tree"], "-o", out]) == 0
    body = open(out).read()
    assert "p cvd 0 0 0" in body and "decided yes" in body


def test_kernelize_no_budget_writes_canonical_no(files):
    out = str(files["dir"] / "out.cvd")
    assert run_command(["kernelize", files["c4_k0"], "-o", out]) == 1
    assert "p cvd 4 4 0" in open(out).read()


def test_kernelize_reduced_roundtrips(files):
    out = str(files["dir"] / "out.cvd")
    trace = str(files["dir"] / "trace.json")
    assert run_command(["kernelize", files["c4"], "-o", out, "--trace", trace]) == 0
    kern = parse_instance(open(out).read())
    assert kern.vertex_count() == 4 and kern.k == 1
    record = json.load(open(trace))
    assert record["trace"] == []
    assert record["report"]["outcome"] == "reduced"
    assert len(record["report"]["passes"]) == 2


def test_kernelize_no_bootstrap_single_pass(files):
    out = str(files["dir"] / "out.cvd")
    trace = str(files["dir"] / "trace.json")
    assert run_command(["kernelize", files["c4"], "-o", out,
                        "--no-bootstrap", "--trace", trace]) == 0
    assert len(json.load(open(trace))["report"]["passes"]) == 1


def test_kernelize_byte_identical_runs(files):
    outs, traces = [], []
    for tag in ("a", "b"):
        out = str(files["dir"] / ("out_%s.cvd" % tag))
        trace = str(files["dir"] / ("trace_%s.json" % tag))
        assert run_command(["kernelize", files["c4"], "-o", out, "--trace", trace]) == 0
        outs.append(open(out).read())
        traces.append(open(trace).read())
    assert outs[0] == outs[1]
    assert traces[0] == traces[1]


def test_solve_exact_prints_answer(files, capsys):
    assert run_command(["solve", files["c4"], "--exact"]) == 0
    assert capsys.readouterr().out.strip() == "{1}"


def test_solve_exact_surfaces_no(files, capsys):
    assert run_command(["solve", files["c4_k0"], "--exact"]) == 1
    assert "no solution" in capsys.readouterr().out


def test_solve_default_greedy(files, capsys):
    assert run_command(["solve", files["c4"]]) == 0
    out = capsys.readouterr().out.strip()
    assert out.startswith("{") and out.endswith("}")


def test_solve_rejects_annotations(files):
    assert run_command(["solve", files["annot"], "--exact"]) == 2


def test_verify_equivalent_pair(files, capsys):
    out = str(files["dir"] / "out.cvd")
    run_command(["kernelize", files["c4"], "-o", out])
    assert run_command(["verify", files["c4"], out]) == 0
    assert "equivalent" in capsys.readouterr().out


def test_verify_mismatch(files, capsys):
    assert run_command(["verify", files["c4"], files["c4_k0"]]) == 1
    assert "not equivalent" in capsys.readouterr().out


def test_verify_large_inputs_structural_only(files, capsys):
    big = files["dir"] / "big.cvd"
    edges = [(i, i + 1) for i in range(1, 20)]
    big.write_text("p cvd 20 19 1\n" + "".join("e %d %d\n" % e for e in edges))
    assert run_command(["verify", str(big), str(big)]) == 0
    assert "invariants-only" in capsys.readouterr().out


def test_stats_schema_and_threshold_identities(files, capsys):
    assert run_command(["stats", files["c4"]]) == 0
    record = json.loads(capsys.readouterr().out)
    assert set(record) == {"n", "m", "k", "rules", "thresholds", "verdict", "millis"}
    th = record["thresholds"]
    assert set(th) == {"delta", "delta_prime", "kappa", "small_delta", "f"}
    k_end = record["k"]
    assert th["delta"] == (k_end + 3) * th["f"]
    assert th["delta_prime"] == th["delta"] + k_end
    assert th["small_delta"] == 2 * (k_end + 1) + 6 * th["kappa"]
    assert record["verdict"] == "reduced"


def test_generate_command_stdout(files, capsys):
    assert run_command(["generate", "flower", "--petals", "2", "-k", "1"]) == 0
    inst = parse_instance(capsys.readouterr().out)
    assert inst.vertex_count() == 7


def test_generate_unknown_family(files, capsys):
    assert run_command(["generate", "mystery"]) == 2


def test_parse_error_exit_code(files, capsys):
    out = str(files["dir"] / "out.cvd")
    assert run_command(["kernelize", files["bad"], "-o", out]) == 2


def test_usage_error_exit_code(capsys):
    assert run_command([]) == 2
    assert run_command(["kernelize"]) == 2
