import io
import json

import pytest

from fomc.cli import main
from fomc.graphs import gen_path, read_graph, write_graph
from fomc.trees import RootedColoredTree, read_tree, write_tree, write_tree_model
from fomc.trees import TreeModel


@pytest.fixture
def workdir(tmp_path):
    def write(name, content):
        path = tmp_path / name
        path.write_text(content, encoding="utf-8")
        return str(path)

    return tmp_path, write


def graph_text(g):
    buf = io.StringIO()
    write_graph(g, buf)
    return buf.getvalue()


def tree_text(t):
    buf = io.StringIO()
    write_tree(t, buf)
    return buf.getvalue()


def test_mc_true_and_false(workdir, capsys):
    tmp, write = workdir
    gpath = write("p5.g", graph_text(gen_path(5)))
    fpath = write("f.fo", "exists x1. exists x2. adj(x1,x2)\n")
    assert main(["mc", "--graph", gpath, "--formula", fpath]) == 0
    assert capsys.readouterr().out.strip() == "true"
    f2 = write("f2.fo", "exists x1. adj(x1,x1)\n")
    assert main(["mc", "--graph", gpath, "--formula", f2]) == 1
    assert capsys.readouterr().out.strip() == "false"


def test_mc_via_pipelines_match_naive(workdir, capsys):
    tmp, write = workdir
    gpath = write("p6.g", graph_text(gen_path(6)))
    fpath = write("f.fo", "exists x1. forall x2. adj(x1,x2) -> !x1=x2\n")
    direct = main(["mc", "--graph", gpath, "--formula", fpath])
    capsys.readouterr()
    via_td = main(
        ["mc", "--graph", gpath, "--formula", fpath, "--via", "treedepth", "--k", "3"]
    )
    capsys.readouterr()
    assert direct == via_td


def test_mc_via_tree(workdir, capsys):
    tmp, write = workdir
    star = RootedColoredTree.build({1: 0, 2: 1, 3: 1, 4: 1})
    tpath = write("star.t", tree_text(star))
    fpath = write("f.fo", "exists x1. exists x2. adj(x1,x2)\n")
    assert main(["mc", "--graph", tpath, "--formula", fpath, "--via", "tree"]) == 0


def test_equiv_exit_codes(workdir, capsys):
    tmp, write = workdir
    a = write("p5.g", graph_text(gen_path(5)))
    b = write("p6.g", graph_text(gen_path(6)))
    assert main(["equiv", "--a", a, "--b", b, "--s", "3"]) == 1
    assert capsys.readouterr().out.strip() == "inequivalent"
    assert main(["equiv", "--a", a, "--b", a, "--s", "3"]) == 0
    assert capsys.readouterr().out.strip() == "equivalent"


def test_equiv_resource_refusal(workdir, capsys):
    tmp, write = workdir
    a = write("a.g", graph_text(gen_path(40)))
    b = write("b.g", graph_text(gen_path(41)))
    code = main(["equiv", "--a", a, "--b", b, "--s", "3", "--cap", "1000"])
    assert code == 3
    assert "resource limit" in capsys.readouterr().err


def test_census(workdir, capsys):
    tmp, write = workdir
    paths = [write(f"p{i}.g", graph_text(gen_path(i))) for i in (2, 3, 2)]
    assert main(["census", *paths, "--s", "3"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out == ["0 2", "1"]


def test_kernelize_writes_kernel(workdir, capsys):
    tmp, write = workdir
    star5 = RootedColoredTree.build({1: 0, 2: 1, 3: 1, 4: 1, 5: 1, 6: 1})
    tpath = write("star5.t", tree_text(star5))
    out = str(tmp / "kernel.t")
    assert main(["kernelize", "--tree", tpath, "--s", "1", "--out", out]) == 0
    assert capsys.readouterr().out.strip() == "kept=2 bound=3"
    with open(out, encoding="utf-8") as fh:
        kernel = read_tree(fh)
    assert kernel.n == 2


def test_gen_commands(workdir, capsys):
    tmp, write = workdir
    out = str(tmp / "g.g")
    assert main(["gen", "path", "--n", "4", "--out", out]) == 0
    with open(out, encoding="utf-8") as fh:
        assert read_graph(fh) == gen_path(4)
    assert main(["gen", "halfgraph", "--t", "3", "--out", out]) == 0
    with open(out, encoding="utf-8") as fh:
        assert len(read_graph(fh).edges) == 6
    assert main(["gen", "kpt", "--k", "2", "--t", "3", "--out", out]) == 0
    with open(out, encoding="utf-8") as fh:
        assert len(read_graph(fh).edges) == 4
    recipe = {"children": [{"leaf": "a"}, {"leaf": "b"}], "flip": ["a", "b"]}
    rpath = write("r.json", json.dumps(recipe))
    assert main(["gen", "sc", "--recipe", rpath, "--out", out]) == 0
    with open(out, encoding="utf-8") as fh:
        assert read_graph(fh) == gen_path(2)


def test_gen_flip_roundtrip(workdir, capsys):
    tmp, write = workdir
    gpath = write("g.g", graph_text(gen_path(4)))
    ppath = write("parts.p", "part 1 1 2\npart 2 3 4\n")
    out1 = str(tmp / "flipped.g")
    assert (
        main(
            ["gen", "flip", "--graph", gpath, "--parts", ppath, "--rel", "1-2", "--out", out1]
        )
        == 0
    )
    out2 = str(tmp / "back.g")
    assert (
        main(
            ["gen", "flip", "--graph", out1, "--parts", ppath, "--rel", "1-2", "--out", out2]
        )
        == 0
    )
    with open(out2, encoding="utf-8") as fh:
        assert read_graph(fh) == gen_path(4)


def test_reduce_and_validate_outputs(workdir, capsys):
    tmp, write = workdir
    gpath = write("k3.g", graph_text(
        read_graph(io.StringIO("p graph 3 1\ne 1 2\ne 1 3\ne 2 3\n"))
    ))
    fpath = write("f.fo", "exists x2. exists x3. adj(x2,x3)\n")
    outdir = str(tmp / "out")
    assert main(["reduce", "--graph", gpath, "--formula", fpath, "--out", outdir]) == 0
    capsys.readouterr()
    assert main(["mc", "--graph", f"{outdir}/path.g", "--formula", f"{outdir}/psi.fo"]) == 0
    provenance = (tmp / "out" / "provenance.txt").read_text(encoding="utf-8")
    assert provenance.startswith("ordering 1 2 3")


def test_xvalidate_random_tap(workdir, capsys):
    assert main(["xvalidate", "--random", "5", "--seed", "11"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "# seed 11"
    assert out[1] == "1..5"
    assert all(line.startswith("ok") for line in out[2:])


def test_xvalidate_corpus_dir(workdir, capsys):
    tmp, write = workdir
    corpus = tmp / "corpus"
    corpus.mkdir()
    (corpus / "a.g").write_text(graph_text(gen_path(3)), encoding="utf-8")
    (corpus / "a.fo").write_text("exists x2. exists x3. adj(x2,x3)\n", encoding="utf-8")
    assert main(["xvalidate", "--dir", str(corpus)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["1..1", "ok 1 - a"]


def test_translate_identity(workdir, capsys):
    tmp, write = workdir
    fpath = write("f.fo", "exists x1. C1(x1)\n")
    out = str(tmp / "t.fo")
    assert main(["translate", "--formula", fpath, "--interp", "identity", "--out", out]) == 0
    text = (tmp / "t.fo").read_text(encoding="utf-8")
    assert "exists x1." in text


def test_validate_subcommands(workdir, capsys):
    tmp, write = workdir
    gpath = write("p3.g", graph_text(gen_path(3)))
    good = write("good.f", "p forest 3\nt 1 2\nt 2 0\nt 3 2\n")
    bad = write("bad.f", "p forest 3\nt 1 0\nt 2 1\nt 3 0\n")
    assert main(["validate", "ef", "--graph", gpath, "--witness", good]) == 0
    assert main(["validate", "ef", "--graph", gpath, "--witness", bad]) == 1

    tree = RootedColoredTree.build({4: 0, 1: 4, 2: 4, 3: 4})
    tm = TreeModel.build(tree, [(1, 1, 2, True)])
    buf = io.StringIO()
    write_tree_model(tm, buf)
    tmpath = write("tm.t", buf.getvalue())
    k3 = write(
        "k3.g", "p graph 3 1\ne 1 2\ne 1 3\ne 2 3\n"
    )
    assert main(["validate", "tm", "--graph", k3, "--witness", tmpath]) == 0
    assert main(["validate", "tm", "--graph", gpath, "--witness", tmpath]) == 1


def test_usage_error_exit_code(workdir, capsys):
    tmp, write = workdir
    fpath = write("f.fo", "exists x1. C1(x1)\n")
    missing = str(tmp / "nope.g")
    assert main(["mc", "--graph", missing, "--formula", fpath]) == 2
    bad = write("bad.fo", "exists x1. C1(\n")
    gpath = write("p3.g", graph_text(gen_path(3)))
    assert main(["mc", "--graph", gpath, "--formula", bad]) == 2


def test_deterministic_output_bytes(workdir, capsys):
    tmp, write = workdir
    out1, out2 = str(tmp / "a.g"), str(tmp / "b.g")
    main(["gen", "halfgraph", "--t", "4", "--flip", "AA,BB", "--out", out1])
    main(["gen", "halfgraph", "--t", "4", "--flip", "AA,BB", "--out", out2])
    assert (tmp / "a.g").read_bytes() == (tmp / "b.g").read_bytes()
