import json
import shutil
import subprocess
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

import corpus as C
from torictool.cli.main import main
from torictool.cli.parsing import (
    GermFile,
    format_germ_file,
    format_phase_file,
    parse_germ_file,
    parse_phase_file,
)
from torictool.errors import ParseError
from torictool.exact import GaussianRational as G, LinearForm, PhaseVector, SymbolBasis
from torictool.germ import JetMap

SIX_FIRST = """# two toric vectors, no torsion
symbols sqrt2 i
phi 1 = 3*sqrt2 + 4*i
phi 2 = 2*sqrt2 + 6*i
phi 3 = -1*sqrt2 + 2*i
"""
TORSION_TWO = """symbols sqrt2
phi 1 = 1/6 + 1*sqrt2
phi 2 = 1/2 - 6*sqrt2
"""
TORSION_SEVEN = """symbols sqrt2
phi 1 = 1/7 + 1*sqrt2
phi 2 = 3/7 - 6*sqrt2
"""
IMPURE = format_phase_file(C.IMPURE)
GERM = """dim 2
maxdeg 2
lambda 1 = exact 1/4 + 0 I
lambda 2 = exact 1/2 + 0 I
term 1 (0,2) 1 + 0 I
term 1 (1,1) 1 + 0 I
"""


def run(tmp_path, capsys, *args, files=None, env=None, monkeypatch=None):
    paths = {}
    for name, text in (files or {}).items():
        p = tmp_path / name
        p.write_text(text)
        paths[name] = str(p)
    argv = [paths.get(a, a) for a in args]
    code = main(argv)
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), (json.loads(err) if err else None)


def test_parse_phase_file_examples():
    phi = parse_phase_file(SIX_FIRST)
    assert phi == C.combo((1, "sqrt2", (3, 2, -1)), (2, "i", (2, 3, 1)),
                          basis=SymbolBasis(("sqrt2", "i")))
    half = parse_phase_file("phi 1 = 1/2\n")
    assert half[0].rational_part == F(1, 2)


@pytest.mark.parametrize("text,line,col", [
    ("symbols sqrt2\nphi 1 = sqrt2 *\n", 2, 9),
    ("symbols sqrt2\nphi 1 = 1 * sqrt3\n", 2, 13),
    ("phi 1 = 1/2\nphi 1 = 1/3\n", 2, 5),
    ("phi 1 = 1/0\n", 1, 11),
    ("phi 2 = 1\n", 1, None),
])
def test_parse_phase_file_errors(text, line, col):
    with pytest.raises(ParseError) as info:
        parse_phase_file(text)
    assert info.value.line == line
    if col is not None:
        assert info.value.column == col


def test_parse_germ_file_matches_hand_built():
    g = parse_germ_file(GERM)
    built = JetMap.from_jordan([v for _, v in g.lambdas], g.eps, g.terms, g.maxdeg)
    hand = JetMap.from_jordan([G(F(1, 4)), G(F(1, 2))], [0, 0], {(0, (0, 2)): 1, (0, (1, 1)): 1}, 2)
    assert built == hand


def test_parse_linear_germ():
    g = parse_germ_file("dim 2\nmaxdeg 3\nlambda 1 = exact 2 + 0 I\nlambda 2 = exact 0 + 1 I\n")
    assert g.terms == {} and g.lambdas == [("exact", G(2)), ("exact", G(0, 1))]


@pytest.mark.parametrize("text", [
    "dim 2\nmaxdeg 2\nlambda 1 = exact 2 + 0 I\nlambda 2 = exact 3 + 0 I\neps 2 = 1\n",
    "dim 2\nmaxdeg 2\nlambda 1 = exact 2 + 0 I\nlambda 2 = exact 3 + 0 I\nterm 1 (1,0) 1 + 0 I\n",
    "dim 2\nmaxdeg 2\nlambda 1 = exact 2 + 0 I\nlambda 2 = exact 3 + 0 I\nterm 1 (3,0) 1 + 0 I\n",
    "dim 2\nmaxdeg 2\nlambda 1 = exact 0 + 0 I\nlambda 2 = exact 3 + 0 I\n",
    "dim 2\nmaxdeg 2\nlambda 1 = exact 2 + 0 I\n",
    "dim 1\nmaxdeg 2\nlambda 1 = exact 2 I\n",
    "dim 1\nmaxdeg 2\nlambda 1 = exact 2 + 0 I\nterm 1 (2) 0 + 0 I\nterm 1 (2) 1 + 0 I\n",
])
def test_parse_germ_file_rejects(text):
    with pytest.raises(ParseError) as info:
        parse_germ_file(text)
    assert info.value.line >= 1


rationals = st.fractions(min_value=-30, max_value=30, max_denominator=15)


@st.composite
def phase_vectors(draw):
    names = draw(st.lists(st.sampled_from(["sqrt2", "sqrt3", "i", "pi", "a"]), unique=True, max_size=3))
    basis = SymbolBasis(tuple(names))
    n = draw(st.integers(1, 4))
    forms = [LinearForm(basis, draw(rationals), tuple(draw(rationals) for _ in names)) for _ in range(n)]
    return PhaseVector.from_forms(forms)


@settings(max_examples=100, deadline=None)
@given(phase_vectors())
def test_phase_file_round_trip(phi):
    assert parse_phase_file(format_phase_file(phi)) == phi


@st.composite
def germ_files(draw):
    n = draw(st.integers(1, 3))
    D = draw(st.integers(2, 4))
    gauss = st.builds(G, rationals, rationals)
    if draw(st.booleans()):
        lam = [("exact", draw(gauss.filter(lambda z: z != G(0)))) for _ in range(n)]
        eps = [0] + [int(lam[j] == lam[j - 1] and draw(st.booleans())) for j in range(1, n)]
    else:
        lam = [("phase", draw(st.integers(1, 5))) for _ in range(n)]
        eps = [0] * n
    terms = {}
    for _ in range(draw(st.integers(0, 5))):
        Q = tuple(draw(st.lists(st.integers(0, D), min_size=n, max_size=n)))
        if 2 <= sum(Q) <= D:
            terms[(draw(st.integers(0, n - 1)), Q)] = draw(gauss.filter(lambda z: z != G(0)))
    return GermFile(n, D, lam, eps, terms)


@settings(max_examples=100, deadline=None)
@given(germ_files())
def test_germ_file_round_trip(g):
    back = parse_germ_file(format_germ_file(g))
    assert back == g


def test_analyze_torsion_two(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, "analyze", "p.txt", files={"p.txt": TORSION_TWO})
    assert code == 0
    assert out["torsion"]["tau"] == 2 and out["torsion"]["m"] == 6 and out["torsion"]["q"] == 9
    assert out["toric_degree"] == 2
    assert set(out["tuple"]) >= {"vectors", "coefficients", "reduced", "m"}
    assert set(out["verdict"]) >= {"torus_dimension", "weight_matrix", "criterion", "compatibility_required"}
    assert "certified" in out


def test_resonances_first_example(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, "resonances", "p.txt", "--coordinate", "2", "--max-degree", "6",
                       files={"p.txt": SIX_FIRST})
    assert code == 0
    assert out["resonant_multi_indices"] == [[1, 0, 1]]
    assert out["coordinate"] == 2 and out["max_degree"] == 6 and "generators" in out


def test_resonances_all_coordinates_strict(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, "resonances", "p.txt", "--strict", files={"p.txt": SIX_FIRST})
    assert code == 0
    assert [c["resonant_multi_indices"] for c in out["coordinates"]] == [[], [[1, 0, 1]], []]


def test_classify_impure(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, "classify", "p.txt", files={"p.txt": IMPURE})
    assert code == 0 and out["classification"] == "impure_torsion"


def test_simplify_found_and_not_found(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, "simplify", "p.txt",
                       files={"p.txt": format_phase_file(C.SIMPLIFIABLE)})
    assert code == 0 and out["status"] == "found" and len(out["H"]) == 4
    code, out, _ = run(tmp_path, capsys, "simplify", "p.txt", files={"p.txt": TORSION_SEVEN})
    assert code == 0 and out["status"] == "not_found" and "search_bound" in out
    assert out["certified"] is False


def test_simplify_torsion_free_is_precondition_error(tmp_path, capsys):
    code, out, err = run(tmp_path, capsys, "simplify", "p.txt", files={"p.txt": SIX_FIRST})
    assert code == 2 and err["error"] == "precondition_violation"


def test_normalize_exact(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, "normalize", "g.txt", files={"g.txt": GERM})
    assert code == 0 and out["mode"] == "exact"
    assert out["residual_max"] in ("0", 0, "0.0")
    psi = {(row["coordinate"], tuple(row["exponent"])): row for row in out["psi"]}
    assert psi[(1, (1, 1))]["value"] == {"re": "-8", "im": "0"}


def test_normalize_phase_mode(tmp_path, capsys):
    germ = "dim 2\nmaxdeg 3\nlambda 1 = phase 1\nlambda 2 = phase 2\nterm 1 (1,1) 1 + 0 I\nterm 2 (2,0) 1/2 + 1 I\n"
    code, out, _ = run(tmp_path, capsys, "normalize", "g.txt", "--phases", "p.txt",
                       files={"g.txt": germ, "p.txt": SIX_FIRST})
    assert code == 0 and out["mode"] == "phase" and out["certified"] is True


def test_normalize_env_precision(tmp_path, capsys, monkeypatch):
    germ = "dim 1\nmaxdeg 2\nlambda 1 = phase 1\nterm 1 (2) 1 + 0 I\n"
    monkeypatch.setenv("TORICTOOL_PRECISION", "128")
    code, out, _ = run(tmp_path, capsys, "normalize", "g.txt", "--phases", "p.txt",
                       files={"g.txt": germ, "p.txt": SIX_FIRST})
    assert code == 0 and out["precision"] == 128
    monkeypatch.setenv("TORICTOOL_PRECISION", "lots")
    code, _, err = run(tmp_path, capsys, "normalize", "g.txt", "--phases", "p.txt",
                       files={"g.txt": germ, "p.txt": SIX_FIRST})
    assert code == 2


def test_precision_failure_exit_three(tmp_path, capsys):
    germ = "dim 2\nmaxdeg 2\nlambda 1 = phase 1\nlambda 2 = phase 2\nterm 2 (2,0) 1 + 0 I\n"
    phases = "symbols a b\nphi 1 = 1*a\nphi 2 = 1*b\n"
    code, _, err = run(tmp_path, capsys, "normalize", "g.txt", "--phases", "p.txt", "--precision", "128",
                       "--symbol-value", "a=1e-60", "--symbol-value", "b=3e-60",
                       files={"g.txt": germ, "p.txt": phases})
    assert code == 3 and err["error"] == "precision_failure"


def test_parse_error_exit_one(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, "analyze", "p.txt", files={"p.txt": "symbols sqrt2\nphi 1 = sqrt2 *\n"})
    assert code == 1 and err["error"] == "parse_error" and err["line"] == 2 and err["column"] == 9


def test_missing_file_is_parse_error(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, "analyze", str(tmp_path / "missing.txt"))
    assert code == 1


def test_flow_exact_nilpotent(tmp_path, capsys):
    germ = "dim 2\nmaxdeg 2\nlambda 1 = exact 0 + 0 I\nlambda 2 = exact 0 + 0 I\nterm 1 (0,2) 1 + 0 I\n"
    code, out, _ = run(tmp_path, capsys, "flow", "g.txt", "--time", "2", files={"g.txt": germ})
    assert code == 0 and out["mode"] == "exact"
    rows = {(r["coordinate"], tuple(r["exponent"])): r["value"]["re"] for r in out["flow"]}
    assert rows[(1, (0, 2))] == "2"


def test_flow_numeric(tmp_path, capsys):
    germ = "dim 2\nmaxdeg 3\nlambda 1 = phase 1\nlambda 2 = phase 2\n"
    phases = "symbols a\nphi 1 = 1/4*a\nphi 2 = 1/2*a\n"
    germ += "term 2 (2,0) 1 + 0 I\n"
    code, out, _ = run(tmp_path, capsys, "flow", "g.txt", "--phases", "p.txt", "--symbol-value", "a=1",
                       files={"g.txt": germ, "p.txt": phases})
    assert code == 0 and out["normal_form"] is True and out["mode"] == "numeric"


def test_check_commute(tmp_path, capsys):
    germ = "dim 3\nmaxdeg 3\nlambda 1 = exact 1 + 0 I\nlambda 2 = exact 1 + 0 I\nlambda 3 = exact 1 + 0 I\n"
    ok = germ + "term 2 (1,0,1) 1 + 0 I\n"
    code, out, _ = run(tmp_path, capsys, "check-commute", "g.txt", "--weights", "3,2,-1;2,3,1",
                       files={"g.txt": ok})
    assert code == 0 and out["commutes"] is True
    bad = ok + "term 1 (2,0,0) 1 + 0 I\n"
    code, out, _ = run(tmp_path, capsys, "check-commute", "g.txt", "--weights", "3,2,-1;2,3,1",
                       files={"g.txt": bad})
    assert out["commutes"] is False
    assert out["witnesses"] == [{"coordinate": 1, "exponent": [2, 0, 0]}]


def test_check_commute_uses_verdict_weights(tmp_path, capsys):
    germ = "dim 3\nmaxdeg 3\nlambda 1 = phase 1\nlambda 2 = phase 2\nlambda 3 = phase 3\nterm 2 (1,0,1) 1 + 0 I\n"
    code, out, _ = run(tmp_path, capsys, "check-commute", "g.txt", "--phases", "p.txt",
                       files={"g.txt": germ, "p.txt": SIX_FIRST})
    assert code == 0 and out["commutes"] is True


def test_reports_are_deterministic(tmp_path, capsys):
    a = run(tmp_path, capsys, "analyze", "p.txt", files={"p.txt": IMPURE})
    b = run(tmp_path, capsys, "analyze", "p.txt", files={"p.txt": IMPURE})
    assert a == b


@pytest.mark.skipif(shutil.which("torictool") is None, reason="console script not installed")
def test_console_script(tmp_path):
    p = tmp_path / "p.txt"
    p.write_text(TORSION_TWO)
    proc = subprocess.run(["torictool", "analyze", str(p)], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["torsion"]["tau"] == 2
    proc = subprocess.run(["torictool", "analyze", str(tmp_path / "nope")], capture_output=True, text=True)
    assert proc.returncode == 1 and json.loads(proc.stderr)["error"] == "parse_error"
