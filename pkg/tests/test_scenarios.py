import math
import re

import pytest

from poextremes.errors import ScenarioError
from poextremes.scenarios import figure_map, get_scenario, load_scenario, parse_scenario, registry

VERBATIM = {
    "ce3.1a": ("weibull-survival", (9.0, 0.9), (7.0, 25.0, 100.0), 44.0, 3, "independence"),
    "ce3.1b": ("weibull-survival", (1.0, 3.0), (0.78, 0.97, 67.0), 22.9167, 3, "independence"),
    "ce3.2a": ("pareto-lomax", (13.0, 0.9), (0.75, 0.95, 23.0, 43.0), 16.925, 4, "independence"),
    "ce3.2b": ("power-pareto", (2.0,), (2.0, 33.0, 63.0, 183.0), 70.25, 4, "independence"),
    "ce4.1": ("exp-root", (5.0, 0.5), (0.9, 0.95, 27.0, 37.0), 16.4625, 4, "independence"),
    "ce4.2": ("pareto-lomax", (1.0, 0.6), (5.0, 15.0, 25.0, 45.0), 22.5, 4, "independence"),
    "ex5.1": ("weibull-survival", (1.0, 0.3), (0.34, 0.65, 1.23), 0.88, 3, "nelsen-4-2-19"),
    "ex5.2": ("power-pareto", (0.5,), (0.24, 0.45, 0.57, 1.23), 0.73, 4, "nelsen-4-2-19"),
    "ex5.3": ("negative-weibull", (3.0, 0.3), (0.95, 0.32, 1.54, 0.76), 0.8925, 4, "nelsen-4-2-8"),
    "ex5.4": ("truncated-exp-growth", (), (0.5, 0.8, 1.7), 1.6, 3, "nelsen-4-2-8"),
}

GOOD = """
id = "demo"
kind = "min"
order = "dispersive"
theorem = "3.1"
expected = "A<=B"

[baseline]
family = "weibull-survival"
params = [1.0, 0.3]

[sample_x]
alphas = [0.34, 0.65, 1.23]
generator = { family = "nelsen-4-2-19", params = [5.0] }

[sample_y]
alpha = 0.88
"""


def test_registry_has_ten_scenarios():
    assert sorted(registry()) == sorted(VERBATIM)


@pytest.mark.parametrize("sid", sorted(VERBATIM))
def test_parameters_verbatim(sid):
    family, params, alphas, alpha, n, gen = VERBATIM[sid]
    sc = get_scenario(sid)
    assert sc.baseline.family == family
    assert sc.baseline.params == params
    assert sc.alphas == alphas
    assert sc.alpha == alpha
    assert sc.n == n
    assert sc.generator_x.family == gen and sc.generator_y == sc.generator_x


def test_generator_parameters():
    assert get_scenario("ex5.1").generator_x.params == (5.0,)
    assert get_scenario("ex5.2").generator_x.params == (7.0,)
    assert get_scenario("ex5.3").generator_x.params == (1.5,)
    assert get_scenario("ex5.4").generator_x.params == (1.5,)


def test_figure_aliases():
    assert figure_map() == {"fig1a": "ce3.1a", "fig1b": "ce3.1b", "fig2a": "ce3.2a", "fig2b": "ce3.2b",
                            "fig3": "ex5.1", "fig4": "ex5.2", "fig5": "ex5.3", "fig6": "ex5.4"}
    assert get_scenario("fig3").id == "ex5.1"
    with pytest.raises(KeyError):
        get_scenario("fig9")


def test_grids():
    assert get_scenario("ex5.2").grid_reparam == "inverse"
    assert get_scenario("ex5.3").grid_reparam == "neg-odds"
    g = get_scenario("ex5.1").grid()
    assert len(g) == 2000
    assert g.t.min() == pytest.approx(0.001) and g.t.max() == pytest.approx(0.999)


def test_parse_minimal_defaults():
    sc = parse_scenario(GOOD)
    assert sc.n == 3 and sc.tol == 1e-8 and sc.generator_y == sc.generator_x


def test_number_strings():
    sc = parse_scenario(GOOD.replace("alpha = 0.88", 'alpha = "22/25"'))
    assert sc.alpha == pytest.approx(0.88)
    sc = parse_scenario(GOOD.replace('params = [1.0, 0.3]', 'params = [1.0, 0.3]\nsupport = [0.0, "inf"]'))
    assert sc.baseline.support == (0.0, math.inf)


@pytest.mark.parametrize("edit,field", [
    (("alphas = [0.34, 0.65, 1.23]", "alphas = [0.34, -0.65, 1.23]"), "sample_x.alphas"),
    (("alphas = [0.34, 0.65, 1.23]", "alphas = [0.34]"), "sample_x.alphas"),
    (("alphas = [0.34, 0.65, 1.23]", 'alphas = [0.34, "x", 1.23]'), "sample_x.alphas[1]"),
    (("alpha = 0.88", "alpha = -0.88"), "sample_y.alpha"),
    (("alpha = 0.88", "alpha = 0.88\nn = 1"), "sample_y.n"),
    (('kind = "min"', 'kind = "median"'), "kind"),
    (('theorem = "3.1"', 'theorem = "7.7"'), "theorem"),
    (('expected = "A<=B"', 'expected = "maybe"'), "expected"),
    (('family = "weibull-survival"', 'family = "gamma"'), "baseline"),
    (('params = [5.0]', 'params = [-5.0]'), "sample_x.generator"),
    (("params = [1.0, 0.3]", "params = [1.0, 0.3]\nsupport = [0.0, 3.0]"), "support"),
    (('id = "demo"', 'id = ""'), "id"),
])
def test_malformed_fields_named(edit, field):
    old, new = edit
    assert old in GOOD
    with pytest.raises(ScenarioError) as exc:
        parse_scenario(GOOD.replace(old, new, 1))
    assert exc.value.field == field


def test_missing_tables():
    with pytest.raises(ScenarioError) as exc:
        parse_scenario(GOOD.split("[sample_y]")[0])
    assert exc.value.field == "sample_y"


def test_toml_syntax_error():
    with pytest.raises(ScenarioError) as exc:
        parse_scenario("id = ")
    assert exc.value.field == "<file>"


def test_load_from_path(tmp_path):
    p = tmp_path / "demo.toml"
    p.write_text(GOOD)
    assert load_scenario(p).source == str(p)
    with pytest.raises(ScenarioError):
        load_scenario(tmp_path / "missing.toml")


def test_notes_are_free_of_references():
    pattern = re.compile(r"\b(paper|spec|specification|theorem|figure|example|counterexample|eq)\b", re.I)
    for sc in registry().values():
        for text in (sc.description, *sc.notes):
            assert not pattern.search(text), (sc.id, text)
