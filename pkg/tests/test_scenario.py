"""Tests for scenario parsing, the evaluation session and the check registry."""

import pytest

from voalab import I, EngineConfig, Scenario, Session, builtin_scenario
from voalab.autos import equal_on_grades
from voalab.exceptions import DSLSyntaxError, ScenarioError, UnknownNameError
from voalab.scenario import CHECKS, split_top_level

SCENARIO = """\
# V_A1 and V_{A1 + A1} at low weight
lattice A1 rank 1 basis a
  2

lattice A1x2 rank 2 basis a1 a2
  2 0
  0 2

cutoff A1 4

sublattice Za1 of A1x2
  a1

sublattice Za2 of A1x2
  a2

vector half in A1 = 1/4*a

auto r on A1 = inner(1/8*a)
auto s on A1 = sigma(1)

state E in A1 = e(a)
state H in A1 = h(a)
state F in A1 = e(-a)
state omega in A1 = virasoro()
state omega1 in A1x2 = virasoro(Za1)
state omega2 in A1x2 = virasoro(Za2)
state H1 in A1x2 = h(a1)

group T on A1 = theta
group D on A1 = theta,
  r
group T2 on A1x2 = theta

space VT in A1 = fixed(T)

check basis-dims lattice=A1 dims=1,3,4
check affine-triple e=E h=H f=F k=1
check conformal state=omega c=1
check state-equal lattice=A1 lhs="sugawara(E, H, F, 1)" rhs=omega
check auto-equal lattice=A1 lhs="s*theta*s" rhs="inner(half)" label=conjugate
check auto-order lattice=A1 auto=r order=4
check maps-to lattice=A1 auto=theta state=E image=F
check group-order group=D order=8
check burnside group=T
check dims-equal lhs="dims(VT)" rhs="burnside(T)" values=1,1,2
check commutant-dims state=omega1 expect="character(Za2)"
check nested e1=omega1 e2=omega2
check orbifold-coset state=omega1 group=T2
check annihilation state=omega1 generators=H1 optional
"""


@pytest.fixture(scope="module")
def scenario():
    return Scenario.parse(SCENARIO, "small.scn")


@pytest.fixture(scope="module")
def session(scenario):
    """A session at W = 2 shared by the evaluation tests."""
    return Session(scenario, EngineConfig(max_weight=2))


def test_parse_collects_declarations(scenario):
    """Test definitions, continuation rows, cutoffs and the check list."""
    assert set(scenario.definitions["state"]) == {"E", "H", "F", "omega", "omega1", "omega2", "H1"}
    assert scenario.definitions["group"]["D"].members[1][0] == "r"
    assert scenario.cutoffs == {"A1": 4}
    assert [spec.kind for spec in scenario.checks][:3] == ["basis-dims", "affine-triple", "conformal"]
    assert scenario.checks[4].display_name == "auto-equal:conjugate"
    assert scenario.checks[3]["lhs"] == "sugawara(E, H, F, 1)"
    assert scenario.checks[-1].optional


def test_canonical_text_and_digest(scenario):
    """Test that comments and spacing do not change the canonical text."""
    noisy = SCENARIO.replace("cutoff A1 4", "cutoff   A1 4   # headroom")
    other = Scenario.parse(noisy)
    assert other == scenario
    assert other.digest == scenario.digest
    assert Scenario.parse(scenario.to_text()).to_text() == scenario.to_text()
    assert len(scenario.digest) == 64


def test_from_file(tmp_path, scenario):
    """Test reading a scenario file and the file name in diagnostics."""
    path = tmp_path / "small.scn"
    path.write_text(SCENARIO, encoding="utf-8")
    assert Scenario.from_file(path) == scenario
    path.write_text(SCENARIO + "frobnicate x\n", encoding="utf-8")
    with pytest.raises(ScenarioError) as exc_info:
        Scenario.from_file(path)
    assert str(exc_info.value).startswith(f"{path}:")


@pytest.mark.parametrize(
    "extra, message",
    [
        ("auto theta on A1 = id", "already defined"),
        ("state E in A1 = vac", "already defined"),
        ("state X on A1 = vac", "Malformed declaration"),
        ("state X in A1 =", "Empty body"),
        ("cutoff A1 many", "cutoff <lattice> <n>"),
        ("frobnicate x", "Unknown declaration"),
        ("check conformal state=omega", "needs parameter 'c'"),
        ("check group-order group=D order=two", "must be an integer"),
        ("check basis-dims lattice=A1 dims=1,x", "must list integers"),
        ("check conformal state=omega c", "key=value"),
        ("check conformal state=omega c=1 c=2", "given twice"),
        ('check conformal state="omega c=1', "Malformed check line"),
    ],
)
def test_malformed_scenarios(extra, message):
    """Test that malformed declarations and checks raise ScenarioError."""
    with pytest.raises(ScenarioError) as exc_info:
        Scenario.parse(SCENARIO + extra + "\n")
    assert message in str(exc_info.value)


@pytest.mark.parametrize(
    "extra, kind, name",
    [
        ("state X in A1 = e(b)", "name", "b"),
        ("auto x on A1 = foo(1)", "function", "foo"),
        ("state X in B = vac", "lattice", "B"),
        ("cutoff B 3", "lattice", "B"),
        ("check nonsense", "check", "nonsense"),
        ("check conformal state=omega c=1 colour=red", "parameter of 'conformal'", "colour"),
        ("check conformal state=nothing c=1", "state", "nothing"),
        ("check commutant-dims state=omega expect=dims(Nowhere)", "name", "Nowhere"),
    ],
)
def test_unknown_names(extra, kind, name):
    """Test that undefined names are reported with their kind."""
    with pytest.raises(UnknownNameError) as exc_info:
        Scenario.parse(SCENARIO + extra + "\n")
    assert exc_info.value.kind == kind
    assert exc_info.value.name == name


def test_error_location():
    """Test that validation errors point at the declaring line."""
    with pytest.raises(UnknownNameError) as exc_info:
        Scenario.parse("lattice A1 rank 1 basis a\n  2\n\nstate X in A1 = e(b)\n", "bad.scn")
    assert exc_info.value.location.line == 4


def test_split_top_level():
    """Test that commas inside calls do not split."""
    assert split_top_level("inner(1/4*a, b), theta") == ["inner(1/4*a, b)", "theta"]
    assert split_top_level("E,H,F") == ["E", "H", "F"]


def test_session_builds_voas_with_declared_cutoffs(session):
    """Test the W+1 default and the cutoff directive."""
    assert session.max_weight == 2
    assert session.voa("A1").cutoff == 4
    assert session.voa("A1x2").cutoff == 3
    assert session.voa("A1") is session.voa("A1")


def test_session_named_objects(session):
    """Test evaluation and caching of named states, automorphisms and groups."""
    assert session.state("omega") is session.state("omega")
    assert session.auto("r").apply(session.state("E")) == I * session.state("E")
    assert session.group("D").order == 8
    assert session.space("VT").dims() == [1, 1, 2]
    assert session.lattice_of("state", "omega1") == "A1x2"


def test_session_inline_expressions(session):
    """Test inline automorphism, state and space expressions."""
    assert session.evaluate("state", "A1", "apply(theta, E)") == session.state("F")
    assert session.evaluate("state", "A1", "E + i*F - i*F") == session.state("E")
    assert session.evaluate("state", "A1", "mode(H, 0, E)") == 2 * session.state("E")
    assert equal_on_grades(session.evaluate("auto", "A1", "s*s"), session.evaluate("auto", "A1", "id"), 2)
    assert equal_on_grades(session.evaluate("auto", "A1", "inv(r)*r"), session.evaluate("auto", "A1", "id"), 2)
    assert session.evaluate("space", "A1x2", "commutant(omega1)").dims() == [1, 3, 4]
    assert session.evaluate("space", "A1x2", "sum(sublattice(Za1), sublattice(Za2))").dims() == [1, 6, 8]
    assert session.evaluate("space", "A1x2", "intersect(sublattice(Za1), sublattice(Za2))").dims() == [1, 0, 0]


def test_session_dims_expressions(session):
    """Test characters, dimension series and their arithmetic."""
    assert session.dims("character(A1)").integer_coefficients() == [1, 3, 4]
    assert session.dims("2*character(Za2)").integer_coefficients() == [2, 6, 8]
    assert session.dims("dims(VT) - burnside(T)").integer_coefficients() == [0, 0, 0]
    with pytest.raises(DSLSyntaxError) as exc_info:
        session.dims("VT")
    assert exc_info.value.expected == "a dimension series"


def test_expression_shape_errors(session):
    """Test that ill-shaped expressions name what was expected."""
    with pytest.raises(DSLSyntaxError) as exc_info:
        session.evaluate("state", "A1", "E*F")
    assert exc_info.value.expected == "a scalar multiple of a state"
    with pytest.raises(DSLSyntaxError) as exc_info:
        session.evaluate("auto", "A1", "inner(half, half)")
    assert exc_info.value.expected == "inner with 1 argument(s)"


def test_objects_stay_on_their_lattice(session):
    """Test that a state of V_A1 cannot be used in V_{A1 + A1}."""
    with pytest.raises(ScenarioError) as exc_info:
        session.evaluate("state", "A1x2", "E")
    assert "lives on A1" in str(exc_info.value)


def test_circular_definitions():
    """Test that self-referencing definitions are reported with the cycle."""
    text = "lattice A1 rank 1 basis a\n  2\nauto x on A1 = y\nauto y on A1 = x\n"
    session = Session(Scenario.parse(text), EngineConfig(max_weight=1))
    with pytest.raises(ScenarioError) as exc_info:
        session.auto("x")
    assert "Circular definition: x -> y -> x" in str(exc_info.value)


def test_run_passes(scenario):
    """Test that every check of the small scenario passes at W = 2."""
    report = Session(scenario, EngineConfig(max_weight=2)).run()
    assert report.ok, report.to_text()
    assert report.max_weight == 2
    assert report.scenario_hash == scenario.digest
    assert len(report.timings) == len(scenario.checks)


def test_run_filter(session):
    """Test selection by kind and by display name."""
    report = session.run(["affine-triple", "auto-equal:conjugate"])
    names = {row.check for row in report.rows}
    assert names == {"affine-triple", "auto-equal:conjugate"}
    assert len(report.rows) == 12 + 3
    assert list(report.timings) == ["01:affine-triple", "04:auto-equal:conjugate"]
    with pytest.raises(UnknownNameError):
        session.run(["no-such-check"])


def test_row_shapes(session):
    """Test the rows produced by a few checks."""
    nested = session.run(["nested"]).rows
    assert [row.lhs for row in nested] == ["commuting", "1", "0", "0"]
    orbifold_coset = session.run(["orbifold-coset"]).rows
    assert orbifold_coset[0].lhs == "theta(e)"
    assert len(orbifold_coset) == 4
    dims = session.run(["dims-equal"]).rows
    assert [row.lhs for row in dims] == ["1", "1", "2", "1", "1", "2"]


def test_gated_check_is_skipped_when_optional(session):
    """Test that an optional annihilation check reports skipped without the flag."""
    rows = session.run(["annihilation"]).rows
    assert len(rows) == 1
    assert rows[0].lhs == "skipped"
    assert rows[0].ok


def test_gated_check_fails_when_required(scenario):
    """Test that a required annihilation check fails without the flag."""
    strict = Scenario.parse(SCENARIO.replace("generators=H1 optional", "generators=H1"))
    rows = Session(strict, EngineConfig(max_weight=2)).run(["annihilation"]).rows
    assert rows[0].rhs == "--strict-annihilation"
    assert not rows[0].ok


def test_gated_check_runs_when_enabled(scenario):
    """Test that the annihilation cross-check passes once enabled."""
    config = EngineConfig(max_weight=2, strict_annihilation=True)
    rows = Session(scenario, config).run(["annihilation"]).rows
    assert len(rows) == 3
    assert all(row.ok for row in rows)


def test_engine_errors_become_failing_rows(scenario):
    """Test that an exceeded order bound yields a FAIL row instead of an exception."""
    report = Session(scenario, EngineConfig(max_weight=2, group_bound=2)).run(["auto-order"])
    assert not report.ok
    assert report.rows[0].lhs == "OrderExceededError"
    assert report.rows[0].rhs == "no-error"


def test_failing_values_are_reported(scenario):
    """Test that a wrong expectation fails without raising."""
    wrong = Scenario.parse(SCENARIO.replace("check group-order group=D order=8", "check group-order group=D order=4"))
    rows = Session(wrong, EngineConfig(max_weight=2)).run(["group-order"]).rows
    assert rows[0].lhs == "8"
    assert not rows[0].ok


def test_check_registry():
    """Test that registered checks carry summaries and parameter kinds."""
    assert "annihilation" in CHECKS
    assert CHECKS["annihilation"].gate == "strict_annihilation"
    assert CHECKS["conformal"].required == {"state": "state", "c": "scalar"}
    assert "label" in CHECKS["nested"].accepted
    assert all(definition.summary for definition in CHECKS.values())


def test_builtin_scenario_parses():
    """Test the shipped scenario and that it only uses registered checks."""
    scenario = builtin_scenario()
    assert {"A1", "A1x4", "A1x3", "Zg1g2"} <= set(scenario.lattice_file.lattices)
    assert scenario.cutoffs == {"A1x3": 6}
    assert scenario.lattice_file.isometries["tau"].order() == 4
    assert all(spec.kind in CHECKS for spec in scenario.checks)
    assert builtin_scenario().digest == scenario.digest


@pytest.mark.slow
def test_builtin_headline_at_low_weight():
    """Test dims of M^tau against V^G on grades 0..2."""
    session = Session(builtin_scenario(), EngineConfig(max_weight=2))
    report = session.run(["dims-equal:headline"])
    assert report.ok, report.to_text()
    assert [row.lhs for row in report.rows[:3]] == ["1", "0", "2"]


@pytest.mark.slow
def test_builtin_generator_images_and_eigenvectors():
    """Test the rho and tau' generator images and the +-i eigenvectors of tau'."""
    session = Session(builtin_scenario(), EngineConfig(max_weight=2))
    labels = ["rho-E2", "rho-F3", "tau-prime-e2-neg", "tau-prime-gamma-neg", "tau-prime-eigenvector",
              "tau-prime-conjugate-eigenvector"]
    report = session.run([f"maps-to:{label}" for label in labels])
    assert report.ok, report.to_text()
    assert [row.check for row in report.rows] == [f"maps-to:{label}" for label in labels]
