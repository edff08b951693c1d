"""State-space machinery: additivity systems, polytope vertices, affine
relation extraction, and the classical-defect scans.

Expected values below were frozen from hand computations on the small
fixtures (L12 has five extreme states, the n-atom set algebra has n
point masses, the quarter valuation is a state) before the solver code
existed."""

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from qlprob import builders
from qlprob.core import NotOrthomodular
from qlprob.states import (
    DomainMismatch,
    Infeasible,
    NotAState,
    Valuation,
    build_state_system,
    extreme_states,
    find_state,
    implied_affine_relations,
    inclusion_exclusion_scan,
    is_state,
    sample_states,
    solve_in_unit_box,
    subadditivity_scan,
    valuation_from_document,
)

F = Fraction


def quarter(l12):
    vals = {"0": F(0), "1": F(1), "n": F(1, 2), "~n": F(1, 2)}
    for a in ("l", "r", "f", "b"):
        vals[a] = F(1, 4)
        vals["~" + a] = F(3, 4)
    return Valuation(l12, tuple(vals[name] for name in l12.names))


def test_system_shape(l12):
    system = build_state_system(l12)
    assert system.variables == l12.names
    assert len(system.rows) == 13
    assert [r.label for r in system.rows[:2]] == ["bottom", "top"]
    assert all(label.startswith(("bottom", "top", "add")) for label in
               (r.label for r in system.rows))


def test_quarter_valuation_is_exact_state(l12):
    report = is_state(l12, quarter(l12))
    assert report.passed
    assert report.violations == ()
    assert report.complement_residual == 0
    assert report.max_residual() == 0


def test_overweight_valuation_fails_additively(l12):
    vals = dict(quarter(l12).as_dict())
    vals.update({"l": F(1, 2), "r": F(1, 2), "~l": F(1, 2), "~r": F(1, 2),
                 "n": F(1, 2)})
    report = is_state(l12, Valuation(l12, tuple(vals[n] for n in l12.names)))
    assert not report.passed
    bad_pairs = {v.elements for v in report.violations}
    assert bad_pairs == {("l", "r"), ("l", "n"), ("r", "n")}
    assert all(abs(v.residual) == F(1, 2) for v in report.violations)


def test_range_violation_detected(l12):
    vals = dict(quarter(l12).as_dict())
    vals["l"] = F(5, 4)
    vals["~l"] = F(-1, 4)
    report = is_state(l12, Valuation(l12, tuple(vals[n] for n in l12.names)))
    kinds = {v.kind for v in report.violations}
    assert "range" in kinds


def test_non_orthomodular_refused(o6):
    with pytest.raises(NotOrthomodular):
        build_state_system(o6)
    with pytest.raises(NotOrthomodular):
        extreme_states(o6)


def test_wrong_lattice_valuation(l12, mo2):
    with pytest.raises(DomainMismatch):
        is_state(mo2, quarter(l12))


def test_float_tolerance_band(l12):
    vals = {k: float(v) for k, v in quarter(l12).as_dict().items()}
    vals["l"] += 1e-12
    report = is_state(l12, Valuation(l12, tuple(vals[n] for n in l12.names)))
    assert report.passed
    vals["l"] += 1e-6
    report = is_state(l12, Valuation(l12, tuple(vals[n] for n in l12.names)))
    assert not report.passed


def test_firefly_extreme_states(l12):
    vertices = extreme_states(l12)
    assert len(vertices) == 5
    atom_supports = sorted(
        tuple(sorted(a for a in ("l", "r", "f", "b", "n") if v.value(a) == 1))
        for v in vertices
    )
    assert atom_supports == [
        ("b", "l"), ("b", "r"), ("f", "l"), ("f", "r"), ("n",)]
    for v in vertices:
        assert is_state(l12, v).passed
        assert v.is_exact()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_powerset_extremes_are_point_masses(n):
    ps = builders.powerset(n)
    vertices = extreme_states(ps)
    assert len(vertices) == n
    seen = set()
    for v in vertices:
        mass = [a for a in ps.lattice.atoms if v.values[a] == 1]
        assert len(mass) == 1
        seen.add(mass[0])
        # every other element is the indicator of containing that atom
        atom = mass[0]
        for e in range(ps.n):
            expected = F(1) if ps.le(atom, e) else F(0)
            assert v.values[e] == expected
    assert seen == set(ps.lattice.atoms)


def test_mo2_has_four_extremes(mo2):
    assert len(extreme_states(mo2)) == 4


def test_extreme_cap_carries_partial(l12):
    from qlprob.core import CapExceeded

    with pytest.raises(CapExceeded) as err:
        extreme_states(l12, cap=2)
    assert err.value.partial is not None
    assert len(err.value.partial) == 2


def test_find_state_uniform_on_powerset(p3):
    state = find_state(p3)
    for a in p3.lattice.atoms:
        assert state.values[a] == F(1, 3)
    assert is_state(p3, state).passed


def test_find_state_firefly(l12):
    state = find_state(l12)
    assert is_state(l12, state).passed
    assert state.value("n") == F(1, 5)
    assert state.value("l") == state.value("r") == F(2, 5)


def test_firefly_affine_relations(l12):
    relations = implied_affine_relations(l12)
    displays = [r.display() for r in relations]
    assert displays == ["f + b + n = 1", "l + r - f - b = 0"]
    for rel in relations:
        for v in extreme_states(l12):
            assert rel.holds(v)


def test_powerset_affine_relations(p3):
    relations = implied_affine_relations(p3)
    assert [r.display() for r in relations] == ["{1} + {2} + {3} = 1"]


def test_relations_certify_every_state(l12):
    relations = implied_affine_relations(l12)
    for state in sample_states(l12, 50, seed=3):
        for rel in relations:
            assert rel.holds(state)


def test_inclusion_exclusion_on_concentrated_vertex(l12):
    target = next(v for v in extreme_states(l12)
                  if v.value("l") == 1 and v.value("f") == 1)
    hits = inclusion_exclusion_scan(l12, target)
    pairs = {h.pair: h for h in hits}
    assert ("l", "f") in pairs
    hit = pairs[("l", "f")]
    assert hit.defect == 1
    assert hit.strict_decomposition is True
    assert len(hits) == 8
    assert all(abs(h.defect) == 1 for h in hits)


def test_inclusion_exclusion_on_mo2(mo2):
    vals = {"0": F(0), "1": F(1), "a1": F(1), "a2": F(1),
            "~a1": F(0), "~a2": F(0)}
    v = Valuation(mo2, tuple(vals[n] for n in mo2.names))
    hits = inclusion_exclusion_scan(mo2, v)
    defects = {h.pair: h.defect for h in hits}
    assert defects == {("a1", "a2"): 1, ("~a1", "~a2"): -1}


def test_boolean_states_never_defect():
    ps = builders.powerset(4)
    for state in sample_states(ps, 25, seed=11):
        assert inclusion_exclusion_scan(ps, state, tolerance=0) == []
        assert subadditivity_scan(ps, state, tolerance=0) == []


def test_scan_requires_a_state(l12):
    half = Valuation(l12, tuple(F(1, 2) for _ in range(12)))
    with pytest.raises(NotAState):
        inclusion_exclusion_scan(l12, half)


def test_subadditivity_quiet_on_spread_vertex(l12):
    vertex = next(v for v in extreme_states(l12) if v.value("n") == 1)
    assert subadditivity_scan(l12, vertex) == []
    assert inclusion_exclusion_scan(l12, vertex) == []


def test_sampled_states_reproducible(l12):
    a = sample_states(l12, 10, seed=42)
    b = sample_states(l12, 10, seed=42)
    assert [x.values for x in a] == [y.values for y in b]
    c = sample_states(l12, 10, seed=43)
    assert [x.values for x in a] != [y.values for y in c]


def test_sampled_states_all_pass(l12):
    for state in sample_states(l12, 100, seed=7):
        assert state.is_exact()
        assert is_state(l12, state).passed


@settings(max_examples=40, deadline=None)
@given(weights=st.lists(st.integers(min_value=0, max_value=100),
                        min_size=5, max_size=5).filter(lambda w: sum(w) > 0))
def test_convex_combinations_stay_states(weights):
    l12 = builders.firefly_l12()
    vertices = extreme_states(l12)
    total = sum(weights)
    mixed = tuple(
        sum(F(w, total) * v.values[e] for w, v in zip(weights, vertices))
        for e in range(l12.n)
    )
    assert is_state(l12, Valuation(l12, mixed)).passed


def test_block_restriction_is_classical(l12):
    """On each maximal Boolean block a state restricts to an ordinary
    finitely additive probability measure."""
    from qlprob.classify import maximal_blocks

    state = find_state(l12)
    for block in maximal_blocks(l12):
        members = set(block)
        for a, b in combinations(block, 2):
            if l12.meet(a, b) == l12.bottom and l12.join(a, b) in members:
                assert (state.values[l12.join(a, b)]
                        == state.values[a] + state.values[b])


def test_solver_simple_balance():
    rows = [
        ([F(1), F(1)], F(1), "sum"),
        ([F(1), F(-1)], F(0), "balance"),
    ]
    assert solve_in_unit_box(rows, 2) == [F(1, 2), F(1, 2)]


def test_solver_respects_box():
    rows = [([F(1), F(1)], F(3, 2), "sum")]
    x = solve_in_unit_box(rows, 2)
    assert sum(x) == F(3, 2)
    assert all(0 <= c <= 1 for c in x)


def test_solver_infeasibility_certificate():
    rows = [
        ([F(1)], F(0), "zero"),
        ([F(1)], F(1), "one"),
    ]
    with pytest.raises(Infeasible) as err:
        solve_in_unit_box(rows, 1)
    cert = err.value.certificate
    assert cert is not None
    # the multipliers refute the system: y.A has no positive entry
    # over the box while y.b is positive
    assert set(cert) <= {"zero", "one", "box 0"}
    assert sum(cert.get(l, 0) * r for l, r in (("zero", F(0)), ("one", F(1)))) != 0


def test_solver_infeasible_beyond_box():
    rows = [([F(1), F(1)], F(3), "sum")]
    with pytest.raises(Infeasible) as err:
        solve_in_unit_box(rows, 2)
    assert err.value.certificate


def test_valuation_from_document_requires_totality(l12):
    with pytest.raises(DomainMismatch) as err:
        valuation_from_document(l12, (("l", F(1, 2)),))
    assert "missing" in str(err.value)
    with pytest.raises(DomainMismatch):
        valuation_from_document(
            l12, tuple(quarter(l12).as_dict().items()) + (("ghost", F(0)),))


def test_valuation_from_document_round_trip(l12):
    entries = tuple(quarter(l12).as_dict().items())
    v = valuation_from_document(l12, entries)
    assert is_state(l12, v).passed
