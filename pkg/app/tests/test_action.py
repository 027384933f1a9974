"""權重工具、ρ 表格的建構與驗證，以及在 bar 複形上的求值。"""

from __future__ import annotations

import pytest

from app.hopfbar.action.evaluate import (
    check_chain_map,
    check_coalgebra_map,
    check_commutative_reduction,
    evaluate_operation,
    table_generators,
)
from app.hopfbar.action.rho import RhoEngine, RhoTable, build_rho, positive_entries
from app.hopfbar.action.verify import (
    check_shuffle_datum,
    commutative_projection,
    corrupt_table,
    frozen_engine,
    rho_differences,
    verify_relations,
)
from app.hopfbar.action.weights import (
    ActionBounds,
    block_shuffle,
    parse_weights,
    permuted_weights,
    positive_weights,
    weight_splittings,
)
from app.hopfbar.combinatorics.permutations import Permutation
from app.hopfbar.errors import LiftObstructionError, OutOfTruncationError, ShapeMismatchError
from app.hopfbar.models.run_config import RunConfig
from app.hopfbar.pipelines.base import build_context
from app.hopfbar.trees.labeled import UNIT_KEY

ID2 = ((1, 2),)
COROLLA = (ID2, (1, 2))

SMALL = RunConfig(
    prime=2,
    arity_max=2,
    degree_max=0,
    weight_max=2,
    bar_length=2,
    cell_degree_max=0,
    fixture="poly",
    fixture_params={"n": 3},
)


def _built(config: RunConfig = SMALL):
    context = build_context(config)
    table = build_rho(context.W, context.target, context.morphism, context.retract, config.bounds)
    engine = RhoEngine(context.W, context.target, context.morphism, context.retract, table)
    return context, engine


# ------------------------------------------------------------------
# 權重
# ------------------------------------------------------------------


def test_action_bounds_validation() -> None:
    bounds = ActionBounds(r_max=2, weight_max=3, cell_degree_max=0, degree_max=1, bar_length=3)
    assert ActionBounds.from_header(bounds.header()) == bounds
    with pytest.raises(ValueError):
        ActionBounds(weight_max=5, bar_length=4)
    with pytest.raises(ValueError):
        ActionBounds(cell_degree_max=-1)


def test_weight_helpers() -> None:
    assert positive_weights(2, 3) == [(1, 1), (1, 2), (2, 1)]
    assert list(weight_splittings((1, 1), 2)) == [((0, 1), (1, 0)), ((1, 0), (0, 1))]
    assert parse_weights("(1,0)") == (1, 0)
    with pytest.raises(ValueError):
        parse_weights("(1,-1)")
    assert permuted_weights((1, 2, 3), Permutation((2, 3, 1))) == (2, 3, 1)


def test_block_shuffle_groups_by_input() -> None:
    """把（段, 輸入）的排列換成（輸入, 段）。"""

    assert block_shuffle((), ((1, 0), (0, 1)), ()).is_identity()
    assert block_shuffle((), ((0, 1), (1, 0)), ()) == Permutation((2, 1))
    assert block_shuffle((1,), ((0, 1), (1, 0)), (1,)) == Permutation((1, 3, 2, 4))


# ------------------------------------------------------------------
# 建表與驗證
# ------------------------------------------------------------------


def test_binary_corolla_component() -> None:
    """ρ_(1,1) 在二元 corolla 上為 (id, τ)。"""

    context, engine = _built()
    value = engine.rho(COROLLA, (1, 1))
    assert value == {((1, 2), (2, 1)): 1}
    assert context.target.format_combo(value) == "[12|21]"
    assert engine.table.get(COROLLA, (1, 1)).provenance == "nu"
    assert positive_entries(engine.table) == [(COROLLA, (1, 1))]
    assert table_generators(engine) == [COROLLA]


def test_unit_and_lambda_rules() -> None:
    context, engine = _built()
    unit = context.target.unit()
    assert engine.rho(UNIT_KEY, (1,)) == {unit: 1}
    assert engine.rho(UNIT_KEY, (2,)) == {}
    assert engine.rho(COROLLA, (0, 1)) == {unit: 1}
    assert engine.rho(COROLLA, (0, 2)) == {}
    assert engine.table.get(COROLLA, (1, 0)).provenance == "lambda"
    with pytest.raises(OutOfTruncationError):
        engine.rho(COROLLA, (2, 1))
    with pytest.raises(ValueError):
        engine.rho(COROLLA, (1,))


def test_orbit_representative() -> None:
    _, engine = _built()
    twisted = (((2, 1),), (1, 2))
    coef, perm, rep = engine.orbit(twisted)
    assert rep == COROLLA and coef == 1
    assert perm == Permutation((2, 1))
    assert engine.is_representative(COROLLA) and not engine.is_representative(twisted)
    assert engine.rho(twisted, (1, 1)) == {((2, 1), (1, 2)): 1}


@pytest.mark.parametrize("p", [2, 3])
def test_verify_and_shuffle_datum_pass(p: int) -> None:
    context, engine = _built(SMALL.model_copy(update={"prime": p}))
    assert context.target.p == p
    report = verify_relations(engine)
    assert report.passed, report.lines()
    assert report.checked > 0
    datum = check_shuffle_datum(engine)
    assert datum.passed, datum.lines()


@pytest.mark.parametrize("p", [2, 3])
def test_relation_gate_at_default_bounds(p: int) -> None:
    """r ≤ 3、總權重 ≤ 4、胞腔度數 ≤ 1 的截斷下建表，全部關係成立。"""

    config = RunConfig(prime=p, arity_max=3, degree_max=2, weight_max=4, bar_length=4, cell_degree_max=1)
    _, engine = _built(config)
    assert len(engine.table) == 440
    report = verify_relations(engine)
    assert report.passed, report.lines()
    datum = check_shuffle_datum(engine)
    assert datum.passed, datum.lines()


def test_verify_arity_three_with_cells() -> None:
    """含 1-胞腔生成元的截斷也能一致地建表。"""

    config = RunConfig(prime=2, arity_max=3, degree_max=1, weight_max=2, bar_length=2, cell_degree_max=1)
    _, engine = _built(config)
    assert verify_relations(engine).passed
    assert check_shuffle_datum(engine).passed


def test_corrupted_table_fails_differential_check() -> None:
    """負面對照：ν 分量改成 0 後，微分關係必定失敗。"""

    context, engine = _built()
    table = RhoTable.parse(engine.table.serialize(context.W, context.target), context.W, context.target)
    key, m = corrupt_table(table)
    assert (key, m) == (COROLLA, (1, 1))
    report = verify_relations(frozen_engine(engine, table))
    assert not report.passed
    assert {failure.check for failure in report.failures} == {"differential"}


def test_table_serialization_is_deterministic() -> None:
    context, engine = _built()
    lines = engine.table.serialize(context.W, context.target)
    assert lines[0] == "# rho-table p=2"
    assert lines[1] == "# bounds r_max=2 weight_max=2 cell_degree_max=0 degree_max=0 bar_length=2"
    assert lines[2] == "1 ; (1) ; [1] ; unit"
    assert "{[12]}(1,2) ; (1,1) ; [12|21] ; nu" in lines
    parsed = RhoTable.parse(lines, context.W, context.target)
    assert parsed.serialize(context.W, context.target) == lines
    assert rho_differences(engine.table, parsed, context.W.format_label, str) == []
    assert len(engine.table.records(context.W, context.target)) == len(engine.table) == 7


def test_table_parse_rejects_bad_input() -> None:
    context, _ = _built()
    with pytest.raises(ValueError):
        RhoTable.parse(["1 ; (1) ; [1] ; unit"], context.W, context.target)
    with pytest.raises(ValueError):
        RhoTable.parse(
            ["# rho-table p=3", "# bounds r_max=2 weight_max=2 cell_degree_max=0 degree_max=0 bar_length=2"],
            context.W,
            context.target,
        )


def test_frozen_engine_refuses_new_components() -> None:
    context, engine = _built()
    empty = RhoTable(engine.table.bounds, 2)
    frozen = frozen_engine(engine, empty)
    with pytest.raises(OutOfTruncationError):
        frozen.rho(COROLLA, (1, 1))


def test_generator_stops_on_obstructed_lift(monkeypatch: pytest.MonkeyPatch) -> None:
    """ν 的輸入不在增廣核中時停止建表，也不寫入該分量。"""

    context, engine = _built()
    fresh = RhoEngine(context.W, context.target, context.morphism, context.retract, RhoTable(engine.table.bounds, 2))
    monkeypatch.setattr(fresh, "bracket", lambda key, m: {ID2: 1})
    with pytest.raises(LiftObstructionError) as info:
        fresh.rho(COROLLA, (1, 1))
    assert info.value.weights == "(1,1)"
    assert fresh.table.get(COROLLA, (1, 1)) is None


# ------------------------------------------------------------------
# 在 bar 複形上求值
# ------------------------------------------------------------------


def test_unit_acts_as_identity() -> None:
    context, engine = _built()
    assert evaluate_operation(engine, context.bar, UNIT_KEY, [(1, 1)]) == {(1, 1): 1}
    assert evaluate_operation(engine, context.bar, UNIT_KEY, [(2,)]) == {(2,): 1}
    with pytest.raises(ShapeMismatchError):
        evaluate_operation(engine, context.bar, COROLLA, [(1,)])


def test_binary_corolla_evaluates_to_shuffle() -> None:
    context, engine = _built()
    assert evaluate_operation(engine, context.bar, COROLLA, [(1,), (2,)]) == {(1, 2): 1, (2, 1): 1}
    assert evaluate_operation(engine, context.bar, COROLLA, [(), ()]) == {(): 1}
    report = check_commutative_reduction(engine, context.bar, 2)
    assert report.passed, report.lines()


def test_evaluation_checks_pass() -> None:
    context, engine = _built()
    keys = table_generators(engine)
    chain = check_chain_map(engine, context.bar, keys, 2, sample=30)
    assert chain.passed, chain.lines()
    coalgebra = check_coalgebra_map(engine, context.bar, keys, 2, sample=30)
    assert coalgebra.passed, coalgebra.lines()


def test_commutative_projection() -> None:
    """ε 投影只在總權重 1 的 0 度分量上不為零。"""

    _, engine = _built()
    projection = commutative_projection(engine)
    assert projection[(UNIT_KEY, (1,))] == 1
    assert projection[(COROLLA, (0, 1))] == 1
    assert projection[(COROLLA, (1, 1))] == 0
    assert projection[(COROLLA, (2, 0))] == 0
