import pytest

import fixtures as fx
from ltsdiamond.detector import (ConvergenceTable, OverlapViolation,
                                 PreconditionViolated, find_all_diamonds,
                                 find_diamonds_to, maximal_strict, step)
from ltsdiamond.diamond import make_diamond
from ltsdiamond.generator import random_lts
from ltsdiamond.lts import Lts
from ltsdiamond.oracle import Convergence, enumerate_convergences_oracle

D = make_diamond


def seeded_table(lts, target):
    table = ConvergenceTable(target)
    for source, lbl in lts.incoming[target]:
        table.record(source, D([(lbl, 1)]), len(lts.outgoing[source]) == 1)
    return table


# --- step -------------------------------------------------------------------

def test_step_grows_l1_macro():
    # manual trace: from the b-predecessor of the exit region's last column
    lts = fx.l1()
    table = find_diamonds_to(lts, 5, max_size=2)
    result = step(lts, 0, "b", 3, D([(("a1", "a2"), 1)]), 5, table, max_size=3)
    assert fx.L1_DIAMOND in result.strict
    assert result.outcome == "strict"
    assert (fx.L1_DIAMOND, 5) in table.omega[0]


def test_step_on_plain_chain():
    lts = fx.chain(["a", "a"])
    table = seeded_table(lts, 2)
    result = step(lts, 0, "a", 1, D([("a", 1)]), 2, table, max_size=4)
    assert result.strict == {D([("a", 2)])}
    assert table.strict_flag[0]


def test_step_exclusivity_fails_on_l7p():
    # state 2's extra a-transition breaks coverage of the a||b hypothesis
    lts = fx.l7p()
    table = seeded_table(lts, 3)
    result = step(lts, 0, "a", 1, D([("b", 1)]), 3, table, max_size=4)
    assert not any(h == D([("a", 1), ("b", 1)]) for h in result.strict)
    assert not any(h == D([("a", 1), ("b", 1)]) for h in result.non_strict)
    assert (D([("a", 1), ("b", 1)]), 3) not in table.omega[0]


def test_step_precondition_violated():
    lts = fx.l1()
    table = ConvergenceTable(5)
    with pytest.raises(PreconditionViolated):
        step(lts, 0, "b", 3, D([(("a1", "a2"), 1)]), 5, table)


def test_step_wrong_target_rejected():
    lts = fx.l1()
    table = find_diamonds_to(lts, 5, max_size=2)
    with pytest.raises(ValueError):
        step(lts, 0, "b", 3, D([(("a1", "a2"), 1)]), 4, table)


def test_step_records_all_hypotheses():
    # one call can record both the grown sequence and a parallel variant
    lts = fx.l1()
    table = find_diamonds_to(lts, 5, max_size=2)
    result = step(lts, 1, "a2", 2, D([("b", 1)]), 5, table, max_size=3)
    assert D([("a2", 1), ("b", 1)]) in result.strict
    assert D([(("a2", "b"), 1)]) in result.non_strict


# --- find_diamonds_to -------------------------------------------------------

def test_find_l1():
    table = find_diamonds_to(fx.l1(), 5, max_size=6, verify=True)
    assert (fx.L1_DIAMOND, 5) in table.omega[0]
    assert table.strict_flag[0]
    assert not table.truncated


def test_find_l3a_and_l3b():
    t_a = find_diamonds_to(fx.l3a(), 7, max_size=6)
    assert (fx.L3_DIAMOND, 7) in t_a.omega[0]
    assert (0, fx.L3_DIAMOND) in t_a.strict_records
    t_b = find_diamonds_to(fx.l3b(), 7, max_size=6)
    assert not any(d.size == 4 for d, _ in t_b.omega.get(0, ()))


def test_self_loop_truncation():
    table = find_diamonds_to(fx.self_loop(), 0, max_size=5)
    assert {d for d, _ in table.omega[0]} == {D([("a", k)]) for k in range(1, 6)}
    assert table.truncated


def test_find_rejects_bad_cap():
    with pytest.raises(ValueError):
        find_diamonds_to(fx.l1(), 5, max_size=0)


# --- find_all_diamonds ------------------------------------------------------

def test_find_all_l1():
    result = find_all_diamonds(fx.l1(), 6, verify=True)
    assert Convergence(0, fx.L1_DIAMOND, 5, True) in result.convergences
    assert Convergence(1, D([("a2", 1), ("b", 1)]), 5, True) in result.convergences
    assert not result.truncated


def test_find_all_trivial():
    assert find_all_diamonds(Lts(1, 0, []), 4).convergences == ()


def test_find_all_l8_misses_broken_diamond():
    result = find_all_diamonds(fx.l8(), 6)
    assert not any(c.source == 0 and c.diamond == fx.L8_DIAMOND
                   for c in result.convergences)


def test_find_all_deterministic_and_parallel_merge():
    lts = random_lts(8, 14, 3, 424242)
    a = find_all_diamonds(lts, 6)
    b = find_all_diamonds(lts, 6)
    c = find_all_diamonds(lts, 6, workers=4)
    assert a == b == c


def test_oracle_equivalence_sample():
    for seed in range(25):
        lts = random_lts(6, 11, 3, 313_000 + seed)
        for tgt in range(lts.state_count):
            det = find_diamonds_to(lts, tgt, 6).convergences()
            orc = enumerate_convergences_oracle(lts, tgt, 6)
            assert det == orc, (seed, tgt)


def test_thm5_runtime_assertion_on_fixtures():
    for lts in (fx.l1(), fx.l3a(), fx.l3b(), fx.l7(), fx.l7p(), fx.l8()):
        find_all_diamonds(lts, 6, verify=True)


# --- maximal_strict ---------------------------------------------------------

def test_maximal_prefix_chain():
    records = [Convergence(0, D([("a", 1)]), 9, True),
               Convergence(0, D([("a", 2)]), 9, True)]
    assert maximal_strict(records) == (records[1],)


def test_maximal_ignores_non_strict():
    records = [Convergence(0, D([("a", 2)]), 9, False)]
    assert maximal_strict(records) == ()


def test_maximal_on_l1():
    result = find_all_diamonds(fx.l1(), 6)
    kept = [c for c in maximal_strict(result.convergences) if c.source == 0]
    assert kept == [Convergence(0, fx.L1_DIAMOND, 5, True)]


def test_maximal_empty():
    assert maximal_strict(()) == ()


def test_maximal_overlap_violation():
    # hand-crafted incomparable records (never produced by a real run)
    records = [Convergence(0, D([(("a", "b"), 1)]), 1, True),
               Convergence(0, D([(("c", "d"), 1)]), 2, True)]
    with pytest.raises(OverlapViolation):
        maximal_strict(records)
