# tests/test_planner.py
import pytest
from pydantic import ValidationError

from services.exactlin.rng import RngState
from services.planner.errors import InvalidReductionTree, LemmaError, NoPlan, RuleError, ScriptError
from services.planner.execute import execute
from services.planner.lemmas import cite, lemma_violations, match_lemma, round_to_lemma
from services.planner.models import (
    BaseLemma,
    DirectCheck,
    MonotoneDims,
    MonotoneParams,
    Node,
    Permute,
    ReductionTree,
    Split,
)
from services.planner.planner import plan
from services.planner.power_split import PowerSplit, choose_split, largest_power
from services.planner.rules import apply_rule, balanced
from services.planner.script import SCHEDULE_ALIASES, Script, bundled_scripts, format_script, script_tree
from services.planner.validate import validate
from services.segre.model import Problem


def _tree(name):
    return plan(None, Script(name=name))


def _with_node(tree, node):
    return ReductionTree(root=tree.root, nodes={**tree.nodes, node.key: node})


# ---------- lemmas ----------

def test_match_lemma_in_tag_order():
    assert match_lemma(Problem.of((2, 2, 2), 1)).tag == "Start"
    assert match_lemma(Problem.of((2, 2, 2), 0, (1, 1, 1))).tag == "Start"
    assert match_lemma(Problem.of((4, 4, 4), 0, (4, 4, 4))) == BaseLemma(tag="Zero", u=(2, 2, 2))
    assert match_lemma(Problem.of((4, 4, 4), 1, (3, 3, 3))) == BaseLemma(tag="Uno", u=(2, 2, 2))
    assert match_lemma(Problem.of((16, 16, 16), 64)).tag == "Premain"
    assert match_lemma(Problem.of((16, 16, 16), 65)) is None


def test_zero_step_covers_the_k_one_shape():
    problem = Problem.of((2, 2, 4, 4, 4), 1, (7, 7, 3, 3, 3))
    cert = cite(problem, "ZeroStep", (3, 3, 2, 2, 2))
    assert cert.u == (3, 3, 2, 2, 2)
    assert "u_1 = 3 <= 3" in cert.conditions


def test_pren_is_only_matched_on_request():
    problem = Problem.of((8, 8, 8, 8), 8)
    assert match_lemma(problem) is None
    assert match_lemma(problem, allow_pren=True).tag == "Pren"


def test_lemma_side_condition_failures():
    errors, _ = lemma_violations(Problem.of((4, 4, 4), 0, (8, 4, 4)), "Zero")
    assert errors == ["u_1 = 3 exceeds 2"]
    errors, _ = lemma_violations(Problem.of((4, 4, 4), 0, (4, 4, 4)), "Zero", (2, 2, 1))
    assert errors and "does not match" in errors[0]
    errors, _ = lemma_violations(Problem.of((16, 16, 16), 64, (1, 0, 0)), "Premain")
    assert errors == ["aux counts must be zero, got (1, 0, 0)"]
    with pytest.raises(LemmaError):
        cite(Problem.of((3, 3, 3), 1), "Start")
    with pytest.raises(LemmaError):
        lemma_violations(Problem.of((2, 2, 2), 1), "Frobenius")


def test_round_to_lemma_raises_the_claim():
    problem = Problem.of((4, 4, 4), 0, (3, 4, 2))
    rule, target, lemma = round_to_lemma(problem)
    assert rule == MonotoneParams(k=0, p=(4, 4, 2))
    assert target.dominates(problem)
    assert lemma.tag == "Zero"
    assert round_to_lemma(Problem.of((4, 4, 4), 2)) is None


# ---------- rules ----------

def test_split_moves_points_into_aux_blocks():
    parent = Problem.of((4, 8, 8), 11, (11, 0, 0))
    rule = Split(factor=1, parts=(4, 4), k_parts=(5, 6), aux_parts=((7, 4), (), (0, 0)))
    children = apply_rule(parent, rule)
    assert [c.key for c in children] == ["4x4x8/5/7,6,0", "4x4x8/6/4,5,0"]


@pytest.mark.parametrize("rule", [
    Split(factor=0, parts=(2, 3), k_parts=(1, 1), aux_parts=((), (0, 0), (0, 0))),
    Split(factor=0, parts=(2, 2), k_parts=(1, 0), aux_parts=((), (0, 0), (0, 0))),
    Split(factor=0, parts=(2, 2), k_parts=(1, 1), aux_parts=((1, 1), (0, 0), (0, 0))),
    Split(factor=5, parts=(2, 2), k_parts=(1, 1), aux_parts=((), (0, 0), (0, 0))),
    MonotoneDims(dims=(4, 4, 8)),
    MonotoneParams(k=1, p=(0, 0, 0)),
    Permute(perm=(0, 0, 1)),
])
def test_bad_rule_arithmetic_raises(rule):
    with pytest.raises(RuleError):
        apply_rule(Problem.of((4, 4, 4), 2), rule)


def test_permute_and_monotone_children():
    parent = Problem.of((4, 4, 4), 3, (2, 3, 3))
    assert apply_rule(parent, Permute(perm=(1, 2, 0)))[0].p == (3, 3, 2)
    assert apply_rule(parent, MonotoneParams(k=3, p=(3, 3, 3)))[0].p == (3, 3, 3)
    assert apply_rule(parent, MonotoneDims(dims=(2, 4, 4)))[0].dims == (2, 4, 4)
    assert apply_rule(parent, DirectCheck()) == []


def test_balanced_gives_the_remainder_to_the_first_parts():
    assert balanced(7, 3) == (3, 2, 2)
    assert balanced(0, 2) == (0, 0)


def test_choose_split_prefers_the_largest_leftmost_factor():
    split = choose_split(Problem.of((8, 16, 16), 5, (3, 0, 1)), 2)
    assert split.factor == 1
    assert split.parts == (8, 8)
    assert split.k_parts == (3, 2)
    assert split.aux_parts == ((2, 1), (), (1, 0))
    assert choose_split(Problem.of((3, 3, 3), 1), 2) is None
    assert largest_power(27, 2) == 16
    assert largest_power(27, 3) == 27


# ---------- validation ----------

def test_bundled_schedules_are_valid():
    assert bundled_scripts() == ["cubic-10", "cubic-8", "cubic-9", "hypercubic-16x5"]
    for name in bundled_scripts():
        assert validate(_tree(name)).ok


def test_corrupted_split_is_reported_with_its_path():
    tree = _tree("cubic-9")
    root = tree.nodes[tree.root]
    bad = Node(problem=root.problem, rule=root.rule.model_copy(update={"k_parts": (8, 9, 10)}), children=root.children)
    report = validate(_with_node(tree, bad))
    assert not report.ok
    assert report.first.path == (tree.root,)
    assert "children should be" in report.first.message
    with pytest.raises(InvalidReductionTree):
        execute(_with_node(tree, bad), RngState(0), None)


def _split_mutations(tree):
    """Every split in the tree with one entry bumped by one."""
    for key, node in tree.nodes.items():
        rule = node.rule
        if rule.kind != "split":
            continue
        for field_name in ("parts", "k_parts"):
            values = getattr(rule, field_name)
            for t in range(len(values)):
                bumped = values[:t] + (values[t] + 1,) + values[t + 1:]
                yield key, rule.model_copy(update={field_name: bumped})
        for j, aux in enumerate(rule.aux_parts):
            for t in range(len(aux)):
                bumped = rule.aux_parts[:j] + (aux[:t] + (aux[t] + 1,) + aux[t + 1:],) + rule.aux_parts[j + 1:]
                yield key, rule.model_copy(update={"aux_parts": bumped})


@pytest.mark.parametrize("name", ["cubic-8", "cubic-9", "cubic-10", "hypercubic-16x5"])
def test_any_single_corrupted_split_entry_is_caught(name):
    tree = _tree(name)
    mutations = list(_split_mutations(tree))
    assert mutations
    for key, rule in mutations:
        node = tree.nodes[key]
        report = validate(_with_node(tree, Node(problem=node.problem, rule=rule, children=node.children)))
        assert not report.ok, (key, rule)
        assert report.first.node == key
        assert report.first.path[-1] == key


def test_split_arithmetic_errors_name_the_broken_part():
    tree = _tree("cubic-9")
    key = tree.nodes[tree.root].children[0]
    node = tree.nodes[key]
    for update, fragment in [
        ({"parts": (3, 3, 4)}, "do not sum"),
        ({"k_parts": (3, 3, 2)}, "do not split k"),
        ({"aux_parts": ((6, 6, 5), (), ())}, "do not split p_1"),
        ({"factor": 2}, "do not split p_2"),
    ]:
        bad = Node(problem=node.problem, rule=node.rule.model_copy(update=update), children=node.children)
        report = validate(_with_node(tree, bad))
        assert report.first.path == (tree.root, key)
        assert fragment in report.first.message


def test_corrupted_lemma_leaf_is_found_at_the_bottom():
    tree = _tree("hypercubic-16x5")
    leaf = tree.leaves()[0]
    bad = Node(problem=leaf.problem, rule=BaseLemma(tag="ZeroStep", u=(3, 3, 2, 2, 1)))
    report = validate(_with_node(tree, bad))
    assert len(report.violations) == 1
    assert len(report.first.path) == 13
    assert report.first.node == leaf.key


def test_cycles_missing_and_unreachable_nodes():
    problem = Problem.of((3, 3, 3), 1)
    loop = ReductionTree(
        root=problem.key,
        nodes={problem.key: Node(problem=problem, rule=Permute(perm=(0, 1, 2)), children=(problem.key,))},
    )
    assert validate(loop).first.message == "cycle"

    tree = _tree("cubic-9")
    leaf = tree.leaves()[0]
    pruned = ReductionTree(root=tree.root, nodes={k: v for k, v in tree.nodes.items() if k != leaf.key})
    assert validate(pruned).first.message == "child node missing"

    extra = Problem.of((2, 2, 2), 1)
    stray = _with_node(tree, Node(problem=extra, rule=BaseLemma(tag="Start")))
    assert validate(stray).first.message == "unreachable from the root"


def test_check_leaf_must_be_subabundant():
    problem = Problem.of((2, 2, 2), 2)
    tree = ReductionTree(root=problem.key, nodes={problem.key: Node(problem=problem, rule=DirectCheck())})
    assert "fills the ambient space" in validate(tree).first.message


# ---------- scripts ----------

@pytest.mark.parametrize("text,line,fragment", [
    ("4 4 4 | 3 | 0 0 0", 1, "expected 4 fields"),
    ("# header\n4 4 4 | 3 | 0 0 0 | frobnicate", 2, "unknown rule"),
    ("4 4 4 | 2 | 0 0 0 | split 1 2+2 k=1+1", 1, "has no line"),
    ("4 4 4 | 2 | 0 0 0 | split 1 2+3 k=1+1", 1, "do not sum"),
    ("4 4 4 | 1 | 0 2 0 | split 1 2+2 k=1+0", 1, "needs an explicit split"),
    ("4 4 4 | 1 | 0 0 0 | check\n4 4 4 | 1 | 0 0 0 | check", 2, "already on line 1"),
    ("4 4 4 | -1 | 0 0 0 | check", 1, ""),
])
def test_script_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(ScriptError) as err:
        script_tree(text)
    assert err.value.line == line
    assert str(err.value).startswith(f"line {line}: ")
    assert fragment in str(err.value)


def test_script_source_must_be_unique():
    with pytest.raises(ScriptError):
        script_tree("# only comments\n")
    with pytest.raises(ScriptError):
        plan(None, Script(name="no-such-schedule"))
    with pytest.raises(ValidationError):
        Script(name="cubic-9", text="4 4 4 | 1 | 0 0 0 | check")


def test_script_root_must_match_the_problem():
    with pytest.raises(ScriptError):
        plan(Problem.of((9, 9, 9), 27), Script(name="cubic-8"))
    assert plan(Problem.of((9, 9, 9), 27), Script(name="cubic-9")).root == "9x9x9/27/0,0,0"


@pytest.mark.parametrize("published,name", sorted(SCHEDULE_ALIASES.items()))
def test_published_schedule_names_load_the_bundled_files(published, name):
    assert name in bundled_scripts()
    assert _tree(published) == _tree(name)


@pytest.mark.parametrize("name", ["cubic-8", "cubic-10", "hypercubic-16x5"])
def test_format_script_parses_back_to_the_same_tree(name):
    tree = _tree(name)
    assert script_tree(format_script(tree)) == tree


# ---------- power-split ----------

def test_power_split_rounds_dims_down_to_premain():
    tree = plan(Problem.of((27, 27, 27), 64))
    root = tree.nodes[tree.root]
    assert root.rule == MonotoneDims(dims=(16, 16, 16))
    assert [leaf.rule.tag for leaf in tree.leaves()] == ["Premain"]


def test_power_split_rebuilds_the_hypercubic_schedule():
    assert plan(Problem.of((16,) * 5, 4096)) == _tree("hypercubic-16x5")


def test_base_three_rebuilds_the_cubic_nine_schedule():
    assert plan(Problem.of((9, 9, 9), 27), PowerSplit(base=3)) == _tree("cubic-9")


def test_power_split_falls_back_to_direct_checks():
    tree = plan(Problem.of((8, 8, 8), 22))
    assert tree.nodes[tree.root].rule.kind == "split"
    leaves = tree.leaves()
    assert [leaf.key for leaf in leaves] == ["4x8x8/11/11,0,0"]
    assert leaves[0].rule == DirectCheck(mode="first-order")


def test_power_split_without_a_route():
    with pytest.raises(NoPlan) as err:
        plan(Problem.of((3, 3, 3), 5))
    assert "base 2" in err.value.reason
    with pytest.raises(ValueError):
        plan(None, PowerSplit())


# ---------- execution ----------

def test_lemma_only_tree_passes_by_citation(field):
    result = execute(_tree("hypercubic-16x5"), RngState(0), field)
    assert result.verdict == "PASS"
    assert [leaf.lemma.tag for leaf in result.leaves] == ["ZeroStep"]
    assert result.leaves[0].seed is None


def test_cubic_nine_schedule_passes(field):
    tree = _tree("cubic-9")
    result = execute(tree, RngState(0), field, trials=2)
    assert result.verdict == "PASS"
    assert all(v == "PASS" for v in result.node_verdicts.values())
    leaf = result.leaves[0]
    assert leaf.first_order.kernel_dims == (3,)
    assert len(leaf.path) == 4


def test_threaded_execution_matches_serial(field):
    tree = _tree("cubic-8")
    serial = execute(tree, RngState(5), field, trials=1, workers=1)
    threaded = execute(tree, RngState(5), field, trials=1, workers=4)
    assert serial == threaded
    assert serial.verdict == "PASS"


def test_a_failing_leaf_fails_the_root(field):
    tree = script_tree("4 4 4 | 6 | 0 0 0 | check first-order")
    result = execute(tree, RngState(0), field)
    assert result.verdict == "FAIL"
    assert [leaf.key for leaf in result.failures] == ["4x4x4/6/0,0,0"]


@pytest.mark.slow
def test_cubic_ten_schedule_passes(field):
    result = execute(_tree("cubic-10"), RngState(0), field, trials=2)
    assert result.verdict == "PASS"
    assert sorted(leaf.key for leaf in result.leaves) == ["2x5x5/1/7,2,2", "3x5x5/3/5,2,2"]
    assert all(leaf.first_order.verdict == "PASS" for leaf in result.leaves)
