"""
Plan scripts: one node per line, `dims | k | p-vector | rule`, the first line
is the root. Factor indices in rules are 1-based. Rules:

    split <i> <a+b...> k=<k1+k2...> [p<j>=<x+y...>]
    check [first-order|groebner|both]
    lemma <tag> [u=<u1,u2,...>]
    dims <d1,d2,...>
    params k=<k'> p=<p1,p2,...>
    permute <s1 s2 ...>

Blank lines and `#` comments are ignored. A missing p<j> on a split is only
allowed when p_j = 0.
"""
from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from services.planner.errors import RuleError, ScriptError
from services.planner.lemmas import LEMMA_TAGS
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
from services.planner.rules import apply_rule
from services.segre.model import Problem

SCHEDULES_DIR = Path(__file__).with_name("schedules")
CHECK_MODES = ("first-order", "groebner", "both")


class Script(BaseModel):
    """A bundled schedule by name, or script text."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["script"] = "script"
    name: Optional[str] = None
    text: Optional[str] = None

    @model_validator(mode="after")
    def _one_source(self):
        if (self.name is None) == (self.text is None):
            raise ValueError("give exactly one of name or text")
        return self

    def source(self) -> str:
        return self.text if self.text is not None else load_script(self.name)


# Published names of the bundled schedules.
SCHEDULE_ALIASES = {
    "paper-a8": "cubic-8",
    "paper-a9": "cubic-9",
    "paper-a10": "cubic-10",
    "paper-16x5": "hypercubic-16x5",
}


def bundled_scripts() -> List[str]:
    return sorted(path.stem for path in SCHEDULES_DIR.glob("*.plan"))


def load_script(name: str) -> str:
    path = SCHEDULES_DIR / f"{SCHEDULE_ALIASES.get(name, name)}.plan"
    if not path.is_file():
        known = bundled_scripts() + sorted(SCHEDULE_ALIASES)
        raise ScriptError(f"unknown schedule {name!r}; bundled: {', '.join(known)}")
    return path.read_text(encoding="utf-8")


def _ints(text: str, sep: Optional[str] = None) -> Tuple[int, ...]:
    return tuple(int(x) for x in text.replace(",", " ").split(sep) if x.strip())


def _parts(text: str) -> Tuple[int, ...]:
    return tuple(int(x) for x in text.split("+"))


def _options(tokens: List[str]) -> Dict[str, str]:
    options = {}
    for token in tokens:
        name, eq, value = token.partition("=")
        if not eq or not value:
            raise ValueError(f"expected name=value, got {token!r}")
        options[name.lower()] = value
    return options


def parse_rule(text: str, problem: Problem):
    tokens = text.split()
    if not tokens:
        raise ValueError("missing rule")
    head, args = tokens[0].lower(), tokens[1:]
    if head == "split":
        if len(args) < 3:
            raise ValueError("split needs a factor, parts and k=")
        i = int(args[0]) - 1
        options = _options(args[2:])
        if "k" not in options:
            raise ValueError("split needs k=")
        parts = _parts(args[1])
        aux = []
        for j in range(problem.n):
            given = options.pop(f"p{j + 1}", None)
            if j == i:
                if given is not None:
                    raise ValueError(f"p{j + 1} given for the split factor")
                aux.append(())
            elif given is None:
                if problem.p[j]:
                    raise ValueError(f"p{j + 1} = {problem.p[j]} needs an explicit split")
                aux.append((0,) * len(parts))
            else:
                aux.append(_parts(given))
        k_parts = _parts(options.pop("k"))
        if options:
            raise ValueError(f"unknown split options {sorted(options)}")
        return Split(factor=i, parts=parts, k_parts=k_parts, aux_parts=tuple(aux))
    if head == "check":
        mode = args[0].lower() if args else "first-order"
        if mode not in CHECK_MODES or len(args) > 1:
            raise ValueError(f"check mode must be one of {', '.join(CHECK_MODES)}")
        return DirectCheck(mode=mode)
    if head == "lemma":
        if not args:
            raise ValueError("lemma needs a tag")
        tags = {t.lower(): t for t in LEMMA_TAGS}
        if args[0].lower() not in tags:
            raise ValueError(f"unknown lemma {args[0]!r}; known: {', '.join(LEMMA_TAGS)}")
        options = _options(args[1:])
        u = _ints(options.pop("u")) if "u" in options else None
        if options:
            raise ValueError(f"unknown lemma options {sorted(options)}")
        return BaseLemma(tag=tags[args[0].lower()], u=u)
    if head == "dims":
        return MonotoneDims(dims=_ints(" ".join(args)))
    if head == "params":
        options = _options(args)
        if set(options) != {"k", "p"}:
            raise ValueError("params needs k= and p=")
        return MonotoneParams(k=int(options["k"]), p=_ints(options["p"]))
    if head == "permute":
        return Permute(perm=tuple(x - 1 for x in _ints(" ".join(args))))
    raise ValueError(f"unknown rule {head!r}")


def parse_line(line: str, lineno: int) -> Tuple[Problem, object]:
    fields = [f.strip() for f in line.split("|")]
    if len(fields) != 4:
        raise ScriptError(f"expected 4 fields 'dims | k | p | rule', got {len(fields)}", lineno)
    try:
        problem = Problem.of(_ints(fields[0]), int(fields[1]), _ints(fields[2]))
        rule = parse_rule(fields[3], problem)
    except (ValueError, ValidationError) as exc:
        message = exc.errors()[0]["msg"] if isinstance(exc, ValidationError) else str(exc)
        raise ScriptError(message, lineno) from exc
    return problem, rule


def script_tree(text: str) -> ReductionTree:
    """Instantiate a script; every child a rule produces must have its own line."""
    entries: Dict[str, Tuple[int, Problem, object]] = {}
    root = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        problem, rule = parse_line(line, lineno)
        if problem.key in entries:
            raise ScriptError(f"{problem} already on line {entries[problem.key][0]}", lineno)
        entries[problem.key] = (lineno, problem, rule)
        root = root or problem.key
    if root is None:
        raise ScriptError("empty script")

    nodes = {}
    for key, (lineno, problem, rule) in entries.items():
        try:
            children = apply_rule(problem, rule)
        except RuleError as exc:
            raise ScriptError(str(exc), lineno) from exc
        for child in children:
            if child.key not in entries:
                raise ScriptError(f"child {child} has no line", lineno)
        nodes[key] = Node(problem=problem, rule=rule, children=tuple(c.key for c in children))
    return ReductionTree(root=root, nodes=nodes)


def format_rule(rule) -> str:
    if isinstance(rule, Split):
        text = f"split {rule.factor + 1} {'+'.join(map(str, rule.parts))} k={'+'.join(map(str, rule.k_parts))}"
        for j, parts in enumerate(rule.aux_parts):
            if parts and any(parts):
                text += f" p{j + 1}={'+'.join(map(str, parts))}"
        return text
    if isinstance(rule, DirectCheck):
        return f"check {rule.mode}"
    if isinstance(rule, BaseLemma):
        return f"lemma {rule.tag.lower()}" + (f" u={','.join(map(str, rule.u))}" if rule.u else "")
    if isinstance(rule, MonotoneDims):
        return f"dims {','.join(map(str, rule.dims))}"
    if isinstance(rule, MonotoneParams):
        return f"params k={rule.k} p={','.join(map(str, rule.p))}"
    if isinstance(rule, Permute):
        return "permute " + " ".join(str(i + 1) for i in rule.perm)
    raise TypeError(f"unknown rule {rule!r}")


def format_line(node: Node) -> str:
    problem = node.problem
    return (
        f"{' '.join(map(str, problem.dims))} | {problem.k} | "
        f"{' '.join(map(str, problem.p))} | {format_rule(node.rule)}"
    )


def format_script(tree: ReductionTree) -> str:
    """Depth-first, one line per node; parses back to the same tree."""
    return "\n".join(format_line(node) for node in tree.walk()) + "\n"
