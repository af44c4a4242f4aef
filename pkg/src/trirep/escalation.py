"""Escalation trees: truant search, bounded leaf certification, witnesses.

Starting from the empty form, every node that misses some target element
(its *truant* s) is extended by one coefficient c with last <= c <= s, never
using the same value more than three times.  Nodes missing nothing up to the
truant bound are certified as leaves, either by a citable theorem or by a
deeper sieve up to the leaf bound.  The union of all truants is the minimal
witness set: checking a form against it decides whether the form attains the
whole target set.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field

from .errors import TruantBoundError
from .forms import TriangularForm, represented_up_to
from .rules import known_leaf
from .targets import FormImage, TargetSet


@dataclass(frozen=True)
class Truant:
    value: int


@dataclass(frozen=True)
class ProvisionalLeaf:
    verified_bound: int


@dataclass(frozen=True)
class KnownLeaf:
    rule_id: str


NodeStatus = Truant | ProvisionalLeaf | KnownLeaf


@dataclass
class EscalationNode:
    form: TriangularForm
    status: NodeStatus
    children: list["EscalationNode"] = field(default_factory=list)

    def walk(self):
        """Depth-first preorder; children ascend, so forms stream out in
        lexicographic order."""
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass(frozen=True)
class TreeConfig:
    truant_bound: int = 100_000
    leaf_bound: int = 200_000
    use_known_rules: bool = True

    def __post_init__(self):
        if not 1 <= self.truant_bound <= self.leaf_bound:
            raise ValueError("need 1 <= truant_bound <= leaf_bound")


@dataclass
class EscalationTree:
    target: TargetSet
    config: TreeConfig
    root: EscalationNode
    s0: tuple[int, ...]

    def nodes(self):
        yield from self.root.walk()

    def truant_nodes(self):
        return [n for n in self.nodes() if isinstance(n.status, Truant)]


def smallest_missing(form: TriangularForm, target: TargetSet, bound: int):
    """Least target member <= bound the form does not attain, or None.

    The empty form attains only 0, so its answer is the least member.
    """
    members = target.elements_up_to(bound)
    if members.size == 0:
        return None
    if form.is_empty:
        return int(members[0])
    table = represented_up_to(form, bound)
    gaps = members[~table.bits[members]]
    return int(gaps[0]) if gaps.size else None


def child_forms(form: TriangularForm, truant: int) -> list[TriangularForm]:
    """Extensions by one coefficient c, last <= c <= truant, ascending,
    skipping any value already used three times."""
    low = 1 if form.is_empty else form.last
    return [
        form.extended(c)
        for c in range(low, truant + 1)
        if form.multiplicity(c) < 3
    ]


def _classify(form: TriangularForm, target: TargetSet, config: TreeConfig) -> NodeStatus:
    t = smallest_missing(form, target, config.truant_bound)
    if t is not None:
        return Truant(t)
    if config.use_known_rules and not form.is_empty:
        rule = known_leaf(form, target)
        if rule is not None:
            return KnownLeaf(rule.rule_id)
    deep = smallest_missing(form, target, config.leaf_bound)
    if deep is not None:
        raise TruantBoundError(form, deep, config.truant_bound, config.leaf_bound)
    return ProvisionalLeaf(config.leaf_bound)


def build_tree(target: TargetSet, config: TreeConfig = TreeConfig()) -> EscalationTree:
    """Breadth-first escalation from the empty form.

    Every node either carries its truant and a full slate of children, or is
    a certified leaf.  Deterministic: children are generated in ascending
    coefficient order, so two runs with the same inputs build identical trees.
    """
    if isinstance(target.kind, FormImage):
        warnings.warn(
            "form-image target sets may have arbitrarily sparse membership; "
            "truant searches are certified only up to the configured bounds",
            stacklevel=2,
        )
    root = EscalationNode(TriangularForm(), _classify(TriangularForm(), target, config))
    queue = deque([root])
    while queue:
        node = queue.popleft()
        if not isinstance(node.status, Truant):
            continue
        for form in child_forms(node.form, node.status.value):
            child = EscalationNode(form, _classify(form, target, config))
            node.children.append(child)
            queue.append(child)
    s0 = tuple(
        sorted({n.status.value for n in root.walk() if isinstance(n.status, Truant)})
    )
    return EscalationTree(target, config, root, s0)


def witness_form(
    form: TriangularForm, truant: int, target: TargetSet, check_bound: int
):
    """The minimality witness for a truant node, plus its contract violations.

    Appends three copies of every integer from truant+1 through
    (truant+1)(truant+2)-1.  The result attains every integer >= truant+1
    (the three copies of consecutive values cover everything past the
    Frobenius range, each block attaining all multiples of its value), keeps
    everything the base form attains, and still misses the truant itself.
    Returned violations are the target members <= check_bound on the wrong
    side of that contract; an empty list certifies that no witness-set
    element other than this truant could be dropped.
    """
    s = truant
    tail = tuple(c for c in range(s + 1, (s + 1) * (s + 2)) for _ in range(3))
    witness = TriangularForm(tuple(sorted(form.coeffs + tail)))
    table = represented_up_to(witness, check_bound)
    members = target.elements_up_to(check_bound)
    bad = [int(n) for n in members[~table.bits[members]] if n != s]
    if s <= check_bound and target.contains(s) and table.bits[s]:
        bad.append(s)
    return witness, sorted(bad)


def stuck_report(tree: EscalationTree) -> list[tuple[EscalationNode, int]]:
    """Escalation steps that made no progress: (parent, c) pairs where the
    child still misses the parent's truant and its whole subtree never
    produces any other truant value.  Diagnostic only; never affects s0."""

    def subtree_truants(node):
        vals = set()
        for n in node.walk():
            if isinstance(n.status, Truant):
                vals.add(n.status.value)
        return vals

    out = []
    for node in tree.nodes():
        if not isinstance(node.status, Truant):
            continue
        s = node.status.value
        for child in node.children:
            if isinstance(child.status, Truant) and child.status.value == s:
                if subtree_truants(child) == {s}:
                    out.append((node, child.form.coeffs[-1]))
    return out
