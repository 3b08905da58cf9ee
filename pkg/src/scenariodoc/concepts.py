"""Concept documentation: frequent usage patterns clustered into
concepts by clone similarity and situational relevance.

Pipeline per API: mine frequent itemsets over the scenarios' API-type
transactions, assign each scenario to its most similar pattern, fold
scenario-less sub-itemset patterns under their maximal superset, form
clone subgroups inside each pattern, connect patterns whose subgroup
outputs feed another subgroup's inputs, and present each connected
component as a concept {representative, see-also, rating, title}.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .apidb import ApiRecord
from .clones import clone_groups
from .fim import mine_frequent_itemsets
from .miner import UsageScenario
from .stats import StarRating, star_rating

logger = logging.getLogger(__name__)


@dataclass
class Pattern:
    id: int
    itemset: frozenset[str]
    support: int
    scenarios: list[UsageScenario] = field(default_factory=list)
    subgroups: list[list[UsageScenario]] = field(default_factory=list)

    def sort_key(self) -> tuple:
        return (-self.support, tuple(sorted(self.itemset)))


@dataclass
class Concept:
    id: int
    patterns: list[Pattern]
    representative: UsageScenario
    see_also: list[UsageScenario]
    rating: StarRating | None
    title: str

    def scenarios(self) -> list[UsageScenario]:
        return [self.representative, *self.see_also]


def pattern_similarity(scenario_types: frozenset[str],
                       itemset: frozenset[str]) -> float:
    """Overlap of the scenario's API types with the pattern, normalized
    by the scenario's own type count; 0 for type-less scenarios."""
    if not scenario_types:
        return 0.0
    return len(scenario_types & itemset) / len(scenario_types)


def assign_scenarios_to_patterns(
        scenarios: list[UsageScenario],
        itemsets: list[tuple[frozenset[str], int]]) -> list[Pattern]:
    """Assign each scenario to exactly one pattern of maximal similarity.

    Ties break on higher support, then the lexicographically smallest
    itemset. Scenarios with zero similarity everywhere become singleton
    patterns keyed by their own type set.
    """
    patterns = [Pattern(id=i + 1, itemset=itemset, support=support)
                for i, (itemset, support) in enumerate(itemsets)]
    singletons: dict[frozenset[str], Pattern] = {}
    next_id = len(patterns) + 1
    for scenario in scenarios:
        best: Pattern | None = None
        best_key = None
        for pattern in patterns:
            sim = pattern_similarity(scenario.api_types, pattern.itemset)
            if sim <= 0.0:
                continue
            key = (-sim, -pattern.support, tuple(sorted(pattern.itemset)))
            if best_key is None or key < best_key:
                best, best_key = pattern, key
        if best is not None:
            best.scenarios.append(scenario)
            continue
        key = frozenset(scenario.api_types)
        if key not in singletons:
            singletons[key] = Pattern(id=next_id, itemset=key, support=0)
            next_id += 1
        singleton = singletons[key]
        singleton.scenarios.append(scenario)
        singleton.support += 1
    return patterns + [singletons[k] for k in sorted(singletons, key=sorted)]


def group_subpatterns(patterns: list[Pattern]) -> list[Pattern]:
    """Fold scenario-less sub-itemset patterns under their superset.

    A scenario-less pattern whose itemset is strictly contained in
    another pattern's itemset disappears into that superset (all its
    would-be members already sit there via the similarity assignment).
    A pattern that carries its own scenarios stays separate even when
    its itemset is a subset of another's, so that situational relevance
    between e.g. a one-type pattern and its extension stays observable.
    Empty itemsets (type-less scenarios) never fold.
    """
    survivors: list[Pattern] = []
    folded = 0
    for pattern in patterns:
        if pattern.scenarios or not pattern.itemset:
            survivors.append(pattern)
            continue
        supersets = [other for other in patterns
                     if other is not pattern and other.itemset > pattern.itemset]
        if not supersets:
            survivors.append(pattern)
            continue
        folded += 1
    if folded:
        logger.debug("folded %d scenario-less sub-patterns", folded)
    return survivors


def form_subgroups(patterns: list[Pattern], *,
                   clone_threshold: float = 0.6,
                   clone_min_lines: int = 5) -> None:
    """Cluster each pattern's scenarios into near-miss clone subgroups."""
    for pattern in patterns:
        pattern.subgroups = clone_groups(
            pattern.scenarios,
            code_of=lambda s: s.snippet.text,
            threshold=clone_threshold,
            min_lines=clone_min_lines,
        )


def _subgroup_flows(subgroup: list[UsageScenario]):
    inputs = []
    outputs = []
    for scenario in subgroup:
        inputs.extend(scenario.dataflow.inputs)
        outputs.extend(scenario.dataflow.outputs)
    return inputs, outputs


def _flows_connect(output_fact, input_fact, api_types: frozenset[str]) -> bool:
    if not output_fact.type_name or output_fact.type_name != input_fact.type_name:
        return False
    # Slice check: the consuming subgroup must itself derive the shared
    # value through the same producing call the other pattern ends with,
    # and the flow must pass through a call on one of the API's types.
    if input_fact.produced_by != output_fact.method:
        return False
    if (input_fact.produced_receiver and output_fact.receiver_type
            and input_fact.produced_receiver != output_fact.receiver_type):
        return False
    touches_api = (
        (output_fact.receiver_type in api_types) or
        (input_fact.receiver_type in api_types) or
        (input_fact.produced_receiver in api_types)
    )
    return touches_api


def connect_patterns(patterns: list[Pattern],
                     api_types: frozenset[str]) -> dict[int, set[int]]:
    """Undirected edges between situationally relevant patterns.

    Two patterns connect when a terminal output of one subgroup matches
    an input of a subgroup in the other pattern under the slice check.
    Subgroups must have been formed first.
    """
    edges: dict[int, set[int]] = {p.id: set() for p in patterns}
    for i, first in enumerate(patterns):
        for second in patterns[i + 1:]:
            if _patterns_related(first, second, api_types):
                edges[first.id].add(second.id)
                edges[second.id].add(first.id)
    return edges


def _patterns_related(first: Pattern, second: Pattern,
                      api_types: frozenset[str]) -> bool:
    for group_a in first.subgroups:
        inputs_a, outputs_a = _subgroup_flows(group_a)
        for group_b in second.subgroups:
            inputs_b, outputs_b = _subgroup_flows(group_b)
            for out in outputs_a:
                for inp in inputs_b:
                    if _flows_connect(out, inp, api_types):
                        return True
            for out in outputs_b:
                for inp in inputs_a:
                    if _flows_connect(out, inp, api_types):
                        return True
    return False


def _recency_key(scenario: UsageScenario):
    return (scenario.created_at, scenario.post_id, scenario.id)


def build_concepts(patterns: list[Pattern],
                   edges: dict[int, set[int]]) -> list[Concept]:
    """One concept per connected component, most recent first.

    The representative is the component's most recent scenario (ties by
    post id); the title is its thread title; see-also holds the rest by
    recency; the rating aggregates all member reviews.
    """
    by_id = {p.id: p for p in patterns}
    seen: set[int] = set()
    components: list[list[Pattern]] = []
    for pattern in patterns:
        if pattern.id in seen:
            continue
        stack = [pattern.id]
        component = []
        while stack:
            pid = stack.pop()
            if pid in seen:
                continue
            seen.add(pid)
            component.append(by_id[pid])
            stack.extend(sorted(edges.get(pid, ())))
        components.append(component)

    concepts: list[Concept] = []
    for component in components:
        members = [s for pattern in component for s in pattern.scenarios]
        if not members:
            continue
        members = sorted(members, key=_recency_key, reverse=True)
        representative = members[0]
        positives = sum(len(s.positive_reviews()) for s in members)
        negatives = sum(len(s.negative_reviews()) for s in members)
        concepts.append(Concept(
            id=0,
            patterns=sorted(component, key=lambda p: p.sort_key()),
            representative=representative,
            see_also=members[1:],
            rating=star_rating(positives, negatives),
            title=representative.title,
        ))
    concepts.sort(key=lambda c: _recency_key(c.representative), reverse=True)
    for index, concept in enumerate(concepts, start=1):
        concept.id = index
    return concepts


def build_concept_documentation(api: ApiRecord,
                                scenarios: list[UsageScenario], *,
                                min_support: int = 2,
                                clone_threshold: float = 0.6,
                                clone_min_lines: int = 5) -> list[Concept]:
    """Full concept pipeline for one API's scenarios."""
    transactions = [sorted(s.api_types) for s in scenarios]
    itemsets = mine_frequent_itemsets(transactions, min_support=min_support)
    patterns = assign_scenarios_to_patterns(scenarios, itemsets)
    patterns = group_subpatterns(patterns)
    patterns = [p for p in patterns if p.scenarios]
    form_subgroups(patterns, clone_threshold=clone_threshold,
                   clone_min_lines=clone_min_lines)
    edges = connect_patterns(patterns, api.type_names())
    return build_concepts(patterns, edges)
