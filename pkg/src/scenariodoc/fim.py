"""Frequent itemset mining over API type transactions (FP-growth).

Returns every itemset occurring in at least min_support transactions
with its exact support, in deterministic order (support descending,
then lexicographic). Supports are transaction counts: an itemset is
counted once per transaction that contains it, regardless of how often
a type occurs inside the transaction.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable


class _Node:
    __slots__ = ("item", "count", "parent", "children", "link")

    def __init__(self, item: str | None, parent: "_Node | None"):
        self.item = item
        self.count = 0
        self.parent = parent
        self.children: dict[str, _Node] = {}
        self.link: _Node | None = None


class _Tree:
    def __init__(self):
        self.root = _Node(None, None)
        self.heads: dict[str, _Node] = {}
        self.tails: dict[str, _Node] = {}

    def add(self, items: list[str], count: int = 1) -> None:
        node = self.root
        for item in items:
            child = node.children.get(item)
            if child is None:
                child = _Node(item, node)
                node.children[item] = child
                if item in self.tails:
                    self.tails[item].link = child
                else:
                    self.heads[item] = child
                self.tails[item] = child
            child.count += count
            node = child

    def nodes(self, item: str):
        node = self.heads.get(item)
        while node is not None:
            yield node
            node = node.link

    def prefix_paths(self, item: str):
        for node in self.nodes(item):
            path = []
            parent = node.parent
            while parent is not None and parent.item is not None:
                path.append(parent.item)
                parent = parent.parent
            path.reverse()
            yield path, node.count


def _mine(tree: _Tree, suffix: tuple[str, ...], min_support: int,
          out: list[tuple[frozenset[str], int]]) -> None:
    # Stable item order keeps the recursion deterministic.
    items = sorted(tree.heads)
    for item in items:
        support = sum(node.count for node in tree.nodes(item))
        if support < min_support:
            continue
        found = suffix + (item,)
        out.append((frozenset(found), support))
        conditional = _Tree()
        counts: Counter[str] = Counter()
        paths = []
        for path, count in tree.prefix_paths(item):
            paths.append((path, count))
            for p in path:
                counts[p] += count
        keep = {p for p, c in counts.items() if c >= min_support}
        for path, count in paths:
            filtered = [p for p in path if p in keep]
            if filtered:
                conditional.add(filtered, count)
        _mine(conditional, found, min_support, out)


def mine_frequent_itemsets(transactions: Iterable[Iterable[str]],
                           min_support: int = 2) -> list[tuple[frozenset[str], int]]:
    """Exactly the itemsets with support >= min_support, exact supports."""
    if min_support < 1:
        raise ValueError("min_support must be >= 1")
    unique = [sorted(set(t)) for t in transactions]
    counts: Counter[str] = Counter()
    for transaction in unique:
        counts.update(transaction)
    frequent_items = {item for item, c in counts.items() if c >= min_support}

    tree = _Tree()
    for transaction in unique:
        kept = [i for i in transaction if i in frequent_items]
        # Classic FP ordering: frequency descending, name as tie-break.
        kept.sort(key=lambda i: (-counts[i], i))
        if kept:
            tree.add(kept)

    results: list[tuple[frozenset[str], int]] = []
    _mine(tree, (), min_support, results)
    results.sort(key=lambda pair: (-pair[1], tuple(sorted(pair[0]))))
    return results
