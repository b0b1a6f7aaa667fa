# SPDX-FileCopyrightText: Copyright (C) 2025 Akshat Kotpalliwar (alias IntegerAlex) <inquiry.akshatkotpalliwar@gmail.com>
# SPDX-License-Identifier: GPL-3.0-only

"""Disjoint-set forest with union by rank and path compression."""

from __future__ import annotations

from collections import Counter
from typing import Dict, Hashable


class UnionFind:
    """
    Maintain a partition of hashable items into disjoint sets.

    Items are registered lazily on first use, and ``components`` counts the
    sets among registered items.

    >>> uf = UnionFind()
    >>> uf.union(1, 2)
    True
    >>> uf.union(2, 1)
    False
    >>> uf.find(2) == uf.find(1)
    True
    >>> uf.components
    1
    """

    def __init__(self) -> None:
        self.parent: Dict[Hashable, Hashable] = {}
        self.rank: Counter = Counter()
        self.components = 0

    def add(self, item: Hashable) -> None:
        if item not in self.parent:
            self.parent[item] = item
            self.components += 1

    def find(self, item: Hashable) -> Hashable:
        self.add(item)
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        # path compression
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, left: Hashable, right: Hashable) -> bool:
        """Merge the sets of ``left`` and ``right``; return False if already merged."""
        root_left = self.find(left)
        root_right = self.find(right)
        if root_left == root_right:
            return False

        if self.rank[root_left] < self.rank[root_right]:
            root_left, root_right = root_right, root_left
        self.parent[root_right] = root_left
        if self.rank[root_left] == self.rank[root_right]:
            self.rank[root_left] += 1
        self.components -= 1
        return True

    def connected(self, left: Hashable, right: Hashable) -> bool:
        return self.find(left) == self.find(right)
