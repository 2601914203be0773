from typing import Hashable, Iterable


class UnionFind[T: Hashable]:
    def __init__(self, items: Iterable[T]):
        self.parent: dict[T, T] = {x: x for x in items}
        self.rank: dict[T, int] = {x: 0 for x in self.parent}

    def find(self, x: T) -> T:
        y = self.parent[x]
        if self.parent[y] != y:
            y = self.parent[x] = self.find(y)
        return y

    def union(self, x: T, y: T):
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x

    def classes(self) -> list[list[T]]:
        """Classes in order of first member, members in insertion order."""
        by_root: dict[T, list[T]] = {}
        for x in self.parent:
            by_root.setdefault(self.find(x), []).append(x)
        return list(by_root.values())

    def __len__(self):
        return len({self.find(x) for x in self.parent})
