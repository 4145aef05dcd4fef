"""Node-to-community assignments with dense community ids."""
from __future__ import annotations

import numpy as np


class Partition:
    """Assignment of every node to exactly one community.

    Community ids are dense integers 0..c-1; `sizes` caches the per
    community node counts and always agrees with `assignment`.
    """

    __slots__ = ("assignment", "sizes")

    def __init__(self, assignment):
        labels = np.asarray(assignment, dtype=np.int64)
        if labels.ndim != 1 or len(labels) == 0:
            raise ValueError("assignment must be a nonempty 1-d sequence")
        if labels.min() < 0:
            raise ValueError("community ids must be nonnegative")
        c = int(labels.max()) + 1
        sizes = np.bincount(labels, minlength=c)
        if (sizes == 0).any():
            raise ValueError("community ids must be dense 0..c-1")
        self.assignment = labels
        self.sizes = sizes

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Relabel arbitrary hashable labels densely, by first appearance."""
        seen: dict = {}
        dense = np.empty(len(labels), dtype=np.int64)
        for i, lab in enumerate(labels):
            if lab not in seen:
                seen[lab] = len(seen)
            dense[i] = seen[lab]
        return cls(dense)

    @classmethod
    def from_sets(cls, n: int, communities) -> "Partition":
        labels = np.full(n, -1, dtype=np.int64)
        for cid, members in enumerate(communities):
            for v in members:
                if labels[v] != -1:
                    raise ValueError(f"node {v} assigned twice")
                labels[v] = cid
        if (labels == -1).any():
            missing = int(np.flatnonzero(labels == -1)[0])
            raise ValueError(f"node {missing} not assigned")
        return cls(labels)

    @property
    def n(self) -> int:
        return len(self.assignment)

    @property
    def n_communities(self) -> int:
        return len(self.sizes)

    def members(self) -> list[np.ndarray]:
        order = np.argsort(self.assignment, kind="stable")
        bounds = np.cumsum(self.sizes)[:-1]
        return np.split(order, bounds)

    def __getitem__(self, v: int) -> int:
        return int(self.assignment[v])

    def __eq__(self, other) -> bool:
        return (isinstance(other, Partition)
                and np.array_equal(self.assignment, other.assignment))

    def __repr__(self) -> str:
        return f"Partition(n={self.n}, communities={self.n_communities})"
