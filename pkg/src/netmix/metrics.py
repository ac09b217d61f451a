"""Partition-quality scoring: normalized mutual information and confusion counts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NodeSetMismatchError
from .graph import Partition


@dataclass(frozen=True)
class NmiScore:
    """NMI value together with its ingredients (natural-log entropies)."""

    value: float
    mi: float
    h_gold: float
    h_pred: float


def confusion(gold: Partition, pred: Partition) -> np.ndarray:
    """K_gold x K_pred contingency table; entries sum to the node count."""
    if len(gold) != len(pred):
        raise NodeSetMismatchError(
            "partitions cover %d and %d nodes" % (len(gold), len(pred))
        )
    table = np.zeros((gold.n_groups, pred.n_groups), dtype=np.int64)
    np.add.at(table, (gold.assignments, pred.assignments), 1)
    return table


def _entropy(counts: np.ndarray, n: int) -> float:
    p = counts[counts > 0] / n
    return float(-(p * np.log(p)).sum())


def nmi(gold: Partition, pred: Partition) -> NmiScore:
    """Normalized mutual information 2*MI / (H_gold + H_pred).

    Computed from the exact integer contingency table with natural logs and
    the 0*log(0) = 0 convention. When both partitions are the trivial
    single-group partition (both entropies zero, necessarily identical) the
    score is 1; when exactly one entropy is zero MI is zero and so is the
    score.
    """
    table = confusion(gold, pred)
    n = len(gold)
    row = table.sum(axis=1)
    col = table.sum(axis=0)
    h_gold = _entropy(row, n)
    h_pred = _entropy(col, n)
    mi = 0.0
    for a, b in zip(*np.nonzero(table)):
        n_ab = table[a, b]
        mi += (n_ab / n) * np.log((n_ab * n) / (row[a] * col[b]))
    mi = max(mi, 0.0)
    denom = h_gold + h_pred
    if denom > 0.0:
        value = 2.0 * mi / denom
    else:
        value = 1.0
    value = min(max(value, 0.0), 1.0)
    return NmiScore(value=value, mi=float(mi), h_gold=h_gold, h_pred=h_pred)


def group_count(partition: Partition) -> int:
    """Number of groups after label compaction."""
    return int(np.unique(partition.assignments).size)
