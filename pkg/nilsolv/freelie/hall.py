"""Hall basis - basic commutators of the free Lie algebra on m generators."""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

logger = logging.getLogger(__name__)

Nested = Union[int, list]


@dataclass(frozen=True)
class HallTree:
    """A basic commutator [left, right], or the generator e_label when `generator` is set.

    `rank` is the position in the Hall order: e_m < ... < e_1 < (weight 2) < (weight 3) < ...,
    and creation order within a weight.
    """

    index: int
    rank: int
    degree: int
    content: Tuple[int, ...]
    foliage: Tuple[int, ...]
    generator: Optional[int] = None
    left: Optional[int] = None
    right: Optional[int] = None

    @property
    def is_generator(self) -> bool:
        return self.generator is not None


def hall_basis(m: int, p: int) -> List[HallTree]:
    """All basic commutators of weight <= p, indexed by degree then creation order.

    [c_i, c_j] is basic when c_i > c_j and, for c_i = [c_s, c_t], also c_t <= c_j.
    """
    trees: List[HallTree] = []
    by_degree: Dict[int, List[HallTree]] = {}

    for label in range(1, m + 1):
        counts = [0] * m
        counts[label - 1] = 1
        tree = HallTree(
            index=label - 1,
            rank=m - label,
            degree=1,
            content=tuple(counts),
            foliage=(label,),
            generator=label,
        )
        trees.append(tree)
    by_degree[1] = list(trees)

    next_rank = m
    for k in range(2, p + 1):
        created: List[HallTree] = []
        for left_degree in range(k - 1, (k - 1) // 2, -1):
            right_degree = k - left_degree
            for left in by_degree[left_degree]:
                for right in by_degree[right_degree]:
                    if left.rank <= right.rank:
                        continue
                    if not left.is_generator and trees[left.right].rank > right.rank:
                        continue
                    tree = HallTree(
                        index=len(trees),
                        rank=next_rank,
                        degree=k,
                        content=tuple(a + b for a, b in zip(left.content, right.content)),
                        foliage=left.foliage + right.foliage,
                        left=left.index,
                        right=right.index,
                    )
                    next_rank += 1
                    trees.append(tree)
                    created.append(tree)
        by_degree[k] = created
        logger.debug("hall basis m=%d degree %d: %d trees", m, k, len(created))

    return trees


def nested(trees: List[HallTree], index: int) -> Nested:
    """Bracket expression as nested lists of generator labels, e.g. [[1, 2], 1]."""
    tree = trees[index]
    if tree.is_generator:
        return tree.generator
    return [nested(trees, tree.left), nested(trees, tree.right)]


def label(trees: List[HallTree], index: int) -> str:
    tree = trees[index]
    if tree.is_generator:
        return f"e{tree.generator}"
    return f"[{label(trees, tree.left)},{label(trees, tree.right)}]"
