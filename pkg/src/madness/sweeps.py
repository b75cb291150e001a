"""Exhaustive sweeps over collections: distributions, maxima, five targets.

The key observation making full sweeps cheap: every target sees the same
abstract target graph once its 20 edge cubes are funneled into the 21 fixed
slots defined in the solver module (12 adjacent-pair slots, 4x2 diagonal
slots, 1 target slot).  Collections containing an unusable cube have
solution number 0, so a single classification pass over the C(21,8) =
203,490 slot subsets decides the solution number of every collection for
every target; per-target work is then a cheap remap of slot masks to cube
masks, done with numpy.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cubes import COLUMN_LETTERS, ROW_LETTERS, build_tableau, mirror_name
from .solver import (
    DIAGONAL_PAIRS,
    SLOT_COUNT,
    SLOT_ENDPOINTS,
    TARGET_SLOT,
    build_target_graph,
    classify_edges,
    solution_number,
    solution_number_formula,
)

__all__ = [
    "TOTAL_COLLECTIONS",
    "USABLE_COLLECTIONS",
    "SlotTable",
    "SolutionDistribution",
    "MaxCollectionCensus",
    "FiveTargetRule",
    "FiveTargetRecord",
    "InvalidRuleError",
    "VerificationError",
    "slot_table",
    "solution_values",
    "distribution_for_target",
    "distribution_for_target_direct",
    "buildable_mask_table",
    "distribution_buildable",
    "buildable_targets",
    "count_max_collections",
    "five_target_rules",
    "five_target_record",
    "five_target_records",
]

TOTAL_COLLECTIONS = 5852925        # C(30, 8)
USABLE_COLLECTIONS = 203490        # C(21, 8)


class InvalidRuleError(ValueError):
    """A five-target rule violating the 3-column/4-row shape constraints."""


class VerificationError(RuntimeError):
    """A cross-check between independent computations failed."""


@dataclass(frozen=True)
class SlotTable:
    """Solution numbers of all 8-subsets of the 21 abstract slots.

    ``table`` maps a 21-bit slot mask to its solution number (uint8, zero
    for masks never touched); ``nonzero_masks``/``nonzero_values`` list the
    133,680 buildable subsets.
    """

    table: np.ndarray
    nonzero_masks: np.ndarray
    nonzero_values: np.ndarray

    def distribution(self):
        values, counts = np.unique(self.nonzero_values, return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}


@lru_cache(maxsize=1)
def slot_table():
    """Classify every 8-subset of slots once; shared by all sweeps."""
    table = np.zeros(1 << SLOT_COUNT, dtype=np.uint8)
    masks = []
    values = []
    for combo in itertools.combinations(range(SLOT_COUNT), 8):
        target_in = combo[-1] == TARGET_SLOT
        edges = [SLOT_ENDPOINTS[s] for s in combo if s != TARGET_SLOT]
        value = solution_number_formula(classify_edges(edges, target_in))
        if value:
            mask = 0
            for s in combo:
                mask |= 1 << s
            table[mask] = value
            masks.append(mask)
            values.append(value)
    return SlotTable(
        table=table,
        nonzero_masks=np.asarray(masks, dtype=np.uint32),
        nonzero_values=np.asarray(values, dtype=np.uint8),
    )


@dataclass(frozen=True)
class SolutionDistribution:
    """Counts of collections by solution number for one target.

    ``counts`` covers the nonzero solution numbers; zero-solution
    collections are the remainder of the C(30,8) total.
    """

    target: str
    counts: dict
    total_collections: int = TOTAL_COLLECTIONS

    @property
    def buildable_total(self):
        return sum(self.counts.values())

    @property
    def zero_count(self):
        return self.total_collections - self.buildable_total

    @property
    def buildable_fraction(self):
        return self.buildable_total / self.total_collections


def solution_values():
    """The nonzero solution numbers that actually occur, ascending."""
    return tuple(sorted(slot_table().distribution()))


def distribution_for_target(target):
    """Solution-number distribution over all C(30,8) collections.

    Builds the target's graph (which proves the target maps onto the 21-slot
    structure) and reads the shared slot classification.
    """
    graph = build_target_graph(target)
    return SolutionDistribution(target=graph.target.name, counts=slot_table().distribution())


def distribution_for_target_direct(target):
    """Same distribution by classifying each usable 8-set of real cubes.

    Slow path kept deliberately independent of the slot table; collections
    with an unusable cube are skipped because their solution number is 0
    (their incidence matrix has a zero column).
    """
    tableau = build_tableau()
    graph = build_target_graph(target, tableau)
    usable = graph.usable_ids()
    counts = Counter()
    for combo in itertools.combinations(usable, 8):
        value = solution_number(combo, target, tableau)
        if value:
            counts[value] += 1
    return SolutionDistribution(target=graph.target.name, counts=dict(counts))


@lru_cache(maxsize=None)
def buildable_mask_table(target_name):
    """(cube masks, solution numbers) of all buildable collections for one target."""
    graph = build_target_graph(target_name)
    st = slot_table()
    shifts = np.asarray(graph.cube_of_slot, dtype=np.uint32)
    masks = np.zeros(st.nonzero_masks.shape, dtype=np.uint32)
    for slot in range(SLOT_COUNT):
        present = (st.nonzero_masks >> np.uint32(slot)) & np.uint32(1)
        masks |= present << shifts[slot]
    return masks, st.nonzero_values


def distribution_buildable():
    """Distribution of the buildable-target count over all C(30,8) collections.

    Returns (distribution dict count -> collections, five-target cube masks
    sorted ascending).  A collection's buildable count is how many of the 30
    targets it can build; the five-target masks are the maximum achievers.
    """
    tableau = build_tableau()
    all_masks = np.concatenate(
        [buildable_mask_table(c.name)[0] for c in tableau]
    )
    masks, per_mask = np.unique(all_masks, return_counts=True)
    top = int(per_mask.max())
    if top > 5:
        raise VerificationError(f"a collection builds {top} targets; expected at most 5")
    values, counts = np.unique(per_mask, return_counts=True)
    distribution = {int(v): int(c) for v, c in zip(values, counts)}
    distribution[0] = TOTAL_COLLECTIONS - len(masks)
    five_masks = masks[per_mask == 5]
    return distribution, np.sort(five_masks)


def buildable_targets(collection, tableau=None):
    """Names of the targets this collection can build (at most 5)."""
    tableau = tableau or build_tableau()
    names = frozenset(
        c.name for c in tableau if solution_number(collection, c, tableau) > 0
    )
    if len(names) > 5:
        raise VerificationError("a collection cannot build more than 5 targets")
    return names


@dataclass(frozen=True)
class MaxCollectionCensus:
    """The collections attaining the maximum solution number for one target."""

    target: str
    sweep_masks: tuple            # from the exhaustive sweep, sorted
    double_edge_masks: tuple      # all four diagonals doubled, +- target swap
    path_masks: tuple             # target + two doubled diagonals + 3-path

    @property
    def count(self):
        return len(self.sweep_masks)


def count_max_collections(target):
    """Census of maximum-solution collections, swept and rebuilt structurally.

    The sweep reads the buildable mask table.  The structural families:
    either all four main diagonals doubled (with any one cube optionally
    swapped for the target), or the target plus two doubled diagonals plus a
    3-edge path spanning the four remaining block corners.  The two routes
    must agree exactly.
    """
    tableau = build_tableau()
    graph = build_target_graph(target, tableau)
    masks, values = buildable_mask_table(graph.target.name)
    top = int(values.max())
    sweep = sorted(int(m) for m in masks[values == top])

    diag_cubes = [
        (graph.cube_of_slot[12 + 2 * p], graph.cube_of_slot[13 + 2 * p])
        for p in range(4)
    ]
    target_bit = 1 << graph.target.id
    base = 0
    for a, b in diag_cubes:
        base |= (1 << a) | (1 << b)
    family_a = [base]
    for a, b in diag_cubes:
        family_a.append(base ^ (1 << a) | target_bit)
        family_a.append(base ^ (1 << b) | target_bit)

    family_b = []
    for keep in itertools.combinations(range(4), 2):
        drop = [p for p in range(4) if p not in keep]
        kept_mask = 0
        for p in keep:
            a, b = diag_cubes[p]
            kept_mask |= (1 << a) | (1 << b)
        free_vertices = set()
        for p in drop:
            free_vertices.update(DIAGONAL_PAIRS[p])
        slots = [
            s
            for s in range(TARGET_SLOT)
            if set(SLOT_ENDPOINTS[s]) <= free_vertices
        ]
        for chosen in itertools.combinations(slots, 3):
            edges = [SLOT_ENDPOINTS[s] for s in chosen]
            summary = classify_edges(edges, target_in_collection=False)
            spanning = [c for c in summary.components if c.vertices > 1]
            if len(spanning) == 1 and spanning[0].vertices == 4 and spanning[0].is_tree:
                m = kept_mask | target_bit
                for s in chosen:
                    m |= 1 << graph.cube_of_slot[s]
                family_b.append(m)

    family_a = sorted(set(family_a))
    family_b = sorted(set(family_b))
    if set(family_a) & set(family_b):
        raise VerificationError("structural max-collection families overlap")
    if sorted(family_a + family_b) != sweep:
        raise VerificationError(
            f"structural census ({len(family_a)}+{len(family_b)}) disagrees "
            f"with sweep ({len(sweep)}) for {graph.target.name}"
        )
    return MaxCollectionCensus(
        target=graph.target.name,
        sweep_masks=tuple(sweep),
        double_edge_masks=tuple(family_a),
        path_masks=tuple(family_b),
    )


# ---------------------------------------------------------------------------
# Five-target collections.  Rule: pick 3 columns, then 4 rows of which
# exactly 2 have their letter among the chosen columns.  The 4x3 cell block
# loses its 2 diagonal cells, leaving 10 cubes; the complement block holds
# 2x3 cells of which one is diagonal, leaving 5 targets; dropping the 2
# mirrors of targets from the 10 cubes leaves the 8-cube collection.  The
# rows-first orientation is the mirror image of the columns-first one.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiveTargetRule:
    columns: tuple       # 3 distinct column letters
    rows: tuple          # 4 distinct row letters, exactly 2 with letter in columns
    columns_first: bool = True

    def __post_init__(self):
        cols = tuple(self.columns)
        rows = tuple(self.rows)
        if len(cols) != 3 or len(set(cols)) != 3 or any(c not in COLUMN_LETTERS for c in cols):
            raise InvalidRuleError(f"need 3 distinct column letters, got {cols!r}")
        if len(rows) != 4 or len(set(rows)) != 4 or any(r not in ROW_LETTERS for r in rows):
            raise InvalidRuleError(f"need 4 distinct row letters, got {rows!r}")
        matching = sum(1 for r in rows if r.lower() in cols)
        if matching != 2:
            raise InvalidRuleError(
                f"exactly 2 of the rows must match a chosen column, got {matching}"
            )
        object.__setattr__(self, "columns", tuple(sorted(cols)))
        object.__setattr__(self, "rows", tuple(sorted(rows)))


@dataclass(frozen=True)
class FiveTargetRecord:
    rule: FiveTargetRule
    collection: tuple    # 8 cube names, sorted
    targets: tuple       # 5 target names, sorted
    solution_numbers: dict  # target name -> solution number


def five_target_rules():
    """All 360 valid rules: 20 column choices x 9 row choices x 2 orientations."""
    for cols in itertools.combinations(COLUMN_LETTERS, 3):
        inside = [r for r in ROW_LETTERS if r.lower() in cols]
        outside = [r for r in ROW_LETTERS if r.lower() not in cols]
        for pick_in in itertools.combinations(inside, 2):
            for pick_out in itertools.combinations(outside, 2):
                rows = pick_in + pick_out
                for columns_first in (True, False):
                    yield FiveTargetRule(cols, rows, columns_first)


def _apply_rule(rule):
    cells = [
        r + c
        for r in rule.rows
        for c in rule.columns
        if r.lower() != c
    ]
    other_rows = [r for r in ROW_LETTERS if r not in rule.rows]
    other_cols = [c for c in COLUMN_LETTERS if c not in rule.columns]
    targets = [
        r + c for r in other_rows for c in other_cols if r.lower() != c
    ]
    assert len(cells) == 10 and len(targets) == 5
    mirrors = {mirror_name(t) for t in targets} & set(cells)
    if len(mirrors) != 2:
        raise VerificationError(f"rule {rule} removed {len(mirrors)} mirrors, expected 2")
    collection = [c for c in cells if c not in mirrors]
    if not rule.columns_first:
        collection = [mirror_name(n) for n in collection]
        targets = [mirror_name(n) for n in targets]
    return tuple(sorted(collection)), tuple(sorted(targets))


def five_target_record(rule, tableau=None, verify=True):
    """Instantiate one rule and (optionally) verify it solves as promised."""
    tableau = tableau or build_tableau()
    collection, targets = _apply_rule(rule)
    numbers = {t: solution_number(collection, t, tableau) for t in targets}
    if verify:
        if any(v == 0 for v in numbers.values()):
            raise VerificationError(f"rule {rule} produced an unbuildable target")
        actual = buildable_targets(collection, tableau)
        if actual != frozenset(targets):
            raise VerificationError(
                f"rule {rule} promises targets {targets}, engine finds {sorted(actual)}"
            )
    return FiveTargetRecord(
        rule=rule,
        collection=collection,
        targets=targets,
        solution_numbers=numbers,
    )


def five_target_records(tableau=None, verify=True):
    """All 360 five-target records; collections are pairwise distinct."""
    tableau = tableau or build_tableau()
    records = [five_target_record(rule, tableau, verify) for rule in five_target_rules()]
    if len({r.collection for r in records}) != len(records):
        raise VerificationError("five-target collections are not pairwise distinct")
    return records
