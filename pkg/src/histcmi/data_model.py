"""Columns, bins, grids and label assignments for mixed discrete-continuous data.

A variable is represented by a :class:`MixedColumn`: its raw sample plus a
boolean mask marking the values treated as discrete atoms.  A discretization
of one variable is a :class:`BinSet`: one singleton bin per atom (volume 1)
plus consecutive half-open interval bins partitioning the continuous range
(volume = width).  A joint model over several variables is the Cartesian
product of per-dimension bin sets, held as a sparse :class:`Grid`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, LabelingError


@dataclass(frozen=True)
class MixedColumn:
    """One variable's sample with detected discrete points flagged."""

    values: np.ndarray
    discrete_mask: np.ndarray
    name: str = ""

    def __post_init__(self):
        if len(self.values) == 0:
            raise InputError("column must contain at least one value")
        if len(self.values) != len(self.discrete_mask):
            raise InputError("values and discrete_mask lengths differ")
        self.values.setflags(write=False)
        self.discrete_mask.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def unmasked(self) -> np.ndarray:
        return self.values[~self.discrete_mask]

    @property
    def atoms(self) -> np.ndarray:
        """Sorted distinct masked values."""
        return np.unique(self.values[self.discrete_mask])


def detect_discrete_points(column, t: int = 5, name: str = "") -> MixedColumn:
    """Mask every value whose exact-equality multiplicity in the column is >= t.

    Equality is exact floating-point equality: the mixtures this targets
    produce exactly repeated atoms, and epsilon-matching would silently merge
    close continuous values.
    """
    if t < 2:
        raise InputError(f"discreteness threshold must be >= 2, got {t}")
    values = np.asarray(column, dtype=np.float64).copy()
    if values.ndim != 1:
        raise InputError("column must be one-dimensional")
    if values.size == 0:
        raise InputError("column must contain at least one value")
    if not np.all(np.isfinite(values)):
        raise InputError("column contains non-finite values")
    _, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    mask = counts[inverse] >= t
    return MixedColumn(values=values, discrete_mask=mask, name=name)


@dataclass(frozen=True)
class SingletonBin:
    point: float

    @property
    def volume(self) -> float:
        return 1.0


@dataclass(frozen=True)
class IntervalBin:
    lo: float
    hi: float
    closed_right: bool = False

    def __post_init__(self):
        if not self.hi > self.lo:
            raise InputError(f"interval [{self.lo}, {self.hi}) has no width")

    @property
    def volume(self) -> float:
        return self.hi - self.lo


Bin = SingletonBin | IntervalBin


def degenerate_width(x: float) -> float:
    """Smallest representable positive width around x (one ULP at max(|x|, 1))."""
    return float(np.spacing(max(abs(x), 1.0)))


@dataclass(frozen=True)
class BinSet:
    """Per-dimension partition: singleton bins first, then interval bins.

    ``boundaries`` holds the interval edges (empty for a purely discrete
    column); intervals are left-closed/right-open with the last one
    right-closed, so every unmasked value has exactly one bin.
    ``candidate_cuts`` is the pool of selectable interior cut positions this
    partition was chosen from and ``chosen_cuts`` the selected subset.
    """

    singletons: np.ndarray
    boundaries: np.ndarray
    candidate_cuts: np.ndarray = field(default_factory=lambda: np.empty(0))
    chosen_cuts: np.ndarray = field(default_factory=lambda: np.empty(0))
    degenerate: bool = False

    def __post_init__(self):
        for arr in (self.singletons, self.boundaries, self.candidate_cuts, self.chosen_cuts):
            arr.setflags(write=False)
        if self.boundaries.size == 1:
            raise InputError("boundaries must be empty or have >= 2 entries")
        if self.boundaries.size and not np.all(np.diff(self.boundaries) > 0):
            raise InputError("interval boundaries must be strictly increasing")
        if not np.all(np.isin(self.chosen_cuts, self.candidate_cuts)):
            raise InputError("chosen cuts must come from the candidate set")

    @property
    def n_singletons(self) -> int:
        return len(self.singletons)

    @property
    def n_intervals(self) -> int:
        return max(0, len(self.boundaries) - 1)

    @property
    def n_bins(self) -> int:
        return self.n_singletons + self.n_intervals

    @property
    def bins(self) -> list[Bin]:
        out: list[Bin] = [SingletonBin(float(p)) for p in self.singletons]
        b = self.boundaries
        for i in range(self.n_intervals):
            out.append(IntervalBin(float(b[i]), float(b[i + 1]), closed_right=i == self.n_intervals - 1))
        return out

    @property
    def volumes(self) -> np.ndarray:
        """Per-bin volume in label order (singletons then intervals)."""
        return np.concatenate([np.ones(self.n_singletons), np.diff(self.boundaries)])


def binset_from_cuts(column: MixedColumn, lo: float, hi: float,
                     candidate_cuts: np.ndarray, chosen_cuts: np.ndarray) -> BinSet:
    """Assemble a BinSet for ``column`` from a chosen interior-cut subset."""
    chosen = np.sort(np.asarray(chosen_cuts, dtype=np.float64))
    boundaries = np.concatenate([[lo], chosen, [hi]])
    return BinSet(
        singletons=column.atoms,
        boundaries=boundaries,
        candidate_cuts=np.asarray(candidate_cuts, dtype=np.float64),
        chosen_cuts=chosen,
    )


def assign_labels(column: MixedColumn, bins: BinSet) -> np.ndarray:
    """Map every row to its bin index (singletons first, intervals after).

    Masked values map to their singleton; unmasked values to the unique
    interval containing them (last interval right-closed).
    """
    labels = np.empty(column.n, dtype=np.int64)
    mask = column.discrete_mask

    if mask.any():
        vals = column.values[mask]
        idx = np.searchsorted(bins.singletons, vals)
        ok = (idx < bins.n_singletons) & (bins.singletons[np.minimum(idx, bins.n_singletons - 1)] == vals) \
            if bins.n_singletons else np.zeros(len(vals), dtype=bool)
        if not np.all(ok):
            bad = vals[~ok][0]
            raise LabelingError(f"masked value {bad!r} has no singleton bin")
        labels[mask] = idx

    if (~mask).any():
        if bins.n_intervals == 0:
            raise LabelingError("column has continuous values but bins have no intervals")
        vals = column.values[~mask]
        b = bins.boundaries
        if vals.min() < b[0] or vals.max() > b[-1]:
            raise LabelingError("continuous value outside the interval range")
        idx = np.searchsorted(b, vals, side="right") - 1
        np.clip(idx, 0, bins.n_intervals - 1, out=idx)  # fold max value into last bin
        labels[~mask] = bins.n_singletons + idx

    return labels


@dataclass(frozen=True)
class Labeling:
    """Discretized dataset: per-row bin indices for every dimension."""

    labels: np.ndarray  # (n, k) int64
    bin_counts: tuple[int, ...]

    def __post_init__(self):
        self.labels.setflags(write=False)
        if self.labels.ndim != 2:
            raise InputError("labels must be an (n, k) matrix")
        for j, kj in enumerate(self.bin_counts):
            col = self.labels[:, j]
            if col.size and (col.min() < 0 or col.max() >= kj):
                raise InputError(f"labels of dimension {j} outside [0, {kj})")

    @property
    def n(self) -> int:
        return self.labels.shape[0]

    @property
    def k(self) -> int:
        return self.labels.shape[1]


@dataclass(frozen=True)
class Grid:
    """Cartesian product of per-dimension bin sets with sparse cell counts."""

    dims: tuple[BinSet, ...]
    counts: dict[tuple[int, ...], int]
    n: int

    @property
    def K(self) -> int:
        k = 1
        for d in self.dims:
            k *= d.n_bins
        return k

    def cell_volume(self, cell: tuple[int, ...]) -> float:
        v = 1.0
        for d, idx in zip(self.dims, cell):
            v *= d.volumes[idx]
        return v


def build_grid(labelings: list[np.ndarray], bins: list[BinSet]) -> Grid:
    """Count rows per joint cell; cells absent from the map have count 0."""
    if not labelings:
        raise InputError("need at least one labeled dimension")
    n = len(labelings[0])
    for lab in labelings:
        if len(lab) != n:
            raise InputError("labelings disagree on sample size")
    mat = np.column_stack(labelings)
    cells, counts = np.unique(mat, axis=0, return_counts=True)
    count_map = {tuple(int(v) for v in row): int(c) for row, c in zip(cells, counts)}
    return Grid(dims=tuple(bins), counts=count_map, n=n)
