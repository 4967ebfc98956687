"""Plug-in entropies and histogram-based (conditional) mutual information.

A single joint adaptive histogram is fitted over all of (X, Y, Z); the four
entropies of I(X;Y|Z) = H(X,Z) + H(Y,Z) - H(X,Y,Z) - H(Z) are then plug-in
entropies of label projections of that one fit.  Because marginal cell
volumes are products of per-dimension bin volumes, every volume term in the
continuous-form estimator cancels across the four-entropy sum, so the
discrete plug-in value *is* the continuous estimate; both are computed and
cross-checked on every call.

Estimates are in nats; the model-selection scores underneath stay in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .data_model import Grid, detect_discrete_points
from .errors import InputError, ModelError
from .histmd import FitConfig, FitResult, greedy_fit

_CANCELLATION_TOL = 1e-9


@dataclass(frozen=True)
class VariableGroup:
    """Named set of dataset dimensions playing the X, Y or Z role."""

    name: str
    dims: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.dims)) != len(self.dims):
            raise InputError(f"group {self.name!r} repeats a dimension")


@dataclass(frozen=True)
class EstimateResult:
    value: float  # nats
    h_xz: float
    h_yz: float
    h_xyz: float
    h_z: float
    dom_x: int
    dom_y: int
    dom_z: int
    n: int
    bins_per_dim: tuple[int, ...]
    fit: FitResult


def _flat_ids(labels: np.ndarray) -> np.ndarray:
    """Mixed-radix encoding of label rows into single integers."""
    if labels.shape[1] == 0:
        return np.zeros(len(labels), dtype=np.int64)
    flat = np.zeros(len(labels), dtype=np.int64)
    stride = 1
    for j in range(labels.shape[1]):
        col = labels[:, j]
        flat += col * stride
        stride *= int(col.max()) + 1
    return flat


def plugin_entropy(labels: np.ndarray) -> float:
    """Empirical entropy -sum p*ln(p) of the observed label tuples, in nats.

    ``labels`` is (n,) or (n, d); d = 0 means the empty projection (entropy 0).
    """
    labels = np.asarray(labels)
    if labels.ndim == 1:
        labels = labels[:, None]
    n = len(labels)
    if n == 0:
        raise InputError("plugin entropy of an empty sample is undefined")
    _, counts = np.unique(_flat_ids(labels), return_counts=True)
    p = counts / n
    return float(-np.sum(p * np.log(p)))


@dataclass(frozen=True)
class EntropyTerm:
    """One marginal entropy of the fitted model, with its volume correction."""

    plugin: float       # nats, discrete entropy of the projected labels
    volume_term: float  # nats, (1/n) * sum over rows of ln(cell volume)

    @property
    def continuous(self) -> float:
        return self.plugin + self.volume_term


def continuous_entropy_terms(grid: Grid, groups: Mapping[str, Sequence[int]]) -> dict[str, EntropyTerm]:
    """Continuous-form entropies of grid projections, with explicit volume terms.

    Used as the cancellation self-check: across H(XZ) + H(YZ) - H(XYZ) - H(Z)
    the volume terms sum to zero because each row's per-dimension volumes
    appear exactly twice with each sign.
    """
    if not grid.counts:
        raise InputError("empty grid")
    cells = np.array(list(grid.counts.keys()), dtype=np.int64)
    counts = np.fromiter(grid.counts.values(), dtype=np.float64, count=len(grid.counts))
    n = grid.n
    log_vols = []
    for j, d in enumerate(grid.dims):
        v = d.volumes
        if v.size and v.min() <= 0:
            raise ModelError("cell with non-positive volume")
        log_vols.append(np.log(v)[cells[:, j]])

    out: dict[str, EntropyTerm] = {}
    for name, dims in groups.items():
        dims = tuple(dims)
        if dims:
            proj = cells[:, dims]
            flat = _flat_ids(proj)
            _, inv = np.unique(flat, return_inverse=True)
            merged = np.bincount(inv, weights=counts)
            p = merged / n
            plugin = float(-np.sum(p * np.log(p)))
        else:
            plugin = 0.0
        vol = float(sum(np.sum(counts * log_vols[j]) for j in dims) / n)
        out[name] = EntropyTerm(plugin=plugin, volume_term=vol)
    return out


def _check_groups(k: int, x: VariableGroup, y: VariableGroup, z: VariableGroup):
    all_dims = x.dims + y.dims + z.dims
    if sorted(all_dims) != list(range(k)):
        raise InputError("X, Y, Z must be disjoint and cover every dataset dimension")
    if not x.dims or not y.dims:
        raise InputError("X and Y must be non-empty")


def _domain_size(binsets, dims) -> int:
    size = 1
    for d in dims:
        size *= binsets[d].n_bins
    return size


def cmi_estimate(
    dataset,
    x: VariableGroup,
    y: VariableGroup,
    z: VariableGroup | None = None,
    config: FitConfig | None = None,
    fit: FitResult | None = None,
) -> EstimateResult:
    """Estimate I(X;Y|Z) (or I(X;Y) for empty Z) on mixed data, in nats.

    ``dataset`` is an (n, k) float array.  One joint histogram is fitted over
    all dimensions; pass ``fit`` to reuse an existing fit of the same data.
    """
    config = config or FitConfig()
    data = np.asarray(dataset, dtype=np.float64)
    if data.ndim != 2:
        raise InputError("dataset must be a 2-D (rows, columns) array")
    z = z or VariableGroup("Z", ())
    _check_groups(data.shape[1], x, y, z)

    if fit is None:
        columns = [detect_discrete_points(data[:, j], t=config.t, name=str(j))
                   for j in range(data.shape[1])]
        fit = greedy_fit(columns, config)
    labels = fit.labeling.labels
    n = fit.labeling.n

    groups = {
        "xz": x.dims + z.dims,
        "yz": y.dims + z.dims,
        "xyz": x.dims + y.dims + z.dims,
        "z": z.dims,
    }
    h = {name: plugin_entropy(labels[:, dims]) for name, dims in groups.items()}
    value = h["xz"] + h["yz"] - h["xyz"] - h["z"]

    terms = continuous_entropy_terms(fit.grid, groups)
    i_cont = (terms["xz"].continuous + terms["yz"].continuous
              - terms["xyz"].continuous - terms["z"].continuous)
    if not math.isclose(i_cont, value, abs_tol=_CANCELLATION_TOL):
        raise ModelError(
            f"volume cancellation violated: continuous {i_cont} vs plug-in {value}")

    return EstimateResult(
        value=value,
        h_xz=h["xz"], h_yz=h["yz"], h_xyz=h["xyz"], h_z=h["z"],
        dom_x=_domain_size(fit.binsets, x.dims),
        dom_y=_domain_size(fit.binsets, y.dims),
        dom_z=_domain_size(fit.binsets, z.dims),
        n=n,
        bins_per_dim=tuple(b.n_bins for b in fit.binsets),
        fit=fit,
    )
