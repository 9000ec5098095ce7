"""Filter-based feature relevance and greedy mRMR subset selection.

All statistics are computed on training rows only. Mutual information uses
a plug-in estimate on equal-mass (quantile) bins, natural log, which keeps
every statistic invariant under monotone rescaling of the inputs.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import ZeroVariance
from .series import HourlyFrame

DEFAULT_BINS = 10

# Paper-pinned exogenous set for the default experiment; selector output is
# logged alongside for comparison.
DEFAULT_EXOG_SET = ["no", "no2", "co", "so2"]


@dataclass(frozen=True)
class Discretizer:
    """Per-column quantile bin edges (interior edges only)."""

    edges: dict[str, np.ndarray]
    bin_count: int

    def transform(self, name: str, values: np.ndarray) -> np.ndarray:
        return np.searchsorted(self.edges[name], values, side="left")


@dataclass(frozen=True)
class RelevanceReport:
    pearson: dict[str, float]
    mi: dict[str, float]
    ranking: list[str]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["feature", "pearson", "mi", "rank"])
            for rank, name in enumerate(self.ranking, start=1):
                w.writerow([name, f"{self.pearson[name]:.6f}",
                            f"{self.mi[name]:.6f}", rank])


def fit_discretizer(train: HourlyFrame, columns: list[str],
                    bins: int = DEFAULT_BINS) -> Discretizer:
    """Quantile bin edges per column, deduplicated to keep edges strict."""
    edges = {}
    probs = np.linspace(0, 1, bins + 1)[1:-1]
    for c in columns:
        v = train.column(c)
        e = np.unique(np.quantile(v, probs))
        edges[c] = e
    return Discretizer(edges=edges, bin_count=bins)


def pearson(x: np.ndarray, y: np.ndarray) -> float:
    """Covariance over the product of standard deviations, clamped to [-1,1]."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) != len(y) or len(x) < 2:
        raise ValueError("pearson needs two equal-length series of length >= 2")
    sx, sy = np.std(x), np.std(y)
    if sx == 0.0 or sy == 0.0:
        raise ZeroVariance("constant input to pearson")
    rho = float(np.mean((x - x.mean()) * (y - y.mean())) / (sx * sy))
    return float(np.clip(rho, -1.0, 1.0))


def mutual_info(x: np.ndarray, y: np.ndarray, d: Discretizer,
                x_name: str = "x", y_name: str = "y") -> float:
    """Plug-in MI (nats) over the joint quantile-bin histogram; empty bins drop out."""
    bx = d.transform(x_name, np.asarray(x, dtype=float))
    by = d.transform(y_name, np.asarray(y, dtype=float))
    b = d.bin_count
    joint = np.zeros((b, b))
    np.add.at(joint, (bx, by), 1.0)
    joint /= joint.sum()
    px = joint.sum(axis=1)
    py = joint.sum(axis=0)
    nz = joint > 0
    outer = np.outer(px, py)
    mi = float(np.sum(joint[nz] * np.log(joint[nz] / outer[nz])))
    return max(mi, 0.0)


def _pairwise_mi(train: HourlyFrame, a: str, b: str, d: Discretizer,
                 cache: dict) -> float:
    key = (a, b) if a <= b else (b, a)
    if key not in cache:
        cache[key] = mutual_info(train.column(a), train.column(b), d,
                                 x_name=a, y_name=b)
    return cache[key]


def mrmr_select(train: HourlyFrame, target: str, k: int,
                d: Discretizer | None = None,
                candidates: list[str] | None = None) -> list[str]:
    """Greedy mRMR: argmax of relevance minus mean redundancy, ties by name.

    The redundancy term is defined as 0 for the first pick.
    """
    if candidates is None:
        candidates = [c for c in train.columns if c != target]
    if target in candidates:
        raise ValueError("target must be excluded from mRMR candidates")
    if k > len(candidates):
        raise ValueError(f"k={k} exceeds {len(candidates)} candidates")
    if d is None:
        d = fit_discretizer(train, candidates + [target])

    cache: dict = {}
    selected: list[str] = []
    remaining = sorted(candidates)
    while len(selected) < k:
        best_name, best_score = None, -np.inf
        for f in remaining:
            relevance = _pairwise_mi(train, f, target, d, cache)
            if selected:
                redundancy = np.mean([_pairwise_mi(train, f, s, d, cache)
                                      for s in selected])
            else:
                redundancy = 0.0
            score = relevance - redundancy
            if score > best_score:  # remaining is name-sorted: ties keep first
                best_name, best_score = f, score
        selected.append(best_name)
        remaining.remove(best_name)
    return selected


def relevance_report(train: HourlyFrame, target: str,
                     candidates: list[str] | None = None,
                     bins: int = DEFAULT_BINS) -> RelevanceReport:
    """Pearson and MI of every candidate against the target, MI-ranked."""
    if candidates is None:
        candidates = [c for c in train.columns if c != target]
    d = fit_discretizer(train, list(candidates) + [target], bins=bins)
    y = train.column(target)
    rho = {c: pearson(train.column(c), y) for c in candidates}
    mi = {c: mutual_info(train.column(c), y, d, x_name=c, y_name=target)
          for c in candidates}
    ranking = sorted(candidates, key=lambda c: (-mi[c], c))
    return RelevanceReport(pearson=rho, mi=mi, ranking=ranking)


def plot_relevance(report: RelevanceReport, path) -> None:
    """Bar plots of Pearson and MI scores per candidate."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    names = report.ranking
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    ax1.bar(names, [report.mi[c] for c in names], color="steelblue")
    ax1.set_ylabel("mutual information (nats)")
    ax2.bar(names, [report.pearson[c] for c in names], color="darkorange")
    ax2.set_ylabel("Pearson correlation")
    ax2.axhline(0.0, color="black", lw=0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
