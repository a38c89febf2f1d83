"""Generator ensembles: validation, normalisation and common visualisation.

An ensemble is a finite family of square max-plus matrices ("generators")
from which inhomogeneous products are drawn.  Building one normalises every
generator to maximum cycle mean zero, scales the whole family by one common
subeigenvector so that critical entries become exactly zero and everything
else nonpositive, and precomputes the shared objects every later analysis
needs: the entrywise supremum and infimum, the critical structure, the
supremum with critical rows and columns removed, and its cycle mean.

The working assumptions are reported, not enforced: construction only
aborts on structural impossibilities (shape mismatch, a generator without
cycles, or a node that cannot reach the critical set while a rescaling is
required).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .digraph import CriticalStructure, WeightedDigraph, critical_graph, is_irreducible, max_cycle_mean
from .semiring import (
    TOL,
    MaxPlusMatrix,
    Scalar,
    entrywise_inf,
    entrywise_sup,
    kleene_star,
    metric_matrix,
    mp_power,
)


class EnsembleError(ValueError):
    """The generator family cannot form a workable ensemble."""


@dataclass(frozen=True)
class AssumptionReport:
    """Pass/fail record of the working assumptions plus a profile code.

    Profiles classify how the critical digraph sits inside the ambient one:
    P0 - one critical component whose cyclicity equals the ambient one;
    P1 - one critical component, ambient digraph primitive, cyclicity > 1;
    P2 - one critical component, 1 < ambient cyclicity < critical cyclicity;
    P3 - several critical components, ambient cyclicity equal to their lcm.
    """

    irreducible: bool
    strongly_equivalent: bool
    inf_equivalent: bool
    sup_cycle_mean_zero: bool
    visualised: bool
    profile: str
    diagnostics: tuple[str, ...]

    def all_core(self) -> bool:
        return (
            self.irreducible
            and self.strongly_equivalent
            and self.inf_equivalent
            and self.sup_cycle_mean_zero
            and self.visualised
        )


@dataclass(frozen=True)
class Ensemble:
    """Validated generator family with its precomputed shared structure.

    ``normalized`` holds the working generators: cycle-mean normalised and
    visualised.  All products and analyses use these, never the raw inputs.
    """

    generators: tuple[MaxPlusMatrix, ...]
    normalized: tuple[MaxPlusMatrix, ...]
    visualisation_vector: tuple[float, ...]
    a_sup: MaxPlusMatrix
    a_inf: MaxPlusMatrix
    b_sup: MaxPlusMatrix
    lambda_star: Optional[float]
    critical: CriticalStructure
    assumption_report: AssumptionReport

    @property
    def size(self) -> int:
        return self.a_sup.rows

    @property
    def critical_nodes(self) -> frozenset[int]:
        return self.critical.critical_nodes

    def generator_count(self) -> int:
        return len(self.normalized)


@dataclass(frozen=True)
class PathWeights:
    """Optimal path weights against the supremum and infimum matrices.

    alpha/beta: best path weight into / out of the critical set on the
    supremum digraph.  w_inf/v_inf: the same on the infimum digraph.
    gamma_avoid[i][j]: best weight of a nonempty walk i -> j that touches no
    critical node at all (eps when every such walk is impossible).
    """

    alpha: tuple[Scalar, ...]
    beta: tuple[Scalar, ...]
    gamma_avoid: MaxPlusMatrix
    w_inf: tuple[Scalar, ...]
    v_inf: tuple[Scalar, ...]


def _is_visualised(mats: Sequence[MaxPlusMatrix], crit: CriticalStructure, tol: float) -> bool:
    for m in mats:
        for i, row in enumerate(m.data):
            for j, v in enumerate(row):
                if v is None:
                    continue
                if v > tol:
                    return False
                if (i, j) in crit.critical_edges and abs(v) > tol:
                    return False
    return True


def build_ensemble(generators: Sequence[MaxPlusMatrix], tol: float = TOL) -> Ensemble:
    """Normalise, visualise and analyse a family of generators."""
    if not generators:
        raise EnsembleError("an ensemble needs at least one generator")
    n = generators[0].rows
    for g in generators:
        if not g.is_square:
            raise EnsembleError(f"generators must be square, got {g.rows}x{g.cols}")
        if g.rows != n:
            raise EnsembleError(f"generators must share one size, got {n} and {g.rows}")

    normalized = []
    for idx, g in enumerate(generators):
        lam = max_cycle_mean(WeightedDigraph.from_matrix(g))
        if lam is None:
            raise EnsembleError(f"generator {idx} has no cycles; its cycle mean is eps")
        normalized.append(g.shift(-lam))

    a_sup0 = entrywise_sup(normalized)
    lam_sup0 = max_cycle_mean(WeightedDigraph.from_matrix(a_sup0))
    crit0 = critical_graph(WeightedDigraph.from_matrix(a_sup0), lam_sup0, tol)

    x = (0.0,) * n
    if abs(lam_sup0) <= tol and not _is_visualised(normalized + [a_sup0], crit0, tol):
        star = kleene_star(a_sup0)
        scaled = []
        for i in range(n):
            best = None
            for c in sorted(crit0.critical_nodes):
                v = star.data[i][c]
                if v is not None and (best is None or v > best):
                    best = v
            if best is None:
                raise EnsembleError(
                    f"node {i} cannot reach the critical set; no finite visualisation exists"
                )
            scaled.append(best)
        x = tuple(scaled)
        normalized = [m.diagonal_similarity(x) for m in normalized]

    visualised = tuple(normalized)
    a_sup = entrywise_sup(visualised)
    a_inf = entrywise_inf(visualised)
    lam_sup = max_cycle_mean(WeightedDigraph.from_matrix(a_sup))
    crit = critical_graph(WeightedDigraph.from_matrix(a_sup), lam_sup, tol)

    noncritical = [i for i in range(n) if i not in crit.critical_nodes]
    b_sup = a_sup.mask(noncritical) if noncritical else MaxPlusMatrix.epsilon(n, n)
    lambda_star = max_cycle_mean(WeightedDigraph.from_matrix(b_sup))

    report = _assess(visualised, a_sup, a_inf, lam_sup, crit, tol)
    return Ensemble(
        generators=tuple(generators),
        normalized=visualised,
        visualisation_vector=x,
        a_sup=a_sup,
        a_inf=a_inf,
        b_sup=b_sup,
        lambda_star=lambda_star,
        critical=crit,
        assumption_report=report,
    )


def _assess(
    mats: Sequence[MaxPlusMatrix],
    a_sup: MaxPlusMatrix,
    a_inf: MaxPlusMatrix,
    lam_sup: float,
    crit: CriticalStructure,
    tol: float,
) -> AssumptionReport:
    notes: list[str] = []

    irU = all(is_irreducible(WeightedDigraph.from_matrix(m)) for m in mats)
    if not irU:
        notes.append("some generator is not irreducible")

    sup_support = a_sup.support()
    same_support = all(m.support() == sup_support for m in mats)
    same_critical = True
    for idx, m in enumerate(mats):
        lam_m = max_cycle_mean(WeightedDigraph.from_matrix(m))
        crit_m = critical_graph(WeightedDigraph.from_matrix(m), lam_m, tol)
        if crit_m.critical_edges != crit.critical_edges or crit_m.critical_nodes != crit.critical_nodes:
            same_critical = False
            notes.append(f"generator {idx} has a different critical digraph")
    strongly = same_support and same_critical
    if not same_support:
        notes.append("generators do not share one finiteness pattern")

    inf_equiv = a_inf.support() == sup_support
    if not inf_equiv:
        notes.append("the entrywise infimum loses edges of the common digraph")

    d1 = abs(lam_sup) <= tol
    if not d1:
        notes.append(f"supremum matrix has cycle mean {lam_sup}, not zero")

    d2 = _is_visualised(list(mats) + [a_sup], crit, tol)
    if not d2:
        notes.append("the family is not visualised: critical entries must be zero, others nonpositive")

    profile = _profile(crit)
    return AssumptionReport(
        irreducible=irU,
        strongly_equivalent=strongly,
        inf_equivalent=inf_equiv,
        sup_cycle_mean_zero=d1,
        visualised=d2,
        profile=profile,
        diagnostics=tuple(notes),
    )


def _profile(crit: CriticalStructure) -> str:
    m = crit.component_count
    gamma = crit.global_cyclicity
    r = crit.ambient_cyclicity
    if m == 0:
        return "none"
    if m == 1:
        if gamma == r:
            return "P0"
        if r == 1 and gamma > 1:
            return "P1"
        if 1 < r < gamma:
            return "P2"
        return "other"
    return "P3" if r == gamma else "other"


def check_assumptions(ensemble: Ensemble) -> AssumptionReport:
    """Assumption report of a built ensemble (recorded at build time)."""
    return ensemble.assumption_report


def path_weights(ensemble: Ensemble) -> PathWeights:
    """All optimal path weight tables used by the length thresholds."""
    crit_nodes = sorted(ensemble.critical_nodes)
    star_sup = kleene_star(ensemble.a_sup)
    star_inf = kleene_star(ensemble.a_inf)

    def col_max(star: MaxPlusMatrix, i: int) -> Scalar:
        best = None
        for c in crit_nodes:
            v = star.data[i][c]
            if v is not None and (best is None or v > best):
                best = v
        return best

    def row_max(star: MaxPlusMatrix, j: int) -> Scalar:
        best = None
        for c in crit_nodes:
            v = star.data[c][j]
            if v is not None and (best is None or v > best):
                best = v
        return best

    n = ensemble.size
    alpha = tuple(col_max(star_sup, i) for i in range(n))
    beta = tuple(row_max(star_sup, j) for j in range(n))
    w_inf = tuple(col_max(star_inf, i) for i in range(n))
    v_inf = tuple(row_max(star_inf, j) for j in range(n))
    gamma_avoid = metric_matrix(ensemble.b_sup)
    return PathWeights(alpha=alpha, beta=beta, gamma_avoid=gamma_avoid, w_inf=w_inf, v_inf=v_inf)


def u_k(ensemble: Ensemble, k: int) -> MaxPlusMatrix:
    """Optimal length-k walk weights on the infimum digraph (its kth power)."""
    if k < 1:
        raise ValueError(f"walk length must be at least 1, got {k}")
    return mp_power(ensemble.a_inf, k)
