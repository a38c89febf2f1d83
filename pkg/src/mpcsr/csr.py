"""CSR terms of word products and the rank-compressed factorisation.

The structure matrix S carries weight 0 on every critical edge and eps
elsewhere; its powers are ultimately periodic with period equal to the
critical cyclicity.  For a product of length k the boundary factors are
C = product (*) S^e and R = S^e (*) product with the exponent
e = (t+1)*gamma - (k mod gamma) chosen so that t*gamma reaches the
ultimate-periodicity threshold of S.  The same construction runs once per
critical component with the component's own structure matrix; both routes
must agree and are asserted against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .bounds import wielandt
from .digraph import CriticalComponent, CriticalStructure
from .ensemble import Ensemble
from .semiring import (
    MaxPlusMatrix,
    Scalar,
    entrywise_sup,
    first_difference,
    matrices_equal,
    mp_multiply,
    mp_power,
)
from .trellis import Word, gamma_product


def structure_matrix(n: int, edges) -> MaxPlusMatrix:
    """n-by-n matrix with 0 on the given edges and eps everywhere else."""
    grid = [[None] * n for _ in range(n)]
    for u, v in edges:
        grid[u][v] = 0.0
    return MaxPlusMatrix.from_rows(grid)


def periodicity_threshold(s: MaxPlusMatrix, gamma: int) -> int:
    """Smallest T >= 1 with s^T equal to s^(T+gamma).

    The search is capped at the Wielandt bound plus gamma; running past the
    cap means the supplied period does not match the matrix.
    """
    if not s.is_square:
        raise ValueError("periodicity threshold needs a square matrix")
    if gamma < 1:
        raise ValueError(f"period must be positive, got {gamma}")
    cap = wielandt(s.rows) + gamma
    powers = [MaxPlusMatrix.identity(s.rows), s]
    for t in range(1, cap + 1):
        while len(powers) <= t + gamma:
            powers.append(mp_multiply(powers[-1], s))
        if matrices_equal(powers[t], powers[t + gamma]):
            return t
    raise ValueError(
        f"powers did not become periodic with period {gamma} within {cap} steps"
    )


@dataclass(frozen=True)
class CsrTerms:
    """All ingredients of the CSR form of one word product."""

    word: Word
    k: int
    product: MaxPlusMatrix
    critical: CriticalStructure
    gamma: int
    gamma_nu: tuple[int, ...]
    threshold: int
    thresholds_nu: tuple[int, ...]
    t_exponent: int
    v_exponent: int
    s_global: MaxPlusMatrix
    s_components: tuple[MaxPlusMatrix, ...]
    c_global: MaxPlusMatrix
    r_global: MaxPlusMatrix
    c_components: tuple[MaxPlusMatrix, ...]
    r_components: tuple[MaxPlusMatrix, ...]

    @property
    def components(self) -> tuple[CriticalComponent, ...]:
        return self.critical.components


def csr_terms(ensemble: Ensemble, word: Word) -> CsrTerms:
    """Build C, S and R (globally and per critical component) for a word."""
    product = gamma_product(ensemble, word)
    crit = ensemble.critical
    n = ensemble.size
    k = len(word)
    gamma = crit.global_cyclicity

    s_global = structure_matrix(n, sorted(crit.critical_edges))
    threshold = periodicity_threshold(s_global, gamma)
    t = max(1, -(-threshold // gamma))
    v = (t + 1) * gamma - (k % gamma)
    s_power_v = mp_power(s_global, v)
    c_global = mp_multiply(product, s_power_v)
    r_global = mp_multiply(s_power_v, product)

    s_components = []
    thresholds_nu = []
    gamma_nu = []
    c_components = []
    r_components = []
    for comp in crit.components:
        s_nu = structure_matrix(n, sorted(comp.edges))
        t_nu_threshold = periodicity_threshold(s_nu, comp.cyclicity)
        # One shared exponent works for every component: v is congruent to
        # -k modulo each component cyclicity and sits beyond each threshold.
        t_nu = (v + (k % comp.cyclicity)) // comp.cyclicity - 1
        if (t_nu + 1) * comp.cyclicity - (k % comp.cyclicity) != v or t_nu * comp.cyclicity < t_nu_threshold:
            raise AssertionError("component exponent derivation broke; this is a bug")
        s_nu_v = mp_power(s_nu, v)
        s_components.append(s_nu)
        thresholds_nu.append(t_nu_threshold)
        gamma_nu.append(comp.cyclicity)
        c_components.append(mp_multiply(product, s_nu_v))
        r_components.append(mp_multiply(s_nu_v, product))

    return CsrTerms(
        word=word,
        k=k,
        product=product,
        critical=crit,
        gamma=gamma,
        gamma_nu=tuple(gamma_nu),
        threshold=threshold,
        thresholds_nu=tuple(thresholds_nu),
        t_exponent=t,
        v_exponent=v,
        s_global=s_global,
        s_components=tuple(s_components),
        c_global=c_global,
        r_global=r_global,
        c_components=tuple(c_components),
        r_components=tuple(r_components),
    )


def csr_product(terms: CsrTerms) -> MaxPlusMatrix:
    """C (*) S^(k mod gamma) (*) R, checked against its two equivalent forms."""
    out = mp_multiply(
        mp_multiply(terms.c_global, mp_power(terms.s_global, terms.k % terms.gamma)),
        terms.r_global,
    )
    direct = mp_multiply(
        mp_multiply(terms.product, mp_power(terms.s_global, terms.v_exponent)), terms.product
    )
    if not matrices_equal(out, direct):
        raise AssertionError("global CSR product disagrees with its direct form; this is a bug")
    if terms.c_components:
        parts = []
        for c_nu, s_nu, r_nu, g_nu in zip(
            terms.c_components, terms.s_components, terms.r_components, terms.gamma_nu
        ):
            parts.append(mp_multiply(mp_multiply(c_nu, mp_power(s_nu, terms.k % g_nu)), r_nu))
        combined = entrywise_sup(parts)
        if not matrices_equal(out, combined):
            raise AssertionError("component CSR products disagree with the global one; this is a bug")
    return out


@dataclass(frozen=True)
class CsrCheck:
    equal: bool
    witness: Optional[tuple[int, int]]
    product_value: Scalar
    csr_value: Scalar
    product: MaxPlusMatrix
    csr: MaxPlusMatrix
    terms: CsrTerms


def is_csr(ensemble: Ensemble, word: Word) -> CsrCheck:
    """Entrywise-exact test whether the word product equals its CSR form.

    On failure the witness is the lexicographically first differing
    position, reported with both values.
    """
    terms = csr_terms(ensemble, word)
    approx = csr_product(terms)
    pos = first_difference(terms.product, approx)
    if pos is None:
        return CsrCheck(True, None, None, None, terms.product, approx, terms)
    i, j = pos
    return CsrCheck(
        False, pos, terms.product.data[i][j], approx.data[i][j], terms.product, approx, terms
    )


@dataclass(frozen=True)
class RankFactors:
    """Two-factor form with one live column per cyclic class per component."""

    c_prime: MaxPlusMatrix
    r_prime: MaxPlusMatrix
    rank_bound: int
    representatives: tuple[tuple[int, ...], ...]


def rank_compress(terms: CsrTerms) -> RankFactors:
    """Collapse duplicate class columns/rows of the CSR factors.

    Columns of each component's C with indices in one cyclic class coincide,
    as do the matching rows of S^(k mod gamma) (*) R, so keeping the
    smallest node of every class reproduces the CSR product from factors
    with at most sum(gamma_nu) live columns and rows.
    """
    n = terms.product.rows
    c_grid: list[list[Scalar]] = [[None] * n for _ in range(n)]
    r_grid: list[list[Scalar]] = [[None] * n for _ in range(n)]
    reps_all = []
    for comp, c_nu, s_nu, r_nu in zip(
        terms.components, terms.c_components, terms.s_components, terms.r_components
    ):
        sr_nu = mp_multiply(mp_power(s_nu, terms.k % comp.cyclicity), r_nu)
        reps = tuple(min(members) for members in comp.classes())
        reps_all.append(reps)
        for rep in reps:
            for i in range(n):
                c_grid[i][rep] = c_nu.data[i][rep]
            r_grid[rep] = list(sr_nu.data[rep])
    c_prime = MaxPlusMatrix.from_rows(c_grid)
    r_prime = MaxPlusMatrix.from_rows(r_grid)
    rank_bound = sum(terms.gamma_nu)
    if not matrices_equal(mp_multiply(c_prime, r_prime), csr_product(terms)):
        raise AssertionError("compressed factors fail to rebuild the CSR product; this is a bug")
    return RankFactors(
        c_prime=c_prime, r_prime=r_prime, rank_bound=rank_bound, representatives=tuple(reps_all)
    )


@dataclass(frozen=True)
class ProjectionReport:
    """Column/row projection identities of the CSR product onto its factors."""

    component_columns_ok: tuple[bool, ...]
    component_rows_ok: tuple[bool, ...]
    global_columns_ok: bool
    global_rows_ok: bool

    @property
    def all_ok(self) -> bool:
        return (
            all(self.component_columns_ok)
            and all(self.component_rows_ok)
            and self.global_columns_ok
            and self.global_rows_ok
        )


def _columns_agree(a: MaxPlusMatrix, b: MaxPlusMatrix, cols: Sequence[int]) -> bool:
    return all(a.data[i][j] == b.data[i][j] for j in cols for i in range(a.rows))


def _rows_agree(a: MaxPlusMatrix, b: MaxPlusMatrix, rows: Sequence[int]) -> bool:
    return all(a.data[i] == b.data[i] for i in rows)


def csr_critical_projections(terms: CsrTerms) -> ProjectionReport:
    """At critical columns the trailing factor is redundant; at critical rows
    the leading one is.  Verifies both identities per component and globally."""
    cols_ok = []
    rows_ok = []
    for comp, c_nu, s_nu, r_nu, g_nu in zip(
        terms.components,
        terms.c_components,
        terms.s_components,
        terms.r_components,
        terms.gamma_nu,
    ):
        cs = mp_multiply(c_nu, mp_power(s_nu, terms.k % g_nu))
        sr = mp_multiply(mp_power(s_nu, terms.k % g_nu), r_nu)
        full = mp_multiply(cs, r_nu)
        nodes = sorted(comp.nodes)
        cols_ok.append(_columns_agree(full, cs, nodes))
        rows_ok.append(_rows_agree(full, sr, nodes))

    s_pow = mp_power(terms.s_global, terms.k % terms.gamma)
    cs_g = mp_multiply(terms.c_global, s_pow)
    sr_g = mp_multiply(s_pow, terms.r_global)
    full_g = mp_multiply(cs_g, terms.r_global)
    crit_nodes = sorted(terms.critical.critical_nodes)
    return ProjectionReport(
        component_columns_ok=tuple(cols_ok),
        component_rows_ok=tuple(rows_ok),
        global_columns_ok=_columns_agree(full_g, cs_g, crit_nodes),
        global_rows_ok=_rows_agree(full_g, sr_g, crit_nodes),
    )
