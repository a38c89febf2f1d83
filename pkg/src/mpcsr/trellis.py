"""Word-indexed products and trellis dynamic programs.

A word picks generators by 1-based index; the product of the picked
generators, read left to right, is the transfer matrix of the layered
(trellis) digraph whose stage-l edges carry the l-th generator's weights.
The dynamic programs here never materialise that digraph: they stream over
the word, one stage at a time.

First-passage weights: for a start node i, the best weight of an initial
trellis walk whose one and only critical visit is its final node (weight 0
and length 0 when i itself is critical).  Symmetrically for final walks out
of the critical set.  Ties between equally heavy walks are resolved toward
the shorter one when lengths are reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .ensemble import Ensemble, path_weights
from .semiring import MaxPlusMatrix, Scalar, mp_multiply


@dataclass(frozen=True)
class Word:
    """Sequence of 1-based generator indices selecting the product factors."""

    letters: tuple[int, ...]

    def __post_init__(self):
        if not self.letters:
            raise ValueError("a word needs at least one letter")
        if any(l < 1 for l in self.letters):
            raise ValueError("letters are 1-based generator indices")

    def __len__(self) -> int:
        return len(self.letters)

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse a comma-separated index list such as ``5,5,1,5``."""
        try:
            letters = tuple(int(part) for part in text.split(","))
        except ValueError as exc:
            raise ValueError(f"cannot parse word {text!r}: {exc}") from exc
        return cls(letters)

    def validate(self, ensemble: Ensemble) -> None:
        count = ensemble.generator_count()
        for l in self.letters:
            if l > count:
                raise IndexError(f"letter {l} exceeds the {count} available generators")


@dataclass(frozen=True)
class TrellisWeights:
    product: MaxPlusMatrix
    w_star: tuple[Scalar, ...]
    v_star: tuple[Scalar, ...]


@dataclass(frozen=True)
class WalkLengthReport:
    """Realised first-passage walk lengths next to their analytic ceilings.

    ``w_bounds``/``v_bounds`` evaluate (weight - path bound) / lambda_star
    plus the noncritical node count, the guaranteed cap on how long an
    optimal first-passage walk can be; when the noncritical part of the
    supremum digraph is acyclic (lambda_star eps) the cap is just the
    noncritical node count.  Optimal-weight plateaus may start even earlier
    than the cap, but never later than min(cap, k); both the caps and k are
    reported so callers can take that minimum themselves.
    """

    k: int
    lambda_star: Optional[float]
    w_lengths: tuple[Optional[int], ...]
    v_lengths: tuple[Optional[int], ...]
    w_bounds: tuple[Optional[float], ...]
    v_bounds: tuple[Optional[float], ...]


def gamma_product(ensemble: Ensemble, word: Word) -> MaxPlusMatrix:
    """Product of the visualised generators in word order."""
    word.validate(ensemble)
    gens = ensemble.normalized
    result = gens[word.letters[0] - 1]
    for letter in word.letters[1:]:
        result = mp_multiply(result, gens[letter - 1])
    return result


def _restrict_rows_cols(m: MaxPlusMatrix, allowed: Sequence[bool]) -> list[list[Scalar]]:
    return [
        [m.data[i][j] if allowed[i] and allowed[j] else None for j in range(m.cols)]
        for i in range(m.rows)
    ]


def first_passage_data(
    ensemble: Ensemble, word: Word
) -> tuple[tuple[Scalar, ...], tuple[Optional[int], ...], tuple[Scalar, ...], tuple[Optional[int], ...]]:
    """First-passage weights and realised (shortest optimal) lengths.

    Returns (w_star, w_lengths, v_star, v_lengths); lengths are None where
    the critical set is unreachable within the word.
    """
    word.validate(ensemble)
    n = ensemble.size
    k = len(word)
    crit = ensemble.critical_nodes
    noncrit = [i for i in range(n) if i not in crit]
    allowed = [i not in crit for i in range(n)]
    gens = ensemble.normalized

    w_star: list[Scalar] = [0.0 if i in crit else None for i in range(n)]
    w_len: list[Optional[int]] = [0 if i in crit else None for i in range(n)]
    # reach[i][x]: best walk weight i -> x through noncritical nodes only
    reach: list[list[Scalar]] = [
        [0.0 if (i == x and allowed[i]) else None for x in range(n)] for i in range(n)
    ]
    crit_sorted = sorted(crit)
    for step, letter in enumerate(word.letters, start=1):
        a = gens[letter - 1].data
        for i in noncrit:
            row = reach[i]
            for x in noncrit:
                base = row[x]
                if base is None:
                    continue
                ax = a[x]
                for c in crit_sorted:
                    w = ax[c]
                    if w is None:
                        continue
                    cand = base + w
                    if w_star[i] is None or cand > w_star[i]:
                        w_star[i] = cand
                        w_len[i] = step
        if step < k:
            reach = _advance(reach, a, noncrit, n)

    v_star: list[Scalar] = [0.0 if j in crit else None for j in range(n)]
    v_len: list[Optional[int]] = [0 if j in crit else None for j in range(n)]
    # back[y][j]: best walk weight y -> j through noncritical nodes only
    back: list[list[Scalar]] = [
        [0.0 if (y == j and allowed[y]) else None for j in range(n)] for y in range(n)
    ]
    for offset, letter in enumerate(reversed(word.letters), start=1):
        a = gens[letter - 1].data
        for j in noncrit:
            for c in crit_sorted:
                ac = a[c]
                for y in noncrit:
                    w = ac[y]
                    if w is None:
                        continue
                    base = back[y][j]
                    if base is None:
                        continue
                    cand = w + base
                    if v_star[j] is None or cand > v_star[j]:
                        v_star[j] = cand
                        v_len[j] = offset
        if offset < k:
            back = _advance_back(back, a, noncrit, n)

    return tuple(w_star), tuple(w_len), tuple(v_star), tuple(v_len)


def _advance(reach: list[list[Scalar]], a, noncrit: list[int], n: int) -> list[list[Scalar]]:
    out: list[list[Scalar]] = [[None] * n for _ in range(n)]
    for i in noncrit:
        row = reach[i]
        orow = out[i]
        for x in noncrit:
            base = row[x]
            if base is None:
                continue
            ax = a[x]
            for y in noncrit:
                w = ax[y]
                if w is None:
                    continue
                cand = base + w
                if orow[y] is None or cand > orow[y]:
                    orow[y] = cand
    return out


def _advance_back(back: list[list[Scalar]], a, noncrit: list[int], n: int) -> list[list[Scalar]]:
    out: list[list[Scalar]] = [[None] * n for _ in range(n)]
    for x in noncrit:
        ax = a[x]
        orow = out[x]
        for y in noncrit:
            w = ax[y]
            if w is None:
                continue
            row = back[y]
            for j in noncrit:
                base = row[j]
                if base is None:
                    continue
                cand = w + base
                if orow[j] is None or cand > orow[j]:
                    orow[j] = cand
    return out


def first_passage_weights(ensemble: Ensemble, word: Word) -> TrellisWeights:
    """Product of the word plus its first-passage weight vectors."""
    w_star, _, v_star, _ = first_passage_data(ensemble, word)
    return TrellisWeights(product=gamma_product(ensemble, word), w_star=w_star, v_star=v_star)


def optimal_walk_lengths(ensemble: Ensemble, word: Word) -> WalkLengthReport:
    """Realised first-passage lengths with their analytic ceilings.

    Rejects ensembles whose noncritical cycle mean is nonnegative; the
    ceilings only make sense when detours decay.
    """
    lam = ensemble.lambda_star
    if lam is not None and lam >= 0:
        raise ValueError(f"noncritical cycle mean {lam} is nonnegative; no length cap exists")
    w_star, w_len, v_star, v_len = first_passage_data(ensemble, word)
    pw = path_weights(ensemble)
    n = ensemble.size
    q = len(ensemble.critical_nodes)
    slack = n - q

    def cap(weight: Scalar, path_bound: Scalar) -> Optional[float]:
        if weight is None:
            return None
        if lam is None:
            return float(slack)
        assert path_bound is not None
        return (weight - path_bound) / lam + slack

    w_bounds = tuple(cap(w_star[i], pw.alpha[i]) for i in range(n))
    v_bounds = tuple(cap(v_star[j], pw.beta[j]) for j in range(n))
    for length, bound in list(zip(w_len, w_bounds)) + list(zip(v_len, v_bounds)):
        if length is not None and bound is not None and length > bound + 1e-9:
            raise AssertionError(
                f"realised first-passage length {length} exceeds its analytic cap {bound}"
            )
    return WalkLengthReport(
        k=len(word),
        lambda_star=lam,
        w_lengths=w_len,
        v_lengths=v_len,
        w_bounds=w_bounds,
        v_bounds=v_bounds,
    )
