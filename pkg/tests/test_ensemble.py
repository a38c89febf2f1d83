import random

import pytest

from mpcsr.counterexamples import build_family
from mpcsr.ensemble import EnsembleError, build_ensemble, check_assumptions, path_weights, u_k
from mpcsr.semiring import MaxPlusMatrix, matrices_equal
from mpcsr.trellis import gamma_product

from oracles import random_word

E = None


def mat(rows):
    return MaxPlusMatrix.from_rows(rows)


def test_rejects_empty_and_mismatched():
    with pytest.raises(EnsembleError):
        build_ensemble([])
    with pytest.raises(EnsembleError):
        build_ensemble([mat([[0]]), mat([[0, E], [E, 0]])])
    with pytest.raises(EnsembleError):
        build_ensemble([mat([[E, 0], [E, E]])])  # acyclic: cycle mean is eps


def test_single_visualised_generator_passes_through():
    a = mat([[0, -2], [-1, E]])
    ens = build_ensemble([a])
    assert ens.visualisation_vector == (0.0, 0.0)
    assert matrices_equal(ens.normalized[0], a)
    assert ens.assumption_report.all_core()


def test_normalisation_shifts_cycle_mean_to_zero():
    a = mat([[3.0, 1.0], [2.0, E]])  # loop of weight 3 dominates
    ens = build_ensemble([a])
    assert matrices_equal(ens.normalized[0], mat([[0.0, -2.0], [-1.0, E]]))


def test_rescaling_zeroes_critical_entries():
    # One generator whose critical cycle carries nonzero entries: the build
    # must find a scaling making them exactly zero and the rest nonpositive.
    a = mat([
        [E, 2.0, E],
        [-2.0, E, -1.0],
        [-4.0, E, E],
    ])
    ens = build_ensemble([a])
    m = ens.normalized[0]
    for (u, v) in ens.critical.critical_edges:
        assert m.data[u][v] == pytest.approx(0.0, abs=1e-9)
    assert all(v <= 1e-9 for row in m.data for v in row if v is not None)
    assert ens.assumption_report.visualised


def test_rescaling_vector_is_a_subeigenvector():
    a = mat([
        [E, 2.0, E],
        [-2.0, E, -1.0],
        [-4.0, E, E],
    ])
    ens = build_ensemble([a])
    x = ens.visualisation_vector
    assert any(v != 0.0 for v in x)
    # The vector scales the normalised supremum below itself.
    from mpcsr.digraph import WeightedDigraph, max_cycle_mean
    from mpcsr.semiring import entrywise_sup

    normalized = [
        g.shift(-max_cycle_mean(WeightedDigraph.from_matrix(g))) for g in ens.generators
    ]
    sup0 = entrywise_sup(normalized)
    for i in range(3):
        for j in range(3):
            v = sup0.data[i][j]
            if v is not None:
                assert v + x[j] <= x[i] + 1e-9


def test_build_rejects_node_cut_off_from_critical_set():
    # Rescaling is needed (a positive entry) but node 1 cannot reach the
    # critical loop, so no finite scaling vector exists.
    a = mat([
        [0, 1.0],
        [E, -5.0],
    ])
    with pytest.raises(EnsembleError, match="cannot reach"):
        build_ensemble([a])


def test_noncritical_mask_of_supremum():
    from mpcsr import demo

    ens = demo.ensemble()
    for c in sorted(ens.critical_nodes):
        assert all(v is None for v in ens.b_sup.data[c])
        assert all(ens.b_sup.data[i][c] is None for i in range(8))
    for i in (4, 5, 6, 7):
        for j in (4, 5, 6, 7):
            assert ens.b_sup.data[i][j] == ens.a_sup.data[i][j]


def test_build_is_idempotent_on_visualised_input():
    from mpcsr import demo

    ens = build_ensemble(demo.generators())
    again = build_ensemble(list(ens.normalized))
    assert all(matrices_equal(a, b) for a, b in zip(ens.normalized, again.normalized))


def test_demo_sup_and_inf_match_pinned():
    from mpcsr import demo

    ens = build_ensemble(demo.generators())
    assert matrices_equal(ens.a_sup, demo.EXPECTED_A_SUP)
    assert matrices_equal(ens.a_inf, demo.EXPECTED_A_INF)
    assert ens.visualisation_vector == (0.0,) * 8


def test_three_loop_family_inf_is_first_generator():
    fam = build_family("P3_four")
    ens = fam.ensemble()
    assert matrices_equal(ens.a_inf, fam.generators[0])


def test_demo_assumptions_and_profile():
    from mpcsr import demo

    rep = check_assumptions(demo.ensemble())
    assert rep.all_core()
    assert rep.profile == "P0"


@pytest.mark.parametrize(
    "family_id,profile",
    [("P1_six", "P1"), ("P1_three", "P1"), ("P2_six", "P2"), ("P3_four", "P3")],
)
def test_family_profiles(family_id, profile):
    rep = check_assumptions(build_family(family_id).ensemble())
    assert rep.all_core()
    assert rep.profile == profile


def test_p1_six_profile_detail():
    ens = build_family("P1_six").ensemble()
    assert ens.critical.ambient_cyclicity == 1
    assert ens.critical.global_cyclicity == 2
    assert ens.critical.component_count == 1


def test_p3_four_profile_detail():
    ens = build_family("P3_four").ensemble()
    assert ens.critical.component_count == 3


def test_demo_path_weights_match_pinned():
    from mpcsr import demo

    pw = path_weights(demo.ensemble())
    assert pw.alpha == demo.EXPECTED_ALPHA
    assert pw.beta == demo.EXPECTED_BETA
    assert pw.w_inf == demo.EXPECTED_W
    assert pw.v_inf == demo.EXPECTED_V
    assert matrices_equal(pw.gamma_avoid, demo.EXPECTED_GAMMA_AVOID)
    # Critical rows and columns never carry a critical-avoiding path.
    for i in range(4):
        assert all(v is None for v in pw.gamma_avoid.data[i])
        assert all(pw.gamma_avoid.data[j][i] is None for j in range(8))


def test_path_weights_dominance():
    from mpcsr import demo

    pw = path_weights(demo.ensemble())
    for a, w in zip(pw.alpha, pw.w_inf):
        assert w <= a
    for b, v in zip(pw.beta, pw.v_inf):
        assert v <= b
    for c in (0, 1, 2, 3):
        assert pw.alpha[c] == 0.0 and pw.beta[c] == 0.0


def test_demo_noncritical_cycle_mean():
    from mpcsr import demo

    assert demo.ensemble().lambda_star == pytest.approx(-4.5, abs=1e-9)


def test_lambda_star_eps_when_no_noncritical_cycle():
    ens = build_family("P1_six").ensemble()
    assert ens.lambda_star is None


def test_u_k_one_is_the_infimum():
    from mpcsr import demo

    ens = demo.ensemble()
    assert matrices_equal(u_k(ens, 1), ens.a_inf)
    with pytest.raises(ValueError):
        u_k(ens, 0)


def test_u_k_and_product_share_finiteness_pattern():
    from mpcsr import demo

    ens = demo.ensemble()
    rng = random.Random(5)
    for _ in range(25):
        k = rng.randint(1, 12)
        word = random_word(rng, ens, k)
        prod = gamma_product(ens, word)
        uk = u_k(ens, k)
        assert prod.support() == uk.support()
        assert uk.le(prod)
