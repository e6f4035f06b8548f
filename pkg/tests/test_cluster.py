"""Cluster variables and Euler characteristics: the recurrence is the
oracle, every closed form must reproduce it exactly."""
import random

import pytest

from ecalg.cluster import (
    ClusterParams,
    IdentityVerdict,
    binomial_identity_check,
    chi_closed_form,
    chi_expanded,
    chi_from_recurrence,
    chi_nonnegativity_report,
    chi_small_e1,
    chi_table_closed_form,
    composition_weight_sum,
    cross_check,
    ec_bridge,
    stfact_check,
    xvar_closed_form,
    xvar_recurrence,
    _composition_weight_row,
    _slope_ok,
)
from ecalg.combinatorics import a_seq
from ecalg.errors import PreconditionViolated
from ecalg.ring import LaurentPoly2


# ---------------------------------------------------------------------------
# recurrence oracle
# ---------------------------------------------------------------------------

def test_seeds():
    p = ClusterParams(2, 3)
    assert xvar_recurrence(1, p) == LaurentPoly2.x1()
    assert xvar_recurrence(2, p) == LaurentPoly2.x2()


def test_x3_one_step():
    assert xvar_recurrence(3, ClusterParams(2, 2)) == LaurentPoly2(
        {(-1, 2): 1, (-1, 0): 1}
    )


def test_x4_two_steps():
    # ((x2^2 + 1)^2 + x1^2) / (x1^2 x2)
    assert xvar_recurrence(4, ClusterParams(2, 2)) == LaurentPoly2(
        {(-2, 3): 1, (-2, 1): 2, (-2, -1): 1, (0, -1): 1}
    )


def test_negative_indices_satisfy_relation():
    for b, c in ((2, 2), (3, 3), (1, 4)):
        p = ClusterParams(b, c)
        for m in range(-2, 2):
            k = m + 1
            e = b if k % 2 == 1 else c
            lhs = xvar_recurrence(m + 2, p) * xvar_recurrence(m, p)
            rhs = xvar_recurrence(m + 1, p) ** e + LaurentPoly2.one()
            assert lhs == rhs, (b, c, m)


def test_general_b_c_recurrence():
    # b != c is supported by the oracle (no closed form claimed)
    p = ClusterParams(1, 4)
    rel = xvar_recurrence(5, p) * xvar_recurrence(3, p)
    assert rel == xvar_recurrence(4, p) ** 4 + LaurentPoly2.one()


def test_positivity_of_cluster_coefficients():
    for c in (2, 3):
        p = ClusterParams(c, c)
        for m in range(-3, 9):
            x = xvar_recurrence(m, p)
            assert x.min_coeff() > 0, (c, m)


# ---------------------------------------------------------------------------
# chi from the recurrence
# ---------------------------------------------------------------------------

def test_chi_table_c2_n4_golden():
    t = chi_from_recurrence(4, 2)
    assert t.entries == {(0, 0): 1, (0, 1): 1, (1, 1): 2, (2, 1): 1}
    assert t.dim_vector() == (2, 1)


def test_chi_corner_cells():
    for c in (2, 3):
        for n in range(3, 7):
            t = chi_from_recurrence(n, c)
            assert t.get(0, 0) == 1
            assert t.get(a_seq(n - 1, c), a_seq(n - 2, c)) == 1


# ---------------------------------------------------------------------------
# closed forms against the oracle
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("c", (2, 3))
def test_xvar_closed_form_matches_recurrence(c):
    for n in range(3, 7):
        assert xvar_closed_form(n, c) == xvar_recurrence(n, ClusterParams(c, c)), (n, c)


@pytest.mark.parametrize("c", (2, 3))
def test_chi_closed_table_matches_recurrence(c):
    for n in range(3, 7):
        assert chi_table_closed_form(n, c).entries == chi_from_recurrence(n, c).entries


def test_chi_closed_form_cells():
    assert chi_closed_form(4, 2, 1, 1) == 2
    assert chi_closed_form(4, 2, 0, 0) == 1
    t = chi_from_recurrence(5, 3)
    for e1 in range(a_seq(4, 3) + 1):
        for e2 in range(a_seq(3, 3) + 1):
            assert chi_closed_form(5, 3, e1, e2) == t.get(e1, e2)


def test_support_cone_finding():
    # the bare t-sum evaluates nonzero outside the support cone (first
    # seen at c=2, n=6, e2=0, e1>=2); the gated closed form returns the
    # true chi = 0 there
    assert not _slope_ok(6, 2, 2, 0)
    assert chi_closed_form(6, 2, 2, 0) == 0
    assert chi_from_recurrence(6, 2).get(2, 0) == 0


def test_chi_small_e1_cells():
    assert chi_small_e1(4, 2, 1, 1) == 2
    for e2 in range(4):
        assert chi_small_e1(4, 3, 0, e2) == chi_from_recurrence(4, 3).get(0, e2)
    assert chi_small_e1(5, 2, 1, 2) == chi_closed_form(5, 2, 1, 2)


def test_chi_expanded_cells():
    # e2 = 0 degenerates to a delta at e1 = 0
    assert chi_expanded(4, 2, 0, 0) == 1
    assert chi_expanded(4, 2, 1, 0) == 0
    assert chi_expanded(4, 2, 1, 1) == 2
    for e1 in range(3):
        for e2 in range(a_seq(3, 3) + 1):
            assert chi_expanded(5, 3, e1, e2) == chi_small_e1(5, 3, e1, e2)


def test_strip_preconditions():
    with pytest.raises(PreconditionViolated):
        chi_small_e1(4, 2, 2, 1)
    with pytest.raises(PreconditionViolated):
        chi_expanded(3, 2, 1, 1)
    with pytest.raises(PreconditionViolated):
        ec_bridge(4, 2, 2, 1)


def test_composition_row_matches_enumeration():
    for c in (2, 3, 4):
        for i in (1, 2, 3):
            row = _composition_weight_row(c, i, 8)
            for k in range(9):
                assert row[k] == composition_weight_sum(c, i, k)


# ---------------------------------------------------------------------------
# nonnegativity regions
# ---------------------------------------------------------------------------

def test_nonnegativity_proven_region_c3():
    from fractions import Fraction

    rep = chi_nonnegativity_report(5, 3)
    assert rep.proven_ok
    # threshold is the exact rational a_{n-3}/c = a_2/3 = 1/3
    assert rep.threshold == Fraction(1, 3)


def test_nonnegativity_all_proven_when_a1():
    rep = chi_nonnegativity_report(4, 3)  # a_1 = 0: every cell is proven
    assert rep.threshold == 0
    assert not rep.open_cells
    assert rep.proven_ok


def test_nonnegativity_open_region_observed():
    rep = chi_nonnegativity_report(6, 3)
    assert rep.proven_ok
    # threshold a_3/c = 3/3 = 1; the open region is 0 < e2 < 1: empty
    assert rep.threshold == 1
    assert not rep.open_cells
    # n = 7 has a genuine open region (a_4/c = 8/3): record observations
    rep7 = chi_nonnegativity_report(7, 3)
    assert rep7.proven_ok
    assert rep7.open_cells
    assert isinstance(rep7.open_all_nonneg, bool)


def test_nonnegativity_needs_c3():
    with pytest.raises(PreconditionViolated):
        chi_nonnegativity_report(5, 2)


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------

def test_identity_degenerate_e2_zero():
    for M in range(4):
        for N in range(-2, 3):
            v = binomial_identity_check(M, N, 3, 1, 0)
            assert v.equal


def test_identity_instance():
    v = binomial_identity_check(1, 0, 2, 1, 1)
    assert v == IdentityVerdict(True, v.lhs, v.lhs)


def test_identity_random_sweep():
    rng = random.Random(23)
    for _ in range(120):
        M = rng.randint(0, 8)
        N = rng.randint(-5, 5)
        c = rng.randint(2, 4)
        e1 = rng.randint(0, c - 1)
        e2 = rng.randint(0, 4)
        v = binomial_identity_check(M, N, c, e1, e2)
        assert v.equal, (M, N, c, e1, e2, v)


def test_stfact_examples():
    assert stfact_check(1, 2, 1, 12).equal
    assert stfact_check(-2, 3, 2, 12).equal
    assert stfact_check(-3, -2, 3, 15).equal


def test_stfact_random_sweep():
    rng = random.Random(31)
    for _ in range(60):
        A = 0
        while A == 0:
            A = rng.randint(-4, 4)
        B = rng.randint(-5, 5)
        order = rng.randint(1, 4)
        v = stfact_check(A, B, order, 12)
        assert v.equal, (A, B, order, v)


def test_stfact_preconditions():
    with pytest.raises(PreconditionViolated):
        stfact_check(0, 2, 1, 10)
    with pytest.raises(PreconditionViolated):
        stfact_check(2, 2, 0, 10)


# ---------------------------------------------------------------------------
# the EC bridge
# ---------------------------------------------------------------------------

def test_bridge_degenerate_corner():
    assert ec_bridge(4, 2, 0, 0) == 1
    assert ec_bridge(4, 2, 1, 0) == 0


def test_bridge_c2_n4():
    assert ec_bridge(4, 2, 1, 1) == 2
    assert ec_bridge(4, 2, 0, 1) == 1


def test_bridge_matches_expanded():
    assert ec_bridge(5, 3, 2, 2) == chi_expanded(5, 3, 2, 2)
    for c in (2, 3):
        for e1 in range(c):
            for e2 in range(4):
                got = ec_bridge(5, c, e1, e2)
                assert isinstance(got, int), (c, e1, e2, got)
                assert got == chi_expanded(5, c, e1, e2), (c, e1, e2)


# ---------------------------------------------------------------------------
# cross-check harness
# ---------------------------------------------------------------------------

def test_cross_check_agrees():
    rep = cross_check(5, 3)
    assert rep.agree
    assert rep.dim_vector == (8, 3)  # (a_4, a_3) for c = 3
    assert rep.box_cells_checked == 9 * 4
    cells = {(c.e1, c.e2): c for c in rep.cells}
    assert cells[(0, 0)].routes["recurrence"] == 1
    strip_cell = cells[(1, 1)]
    assert set(strip_cell.routes) == {
        "recurrence",
        "closed",
        "small_e1",
        "expanded",
        "bridge",
    }


def test_cross_check_bridge_cap():
    rep = cross_check(4, 2, bridge_cap=0)
    for cell in rep.cells:
        if cell.e2 > 0:
            assert "bridge" not in cell.routes
