import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from decorr.channels import ChannelKind, dilate_and_evolve_global, make_channel
from decorr.oracles import (
    BipartitionLabel,
    UnsupportedChannelError,
    analytic_classical_correlation,
    analytic_discord,
    chi,
    closed_form_matrix,
    closed_form_reduced,
    ghz_asymptote_fidelity,
)
from decorr.states import BellDiagonalParams, bell_diagonal_state, random_bell_diagonal
from decorr.tensor import partial_trace, partial_transpose_matrix, validate_density

NON_DISSIPATIVE = [k for k in ChannelKind if k is not ChannelKind.AMPLITUDE_DAMPING]
C_EX = BellDiagonalParams(0.2, 0.3, -0.5)


def _numeric(kind, part, c, p):
    ch = make_channel(kind, p)
    g = dilate_and_evolve_global(bell_diagonal_state(c), ch, ch)
    return partial_trace(g, BipartitionLabel.parse(part).indices).matrix


def test_label_parsing():
    assert BipartitionLabel.parse("EaEb") is BipartitionLabel.EaEb
    assert BipartitionLabel.parse("aeb") is BipartitionLabel.AEb
    assert BipartitionLabel.AEb.indices == (0, 3)
    with pytest.raises(ValueError):
        BipartitionLabel.parse("AA")


def test_amplitude_damping_aea_half(rng):
    expected = 0.5 * np.array([[1, 0, 0, 0], [0, 0.5, 0.5, 0], [0, 0.5, 0.5, 0], [0, 0, 0, 0]])
    for _ in range(3):
        c = random_bell_diagonal(rng)
        np.testing.assert_allclose(closed_form_matrix("amplitude-damping", "AEa", c, 0.5), expected, atol=1e-15)


def test_phase_damping_ab_full_decay():
    m = closed_form_matrix("phase-damping", "AB", C_EX, 1.0)
    c3 = C_EX.c3
    np.testing.assert_allclose(np.diag(m).real, [(1 + c3) / 4, (1 - c3) / 4, (1 - c3) / 4, (1 + c3) / 4])
    assert np.all(m[[0, 1, 2, 3], [3, 2, 1, 0]] == 0)


@pytest.mark.parametrize("seed", range(5))
def test_amplitude_damping_transfer(seed):
    c = random_bell_diagonal(np.random.default_rng(seed))
    np.testing.assert_allclose(
        closed_form_matrix("amplitude-damping", "EaEb", c, 1.0), bell_diagonal_state(c).matrix, atol=1e-16
    )


@pytest.mark.parametrize("kind", list(ChannelKind))
@pytest.mark.parametrize("part", list(BipartitionLabel))
def test_closed_forms_match_dilation(kind, part, rng):
    for _ in range(3):
        c = random_bell_diagonal(rng)
        for p in (0.0, 0.3, 0.77, 1.0):
            assert np.max(np.abs(closed_form_matrix(kind, part, c, p) - _numeric(kind, part, c, p))) <= 1e-12


def test_closed_form_reduced_is_validated():
    rho = closed_form_reduced("bit-flip", "AB", C_EX, 0.4)
    assert rho.dims == (2, 2)


def test_chi_examples():
    assert chi("phase-flip", C_EX, 0.5) == pytest.approx(0.5)
    assert chi("bit-flip", C_EX, 0.5) == pytest.approx(0.2)
    for kind in NON_DISSIPATIVE:
        assert chi(kind, C_EX, 0.0) == 0.5
    with pytest.raises(UnsupportedChannelError):
        chi("amplitude-damping", C_EX, 0.5)


def test_classical_correlation_examples():
    assert analytic_classical_correlation(None, 0.0) == 0.0
    assert analytic_classical_correlation(None, 1.0) == 1.0
    direct = 0.25 * math.log2(0.5) + 0.75 * math.log2(1.5)
    assert analytic_classical_correlation(None, 0.5) == pytest.approx(direct, abs=1e-15)
    assert direct == pytest.approx(0.18872, abs=1e-5)


def test_analytic_discord_examples():
    assert analytic_discord(BellDiagonalParams(-1, -1, -1), 0.0, "phase-damping") == pytest.approx(1.0, abs=1e-12)
    for p in (0.0, 0.4, 1.0):
        assert analytic_discord(BellDiagonalParams(0, 0, 0.5), p, "phase-flip") == pytest.approx(0.0, abs=1e-12)
    assert analytic_discord(BellDiagonalParams(-0.5, -0.5, -0.5), 1.0, "phase-damping") == pytest.approx(
        0.0, abs=1e-12
    )


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 1), st.sampled_from(NON_DISSIPATIVE))
def test_analytic_values_non_negative(seed, p, kind):
    c = random_bell_diagonal(np.random.default_rng(seed))
    assert analytic_discord(c, p, kind) >= -1e-12
    assert analytic_classical_correlation(c, chi(kind, c, p)) >= 0.0


def test_ghz_asymptote(singlet):
    ch = make_channel("phase-damping", 1.0)
    assert ghz_asymptote_fidelity(dilate_and_evolve_global(singlet, ch, ch)) == pytest.approx(1.0, abs=1e-12)
    mixed = validate_density(np.eye(16) / 16, (2, 2, 2, 2))
    assert ghz_asymptote_fidelity(mixed) == pytest.approx(1 / 16, abs=1e-15)


@pytest.mark.parametrize("p", [0.0, 0.25, 0.5, 0.9])
def test_ghz_fidelity_grows_linearly(singlet, p):
    # overlap amplitude is sqrt(p) from each environment's |1> branch
    ch = make_channel("phase-damping", p)
    assert ghz_asymptote_fidelity(dilate_and_evolve_global(singlet, ch, ch)) == pytest.approx(p, abs=1e-12)


@pytest.mark.parametrize("kind", NON_DISSIPATIVE)
def test_ppt_fixed_points(kind, rng):
    # AEa/AEb are PT-invariant on the environment factor, EaEb on either
    for _ in range(3):
        c = random_bell_diagonal(rng)
        for p in np.linspace(0, 1, 11):
            for part, sub in (("AEa", 1), ("AEb", 1), ("EaEb", 0), ("EaEb", 1)):
                m = closed_form_matrix(kind, part, c, p)
                assert np.max(np.abs(partial_transpose_matrix(m, (2, 2), sub) - m)) <= 1e-12
