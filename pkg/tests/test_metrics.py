import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from saxkit.codec import (
    EncoderSpec,
    EncodingMethod,
    SymbolicSequence,
    encode,
    fit,
    normalized_series,
    paa_view,
)
from saxkit.discretize import gaussian_equiprobable_codebook
from saxkit.errors import (
    CodebookMismatchError,
    LengthMismatchError,
    NotNormalizedError,
    TooShortError,
    ZeroDistanceError,
)
from saxkit.metrics import (
    dist_error,
    dist_symbolic,
    euclidean,
    info_loss_to_std_gaussian,
    mindist,
    mindist_paa,
    tlb,
)
from saxkit.series import TimeSeries, znormalize

QUARTILE = 0.6744897501960817


def seq(symbols, n, codebook):
    return SymbolicSequence(np.asarray(symbols, dtype=np.int64), n, codebook)


@pytest.fixture(scope="module")
def encoders():
    pool = np.random.default_rng(0).normal(size=500)
    return [
        fit(EncoderSpec(EncodingMethod.SAX, 8, kappa=4)),
        fit(EncoderSpec(EncodingMethod.ASAX, 8, kappa=5), [pool]),
        fit(EncoderSpec(EncodingMethod.PSAX, 8, kappa=4), [pool]),
    ]


class TestEuclidean:
    def test_hand_case(self):
        assert euclidean([0.0, 3.0], [4.0, 0.0]) == 5.0

    def test_accepts_wrapped_series(self):
        u = TimeSeries(np.array([1.0, 2.0]))
        assert euclidean(u, [1.0, 2.0]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            euclidean([1.0], [1.0, 2.0])


class TestMindist:
    def test_hand_cases_on_quartile_codebook(self):
        cb = gaussian_equiprobable_codebook(4)
        # non-adjacent outer cells: gap between the facing cutlines
        d = mindist(seq([0], 1, cb), seq([3], 1, cb))
        np.testing.assert_allclose(d, 2.0 * QUARTILE, atol=1e-9)
        # one cell in between: half the previous gap
        d = mindist(seq([1], 1, cb), seq([3], 1, cb))
        np.testing.assert_allclose(d, QUARTILE, atol=1e-9)

    def test_same_or_adjacent_symbols_contribute_zero(self):
        cb = gaussian_equiprobable_codebook(4)
        assert mindist(seq([2], 1, cb), seq([2], 1, cb)) == 0.0
        assert mindist(seq([1], 1, cb), seq([2], 1, cb)) == 0.0

    def test_segment_width_scaling(self):
        cb = gaussian_equiprobable_codebook(4)
        base = mindist(seq([0], 1, cb), seq([3], 1, cb))
        wide = mindist(seq([0], 4, cb), seq([3], 4, cb))
        np.testing.assert_allclose(wide, 2.0 * base, atol=1e-12)

    def test_symmetry(self):
        cb = gaussian_equiprobable_codebook(5)
        a, b = seq([0, 2, 4], 6, cb), seq([4, 2, 1], 6, cb)
        assert mindist(a, b) == mindist(b, a)

    def test_codebook_and_shape_mismatch(self):
        a = seq([0], 1, gaussian_equiprobable_codebook(4))
        b = seq([0], 1, gaussian_equiprobable_codebook(5))
        with pytest.raises(CodebookMismatchError):
            mindist(a, b)
        cb = gaussian_equiprobable_codebook(4)
        with pytest.raises(LengthMismatchError):
            mindist(seq([0], 1, cb), seq([0], 2, cb))


class TestMindistPaa:
    def test_inside_the_cell_is_zero(self, encoders):
        cb = gaussian_equiprobable_codebook(4)
        y = paa_view(encoders[0], np.random.default_rng(1).normal(size=8))
        q = encode(encoders[0], np.asarray(y.values.repeat(1)))
        assert mindist_paa(y, q) == 0.0

    def test_hand_distances_to_cell_edges(self):
        cb = gaussian_equiprobable_codebook(4)
        from saxkit.series import PaaSeries

        # symbol 2 occupies [0, QUARTILE); y below and above that cell
        y = PaaSeries(np.array([-0.5, 1.0]), source_length=2)
        q = seq([2, 2], 2, cb)
        expected = math.sqrt(0.5**2 + (1.0 - QUARTILE) ** 2)
        np.testing.assert_allclose(mindist_paa(y, q), expected, atol=1e-12)

    def test_shape_mismatch(self):
        from saxkit.series import PaaSeries

        cb = gaussian_equiprobable_codebook(4)
        y = PaaSeries(np.array([0.0, 0.0]), source_length=4)
        with pytest.raises(LengthMismatchError):
            mindist_paa(y, seq([0], 2, cb))


class TestBoundChain:
    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_lower_bounds_stack(self, encoders, seed):
        rng = np.random.default_rng(seed)
        u = rng.normal(size=32)
        v = rng.normal(size=32) + rng.normal() * 0.5
        for enc in encoders:
            d_sym = mindist(encode(enc, u), encode(enc, v))
            d_paa = mindist_paa(paa_view(enc, u), encode(enc, v))
            d_raw = euclidean(normalized_series(enc, u), normalized_series(enc, v))
            assert d_sym <= d_paa + 1e-9
            assert d_paa <= d_raw + 1e-9

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_tlb_is_a_unit_ratio(self, encoders, seed):
        rng = np.random.default_rng(seed)
        u = rng.normal(size=32)
        v = rng.normal(size=32)
        for enc in encoders:
            r = tlb(u, v, enc)
            assert 0.0 <= r <= 1.0 + 1e-9

    def test_identical_series_raise(self, encoders):
        u = np.random.default_rng(2).normal(size=32)
        with pytest.raises(ZeroDistanceError):
            tlb(u, u.copy(), encoders[0])


class TestCentroidDistances:
    def test_dist_symbolic_hand_case(self):
        cb = gaussian_equiprobable_codebook(4)
        c = cb.centroids
        d = dist_symbolic(seq([0, 1], 4, cb), seq([2, 1], 4, cb))
        np.testing.assert_allclose(d, math.sqrt(2.0 * (c[2] - c[0]) ** 2), atol=1e-12)

    def test_dist_error_hand_case(self):
        cb = gaussian_equiprobable_codebook(4)
        q = seq([1, 2], 4, cb)
        u = np.array([0.0, 0.0, 1.0, 1.0])
        recon = cb.centroids[[1, 1, 2, 2]]
        np.testing.assert_allclose(
            dist_error(u, q), math.sqrt(np.mean((u - recon) ** 2)), atol=1e-12
        )

    def test_dist_error_zero_for_exact_centroids(self):
        cb = gaussian_equiprobable_codebook(4)
        q = seq([0, 3], 4, cb)
        u = cb.centroids[[0, 0, 3, 3]]
        assert dist_error(u, q) == 0.0

    def test_length_mismatch(self):
        cb = gaussian_equiprobable_codebook(4)
        with pytest.raises(LengthMismatchError):
            dist_error([1.0, 2.0], seq([0], 4, cb))


class TestInfoLoss:
    def test_standard_normal_is_near_zero(self):
        rng = np.random.default_rng(3)
        x = znormalize(TimeSeries(rng.normal(size=100_000)))[0]
        assert abs(info_loss_to_std_gaussian(x)) < 0.05

    def test_unit_uniform_matches_entropy_gap(self):
        # ln(sqrt(2*pi*e)) - ln(2*sqrt(3)) = 0.17649 nats
        rng = np.random.default_rng(4)
        x = znormalize(TimeSeries(rng.uniform(-math.sqrt(3), math.sqrt(3), 100_000)))[0]
        np.testing.assert_allclose(info_loss_to_std_gaussian(x), 0.17649, atol=0.05)

    def test_unit_laplace_matches_entropy_gap(self):
        # ln(sqrt(2*pi*e)) - (1 + ln(sqrt(2))) = 0.07236 nats
        rng = np.random.default_rng(5)
        x = znormalize(TimeSeries(rng.laplace(0.0, 1.0 / math.sqrt(2.0), 100_000)))[0]
        np.testing.assert_allclose(info_loss_to_std_gaussian(x), 0.07236, atol=0.05)

    def test_bits_are_nats_over_log_two(self):
        rng = np.random.default_rng(6)
        x = znormalize(TimeSeries(rng.normal(size=2000)))[0]
        nats = info_loss_to_std_gaussian(x)
        bits = info_loss_to_std_gaussian(x, bits=True)
        np.testing.assert_allclose(bits, nats / math.log(2.0), rtol=1e-12)

    def test_needs_enough_samples(self):
        with pytest.raises(TooShortError):
            info_loss_to_std_gaussian(np.zeros(999))

    def test_rejects_unnormalized_samples(self):
        rng = np.random.default_rng(7)
        with pytest.raises(NotNormalizedError):
            info_loss_to_std_gaussian(rng.normal(5.0, 1.0, 2000))
        with pytest.raises(NotNormalizedError):
            info_loss_to_std_gaussian(rng.normal(0.0, 3.0, 2000))
