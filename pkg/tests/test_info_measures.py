import math
import numpy as np
import pytest
from hypothesis import given, strategies as st

from modules.info_measures import (
    DiscreteState, InvalidDistribution, entropy, information_gain, max_entropy
)

distributions = st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=1, max_size=20) \
    .filter(lambda w: sum(w) > 1e-6) \
    .map(lambda w: np.asarray(w) / math.fsum(w))

class TestEntropy:
    def test_fair_coin_is_one_bit(self):
        assert entropy(DiscreteState([0.5, 0.5])) == pytest.approx(1.0, abs=1e-12)

    def test_four_equal_outcomes(self):
        assert entropy(DiscreteState([0.25] * 4)) == pytest.approx(2.0, abs=1e-12)

    def test_certain_outcome(self):
        assert entropy(DiscreteState([1.0, 0.0, 0.0])) == 0.0

    def test_biased_coin(self):
        assert entropy(DiscreteState([0.9, 0.1])) == pytest.approx(0.468996, abs=1e-6)

    def test_halves_and_quarters(self):
        assert entropy(DiscreteState([0.5, 0.25, 0.25])) == pytest.approx(1.5, abs=1e-12)

    def test_natural_units(self):
        assert entropy(DiscreteState([0.5, 0.5]), base=math.e) == pytest.approx(math.log(2), abs=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 3, 7, 100, 1000, 4096, 2 ** 16])
    def test_uniform_reaches_the_maximum(self, n):
        state = DiscreteState.uniform(n)
        assert entropy(state) == pytest.approx(math.log2(n), abs=1e-12)
        assert max_entropy(n) == pytest.approx(math.log2(n))

    @pytest.mark.parametrize("n, k", [(1, 0), (5, 0), (5, 4), (2 ** 16, 123)])
    def test_degenerate_is_zero(self, n, k):
        assert entropy(DiscreteState.degenerate(n, k)) == 0.0

    def test_bounds_on_random_distributions(self):
        rng = np.random.default_rng(17)
        for _ in range(1000):
            n = int(rng.integers(1, 50))
            state = DiscreteState(rng.dirichlet(np.ones(n)))
            h = entropy(state)
            assert 0.0 <= h <= math.log2(n) + 1e-12

class TestInformationGain:
    def test_resolving_eight_outcomes_gains_three_bits(self):
        gain = information_gain(DiscreteState.uniform(8), DiscreteState.degenerate(8))
        assert gain == pytest.approx(3.0, abs=1e-12)

    def test_spreading_over_four_outcomes_loses_two_bits(self):
        gain = information_gain(DiscreteState.degenerate(4), DiscreteState.uniform(4))
        assert gain == pytest.approx(-2.0, abs=1e-12)

    def test_natural_units(self):
        gain = information_gain(DiscreteState.uniform(4), DiscreteState.uniform(2), base=math.e)
        assert gain == pytest.approx(math.log(2), abs=1e-12)

class TestLogBase:
    @pytest.mark.parametrize("base", [0.0, -2.0, 1.0, math.inf, math.nan])
    def test_rejects_unusable_bases(self, base):
        state = DiscreteState([0.5, 0.5])
        with pytest.raises(ValueError, match="logarithm base"):
            entropy(state, base=base)
        with pytest.raises(ValueError, match="logarithm base"):
            max_entropy(2, base=base)
        with pytest.raises(ValueError, match="logarithm base"):
            information_gain(state, state, base=base)

    def test_base_ten(self):
        assert entropy(DiscreteState.uniform(10), base=10) == pytest.approx(1.0, abs=1e-12)
        assert max_entropy(100, base=10) == pytest.approx(2.0, abs=1e-12)

@given(probs=distributions, data=st.data())
def test_entropy_ignores_event_order(probs, data):
    order = data.draw(st.permutations(range(probs.size)))
    assert entropy(DiscreteState(probs[list(order)])) == pytest.approx(entropy(DiscreteState(probs)), abs=1e-12)

@given(before=distributions, after=distributions)
def test_information_gain_is_antisymmetric(before, after):
    p, q = DiscreteState(before), DiscreteState(after)
    assert information_gain(p, q) == pytest.approx(-information_gain(q, p), abs=1e-12)
    assert information_gain(p, p) == 0.0

class TestDiscreteState:
    def test_rejects_sum_above_one(self):
        with pytest.raises(InvalidDistribution, match="probabilities sum to 1.1"):
            DiscreteState([0.6, 0.5])

    def test_rejects_negative_probability(self):
        with pytest.raises(InvalidDistribution, match="negative"):
            DiscreteState([1.5, -0.5])

    def test_rejects_empty(self):
        with pytest.raises(InvalidDistribution):
            DiscreteState([])

    def test_tolerates_rounding_in_the_sum(self):
        assert DiscreteState([0.1] * 10).n == 10
