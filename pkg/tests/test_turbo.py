import math

import numpy as np
import pytest

from turboweave import (
    ConstructionError,
    Permutation,
    SpokeVector,
    TrellisCode,
    ValidationError,
    bcjr_log_map,
    channel,
    check_spread,
    interleaver_from_spokes,
    pccc_encode,
    quadratic_interleaver,
    rsc_encode,
    srandom_interleaver,
    turbo_decode,
)

# --- independent reference recursion ---------------------------------------
# feedback 1 + D^2 + D^3, feedforward 1 + D + D^3, written out directly


def ref_rsc(bits, terminate=True):
    a1 = a2 = a3 = 0
    parity = []
    for u in bits:
        a = u ^ a2 ^ a3
        parity.append(a ^ a1 ^ a3)
        a1, a2, a3 = a, a1, a2
    tail = []
    if terminate:
        for _ in range(3):
            u = a2 ^ a3
            a = u ^ a2 ^ a3
            tail.append((u, a ^ a1 ^ a3))
            a1, a2, a3 = a, a1, a2
    return parity, tail, (a1, a2, a3)


def ref_loglik(bits, sys_llr, par_llr, priors, terminated):
    n = len(bits)
    parity, tail, _ = ref_rsc(list(bits), terminated)
    total = 0.0
    for t in range(n):
        total += 0.5 * (
            (1 - 2 * bits[t]) * (sys_llr[t] + priors[t])
            + (1 - 2 * parity[t]) * par_llr[t]
        )
    for j, (u, p) in enumerate(tail):
        total += 0.5 * ((1 - 2 * u) * sys_llr[n + j] + (1 - 2 * p) * par_llr[n + j])
    return total


def brute_map(sys_llr, par_llr, priors, terminated):
    n = len(priors)
    num = np.full(n, -np.inf)
    den = np.full(n, -np.inf)
    for word in range(1 << n):
        bits = [(word >> t) & 1 for t in range(n)]
        metric = ref_loglik(bits, sys_llr, par_llr, priors, terminated)
        for t in range(n):
            if bits[t] == 0:
                num[t] = np.logaddexp(num[t], metric)
            else:
                den[t] = np.logaddexp(den[t], metric)
    return num - den


class TestTrellisCode:
    def test_default_shape(self):
        code = TrellisCode()
        assert code.memory == 3
        assert code.state_count == 8

    def test_tables_consistent(self):
        next_state, parity, term_in = TrellisCode().tables()
        assert next_state.shape == (2, 8) and parity.shape == (2, 8)
        for s in range(8):
            state = s
            for _ in range(3):
                state = int(next_state[int(term_in[state]), state])
            assert state == 0  # termination reaches zero from everywhere

    def test_feedback_needs_constant_term(self):
        with pytest.raises(ValidationError):
            TrellisCode(feedback=0o3, feedforward=0o7)


class TestRscEncode:
    def test_all_zero(self):
        sys_, par, tail = rsc_encode([0] * 16)
        assert not par.any() and not tail.any()
        assert not sys_.any()

    def test_impulse_response_matches_reference(self):
        bits = [1] + [0] * 13
        _, par, tail = rsc_encode(bits, terminate=True)
        ref_par, ref_tail, _ = ref_rsc(bits)
        assert par.tolist() == ref_par
        assert [tuple(t) for t in tail.tolist()] == ref_tail

    def test_random_blocks_match_reference(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            bits = rng.integers(0, 2, 40).tolist()
            _, par, tail = rsc_encode(bits, terminate=True)
            ref_par, ref_tail, _ = ref_rsc(bits)
            assert par.tolist() == ref_par
            assert [tuple(t) for t in tail.tolist()] == ref_tail

    def test_termination_zeroes_state(self):
        rng = np.random.default_rng(5)
        bits = rng.integers(0, 2, 33).tolist()
        _, _, tail = rsc_encode(bits, terminate=True)
        # replay data plus tail inputs through the reference recursion
        _, _, state = ref_rsc(bits + [int(u) for u, _ in tail], terminate=False)
        assert state == (0, 0, 0)

    def test_unterminated_has_no_tail(self):
        _, _, tail = rsc_encode([1, 0, 1], terminate=False)
        assert tail.shape == (0, 2)

    def test_non_binary_rejected(self):
        with pytest.raises(ValidationError):
            rsc_encode([0, 2, 1])


class TestPcccEncode:
    def test_all_zero_codeword(self):
        cw = pccc_encode([0] * 8, Permutation.identity(8))
        assert cw.shape == (30,) and not cw.any()

    def test_identity_duplicates_parity(self):
        rng = np.random.default_rng(6)
        bits = rng.integers(0, 2, 8)
        cw = pccc_encode(bits, Permutation.identity(8))
        assert np.array_equal(cw[1:24:3], cw[2:24:3])

    def test_codeword_length(self):
        pi = quadratic_interleaver(1024)
        bits = np.zeros(1024, np.int8)
        assert pccc_encode(bits, pi).size == 3078

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            pccc_encode([0] * 7, Permutation.identity(8))


class TestChannel:
    def test_noiseless_signs(self):
        bits = np.array([0, 1, 1, 0, 1], np.int8)
        llr = channel(bits, math.inf, 1 / 3, np.random.default_rng(0))
        assert np.array_equal(llr > 0, bits == 0)

    def test_reproducible(self):
        bits = np.zeros(64, np.int8)
        a = channel(bits, 1.0, 1 / 3, np.random.default_rng(12))
        b = channel(bits, 1.0, 1 / 3, np.random.default_rng(12))
        assert np.array_equal(a, b)

    def test_noise_variance_calibration(self):
        bits = np.zeros(10**6, np.int8)
        rate, ebn0 = 1 / 3, 2.0
        sigma2 = 1.0 / (2 * rate * 10 ** (ebn0 / 10))
        llr = channel(bits, ebn0, rate, np.random.default_rng(99))
        noise = llr * sigma2 / 2.0 - 1.0
        assert abs(noise.var() / sigma2 - 1.0) < 0.01

    def test_rate_domain(self):
        with pytest.raises(ValidationError):
            channel([0, 1], 1.0, 0.0, np.random.default_rng(0))


class TestBcjr:
    def test_noiseless_recovery(self):
        rng = np.random.default_rng(7)
        bits = rng.integers(0, 2, 24).tolist()
        parity, tail, _ = ref_rsc(bits)
        sys_llr = 20.0 * (1 - 2 * np.array(bits + [u for u, _ in tail], float))
        par_llr = 20.0 * (1 - 2 * np.array(parity + [p for _, p in tail], float))
        post, ext = bcjr_log_map(sys_llr, par_llr, np.zeros(24))
        assert np.array_equal(post < 0, np.array(bits) == 1)
        assert post.shape == ext.shape == (24,)

    @pytest.mark.parametrize("terminated", [True, False])
    def test_matches_exhaustive_map(self, terminated):
        rng = np.random.default_rng(8)
        for _ in range(10):
            n = 6
            T = n + (3 if terminated else 0)
            sys_llr = rng.normal(0, 2.5, T)
            par_llr = rng.normal(0, 2.5, T)
            priors = rng.normal(0, 1.0, n)
            post, ext = bcjr_log_map(sys_llr, par_llr, priors, terminated=terminated)
            ref = brute_map(sys_llr, par_llr, priors, terminated)
            assert np.abs(post - ref).max() <= 1e-9
            assert np.allclose(ext, post - priors - sys_llr[:n])

    @pytest.mark.parametrize("terminated", [True, False])
    def test_zero_input_gives_zero_posteriors(self, terminated):
        # every information word is equally likely, hence exact indifference
        T = 9 if terminated else 6
        post, _ = bcjr_log_map(np.zeros(T), np.zeros(T), np.zeros(6), terminated=terminated)
        assert np.array_equal(post, np.zeros(6))

    def test_length_validation(self):
        with pytest.raises(ValidationError):
            bcjr_log_map(np.zeros(8), np.zeros(7), np.zeros(8))
        with pytest.raises(ValidationError):
            bcjr_log_map(np.zeros(8), np.zeros(8), np.zeros(8), terminated=True)


class TestTurboDecode:
    def encode_and_transmit(self, bits, pi, ebn0_db, rng, iterations=10):
        cw = pccc_encode(bits, pi)
        rate = len(bits) / cw.size
        llr = channel(cw, ebn0_db, rate, rng)
        return turbo_decode(llr, pi, iterations=iterations)

    @pytest.mark.parametrize("n,spoke_offset", [(64, 25), (256, 25), (1024, 25)])
    def test_noiseless_single_iteration(self, n, spoke_offset):
        rng = np.random.default_rng(10)
        for pi in (
            interleaver_from_spokes(SpokeVector(n, (spoke_offset, n - spoke_offset))),
            quadratic_interleaver(n),
            srandom_interleaver(n, seed=3),
        ):
            bits = rng.integers(0, 2, n, dtype=np.int8)
            cw = pccc_encode(bits, pi)
            llr = 50.0 * (1.0 - 2.0 * cw.astype(float))
            assert np.array_equal(turbo_decode(llr, pi, iterations=1), bits)

    def test_graph_interleaver_shares_table_with_inverse(self):
        pi = interleaver_from_spokes(SpokeVector(64, (25, 39)))
        assert pi.inverse() == pi  # interleave and de-interleave share buffers

    def test_moderate_noise_decodes(self):
        rng = np.random.default_rng(11)
        pi = srandom_interleaver(256, seed=5)
        bits = rng.integers(0, 2, 256, dtype=np.int8)
        decoded = self.encode_and_transmit(bits, pi, 3.0, rng)
        assert np.array_equal(decoded, bits)

    def test_validation(self):
        pi = Permutation.identity(8)
        with pytest.raises(ValidationError):
            turbo_decode(np.zeros(29), pi)
        with pytest.raises(ValidationError):
            turbo_decode(np.zeros(30), pi, iterations=0)


class TestQuadraticInterleaver:
    def test_known_table(self):
        assert list(quadratic_interleaver(8, 1).table) == [0, 1, 3, 6, 2, 7, 5, 4]

    def test_tiny(self):
        assert list(quadratic_interleaver(2, 1).table) == [0, 1]

    def test_bijective_across_sizes_and_multipliers(self):
        for j in range(1, 15):
            for k in (1, 3, 5):
                quadratic_interleaver(2**j, k)  # constructor validates bijectivity

    def test_domain(self):
        with pytest.raises(ValidationError):
            quadratic_interleaver(12)
        with pytest.raises(ValidationError):
            quadratic_interleaver(16, 2)


class TestSRandomInterleaver:
    def test_spread_one_is_unconstrained(self):
        perm = srandom_interleaver(16, spread=1, seed=0)
        assert check_spread(perm, 1)

    def test_default_spread_at_scale(self):
        perm = srandom_interleaver(1024, seed=7)
        assert check_spread(perm, math.isqrt(512))

    def test_validator_rejects_identity(self):
        assert not check_spread(Permutation.identity(8), 2)

    def test_same_seed_same_permutation(self):
        assert srandom_interleaver(128, seed=42) == srandom_interleaver(128, seed=42)

    def test_infeasible_spread_exhausts_budget(self):
        with pytest.raises(ConstructionError):
            srandom_interleaver(16, spread=8, seed=0, max_attempts=5)

    def test_domain(self):
        with pytest.raises(ValidationError):
            srandom_interleaver(16, spread=0)
