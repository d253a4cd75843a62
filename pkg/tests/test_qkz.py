import numpy as np
import pytest

from conftest import zeta_sample
from qkzkit.errors import ConfigError
from qkzkit.qkz import (ChainSpec, DeltaAssignment, build_delta, check_ddr,
                        check_qkz_compatibility, lambda_factor_specs,
                        lambda_forms_residual, lambda_op,
                        lambda_product_regularized, transport_phi)
from qkzkit.reps import operator_x
from qkzkit.rsolve import r_matrix
from qkzkit.tensorops import cyclic_left_shift, permutation_op


def general_chain(ctx, grading, kinds, rng, p=None, norm="kappa", alpha=0.0):
    N = len(kinds)
    etas = tuple(zeta_sample(rng) for _ in range(N))
    deltas = tuple(DeltaAssignment("general_v" if k == "V" else "general_vstar",
                                   alpha=alpha) for k in kinds)
    return ChainSpec(1, grading, ctx, tuple(kinds), etas,
                     p if p is not None else 1.23 - 0.31j, deltas, norm)


class TestBuildDelta:
    def test_self_dual_m1_hand_value(self, ctx, grading):
        # (Xtilde^-1)^t Xtilde = -id at m=1; with d = -1 and n = 2 the map is +id
        fn = build_delta(DeltaAssignment("self_dual_pair", n=2), 1, grading, ctx)
        assert np.abs(fn(1.7) - np.eye(2) * ((-1.0) ** 1) ** (2 - 1) * (-1.0)).max() < 1e-14

    def test_general_alpha_zero_is_x(self, ctx, grading10):
        fn = build_delta(DeltaAssignment("general_v"), 2, grading10, ctx)
        assert np.abs(fn(0.9) - operator_x(2, grading10, ctx)).max() < 1e-14
        fns = build_delta(DeltaAssignment("general_vstar"), 2, grading10, ctx)
        assert np.abs(fns(0.9) - operator_x(2, grading10, ctx, kind="V*")).max() < 1e-14

    def test_balanced_grading_gives_identity(self, ctx, grading):
        fn = build_delta(DeltaAssignment("general_v"), 1, grading, ctx)
        assert np.abs(fn(2.2) - np.eye(2)).max() < 1e-15

    def test_phi_hook(self, ctx, grading):
        fn = build_delta(DeltaAssignment("general_v", phi_hook=lambda z: 2.0 * z),
                         1, grading, ctx)
        assert np.abs(fn(3.0) - 6.0 * np.eye(2)).max() < 1e-14


class TestLambdaOp:
    def test_two_forms_agree_n4(self, ctx, grading, cache):
        rng = np.random.default_rng(50)
        chain = general_chain(ctx, grading, ("V", "V*", "V", "V*"), rng)
        for i in range(4):
            assert lambda_forms_residual(chain, i, cache) < 1e-10

    def test_n2_hand_assembly(self, ctx, grading, cache):
        # Lambda_1 at N=2: Rcheck^{(1,2)}(eta2|p eta1) P_lambda Delta^{(1)}(eta1)
        rng = np.random.default_rng(51)
        chain = general_chain(ctx, grading, ("V", "V"), rng)
        lam = lambda_op(chain, 0, cache).data
        rc = r_matrix("V", chain.etas[1], "V", chain.p * chain.etas[0], 1,
                      grading, ctx, normalization="kappa", cache=cache).Rcheck
        P = permutation_op(cyclic_left_shift(2), chain.dims).data
        D1 = np.kron(chain.delta_matrix(0), np.eye(2))
        assert np.abs(lam - rc @ P @ D1).max() < 1e-12

    def test_factor_specs_structure(self, ctx, grading):
        rng = np.random.default_rng(52)
        chain = general_chain(ctx, grading, ("V", "V*", "V", "V*"), rng)
        specs = lambda_factor_specs(chain, 2)
        tags = [s[0] for s in specs]
        assert tags == ["rcheck", "perm_lambda", "delta", "rcheck", "rcheck"]
        # moving site kind appears as the second member of each rcheck pair
        for tag, slot, info in specs:
            if tag == "rcheck":
                assert info[2] == "V"

    def test_index_out_of_range(self, ctx, grading):
        rng = np.random.default_rng(53)
        chain = general_chain(ctx, grading, ("V", "V"), rng)
        with pytest.raises(ConfigError):
            lambda_factor_specs(chain, 5)


class TestDdr:
    def test_trivial_balanced_alpha_zero(self, ctx, grading, cache):
        rng = np.random.default_rng(54)
        chain = general_chain(ctx, grading, ("V", "V*"), rng)
        rep = check_ddr(chain, 0, 1, cache=cache)
        assert rep.passed

    def test_general_deltas(self, ctx, grading10, cache):
        rng = np.random.default_rng(55)
        for kinds, (j, k) in ((("V", "V*", "V", "V*"), (0, 1)),
                              (("V", "V*", "V", "V*"), (1, 2)),
                              (("V", "V", "V", "V"), (0, 2))):
            chain = general_chain(ctx, grading10, kinds, rng, alpha=0.3 - 0.1j)
            rep = check_ddr(chain, j, k, cache=cache)
            assert rep.passed, rep.residual

    def test_self_dual_delta(self, ctx, grading10, cache):
        rng = np.random.default_rng(56)
        N = 4
        etas = tuple(zeta_sample(rng) for _ in range(N))
        deltas = (DeltaAssignment("self_dual_pair", alpha=0.2, n=2),) * N
        chain = ChainSpec(2, grading10, ctx, ("V",) * N, etas, 1.1, deltas, "kappa")
        rep = check_ddr(chain, 1, 3, cache=cache)
        assert rep.passed, rep.residual


class TestCompatibility:
    def test_n2(self, ctx, grading, cache):
        rng = np.random.default_rng(57)
        chain = general_chain(ctx, grading, ("V", "V*"), rng)
        rep = check_qkz_compatibility(chain, 0, 1, cache=cache)
        assert rep.passed, rep.residual

    def test_n4_mixed(self, ctx, grading, cache):
        rng = np.random.default_rng(58)
        chain = general_chain(ctx, grading, ("V", "V*", "V", "V*"), rng)
        rep = check_qkz_compatibility(chain, 1, 2, cache=cache)
        assert rep.passed, rep.residual

    def test_degenerate_sanity_p_one(self, ctx, grading, cache):
        # p = 1 with identity twists: Lambda_i Lambda_j still compatible
        rng = np.random.default_rng(59)
        chain = general_chain(ctx, grading, ("V", "V"), rng, p=1.0)
        rep = check_qkz_compatibility(chain, 0, 1, cache=cache)
        assert rep.passed


class TestTransport:
    def test_identity_word(self, ctx, grading, cache):
        rng = np.random.default_rng(60)
        chain = general_chain(ctx, grading, ("V", "V*"), rng)
        phi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        out, order = transport_phi(chain, phi, [], cache)
        assert order == [0, 1]
        assert np.abs(out.reshape(-1) - phi).max() == 0.0

    def test_double_swap_is_identity(self, ctx, grading, cache):
        rng = np.random.default_rng(61)
        chain = general_chain(ctx, grading, ("V", "V*", "V", "V*"), rng)
        phi = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        out, order = transport_phi(chain, phi, [2, 2], cache)
        assert order == [0, 1, 2, 3]
        assert np.abs(out.reshape(-1) - phi).max() < 1e-12

    def test_exchange_relation(self, ctx, grading, cache):
        # applying one more swap factor advances the transport by one step
        rng = np.random.default_rng(62)
        chain = general_chain(ctx, grading, ("V", "V*", "V", "V*"), rng)
        phi = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        word = [0, 2]
        out1, order1 = transport_phi(chain, phi, word, cache)
        out2, order2 = transport_phi(chain, phi, word + [1], cache)
        from qkzkit.qkz import _rcheck_factor
        from qkzkit.tensorops import embedded_matmul
        a, b = order1[1], order1[2]
        rc = _rcheck_factor(chain, chain.kinds[a], chain.etas[a],
                            chain.kinds[b], chain.etas[b], cache)
        stepped = embedded_matmul(rc, 1, 2, chain.dims, out1.reshape(-1, 1)).reshape(-1)
        assert order2 == [order1[k] for k in (0, 2, 1, 3)]
        assert np.abs(stepped - out2.reshape(-1)).max() < 1e-12


class TestRegularizedProduct:
    def test_cancellation_matches_explicit_product_at_generic_args(self, ctx, grading, cache):
        # when the junction factors are regular the cancellation must be a no-op
        rng = np.random.default_rng(63)
        chain = general_chain(ctx, grading, ("V", "V*"), rng)
        a = lambda_product_regularized(chain, 1, chain, 0, cache)
        b = lambda_op(chain, 1, cache, verify_forms=False).data @ \
            lambda_op(chain, 0, cache, verify_forms=False).data
        assert np.abs(a - b).max() < 1e-11
