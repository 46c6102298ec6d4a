import random

import numpy as np
import pytest

from contile.bitmat import BinaryMatrix, IndexSet, hamming_error, is_cyclic_under, is_unimodal_under, reconstruct
from contile.factorizer import (
    StepState,
    alternate,
    factorize,
    format_report,
    obmf_step,
    parse_report,
    seeds_all,
    seeds_sample,
    step_weights,
    symmetric_step_weights,
)
from contile.oracle import brute_best_row, brute_rank1
from contile.synth import BlockSpec, gen_blocks

from conftest import random_binary


def tile_matrix(n, m, rows, cols):
    dense = np.zeros((n, m), dtype=bool)
    dense[np.ix_(rows, cols)] = True
    return BinaryMatrix(dense)


class TestStepWeights:
    def test_identity_single_row(self):
        d = BinaryMatrix.identity(2)
        st = StepState.initial(d, "plain")
        assert step_weights(d, st, [0]).tolist() == [1, -1]

    def test_fully_covered_is_zero(self):
        d = BinaryMatrix(np.ones((3, 3), dtype=bool))
        st = StepState.initial(d, "plain")
        st.mark((0, 1, 2), (0, 1, 2))
        assert step_weights(d, st, [0, 1, 2]).tolist() == [0, 0, 0]

    def test_full_column(self):
        d = tile_matrix(3, 3, (0, 1, 2), (1,))
        st = StepState.initial(d, "plain")
        w = step_weights(d, st, [0, 1, 2])
        assert w[1] == 3 and w[0] == -3

    def test_empty_fixed_rejected(self):
        d = BinaryMatrix.identity(2)
        with pytest.raises(ValueError):
            step_weights(d, StepState.initial(d, "plain"), [])


class TestSymmetricWeights:
    def test_cell_and_transpose_count(self):
        d = BinaryMatrix(np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=bool))
        st = StepState.initial(d, "sym")
        w = symmetric_step_weights(d, st, [0])
        assert w[1] == 2  # D(0,1) and D(1,0) both count

    def test_diagonal_counts_twice(self):
        d = BinaryMatrix(np.array([[0, 1], [1, 0]], dtype=bool))
        st = StepState.initial(d, "sym")
        w = symmetric_step_weights(d, st, [0])
        assert w[0] == -2  # zero diagonal cell appears in both terms

    def test_non_square_rejected(self):
        d = BinaryMatrix.zeros(2, 3)
        with pytest.raises(ValueError):
            StepState.initial(d, "sym")

    def test_step_optimal_for_surrogate(self, rng):
        from conftest import compatible_and_border_sets

        for _ in range(25):
            n = 5
            half = random_binary(rng, n, n, 0.4)
            d = BinaryMatrix(half | half.T)
            st = StepState.initial(d, "sym")
            fixed = tuple(sorted(rng.sample(range(n), rng.randint(1, n))))
            w = symmetric_step_weights(d, st, fixed)
            s, g = obmf_step(d, st, fixed)
            comp, _ = compatible_and_border_sets(st.col_tree)
            assert g == max(sum(int(w[u]) for u in x) for x in comp)


class TestObmfStep:
    def test_uncovered_block(self):
        d = tile_matrix(4, 5, (0, 1), (1, 2, 3))
        st = StepState.initial(d, "plain")
        s, g = obmf_step(d, st, (0, 1))
        assert s == (1, 2, 3) and g == 6

    def test_all_covered(self):
        d = BinaryMatrix(np.ones((2, 2), dtype=bool))
        st = StepState.initial(d, "plain")
        st.mark((0, 1), (0, 1))
        s, g = obmf_step(d, st, (0, 1))
        assert s == () and g == 0

    def test_matches_brute_force(self, rng):
        for _ in range(80):
            n, m = rng.randint(3, 6), rng.randint(3, 6)
            d = BinaryMatrix(random_binary(rng, n, m))
            st = StepState.initial(d, "plain")
            for _ in range(rng.randint(0, 3)):
                r = tuple(sorted(rng.sample(range(n), rng.randint(1, n))))
                c = tuple(sorted(rng.sample(range(m), rng.randint(1, m))))
                if st.row_tree.admits(r) and st.col_tree.admits(c):
                    st.row_tree.reduce(r)
                    st.col_tree.reduce(c)
                    st.mark(r, c)
            fixed = tuple(sorted(rng.sample(range(n), rng.randint(1, n))))
            _, g = obmf_step(d, st, fixed)
            _, g2 = brute_best_row(d, st.cover, fixed, st.col_tree)
            assert g == g2


class TestAlternate:
    def test_single_tile_fixpoint(self):
        d = tile_matrix(5, 6, (1, 2, 3), (0, 1))
        st = StepState.initial(d, "plain")
        res = alternate(d, st, (0,))
        assert res.rows == (1, 2, 3) and res.cols == (0, 1)
        assert res.gain == 6

    def test_all_zero_matrix(self):
        d = BinaryMatrix.zeros(4, 4)
        st = StepState.initial(d, "plain")
        res = alternate(d, st, (2,))
        assert res.rows == () and res.cols == () and res.gain == 0

    def test_half_step_gains_non_decreasing(self, rng):
        for _ in range(25):
            d = BinaryMatrix(random_binary(rng, 8, 8, 0.35))
            st = StepState.initial(d, "plain")
            res = alternate(d, st, (rng.randrange(8),))
            assert res.step_gains == sorted(res.step_gains)


class TestFactorize:
    def test_single_tile_rank1(self):
        d = tile_matrix(6, 6, (2, 3), (1, 4, 5))
        f = factorize(d, 1)
        assert f.error == 0 and f.rank_used == 1

    def test_early_stop(self):
        d = tile_matrix(6, 6, (2, 3), (1, 4, 5))
        f = factorize(d, 4)
        assert f.rank_used == 1 and f.error == 0

    def test_invalid_rank(self):
        with pytest.raises(ValueError):
            factorize(BinaryMatrix.identity(2), 0)

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            factorize(BinaryMatrix.identity(2), 1, variant="spiral")

    def test_blocks_exact_all_variants(self):
        d = gen_blocks(BlockSpec(3, 6, 2))
        for variant in ("plain", "cyclic", "sym", "cyclic-sym"):
            f = factorize(d, 3, variant=variant)
            assert f.error == 0, variant

    def test_validity_and_self_consistency(self, rng):
        for variant in ("plain", "cyclic", "sym", "cyclic-sym"):
            for _ in range(6):
                n = rng.randint(4, 9)
                dense = random_binary(rng, n, n, 0.4)
                if variant in ("sym", "cyclic-sym"):
                    dense = dense | dense.T
                d = BinaryMatrix(dense)
                f = factorize(d, 3, variant=variant)
                rows_sets = [r for r, _ in f.factors]
                cols_sets = [c for _, c in f.factors]
                check = is_cyclic_under if variant.startswith("cyclic") else is_unimodal_under
                assert check(rows_sets, f.row_order)
                assert check(cols_sets, f.col_order)
                if variant in ("sym", "cyclic-sym"):
                    assert check(rows_sets + cols_sets, f.node_order)
                assert f.error == hamming_error(d, reconstruct(f))

    def test_round_errors_non_increasing(self, rng):
        for _ in range(8):
            d = BinaryMatrix(random_binary(rng, 12, 12, 0.4))
            f = factorize(d, 5)
            errs = [d.nnz] + f.round_errors
            assert all(a >= b for a, b in zip(errs, errs[1:]))

    def test_deterministic(self):
        rng = random.Random(5)
        d = BinaryMatrix(random_binary(rng, 10, 10, 0.4))
        f1 = factorize(d, 4)
        f2 = factorize(d, 4)
        assert format_report(f1) == format_report(f2)

    def test_threads_match_serial(self):
        rng = random.Random(6)
        d = BinaryMatrix(random_binary(rng, 12, 12, 0.4))
        f1 = factorize(d, 3, threads=1)
        f4 = factorize(d, 3, threads=4)
        assert format_report(f1) == format_report(f4)

    def test_rank1_never_beats_brute_force(self, rng):
        gaps = []
        for _ in range(10):
            d = BinaryMatrix(random_binary(rng, 8, 8, 0.4))
            f = factorize(d, 1)
            _, _, best = brute_rank1(d)
            assert f.error >= best
            gaps.append(f.error - best)
        assert min(gaps) >= 0  # distribution recorded; zero gap is common
        assert gaps.count(0) >= 5

    def test_cyclic_step_dominates_plain_step(self, rng):
        for _ in range(20):
            d = BinaryMatrix(random_binary(rng, 7, 7, 0.4))
            plain = StepState.initial(d, "plain")
            cyc = StepState.initial(d, "cyclic")
            fixed = tuple(sorted(rng.sample(range(7), rng.randint(1, 7))))
            _, g_plain = obmf_step(d, plain, fixed)
            _, g_cyc = obmf_step(d, cyc, fixed)
            assert g_cyc >= g_plain


class TestSeeds:
    def test_all_singletons(self):
        d = BinaryMatrix.zeros(3, 5)
        s = seeds_all(d)
        assert [tuple(x) for x in s] == [(0,), (1,), (2,), (3,), (4,)]

    def test_sample_count_is_floor(self):
        d = BinaryMatrix.zeros(2, 348)
        assert len(seeds_sample(d, 0.1, 0)) == 34

    def test_sample_full_fraction_equals_all(self):
        d = BinaryMatrix.zeros(2, 9)
        assert [tuple(s) for s in seeds_sample(d, 1.0, 3)] == [tuple(s) for s in seeds_all(d)]

    def test_sample_deterministic(self):
        d = BinaryMatrix.zeros(2, 40)
        a = [tuple(s) for s in seeds_sample(d, 0.25, 7)]
        b = [tuple(s) for s in seeds_sample(d, 0.25, 7)]
        assert a == b

    def test_fraction_range(self):
        d = BinaryMatrix.zeros(2, 5)
        for bad in (0.0, -0.1, 1.5):
            with pytest.raises(ValueError):
                seeds_sample(d, bad, 0)


class TestReport:
    def test_exact_shape(self):
        f = factorize(tile_matrix(3, 3, (0, 1), (1, 2)), 1)
        lines = format_report(f).splitlines()
        assert lines[0] == "VARIANT plain"
        assert lines[1] == "RANK 1/1"
        assert lines[2].startswith("ERROR 0 RELERR 0.0000")
        assert lines[3].startswith("ROW-ORDER ")
        assert lines[4].startswith("COL-ORDER ")
        assert lines[5].startswith("FACTOR 0 ROWS ")

    def test_symmetric_single_order_line(self):
        d = gen_blocks(BlockSpec(2, 3, 1))
        f = factorize(d, 2, variant="sym")
        text = format_report(f)
        assert "NODE-ORDER" in text and "ROW-ORDER" not in text

    def test_round_trip(self, rng):
        d = BinaryMatrix(random_binary(rng, 7, 9, 0.4))
        f = factorize(d, 3)
        parsed = parse_report(format_report(f))
        assert format_report(parsed) == format_report(f)

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_report("hello\nworld\n")
