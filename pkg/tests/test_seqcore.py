import math

import pytest
from hypothesis import given, strategies as st

from tensortract import (
    ConstantOne,
    DoubleExpPower,
    EigenSeq,
    EventuallyZero,
    ExpPower,
    ExtLogMag,
    InvalidIndex,
    IterLog,
    LogPower,
    PowerLaw,
    SequenceError,
    Tabulated,
    TripleExp,
    WeightSeq,
    eval_G,
    eval_L,
    family_from_descriptor,
    load_log_table,
)
from tensortract.seqcore import dump_log_table

EIGEN_FAMILIES = [
    PowerLaw(2.0),
    PowerLaw(0.5),
    ExpPower(1.0, 1.0),
    ExpPower(0.3, 0.5),
    ExpPower(math.log(2.0), 1.0),
    DoubleExpPower(1.0, 1.0),
    DoubleExpPower(0.5, 2.0),
    TripleExp(1.0),
    LogPower(2.0),
    LogPower(1.5),
    IterLog(),
    Tabulated((0.0, 0.5, 1.5, 1.5, math.inf)),
]


class TestExtLogMag:
    def test_ordering_reverses_linear(self):
        a = ExtLogMag.from_linear(0.9)
        b = ExtLogMag.from_linear(0.1)
        assert a < b  # larger x means smaller log(1/x)

    def test_addition_is_multiplication(self):
        a = ExtLogMag.from_linear(0.5)
        b = ExtLogMag.from_linear(0.25)
        assert math.isclose((a + b).to_linear(), 0.125, rel_tol=1e-12)

    def test_zero_and_one(self):
        assert ExtLogMag.from_linear(1.0) == 0.0
        z = ExtLogMag.from_linear(0.0)
        assert z.is_zero and math.isinf(z)
        assert z.to_linear() == 0.0

    def test_infinity_absorbs(self):
        assert math.isinf(ExtLogMag(math.inf) + ExtLogMag(3.0))

    def test_rejects_negative_and_nan(self):
        with pytest.raises(ValueError):
            ExtLogMag(-1e-9)
        with pytest.raises(ValueError):
            ExtLogMag(math.nan)
        with pytest.raises(ValueError):
            ExtLogMag.from_linear(1.5)

    @given(st.floats(min_value=1e-300, max_value=1.0),
           st.floats(min_value=1e-300, max_value=1.0))
    def test_add_matches_product(self, x, y):
        got = (ExtLogMag.from_linear(x) + ExtLogMag.from_linear(y))
        assert math.isclose(float(got), -math.log(x) - math.log(y), rel_tol=1e-12, abs_tol=1e-12)


class TestEvaluation:
    def test_exp_power_first_is_one(self):
        assert eval_L(EigenSeq(ExpPower(1.0, 1.0)), 1) == 0.0

    def test_power_law_value(self):
        got = eval_L(EigenSeq(PowerLaw(2.0)), 10)
        assert got == 2.0 * math.log(10.0)

    def test_triple_exp_saturates(self):
        assert math.isinf(eval_L(EigenSeq(TripleExp(1.0)), 8))

    def test_constant_one_weight(self):
        assert eval_G(WeightSeq(ConstantOne()), 17) == 0.0

    def test_exp_weight_value(self):
        # gamma_k = exp(-(k-1)) so log(1/gamma_4) = 3
        assert eval_G(WeightSeq(ExpPower(1.0, 1.0)), 4) == 3.0

    def test_eventually_zero_tail(self):
        seq = WeightSeq(EventuallyZero(3, (0.0, math.log(2.0))))
        assert math.isinf(eval_G(seq, 5))
        assert eval_G(seq, 2) == math.log(2.0)

    @pytest.mark.parametrize("bad", [0, -3])
    def test_invalid_index(self, bad):
        with pytest.raises(InvalidIndex):
            eval_L(EigenSeq(PowerLaw(1.0)), bad)
        with pytest.raises(InvalidIndex):
            eval_G(WeightSeq(ConstantOne()), bad)

    def test_non_integer_index_rejected(self):
        with pytest.raises(InvalidIndex):
            EigenSeq(PowerLaw(1.0)).L(2.0)


class TestInvariants:
    @pytest.mark.parametrize("fam", EIGEN_FAMILIES, ids=lambda f: repr(f))
    def test_monotone_nondecreasing(self, fam):
        seq = EigenSeq(fam)
        js = sorted({1, 2, 3, 4, 7, 10, 31, 100, 316, 1000, 31622, 10**6})
        vals = [seq.L(j) for j in js]
        for a, b in zip(vals, vals[1:]):
            assert a <= b

    @pytest.mark.parametrize("fam", [f for f in EIGEN_FAMILIES
                                     if not isinstance(f, Tabulated)],
                             ids=lambda f: repr(f))
    def test_first_value_is_exactly_zero(self, fam):
        assert EigenSeq(fam).L(1) == 0.0

    def test_saturation_beats_every_finite_budget(self):
        v = EigenSeq(TripleExp(2.0)).L(100)
        assert math.isinf(v)
        for budget in (1e-300, 1.0, 1e300):
            assert not (v < budget)

    def test_weight_monotone(self):
        seq = WeightSeq(DoubleExpPower(1.0, 1.0))
        vals = [seq.G(k) for k in range(1, 40)]
        assert vals == sorted(vals)
        assert vals[0] == 0.0


class TestConstruction:
    def test_rejects_nonmonotone_table(self):
        with pytest.raises(SequenceError):
            Tabulated((0.0, 1.0, 0.5))

    def test_rejects_negative_table(self):
        with pytest.raises(SequenceError):
            Tabulated((-0.5, 1.0))

    def test_rejects_bad_params(self):
        with pytest.raises(SequenceError):
            PowerLaw(0.0)
        with pytest.raises(SequenceError):
            ExpPower(-1.0, 1.0)
        with pytest.raises(SequenceError):
            LogPower(1.0)  # needs beta > 1
        with pytest.raises(SequenceError):
            TripleExp(math.inf)

    def test_eigen_rejects_weight_only_families(self):
        with pytest.raises(SequenceError):
            EigenSeq(ConstantOne())
        with pytest.raises(SequenceError):
            EigenSeq(EventuallyZero(3, (0.0, 1.0)))

    def test_eigen_rejects_vanishing_second_value(self):
        with pytest.raises(SequenceError):
            EigenSeq(Tabulated((0.0,)))
        with pytest.raises(SequenceError):
            EigenSeq(Tabulated((0.0, math.inf)))

    def test_eventually_zero_prefix_length(self):
        with pytest.raises(SequenceError):
            EventuallyZero(4, (0.0,))

    def test_iterlog_prefix_junction(self):
        with pytest.raises(SequenceError):
            IterLog((0.0, 5.0))  # prefix above the tail value at j = 3

    def test_unnormalized_table_allowed(self):
        seq = EigenSeq(Tabulated((math.e, 10.0)))
        assert seq.L(1) == math.e

    @given(st.lists(st.floats(min_value=0.0, max_value=50.0), min_size=2, max_size=12))
    def test_sorted_tables_always_accepted(self, vals):
        Tabulated(tuple(sorted(vals)))


class TestSerialization:
    def test_descriptor_round_trip(self):
        for fam in EIGEN_FAMILIES + [ConstantOne(), EventuallyZero(3, (0.0, 1.0))]:
            desc = fam.descriptor()
            assert family_from_descriptor(desc) == fam

    def test_unknown_family_rejected(self):
        with pytest.raises(SequenceError):
            family_from_descriptor({"family": "mystery"})

    def test_table_file_round_trip(self, tmp_path):
        values = (0.0, 0.1 + 0.2, math.pi, 1e300, math.inf)
        path = tmp_path / "table.txt"
        dump_log_table(values, path)
        back = load_log_table(path)
        assert back == values  # bit-identical via repr round trip

    def test_table_file_comments_and_errors(self, tmp_path):
        path = tmp_path / "t.txt"
        path.write_text("# header\n1 0.0\n2 0.5 # trailing comment\n\n3 1.5\n")
        assert load_log_table(path) == (0.0, 0.5, 1.5)
        path.write_text("1 0.0\n3 0.5\n")
        with pytest.raises(SequenceError):
            load_log_table(path)
        path.write_text("1 0.5\n2 0.1\n")
        with pytest.raises(SequenceError):
            load_log_table(path)
