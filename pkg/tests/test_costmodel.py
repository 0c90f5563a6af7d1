"""
costmodel 테스트: 예측, reconcile, 조언표, 보정 상수
"""
import pytest

from app.core.costmodel import (
    COMPLEXITY_TABLE,
    advise,
    advise_table,
    calibrate_switch_constant,
    digit_count,
    equality_depth,
    estimate_ms,
    predict,
    predict_scenario,
    reconcile,
)
from app.core.emulator import bit_mul
from app.core.workloads import run_workload
from app.domain.errors import ScenarioMismatch, UnsupportedMethod
from app.domain.param_definition import BIT_WIDTHS, DEFAULT_SWITCH_CONSTANT
from app.domain.schemas import (
    AdvisorQuery,
    Calibration,
    CostLedger,
    Method,
    OpMix,
    ScenarioMix,
    ScenarioPrediction,
    WorkloadKind,
    WorkloadSpec,
)
from tests.helpers import make_ctx


class TestPredict:
    def test_encoding_b8(self):
        p = predict(Method.ENCODING, 8)
        assert (p.p, p.r, p.d) == (5, 4, 4)
        assert p.nonlinear_depth_levels == 8
        assert p.linear_depth == 1

    def test_digit_count(self):
        assert digit_count(8, 5) == 4
        assert digit_count(16, 17) == 4
        assert digit_count(6, 3) == 4
        assert digit_count(2, 5) == 1

    def test_scheme_switch_doubles_per_bit(self):
        b6 = predict(Method.SCHEME, 6)
        b8 = predict(Method.SCHEME, 8)
        assert b8.switch_units / b6.switch_units == 4
        assert b8.switch_seconds == pytest.approx(DEFAULT_SWITCH_CONSTANT * 256)
        assert b8.nonlinear_depth == 0

    def test_tfhe_gates(self):
        p = predict(Method.TFHE, 12)
        assert p.nonlinear_gates == 12
        assert p.linear_gates == 144
        assert p.switch_units == 0

    @pytest.mark.parametrize("b", BIT_WIDTHS)
    def test_bit_mul_gates_track_quadratic(self, b):
        ctx = make_ctx(Method.TFHE, b)
        bit_mul(ctx, ctx.encrypt_bits([3]), ctx.encrypt_bits([5]))
        ratio = ctx.ledger.gate_bootstraps / predict(Method.TFHE, b).linear_gates
        assert 0.25 <= ratio <= 4

    def test_bit_mul_gate_counts(self):
        gates = {}
        for b in BIT_WIDTHS:
            ctx = make_ctx(Method.TFHE, b)
            bit_mul(ctx, ctx.encrypt_bits([3]), ctx.encrypt_bits([5]))
            gates[b] = ctx.ledger.gate_bootstraps
        # 부분곱 AND b(b+1)/2 + 폭 1..b-1 리플 덧셈기
        assert gates == {6: 81, 8: 155, 12: 375, 16: 691}
        assert 3.5 <= gates[16] / gates[8] <= 4.5

    @pytest.mark.parametrize("method", list(Method))
    def test_ledger_counters_non_decreasing_in_bits(self, method):
        inputs = {"A": [3], "B": [2], "C": [5]}
        ledgers = [
            run_workload(WorkloadSpec(kind=WorkloadKind.W1, method=method, b=b, slot_count=1), inputs).ledger
            for b in BIT_WIDTHS
        ]
        for smaller, larger in zip(ledgers, ledgers[1:]):
            for name, value in smaller.counters().items():
                assert larger.counters()[name] >= value, name

    def test_unsupported_method(self):
        with pytest.raises(UnsupportedMethod):
            predict("ckks", 8)

    def test_equality_depth(self):
        # 625 미만 값은 5진 4자리
        assert equality_depth(5, 624) == 2 + 2
        assert equality_depth(17, 3) == 4

    def test_complexity_table_covers_general_methods(self):
        general = {row.method for row in COMPLEXITY_TABLE if row.general}
        assert {"BitwiseTFHE", "SchemeSwitching", "EncodingSwitching"} <= general
        assert len(COMPLEXITY_TABLE) == 7


class TestScenario:
    def test_tfhe_lanes_multiply_gates(self):
        mix = ScenarioMix(compares=1, lanes=2)
        pred = predict_scenario("x", Method.TFHE, 8, mix)
        assert pred.gate_bootstraps == 16
        assert pred.nonscalar_mults == 0

    def test_scheme_counts_switches(self):
        mix = ScenarioMix(muls=1, compares=2, equalities=1, mul_chain=1)
        pred = predict_scenario("x", Method.SCHEME, 8, mix)
        assert pred.switches == 3
        assert pred.nonscalar_mults == 1
        assert pred.max_depth == 1

    def test_scheme_lanes_multiply_gates(self):
        mix = ScenarioMix(compares=1, lanes=1)
        one = predict_scenario("x", Method.SCHEME, 8, mix)
        many = predict_scenario("x", Method.SCHEME, 8, mix.model_copy(update={"lanes": 100}))
        assert many.gate_bootstraps == 100 * one.gate_bootstraps
        assert many.switches == one.switches

    def test_scheme_gate_ratio_independent_of_lanes(self):
        ratios = []
        for lanes in (1, 10):
            result = run_workload(WorkloadSpec(kind=WorkloadKind.W2, method=Method.SCHEME, b=8, slot_count=lanes))
            ratios.append(result.ledger.gate_bootstraps / result.predicted["gate_bootstraps"])
        assert ratios[0] == pytest.approx(ratios[1])

    def test_capped_depth(self):
        mix = ScenarioMix(compares=10, compare_chain=10, capped=True)
        pred = predict_scenario("x", Method.ENCODING, 8, mix, depth_budget=10)
        assert pred.max_depth == 10


class TestReconcile:
    def _prediction(self, **counters) -> ScenarioPrediction:
        return ScenarioPrediction(scenario_id="w1/encoding/b8/n1/r0", method=Method.ENCODING, b=8, **counters)

    def test_zero_counters(self):
        row = reconcile(self._prediction(), CostLedger(), "w1/encoding/b8/n1/r0")
        assert all(v == 0.0 for v in row.ratios.values())
        assert row.status == "pass"

    def test_ratios(self):
        row = reconcile(self._prediction(nonscalar_mults=100, max_depth=8),
                        CostLedger(nonscalar_mults=50, max_depth=8), "w1/encoding/b8/n1/r0")
        assert row.ratios["nonscalar_mults"] == 0.5
        assert row.ratios["max_depth"] == 1.0
        assert row.depth_ok

    def test_depth_fail(self):
        row = reconcile(self._prediction(max_depth=5), CostLedger(max_depth=10), "w1/encoding/b8/n1/r0")
        assert not row.depth_ok
        assert row.status == "fail"

    def test_mults_warn(self):
        row = reconcile(self._prediction(nonscalar_mults=10, max_depth=3),
                        CostLedger(nonscalar_mults=50, max_depth=3), "w1/encoding/b8/n1/r0")
        assert row.depth_ok
        assert row.status == "warn"

    def test_unpredicted_counter_warns(self):
        row = reconcile(self._prediction(max_depth=3), CostLedger(switches=2), "w1/encoding/b8/n1/r0")
        assert row.status == "warn"

    def test_key_mismatch(self):
        with pytest.raises(ScenarioMismatch):
            reconcile(self._prediction(), CostLedger(), "w2/encoding/b8/n1/r0")


class TestAdvise:
    def test_table_has_twelve_cells(self):
        table = advise_table()
        assert len(table) == 12
        assert len({(q.op_mix, q.simd_useful, q.exact_required) for q, _ in table}) == 12

    def test_linear_only(self):
        rec = advise(AdvisorQuery(op_mix=OpMix.LINEAR, simd_useful=True, exact_required=True))
        assert rec.family == "word-wise"
        assert "CKKS" not in rec.methods
        loose = advise(AdvisorQuery(op_mix=OpMix.LINEAR, simd_useful=False, exact_required=False))
        assert "CKKS" in loose.methods

    def test_no_simd_goes_bitwise(self):
        for mix in (OpMix.NONLINEAR, OpMix.MIXED):
            rec = advise(AdvisorQuery(op_mix=mix, simd_useful=False, exact_required=True))
            assert rec.methods == ["TFHE"]

    def test_simd_nonlinear(self):
        rec = advise(AdvisorQuery(op_mix=OpMix.NONLINEAR, simd_useful=True, exact_required=True))
        assert "XCMP" in rec.methods

    def test_approximate_mixed(self):
        rec = advise(AdvisorQuery(op_mix=OpMix.MIXED, simd_useful=True, exact_required=False))
        assert rec.methods == ["CKKS"]

    def test_exact_simd_mixed(self):
        rec = advise(AdvisorQuery(op_mix=OpMix.MIXED, simd_useful=True, exact_required=True))
        assert rec.methods == ["EncodingSwitching", "SchemeSwitching"]
        assert rec.note.startswith("Encoding Switching preferred at b ≥ 8")
        assert "15.5 s vs 32.1 s" in rec.note
        assert "2.1x" in rec.note


class TestCalibration:
    def test_least_squares_constant(self):
        c = calibrate_switch_constant()
        assert c == pytest.approx(0.638, abs=1e-3)
        assert abs(c - DEFAULT_SWITCH_CONSTANT) / DEFAULT_SWITCH_CONSTANT < 0.25

    def test_exact_fit(self):
        assert calibrate_switch_constant([(4, 16.0), (6, 64.0)]) == pytest.approx(1.0)

    def test_empty_points(self):
        with pytest.raises(ValueError):
            calibrate_switch_constant([])

    def test_estimate_ms(self):
        cal = Calibration(ms_per_gate_bootstrap=1.0, s_per_switch_unit=0.5, ms_per_nonscalar_mult=2.0,
                          ms_per_rotation=3.0, ms_per_refresh=4.0)
        ledger = CostLedger(gate_bootstraps=10, switch_cost_units=2, nonscalar_mults=5, rotations=1, refreshes=1)
        assert estimate_ms(ledger, cal) == pytest.approx(10 + 1000 + 10 + 3 + 4)
