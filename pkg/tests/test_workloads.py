"""
워크로드 W1-W3 테스트
"""
import numpy as np
import pytest

from app.core.workloads import (
    amortize,
    draw_inputs,
    run_minmax,
    run_w1,
    run_w2,
    run_w3,
    run_workload,
)
from app.domain.param_definition import BIT_WIDTHS
from app.domain.schemas import CostLedger, Method, WorkloadKind, WorkloadResult, WorkloadSpec
from tests.helpers import ALL_METHODS


def spec(kind: WorkloadKind, method: Method, b: int = 8, slots: int = 1, **kw) -> WorkloadSpec:
    return WorkloadSpec(kind=kind, method=method, b=b, slot_count=slots, **kw)


@pytest.mark.parametrize("method", ALL_METHODS)
class TestExamples:
    def test_w1(self, method):
        result = run_w1(spec(WorkloadKind.W1, method, slots=2), {"A": [3, 0], "B": [4, 5], "C": [20, 0]})
        assert result.outputs == [1, 0]
        assert result.oracle_match

    def test_w2(self, method):
        result = run_w2(spec(WorkloadKind.W2, method, slots=2), {"A": [1, 9], "B": [2, 9], "C": [7, 7]})
        assert result.outputs == [7, 0]
        assert result.oracle_match

    def test_w3(self, method):
        result = run_w3(spec(WorkloadKind.W3, method, slots=2),
                        {"A": [3, 3], "B": [4, 4], "C": [20, 20], "D": [9, 0]})
        assert result.outputs == [9, 0]
        assert result.oracle_match

    def test_minmax(self, method, rng):
        a, b = rng.integers(0, 256, 20), rng.integers(0, 256, 20)
        result = run_minmax(spec(WorkloadKind.W2, method, slots=20), {"A": a, "B": b})
        assert result.outputs == np.minimum(a, b).tolist()

    @pytest.mark.parametrize("kind", list(WorkloadKind))
    @pytest.mark.parametrize("b", [6, 8])
    def test_random_sweep(self, method, kind, b):
        result = run_workload(spec(kind, method, b=b, slots=32))
        assert result.oracle_match
        assert len(result.outputs) == 32


class TestLedger:
    def test_tfhe_w2_cheaper_than_w1(self):
        w1 = run_workload(spec(WorkloadKind.W1, Method.TFHE))
        w2 = run_workload(spec(WorkloadKind.W2, Method.TFHE))
        assert w2.ledger.gate_bootstraps < w1.ledger.gate_bootstraps

    def test_tfhe_gates_scale_with_lanes(self):
        one = run_workload(spec(WorkloadKind.W1, Method.TFHE, slots=1))
        many = run_workload(spec(WorkloadKind.W1, Method.TFHE, slots=10))
        assert many.ledger.gate_bootstraps == 10 * one.ledger.gate_bootstraps

    def test_simd_costs_flat_in_slots(self):
        one = run_workload(spec(WorkloadKind.W3, Method.ENCODING, slots=1))
        many = run_workload(spec(WorkloadKind.W3, Method.ENCODING, slots=64))
        assert many.ledger.nonscalar_mults == one.ledger.nonscalar_mults

    def test_scheme_switch_per_compare(self):
        result = run_workload(spec(WorkloadKind.W1, Method.SCHEME))
        assert result.ledger.switches == 1
        assert result.ledger.switch_cost_units == 256

    @pytest.mark.parametrize("b", BIT_WIDTHS)
    def test_encoding_w3_fits_default_budget(self, b):
        result = run_workload(spec(WorkloadKind.W3, Method.ENCODING, b=b, slots=4))
        assert result.oracle_match
        assert result.ledger.refreshes == 0
        assert result.ledger.range_overflows == 0


class TestInputs:
    def test_draw_is_deterministic(self):
        s = spec(WorkloadKind.W1, Method.TFHE, slots=8, seed=7)
        first, second = draw_inputs(s), draw_inputs(s)
        assert all((first[k] == second[k]).all() for k in first)
        assert first["A"].max() < 16

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            run_w1(spec(WorkloadKind.W1, Method.TFHE), {"A": [16], "B": [1], "C": [1]})

    def test_rejects_lane_mismatch(self):
        with pytest.raises(ValueError):
            run_w2(spec(WorkloadKind.W2, Method.TFHE, slots=2), {"A": [1], "B": [1], "C": [1]})

    def test_rejects_unknown_width(self):
        with pytest.raises(ValueError):
            spec(WorkloadKind.W1, Method.TFHE, b=10)


class TestAmortize:
    def _result(self, method: Method, slots: int) -> WorkloadResult:
        return WorkloadResult(
            spec=spec(WorkloadKind.W1, method, slots=slots),
            outputs=[],
            expected=[],
            ledger=CostLedger(nonscalar_mults=100, gate_bootstraps=40),
            oracle_match=True,
        )

    def test_simd_divides(self):
        per_lane = amortize(self._result(Method.ENCODING, 50), 50)
        assert per_lane["nonscalar_mults"] == 2.0

    def test_tfhe_unchanged(self):
        per_lane = amortize(self._result(Method.TFHE, 50), 50)
        assert per_lane["gate_bootstraps"] == 40.0

    def test_round_trip(self):
        result = self._result(Method.SCHEME, 8)
        per_lane = amortize(result, 8)
        assert per_lane["nonscalar_mults"] * 8 == result.ledger.nonscalar_mults
        assert per_lane["model_estimated_ms"] > 0

    def test_invalid_slots(self):
        with pytest.raises(ValueError):
            amortize(self._result(Method.SCHEME, 8), 0)
