"""Tests for instance generation, oracles, persistence and the trace recorder."""

import json

import numpy as np
import pytest

from jadm_bcd.JacobiSolver import StopRule, run_jacobi
from jadm_bcd.Tracker import CSV_COLUMNS, IterationTrace, Tracker
from jadm_bcd.cost import JointPoint, cost
from jadm_bcd.instances import (
    InstanceSpec,
    factor_rsl,
    generate_instance,
    initial_point,
    perturbed_point,
)
from jadm_bcd.linalg import dagger
from jadm_bcd.cli import solve_problem
from jadm_bcd.oracles import fd_gradient_oracle, grid_oracle, independent_cost, run_checks
from jadm_bcd.rotations import DiagonalCoeffs, GammaForm, TriangularCoeffs
from jadm_bcd.storage import load_point, load_problem, save_point, save_problem
from jadm_bcd.utils import (
    ContractError,
    DimensionError,
    NotInRslError,
    format_response,
    from_pairs,
    spawn_rngs,
    to_pairs,
)


@pytest.mark.unit
class TestUtilsUnit:
    """Response dicts, seeded streams and the [re, im] layout."""

    def test_format_response(self):
        assert format_response(True, {"a": 1}) == {"success": True, "result": {"a": 1}}
        assert format_response(True) == {"success": True}
        assert format_response(False, error="boom") == {"success": False, "error": "boom"}

    def test_streams_are_reproducible_and_distinct(self):
        a, b = spawn_rngs(5), spawn_rngs(5)
        assert a["init"].standard_normal() == b["init"].standard_normal()
        c = spawn_rngs(5)
        assert c["init"].standard_normal() != c["noise"].standard_normal()

    def test_pairs_layout(self):
        a = np.array([[1 + 2j, 3.0]])
        assert to_pairs(a) == [[[1.0, 2.0], [3.0, 0.0]]]
        assert np.array_equal(from_pairs(to_pairs(a)), a)
        with pytest.raises(DimensionError):
            from_pairs([[1.0, 2.0, 3.0]])


@pytest.mark.unit
class TestInstancesUnit:
    """Synthetic instances and starting points."""

    def test_spec_validation(self):
        with pytest.raises(ContractError):
            InstanceSpec(n=2, m=3)
        with pytest.raises(ContractError):
            InstanceSpec(dagger="X")
        spec = InstanceSpec.from_dict({"n": 5, "m": 2, "unused": 1})
        assert (spec.n, spec.m) == (5, 2)
        assert spec.to_dict()["L"] == 5

    def test_exact_instance_is_diagonalized_by_truth(self, dagger_mode):
        problem, truth = generate_instance(InstanceSpec(n=6, m=3, L=4, dagger=dagger_mode, seed=2))
        assert cost(problem, truth) < 1e-14
        assert np.allclose(problem.matrices, dagger(problem.matrices, dagger_mode))

    def test_seed_determines_instance(self):
        a, _ = generate_instance(InstanceSpec(seed=11))
        b, _ = generate_instance(InstanceSpec(seed=11))
        c, _ = generate_instance(InstanceSpec(seed=12))
        assert np.array_equal(a.matrices, b.matrices)
        assert not np.allclose(a.matrices, c.matrices)

    def test_noise_moves_the_optimum_off_zero(self):
        problem, truth = generate_instance(InstanceSpec(n=4, m=4, L=3, noise=0.1, seed=2))
        assert cost(problem, truth) > 1e-6

    def test_real_instance_has_real_matrices(self):
        problem, truth = generate_instance(InstanceSpec(n=5, m=3, real=True, seed=2))
        assert np.max(np.abs(problem.matrices.imag)) == 0.0
        assert np.max(np.abs(truth.u.u.imag)) < 1e-12

    def test_factor_rsl_rejects_unnormalized(self, rng):
        y = rng.standard_normal((4, 2)) * 3.0
        with pytest.raises(NotInRslError):
            factor_rsl(y)

    def test_initial_points(self):
        omega = initial_point("identity", 5, 3)
        assert np.array_equal(omega.u.u, np.eye(5)[:, :3])
        assert np.array_equal(omega.x.x, np.eye(3))
        r1 = initial_point("random", 5, 3, seed=4)
        r2 = initial_point("random", 5, 3, seed=4)
        assert np.array_equal(r1.u.u, r2.u.u)
        with pytest.raises(ContractError):
            initial_point("zeros", 5, 3)

    def test_perturbed_point_stays_close(self, exact_instance):
        _, truth = exact_instance
        moved = perturbed_point(truth, 1e-3, seed=1)
        assert 0 < np.linalg.norm(moved.u.u - truth.u.u) < 1e-2


@pytest.mark.unit
class TestOraclesUnit:
    """Independent evaluators and grid searches."""

    def test_independent_cost(self, noisy_problem, random_point):
        expected = cost(noisy_problem, random_point)
        assert independent_cost(noisy_problem, random_point) == pytest.approx(expected, rel=1e-12)

    def test_fd_step_range(self):
        with pytest.raises(ContractError):
            fd_gradient_oracle(lambda p: 0.0, None, lambda p, d, t: p, [None], step=1e-2)

    def test_fd_on_a_line(self):
        table = fd_gradient_oracle(
            lambda x: x ** 3, 2.0, lambda x, d, t: x + t * d, [1.0, -2.0],
            pairing=lambda d: 12.0 * d,
        )
        assert [row["index"] for row in table] == [0, 1]
        assert max(row["rel_err"] for row in table) < 1e-8

    def test_grid_domains(self):
        (x, y), val = grid_oracle(lambda a, b: (a - 1) ** 2 + (b + 2) ** 2, "triangular", 0.01)
        assert x == pytest.approx(1.0, abs=0.01) and y == pytest.approx(-2.0, abs=0.01)
        (x,), _ = grid_oracle(lambda a: (a - 2.0) ** 2, "diagonal", 0.001)
        assert x == pytest.approx(2.0, abs=0.01)
        (t, _), _ = grid_oracle(lambda a, b: (a - 0.5) ** 2 + 0 * b, "plane", 0.01)
        assert t == pytest.approx(0.5, abs=0.01)
        with pytest.raises(ContractError):
            grid_oracle(lambda a: a, "sphere", 0.1)

    def test_non_vectorized_grid(self):
        (x,), _ = grid_oracle(lambda a: abs(a - 3.0), "diagonal", 0.01, vectorized=False)
        assert x == pytest.approx(3.0, abs=0.05)

    def test_run_checks_pass_at_random_point(self, noisy_problem, random_point):
        results = run_checks(noisy_problem, random_point, seed=1, n_directions=5)
        failed = {k: v for k, v in results.items() if isinstance(v, dict) and not v["success"]}
        assert results["passed"], failed
        assert set(results) >= {"cost_paths", "rgrad_u", "rgrad_x", "minimizers"}


@pytest.mark.unit
class TestStorageUnit:
    """JSON problem and point files."""

    def test_problem_file(self, noisy_problem, tmp_path):
        path = save_problem(noisy_problem, tmp_path / "p.json")
        loaded = load_problem(path)
        assert np.array_equal(loaded.matrices, noisy_problem.matrices)
        assert loaded.dagger == noisy_problem.dagger
        assert json.loads(path.read_text())["n"] == noisy_problem.n

    def test_point_file(self, random_point, tmp_path):
        path = save_point(random_point, tmp_path / "pt.json")
        loaded = load_point(path)
        assert np.array_equal(loaded.u.u, random_point.u.u)
        assert isinstance(loaded, JointPoint)

    def test_bad_header(self, noisy_problem, tmp_path):
        path = save_problem(noisy_problem, tmp_path / "p.json")
        data = json.loads(path.read_text())
        data["n"] = 9
        path.write_text(json.dumps(data))
        with pytest.raises(DimensionError):
            load_problem(path)


def row(k, f, decrease=0.0, movement=0.0, **kw):
    return IterationTrace(
        iter=k, block=2, f=f, grad_f1=None, grad_f2=1.0, grad_f=1.0,
        norm_U=1.0, norm_X=1.0, cond_X=1.0, decrease=decrease, movement=movement, **kw
    )


@pytest.mark.unit
class TestTrackerUnit:
    """Trace recording, CSV export and monitors."""

    def test_csv_header_and_rows(self, tmp_path):
        tracker = Tracker()
        tracker.record(row(0, 2.0))
        tracker.record(row(1, 1.5, decrease=0.5, i=0, j=1, kind="upper"))
        lines = tracker.save_csv(tmp_path / "t.csv").read_text().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert lines[2].startswith("1,2,0,1,upper,1.5")
        assert len(lines) == 3

    def test_tail_movement(self):
        tracker = Tracker()
        tracker.record(row(0, 1.0))
        for k in range(1, 21):
            tracker.record(row(k, 1.0, movement=float(k)))
        assert tracker.tail_movement(0.1) == pytest.approx(19.0 + 20.0)
        assert Tracker().tail_movement() == 0.0

    def test_violations(self):
        tracker = Tracker()
        tracker.record(row(0, 1.0))
        tracker.record(row(1, 1.2, decrease=-0.2, selection_ok=False))
        tracker.record(row(2, 1.0, decrease=0.2, predicted=0.1))
        counts = tracker.violations()
        assert counts["increase"] == 1
        assert counts["selection"] == 1
        assert counts["prediction"] == 1
        assert counts["armijo"] == 0

    def test_column_and_json(self, noisy_problem, random_point, tmp_path):
        result = run_jacobi(noisy_problem, random_point, stop=StopRule(max_iters=10))
        assert np.isnan(result.trace.column("grad_f1")).all()
        with pytest.raises(KeyError):
            result.trace.column("nope")
        data = json.loads(result.trace.save_json(tmp_path / "t.json").read_text())
        assert data["meta"]["algo"] == "jacobi-glu"
        assert len(data["rows"]) == len(result.trace)


@pytest.mark.unit
class TestOracleExamplesUnit:
    """Grid searches on hand-made coefficient sets."""

    def test_triangular_grid(self):
        c = TriangularCoeffs(2.0, 1.0, 0.0, "upper", (0, 1))
        (x, y), val = grid_oracle(c.model, "triangular", 0.01)
        assert val == pytest.approx(-0.5, abs=1e-6)
        assert (x, y) == pytest.approx((-0.5, 0.0), abs=1e-6)

    def test_diagonal_grid(self):
        (x,), _ = grid_oracle(DiagonalCoeffs(1.0, 4.0, (0, 1)).model, "diagonal", 0.001)
        assert x == pytest.approx(np.sqrt(2.0), rel=2e-3)

    def test_plane_grid(self):
        g = GammaForm(np.diag([0.0, 2.0, 0.0]), 0.0, (0, 1))
        _, val = grid_oracle(g.model, "plane", 0.02)
        assert val == pytest.approx(-2.0, abs=1e-6)


@pytest.mark.integration
class TestDeterminismIntegration:
    """Same seed and config give the same trace file."""

    @pytest.mark.parametrize(
        "algo", ["bcd-glu", "bcd-glq", "bcd-clu", "jacobi-glu", "jacobi-clq"]
    )
    def test_trace_csv_is_reproducible(self, algo):
        texts = []
        for _ in range(2):
            problem, _ = generate_instance(InstanceSpec(n=5, m=3, L=3, noise=1e-3, seed=8))
            omega0 = initial_point("random", 5, 3, seed=8)
            result = solve_problem(problem, omega0, {"algo": algo, "max_iters": 30})
            texts.append(result.trace.csv_text())
        assert texts[0] == texts[1]
