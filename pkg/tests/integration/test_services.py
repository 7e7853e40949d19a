import math
import xml.etree.ElementTree as ET

import orjson
import pytest

from swarmpath.core.exceptions import EnvironmentFileError, UnreachableGoalError
from swarmpath.core.geometry import ConvexPolygon, Point2
from swarmpath.core.planner import Bounds, Path, Workspace
from swarmpath.services.artifacts import (
    dump_json,
    format_csv,
    read_csv,
    render_svg,
    write_csv,
    write_json,
    write_svg,
)
from swarmpath.services.planning import PlanJob, run, sweep


@pytest.fixture
def job(blocked_workspace, small_pso):
    return PlanJob(
        workspace=blocked_workspace,
        environment="blocked",
        pso=small_pso,
        waypoints=12,
    )


class TestRun:
    def test_report_mirrors_the_result(self, job):
        """Report fields come from the job and the planner result."""
        outcome = run(job)
        report = outcome.report
        assert report.environment == "blocked"
        assert report.seed == job.pso.rng_seed
        assert report.waypoints == 12
        assert report.penalty_mode == "soft"
        assert report.feasible == outcome.result.feasible
        assert report.path_length == outcome.result.total_length
        assert report.oracle_length is None
        assert report.length_ratio is None
        assert len(report.iterations_per_waypoint) == 12

    def test_oracle_comparison(self, job):
        """The ratio is path length over oracle length and never below 1."""
        report = run(job, compare_oracle=True).report
        assert report.oracle_length is not None
        assert report.length_ratio == pytest.approx(
            report.path_length / report.oracle_length,
        )
        assert report.length_ratio >= 1.0 - 1e-9

    def test_deterministic_reports_are_byte_identical(self, job):
        """Zeroed timings make repeated reports identical."""
        first = dump_json(run(job, deterministic=True).report)
        second = dump_json(run(job, deterministic=True).report)
        assert first == second
        assert orjson.loads(first)["wall_clock_ms"] == 0.0

    def test_unreachable_oracle_raises(self, small_pso):
        """The oracle refuses an enclosed goal."""
        ring = tuple(
            ConvexPolygon.of(
                [(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)],
            )
            for xmin, ymin, xmax, ymax in (
                (3, 6, 7, 7),
                (3, 3, 7, 4),
                (3, 3, 4, 7),
                (6, 3, 7, 7),
            )
        )
        workspace = Workspace(
            bounds=Bounds(-1, -1, 10, 10),
            obstacles=ring,
            start=Point2(0.0, 0.0),
            goal=Point2(5.0, 5.0),
        )
        enclosed = PlanJob(workspace=workspace, environment="ring", pso=small_pso)
        with pytest.raises(UnreachableGoalError):
            run(enclosed, compare_oracle=True)


class TestSweep:
    def test_runs_are_in_seed_order(self, job):
        """Run k uses base seed + k."""
        outcome = sweep(job, seeds=3)
        report = outcome.report
        assert [r.seed for r in report.runs] == [3, 4, 5]
        assert report.base_seed == 3
        assert report.seeds == 3
        lengths = [r.path_length for r in report.runs]
        assert report.min_length == min(lengths)
        assert report.max_length == max(lengths)
        assert report.mean_length == pytest.approx(math.fsum(lengths) / 3)
        assert report.success_rate == sum(r.feasible for r in report.runs) / 3

    def test_single_seed_matches_run(self, job):
        """A one-seed sweep plans exactly what run plans."""
        swept = sweep(job, seeds=1, deterministic=True).report.runs[0]
        assert swept == run(job, deterministic=True).report

    def test_process_pool_gives_the_same_runs(self, job):
        """Parallel execution does not change any result."""
        serial = sweep(job, seeds=3, deterministic=True).report
        parallel = sweep(job, seeds=3, jobs=2, deterministic=True).report
        assert parallel == serial

    @pytest.mark.parametrize(("seeds", "jobs"), [(0, 1), (2, 0)])
    def test_rejects_empty_sweeps(self, job, seeds, jobs):
        """At least one seed and one worker are required."""
        with pytest.raises(ValueError):
            sweep(job, seeds=seeds, jobs=jobs)


class TestArtifacts:
    def test_csv_round_trip(self, tmp_path):
        """Coordinates survive the CSV file bit for bit."""
        path = Path((Point2(0.0, 0.0), Point2(1 / 3, -2.5e-7), Point2(10.0, 0.2)))
        target = tmp_path / "path.csv"
        write_csv(path, target)
        assert target.read_text().splitlines()[0] == "x,y"
        assert read_csv(target) == path

    def test_csv_format(self):
        """Header then one row per waypoint."""
        text = format_csv(Path((Point2(0.0, 0.0), Point2(1.5, 2.0))))
        assert text == "x,y\n0.0,0.0\n1.5,2.0\n"

    def test_csv_rejects_a_bad_header(self, tmp_path):
        """Unexpected headers are reported."""
        target = tmp_path / "bad.csv"
        target.write_text("a,b\n1,2\n")
        with pytest.raises(EnvironmentFileError):
            read_csv(target)

    def test_json_is_sorted_and_newline_terminated(self, job, tmp_path):
        """Reports are written with sorted keys."""
        report = run(job, deterministic=True).report
        target = tmp_path / "report.json"
        write_json(report, target)
        raw = target.read_bytes()
        assert raw.endswith(b"\n")
        data = orjson.loads(raw)
        assert list(data) == sorted(data)
        assert data["seed"] == 3

    def test_svg_is_well_formed(self, job, tmp_path):
        """The drawing parses as SVG and is reproducible."""
        result = run(job).result
        svg = render_svg(job.workspace, result.path)
        root = ET.fromstring(svg)
        assert root.tag.endswith("svg")
        assert render_svg(job.workspace, result.path) == svg
        target = tmp_path / "plan.svg"
        write_svg(job.workspace, target, result.path)
        assert target.read_text(encoding="utf-8") == svg

    def test_svg_without_a_path(self, empty_workspace):
        """Only the workspace is drawn when no path is given."""
        ET.fromstring(render_svg(empty_workspace))
