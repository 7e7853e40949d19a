from loguru import logger
import orjson
import pytest

from swarmpath.config.log_models import LoggingConfig
from swarmpath.config.logging_config import (
    NO_RUN,
    default_run_context,
    load_log_config,
    run_label,
    serialize_record,
)


@pytest.fixture
def records():
    """Collect raw loguru records emitted through the run-context patcher."""
    captured = []
    patched = logger.patch(default_run_context)
    sink_id = logger.add(lambda message: captured.append(message.record), level="DEBUG")
    yield patched, captured
    logger.remove(sink_id)


class TestRunContext:
    def test_label(self):
        """Runs are tagged environment#seed."""
        assert run_label("bundled:3", 17) == "bundled:3#17"

    def test_default_tag(self, records):
        """Records outside a run carry the placeholder tag."""
        patched, captured = records
        patched.info("idle")
        assert captured[0]["extra"]["run"] == NO_RUN

    def test_bound_tag_wins(self, records):
        """A contextualized run tag is kept."""
        patched, captured = records
        with logger.contextualize(run=run_label("empty", 4)):
            patched.info("planning")
        assert captured[0]["extra"]["run"] == "empty#4"


class TestSerializeRecord:
    def test_run_is_a_top_level_key(self, records):
        """JSON lines expose the run tag and keep other extras apart."""
        patched, captured = records
        with logger.contextualize(run="bundled:1#0"):
            patched.bind(waypoint=3).warning("penalized")
        data = orjson.loads(serialize_record(captured[0]))
        assert data["run"] == "bundled:1#0"
        assert data["level"] == "WARNING"
        assert data["message"] == "penalized"
        assert data["extra"] == {"waypoint": 3}
        assert data["exception"] is None


class TestLoadLogConfig:
    def test_missing_file_gives_defaults(self, tmp_path):
        """No file means the built-in sinks."""
        assert load_log_config(tmp_path / "absent.toml") == LoggingConfig()

    def test_invalid_table_gives_defaults(self, tmp_path):
        """An unknown level falls back to the defaults."""
        path = tmp_path / "config.toml"
        path.write_text('[logging]\nlevel = "LOUD"\n')
        assert load_log_config(path) == LoggingConfig()

    def test_reads_the_table(self, tmp_path):
        """Valid values are applied."""
        path = tmp_path / "config.toml"
        path.write_text('[logging]\nlevel = "DEBUG"\n\n[logging.console]\nstream = "stdout"\n')
        config = load_log_config(path)
        assert config.level.value == "DEBUG"
        assert config.console.stream == "stdout"
