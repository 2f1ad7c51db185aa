import pytest

from javascale.errors import (
    ArchiveIntegrityError,
    DuplicateProjectError,
    UnsupportedVersionError,
)
from javascale.facts import ProjectFacts
from javascale.metrics import METRIC_COLUMNS, ProjectMetrics, compute_metrics
from javascale.store import (
    FactsArchive,
    export_metrics_table,
    read_facts,
    read_metrics_table,
    write_facts,
)


class TestArchiveRoundTrip:
    def test_foonumber_round_trip(self, foonumber_facts, tmp_path):
        path = tmp_path / "facts.bin"
        write_facts(FactsArchive(projects=[foonumber_facts]), path)
        loaded = read_facts(path)
        assert loaded.version == 1
        assert loaded.projects[0].entities == foonumber_facts.entities
        assert loaded.projects[0].relations == foonumber_facts.relations
        assert loaded.projects[0].sloc == foonumber_facts.sloc

    def test_empty_archive(self, tmp_path):
        path = tmp_path / "facts.bin"
        write_facts(FactsArchive(), path)
        assert read_facts(path).projects == []

    def test_ten_project_writes_are_byte_identical(self, fixture_projects, tmp_path):
        a = tmp_path / "a.bin"
        b = tmp_path / "b.bin"
        write_facts(FactsArchive(projects=fixture_projects), a)
        write_facts(FactsArchive(projects=fixture_projects), b)
        assert a.read_bytes() == b.read_bytes()

    def test_version_mismatch(self, tmp_path):
        path = tmp_path / "facts.bin"
        write_facts(FactsArchive(projects=[ProjectFacts(project_id="p")]), path)
        text = path.read_text().replace("JSCALE-FACTS 1", "JSCALE-FACTS 99", 1)
        path.write_text(text)
        with pytest.raises(UnsupportedVersionError):
            read_facts(path)

    def test_truncated_file(self, foonumber_facts, tmp_path):
        path = tmp_path / "facts.bin"
        write_facts(FactsArchive(projects=[foonumber_facts]), path)
        data = path.read_bytes()
        path.write_bytes(data[: len(data) // 2])
        with pytest.raises(ArchiveIntegrityError):
            read_facts(path)

    def test_not_an_archive(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_text("hello world\n")
        with pytest.raises(ArchiveIntegrityError):
            read_facts(path)

    def test_duplicate_ids_rejected(self):
        with pytest.raises(DuplicateProjectError):
            FactsArchive(
                projects=[ProjectFacts(project_id="p"), ProjectFacts(project_id="p")]
            )


class TestMetricsTable:
    def test_zero_row(self, tmp_path):
        path = tmp_path / "m.csv"
        export_metrics_table([ProjectMetrics(project_id="z")], path)
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(METRIC_COLUMNS)
        assert lines[1] == "z" + ",0" * (len(METRIC_COLUMNS) - 1)

    def test_foonumber_row(self, foonumber_facts, tmp_path):
        path = tmp_path / "m.csv"
        export_metrics_table([compute_metrics(foonumber_facts)], path)
        header, row = path.read_text().splitlines()
        cells = dict(zip(header.split(","), row.split(",")))
        assert cells["classes"] == "1"
        assert cells["interfaces"] == "0"
        assert cells["methods"] == "2"
        assert cells["constructors"] == "1"

    def test_rows_sorted_by_project_id(self, tmp_path):
        metrics = [ProjectMetrics(project_id=pid) for pid in ("zeta", "alpha", "mid")]
        path = tmp_path / "m.csv"
        export_metrics_table(metrics, path)
        ids = [ln.split(",")[0] for ln in path.read_text().splitlines()[1:]]
        assert ids == sorted(ids)

    def test_duplicate_project_id_refused(self, tmp_path):
        metrics = [ProjectMetrics(project_id="p"), ProjectMetrics(project_id="p")]
        with pytest.raises(DuplicateProjectError):
            export_metrics_table(metrics, tmp_path / "m.csv")

    def test_empty_export_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            export_metrics_table([], tmp_path / "m.csv")

    def test_read_round_trip(self, fixture_corpus, tmp_path):
        path = tmp_path / "m.csv"
        export_metrics_table(fixture_corpus, path)
        loaded = read_metrics_table(path)
        assert loaded == sorted(fixture_corpus, key=lambda pm: pm.project_id)

    def test_read_rejects_bad_header(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("nope,nope\n1,2\n")
        with pytest.raises(ArchiveIntegrityError):
            read_metrics_table(path)
