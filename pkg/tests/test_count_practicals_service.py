from decimal import Decimal

import pytest

from project.build_sieve_service import build_sieve
from project.check_practicality_service import is_f_practical
from project.count_practicals_service import (
    CensusCheckpoint,
    CensusReport,
    compare_golden,
    count_practicals,
    format_ratio,
    load_golden,
    plan_chunks,
    s_density_trend,
)
from project.errors import InvalidInputError, LimitExceededError
from project.function_catalog_service import (
    FunctionConfig,
    build_function,
    resolve_function,
)


def test_format_ratio():
    assert format_ratio(6, 10) == Decimal("1.381551")
    assert format_ratio(1015, 10**4) == Decimal("0.934850")
    assert format_ratio(1, 1) is None


def test_plan_chunks_respects_checkpoints():
    assert plan_chunks([10, 25], 8) == [(1, 8), (9, 10), (11, 18), (19, 25)]


def test_table1_to_1e5(lambda_star):
    report = count_practicals(lambda_star, [10, 100, 1000, 10**4, 10**5], workers=1)
    assert [c.count for c in report.checkpoints] == [6, 28, 164, 1015, 7128]
    assert compare_golden(report, load_golden("table1")) == []


def test_counts_match_direct_decisions(phi):
    report = count_practicals(phi, [50, 500], workers=1, chunk_size=64)
    expected = sum(is_f_practical(n, phi).is_practical for n in range(1, 501))
    assert report.count_at(500) == expected
    assert report.count_at(50) == sum(
        is_f_practical(n, phi).is_practical for n in range(1, 51)
    )
    with pytest.raises(KeyError):
        report.count_at(100)


def test_counts_do_not_depend_on_workers(phi):
    single = count_practicals(phi, [1000, 3000], workers=1)
    pooled = count_practicals(phi, [1000, 3000], workers=3, chunk_size=250)
    assert [c.count for c in pooled.checkpoints] == [c.count for c in single.checkpoints]


def test_fn_parameter_two_to_1e5():
    report = count_practicals(resolve_function("fn", 2), [10**5], workers=1)
    assert report.count_at(10**5) == 50001


def test_lambda_def53_census():
    report = count_practicals(resolve_function("lambda-def53"), [200], workers=1)
    star = count_practicals(resolve_function("lambda-star"), [200], workers=1)
    assert report.count_at(200) >= star.count_at(200)


def test_membership_file(tmp_path, phi):
    path = tmp_path / "members.txt"
    report = count_practicals(phi, [100], workers=1, membership_path=path)
    members = [int(line) for line in path.read_text().split()]
    assert len(members) == report.count_at(100)
    assert members == sorted(members)
    assert 75 not in members
    assert all(is_f_practical(n, phi).is_practical for n in members)


def test_prepared_sieve(phi):
    sieve = build_sieve(100)
    assert count_practicals(phi, [100], workers=1, sieve=sieve).count_at(100) > 0
    with pytest.raises(LimitExceededError):
        count_practicals(phi, [101], workers=1, sieve=sieve)


def test_census_input_errors(phi):
    with pytest.raises(InvalidInputError):
        count_practicals(phi, [])
    with pytest.raises(InvalidInputError):
        count_practicals(phi, [0, 10])
    with pytest.raises(LimitExceededError):
        count_practicals(resolve_function("lambda-def53"), [10**6 + 1], workers=1)


def test_report_formats():
    report = CensusReport(
        function="lambda-star",
        checkpoints=[
            CensusCheckpoint(x=1, count=1, elapsed=0.0),
            CensusCheckpoint(x=10, count=6, elapsed=0.1),
        ],
        chunk_size=8,
        workers=1,
    )
    assert report.to_csv() == "X,count,ratio\n1,1,\n10,6,1.381551\n"
    assert '"ratio": 1.381551' in report.to_json()


def test_compare_golden_reports_mismatches(identity):
    report = count_practicals(identity, [10, 100], workers=1)
    mismatches = compare_golden(report, load_golden("table1"))
    assert [m.x for m in mismatches] == [10, 100]
    assert mismatches[0].actual_count == 5
    assert mismatches[0].expected_count == 6


def test_load_golden_unknown():
    with pytest.raises(InvalidInputError):
        load_golden("table9")


def test_golden_tables_agree():
    table1 = {row.x: row for row in load_golden("table1")}
    for row in load_golden("table2"):
        if row.x in table1:
            assert row == table1[row.x]


def test_s_density_trend():
    assert s_density_trend([1], workers=1)[0].count == 1
    trend = s_density_trend([100, 1000, 10**4], workers=1)
    densities = [point.density for point in trend]
    assert densities == sorted(densities, reverse=True)


@pytest.mark.slow
def test_table1_to_1e7(lambda_star):
    rows = load_golden("table1")
    report = count_practicals(lambda_star, [row.x for row in rows])
    assert compare_golden(report, rows) == []


@pytest.mark.slow
def test_table2(lambda_star):
    rows = load_golden("table2")
    report = count_practicals(lambda_star, [row.x for row in rows])
    assert compare_golden(report, rows) == []


class _RecordingExecutor:
    instances = []

    def __init__(self, **kwargs):
        self.shut_down = False
        _RecordingExecutor.instances.append(self)

    def map(self, fn, jobs):
        return iter(())

    def shutdown(self):
        self.shut_down = True


def test_unwritable_membership_file_shuts_pool_down(tmp_path, phi, monkeypatch):
    monkeypatch.setattr(
        "project.count_practicals_service.ProcessPoolExecutor", _RecordingExecutor
    )
    with pytest.raises(OSError):
        count_practicals(
            phi, [100], chunk_size=10, workers=2, membership_path=tmp_path
        )
    assert _RecordingExecutor.instances[-1].shut_down


def test_renamed_lambda_def53_census_is_bounded():
    renamed = build_function(FunctionConfig(name="lam53", base="lambda-def53"))
    with pytest.raises(LimitExceededError):
        count_practicals(renamed, [10**6 + 1], workers=1)
