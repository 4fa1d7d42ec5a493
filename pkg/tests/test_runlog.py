import json

from src import runlog


def test_empty_history(run_log):
    assert runlog.read_runs() == []


def test_start_and_finish(run_log):
    entry = runlog.start_run('hull', 3, {'seed': 3})
    assert entry['status'] == 'Running'
    assert run_log.exists()
    done = runlog.finish_run(entry['id'], 'Pass',
                             summary={'hull': {'cases': 3, 'failed': 0, 'worst_margin': 0.0}})
    assert done['status'] == 'Pass'
    assert 'end_time' in done
    assert runlog.get_run(entry['id'])['summary']['hull']['cases'] == 3


def test_newest_first_with_unique_ids(run_log):
    first = runlog.start_run('hull', 0)
    second = runlog.start_run('logistic_weights', 0)
    runs = runlog.read_runs()
    assert [r['id'] for r in runs] == [second['id'], first['id']]
    assert first['id'] != second['id']


def test_finish_unknown_run(run_log):
    assert runlog.finish_run(42, 'Pass') is None


def test_delete(run_log):
    entry = runlog.start_run('hull', 0)
    assert runlog.delete_run(entry['id'])
    assert not runlog.delete_run(entry['id'])
    assert runlog.get_run(entry['id']) is None


def test_corrupt_file_is_ignored(run_log):
    run_log.parent.mkdir(parents=True)
    run_log.write_text('{not json')
    assert runlog.read_runs() == []
    runlog.start_run('hull', 0)
    assert len(json.loads(run_log.read_text())) == 1


def test_format_duration():
    assert runlog.format_duration(3725) == "1h 2m 5s"
    assert runlog.format_duration(0.4) == "0h 0m 0s"


def test_report(run_log):
    entry = runlog.start_run('all', 7)
    runlog.finish_run(entry['id'], 'Fail', reason="Failed suites: hull",
                      summary={'hull': {'cases': 3, 'failed': 1, 'worst_margin': -1.0}})
    report = runlog.format_run_report(runlog.get_run(entry['id']))
    assert report.startswith("Verification Run Details")
    assert "Seed: 7" in report
    assert "Status: Fail" in report
    assert "Failure Reason: Failed suites: hull" in report
    assert "hull: 3 cases, 1 failed, worst margin -1.0" in report
    assert "Duration: 0h 0m" in report
