import datetime
import json
import logging
import os
import threading
import time

from src import config

logger = logging.getLogger(__name__)

lock = threading.Lock()


# --- Helper Functions ---
def read_runs():
    if not os.path.exists(config.RUN_LOGS_FILE):
        return []
    try:
        with open(config.RUN_LOGS_FILE, 'r') as f:
            runs = json.load(f)
    except (json.JSONDecodeError, FileNotFoundError):
        logger.warning("Run log %s is unreadable; starting a new one", config.RUN_LOGS_FILE)
        return []
    return runs if isinstance(runs, list) else []


def write_runs(runs):
    os.makedirs(os.path.dirname(config.RUN_LOGS_FILE), exist_ok=True)
    with open(config.RUN_LOGS_FILE, 'w') as f:
        json.dump(runs, f, indent=4)


def format_duration(seconds):
    seconds = int(seconds)
    h = seconds // 3600
    m = (seconds % 3600) // 60
    s = seconds % 60
    return f"{h}h {m}m {s}s"


def _now():
    return datetime.datetime.now(datetime.timezone.utc).astimezone().isoformat()


# --- Run lifecycle ---
def start_run(suite, seed, cfg=None):
    """Inserts a 'Running' entry at the head of the history and returns it."""
    entry = {
        'id': int(time.time() * 1000),
        'time': _now(),
        'suite': suite,
        'seed': seed,
        'config': cfg or {},
        'status': 'Running',
    }
    with lock:
        runs = read_runs()
        # two runs started in the same millisecond
        while any(r.get('id') == entry['id'] for r in runs):
            entry['id'] += 1
        runs.insert(0, entry)
        write_runs(runs)
    logger.info("Started run %s (suite=%s, seed=%s)", entry['id'], suite, seed)
    return entry


def finish_run(run_id, status, reason=None, summary=None):
    with lock:
        runs = read_runs()
        entry = next((r for r in runs if r.get('id') == run_id), None)
        if entry is None:
            logger.warning("Run %s not found in history", run_id)
            return None
        entry['status'] = status
        entry['end_time'] = _now()
        if reason:
            entry['failure_reason'] = reason
        if summary is not None:
            entry['summary'] = summary
        write_runs(runs)
    logger.info("Run %s finished: %s", run_id, status)
    return entry


def get_run(run_id):
    return next((r for r in read_runs() if r.get('id') == run_id), None)


def delete_run(run_id):
    """Returns False when no entry has this id."""
    with lock:
        runs = read_runs()
        updated = [r for r in runs if r.get('id') != run_id]
        if len(updated) == len(runs):
            return False
        write_runs(updated)
    return True


def _display_time(stamp):
    try:
        return datetime.datetime.fromisoformat(stamp).strftime("%Y-%m-%d %H:%M:%S")
    except (ValueError, TypeError):
        return stamp


def format_run_report(entry):
    """Plain-text report of one history entry."""
    report = "Verification Run Details\n========================\n"
    report += f"Id: {entry.get('id', 'N/A')}\n"
    report += f"Time: {_display_time(entry.get('time')) or 'N/A'}\n"
    report += f"Suite: {entry.get('suite', 'N/A')}\n"
    report += f"Seed: {entry.get('seed', 'N/A')}\n"

    if entry.get('time') and entry.get('end_time'):
        try:
            start_dt = datetime.datetime.fromisoformat(entry['time'])
            end_dt = datetime.datetime.fromisoformat(entry['end_time'])
            report += f"Duration: {format_duration((end_dt - start_dt).total_seconds())}\n"
        except (ValueError, TypeError):
            pass

    report += f"Status: {entry.get('status', 'N/A')}\n"
    if entry.get('failure_reason'):
        report += f"Failure Reason: {entry['failure_reason']}\n"
    if entry.get('end_time'):
        report += f"End Time: {_display_time(entry['end_time'])}\n"

    summary = entry.get('summary') or {}
    if summary:
        report += "Suites:\n"
        for name, info in summary.items():
            report += (f"  {name}: {info.get('cases', 0)} cases, {info.get('failed', 0)} failed, "
                       f"worst margin {info.get('worst_margin')}\n")
    return report
