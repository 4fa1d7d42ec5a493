"""Command-line front end: python app.py <subcommand> [flags].

Exit codes: 0 ok, 1 a verification case failed, 2 configuration error, 3 numerical error.
"""
import argparse
import csv
import io
import itertools
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from src import config, runlog
from src.cfunction import c_function, c_tilde, rho_c_singular
from src.errors import ConfigError, HogeomError, NotRepresentable, jsonable
from src.multiplicity import Mult, ell_range, region_flags, standardize
from src.rootsys import build_bc, rho
from src.sysinfo import host_stats
from src.taufun import METHODS, TauRequest, evaluate
from src.verify import SuiteConfig, bounded_verdict, run_suites

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_SUITE_FAILED = 1


# --- Parsing helpers ---
def _text(value):
    """Job-config values may be JSON lists where the flag takes comma separated text."""
    if isinstance(value, (list, tuple)):
        return ','.join(str(v) for v in value)
    return str(value)


def _number(text):
    try:
        if ':' in text:
            re, im = text.split(':')
            return complex(float(re), float(im))
        return complex(float(text))
    except ValueError:
        raise ConfigError(f"Cannot parse {text!r} as a number (use 1.5 or re:im)", value=text)


def parse_mult(text):
    return Mult.parse(_text(text))


def parse_lambda(text, m, rank):
    """Comma separated reals or re:im pairs; 'rho' is rho(m)."""
    text = _text(text).strip()
    if text == 'rho':
        if rank is None:
            raise ConfigError("--lambda rho needs --rank or a point to fix the rank")
        return tuple(complex(v) for v in rho(build_bc(rank), m))
    lam = tuple(_number(p.strip()) for p in text.split(','))
    if rank is not None and len(lam) != rank:
        raise ConfigError(f"lambda has {len(lam)} entries but the rank is {rank}",
                          lam=text, rank=rank)
    return lam


def parse_point(text):
    try:
        return tuple(float(p) for p in _text(text).split(','))
    except ValueError:
        raise ConfigError(f"Cannot parse point {text!r}", value=text)


def parse_grid(text):
    """start:stop:count, endpoints included."""
    parts = str(text).split(':')
    if len(parts) != 3:
        raise ConfigError(f"Grid must be start:stop:count, got {text!r}", value=text)
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"Grid must be start:stop:count, got {text!r}", value=text)
    if count < 1:
        raise ConfigError(f"Grid count must be positive, got {count}", value=text)
    return np.linspace(start, stop, count)


def _rank_hint(args):
    """Rank from --rank, else the first point, else the grid axes, else a non-'rho' lambda."""
    if args.rank is not None:
        return int(args.rank)
    if getattr(args, 'x', None):
        return len(parse_point(args.x[0]))
    if getattr(args, 'grid', None):
        return len(args.grid)
    lam = getattr(args, 'lam', None)
    if lam is not None and _text(lam).strip() != 'rho':
        return len(_text(lam).split(','))
    return None


def points_from_args(args, rank):
    points = [parse_point(p) for p in (args.x or [])]
    if args.grid:
        if len(args.grid) != rank:
            raise ConfigError(f"Need one --grid per axis: got {len(args.grid)} for rank {rank}",
                              rank=rank)
        axes = [parse_grid(g) for g in args.grid]
        points.extend(tuple(float(v) for v in p) for p in itertools.product(*axes))
    if not points:
        raise ConfigError("No evaluation points: give --x or --grid")
    for p in points:
        if len(p) != rank:
            raise ConfigError(f"Point {list(p)} does not match rank {rank}", x=list(p), rank=rank)
    return points


def _request(args):
    m = parse_mult(args.m)
    rank = _rank_hint(args)
    lam = parse_lambda(args.lam, m, rank)
    build_bc(len(lam))
    return TauRequest(m, args.ell, lam, args.method, args.max_height, args.degree)


# --- Output ---
def fmt(value):
    return format(float(value), f'.{config.FLOAT_DIGITS}g')


def write_output(text, path=None):
    if path:
        with open(path, 'w', newline='') as f:
            f.write(text)
        logger.info("Wrote %s", path)
    else:
        sys.stdout.write(text)


def json_text(payload):
    return json.dumps(jsonable(payload), indent=2) + '\n'


def rows_to_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def evaluate_points(req, points, function):
    """Evaluates in parallel; results keep the order of points."""
    with ThreadPoolExecutor(max_workers=config.thread_count()) as pool:
        futures = [pool.submit(evaluate, req, p, function) for p in points]
        return [f.result() for f in futures]


def _records(req, points, values, extra=None):
    out = []
    for p, v in zip(points, values):
        rec = dict(extra or {})
        rec.update({'x': list(p), 're': v.value.real, 'im': v.value.imag, 'method': v.method,
                    'est_error': v.error})
        out.append(rec)
    return out


def _csv_rows(records, rank, with_ell=False):
    header = (['ell'] if with_ell else []) + [f'x_{i + 1}' for i in range(rank)] + \
        ['re', 'im', 'method', 'est_error']
    rows = []
    for rec in records:
        row = [fmt(rec['ell'])] if with_ell else []
        row += [fmt(v) for v in rec['x']]
        row += [fmt(rec['re']), fmt(rec['im']), rec['method'], fmt(rec['est_error'])]
        rows.append(row)
    return rows_to_csv(header, rows)


# --- Commands ---
def cmd_eval(args):
    req = _request(args)
    points = points_from_args(args, req.rank)
    logger.info("Evaluating %s over %d points", args.function.upper(), len(points))
    records = _records(req, points, evaluate_points(req, points, args.function))
    if args.json:
        payload = {'schema_version': config.SCHEMA_VERSION, 'function': args.function,
                   'm': req.m.as_tuple(), 'ell': req.ell, 'lambda': list(req.lam),
                   'results': records}
        write_output(json_text(payload), args.out)
    else:
        write_output(_csv_rows(records, req.rank), args.out)
    return EXIT_OK


def cmd_sweep(args):
    req = _request(args)
    points = points_from_args(args, req.rank)
    records = []
    for ell in parse_grid(args.ell_grid):
        sub = req.replace(ell=float(ell))
        records.extend(_records(sub, points, evaluate_points(sub, points, args.function),
                                extra={'ell': float(ell)}))
    if args.json:
        payload = {'schema_version': config.SCHEMA_VERSION, 'function': args.function,
                   'm': req.m.as_tuple(), 'lambda': list(req.lam), 'results': records}
        write_output(json_text(payload), args.out)
    else:
        write_output(_csv_rows(records, req.rank, with_ell=True), args.out)
    return EXIT_OK


def cmd_regions(args):
    m = parse_mult(args.m)
    out = region_flags(m).to_dict()
    try:
        std_m, std_ell = standardize(m)
        out['standardized'] = {'m': list(std_m.as_tuple()), 'ell': std_ell,
                               'ell_range': list(ell_range(std_m))}
    except NotRepresentable:
        out['standardized'] = None
    write_output(json_text(out), args.out)
    return EXIT_OK


def cmd_cfunc(args):
    m = parse_mult(args.m)
    rank = _rank_hint(args)
    lam = parse_lambda(args.lam, m, rank)
    rs = build_bc(len(lam))
    num = c_tilde(rs, m, np.asarray(lam))
    out = {
        'm': list(m.as_tuple()),
        'lambda': list(lam),
        'c': c_function(rs, m, np.asarray(lam)),
        'c_tilde': num.value,
        'zero_roots': list(num.zero_roots),
        'rho_singular': rho_c_singular(rs, m),
    }
    write_output(json_text(out), args.out)
    return EXIT_OK


def cmd_bounded(args):
    m = parse_mult(args.m)
    rank = _rank_hint(args)
    lam = parse_lambda(args.lam, m, rank)
    res = bounded_verdict(m, args.ell, lam, method=args.method)
    out = res.to_dict()
    out['agrees'] = res.in_tube == (res.verdict == 'bounded')
    write_output(json_text(out), args.out)
    return EXIT_OK


def cmd_verify(args):
    data = dict(args.job or {})
    data['seed'] = args.seed
    if args.tolerance is not None:
        data['slack'] = args.tolerance
    cfg = SuiteConfig.from_dict(data)
    entry = None if args.no_record else runlog.start_run(args.suite, cfg.seed, jsonable(data))
    try:
        reports = run_suites(args.suite, cfg)
    except HogeomError as err:
        if entry:
            runlog.finish_run(entry['id'], 'Error', reason=err.message)
        raise
    passed = all(r.passed for r in reports)
    if entry:
        failed = [r.name for r in reports if not r.passed]
        runlog.finish_run(entry['id'], 'Pass' if passed else 'Fail',
                          reason=f"Failed suites: {', '.join(failed)}" if failed else None,
                          summary={r.name: r.summary() for r in reports})
    payload = {
        'schema_version': config.SCHEMA_VERSION,
        'seed': cfg.seed,
        'passed': passed,
        'run_id': entry['id'] if entry else None,
        'suites': [r.to_dict() if args.json else r.summary() for r in reports],
        'host': host_stats(),
    }
    write_output(json_text(payload), args.out)
    return EXIT_OK if passed else EXIT_SUITE_FAILED


def cmd_history(args):
    if args.action == 'list':
        write_output(json_text(runlog.read_runs()), args.out)
        return EXIT_OK
    if args.id is None:
        raise ConfigError(f"history {args.action} needs a run id")
    if args.action == 'show':
        entry = runlog.get_run(args.id)
        if entry is None:
            raise ConfigError(f"Run {args.id} not found", id=args.id)
        write_output(runlog.format_run_report(entry), args.out)
        return EXIT_OK
    if not runlog.delete_run(args.id):
        raise ConfigError(f"Run {args.id} not found", id=args.id)
    write_output(json_text({'status': 'Run deleted', 'id': args.id}), args.out)
    return EXIT_OK


def cmd_sysinfo(args):
    write_output(json_text(host_stats()), args.out)
    return EXIT_OK


# --- Parser ---
def _common(p):
    p.add_argument('--out', help="write output to FILE instead of stdout")
    p.add_argument('--config', help="JSON job file; its keys fill flags not given on the command line")
    p.add_argument('--log-level', help="DEBUG, INFO, WARNING (default) or ERROR")


def _eval_flags(p, points=True):
    p.add_argument('--rank', type=int)
    p.add_argument('--m', required=False, default=None, help="multiplicity triple s,m,l")
    p.add_argument('--ell', type=float, default=0.0)
    p.add_argument('--lambda', dest='lam', default=None,
                   help="comma separated reals or re:im pairs, or 'rho'")
    if points:
        p.add_argument('--x', action='append', help="point x_1,...,x_r (repeatable)")
        p.add_argument('--grid', action='append', help="start:stop:count, one per axis")
        p.add_argument('--function', choices=['f', 'g'], default='f')
        p.add_argument('--max-height', type=int, default=config.MAX_HEIGHT)
        p.add_argument('--degree', type=int, default=config.TAYLOR_DEGREE)
        p.add_argument('--json', action='store_true', help="JSON instead of CSV")
    p.add_argument('--method', choices=list(METHODS), default='auto')


def build_parser():
    parser = argparse.ArgumentParser(prog='hogeom',
                                     description="tau_{-ell} hypergeometric functions for BC_r")
    sub = parser.add_subparsers(dest='command', required=True)
    parser.subcommands = sub.choices

    p = sub.add_parser('eval', help="evaluate F or G on points or a grid")
    _eval_flags(p)
    _common(p)
    p.set_defaults(handler=cmd_eval, needs=('m', 'lam'))

    p = sub.add_parser('sweep', help="evaluate over an ell grid")
    _eval_flags(p)
    p.add_argument('--ell-grid', default=None, help="start:stop:count")
    _common(p)
    p.set_defaults(handler=cmd_sweep, needs=('m', 'lam', 'ell_grid'))

    p = sub.add_parser('regions', help="region membership, ell range and standardization of m")
    p.add_argument('--m', default=None)
    _common(p)
    p.set_defaults(handler=cmd_regions, needs=('m',))

    p = sub.add_parser('cfunc', help="Harish-Chandra c-function")
    p.add_argument('--rank', type=int)
    p.add_argument('--m', default=None)
    p.add_argument('--lambda', dest='lam', default=None)
    _common(p)
    p.set_defaults(handler=cmd_cfunc, needs=('m', 'lam'))

    p = sub.add_parser('bounded', help="empirical boundedness verdict and hull membership")
    _eval_flags(p, points=False)
    _common(p)
    p.set_defaults(handler=cmd_bounded, needs=('m', 'lam'))

    p = sub.add_parser('verify', help="run verification suites")
    p.add_argument('--suite', default='all')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--tolerance', type=float, default=None, help="slack of the suite comparisons")
    p.add_argument('--json', action='store_true', help="include per-case results")
    p.add_argument('--no-record', action='store_true', help="do not add the run to the history")
    _common(p)
    p.set_defaults(handler=cmd_verify, needs=())

    p = sub.add_parser('history', help="list, show or delete recorded verification runs")
    p.add_argument('action', nargs='?', choices=['list', 'show', 'delete'], default='list')
    p.add_argument('id', nargs='?', type=int)
    _common(p)
    p.set_defaults(handler=cmd_history, needs=())

    p = sub.add_parser('sysinfo', help="host statistics")
    _common(p)
    p.set_defaults(handler=cmd_sysinfo, needs=())
    return parser


def apply_job_config(args, parser):
    """Fills flags left at their defaults from the --config file."""
    args.job = {}
    if not args.config:
        return args
    job = config.load_job_config(args.config)
    args.job = job
    subparser = parser.subcommands[args.command]
    for key, value in job.items():
        dest = {'lambda': 'lam'}.get(key, key).replace('-', '_')
        if not hasattr(args, dest) or dest in ('command', 'handler', 'needs', 'config', 'job'):
            continue
        if getattr(args, dest) == subparser.get_default(dest):
            if dest in ('x', 'grid') and isinstance(value, (str, int, float)):
                value = [value]
            setattr(args, dest, value)
    return args


def _check_required(args):
    missing = [name for name in args.needs if getattr(args, name, None) is None]
    if missing:
        flags = ', '.join('--' + {'lam': 'lambda'}.get(n, n).replace('_', '-') for n in missing)
        raise ConfigError(f"Missing required option(s): {flags}", missing=missing)


# flags whose values may start with a minus sign: -3,1,1 or -1:2:4
VALUE_FLAGS = ('--m', '--ell', '--lambda', '--x', '--grid', '--ell-grid')


def join_signed_values(argv):
    """Rewrites '--m -3,1,1' as '--m=-3,1,1' so argparse does not read the value as an option."""
    joined = []
    tokens = iter(argv)
    for token in tokens:
        if token in VALUE_FLAGS:
            value = next(tokens, None)
            if value is None:
                joined.append(token)
            elif value.startswith('-') and not value.startswith('--'):
                joined.append(f"{token}={value}")
            else:
                joined.extend([token, value])
        else:
            joined.append(token)
    return joined


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(join_signed_values(sys.argv[1:] if argv is None else argv))
    try:
        config.setup_logging(args.log_level)
        apply_job_config(args, parser)
        _check_required(args)
        return args.handler(args)
    except HogeomError as err:
        logger.info("%s failed: %s", args.command, err.message)
        sys.stderr.write(json.dumps(err.to_dict()) + '\n')
        return err.exit_code
    except Exception as e:
        logger.exception("Unexpected error in %s", args.command)
        sys.stderr.write(json.dumps({'status': 'error', 'code': 'internal_error',
                                     'message': str(e), 'details': {}}) + '\n')
        return 3
