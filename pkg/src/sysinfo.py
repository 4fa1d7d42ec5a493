"""Host statistics embedded into verification reports."""
import platform
import socket

import numpy
import psutil
import scipy

from src import config

# prime the counter so the first host_stats() call reports a real value
psutil.cpu_percent(interval=None)


def host_stats():
    mem = psutil.virtual_memory()
    return {
        'hostname': socket.gethostname(),
        'platform': platform.platform(),
        'python': platform.python_version(),
        'numpy': numpy.__version__,
        'scipy': scipy.__version__,
        'cpu_count': psutil.cpu_count(logical=True),
        'cpu_usage': psutil.cpu_percent(interval=0.1),
        'mem_used': mem.used,
        'mem_total': mem.total,
        'memory_usage': mem.percent,
        'workers': config.thread_count(),
    }
