import logging
import logging.handlers
import math
import os

import numpy as np

from npgc.constants import ERROR_PREFIX, LOGDIR, WORKERS_ENV

handler = None


def build_logger(logger_name, logger_filename):
    global handler

    formatter = logging.Formatter(
        fmt="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )

    # Set the format of root handlers
    if not logging.getLogger().handlers:
        logging.basicConfig(level=logging.INFO)
    logging.getLogger().handlers[0].setFormatter(formatter)

    logger = logging.getLogger(logger_name)
    logger.setLevel(logging.INFO)

    # Add a file handler for all loggers, only when a log directory is configured
    if handler is None and LOGDIR:
        os.makedirs(LOGDIR, exist_ok=True)
        filename = os.path.join(LOGDIR, logger_filename)
        handler = logging.handlers.TimedRotatingFileHandler(
            filename, when='D', utc=True, encoding='UTF-8')
        handler.setFormatter(formatter)

        for name, item in logging.root.manager.loggerDict.items():
            if isinstance(item, logging.Logger):
                item.addHandler(handler)
    elif handler is not None and handler not in logger.handlers:
        logger.addHandler(handler)

    return logger


def error_line(exc):
    """Single-line diagnostic, `npgc-error: <Class>: <message>`."""
    message = " ".join(str(exc).split())
    return f"{ERROR_PREFIX}: {type(exc).__name__}: {message}"


def derive_rng(seed, *key):
    """
    Generator for the stream identified by `key` under the root `seed`.
    The same (seed, key) always yields the same stream, whatever order
    streams are requested in.
    """
    seq = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(seq)


def derive_seed(seed, *key):
    """64-bit child seed for the stream identified by `key`."""
    seq = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def split_list(lst, n):
    """Split a list into n (roughly) equal-sized chunks"""
    if not lst:
        return []
    chunk_size = math.ceil(len(lst) / n)
    return [lst[i:i+chunk_size] for i in range(0, len(lst), chunk_size)]


def resolve_workers(workers=None):
    if workers is None:
        env = os.environ.get(WORKERS_ENV)
        workers = int(env) if env else os.cpu_count() or 1
    return max(1, int(workers))
