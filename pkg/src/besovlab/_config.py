"""Process-wide knobs read from the environment."""
import os


def n_workers() -> int:
    """Worker count for scipy routines that accept one (``LAB_THREADS``, default 1)."""
    try:
        return max(1, int(os.environ.get("LAB_THREADS", "1")))
    except ValueError:
        return 1
