"""Small file helpers shared by the snapshot/cache/report writers."""

import os
import tempfile
from contextlib import contextmanager


@contextmanager
def atomic_write(path):
    """Open a temp file for writing and rename it over `path` on success.

    Readers never observe a partially written file; on error the temp file
    is removed and the destination is left untouched.
    """
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            yield handle
        os.replace(tmp_path, path)
    except BaseException:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise


def fmt(x):
    """Shortest round-trip decimal form of a float, stable across runs."""
    return repr(float(x))
