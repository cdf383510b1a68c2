# -*- coding: utf-8 -*-

import os
import tempfile


class AtomicFile(object):
    """Write to a temporary sibling of `path` and rename it over `path` on
    success, so readers never see a half-written checkpoint or config.

    Use as a context manager; an exception in the block discards the
    temporary file and leaves `path` untouched.
    """

    def __init__(self, path, mode='w'):
        self.path = os.path.realpath(path)
        directory, name = os.path.split(self.path)
        fd, self.temp = tempfile.mkstemp(prefix=name + '-', dir=directory)
        self._file = os.fdopen(fd, mode, encoding='utf-8')

    def __getattr__(self, name):
        return getattr(self._file, name)

    def commit(self):
        if self._file is None:
            return
        f, self._file = self._file, None
        try:
            f.close()
            os.replace(self.temp, self.path)
        except OSError:
            os.unlink(self.temp)
            raise

    def rollback(self):
        if self._file is None:
            return
        f, self._file = self._file, None
        f.close()
        try:
            os.unlink(self.temp)
        except OSError:
            pass

    close = commit

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        if exc_type is None:
            self.commit()
        else:
            self.rollback()

    @property
    def closed(self):
        return self._file is None


def create_file(path, data=''):
    """Create (or truncate) `path` and write `data`, a string or an
    iterable of strings."""
    with open(path, 'w', encoding='utf-8') as f:
        if isinstance(data, str):
            f.write(data)
        else:
            f.writelines(data)


def read_file(path):
    with open(path, encoding='utf-8') as f:
        return f.read()


def ensure_dir(path):
    """Create `path` (and parents) if missing and return it."""
    os.makedirs(path, exist_ok=True)
    return path
