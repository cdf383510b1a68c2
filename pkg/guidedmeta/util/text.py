# -*- coding: utf-8 -*-

import sys


def printout(*args, **kwargs):
    """`print` to `sys.stdout`, resolved at call time so tests can capture
    it."""
    print(*args, file=sys.stdout, **kwargs)


def printerr(*args, **kwargs):
    print(*args, file=sys.stderr, **kwargs)
