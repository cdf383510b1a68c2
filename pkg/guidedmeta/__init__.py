# -*- coding: utf-8 -*-

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("guidedmeta")
except PackageNotFoundError:
    __version__ = '0.1'
