# -*- coding: utf-8 -*-

import re

_TRUE = frozenset(('yes', 'true', 'enabled', 'on'))


def as_bool(value, default=False):
    """Interpret a config value: `enabled`, `yes`, `true`, `on` and non-zero
    numbers are true, unknown strings give `default`."""
    if not isinstance(value, str):
        return bool(value)
    value = value.strip().lower()
    try:
        return float(value) != 0
    except ValueError:
        pass
    if value in _TRUE:
        return True
    if value in ('no', 'false', 'disabled', 'off'):
        return False
    return default


def to_list(splittable, sep=','):
    """Split a string at `sep` and return a list without any empty items."""
    split = [x.strip() for x in splittable.split(sep)]
    return [item for item in split if item]


def to_floats(splittable, sep=','):
    """Split a string at `sep` and convert every item to `float`.

    Lists and tuples are converted item by item.
    """
    if isinstance(splittable, str):
        splittable = to_list(splittable, sep)
    return [float(item) for item in splittable]


def parse_ranges(values):
    """Parse `lo:hi` items (strings or pairs) into `(lo, hi)` float tuples."""
    ranges = []
    for item in values:
        if isinstance(item, str):
            lo, sep, hi = item.partition(':')
            if not sep:
                raise ValueError("range {!r} is not of the form lo:hi"
                                 .format(item))
            item = (lo, hi)
        lo, hi = (float(v) for v in item)
        ranges.append((lo, hi))
    return ranges


def snake_key(label):
    """Turn a human-readable report label into a snake_cased key.

    `mean value (v: [0,3])` becomes `mean_value_v_0_3`.
    """
    return re.sub(r'[^0-9a-z.\-]+', '_', label.lower()).strip('_')


def fmt_num(value):
    """Shortest readable rendering of a number for labels and file names."""
    return '{:g}'.format(float(value))
