# -*- coding: utf-8 -*-

"""INI experiment files and the `Option` descriptors reading them.

A value is looked up in the experiment file, then in the files named by
`[inherit] file` (first match wins), then in the default of the `Option`
declared for it.
"""

import os.path
from configparser import ConfigParser, Error as ParserError
from inspect import cleandoc

from guidedmeta.core import ExtensionPoint, GuidedMetaError
from guidedmeta.util.file import AtomicFile

_missing = object()


class ConfigurationError(GuidedMetaError):
    """Exception raised when a value in the experiment file is not valid."""

    title = 'Configuration Error'


def _split(value, sep):
    if not value:
        return []
    if not isinstance(value, str):
        return [item for item in value if item not in (None, '')]
    return [item.strip() for item in value.split(sep) if item.strip()]


class Configuration(object):
    """An experiment file, its inherited files and the option defaults.

    `Configuration(None)` holds the defaults only; `set()` can still add
    values, but `save()` has nowhere to write them.
    """

    def __init__(self, filename):
        self.filename = filename
        self.parser = ConfigParser(strict=False, interpolation=None)
        self.parents = []
        self._sections = {}
        if filename and os.path.isfile(filename):
            try:
                self.parser.read(filename, encoding='utf-8')
            except (ParserError, UnicodeDecodeError) as e:
                raise ConfigurationError("Cannot parse {}: {}"
                                         .format(filename, e))
            self.parents = self._read_parents()

    def __repr__(self):
        return '<Configuration {}>'.format(self.filename or '(defaults)')

    def __getitem__(self, name):
        if name not in self._sections:
            self._sections[name] = Section(self, name)
        return self._sections[name]

    def __contains__(self, name):
        return name in self.sections()

    def get(self, section, key, default=''):
        return self[section].get(key, default)

    def set(self, section, key, value):
        """Change a value in memory; `save()` writes it out."""
        self[section].set(key, value)

    def has_option(self, section, key, defaults=True):
        return self[section].contains(key, defaults)

    def sections(self, defaults=True):
        names = set(self.parser.sections())
        for parent in self.parents:
            names.update(parent.sections(defaults=False))
        if defaults:
            names.update(section for section, _ in Option.registry)
        return sorted(names)

    def save(self):
        """Write the explicitly set values of this file (not those of the
        parents) atomically."""
        if not self.filename:
            return
        parser = ConfigParser(interpolation=None)
        for section in sorted(self.parser.sections()):
            parser.add_section(section)
            for key in sorted(self.parser.options(section)):
                parser.set(section, key, self.parser.get(section, key))
        with AtomicFile(self.filename, 'w') as fd:
            fd.write('# -*- coding: utf-8 -*-\n\n')
            parser.write(fd)

    def _read_parents(self):
        parents = []
        if not self.parser.has_option('inherit', 'file'):
            return parents
        base = os.path.dirname(self.filename)
        for name in _split(self.parser.get('inherit', 'file'), ','):
            path = name if os.path.isabs(name) else os.path.join(base, name)
            if not os.path.isfile(path):
                raise ConfigurationError("Inherited configuration {} not "
                                         "found".format(path))
            parents.append(Configuration(path))
        return parents


class Section(object):
    """One `[section]` of a `Configuration`, with typed accessors."""

    __slots__ = ('config', 'name')

    def __init__(self, config, name):
        self.config = config
        self.name = name

    def __repr__(self):
        return '<Section [{}]>'.format(self.name)

    def contains(self, key, defaults=True):
        if self.config.parser.has_option(self.name, key):
            return True
        if any(p[self.name].contains(key, False) for p in self.config.parents):
            return True
        return defaults and (self.name, key) in Option.registry

    __contains__ = contains

    def _lookup(self, key):
        if self.config.parser.has_option(self.name, key):
            return self.config.parser.get(self.name, key)
        for parent in self.config.parents:
            value = parent[self.name]._lookup(key)
            if value is not _missing:
                return value
        return _missing

    def get(self, key, default=''):
        value = self._lookup(key)
        if value is not _missing:
            return value
        option = Option.registry.get((self.name, key))
        return option.dumps(option.default) if option else default

    def _convert(self, key, default, convert, kind):
        value = self.get(key, default)
        try:
            return convert(value or 0)
        except (TypeError, ValueError):
            raise ConfigurationError("[{}] {}: expected {}, got {!r}"
                                     .format(self.name, key, kind, value))

    def getint(self, key, default=''):
        return self._convert(key, default, int, 'integer')

    def getfloat(self, key, default=''):
        return self._convert(key, default, float, 'float')

    def getlist(self, key, default='', sep=','):
        return _split(self.get(key, default), sep)

    def getpath(self, key, default=''):
        """The value as an absolute path; relative values are taken relative
        to the directory of the experiment file."""
        path = self.get(key, default)
        if not path:
            return default
        if not os.path.isabs(path):
            base = os.path.dirname(self.config.filename or '') or os.getcwd()
            path = os.path.join(base, path)
        return os.path.realpath(path)

    def options(self):
        """`(key, value)` pairs set in this section or one of the inherited
        files, in that order. Defaults are not included."""
        seen = []
        sources = [self.config] + list(self.config.parents)
        for source in sources:
            if source.parser.has_section(self.name):
                for key in source.parser.options(self.name):
                    if key not in seen:
                        seen.append(key)
        return [(key, self.get(key)) for key in seen]

    def set(self, key, value):
        if not self.config.parser.has_section(self.name):
            self.config.parser.add_section(self.name)
        self.config.parser.set(self.name, key,
                               '' if value is None else str(value))


class ConfigSection(object):
    """Descriptor returning a whole `Section` of the owner's `config`."""

    def __init__(self, name, doc=''):
        self.name = name
        self.__doc__ = cleandoc(doc)

    def __get__(self, instance, owner):
        if instance is None:
            return self
        config = getattr(instance, 'config', None)
        if isinstance(config, Configuration):
            return config[self.name]

    def __repr__(self):
        return '<ConfigSection [{}]>'.format(self.name)


class Option(object):
    """Descriptor for a single `[section] name` value.

    Every option registers itself, so `Configuration.get` knows its default
    even for files that do not mention it.
    """

    registry = {}

    def __init__(self, section, name, default=None, doc=''):
        self.section = section
        self.name = name
        self.default = default
        self.registry[(section, name)] = self
        self.__doc__ = cleandoc(doc).strip()

    def __get__(self, instance, owner):
        if instance is None:
            return self
        config = getattr(instance, 'config', None)
        if isinstance(config, Configuration):
            return self.accessor(config[self.section], self.name,
                                 self.dumps(self.default))

    def __set__(self, instance, value):
        raise AttributeError("Options are read-only, use "
                             "Configuration.set()")

    def __repr__(self):
        return '<{} [{}] {}>'.format(self.__class__.__name__, self.section,
                                     self.name)

    def accessor(self, section, name, default):
        return section.get(name, default)

    def dumps(self, value):
        if value is None:
            return ''
        if isinstance(value, bool):
            return 'enabled' if value else 'disabled'
        return str(value)


class IntOption(Option):

    def accessor(self, section, name, default):
        return section.getint(name, default)


class FloatOption(Option):

    def accessor(self, section, name, default):
        return section.getfloat(name, default)


class ListOption(Option):
    """Values separated by `sep`, returned as a list of stripped strings."""

    def __init__(self, section, name, default=None, sep=',', doc=''):
        self.sep = sep
        Option.__init__(self, section, name, default, doc)

    def accessor(self, section, name, default):
        return section.getlist(name, default, self.sep)

    def dumps(self, value):
        if isinstance(value, (list, tuple)):
            return '{} '.format(self.sep).join(str(v) for v in value)
        return Option.dumps(self, value)


class ChoiceOption(Option):
    """One of a fixed set of values; the first choice is the default."""

    def __init__(self, section, name, choices, doc=''):
        Option.__init__(self, section, name, str(choices[0]), doc)
        self.choices = frozenset(str(c).strip() for c in choices)

    def accessor(self, section, name, default):
        value = section.get(name, default)
        if value not in self.choices:
            raise ConfigurationError("[{}] {}: expected one of ({}), got {!r}"
                                     .format(section.name, name,
                                             ', '.join(sorted(self.choices)),
                                             value))
        return value


class PathOption(Option):
    """A path, resolved against the directory of the experiment file."""

    def accessor(self, section, name, default):
        return section.getpath(name, default)


class ExtensionOption(Option):
    """Name of a component implementing `interface`.

    Components are matched on their `name` attribute. Raises a
    `ConfigurationError` if no enabled component implementing the interface
    carries that name.
    """

    def __init__(self, section, name, interface, default=None, doc=''):
        Option.__init__(self, section, name, default, doc)
        self.xtnpt = ExtensionPoint(interface)

    def __get__(self, instance, owner):
        if instance is None:
            return self
        value = Option.__get__(self, instance, owner)
        for impl in self.xtnpt.extensions(instance):
            if getattr(impl, 'name', impl.__class__.__name__) == value:
                return impl
        raise ConfigurationError(
            "[{}] {}: no enabled {} is named {!r}; available: {}".format(
                self.section, self.name, self.xtnpt.interface.__name__,
                value, ', '.join(self.choices(instance)) or '(none)'))

    def choices(self, instance):
        """Names of the enabled implementations, sorted."""
        return sorted(getattr(impl, 'name', impl.__class__.__name__)
                      for impl in self.xtnpt.extensions(instance))
