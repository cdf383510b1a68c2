# -*- coding: utf-8 -*-

"""Exceptions and the component architecture.

Environments, sampling methods and run participants are components: classes
that declare the interfaces they implement and are instantiated once per
`ComponentManager` (the experiment) when an `ExtensionPoint` asks for them.
"""

import sys

__all__ = ['Component', 'ComponentManager', 'ExtensionPoint', 'implements',
           'Interface', 'GuidedMetaError', 'InputError', 'StateError',
           'RunError']


class GuidedMetaError(Exception):
    """Base class of the errors GuidedMeta raises on purpose.

    `title` names the kind of error in command line messages.
    """

    title = "GuidedMeta Error"

    def __init__(self, message, title=None):
        super(GuidedMetaError, self).__init__(message)
        self.message = message
        if title:
            self.title = title

    def __str__(self):
        return self.message


class InputError(GuidedMetaError):
    """Raised when an operation receives arguments it cannot work with."""

    title = "Input Error"


class StateError(GuidedMetaError):
    """Raised when an operation is called before the data it needs exists."""

    title = "State Error"


class RunError(GuidedMetaError):
    """Raised when training or evaluation fails at runtime.

    `diagnostics` holds whatever context the raiser could collect (task,
    step index, gradient norm...).
    """

    title = "Run Error"

    def __init__(self, message, diagnostics=None, **kwargs):
        super(RunError, self).__init__(message, **kwargs)
        self.diagnostics = dict(diagnostics or {})

    def __str__(self):
        if not self.diagnostics:
            return self.message
        details = ', '.join('{}={!r}'.format(k, v)
                            for k, v in sorted(self.diagnostics.items()))
        return '{} ({})'.format(self.message, details)


class Interface(object):
    """Base class of the protocols an `ExtensionPoint` collects."""


class ExtensionPoint(property):
    """Class attribute listing the enabled components implementing
    `interface`, activated in the owner's component manager."""

    def __init__(self, interface):
        property.__init__(self, self.extensions)
        self.interface = interface
        self.__doc__ = "Components implementing `{}.{}`".format(
            interface.__module__, interface.__name__)

    def extensions(self, component):
        classes = ComponentMeta._registry.get(self.interface, ())
        return [c for c in (component.compmgr[cls] for cls in classes) if c]

    def __repr__(self):
        return "<ExtensionPoint {}>".format(self.interface.__name__)


class ComponentMeta(type):
    """Registers every concrete component class and the interfaces it
    implements; makes components singletons per manager."""

    _components = []
    _registry = {}

    def __new__(mcs, name, bases, d):
        cls = type.__new__(mcs, name, bases, d)
        if name == 'Component' or d.get('abstract'):
            return cls
        ComponentMeta._components.append(cls)
        for klass in cls.__mro__:
            for interface in klass.__dict__.get('_implements', ()):
                implementers = ComponentMeta._registry.setdefault(interface,
                                                                  [])
                if cls not in implementers:
                    implementers.append(cls)
        return cls

    def __call__(cls, *args, **kwargs):
        if issubclass(cls, ComponentManager):
            self = cls.__new__(cls)
            self.compmgr = self
            self.__init__(*args, **kwargs)
            return self

        assert args and isinstance(args[0], ComponentManager), \
            "First argument must be a ComponentManager instance"
        compmgr = args[0]
        self = compmgr.components.get(cls)
        if self is None:
            self = cls.__new__(cls)
            self.compmgr = compmgr
            compmgr.component_activated(self)
            self.__init__()
            compmgr.components[cls] = self
        return self


class Component(object, metaclass=ComponentMeta):
    """Base class for components.

    Subclasses setting `abstract = True` in their body are not registered.
    """

    @staticmethod
    def implements(*interfaces):
        """Declare, inside a class body, the interfaces the class
        implements."""
        frame = sys._getframe(1)
        namespace = frame.f_locals
        assert namespace is not frame.f_globals and \
            '__module__' in namespace, \
            'implements() can only be used in a class definition'
        namespace.setdefault('_implements', []).extend(interfaces)

    def __repr__(self):
        return '<Component {}.{}>'.format(self.__class__.__module__,
                                          self.__class__.__name__)


implements = Component.implements


class ComponentManager(object):
    """Pool of the components activated for one experiment."""

    def __init__(self):
        self.components = {}
        self.enabled = {}
        if isinstance(self, Component):
            self.components[self.__class__] = self

    def __contains__(self, cls):
        return cls in self.components

    def __getitem__(self, cls):
        """The instance of component `cls`, activated on first access, or
        `None` when `cls` is disabled."""
        if not self.is_enabled(cls):
            return None
        component = self.components.get(cls)
        if component is None and not issubclass(cls, ComponentManager):
            if cls not in ComponentMeta._components:
                raise GuidedMetaError('Component "{}" not registered'
                                      .format(cls.__name__))
            try:
                component = cls(self)
            except TypeError as e:
                raise GuidedMetaError('Unable to instantiate component {!r} '
                                      '({})'.format(cls, e))
        return component

    def is_enabled(self, cls):
        if cls not in self.enabled:
            self.enabled[cls] = self.is_component_enabled(cls)
        return self.enabled[cls]

    def disable_component(self, component):
        """Disable a component class (or the class of an instance)."""
        cls = component if isinstance(component, type) else type(component)
        self.enabled[cls] = False
        self.components[cls] = None

    def enable_component(self, component):
        cls = component if isinstance(component, type) else type(component)
        self.enabled[cls] = True

    def component_activated(self, component):
        """Hook called on every new component before its `__init__`."""

    def is_component_enabled(self, cls):
        """Hook deciding whether `cls` may be activated; `False` or `None`
        keeps it out."""
        return True
