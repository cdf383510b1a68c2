# -*- coding: utf-8 -*-

"""A small reverse-mode differentiation tape over numpy arrays.

Only the operations the policy loss needs are provided: elementwise
arithmetic with broadcasting, matrix products, `tanh`, `exp`, `log`,
sums, slicing and reshaping. Every `Var` remembers its parents together
with the vector-Jacobian product that maps its own gradient to theirs;
`backward` walks the graph in reverse topological order.
"""

import numpy as np

__all__ = ['Var', 'constant', 'exp', 'gradient', 'log', 'matmul', 'tanh']


def _unbroadcast(grad, shape):
    """Sum `grad` down to `shape` after numpy broadcasting."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


class Var(object):
    """A node on the tape."""

    __slots__ = ('value', 'grad', 'parents', 'requires_grad')

    def __init__(self, value, parents=(), requires_grad=True):
        self.value = np.asarray(value, dtype=float)
        self.grad = None
        self.parents = tuple(parents)
        self.requires_grad = requires_grad

    def __repr__(self):
        return '<Var shape={} requires_grad={}>'.format(self.value.shape,
                                                        self.requires_grad)

    @property
    def shape(self):
        return self.value.shape

    def _derive(self, value, *links):
        """Result node of an operation on `links` (`(parent, vjp)` pairs)."""
        links = tuple((p, f) for p, f in links if p.requires_grad)
        return Var(value, links, requires_grad=bool(links))

    # Arithmetic

    def __add__(self, other):
        other = _lift(other)
        return self._derive(
            self.value + other.value,
            (self, lambda g: _unbroadcast(g, self.shape)),
            (other, lambda g: _unbroadcast(g, other.shape)))

    __radd__ = __add__

    def __neg__(self):
        return self._derive(-self.value, (self, lambda g: -g))

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) + (-self)

    def __mul__(self, other):
        other = _lift(other)
        return self._derive(
            self.value * other.value,
            (self, lambda g: _unbroadcast(g * other.value, self.shape)),
            (other, lambda g: _unbroadcast(g * self.value, other.shape)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _lift(other)
        return self._derive(
            self.value / other.value,
            (self, lambda g: _unbroadcast(g / other.value, self.shape)),
            (other, lambda g: _unbroadcast(
                -g * self.value / other.value ** 2, other.shape)))

    def __rtruediv__(self, other):
        return _lift(other) / self

    def __matmul__(self, other):
        return matmul(self, other)

    def __rmatmul__(self, other):
        return matmul(other, self)

    def __getitem__(self, index):
        def vjp(g):
            full = np.zeros(self.shape)
            full[index] = g
            return full
        return self._derive(self.value[index], (self, vjp))

    def reshape(self, *shape):
        return self._derive(self.value.reshape(*shape),
                            (self, lambda g: g.reshape(self.shape)))

    def sum(self, axis=None):
        def vjp(g):
            if axis is not None:
                g = np.expand_dims(g, axis)
            return np.broadcast_to(g, self.shape).copy()
        return self._derive(self.value.sum(axis=axis), (self, vjp))

    # Backward pass

    def backward(self):
        """Accumulate d(self)/d(node) into `grad` of every upstream node."""
        order, seen = [], set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            stack.extend((p, False) for p, _ in node.parents)

        self.grad = np.ones(self.shape)
        for node in reversed(order):
            if node.grad is None:
                continue
            for parent, vjp in node.parents:
                contribution = vjp(node.grad)
                if parent.grad is None:
                    parent.grad = contribution
                else:
                    parent.grad = parent.grad + contribution


def _lift(value):
    return value if isinstance(value, Var) else constant(value)


def constant(value):
    return Var(value, requires_grad=False)


def matmul(a, b):
    a, b = _lift(a), _lift(b)
    return a._derive(a.value @ b.value,
                     (a, lambda g: g @ b.value.T),
                     (b, lambda g: a.value.T @ g))


def tanh(x):
    out = np.tanh(x.value)
    return x._derive(out, (x, lambda g: g * (1.0 - out ** 2)))


def exp(x):
    out = np.exp(x.value)
    return x._derive(out, (x, lambda g: g * out))


def log(x):
    return x._derive(np.log(x.value), (x, lambda g: g / x.value))


def gradient(fn, x0):
    """Value and gradient of the scalar function `fn` at `x0`."""
    x = Var(np.array(x0, dtype=float))
    out = fn(x)
    if out.value.size != 1:
        raise ValueError("gradient() needs a scalar function")
    out.backward()
    grad = x.grad if x.grad is not None else np.zeros(x.shape)
    return float(out.value), grad
