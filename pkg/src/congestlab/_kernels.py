"""Kernel dispatch: the compiled extension when it imports, else pure Python.

Use :func:`use_backend` to pin a backend (tests and benchmarks compare both).
"""

from __future__ import annotations

from contextlib import contextmanager

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = ("compiled", "python") if _ckernels is not None else ("python",)
_active = _ckernels if _ckernels is not None else _pykernels


def backend() -> str:
    return "compiled" if _active is _ckernels and _ckernels is not None else "python"


def use_backend(name: str) -> None:
    global _active
    if name == "python":
        _active = _pykernels
    elif name == "compiled":
        if _ckernels is None:
            raise RuntimeError("compiled kernels are not built; run `pip install -e .`")
        _active = _ckernels
    else:
        raise ValueError(f"unknown backend {name!r}")


@contextmanager
def backend_scope(name: str):
    prev = backend()
    use_backend(name)
    try:
        yield
    finally:
        use_backend(prev)


def floyd_warshall(n, edges):
    return _active.floyd_warshall(n, edges)


def min_vertex_cover(n, edges, budget):
    if n > 64 and _active is _ckernels:
        return _pykernels.min_vertex_cover(n, edges, budget)
    return _active.min_vertex_cover(n, edges, budget)


def color(n, edges, c, precolor):
    if c > 64 and _active is _ckernels:
        return _pykernels.color(n, edges, c, precolor)
    return _active.color(n, edges, c, precolor)


def cycles8(n, edges, target, limit):
    if limit <= 0:
        return []
    return _active.cycles8(n, edges, target, limit)
