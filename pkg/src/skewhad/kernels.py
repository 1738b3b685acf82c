"""Kernel selection: the compiled module when available, else pure Python.

Set ``SKEWHAD_PURE=1`` to force the Python implementations.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("SKEWHAD_PURE"):
    try:
        from . import _ckernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

quad_profile = _impl.quad_profile
canon_form = _impl.canon_form
max_transitive_chain = _impl.max_transitive_chain
gf3_weight_distribution = _impl.gf3_weight_distribution
gf3_words_of_weight = _impl.gf3_words_of_weight
RowSearch = _impl.RowSearch


def backend_module(name):
    """Return the kernel module by name ("cython" or "python")."""
    if name == "python":
        return _pykernels
    from . import _ckernels

    return _ckernels
