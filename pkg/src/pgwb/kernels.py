"""Kernel backend selection.

The compiled extension is used when importable; set ``PGWB_PURE_PYTHON=1`` to
force the numpy/pure-Python fallback.
"""

import os

if os.environ.get("PGWB_PURE_PYTHON"):
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        from . import _pykernels as _impl

BACKEND = _impl.BACKEND
fill_right_row = _impl.fill_right_row
cayley = _impl.cayley
assoc_triples = _impl.assoc_triples
cocycle_check = _impl.cocycle_check
hom_search = _impl.hom_search
