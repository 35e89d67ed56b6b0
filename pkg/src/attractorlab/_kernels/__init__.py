"""Kernel selection: compiled Cython core when available, numpy fallback else.

Set ``ATTRACTORLAB_PURE=1`` in the environment to force the fallback (useful
for benchmarking and for debugging suspected kernel issues).
"""

import os

from . import _ref

if os.environ.get("ATTRACTORLAB_PURE"):
    _impl = _ref
else:
    try:
        from . import _core as _impl
    except ImportError:
        _impl = _ref

IMPLEMENTATION = _impl.IMPL
BLOWUP_L2SQ = _ref.BLOWUP_L2SQ

chafee_march = _impl.chafee_march
parabolic_march = _impl.parabolic_march
maxmin_sq = _impl.maxmin_sq

reference = _ref
