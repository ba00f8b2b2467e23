"""Select the compiled kernel module when it is importable.

Set ``ROUGHPDO_BACKEND=python`` to force the numpy fallback.
"""

import logging
import os

from . import _fallback

logger = logging.getLogger(__name__)


def load(name="auto"):
    """Return the kernel module for ``name`` in {"auto", "cython", "python"}."""
    if name == "python":
        return _fallback
    try:
        from . import _kernels
    except ImportError:
        if name == "cython":
            raise
        logger.debug("compiled kernels unavailable, using numpy fallback")
        return _fallback
    return _kernels


kernels = load(os.environ.get("ROUGHPDO_BACKEND", "auto"))
BACKEND = "python" if kernels is _fallback else "cython"
