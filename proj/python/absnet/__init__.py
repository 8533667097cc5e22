"""Interference-aware aerial relay placement toolkit.

Channel models, interference-limited capacity graphs, spectral connectivity
metrics, flow evaluation, gradient movement control, rotor energy accounting,
and the scenario runner, all backed by the C++ core.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__doc__ = (__doc__ or "") + "\n\n" + (_core_doc or "")
