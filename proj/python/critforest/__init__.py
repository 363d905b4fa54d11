"""Critical random forests: exact counts, samplers, drift calculus, diffusions.

Thin package wrapper around the compiled extension module.
"""

from _critforest import *  # noqa: F401,F403
from _critforest import __version__  # noqa: F401
