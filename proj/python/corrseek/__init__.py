from ._corrseek import *  # noqa: F401,F403
from ._corrseek import __version__  # noqa: F401
