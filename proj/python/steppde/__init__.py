from ._steppde import *  # noqa: F401,F403
