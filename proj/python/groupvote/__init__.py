from ._groupvote import *  # noqa: F401,F403
from ._groupvote import GroupvoteError, InvariantViolation  # noqa: F401
