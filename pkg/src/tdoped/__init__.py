"""Exact learning of T-doped stabilizer states from Bell samples and Pauli measurements."""
from .clifford import *  # noqa: F401,F403
from .f2 import *  # noqa: F401,F403
from .grid import *  # noqa: F401,F403
from .learner import *  # noqa: F401,F403
from .model import *  # noqa: F401,F403
from .oracle import *  # noqa: F401,F403
from .pauli import *  # noqa: F401,F403

__version__ = "0.1.0"
