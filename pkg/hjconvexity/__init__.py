from importlib.metadata import PackageNotFoundError, version

from hjconvexity.config import *
from hjconvexity.convexity import *
from hjconvexity.experiments import *
from hjconvexity.hamiltonian import *
from hjconvexity.hopflax import *
from hjconvexity.spaces import *
from hjconvexity.structure import *
from hjconvexity.utils import *

try:
    __version__ = version("hjconvexity")
except PackageNotFoundError:
    __version__ = "version-unknown"
