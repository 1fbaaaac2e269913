from .fields import *
from .witnesses import *
