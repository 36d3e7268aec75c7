from .states import *
from .trajectories import *
