from .initial_data import InitialDataSpec
from .trajectory_io import read_trajectory, write_trajectory
