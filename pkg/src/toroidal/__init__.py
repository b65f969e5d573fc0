"""Circle- and torus-valued coordinates for point clouds from persistent cohomology."""
from .cohomology import Barcode, Interval, lift_to_integer, persistent_cohomology, select_classes
from .complex import Cocycle1, FiltrationComplex, PointCloud, maxmin_sample, vietoris_rips
from .coords import (CircleMap, CoverData, TorusMap, circular_coordinates, integrate,
                     partition_of_unity, sparse_integrate, toroidal_coordinates)
from .correlation import correlation_matrix, estimate_dirichlet, off_diagonal_ratio
from .errors import NumericalError, ToroidalError, ValidationError
from .harmonic import harmonic_representative
from .lattice import lll_reduce, low_energy_representatives
from .metrics import dsmv_form, estimated_dirichlet_form, neighbor_graph

__version__ = "0.1.0"
