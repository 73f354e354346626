"""Composition of network scattering matrices by Schur reduction and the
generalized star product, with Grassmann and Gaussian verification paths."""

from .errors import (
    DataMismatch,
    DisconnectedGraph,
    NetstarError,
    NonComposable,
    NonInvertibleInteriorBlock,
    SingularBlock,
    SingularMatrix,
)
from .graph import Graph
from .scattering import (
    LagrangianMatrix,
    NetworkData,
    ReductionResult,
    assemble_lagrangian,
    compose_iterative,
    connecting_from_metric,
    exterior_inverse_check,
    grassmann_verify,
    make_network_data,
    metric_network_data,
    reduce,
    star_product,
)

__version__ = "0.1.0"
