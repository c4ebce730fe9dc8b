"""Bandwidth-restricted graph generation toolkit."""

from .errors import (
    BandgenError,
    BandOverflowError,
    CapabilityError,
    DegeneracyError,
    FormatError,
    InputError,
    NumericError,
)
from .graph import (
    BandMatrix,
    Graph,
    Ordering,
    OrderingFamily,
    TrainSequence,
    apply_ordering,
    band_expand,
    band_reparameterize,
    banded_edge_set,
    bandwidth_of_ordering,
    from_edge_list,
    from_sequence,
    identity_ordering,
    savings_factor,
    to_sequence,
)
from .ordering import (
    OrderingConfig,
    TieBreak,
    bfs_order,
    components,
    cuthill_mckee,
    dfs_order,
    exact_bandwidth,
    make_ordering,
    pseudo_peripheral_node,
)

__version__ = "0.1.0"
