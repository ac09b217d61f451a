"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: DataError -> 2, ModelError -> 3.
"""


class NetmixError(Exception):
    """Base class for all netmix errors."""


class DataError(NetmixError):
    """Malformed or inconsistent input data (files, partitions, specs)."""


class EdgeListError(DataError):
    """Edge-list text that cannot be parsed into a graph."""


class PartitionFileError(DataError):
    """Partition file missing nodes, naming unknown nodes, or unparseable."""


class NodeSetMismatchError(DataError):
    """Two partitions that do not cover the same node set."""


class InfeasibleSpecError(DataError):
    """A planted-block request that asks for more edges than node pairs exist."""


class ModelError(NetmixError):
    """A fit that cannot proceed."""


class DegenerateNodeError(ModelError):
    """EM responsibilities underflowed to zero for every group on some node.

    This is the group-bias failure mode of the finite mixture: the node fits
    no group at all and the update would silently produce NaNs.
    """

    def __init__(self, nodes):
        self.nodes = list(nodes)
        super().__init__(
            "responsibilities are zero for every group on node(s) %s"
            % ", ".join(str(n) for n in self.nodes)
        )
