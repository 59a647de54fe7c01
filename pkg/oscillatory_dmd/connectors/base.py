from abc import ABC, abstractmethod

from oscillatory_dmd.dmd.dispatch import DmdModel
from oscillatory_dmd.solver.dtos.snapshot_matrix import SnapshotMatrix


class Connector(ABC):
    """
    An abstract base class that defines the interface for all snapshot and model stores.
    """
    @abstractmethod
    def read_snapshots(self) -> SnapshotMatrix:
        """
        Reads the snapshot matrix stored at the connector's location.
        :return: The snapshots with their time step, grid and eps metadata.
        """
        pass

    @abstractmethod
    def write_snapshots(self, snapshots: SnapshotMatrix):
        """
        Writes a snapshot matrix, replacing any existing content.
        :param snapshots: The snapshots to persist.
        :return: None
        """
        pass

    @abstractmethod
    def read_model(self) -> DmdModel:
        """
        Reads a fitted DMD model of any of the four types.
        """
        pass

    @abstractmethod
    def write_model(self, model: DmdModel):
        """
        Writes a fitted DMD model.
        :param model: Classical, piDMD, CN or SI model.
        :return: None
        """
        pass
