from oscillatory_dmd.connectors.base import Connector
from oscillatory_dmd.connectors.binary_connector import MODEL_MAGIC, SNAPSHOT_MAGIC, BinaryConnector
from oscillatory_dmd.connectors.factory import get_connector

__all__ = ["MODEL_MAGIC", "SNAPSHOT_MAGIC", "BinaryConnector", "Connector", "get_connector"]
