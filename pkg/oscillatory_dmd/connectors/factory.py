from oscillatory_dmd.config import ConfigurationError
from oscillatory_dmd.connectors.binary_connector import BinaryConnector

SUPPORTED_EXTENSIONS = ("osd", "osm", "bin")


def get_connector(file_path: str):
    """
    Gets the correct type of connector, depending on the file type.
    :param file_path: Path to a snapshot (.osd) or model (.osm) file; .bin is accepted for either.
    :return: The connector.
    """
    extension = file_path.rsplit(".", 1)[-1].lower() if "." in file_path else ""
    match extension:
        case "osd" | "osm" | "bin":
            return BinaryConnector(file_path)
        case _:
            raise ConfigurationError(f"Unknown file type: '.{extension}'.\n"
                                     f"Currently supported extensions: .osd (snapshots), .osm (models), .bin")
