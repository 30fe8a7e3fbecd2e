"""Color local binary pattern face identification toolkit."""

from ._clbp import (
    ClbpError,
    detect,
    distance,
    enhance,
    enroll,
    identify,
    lbp,
    mutual_information,
    read_image,
    signatures,
    write_image,
)

__all__ = [
    "ClbpError",
    "detect",
    "distance",
    "enhance",
    "enroll",
    "identify",
    "lbp",
    "mutual_information",
    "read_image",
    "signatures",
    "write_image",
]
