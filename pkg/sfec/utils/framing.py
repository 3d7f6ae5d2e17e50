# Copyright 2025 Google LLC
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import logging
import struct
from typing import NamedTuple

from sfec.errors import FramingError

logger = logging.getLogger(__name__)

MAGIC = b"SFEC"
VERSION = 1
# magic, version, interleaving depth, original payload length in bytes
HEADER = struct.Struct(">4sBHQ")


class Frame(NamedTuple):
    depth: int
    length: int
    payload: bytes


def is_framed(data: bytes) -> bool:
    return data[: len(MAGIC)] == MAGIC


def wrap(payload: bytes, depth: int, length: int) -> bytes:
    """Prefix an encoded stream with the SFEC header.

    Args:
        payload: bit-packed channel stream
        depth: interleaving depth used to produce it (1 for plain RS/conv)
        length: byte length of the original, unencoded input
    """
    if not 1 <= depth <= 0xFFFF:
        raise FramingError(f"depth {depth} does not fit the header")
    return HEADER.pack(MAGIC, VERSION, depth, length) + payload


def unwrap(data: bytes) -> Frame:
    if len(data) < HEADER.size:
        raise FramingError(f"container is {len(data)} bytes, shorter than its header")
    magic, version, depth, length = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FramingError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FramingError(f"unsupported container version {version}")
    if depth < 1:
        raise FramingError("depth must be at least 1")
    logger.debug(f"Unwrapped SFEC frame: depth={depth}, length={length}")
    return Frame(depth=depth, length=length, payload=data[HEADER.size :])
