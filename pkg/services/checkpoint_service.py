import json
import logging
import struct
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from models.network import AdamState, Mlp
from utils.errors import (
    CheckpointFormatError, CheckpointTruncatedError, CheckpointVersionError, DimensionError
)

logger = logging.getLogger(__name__)

MAGIC = b'QNAV'
FORMAT_VERSION = 1
_HEADER = struct.Struct('<4sII')  # magic, version, metadata length
_FLOAT = np.dtype('<f8')


class CheckpointService:
    """Binary checkpoint: header, JSON metadata, float64 parameter blocks, Adam moments"""

    @staticmethod
    def _blocks(net: Mlp, adam: AdamState) -> List[np.ndarray]:
        blocks = []
        for w, b in zip(net.weights, net.biases):
            blocks.extend([w, b])
        for arrays in (adam.m_weights, adam.m_biases, adam.v_weights, adam.v_biases):
            blocks.extend(arrays)
        return blocks

    @staticmethod
    def save_checkpoint(file_path: str, net: Mlp, adam: AdamState, meta: Optional[Dict[str, Any]] = None) -> None:
        metadata = dict(meta or {})
        metadata.update({
            'format_version': FORMAT_VERSION,
            'layer_dims': list(net.layer_dims),
            'adam': dict(adam.hyperparameters(), t=adam.t),
        })
        meta_bytes = json.dumps(metadata, sort_keys=True).encode('utf-8')
        with open(file_path, 'wb') as f:
            f.write(_HEADER.pack(MAGIC, FORMAT_VERSION, len(meta_bytes)))
            f.write(meta_bytes)
            for block in CheckpointService._blocks(net, adam):
                f.write(np.ascontiguousarray(block, dtype=_FLOAT).tobytes(order='C'))
        logger.info("Saved checkpoint %s", file_path)

    @staticmethod
    def _read_header(data: bytes, file_path: str) -> Tuple[Dict[str, Any], int]:
        if len(data) < 4 or data[:4] != MAGIC:
            if len(data) < 4 and MAGIC.startswith(data):
                raise CheckpointTruncatedError(f"{file_path}: file ends inside the header")
            raise CheckpointFormatError(f"{file_path}: not a checkpoint (bad magic {data[:4]!r})")
        if len(data) < _HEADER.size:
            raise CheckpointTruncatedError(f"{file_path}: file ends inside the header")
        _, version, meta_len = _HEADER.unpack_from(data, 0)
        if version != FORMAT_VERSION:
            raise CheckpointVersionError(f"{file_path}: format version {version}, expected {FORMAT_VERSION}")
        end = _HEADER.size + meta_len
        if len(data) < end:
            raise CheckpointTruncatedError(f"{file_path}: file ends inside the metadata block")
        try:
            meta = json.loads(data[_HEADER.size:end].decode('utf-8'))
        except (UnicodeDecodeError, json.JSONDecodeError) as e:
            raise CheckpointFormatError(f"{file_path}: unreadable metadata: {e}") from e
        if not isinstance(meta, dict) or 'layer_dims' not in meta or 'adam' not in meta:
            raise CheckpointFormatError(f"{file_path}: metadata lacks layer_dims or adam")
        return meta, end

    @staticmethod
    def read_metadata(file_path: str) -> Dict[str, Any]:
        with open(file_path, 'rb') as f:
            data = f.read()
        return CheckpointService._read_header(data, file_path)[0]

    @staticmethod
    def load_checkpoint(file_path: str, expected_dims: Optional[Sequence[int]] = None
                        ) -> Tuple[Mlp, AdamState, Dict[str, Any]]:
        """Restore network, optimizer state and metadata; expected_dims guards against a shape mismatch"""
        with open(file_path, 'rb') as f:
            data = f.read()
        meta, offset = CheckpointService._read_header(data, file_path)

        dims = [int(d) for d in meta['layer_dims']]
        if expected_dims is not None and dims != [int(d) for d in expected_dims]:
            raise DimensionError(f"{file_path}: checkpoint network is {dims}, expected {list(expected_dims)}")

        net = Mlp.create(dims)
        hyper = meta['adam']
        adam = AdamState.create(net, lr=float(hyper['lr']), beta1=float(hyper['beta1']),
                                beta2=float(hyper['beta2']), eps=float(hyper['eps']))
        adam.t = int(hyper['t'])

        blocks = CheckpointService._blocks(net, adam)
        needed = offset + sum(b.size for b in blocks) * _FLOAT.itemsize
        if len(data) < needed:
            raise CheckpointTruncatedError(f"{file_path}: {len(data)} bytes, parameters need {needed}")
        if len(data) > needed:
            raise CheckpointFormatError(f"{file_path}: {len(data) - needed} unexpected trailing bytes")

        for block in blocks:
            values = np.frombuffer(data, dtype=_FLOAT, count=block.size, offset=offset)
            block[...] = values.reshape(block.shape)
            offset += block.size * _FLOAT.itemsize
        if not net.all_finite():
            raise CheckpointFormatError(f"{file_path}: non-finite parameters")
        return net, adam, meta
