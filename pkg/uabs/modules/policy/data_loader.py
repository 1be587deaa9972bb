import struct

import numpy as np

from . import PolicyArch, PolicyParams, CheckpointError

CHECKPOINT_MAGIC = b"UPOL"
CHECKPOINT_VERSION = 1

def dump_checkpoint(p: PolicyParams) -> bytes:
    arch = p.arch
    header = struct.pack("<4sHIH", CHECKPOINT_MAGIC, CHECKPOINT_VERSION, arch.input_dim, len(arch.hidden))
    header += struct.pack(f"<{len(arch.hidden)}I", *arch.hidden)
    header += struct.pack("<IQ", arch.output_dim, arch.n_params)
    return header + p.theta.astype("<f8").tobytes()

def parse_checkpoint(data: bytes) -> PolicyParams:
    try:
        magic, version, input_dim, n_hidden = struct.unpack_from("<4sHIH", data, 0)
        if magic!=CHECKPOINT_MAGIC:
            raise CheckpointError("Not a policy checkpoint")
        if version!=CHECKPOINT_VERSION:
            raise CheckpointError(f"Checkpoint version {version} unsupported (expected {CHECKPOINT_VERSION})")
        offset = struct.calcsize("<4sHIH")
        hidden = struct.unpack_from(f"<{n_hidden}I", data, offset)
        offset += 4*n_hidden
        output_dim, n_params = struct.unpack_from("<IQ", data, offset)
        offset += struct.calcsize("<IQ")
    except struct.error as e:
        raise CheckpointError(f"Truncated checkpoint header: {e}") from e

    arch = PolicyArch(input_dim, list(hidden), output_dim)
    if n_params!=arch.n_params or len(data)-offset!=8*n_params:
        raise CheckpointError(f"Checkpoint holds {len(data)-offset} bytes for {n_params} parameters of {arch}")
    theta = np.frombuffer(data, dtype="<f8", offset=offset).astype(np.float64)
    return PolicyParams(theta=theta, arch=arch)

def save_checkpoint(p: PolicyParams, fpath: str):
    with open(fpath, mode="wb") as fp:
        fp.write(dump_checkpoint(p))

def load_checkpoint(fpath: str) -> PolicyParams:
    with open(fpath, mode="rb") as fp:
        return parse_checkpoint(fp.read())
