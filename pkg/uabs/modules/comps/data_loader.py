"""Archive persistence.

Layout: magic `UARC`, `<H` version, `<Q` payload length, 32-byte SHA-256 of
the payload, then the payload: an uncompressed `.npz` (no pickles) holding
theta0, the policy architecture and, per archived task, its episodes as
stacked float64/int64 tables.
"""

import hashlib
import struct
from io import BytesIO

import numpy as np

from uabs.modules.policy import PolicyArch, PolicyParams
from uabs.modules.reinforce import Episode
from . import MetaState, TaskArchiveEntry, ArchiveError, ArchiveVersionError, ArchiveTruncatedError, ArchiveChecksumError

ARCHIVE_MAGIC = b"UARC"
ARCHIVE_VERSION = 1
HEADER = struct.Struct("<4sHQ32s")
EPISODE_FIELDS = ('features', 'actions', 'rewards', 'behavior_probs', 'positions')

def _pack_arch(arch: PolicyArch) -> np.ndarray:
    return np.array([arch.input_dim, len(arch.hidden), *arch.hidden, arch.output_dim], dtype=np.int64)

def _unpack_arch(a: np.ndarray) -> PolicyArch:
    n_hidden = int(a[1])
    return PolicyArch(int(a[0]), [int(h) for h in a[2:2+n_hidden]], int(a[2+n_hidden]))

def dump_archive(state: MetaState) -> bytes:
    arrays = {
        "theta0": state.theta0.theta,
        "arch": _pack_arch(state.theta0.arch),
        "n_entries": np.array(state.i, dtype=np.int64),
    }
    for k, entry in enumerate(state.archive):
        arrays[f"e{k}_task_index"] = np.array(entry.task_index, dtype=np.int64)
        arrays[f"e{k}_skilled_index"] = np.array(entry.skilled_index, dtype=np.int64)
        for field in EPISODE_FIELDS:
            arrays[f"e{k}_{field}"] = np.stack([getattr(e, field) for e in entry.full_set])

    buf = BytesIO()
    np.savez(buf, **arrays)
    payload = buf.getvalue()
    return HEADER.pack(ARCHIVE_MAGIC, ARCHIVE_VERSION, len(payload), hashlib.sha256(payload).digest()) + payload

def parse_archive(data: bytes) -> MetaState:
    if len(data)<HEADER.size:
        raise ArchiveTruncatedError(f"Archive header needs {HEADER.size} bytes, got {len(data)}")
    magic, version, length, digest = HEADER.unpack_from(data, 0)
    if magic!=ARCHIVE_MAGIC:
        raise ArchiveError("Not an experience archive")
    if version!=ARCHIVE_VERSION:
        raise ArchiveVersionError(f"Archive version {version} unsupported (expected {ARCHIVE_VERSION})")
    payload = data[HEADER.size:]
    if len(payload)<length:
        raise ArchiveTruncatedError(f"Archive payload has {len(payload)} of {length} bytes")
    if len(payload)>length or hashlib.sha256(payload).digest()!=digest:
        raise ArchiveChecksumError("Archive checksum mismatch")

    with np.load(BytesIO(payload), allow_pickle=False) as z:
        theta0 = PolicyParams(theta=z["theta0"].copy(), arch=_unpack_arch(z["arch"]))
        archive = []
        for k in range(int(z["n_entries"])):
            tables = {field: z[f"e{k}_{field}"] for field in EPISODE_FIELDS}
            full_set = [
                Episode(**{field: tables[field][n].copy() for field in EPISODE_FIELDS})
                for n in range(len(tables['actions']))
            ]
            archive.append(TaskArchiveEntry(int(z[f"e{k}_task_index"]), full_set, int(z[f"e{k}_skilled_index"])))

    return MetaState(theta0, archive)

def archive_save(state: MetaState, fpath: str):
    with open(fpath, mode="wb") as fp:
        fp.write(dump_archive(state))

def archive_load(fpath: str) -> MetaState:
    with open(fpath, mode="rb") as fp:
        return parse_archive(fp.read())
