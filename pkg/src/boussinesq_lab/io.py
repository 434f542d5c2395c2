"""BGL1 checkpoints and the series CSV.

A checkpoint is one text header line ``BGL1 <model> <n1> <n2> <t> <nu>``
followed by each field as row-major float64 little-endian samples, in the
order given by FIELD_ORDER. After the fields comes an optional trailer
``history <json>\\n`` with the run accumulators needed to rebuild the
diagnostics row; readers that only want the fields can stop early.
"""

import json

import numpy as np

from .diagnostics import csv_columns, fmt_num
from .errors import ConfigError

MAGIC = "BGL1"
FIELD_ORDER = {
    "torus-viscous": ("rho", "omega"),
    "torus-inviscid": ("rho", "omega"),
    "strip-inviscid": ("rho", "omega"),
    "axisym-euler": ("u_theta", "omega_theta"),
}


def _json_default(v):
    raise TypeError(f"not serializable: {v!r}")


def _encode(v):
    """JSON-safe copy; non-finite floats become strings so repr round-trips."""
    if isinstance(v, dict):
        return {str(k): _encode(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_encode(x) for x in v]
    if isinstance(v, float) and not np.isfinite(v):
        return fmt_num(v)
    return v


def _decode(v):
    if isinstance(v, dict):
        return {k: _decode(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_decode(x) for x in v]
    if v in ("nan", "inf", "-inf"):
        return float(v)
    return v


def write_checkpoint(path, model, grid_shape, t, nu, fields, history=None):
    order = FIELD_ORDER[model]
    n1, n2 = grid_shape
    with open(path, "wb") as fh:
        fh.write(f"{MAGIC} {model} {n1} {n2} {fmt_num(t)} {fmt_num(nu)}\n".encode("ascii"))
        for name in order:
            a = np.ascontiguousarray(fields[name], dtype="<f8")
            if a.shape != (n1, n2):
                raise ValueError(f"{name} has shape {a.shape}, expected {(n1, n2)}")
            fh.write(a.tobytes(order="C"))
        if history is not None:
            fh.write(b"history ")
            fh.write(json.dumps(_encode(history), sort_keys=True, default=_json_default).encode("ascii"))
            fh.write(b"\n")


def read_checkpoint(path):
    """Returns (header dict, fields dict, history dict or None)."""
    with open(path, "rb") as fh:
        blob = fh.read()
    end = blob.find(b"\n")
    if end < 0:
        raise ConfigError(f"{path}: missing checkpoint header")
    parts = blob[:end].decode("ascii").split()
    if len(parts) != 6 or parts[0] != MAGIC:
        raise ConfigError(f"{path}: not a {MAGIC} checkpoint")
    model = parts[1]
    if model not in FIELD_ORDER:
        raise ConfigError(f"{path}: unknown model {model!r}")
    n1, n2 = int(parts[2]), int(parts[3])
    header = {"model": model, "n1": n1, "n2": n2, "t": float(parts[4]), "nu": float(parts[5])}
    pos = end + 1
    size = n1 * n2 * 8
    fields = {}
    for name in FIELD_ORDER[model]:
        chunk = blob[pos:pos + size]
        if len(chunk) != size:
            raise ConfigError(f"{path}: truncated field {name}")
        fields[name] = np.frombuffer(chunk, dtype="<f8").reshape(n1, n2).astype(float)
        pos += size
    history = None
    rest = blob[pos:]
    if rest.startswith(b"history "):
        history = _decode(json.loads(rest[len(b"history "):].decode("ascii")))
    return header, fields, history


def write_csv(path, rows, s_list, p_list):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(",".join(csv_columns(s_list, p_list)) + "\n")
        for r in rows:
            fh.write(",".join(fmt_num(v) for v in r.values(s_list, p_list)) + "\n")


def read_csv(path):
    """Header list and a float array of the data rows."""
    with open(path, encoding="ascii") as fh:
        header = fh.readline().strip().split(",")
        data = [[float(v) for v in line.strip().split(",")] for line in fh if line.strip()]
    return header, np.array(data, dtype=float).reshape(-1, len(header))
