import GapLab.constants as cn # type: ignore
from GapLab.errors import InvalidInputError # type: ignore

import hashlib
import json
import numpy as np # type: ignore
import os
import tempfile
from typing import Optional


def makeRunDir(out_dir:Optional[str], task:str)->str:
    """Output directory of a run, created if missing. None gives a fresh temporary
    directory named after the task."""
    if out_dir is None:
        return tempfile.mkdtemp(prefix=f"gaplab_{task}_")
    out_dir = str(out_dir)
    if os.path.exists(out_dir) and not os.path.isdir(out_dir):
        raise InvalidInputError(f"Output path {out_dir} exists and is not a directory.")
    os.makedirs(out_dir, exist_ok=True)
    return out_dir

def frac(x):
    """Fractional part with the convention frac(x) = x - floor(x). Works on scalars and arrays."""
    result = x - np.floor(x)
    # x slightly below an integer can round up to exactly 1.0
    if np.ndim(result) == 0:
        return 0.0 if result >= 1.0 else float(result)
    result = np.asarray(result, dtype=float)
    result[result >= 1.0] = 0.0
    return result

def circularDistance(x, y):
    """Distance between x and y on the unit circle R/Z."""
    delta = frac(np.asarray(x) - np.asarray(y))
    return np.minimum(delta, 1.0 - delta)

def canonicalJSON(dct:dict)->str:
    """Deterministic JSON text used for hashing and for artifacts."""
    return json.dumps(dct, sort_keys=True, indent=2, allow_nan=True)

def hashDct(dct:dict)->str:
    """SHA-256 of the canonical JSON of a dictionary."""
    return hashlib.sha256(json.dumps(dct, sort_keys=True).encode("utf-8")).hexdigest()

def hashBytes(content:bytes)->str:
    return hashlib.sha256(content).hexdigest()

def toJSONable(value):
    """Converts numpy and complex values into JSON-friendly python values."""
    if isinstance(value, dict):
        return {str(k): toJSONable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [toJSONable(v) for v in value]
    if isinstance(value, np.ndarray):
        return toJSONable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [float(np.real(value)), float(np.imag(value))]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value

def linearGrid(start:float, end:float, num_point:int)->np.ndarray:
    """Evenly spaced grid whose interior points are rounded to 12 digits so that
    values such as 0.0 are hit exactly."""
    return np.round(np.linspace(start, end, num_point), 12)
