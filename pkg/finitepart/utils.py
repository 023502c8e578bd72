import hashlib
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

default_attrs = ["n", "route", "spec_hash"]

# results are cached as <cache_dir>/<result id>.json
cache_dir_default = Path.home() / ".cache" / "finitepart"


@dataclass
class CheckReport:
    """Outcome of a pointwise or numeric identity check; failures are data, not errors."""

    name: str
    passed: bool
    max_rel_dev: float
    tol: float
    table: pd.DataFrame = field(default_factory=pd.DataFrame)

    def to_json(self):
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "max_rel_dev": float(self.max_rel_dev),
            "tol": float(self.tol),
            "rows": json.loads(self.table.to_json(orient="records")),
        }


def rel_dev(value, reference, floor=1e-300):
    """|value - reference| / |reference|, absolute deviation when the reference is zero."""
    scale = abs(reference)
    if scale < floor:
        return abs(value - reference)
    return abs(value - reference) / scale


def id_to_dict(rid, attrs=None):
    """
    Convert a result ID to a dictionary.

    Parameters:
    rid (str): The result ID, e.g. "n2.pipeline.3fa4c1d2e5b6".
    attrs (list): The attribute names.

    Returns:
    dict: The result ID as a dictionary.
    """
    if attrs is None:
        attrs = default_attrs
    values = rid.split(".")
    return dict(zip(attrs, values))


def dict_to_id(attrs, drop=None, delimiter="."):
    """
    Convert a dictionary of result attributes to a result ID.

    Parameters:
    attrs (dict): The result attributes.

    Returns:
    str: The result ID.
    """
    if drop is None:
        drop = []
    return delimiter.join(str(v) for k, v in attrs.items() if k not in drop)


def spec_hash(spec_dict, length=12):
    """Stable short hash of a JSON-serializable spec echo."""
    payload = json.dumps(spec_dict, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:length]


def result_id(n, route, spec_dict):
    return dict_to_id({"n": f"n{n}", "route": route, "spec_hash": spec_hash(spec_dict)})


def dumps(data):
    """Canonical JSON text; identical inputs give byte-identical output."""
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def cache_path(rid, cache_dir=None):
    if cache_dir is None:
        cache_dir = cache_dir_default
    return Path(cache_dir) / f"{rid}.json"


def cache_load(rid, cache_dir=None):
    """
    Load a cached JSON payload.

    Returns None if the entry is missing or unreadable; unreadable entries are
    reported with a warning and otherwise ignored.
    """
    path = cache_path(rid, cache_dir)
    if not path.exists():
        return None
    try:
        return json.loads(path.read_text())
    except (OSError, ValueError) as e:
        warnings.warn(f"Ignoring unreadable cache entry {path}: {e}")
        return None


def cache_store(rid, data, cache_dir=None):
    path = cache_path(rid, cache_dir)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(data))
    return path
