"""Ground-motion ingestion, signal conditioning, NRMSE scoring and CSV persistence."""

from core.signals.at2 import load_at2, parse_at2
from core.signals.csv_io import read_csv, write_csv
from core.signals.processing import differentiate, nrmse, resample, to_si

__all__ = [
    "parse_at2",
    "load_at2",
    "nrmse",
    "resample",
    "differentiate",
    "to_si",
    "write_csv",
    "read_csv",
]
