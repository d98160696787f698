"""
CSV ingestion. A header row is required, cells are UTF-8 with '.'
decimals, rows are in time order, and nothing is imputed.
"""
import re
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from npgc.errors import DataFormatError
from npgc.eval.dgplib import lag_embed
from npgc.model.smoothing import TimeSeriesSample

# pandas counts file lines from 1, header included
_PARSER_LINE = re.compile(r"line (\d+)")


def read_columns(path, columns: Sequence[str]) -> Dict[str, np.ndarray]:
    """Numeric arrays for `columns`; row numbers in errors count data rows from 1."""
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise DataFormatError(f"{path}: no header row") from None
    except pd.errors.ParserError as e:
        match = _PARSER_LINE.search(str(e))
        where = f" at row {int(match.group(1)) - 1}" if match else ""
        raise DataFormatError(f"{path}: malformed CSV{where} ({str(e).strip()})") from None
    except UnicodeDecodeError as e:
        raise DataFormatError(f"{path}: not UTF-8 ({e.reason})") from None

    missing = [col for col in columns if col not in frame.columns]
    if missing:
        raise DataFormatError(f"{path}: missing column(s) {', '.join(repr(c) for c in missing)}")

    out = {}
    for col in columns:
        raw = frame[col]
        values = pd.to_numeric(raw.str.strip(), errors="coerce").to_numpy(dtype=float)
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            row = int(bad[0])
            raise DataFormatError(f"{path}: non-numeric value {raw.iloc[row]!r} in column {col!r} at row {row + 1}")
        out[col] = values
    return out


def load_csv(path, y_col, z_col, w_cols: Optional[List[str]] = None, lags=1, horizon=1) -> TimeSeriesSample:
    """
    Embed the named columns: Y = y_{t+horizon}, Z = z_t and W the `lags`
    most recent values of the conditioning columns (default: y itself).
    """
    w_cols = list(w_cols) if w_cols else [y_col]
    columns = list(dict.fromkeys([y_col, z_col] + w_cols))
    data = read_columns(path, columns)
    conditioning = np.column_stack([data[col] for col in w_cols])
    return lag_embed(data[y_col], data[z_col], conditioning=conditioning, p=lags, tau=horizon)
