"""Rejection-rate tables: one block per sample size, bandwidth (or block a) rows, DGP columns."""
import numpy as np
import pandas as pd

from npgc.config import DGP_IDS
from npgc.errors import InvalidConfigError

STATISTICS = {"cvm": "CvM", "ks": "KS"}
DGP_COLUMNS = [f"({dgp})" for dgp in DGP_IDS]


def _setting_label(value):
    return "auto" if value is None else f"{value:g}"


def rejection_table(report, statistic="cvm"):
    """
    Pivot the cells of an MC report dict into a frame indexed by
    (n, c, a) with one column per DGP. Missing cells stay NaN.
    """
    if statistic not in STATISTICS:
        raise InvalidConfigError(f"Invalid statistic: {statistic}")

    records = []
    for cell in report.get("cells", []):
        rate = cell["rate"][statistic]
        records.append((
            (cell["n"], _setting_label(cell["c"]), "-" if cell["a"] is None else f"{cell['a']:g}"),
            f"({cell['dgp']})",
            np.nan if rate is None else float(rate),
        ))

    keys = list(dict.fromkeys(key for key, _, _ in records))
    index = pd.MultiIndex.from_tuples(keys, names=["n", "c", "a"]) if keys else \
        pd.MultiIndex.from_arrays([[], [], []], names=["n", "c", "a"])
    table = pd.DataFrame(np.nan, index=index, columns=DGP_COLUMNS)
    for key, column, rate in records:
        table.loc[key, column] = rate
    return table


def rejection_frame(report):
    """Both statistics stacked, flat, ready for CSV."""
    blocks = []
    for statistic, label in STATISTICS.items():
        block = rejection_table(report, statistic).reset_index()
        block.insert(0, "statistic", label)
        blocks.append(block)
    frame = pd.concat(blocks, ignore_index=True)
    return frame[["statistic", "n", "c", "a"] + DGP_COLUMNS]


def format_table(table, digits=3):
    return table.to_string(float_format=lambda x: f"{x:.{digits}f}", na_rep="")
