from typing import Any, Dict, Optional, Sequence

import pandas as pd
from rich.console import Console
from rich.table import Table

__all__: Sequence[str] = ("print_frame", "print_dict_as_table_transposed")


def _format_cell(value: Any) -> str:
    return f"{value:.4f}" if isinstance(value, float) else str(value)


def print_frame(df: pd.DataFrame, title: Optional[str] = None, header_style: str = "bold magenta") -> None:
    """Pretty print a result table, one rich row per DataFrame row.

    For instance, a comparison summary is printed as:
        ┏━━━━━━━┳━━━━━━━━━━━━━━━━━━━┳━━━━━━━━━━━━━━┓
        ┃ agent ┃ mean_satisfaction ┃ request_rate ┃
        ┡━━━━━━━╇━━━━━━━━━━━━━━━━━━━╇━━━━━━━━━━━━━━┩
        │ dp    │ 0.6712            │ 0.0931       │
        │ sol   │ 0.6655            │ 0.2000       │
        └───────┴───────────────────┴──────────────┘
    """
    table = Table(title=title, show_header=True, header_style=header_style)
    for column_name in df.columns:
        table.add_column(str(column_name))
    for row in df.itertuples(index=False):
        table.add_row(*map(_format_cell, row))
    Console().print(table)


def print_dict_as_table_transposed(
    d: Dict[str, Any],
    key_col: str = "Key",
    value_col: str = "Value",
    header_style: str = "bold magenta",
) -> None:
    """Pretty print a flat dictionary with the keys in the first column and the values in the
    second, e.g. the deltas of an ablation against its base run.
    """
    table = Table(show_header=True, header_style=header_style)
    table.add_column(key_col)
    table.add_column(value_col)
    for key, value in d.items():
        table.add_row(key, _format_cell(value))
    Console().print(table)
