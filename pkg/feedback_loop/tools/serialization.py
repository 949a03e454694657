from pathlib import Path
from typing import List, Union, cast

import pandas as pd
from omegaconf import DictConfig, OmegaConf

from feedback_loop.tools.logging import setup_logger

logger = setup_logger()

"""Reading experiment configuration files and writing result tables.
"""

CSV_FLOAT_FORMAT = "%.10g"
"""Float format for every CSV the harness writes, fixed so repeated runs are byte-identical.
"""


def load_yaml(cfg: Union[str, Path]) -> DictConfig:
    """Load and resolve a YAML configuration file into a DictConfig object.

    Args:
        cfg (Union[str, Path]): The path to the YAML configuration file to load.

    Returns:
        DictConfig: A DictConfig object containing the resolved configuration data.

    Raises:
        OmegaConfBaseException: If there is an error in the YAML file or in resolving interpolations.
    """
    data_loaded = OmegaConf.load(cfg)
    resolved_conf = OmegaConf.to_container(data_loaded, resolve=True)
    return cast(DictConfig, OmegaConf.create(resolved_conf))


def read_dotted_config(path: Union[str, Path]) -> DictConfig:
    """Read a dotted-key configuration file into a DictConfig object.

    The file is UTF-8 text holding one `key = value` pair per line, e.g. `optimizer.alpha0 = 0.01`.
    Blank lines and lines starting with `#` are ignored. Values are parsed as YAML scalars or
    lists, so `env.change_points = [25000]` yields a list of ints.

    Raises:
        FileNotFoundError: If the file does not exist.
        ValueError: If a non-comment line has no `=` or an empty key.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Couldn't find config file at {path}.")

    dotlist: List[str] = []
    for lineno, raw_line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ValueError(f"Malformed line {lineno} in {path}: expected `key = value`, got `{raw_line}`.")
        dotlist.append(f"{key.strip()}={value.strip()}")

    return OmegaConf.from_dotlist(dotlist)


def write_csv(df: pd.DataFrame, path: Union[str, Path]) -> Path:
    """Write a result table with the deterministic float format and return its path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Saved {len(df)} rows at {path}.")
    return path
