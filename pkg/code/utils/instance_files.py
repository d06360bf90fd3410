import glob
import logging
import os
import re

import pandas as pd
import parse

from .file_utils import _check_all_files_exist

logger = logging.getLogger(__name__)

INSTANCE_PATTERN = "{instance}.mps"

_parser = parse.compile(INSTANCE_PATTERN)


def atoi(text):
    return int(text) if text.isdigit() else text


def natural_keys(text):
    """key for natural sorting order

    Examples
    --------
    > l = ['p10.mps', 'p2.mps']
    > l.sort(key=natural_keys)
    > l
    >>> ['p2.mps', 'p10.mps']
    """
    return [atoi(c) for c in re.split(r"(\d+)", text)]


def instance_name(filename):
    """name of an instance: the file name without the '.mps' suffix"""

    basename = os.path.basename(filename)
    parsed = _parser.parse(basename)

    if parsed is None:
        return os.path.splitext(basename)[0]

    return parsed["instance"]


def _glob(pattern):
    return glob.glob(pattern)


def find_instances(paths):
    """find MPS files

    Parameters
    ----------
    paths : str or list of str
        Files, directories (all ``*.mps`` files in it) or glob patterns.

    Returns
    -------
    df : pd.DataFrame
        Columns "filename" and "instance", in natural order of the file names.
    """

    if isinstance(paths, str):
        paths = [paths]

    filenames = list()
    for path in paths:

        if os.path.isdir(path):
            found = _glob(os.path.join(path, INSTANCE_PATTERN.format(instance="*")))
        elif any(c in path for c in "*?["):
            found = _glob(path)
        else:
            _check_all_files_exist(path)
            found = [path]

        if not found:
            logger.warning("no instances found for '%s'", path)

        filenames += found

    if not filenames:
        raise ValueError("Found no instance files")

    filenames = sorted(set(filenames), key=natural_keys)

    df = pd.DataFrame(
        [[fN, instance_name(fN)] for fN in filenames], columns=["filename", "instance"]
    )

    duplicated = df.instance.duplicated()
    if duplicated.any():
        names = ", ".join(df.instance[duplicated])
        raise ValueError(f"instance names must be unique, found duplicates: {names}")

    return df
