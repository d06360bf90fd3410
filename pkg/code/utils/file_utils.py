import os


def _check_all_files_exist(files):
    """error if one file does not exist"""

    if isinstance(files, str):
        files = [files]

    missing = [fN for fN in files if not _file_exists(fN)]

    if missing:
        msg = "file(s) missing:\n" + "\n".join(missing)
        raise RuntimeError(msg)


def _file_exists(fname):

    return os.path.isfile(fname)


def mkdir(directory):
    # create a directory if it doesent exist
    os.makedirs(directory, exist_ok=True)
