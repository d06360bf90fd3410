import os.path as path

# CONFIGURATION FILE

# =============================================================================
# Folders for the results
# =============================================================================

root_folder_results = "../results/"


def results_filename(name, *subfolders):
    """create filenames for result files

    Parameters
    ----------
    name : str
        File name of the result file
    *subfolders : list of str
        Folders of the result file.

    """

    folders = (root_folder_results,) + subfolders

    return path.join(*folders, name)


CALLS_FILE = "calls.csv"
RUNS_FILE = "runs.csv"
SUMMARY_FILE = "summary.json"
RUN_INFO_FILE = "run_info.yml"

# =============================================================================
# Experiment protocol
# =============================================================================

MODES = ("rens", "mrens", "off")

# every instance is solved once per seed; seed 0 keeps the variable order
SEEDS = (0, 1, 2, 3, 4)

# node limit of the full branch-and-bound solve of an instance
FULL_SOLVE_NODE_LIMIT = 100000

# =============================================================================
# Aggregation
# =============================================================================

# shifts of the geometric means of time and nodes
TIME_SHIFT = 1
NODE_SHIFT = 100

COMPARISON_SETS = ("all", "both-solved", "affected", "affected-solved")

# objective values closer than this are considered equal
OBJECTIVE_TOL = 1e-6
