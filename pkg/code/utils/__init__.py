# flake8: noqa

from .datalist import match_records, select_by_attributes
from .file_utils import mkdir
from .instance_files import find_instances, instance_name
from .statistics import percentage, relative_quotient, shifted_geomean
