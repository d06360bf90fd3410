"""reading and writing free-format MPS files"""

import io
import logging
import os

import numpy as np
import scipy.sparse

from .model import MilpModel

logger = logging.getLogger(__name__)

SECTIONS = ("NAME", "OBJSENSE", "ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "ENDATA")

ROW_TYPES = ("N", "L", "G", "E")
VALUE_BOUNDS = ("UP", "LO", "FX", "UI", "LI")
FLAG_BOUNDS = ("BV", "MI", "PL", "FR")

# values of this magnitude are read as infinite bounds
MPS_INFINITY = 1e30

OBJECTIVE_ROW = "obj"


class MPSParseError(ValueError):
    pass


def _error(lineno, msg):
    return MPSParseError(f"line {lineno}: {msg}")


def _float(token, lineno):

    try:
        return float(token)
    except ValueError:
        raise _error(lineno, f"'{token}' is not a number") from None


def _pairs(tokens, lineno):
    """(name, value) pairs of a data line of the form name value [name value]"""

    if len(tokens) not in (2, 4):
        raise _error(lineno, "expected one or two name/value pairs")

    return [
        (tokens[k], _float(tokens[k + 1], lineno)) for k in range(0, len(tokens), 2)
    ]


def _drop_set_name(tokens):
    """RHS and RANGES lines may start with a set name"""

    return tokens[1:] if len(tokens) in (3, 5) else tokens


class _MPSReader:
    """state of one pass over an MPS file"""

    def __init__(self):

        self.name = None
        self.maximize = False

        self.row_types = dict()
        self.row_order = list()
        self.objective_row = None

        self.columns = dict()
        self.integer = list()
        self.entries = list()
        self.objective = dict()

        self.rhs = dict()
        self.ranges = dict()

        self.lower = dict()
        self.upper = dict()
        self.lower_set = set()

        self._in_integer_block = False

    # ------------------------------------------------------------------------------

    def _row(self, name, lineno):

        if name not in self.row_types:
            raise _error(lineno, f"undeclared row '{name}'")
        return name

    def _column(self, name, lineno):

        if name not in self.columns:
            raise _error(lineno, f"undeclared column '{name}'")
        return self.columns[name]

    # ------------------------------------------------------------------------------

    def header(self, tokens, lineno):

        section = tokens[0].upper()

        if section not in SECTIONS:
            raise _error(lineno, f"unknown section '{tokens[0]}'")

        if section == "NAME":
            self.name = tokens[1] if len(tokens) > 1 else ""
        elif section == "OBJSENSE" and len(tokens) > 1:
            self.objsense(tokens[1:], lineno)

        return section

    def objsense(self, tokens, lineno):

        sense = tokens[0].upper()

        if sense in ("MAX", "MAXIMIZE"):
            self.maximize = True
        elif sense in ("MIN", "MINIMIZE"):
            self.maximize = False
        else:
            raise _error(lineno, f"unknown objective sense '{tokens[0]}'")

    def rows(self, tokens, lineno):

        if len(tokens) != 2:
            raise _error(lineno, "expected a row type and a row name")

        kind, name = tokens[0].upper(), tokens[1]

        if kind not in ROW_TYPES:
            raise _error(lineno, f"unknown row type '{tokens[0]}'")
        if name in self.row_types:
            raise _error(lineno, f"duplicate row '{name}'")

        self.row_types[name] = kind

        if kind == "N":
            if self.objective_row is None:
                self.objective_row = name
            else:
                logger.info("line %d: free row '%s' is ignored", lineno, name)
        else:
            self.row_order.append(name)

    def column_line(self, tokens, lineno):

        if len(tokens) >= 3 and tokens[1].strip("'\"").upper() == "MARKER":
            marker = tokens[2].strip("'\"").upper()
            if marker == "INTORG":
                self._in_integer_block = True
            elif marker == "INTEND":
                self._in_integer_block = False
            else:
                raise _error(lineno, f"unknown marker '{tokens[2]}'")
            return

        name = tokens[0]

        if name not in self.columns:
            j = len(self.columns)
            self.columns[name] = j
            if self._in_integer_block:
                self.integer.append(j)

        j = self.columns[name]

        for row, value in _pairs(tokens[1:], lineno):

            kind = self.row_types.get(row)
            if kind is None:
                raise _error(lineno, f"undeclared row '{row}'")

            if kind == "N":
                if row == self.objective_row:
                    self.objective[j] = value
            else:
                self.entries.append((row, j, value))

    def rhs_line(self, tokens, lineno):

        for row, value in _pairs(_drop_set_name(tokens), lineno):

            self._row(row, lineno)

            if self.row_types[row] == "N":
                logger.warning("line %d: RHS on objective row '%s' ignored", lineno, row)
                continue

            self.rhs[row] = value

    def ranges_line(self, tokens, lineno):

        for row, value in _pairs(_drop_set_name(tokens), lineno):

            self._row(row, lineno)

            if self.row_types[row] == "N":
                raise _error(lineno, f"RANGES on objective row '{row}'")

            self.ranges[row] = value

    def bounds_line(self, tokens, lineno):

        kind = tokens[0].upper()

        if kind in VALUE_BOUNDS:
            if len(tokens) == 4:
                column, value = tokens[2], _float(tokens[3], lineno)
            elif len(tokens) == 3:
                column, value = tokens[1], _float(tokens[2], lineno)
            else:
                raise _error(lineno, f"malformed {kind} bound")
        elif kind in FLAG_BOUNDS:
            if len(tokens) in (3, 4):
                column = tokens[2]
            elif len(tokens) == 2:
                column = tokens[1]
            else:
                raise _error(lineno, f"malformed {kind} bound")
            value = None
        else:
            raise _error(lineno, f"unknown bound type '{tokens[0]}'")

        j = self._column(column, lineno)

        if value is not None and abs(value) >= MPS_INFINITY:
            value = np.sign(value) * np.inf

        if kind in ("UI", "LI", "BV") and j not in self.integer:
            self.integer.append(j)

        if kind in ("UP", "UI"):
            self.upper[j] = value
            if value < 0 and j not in self.lower_set and self.lower.get(j, 0.0) == 0:
                logger.warning(
                    "line %d: negative upper bound on '%s' - lower bound set to -inf",
                    lineno,
                    column,
                )
                self.lower[j] = -np.inf
        elif kind in ("LO", "LI"):
            self.lower[j] = value
            self.lower_set.add(j)
        elif kind == "FX":
            self.lower[j] = self.upper[j] = value
            self.lower_set.add(j)
        elif kind == "BV":
            self.lower[j], self.upper[j] = 0.0, 1.0
            self.lower_set.add(j)
        elif kind == "MI":
            self.lower[j] = -np.inf
            self.lower_set.add(j)
        elif kind == "PL":
            self.upper[j] = np.inf
        elif kind == "FR":
            self.lower[j], self.upper[j] = -np.inf, np.inf
            self.lower_set.add(j)

    # ------------------------------------------------------------------------------

    def read(self, lines):

        section = None

        for lineno, line in enumerate(lines, start=1):

            line = line.rstrip("\n")
            tokens = line.split()

            if not tokens or line.lstrip().startswith("*"):
                continue

            if not line[0].isspace():
                section = self.header(tokens, lineno)
                if section == "ENDATA":
                    break
                continue

            if section is None or section == "NAME":
                raise _error(lineno, "data line outside of a section")
            elif section == "OBJSENSE":
                self.objsense(tokens, lineno)
            elif section == "ROWS":
                self.rows(tokens, lineno)
            elif section == "COLUMNS":
                self.column_line(tokens, lineno)
            elif section == "RHS":
                self.rhs_line(tokens, lineno)
            elif section == "RANGES":
                self.ranges_line(tokens, lineno)
            elif section == "BOUNDS":
                self.bounds_line(tokens, lineno)

        if section != "ENDATA":
            logger.warning("MPS data without ENDATA")

        return self.model()

    def model(self):

        n = len(self.columns)
        row_index = {name: i for i, name in enumerate(self.row_order)}

        data = [value for _, _, value in self.entries]
        rows = [row_index[row] for row, _, _ in self.entries]
        cols = [j for _, j, _ in self.entries]
        A = scipy.sparse.csr_matrix(
            (data, (rows, cols)), shape=(len(self.row_order), n), dtype=float
        )

        # ranged rows become a pair of inequalities
        senses, rhs, names, blocks = list(), list(), list(), list()
        for name in self.row_order:

            i = row_index[name]
            kind = self.row_types[name]
            b = self.rhs.get(name, 0.0)
            r = self.ranges.get(name)

            if r is None:
                senses.append(kind)
                rhs.append(b)
                names.append(name)
                blocks.append(i)
                continue

            if kind == "G":
                lo, hi = b, b + abs(r)
            elif kind == "L":
                lo, hi = b - abs(r), b
            else:
                lo, hi = (b, b + r) if r >= 0 else (b + r, b)

            senses += ["G", "L"]
            rhs += [lo, hi]
            names += [f"{name}_lo", f"{name}_up"]
            blocks += [i, i]

        objective = np.zeros(n)
        for j, value in self.objective.items():
            objective[j] = value

        if self.maximize:
            logger.info("maximisation problem - objective negated")
            objective = -objective

        lower = np.zeros(n)
        upper = np.full(n, np.inf)
        for j, value in self.lower.items():
            lower[j] = value
        for j, value in self.upper.items():
            upper[j] = value

        return MilpModel.from_rows(
            objective,
            A[blocks] if blocks else scipy.sparse.csr_matrix((0, n)),
            senses,
            rhs,
            lower=lower,
            upper=upper,
            integers=self.integer,
            var_names=list(self.columns),
            row_names=names,
            name=self.name or "milp",
        )


def parse_mps(text):
    """read a model from free-format MPS

    Parameters
    ----------
    text : str or iterable of str
        Content of the file, or its lines.

    Returns
    -------
    model : MilpModel
        Rows in ``>=`` orientation, equalities and ranged rows as two rows.
        Maximisation problems are returned with negated objective.

    Raises
    ------
    MPSParseError
        Message starts with ``line <k>:``.
    """

    if isinstance(text, str):
        text = io.StringIO(text)

    try:
        return _MPSReader().read(text)
    except MPSParseError:
        raise
    except ValueError as err:
        # inconsistent bounds and the like
        raise MPSParseError(f"line 0: {err}") from err


def read_mps(filename):
    """parse an MPS file; the file name is used if the NAME section is empty"""

    with open(filename) as f:
        model = parse_mps(f)

    if model.name == "milp":
        name = os.path.splitext(os.path.basename(filename))[0]
        model = model._replace(name=name)

    return model


def _fmt(value):
    return f"{value:.17g}"


def write_mps(model):
    """free-format MPS text of a model (all rows as G rows)"""

    lines = [f"NAME {model.name}", "ROWS", f" N {OBJECTIVE_ROW}"]
    lines += [f" G {name}" for name in model.row_names]

    lines.append("COLUMNS")

    A = model.A.tocsc()
    in_integer_block = False
    marker = 0

    for j, name in enumerate(model.var_names):

        if model.is_integer[j] != in_integer_block:
            tag = "'INTORG'" if model.is_integer[j] else "'INTEND'"
            lines.append(f" MARKER{marker} 'MARKER' {tag}")
            in_integer_block = model.is_integer[j]
            marker += 1

        start, end = A.indptr[j], A.indptr[j + 1]

        if model.objective[j] != 0 or start == end:
            lines.append(f" {name} {OBJECTIVE_ROW} {_fmt(model.objective[j])}")

        for i, value in zip(A.indices[start:end], A.data[start:end]):
            lines.append(f" {name} {model.row_names[i]} {_fmt(value)}")

    if in_integer_block:
        lines.append(f" MARKER{marker} 'MARKER' 'INTEND'")

    lines.append("RHS")
    for name, value in zip(model.row_names, model.rhs):
        if value != 0:
            lines.append(f" RHS {name} {_fmt(value)}")

    lines.append("BOUNDS")
    for j, name in enumerate(model.var_names):

        lo, up = model.lower[j], model.upper[j]

        if lo == up:
            lines.append(f" FX BND {name} {_fmt(lo)}")
            continue

        if np.isneginf(lo) and np.isposinf(up):
            lines.append(f" FR BND {name}")
            continue

        if np.isneginf(lo):
            lines.append(f" MI BND {name}")
        elif lo != 0:
            lines.append(f" LO BND {name} {_fmt(lo)}")

        if np.isfinite(up):
            lines.append(f" UP BND {name} {_fmt(up)}")

    lines.append("ENDATA")

    return "\n".join(lines) + "\n"
