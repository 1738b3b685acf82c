"""Matrix files and plain config files.

A matrix file is a sequence of batches separated by blank lines.  Each batch
starts with ``order <n>`` and has n lines of n characters from ``+-``.
Lines starting with ``#`` are comments.
"""

from .matrix import SignMatrix


class ParseError(ValueError):
    def __init__(self, msg, line, col=None):
        where = f"line {line}" + (f", column {col}" if col is not None else "")
        super().__init__(f"{where}: {msg}")
        self.line = line
        self.col = col


def parse_matrices(data):
    """All matrices in a file's contents (bytes or str)."""
    if isinstance(data, bytes):
        data = data.decode("ascii", errors="replace")
    out = []
    n = None
    rows = []
    start = 0

    def close(lineno):
        nonlocal n, rows
        if n is None:
            return
        if len(rows) != n:
            raise ParseError(f"expected {n} rows, got {len(rows)}", lineno)
        out.append(SignMatrix(n, tuple(rows)))
        n, rows = None, []

    lines = data.splitlines()
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip()
        if line.startswith("#"):
            continue
        if not line:
            close(lineno)
            continue
        if line.startswith("order"):
            close(lineno)
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise ParseError("bad header, expected 'order <n>'", lineno)
            n = int(parts[1])
            start = lineno
            continue
        if n is None:
            raise ParseError("data before 'order' header", lineno)
        if len(rows) >= n:
            raise ParseError(f"more than {n} rows for the matrix starting at line {start}", lineno)
        if len(line) != n:
            raise ParseError(f"row has {len(line)} entries, expected {n}", lineno, min(len(line), n) + 1)
        r = 0
        for j, ch in enumerate(line):
            if ch == "-":
                r |= 1 << j
            elif ch != "+":
                raise ParseError(f"bad character {ch!r}", lineno, j + 1)
        rows.append(r)
    close(len(lines) + 1)
    return out


def parse_matrix(data):
    mats = parse_matrices(data)
    if len(mats) != 1:
        raise ParseError(f"expected one matrix, found {len(mats)}", 1)
    return mats[0]


def format_matrix(m, comment=None):
    lines = []
    if comment:
        lines += [f"# {c}" for c in comment.splitlines()]
    lines.append(f"order {m.n}")
    lines.append(str(m))
    return "\n".join(lines) + "\n"


def format_matrices(mats, comments=None):
    comments = comments or [None] * len(mats)
    return "\n".join(format_matrix(m, c) for m, c in zip(mats, comments))


def read_matrices(path):
    with open(path, "rb") as fh:
        return parse_matrices(fh.read())


def write_matrices(path, mats, comments=None):
    with open(path, "w") as fh:
        fh.write(format_matrices(mats, comments))


def read_config(path):
    """key=value lines; '#' comments; keys use dashes or underscores."""
    cfg = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError("expected key=value", lineno)
            k, v = line.split("=", 1)
            cfg[k.strip().replace("-", "_")] = v.strip()
    return cfg
