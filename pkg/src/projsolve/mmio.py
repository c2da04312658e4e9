"""MatrixMarket (.mtx) reading and writing for real matrices.

Supports the ``coordinate`` and ``array`` formats with ``general`` or
``symmetric`` storage, 1-based indices and ``%`` comment lines. Parse
failures raise :class:`MatrixMarketError` with the offending 1-based line
number in the message. Values are written with 17 significant digits, so a
write/read round trip reproduces every entry exactly.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse

__all__ = ["MatrixMarketError", "read_matrix_market", "write_matrix_market"]

_BANNER = "%%MatrixMarket"


class MatrixMarketError(ValueError):
    """Malformed MatrixMarket content; message includes the line number."""


def _parse_float(token: str, lineno: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise MatrixMarketError(
            f"line {lineno}: expected a real number, got {token!r}"
        ) from None


def _parse_index(token: str, bound: int, what: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise MatrixMarketError(
            f"line {lineno}: expected an integer {what} index, got {token!r}"
        ) from None
    if not 1 <= value <= bound:
        raise MatrixMarketError(
            f"line {lineno}: {what} index {value} outside [1, {bound}]"
        )
    return value


def read_matrix_market(path):
    """Read a real MatrixMarket file.

    Returns a dense ``ndarray`` for array-format files and a CSR matrix for
    coordinate-format files; symmetric storage is expanded either way.
    """
    with open(path) as fh:
        lines = fh.read().splitlines()

    if not lines:
        raise MatrixMarketError("line 1: empty file, missing MatrixMarket header")

    header = lines[0].split()
    if len(header) != 5 or header[0] != _BANNER or header[1].lower() != "matrix":
        raise MatrixMarketError(
            f"line 1: malformed header {lines[0]!r}; expected "
            f"'{_BANNER} matrix <coordinate|array> real <general|symmetric>'"
        )
    layout, field, symmetry = (tok.lower() for tok in header[2:5])
    if layout not in ("coordinate", "array"):
        raise MatrixMarketError(f"line 1: unsupported layout {layout!r}")
    if field != "real":
        raise MatrixMarketError(f"line 1: unsupported field {field!r}, only 'real'")
    if symmetry not in ("general", "symmetric"):
        raise MatrixMarketError(f"line 1: unsupported symmetry {symmetry!r}")

    # Locate the size line, skipping comments and blank lines.
    pos = 1
    while pos < len(lines) and (lines[pos].startswith("%") or not lines[pos].strip()):
        pos += 1
    if pos >= len(lines):
        raise MatrixMarketError(f"line {len(lines)}: missing size line")
    size_tokens = lines[pos].split()
    lineno = pos + 1

    expected = 3 if layout == "coordinate" else 2
    if len(size_tokens) != expected:
        raise MatrixMarketError(
            f"line {lineno}: size line needs {expected} fields, got {len(size_tokens)}"
        )
    try:
        dims = [int(tok) for tok in size_tokens]
    except ValueError:
        raise MatrixMarketError(
            f"line {lineno}: non-integer size entry in {lines[pos]!r}"
        ) from None
    if any(d < 0 for d in dims[:2]) or dims[0] == 0 or dims[1] == 0:
        raise MatrixMarketError(f"line {lineno}: matrix dimensions must be positive")
    rows, cols = dims[0], dims[1]
    if symmetry == "symmetric" and rows != cols:
        raise MatrixMarketError(f"line {lineno}: symmetric matrix must be square")

    data_lines = []
    for offset, raw in enumerate(lines[pos + 1 :], start=pos + 2):
        if raw.startswith("%") or not raw.strip():
            continue
        data_lines.append((offset, raw))

    if layout == "coordinate":
        nnz = dims[2]
        if len(data_lines) != nnz:
            raise MatrixMarketError(
                f"line {len(lines)}: expected {nnz} coordinate entries, "
                f"found {len(data_lines)}"
            )
        rr, cc, vv = [], [], []
        for lineno, raw in data_lines:
            tokens = raw.split()
            if len(tokens) != 3:
                raise MatrixMarketError(
                    f"line {lineno}: coordinate entry needs 'row col value', got {raw!r}"
                )
            i = _parse_index(tokens[0], rows, "row", lineno)
            j = _parse_index(tokens[1], cols, "column", lineno)
            v = _parse_float(tokens[2], lineno)
            rr.append(i - 1)
            cc.append(j - 1)
            vv.append(v)
            if symmetry == "symmetric" and i != j:
                rr.append(j - 1)
                cc.append(i - 1)
                vv.append(v)
        mat = scipy.sparse.coo_matrix((vv, (rr, cc)), shape=(rows, cols))
        return mat.tocsr()

    # Array format: column-major dense values; symmetric files store the
    # lower triangle (diagonal included).
    if symmetry == "symmetric":
        count = rows * (rows + 1) // 2
    else:
        count = rows * cols
    if len(data_lines) != count:
        raise MatrixMarketError(
            f"line {len(lines)}: expected {count} array entries, found {len(data_lines)}"
        )
    values = [_parse_float(raw.split()[0], lineno) for lineno, raw in data_lines]
    for (lineno, raw) in data_lines:
        if len(raw.split()) != 1:
            raise MatrixMarketError(
                f"line {lineno}: array entry must be a single value, got {raw!r}"
            )
    A = np.empty((rows, cols), dtype=float)
    if symmetry == "symmetric":
        k = 0
        for j in range(cols):
            for i in range(j, rows):
                A[i, j] = values[k]
                A[j, i] = values[k]
                k += 1
    else:
        A[:] = np.asarray(values).reshape((cols, rows)).T
    return A


def _write_lines(path, lines):
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_matrix_market(path, A, comment: str | None = None) -> None:
    """Write a matrix or vector in MatrixMarket format.

    Dense arrays (a 1-D vector becomes an n-by-1 matrix) use the array
    format; sparse matrices use the coordinate format. Always writes
    ``general`` symmetry, which every reader accepts.
    """
    lines = []
    if scipy.sparse.issparse(A):
        coo = A.tocoo()
        lines.append(f"{_BANNER} matrix coordinate real general")
        if comment:
            lines.append(f"% {comment}")
        lines.append(f"{coo.shape[0]} {coo.shape[1]} {coo.nnz}")
        order = np.lexsort((coo.col, coo.row))
        for k in order:
            lines.append(
                f"{coo.row[k] + 1} {coo.col[k] + 1} {format(float(coo.data[k]), '.17g')}"
            )
        _write_lines(path, lines)
        return

    arr = np.asarray(A, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"can only write 1-D or 2-D arrays, got shape {arr.shape}")
    lines.append(f"{_BANNER} matrix array real general")
    if comment:
        lines.append(f"% {comment}")
    lines.append(f"{arr.shape[0]} {arr.shape[1]}")
    for j in range(arr.shape[1]):
        for i in range(arr.shape[0]):
            lines.append(format(float(arr[i, j]), ".17g"))
    _write_lines(path, lines)
