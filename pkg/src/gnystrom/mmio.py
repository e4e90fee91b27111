"""Matrix Market reader and writer.

Coordinate files load as CSR arrays (1-based indices shifted, duplicates
summed, symmetric and skew-symmetric storage expanded); array files load as
dense arrays. Integer and pattern fields are promoted to real.
"""

import numpy as np
import scipy.sparse as sp

from .exceptions import MatrixMarketError

BANNER = "%%MatrixMarket"
FORMATS = ("coordinate", "array")
FIELDS = ("real", "integer", "pattern")
SYMMETRIES = ("general", "symmetric", "skew-symmetric")


def _parse_header(line):
    tokens = line.split()
    if not tokens or tokens[0] != BANNER:
        raise MatrixMarketError(f"missing {BANNER} banner", 1)
    if len(tokens) != 5:
        raise MatrixMarketError("banner must read: %%MatrixMarket matrix <format> <field> <symmetry>", 1)
    obj, fmt, field, symmetry = (t.lower() for t in tokens[1:])
    if obj != "matrix":
        raise MatrixMarketError(f"unsupported object {obj!r}", 1)
    if fmt not in FORMATS:
        raise MatrixMarketError(f"unsupported format {fmt!r}", 1)
    if field not in FIELDS:
        raise MatrixMarketError(f"unsupported field {field!r}", 1)
    if symmetry not in SYMMETRIES:
        raise MatrixMarketError(f"unsupported symmetry {symmetry!r}", 1)
    if fmt == "array" and field == "pattern":
        raise MatrixMarketError("pattern field is not allowed in array format", 1)
    return fmt, field, symmetry


def _ints(tokens, lineno, what):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise MatrixMarketError(f"non-integer {what}: {' '.join(tokens)}", lineno) from None


def _real(token, lineno):
    try:
        value = float(token)
    except ValueError:
        raise MatrixMarketError(f"non-numeric value {token!r}", lineno) from None
    if not np.isfinite(value):
        raise MatrixMarketError(f"non-finite value {token!r}", lineno)
    return value


def read_matrix_market(path):
    """Read a Matrix Market file: CSR array for coordinate, ndarray for array format."""
    with open(path, encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise MatrixMarketError("empty file", 1)
    fmt, field, symmetry = _parse_header(lines[0])

    # Data lines: everything after the banner that is neither blank nor a comment.
    body = [(i + 1, ln.split()) for i, ln in enumerate(lines[1:], start=1)
            if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise MatrixMarketError("missing size line", len(lines))
    size_lineno, size_tokens = body[0]
    entries = body[1:]
    if fmt == "coordinate":
        if len(size_tokens) != 3:
            raise MatrixMarketError("coordinate size line needs: rows cols nnz", size_lineno)
        m, n, nnz = _ints(size_tokens, size_lineno, "size line")
        if nnz < 0:
            raise MatrixMarketError(f"negative entry count {nnz}", size_lineno)
    else:
        if len(size_tokens) != 2:
            raise MatrixMarketError("array size line needs: rows cols", size_lineno)
        m, n = _ints(size_tokens, size_lineno, "size line")
    if m <= 0 or n <= 0:
        raise MatrixMarketError(f"dimensions must be positive, got {m} x {n}", size_lineno)
    if symmetry != "general" and m != n:
        raise MatrixMarketError(f"{symmetry} matrix must be square, got {m} x {n}", size_lineno)

    if fmt == "coordinate":
        return _read_coordinate(entries, m, n, nnz, field, symmetry, size_lineno)
    return _read_array(entries, m, n, symmetry, size_lineno)


def _read_coordinate(entries, m, n, nnz, field, symmetry, size_lineno):
    if len(entries) != nnz:
        where = entries[nnz][0] if len(entries) > nnz else (entries[-1][0] if entries else size_lineno)
        raise MatrixMarketError(
            f"expected {nnz} entries, found {len(entries)}"
            + (" (truncated entry list)" if len(entries) < nnz else ""), where)
    ntok = 2 if field == "pattern" else 3
    rows = np.empty(nnz, dtype=np.int64)
    cols = np.empty(nnz, dtype=np.int64)
    vals = np.ones(nnz, dtype=np.float64)
    for e, (lineno, tokens) in enumerate(entries):
        if len(tokens) != ntok:
            raise MatrixMarketError(f"expected {ntok} tokens per entry, got {len(tokens)}", lineno)
        i, j = _ints(tokens[:2], lineno, "index")
        if not (1 <= i <= m and 1 <= j <= n):
            raise MatrixMarketError(f"index ({i}, {j}) outside 1..{m} x 1..{n}", lineno)
        if symmetry != "general" and i < j:
            raise MatrixMarketError(f"{symmetry} storage needs lower-triangle entries, got ({i}, {j})", lineno)
        if symmetry == "skew-symmetric" and i == j:
            raise MatrixMarketError("skew-symmetric storage cannot hold diagonal entries", lineno)
        rows[e], cols[e] = i - 1, j - 1
        if field != "pattern":
            vals[e] = _real(tokens[2], lineno)

    if symmetry != "general":
        off = rows != cols
        sign = -1.0 if symmetry == "skew-symmetric" else 1.0
        rows, cols, vals = (np.concatenate([rows, cols[off]]),
                            np.concatenate([cols, rows[off]]),
                            np.concatenate([vals, sign * vals[off]]))
    a = sp.csr_array(sp.coo_array((vals, (rows, cols)), shape=(m, n)))
    a.sum_duplicates()
    a.sort_indices()
    return a


def _read_array(entries, m, n, symmetry, size_lineno):
    if symmetry == "general":
        expected = m * n
    elif symmetry == "symmetric":
        expected = n * (n + 1) // 2
    else:
        expected = n * (n - 1) // 2
    if len(entries) != expected:
        where = entries[expected][0] if len(entries) > expected else (entries[-1][0] if entries else size_lineno)
        raise MatrixMarketError(f"expected {expected} values, found {len(entries)}", where)
    values = []
    for lineno, tokens in entries:
        if len(tokens) != 1:
            raise MatrixMarketError(f"expected one value per line, got {len(tokens)}", lineno)
        values.append(_real(tokens[0], lineno))
    if symmetry == "general":
        return np.array(values, dtype=np.float64).reshape((n, m)).T.copy()
    # Packed lower triangle, column by column.
    a = np.zeros((n, n))
    it = iter(values)
    start = 0 if symmetry == "symmetric" else 1
    for j in range(n):
        for i in range(j + start, n):
            a[i, j] = next(it)
    sign = -1.0 if symmetry == "skew-symmetric" else 1.0
    lower = np.tril(a, -1)
    return np.diag(np.diag(a)) + lower + sign * lower.T if start == 0 else lower + sign * lower.T


def write_matrix_market(path, matrix, comment=None):
    """Write ``matrix`` in general storage with 17 significant digits.

    Sparse input goes to coordinate format in row-major entry order; dense
    input goes to array format (column-major, as the exchange format defines).
    """
    lines = []
    if sp.issparse(matrix):
        a = sp.csr_array(matrix)
        a.sum_duplicates()
        a.sort_indices()
        lines.append(f"{BANNER} matrix coordinate real general")
        if comment:
            lines.append(f"% {comment}")
        m, n = a.shape
        lines.append(f"{m} {n} {a.nnz}")
        rows = np.repeat(np.arange(m), np.diff(a.indptr))
        lines.extend(f"{i + 1} {j + 1} {v:.17g}" for i, j, v in zip(rows, a.indices, a.data))
    else:
        a = np.asarray(matrix, dtype=np.float64)
        if a.ndim != 2:
            raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
        lines.append(f"{BANNER} matrix array real general")
        if comment:
            lines.append(f"% {comment}")
        lines.append(f"{a.shape[0]} {a.shape[1]}")
        lines.extend(f"{v:.17g}" for v in a.ravel(order="F"))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")
