"""CSV readers and writers for paths, experiment summaries, samples and histograms.

Path files have header ``t,x,dl_lower,dl_upper,dw`` (``dw`` omitted when the
path carries no Brownian increments) and one row per grid point.  Increments
sit on the row of their left endpoint, so the final row leaves them empty.
Path values are written with 17 significant digits and round-trip exactly;
summaries use 6.
"""

import csv
import io
import math

import numpy as np

from .exceptions import ReflectedOUError
from .kernel import SamplePath

__all__ = [
    "CsvFormatError",
    "PATH_HEADER",
    "SUMMARY_HEADER",
    "SAMPLES_HEADER",
    "HISTOGRAM_HEADER",
    "path_to_csv",
    "path_from_csv",
    "write_path",
    "read_path",
    "summary_rows_to_csv",
    "samples_to_csv",
    "histogram_to_csv",
]

PATH_HEADER = ["t", "x", "dl_lower", "dl_upper", "dw"]
SUMMARY_HEADER = ["theta", "sigma", "h", "n", "N", "method", "scheme", "bias", "std_dev", "mse", "asy_var"]
SAMPLES_HEADER = ["replication", "theta_hat", "normalized_error"]
HISTOGRAM_HEADER = ["bin_center", "density"]


class CsvFormatError(ReflectedOUError):
    """Raised for unreadable or malformed CSV input."""


def _g17(v):
    return format(float(v), ".17g")


def _g6(v):
    return format(float(v), ".6g")


def _writer(buf):
    return csv.writer(buf, lineterminator="\n")


def path_to_csv(path):
    buf = io.StringIO()
    w = _writer(buf)
    with_dw = path.dw is not None
    w.writerow(PATH_HEADER if with_dw else PATH_HEADER[:-1])
    t = path.times
    for k in range(path.n + 1):
        row = [_g17(t[k]), _g17(path.states[k])]
        if k < path.n:
            row += [_g17(path.dl_lower[k]), _g17(path.dl_upper[k])]
            if with_dw:
                row.append(_g17(path.dw[k]))
        else:
            row += [""] * (3 if with_dw else 2)
        w.writerow(row)
    return buf.getvalue()


def _float(text, where):
    try:
        v = float(text)
    except ValueError:
        raise CsvFormatError(f"{where}: not a number: {text!r}") from None
    if not math.isfinite(v):
        raise CsvFormatError(f"{where}: non-finite value {text!r}")
    return v


def path_from_csv(text):
    """Parse the path CSV format back into a :class:`SamplePath`."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise CsvFormatError("empty path file")
    header = [c.strip() for c in rows[0]]
    if header not in (PATH_HEADER, PATH_HEADER[:-1]):
        raise CsvFormatError(f"unexpected header {rows[0]!r}")
    ncol = len(header)
    body = [r for r in rows[1:] if r]
    if len(body) < 2:
        raise CsvFormatError("a path file needs at least two data rows")
    cols = [[] for _ in range(ncol)]
    for lineno, r in enumerate(body, start=2):
        if len(r) != ncol:
            raise CsvFormatError(f"line {lineno}: expected {ncol} fields, got {len(r)}")
        last = lineno == len(body) + 1
        for j, cell in enumerate(r):
            if j >= 2 and last:
                if cell.strip():
                    raise CsvFormatError(f"line {lineno}: the final row carries no increments")
                continue
            cols[j].append(_float(cell, f"line {lineno}"))
    t = np.array(cols[0])
    h = t[1] - t[0]
    if not h > 0 or t[0] != 0.0:
        raise CsvFormatError("time column must start at 0 and increase")
    if not np.allclose(t, h * np.arange(t.shape[0]), rtol=1e-9, atol=1e-12 * h):
        raise CsvFormatError("time column is not a uniform grid")
    try:
        return SamplePath(h, cols[1], cols[2], cols[3], cols[4] if ncol == 5 else None)
    except ValueError as exc:
        raise CsvFormatError(str(exc)) from exc


def write_path(path, dest):
    with open(dest, "w", newline="") as fh:
        fh.write(path_to_csv(path))


def read_path(src):
    try:
        with open(src, newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise CsvFormatError(f"cannot read {src}: {exc}") from exc
    return path_from_csv(text)


def summary_row(config, summary):
    p, g = config.params, config.grid
    return [_g6(p.theta), _g6(p.sigma), _g6(g.h), str(g.n), str(summary.n_replications),
            config.method.value, config.scheme.value,
            _g6(summary.bias), _g6(summary.std_dev), _g6(summary.mse), _g6(summary.asy_var)]


def summary_rows_to_csv(pairs):
    """``pairs`` is an iterable of ``(ExperimentConfig, McSummary)``."""
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(SUMMARY_HEADER)
    for config, summary in pairs:
        w.writerow(summary_row(config, summary))
    return buf.getvalue()


def samples_to_csv(samples, normalized):
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(SAMPLES_HEADER)
    for i, (s, z) in enumerate(zip(samples, normalized)):
        w.writerow([i, _g17(s.theta_hat), _g17(z)])
    return buf.getvalue()


def histogram_to_csv(hist):
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(HISTOGRAM_HEADER)
    for c, d in hist.rows():
        w.writerow([_g17(c), _g17(d)])
    return buf.getvalue()
