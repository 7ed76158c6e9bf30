import csv
import io
import json
import logging
import math
import typing

import numpy as np

_lg = logging.getLogger("fluxlattice")

SIGNIFICANT_DIGITS = 12


def format_float(x: float) -> str:
    """fixed formatting with 12 significant digits, the determinism contract of every export"""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    return "{:.{}g}".format(x, SIGNIFICANT_DIGITS)


def _plain(data):
    # numpy scalars and arrays become plain json types; floats are rounded
    # to 12 significant digits so repeated runs give identical bytes
    if isinstance(data, typing.Mapping):
        return {str(k_): _plain(v_) for k_, v_ in data.items()}
    if hasattr(data, "to_dict"):
        return _plain(data.to_dict())
    if isinstance(data, (list, tuple, np.ndarray)):
        return [_plain(v_) for v_ in data]
    if isinstance(data, (bool, np.bool_)):
        return bool(data)
    if isinstance(data, (int, np.integer)):
        return int(data)
    if isinstance(data, (float, np.floating)):
        x_ = float(data)
        if math.isfinite(x_):
            return float(format_float(x_))
        return format_float(x_)
    if isinstance(data, complex):
        return [_plain(data.real), _plain(data.imag)]
    return data


class Report(dict):
    """
    dict-like base class of every emitted report (derived parameters, spectra,
    resonance tables, frequency plans, locality tables)
    derived classes fix their keys in __init__ and may implement to_rows()
    for csv export, returning (header, rows)
    """
    def to_dict(self) -> dict:
        return {k_: v_ for k_, v_ in self.items()}

    @classmethod
    def from_dict(cls, data: typing.Mapping) -> "Report":
        r_ = cls()
        if not isinstance(data, typing.Mapping):        # pragma: no branch
            return r_
        r_.update(data)
        return r_

    def to_rows(self) -> typing.Tuple[typing.List[str], typing.List[list]]:
        header_ = ["key", "value"]
        rows_ = [[k_, v_] for k_, v_ in sorted(self.items()) if not isinstance(v_, (typing.Mapping, list, tuple))]
        return header_, rows_

    def __str__(self):
        return json.dumps(_plain(self.to_dict()), indent=2, sort_keys=True)


def dumps_json(data) -> str:
    return json.dumps(_plain(data), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def dumps_csv(data) -> str:
    if not hasattr(data, "to_rows"):
        raise ValueError("{} cannot be exported as csv".format(type(data).__name__))
    header_, rows_ = data.to_rows()
    buf_ = io.StringIO()
    writer_ = csv.writer(buf_, lineterminator="\n")
    writer_.writerow(header_)
    for row_ in rows_:
        writer_.writerow([format_float(v_) if isinstance(v_, (float, int, np.floating, np.integer)) else v_
                          for v_ in row_])
    return buf_.getvalue()


def export_report(data, fmt: str, path: typing.Optional[str] = None) -> str:
    """
    serialize a report deterministically (stable key order, 12 significant digits)
    :param data: Report or any object with to_dict() / to_rows()
    :param fmt: str, "json" or "csv"
    :param path: output file; None or "-" returns the text only
    :return: str, the written text
    """
    if "json" == fmt:
        text_ = dumps_json(data)
    elif "csv" == fmt:
        text_ = dumps_csv(data)
    else:
        raise ValueError("unsupported output format {}".format(fmt))
    if path and "-" != path:
        try:
            with open(path, "w", encoding="utf-8", newline="") as f_:
                f_.write(text_)
        except OSError as e_:
            _lg.error("failed to write report to %s: %s", path, e_)
            raise
        _lg.info("wrote %s report to %s", fmt, path)
    return text_
