"""Standard figure set over the simulator's diagnostics CSV contract.

Figures are batch-rendered from files only; rendering is read-only and
idempotent (timestamps are suppressed so re-rendering reproduces the same
bytes).  Every referenced CSV column is validated up front and a missing
one raises MissingColumnError naming it.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

__all__ = ["FigureSpec", "MissingColumnError", "PlotsError", "render", "KINDS"]

KINDS = ("identity-residual", "decay", "monotonicity", "kato", "profile")

_SAVE_KWARGS = {"dpi": 110, "metadata": {"Software": "gkdv-plots"}}


class PlotsError(ValueError):
    """Figure specification or input problem."""


class MissingColumnError(PlotsError):
    def __init__(self, column: str, path):
        super().__init__(f"input {path} has no column named {column!r}")
        self.column = column


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: tuple[str, ...]
    output: str
    functional: Optional[str] = None  # identity-residual only
    x_scale: Optional[str] = None
    y_scale: Optional[str] = None
    title: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PlotsError(f"unknown figure kind {self.kind!r}; choose from {KINDS}")
        if not self.inputs:
            raise PlotsError("at least one input CSV is required")
        if self.kind == "identity-residual" and self.functional is None:
            raise PlotsError("identity-residual figures need a functional name")

    @classmethod
    def from_dict(cls, raw: Mapping) -> "FigureSpec":
        inputs = raw.get("input", raw.get("inputs"))
        if isinstance(inputs, str):
            inputs = (inputs,)
        elif inputs is not None:
            inputs = tuple(inputs)
        else:
            raise PlotsError("figure spec needs an 'input' path")
        try:
            return cls(
                kind=raw["kind"],
                inputs=inputs,
                output=raw["output"],
                functional=raw.get("functional"),
                x_scale=raw.get("x_scale"),
                y_scale=raw.get("y_scale"),
                title=raw.get("title"),
            )
        except KeyError as err:
            raise PlotsError(f"figure spec missing {err.args[0]!r}") from None

    @classmethod
    def from_json(cls, path) -> "FigureSpec":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class Table:
    path: str
    columns: list[str]
    data: np.ndarray  # shape (rows, columns)

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise MissingColumnError(name, self.path)
        return self.data[:, self.columns.index(name)]


def load_table(path) -> Table:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) if v else math.nan for v in row] for row in reader]
    if not rows:
        return Table(str(path), header, np.empty((0, len(header))))
    return Table(str(path), header, np.array(rows))


def _check_time_axis(t: np.ndarray) -> None:
    if t.size > 1 and not np.all(np.diff(t) > 0):
        raise PlotsError("time axis is not strictly increasing")


def _new_axes(n_rows: int = 1):
    fig, axes = plt.subplots(n_rows, 1, figsize=(7.0, 2.8 * n_rows), sharex=True)
    return fig, (axes if n_rows > 1 else [axes])


def _finish(fig, spec: FigureSpec) -> str:
    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, **_SAVE_KWARGS)
    plt.close(fig)
    return str(out)


def _render_identity_residual(spec: FigureSpec) -> str:
    table = load_table(spec.inputs[0])
    key = spec.functional
    value_col = f"{key}_value" if f"{key}_value" in table.columns else key
    t = table.column("t")
    _check_time_axis(t)
    value = table.column(value_col)
    rhs = table.column(f"{key}_rhs")
    fd = table.column(f"fd_{key}")
    fig, (top, bottom) = _new_axes(2)
    top.plot(t, value, label=value_col, lw=1.2)
    top.plot(t, rhs, label=f"{key}_rhs", lw=0.9, ls="--")
    top.set_ylabel(key)
    top.legend(loc="best", fontsize=8)
    residual = np.abs(fd - rhs)
    bottom.plot(t, residual, lw=0.9, color="crimson")
    if np.any(np.isfinite(residual) & (residual > 0)):
        bottom.set_yscale("log")
    bottom.set_ylabel("|d/dt - rhs|")
    bottom.set_xlabel("t")
    return _finish(fig, spec)


def _render_decay(spec: FigureSpec) -> str:
    table = load_table(spec.inputs[0])
    t = table.column("t_diag")
    _check_time_axis(t)
    h1 = table.column("h1_local")
    fig, (ax,) = _new_axes(1)
    ax.plot(t, h1, lw=1.2, label="H1 over I(t)")
    # scaled sqrt(t)/log t envelope for visual comparison
    safe = t > 2.0
    envelope = np.full_like(t, np.nan)
    envelope[safe] = np.sqrt(t[safe]) / np.log(t[safe])
    finite = np.isfinite(h1) & safe & (h1 > 0)
    if finite.any():
        envelope *= h1[finite][0] / envelope[np.nonzero(finite)[0][0]]
        ax.plot(t, envelope, lw=0.8, ls=":", color="gray",
                label="sqrt(t)/log t (scaled)")
        # annotate the fitted log-log trend of the tail half
        tail = finite & (t >= t[finite].max() / 2)
        if tail.sum() >= 2:
            slope = np.polyfit(np.log(t[tail]), np.log(h1[tail]), 1)[0]
            ax.annotate(f"tail slope {slope:+.3f}", xy=(0.02, 0.05),
                        xycoords="axes fraction", fontsize=8)
    if finite.any():  # log axes need positive data; empty axes stay linear
        ax.set_xscale(spec.x_scale or "log")
        ax.set_yscale(spec.y_scale or "log")
    ax.set_xlabel("t")
    ax.set_ylabel("localized H1")
    ax.legend(loc="best", fontsize=8)
    return _finish(fig, spec)


def _render_monotonicity(spec: FigureSpec) -> str:
    table = load_table(spec.inputs[0])
    t = table.column("t")
    _check_time_axis(t)
    fig, (top, bottom) = _new_axes(2)
    top.plot(t, table.column("Omega"), lw=1.2, color="tab:blue")
    top.set_ylabel("int x u dx")
    bottom.plot(t, table.column("Lambda"), lw=1.2, color="tab:orange")
    bottom.set_ylabel("int x u^2 dx")
    bottom.set_xlabel("t")
    return _finish(fig, spec)


def _render_kato(spec: FigureSpec) -> str:
    table = load_table(spec.inputs[0])
    t = table.column("t_diag")
    _check_time_axis(t)
    fig, (ax,) = _new_axes(1)
    for name in ("acc_sech2_u2", "acc_sech4_ux2", "acc_sech6_uxx2", "acc_exp_all"):
        ax.plot(t, table.column(name), lw=1.0, label=name)
    ax.set_xscale(spec.x_scale or "linear")
    ax.set_yscale(spec.y_scale or "linear")
    ax.set_xlabel("t")
    ax.set_ylabel("accumulated local smoothing")
    ax.legend(loc="best", fontsize=8)
    return _finish(fig, spec)


def _render_profile(spec: FigureSpec) -> str:
    fig, (ax,) = _new_axes(1)
    for path in spec.inputs:
        table = load_table(path)
        ax.plot(table.column("x"), table.column("value"), lw=1.0,
                label=Path(path).stem)
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    if len(spec.inputs) > 1:
        ax.legend(loc="best", fontsize=8)
    return _finish(fig, spec)


_RENDERERS = {
    "identity-residual": _render_identity_residual,
    "decay": _render_decay,
    "monotonicity": _render_monotonicity,
    "kato": _render_kato,
    "profile": _render_profile,
}


def render(spec: FigureSpec) -> str:
    """Render one figure and return the output path."""
    for path in spec.inputs:
        if not Path(path).exists():
            raise PlotsError(f"input file {path} does not exist")
    return _RENDERERS[spec.kind](spec)
