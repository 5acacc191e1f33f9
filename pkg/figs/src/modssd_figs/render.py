"""Render figure replicas from modssd sweep CSVs.

Three figure ids are recognized:

fig2  squeeze-sweep CSV -> Bloch-plane trajectory with markers at fixed dB
      increments plus fidelity-versus-squeezing curves
fig3  gkp-fidelity-grid CSV -> fidelity contours over the Bloch sphere
fig4  teleport-avg-sweep CSV -> infidelity curves against cluster squeezing,
      one curve per (input quality, intended state)

Rendering never recomputes physics; it plots exactly what the CSV
contains. Output images carry no timestamps, so re-rendering an unchanged
CSV reproduces the file byte for byte.
"""

from __future__ import annotations

import csv
import math
import sys
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402


class SchemaError(ValueError):
    """The CSV does not carry the columns a figure needs."""


@dataclass(frozen=True)
class FigureRecipe:
    figure: str
    csv_path: str
    output: str
    options: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.figure not in _RENDERERS:
            raise SchemaError(
                f"unknown figure id {self.figure!r}; expected one of "
                f"{sorted(_RENDERERS)}"
            )


def load_columns(path: str, required: tuple[str, ...]) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        names = reader.fieldnames or []
        missing = [col for col in required if col not in names]
        if missing:
            raise SchemaError(f"CSV {path} is missing column(s): {', '.join(missing)}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"CSV {path} has no data rows")
    return {col: np.array([float(r[col]) for r in rows]) for col in required}


def _save(fig, recipe: FigureRecipe) -> None:
    out = recipe.output
    metadata: dict = {}
    if out.endswith(".png"):
        metadata = {"Software": "modssd-figs"}
    elif out.endswith(".svg"):
        metadata = {"Date": None}
    elif out.endswith(".pdf"):
        metadata = {"CreationDate": None}
    fig.savefig(out, dpi=recipe.options.get("dpi", 150), metadata=metadata)


def render_fig2(recipe: FigureRecipe):
    cols = load_columns(
        recipe.csv_path,
        ("db", "bloch_x", "bloch_z", "fidelity_plus", "fidelity_zero"),
    )
    order = np.argsort(cols["db"])
    db = cols["db"][order]
    fig, (ax_bloch, ax_fid) = plt.subplots(1, 2, figsize=(9, 4))

    tick = recipe.options.get("db_tick", 2.0)
    marked = np.isclose(np.mod(db, tick), 0.0) | np.isclose(np.mod(db, tick), tick)
    ax_bloch.plot(cols["bloch_x"][order], cols["bloch_z"][order], "-", color="0.4")
    ax_bloch.plot(
        cols["bloch_x"][order][marked],
        cols["bloch_z"][order][marked],
        "o",
        mfc="none",
        color="tab:blue",
    )
    ax_bloch.set_xlabel("Bloch x")
    ax_bloch.set_ylabel("Bloch z")
    ax_bloch.set_xlim(recipe.options.get("x_range", (-0.05, 1.05)))
    ax_bloch.set_ylim(recipe.options.get("z_range", (-0.05, 1.05)))
    ax_bloch.set_aspect("equal")
    ax_bloch.set_title("logical Bloch vector (xz plane)")

    ax_fid.plot(db, cols["fidelity_plus"][order], "-", label="with |+>")
    ax_fid.plot(db, cols["fidelity_zero"][order], "--", label="with |0>")
    ax_fid.set_xlabel("squeezing (dB)")
    ax_fid.set_ylabel("logical fidelity")
    ax_fid.set_ylim(0.0, 1.02)
    ax_fid.legend(loc="lower right")
    fig.tight_layout()
    return fig


def render_fig3(recipe: FigureRecipe):
    cols = load_columns(recipe.csv_path, ("theta", "phi", "fidelity_intended"))
    fig, ax = plt.subplots(figsize=(5.5, 4))
    contour = ax.tricontourf(
        cols["phi"], cols["theta"], cols["fidelity_intended"],
        levels=recipe.options.get("levels", 21), cmap="viridis",
    )
    fig.colorbar(contour, ax=ax, label="logical fidelity")
    ax.set_xlabel("phi")
    ax.set_ylabel("theta")
    ax.set_yticks([0.0, math.pi / 2, math.pi])
    ax.set_yticklabels(["0", "pi/2", "pi"])
    ax.set_title("fidelity with the intended qubit state")
    fig.tight_layout()
    return fig


def _state_label(theta: float, phi: float) -> str:
    if abs(theta) < 1e-9:
        return "|0>"
    if abs(theta - math.pi / 2) < 1e-9 and abs(phi) < 1e-9:
        return "|+>"
    return f"theta={theta:.3f},phi={phi:.3f}"


def render_fig4(recipe: FigureRecipe):
    cols = load_columns(
        recipe.csv_path, ("delta_db", "zeta_db", "theta", "phi", "infidelity")
    )
    fig, ax = plt.subplots(figsize=(5.5, 4))
    states = sorted(set(zip(cols["theta"], cols["phi"])))
    deltas = sorted(set(cols["delta_db"]))
    for theta, phi in states:
        label_state = _state_label(theta, phi)
        color = "tab:blue" if label_state == "|+>" else "tab:red"
        for delta_db in deltas:
            mask = (
                np.isclose(cols["theta"], theta)
                & np.isclose(cols["phi"], phi)
                & np.isclose(cols["delta_db"], delta_db)
            )
            order = np.argsort(cols["zeta_db"][mask])
            ax.semilogy(
                cols["zeta_db"][mask][order],
                cols["infidelity"][mask][order],
                "-o",
                ms=3,
                color=color if label_state in ("|+>", "|0>") else None,
                label=f"{label_state}, input {delta_db:g} dB",
            )
    ax.set_xlabel("cluster squeezing (dB)")
    ax.set_ylabel("logical infidelity")
    ax.legend(fontsize=6, ncol=2)
    fig.tight_layout()
    return fig


_RENDERERS = {"fig2": render_fig2, "fig3": render_fig3, "fig4": render_fig4}


def render(recipe: FigureRecipe):
    """Render one figure and write the image; returns the matplotlib figure."""
    fig = _RENDERERS[recipe.figure](recipe)
    _save(fig, recipe)
    return fig


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 3:
        print("usage: render-fig <figure-id> <csv> <out-image>", file=sys.stderr)
        return 2
    try:
        recipe = FigureRecipe(argv[0], argv[1], argv[2])
        fig = render(recipe)
        plt.close(fig)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
