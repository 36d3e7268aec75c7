"""
gnuplot scripts for report tables.

Each report CSV gets one self-contained script with its data inlined as
gnuplot data blocks. The script is chosen by the table's columns: sweep
tables (`kappa` and `d_*`) give distance-vs-κ and Hoff-energy bars,
diagnostics series (`t`) give extrema-vs-time, resolution tables (`n`)
give residual-vs-resolution.
"""

from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from hofflab.io.tables import read_csv
from hofflab.utilities.jinja import Template
from hofflab.utilities.logging import get_logger

logger = get_logger(__name__)


def _rows(frame: pd.DataFrame, columns: list[str]) -> list[list[float]]:
    return frame[columns].to_numpy(dtype=np.float64).tolist()


class PlotTemplate(Template):
    source: str
    stem: str


class HeaderTemplate(PlotTemplate):
    template: str = """
        # gnuplot script generated by hofflab from {{ source }}
        set terminal pngcairo size 900,600 enhanced
        set grid
        """


class EmptyTemplate(PlotTemplate):
    template: str = """
        # gnuplot script generated by hofflab from {{ source }}
        # {{ reason }}; there is nothing to plot.
        """
    reason: str


class DistanceTemplate(PlotTemplate):
    template: str = """

        # distance to the κ = 0 run against κ
        $distance << EOD
        {% for row in rows %}
        {{ row | map("g17") | join(" ") }}
        {% endfor %}
        EOD
        set output '{{ stem }}-distance.png'
        set logscale xy
        set xlabel "κ"
        set ylabel "distance to κ = 0"
        set key left top
        plot {% for name in norms %}$distance using 1:{{ loop.index + 1 }} with linespoints title "{{ name }}"{{ ", " if not loop.last else "" }}{% endfor %}

        unset logscale
        """
    norms: list[str]
    rows: list[list[float]]


class HoffBarsTemplate(PlotTemplate):
    template: str = """

        # Hoff functionals per κ
        $hoff << EOD
        "kappa" {% for name in terms %}"{{ name }}" {% endfor %}

        {% for row in rows %}
        {{ row | map("g17") | join(" ") }}
        {% endfor %}
        EOD
        set output '{{ stem }}-hoff.png'
        set style data histograms
        set style histogram clustered
        set style fill solid 0.8
        set logscale y
        set xlabel "κ"
        set key outside right
        plot for [i=2:{{ terms | length + 1 }}] $hoff using i:xtic(1) title columnheader(i)
        unset logscale
        """
    terms: list[str]
    rows: list[list[float]]


class ExtremaTemplate(PlotTemplate):
    template: str = """

        # density and temperature extrema against time
        $extrema << EOD
        {% for row in rows %}
        {{ row | map("g17") | join(" ") }}
        {% endfor %}
        EOD
        set output '{{ stem }}-extrema.png'
        set xlabel "t"
        set key outside right
        plot $extrema using 1:2 with lines title "min ρ", \\
             $extrema using 1:3 with lines title "max ρ", \\
             $extrema using 1:4 with lines title "min θ", \\
             $extrema using 1:5 with lines title "max θ"
        """
    rows: list[list[float]]


class ResolutionTemplate(PlotTemplate):
    template: str = """

        # identity residuals against the number of cells
        $residuals << EOD
        {% for row in rows %}
        {{ row | map("g17") | join(" ") }}
        {% endfor %}
        EOD
        set output '{{ stem }}-residuals.png'
        set logscale xy
        set xlabel "n"
        set ylabel "max residual"
        set key outside right
        plot {% for name in residuals %}$residuals using 1:{{ loop.index + 1 }} with linespoints title "{{ name }}"{{ ", " if not loop.last else "" }}{% endfor %}

        unset logscale
        """
    residuals: list[str]
    rows: list[list[float]]


EXTREMA_COLUMNS = ["t", "rho_min", "rho_max", "theta_min", "theta_max"]


def render_plot_script(frame: pd.DataFrame, source: str, stem: Optional[str] = None) -> str:
    """The gnuplot script for one table. Pure text; nothing is plotted."""
    stem = stem or Path(source).stem
    context = {"source": source, "stem": stem}
    columns = list(frame.columns)

    if frame.empty:
        return EmptyTemplate(reason="the table is empty", **context).render() + "\n"

    parts = [HeaderTemplate(**context).render()]
    distance_columns = [c for c in columns if c.startswith("d_")]
    if "kappa" in columns and distance_columns:
        parts.append(
            DistanceTemplate(
                norms=[c.removeprefix("d_") for c in distance_columns],
                rows=_rows(frame, ["kappa", *distance_columns]),
                **context,
            ).render()
        )
        hoff_columns = [c for c in columns if c.startswith(("hoff1.", "hoff2."))]
        if hoff_columns:
            parts.append(
                HoffBarsTemplate(
                    terms=hoff_columns,
                    rows=_rows(frame, ["kappa", *hoff_columns]),
                    **context,
                ).render()
            )
    elif all(c in columns for c in EXTREMA_COLUMNS):
        parts.append(ExtremaTemplate(rows=_rows(frame, EXTREMA_COLUMNS), **context).render())
    elif "n" in columns:
        residuals = [c for c in columns if c != "n"]
        parts.append(
            ResolutionTemplate(
                residuals=residuals, rows=_rows(frame, ["n", *residuals]), **context
            ).render()
        )
    else:
        return EmptyTemplate(reason="no known plot for these columns", **context).render() + "\n"
    return "\n\n".join(parts) + "\n"


def emit_plots(
    paths: list[Union[str, Path]], out_dir: Optional[Union[str, Path]] = None
) -> list[Path]:
    """Write `<stem>.gp` next to each report CSV (or into `out_dir`)."""
    written = []
    for path in map(Path, paths):
        try:
            frame = read_csv(path)
        except pd.errors.EmptyDataError:
            frame = pd.DataFrame()
        target = Path(out_dir or path.parent) / f"{path.stem}.gp"
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(render_plot_script(frame, path.name, path.stem))
        logger.debug(f"wrote plot script {target}")
        written.append(target)
    return written
