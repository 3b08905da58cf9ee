"""Offline report rendering: chart figures plus delimited exports.

The service itself serves data only; this module exists for the CLI's
``report`` verb, which renders an API's statistical view to PNG figures
with matching CSV files for anyone working outside the browser UI.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_POS_COLOR = "#2a9d8f"
_NEG_COLOR = "#e76f51"


def _placeholder(ax, message: str) -> None:
    ax.text(0.5, 0.5, message, ha="center", va="center", fontsize=11,
            color="#666666", transform=ax.transAxes)
    ax.set_axis_off()


def _save(fig, path: Path) -> Path:
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def _write_csv(path: Path, header: list[str], rows: list[list]) -> Path:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


def render_sentiment_pie(stats: dict, out_dir: Path) -> list[Path]:
    overview = stats["overview"]
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    if overview["empty"]:
        _placeholder(ax, "no reviews")
    else:
        ax.pie([overview["positive"], overview["negative"]],
               labels=["positive", "negative"],
               colors=[_POS_COLOR, _NEG_COLOR],
               autopct="%d%%", startangle=90)
    ax.set_title(f"Review sentiment: {stats['api']}")
    files = [_save(fig, out_dir / "sentiment_pie.png")]
    files.append(_write_csv(out_dir / "overview.csv",
                            ["polarity", "count"],
                            [["positive", overview["positive"]],
                             ["negative", overview["negative"]]]))
    return files


def render_timeseries(stats: dict, out_dir: Path) -> list[Path]:
    series = stats["timeseries"]
    fig, ax = plt.subplots(figsize=(8, 4))
    points = series["points"]
    if series["empty"] or not points:
        _placeholder(ax, "no scenarios")
    else:
        months = [p["month"] for p in points]
        ax.plot(months, [p["positive"] for p in points],
                color=_POS_COLOR, marker="o", label="positive")
        ax.plot(months, [p["negative"] for p in points],
                color=_NEG_COLOR, marker="s", label="negative")
        ax.set_ylabel("opinions")
        ax.legend()
        step = max(1, len(months) // 12)
        ax.set_xticks(months[::step])
        ax.tick_params(axis="x", rotation=45)
    ax.set_title(f"Sentiment over time: {stats['api']}")
    files = [_save(fig, out_dir / "sentiment_timeseries.png")]
    files.append(_write_csv(
        out_dir / "timeseries.csv",
        ["month", "positive", "negative"],
        [[p["month"], p["positive"], p["negative"]] for p in points]))
    return files


def render_co_used_apis(stats: dict, out_dir: Path) -> list[Path]:
    chart = stats["co_used_apis"]
    counts = chart["counts"]
    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    if chart["empty"] or not counts:
        _placeholder(ax, "no co-used APIs")
    else:
        ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:10]
        ax.pie([c for _, c in ranked], labels=[n for n, _ in ranked],
               autopct="%d%%", startangle=90)
    ax.set_title(f"APIs co-used with {stats['api']}")
    files = [_save(fig, out_dir / "co_used_apis.png")]
    files.append(_write_csv(
        out_dir / "co_used_apis.csv", ["api", "snippets"],
        [[name, counts[name]] for name in sorted(counts)]))
    return files


def render_co_used_types(stats: dict, out_dir: Path) -> list[Path]:
    chart = stats["co_used_types"]
    pairs = chart["pairs"]
    fig, ax = plt.subplots(figsize=(7, max(2.5, 0.45 * len(pairs) + 1.5)))
    if chart["empty"] or not pairs:
        _placeholder(ax, "no co-used type pairs")
    else:
        ranked = sorted(pairs, key=lambda p: (-p["count"], p["types"]))[:15]
        labels = [" + ".join(p["types"]) for p in ranked]
        ax.barh(range(len(ranked)), [p["count"] for p in ranked], color=_POS_COLOR)
        ax.set_yticks(range(len(ranked)))
        ax.set_yticklabels(labels, fontsize=8)
        ax.invert_yaxis()
        ax.set_xlabel("snippets")
    ax.set_title(f"Co-used types: {stats['api']}")
    files = [_save(fig, out_dir / "co_used_types.png")]
    files.append(_write_csv(
        out_dir / "co_used_types.csv", ["type", "other_type", "snippets"],
        [[p["types"][0], p["types"][1], p["count"]] for p in pairs]))
    return files


def render_type_ratings(stats: dict, out_dir: Path) -> list[Path]:
    ratings = stats["type_ratings"]["ratings"]
    fig, ax = plt.subplots(figsize=(7, max(2.5, 0.45 * len(ratings) + 1.5)))
    if not ratings:
        _placeholder(ax, "no rated types")
    else:
        names = sorted(ratings, key=lambda n: (-ratings[n]["value"], n))
        ax.barh(range(len(names)), [ratings[n]["value"] for n in names],
                color="#f4a261")
        ax.set_yticks(range(len(names)))
        ax.set_yticklabels(names, fontsize=8)
        ax.invert_yaxis()
        ax.set_xlim(0, 5)
        ax.set_xlabel("star rating")
    ax.set_title(f"Type ratings: {stats['api']}")
    files = [_save(fig, out_dir / "type_ratings.png")]
    files.append(_write_csv(
        out_dir / "type_ratings.csv",
        ["type", "rating", "positives", "negatives"],
        [[name, ratings[name]["value"], ratings[name]["positives"],
          ratings[name]["negatives"]] for name in sorted(ratings)]))
    return files


def write_report(bundle: dict, out_dir: str | Path) -> list[Path]:
    """Render every statistical chart of a bundle to figures + CSVs."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stats = bundle["stats"]
    files = []
    files += render_sentiment_pie(stats, out_dir)
    files += render_timeseries(stats, out_dir)
    files += render_co_used_apis(stats, out_dir)
    files += render_co_used_types(stats, out_dir)
    files += render_type_ratings(stats, out_dir)
    return files
