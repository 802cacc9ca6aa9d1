"""Offline batch publication: an HTML tree presenting every simulation.

Simulations are grouped by their first keyword on the index page; each gets
its own page with metadata, notes, a default-run SVG screenshot and a launch
link into the live service.  Output bytes are deterministic so re-publishing
an unchanged registry is a no-op diff.
"""

from __future__ import annotations

from html import escape
from pathlib import Path

from ..document import resolve_language
from ..render import build_plot_model, render_svg
from ..runtime import make_valuation, run
from .registry import SimulationRegistry

__all__ = ["publish_static"]

_PAGE_STYLE = (
    "body{font-family:sans-serif;max-width:52em;margin:2em auto;padding:0 1em;"
    "color:#222}h1,h2{color:#123}a{color:#1f77b4}img{border:1px solid #ccc;"
    "max-width:100%}dl dt{font-weight:bold}ul{line-height:1.6}"
)


def publish_static(
    registry: SimulationRegistry,
    out_dir: str | Path,
    *,
    thumbnail_size: tuple[int, int] = (480, 360),
    launch_base: str = "",
) -> list[Path]:
    """Write index.html plus one page and one SVG per simulation.

    Returns the written paths (sorted).  launch_base prefixes the launch
    links, e.g. "http://server:8000".
    """
    out = Path(out_dir)
    (out / "sims").mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    entries = sorted(registry.entries.values(), key=lambda e: e.doc_id)

    categories: dict[str, list] = {}
    for entry in entries:
        category = entry.keywords[0] if entry.keywords else "uncategorized"
        categories.setdefault(category, []).append(entry)

    index: list[str] = [
        "<!DOCTYPE html>",
        '<html lang="en"><head><meta charset="utf-8"/>',
        "<title>Simulations</title>",
        f"<style>{_PAGE_STYLE}</style></head><body>",
        "<h1>Simulations</h1>",
    ]
    for category in sorted(categories):
        index.append(f"<h2>{escape(category)}</h2>")
        index.append("<ul>")
        for entry in categories[category]:
            index.append(
                f'<li><a href="sims/{entry.doc_id}.html">{escape(entry.title)}</a>'
                f" &mdash; {escape(', '.join(entry.keywords))}</li>"
            )
        index.append("</ul>")
    index.append("</body></html>")
    index_path = out / "index.html"
    index_path.write_text("\n".join(index) + "\n", encoding="utf-8")
    written.append(index_path)

    for entry in entries:
        svg_path = out / "sims" / f"{entry.doc_id}.svg"
        svg_path.write_text(_thumbnail(registry, entry.doc_id, thumbnail_size))
        written.append(svg_path)

        launch = f"{launch_base}/ui/?doc={entry.doc_id}"
        page = [
            "<!DOCTYPE html>",
            '<html lang="en"><head><meta charset="utf-8"/>',
            f"<title>{escape(entry.title)}</title>",
            f"<style>{_PAGE_STYLE}</style></head><body>",
            f"<h1>{escape(entry.title)}</h1>",
            "<dl>",
            f"<dt>Author</dt><dd>{escape(entry.author)}</dd>",
            f"<dt>Date</dt><dd>{escape(entry.date)}</dd>",
            f"<dt>Keywords</dt><dd>{escape(', '.join(entry.keywords))}</dd>",
            "</dl>",
        ]
        for paragraph in entry.notes:
            page.append(f"<p>{escape(paragraph)}</p>")
        page.append(f'<p><img src="{entry.doc_id}.svg" alt="default run"/></p>')
        page.append(f'<p><a href="{escape(launch, quote=True)}">Launch</a> &middot; ')
        page.append('<a href="../index.html">All simulations</a></p>')
        page.append("</body></html>")
        page_path = out / "sims" / f"{entry.doc_id}.html"
        page_path.write_text("\n".join(page) + "\n", encoding="utf-8")
        written.append(page_path)

    return sorted(written)


def _thumbnail(
    registry: SimulationRegistry, doc_id: str, size: tuple[int, int]
) -> str:
    compute_ir, _ = registry.compiled(doc_id, None)
    valuation, _ = make_valuation(compute_ir)
    result = run(compute_ir, valuation)
    display = resolve_language(registry.entries[doc_id].doc, None).doc.display
    model = build_plot_model(display, result)
    return render_svg(model, size=size)
