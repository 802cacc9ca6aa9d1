"""simforge: declarative simulation authoring.

Parses XML simulation documents, compiles them into a compute plan and a
UI-form model, runs the numerics, renders SVG plots, and publishes the
results via CLI, static HTML, or a live HTTP session service.
"""

__version__ = "0.1.0"
