"""scenariodoc: crowd-sourced API usage documentation from Q&A thread dumps.

The pipeline mines usage scenarios (code example + task description +
reviews) from forum threads, links each code example to one API, and
generates three documentation views per API: statistical summaries,
concept clusters and Javadoc-style type buckets. Bundles are persisted
as JSON and served read-only over HTTP.
"""

__version__ = "0.1.0"
