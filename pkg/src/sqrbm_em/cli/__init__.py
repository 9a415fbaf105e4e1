"""Command-line interface (``sqrbm-em``)."""
