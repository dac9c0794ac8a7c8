"""Benchmark corpus loading, scoring and synthetic programs."""
