"""Shared pytest configuration: deterministic hypothesis profile."""

from hypothesis import settings

settings.register_profile("qks", deadline=None, max_examples=50, derandomize=True)
settings.load_profile("qks")
