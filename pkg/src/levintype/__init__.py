"""Levin-type sequence transformations."""
