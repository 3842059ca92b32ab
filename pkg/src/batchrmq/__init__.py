"""Batched range minimum queries."""
