"""File format helpers."""
