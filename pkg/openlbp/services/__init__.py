"""Descriptor, learning and evaluation algorithms."""
