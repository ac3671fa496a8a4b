"""Fixture and data generation scripts."""
