"""Tests for activebn."""
