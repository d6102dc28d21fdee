"""Tests for qtransverse."""
