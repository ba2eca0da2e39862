"""Tests for helper modules."""
