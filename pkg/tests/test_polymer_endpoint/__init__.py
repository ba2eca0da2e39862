"""Tests for the polymer_endpoint package."""
