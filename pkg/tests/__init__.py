"""Tests for the polymer endpoint library."""
