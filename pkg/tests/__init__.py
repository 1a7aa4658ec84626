"""Tests for jadm-bcd."""
