"""Unit tests for fermamp."""
