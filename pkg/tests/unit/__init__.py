"""Unit tests for thermoforce."""
