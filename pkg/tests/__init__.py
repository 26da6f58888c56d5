"""Test suite for thermoforce."""
