"""CLI integration tests for thermoforce."""
