"""Characteristic-2 structure of the pseudo-generic pair: trace ring, ideal J, filtrations."""
