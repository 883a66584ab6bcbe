"""Interval-logic requirements to automata, and controller synthesis."""
__version__ = "0.1.0"
