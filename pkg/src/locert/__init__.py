"""Local certification of forbidden-subgraph properties: schemes, verifiers and exact oracles."""

__version__ = "0.1.0"
