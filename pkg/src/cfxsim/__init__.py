"""TreeGraph consensus, miner economics and attack analysis."""

__version__ = "0.1.0"
