"""In-NAND self-encryption simulator and functional crypto datapath."""

__version__ = "0.1.0"
