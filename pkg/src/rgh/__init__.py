"""Cell complexes of two-coloured ribbon graphs and the homology of moduli of bordered surfaces."""

__version__ = "0.1.0"
