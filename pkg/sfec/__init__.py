"""sfec: Reed-Solomon, convolutional and concatenated channel coding with a BER simulator."""

__version__ = "0.1.0"
