"""Version and PRNG identifiers stamped into every artifact."""

__version__ = "0.1.0"
PRNG_ALGORITHM = "PCG64"
