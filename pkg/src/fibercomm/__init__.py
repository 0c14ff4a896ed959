"""Train tracks, finite covers, and covering/commensurability certificates
for outer automorphisms of free groups."""

__version__ = "0.1.0"
