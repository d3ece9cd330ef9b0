"""remap: method-level code mappings between original and redesigned codebases."""

__version__ = "0.1.0"
