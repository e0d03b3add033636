# Utility functions and helpers
from .helpers import atomic_write_bytes, atomic_write_text, describe_path
