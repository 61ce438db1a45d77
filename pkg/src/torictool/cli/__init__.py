"""Command line interface and file formats."""
from .main import main
from .parsing import (
    GermFile,
    format_germ_file,
    format_phase_file,
    parse_germ_file,
    parse_phase_file,
)
