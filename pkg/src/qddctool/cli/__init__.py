"""Specification files and the command-line interface."""
from .qsf import QsfSpec, SoftEntry, parse_qsf, parse_qsf_text
from .main import main
