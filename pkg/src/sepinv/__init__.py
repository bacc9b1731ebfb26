"""Safety proofs for linear integer transition systems via ICE learning with
separator-generated attributes."""

from .driver import RunConfig, RunResult, run_verification
from .frontend import ParseError, parse_system, print_smt2
from .model import Sample, TranSys

__all__ = ["ParseError", "RunConfig", "RunResult", "Sample", "TranSys",
           "parse_system", "print_smt2", "run_verification"]
__version__ = "0.1.0"
