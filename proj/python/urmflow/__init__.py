"""URM and BACFG workbench: machines, graphs, collecting semantics, Karr analysis."""

from ._core import (
    ContractError,
    Error,
    OverflowError,
    ParseError,
    check,
    collect,
    compile,
    decode,
    encode,
    eval_phi,
    karr,
    pair,
    run,
    smn,
    step_count,
    to_dot,
    unpair,
    verify,
)

__all__ = [
    "ContractError",
    "Error",
    "OverflowError",
    "ParseError",
    "check",
    "collect",
    "compile",
    "decode",
    "encode",
    "eval_phi",
    "karr",
    "pair",
    "run",
    "smn",
    "step_count",
    "to_dot",
    "unpair",
    "verify",
]
