"""Max-min k-partition: exact attacker and defender solvers, hardness
gadget compilers and brute-force oracles for their source problems."""

from .attacker import AttackResult, Verdict, best_attack_bnb, best_attack_exhaustive, verify
from .core import (
    NEG_INF,
    InputError,
    Instance,
    Partition,
    apply_attack,
    canonicalize,
    deficit,
    partition_value,
    subset_weight,
)
from .defender import DefenderVerdict, SearchConfig, enumerate_partitions, solve_ccg, solve_exhaustive

__all__ = [
    "NEG_INF", "InputError", "Instance", "Partition", "apply_attack", "canonicalize", "deficit",
    "partition_value", "subset_weight", "AttackResult", "Verdict", "best_attack_bnb",
    "best_attack_exhaustive", "verify", "DefenderVerdict", "SearchConfig", "enumerate_partitions",
    "solve_ccg", "solve_exhaustive",
]
