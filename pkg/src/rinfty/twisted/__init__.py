"""Twisted conjugacy classes of finite groups given by Cayley tables."""

from .groups import FiniteGroupTable, GroupMap, catalog, enumerate_automorphisms, normal_subgroups
from .oracle import (exact_sequence_check, power_trick_check, reidemeister_number,
                     torsionfix_check, twisted_classes, verify_addition_formula)
from .sweep import run_sweep
