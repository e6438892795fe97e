"""Exact certificates for twisted conjugacy in permutation groups, Houghton
groups, pure symmetric automorphism groups and Thompson's group T."""

from . import char_sphere, houghton, linalg, perm_core, thompson
from ._accel import backend
from .char_sphere import MonomialMatrix, RationalCharacter, gn_witness, sigma_c_membership
from .houghton import HoughtonElement, NormalizerElement, decompose_automorphism
from .perm_core import Point, TailedPermutation, cycle_decomposition, witness_family
from .thompson import PLCircleMap, build_h_k

__version__ = "0.1.0"
