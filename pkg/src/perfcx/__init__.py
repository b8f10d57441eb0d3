"""Exact perfect complexes over PIDs and Artin rings: homology, Euler
characteristics, K0 classes, cofiber-generation decisions and certificates."""

from .complexes import (ChainMap, HomologyProfile, ModuleClass, PerfectComplex, cone, homology,
                        moore, shift, tensor, unit_complex)
from .errors import DomainError
from .generation import Certificate, kill_bottom_class, plan, plan_from, verify
from .invariants import ThickSupport, chi_F, k0_class, lambda_artin, lambda_p, supp
from .ktheory import SubgroupSpec, can_generate, classify_subgroup, image_subgroup, is_member, k0_group
from .rings import ZZ, LocalQuotient, PolysOverPrimeField, Product

__version__ = "0.1.0"
