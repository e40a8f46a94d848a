"""
Isotropy groups of Hermitian canonical forms under complex orthogonal
*congruence ``H -> Q^* H Q``.

Typical use::

    >>> import numpy as np
    >>> from isotropy import CanonicalSpec, EigenClass, dimension, random_element
    >>> spec = CanonicalSpec(EigenClass.zero(), (1,), (2,))
    >>> dimension(spec)
    2
    >>> el = random_element(spec, np.random.default_rng(0))
    >>> bool(el.residual_orth < 1e-10)
    True
"""
from .canonical import (CanonicalSpec, EigenClass, TransformKit, canonical_form,
                        h_block, k_block, l_block, transform_kit)
from .congruence import (CongruenceProblem, CongruenceWork, FreeParameters,
                         Unsolvable, parameter_counts, solve_congruence,
                         solve_congruence_alternating, solve_congruence_vw)
from .consim import (BlockDesc, SolutionSpace, brute_force_consim_nullity,
                     consim_pair_solution)
from .generators import (GeneratorSet, corner_coefficient, gen_asZ, gen_asZ2,
                         gen_corner, gen_corner_alt, generator_set)
from .isotropy import (IsotropyElement, assemble_Q, coordinate_weights, derive_problem,
                       dimension, parameters_from_vector, random_element,
                       random_parameters, solve)
from .toeplitz import ToeplitzFamily, identity_family
from .verify import (NotUnipotent, VerificationReport, nilpotency_order,
                     splitting_check, tangent_dimension, verify_element,
                     verify_family)

__version__ = "0.1.0"

__all__ = [
    "CanonicalSpec", "EigenClass", "TransformKit", "canonical_form", "h_block",
    "k_block", "l_block", "transform_kit", "CongruenceProblem", "CongruenceWork",
    "FreeParameters", "Unsolvable", "parameter_counts", "solve_congruence",
    "solve_congruence_alternating", "solve_congruence_vw", "BlockDesc",
    "SolutionSpace", "brute_force_consim_nullity", "consim_pair_solution",
    "GeneratorSet", "corner_coefficient", "gen_asZ", "gen_asZ2", "gen_corner",
    "gen_corner_alt", "generator_set", "IsotropyElement", "assemble_Q", "coordinate_weights",
    "derive_problem", "dimension", "parameters_from_vector", "random_element",
    "random_parameters", "solve", "ToeplitzFamily", "identity_family",
    "NotUnipotent", "VerificationReport", "nilpotency_order", "splitting_check",
    "tangent_dimension", "verify_element", "verify_family",
]
