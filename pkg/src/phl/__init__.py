"""Exact projective invariants, cone connections and holonomy algebras."""
from .fields import GAUSSIAN, RATIONAL, GaussianRational, format_scalar
from .jets import DEFAULT_ORDER, Jet, jet_from_polynomial, jet_inverse, jet_mul, jet_partial
from .tensors import (ConnectionChart, TensorJet, covariant_derivative, curvature, is_einstein,
                      ricci, torsion)
from .projective import (ProjectiveData, change_preferred, cotton_york, one_form,
                         projective_data, projective_weyl, rho, rho_from_ricci_flat_change,
                         tractor_curvature)
from .cone import (ConeChart, SymplecticConeData, complex_cone, product_connection,
                   projective_cone, ricci_flat_data, symplectic_cone)
from .holonomy import EndoSet, curvature_endos, infinitesimal_holonomy, lie_closure
from .classify import ClassificationReport, classify, commutant, invariant_bilinear_forms, signature
from . import catalog

__version__ = "0.1.0"
