"""Numerical Lagrangian and Hamiltonian mechanics on Lie algebroid charts."""

from .algebroid import (AlgebroidChart, StructureReport, bracket_sections,
                        chart_from_dict, chart_to_dict, dE_function,
                        dE_oneform, load_chart, sample_box, save_chart,
                        validate_structure)
from .atiyah import (PrincipalData, WongData, atiyah_chart, bi_invariance_defect,
                     curvature, hp_field, hp_rhs, locked_velocity,
                     lp_field_explicit, lp_rhs, wong_rhs_explicit, wong_system)
from .models import (BuiltinModel, builtin_names, get_builtin,
                     model_from_principal, principal_from_dict)
from .errors import (AmechError, InvalidMetric, NoConvergence, NonFiniteField,
                     PreconditionFailed, ShapeError, SingularHessian,
                     UnknownChannel)
from .fields import (DiffConfig, ScalarField, TensorField, VectorField,
                     constant_field, fd_gradient, fd_hessian, fd_jacobian,
                     fd_mixed_block)
from .hamiltonian import (SymplecticMatrix, action_rate_defect,
                          canonical_symplectic, conserved_momentum, dE_section,
                          hamilton_field, hamilton_frame_coefficients,
                          hamilton_vector_field, hj_residual, pullback_section,
                          symmetry_defect)
from .integrate import IntegratorConfig, Trajectory, drift, rk4_integrate
from .lagrangian import (CartanData, cartan_data, el_field, el_residual,
                         el_vector_field, is_regular)
from .legendre import (LegendreConfig, induced_hamiltonian, legendre_inverse,
                       legendre_map, lleg_map, relatedness_defect)
from .poisson import PoissonBivector, jacobi_defect, poisson_bivector, poisson_bracket
from .systems import DualPoint, HamiltonianSystem, LagrangianSystem, PrimalPoint
from .tulczyjew import (ProlPointE, ProlPointEstar, a_map, flat_inverse,
                        flat_map, sH_point, sH_residual, sL_point, sL_residual,
                        sigma)

__version__ = "0.1.0"
