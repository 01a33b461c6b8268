"""Exact wall-and-chamber computations for moduli of sheaves on surfaces."""

from .chern import (ChernData, HilbertPoly, bogomolov_holds, cover_twist_integrality,
                    integral_twist_transform, reduced_hilbert, tau)
from .errors import SheafWallsError
from .lattice import (MajorantForm, NumClass, SurfaceLattice, enumerate_ellipsoid, majorant,
                      pair, validate_lattice)
from .numex import approximate_surd, pell_solutions, remark17_family
from .stability import (Order, Verdict, VerdictKind, classify_at_wall, compare_reduced,
                        compare_slope, evaluation_threshold, parabolic_difference_check,
                        split_bundle_verdict, twisted_verdict)
from .strata import chamber_path, flip_sequence, lemma36_threshold, twist_strata
from .walls import (AmpleCone, WallSet, case_a_bound, enumerate_orthogonal_classes,
                    enumerate_walls, enumerate_walls_nef_heuristic, sign_spans_cone,
                    subdivide_cone)

__version__ = "0.1.0"
