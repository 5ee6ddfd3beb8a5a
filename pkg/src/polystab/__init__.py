"""Exact reduction gadgets from maximum clique to matrix-polytope stability.

Submodules
----------
rational   exact scalars (Fractions, quadratic surds) and their text form
matrix     exact rational matrices, determinants, characteristic polynomials, Hurwitz test
graph      graphs, DIMACS I/O, maximum cliques
gadgets    quadratic-threshold instances, nonsingularity and stability gadgets, clique recovery
oracles    simplex quadratic extrema, threshold decisions, singularity certificates
switched   switched-system simulation of stability gadgets
formats    JSON / CSV formats
cli        the ``polystab`` command
"""
from .errors import *  # noqa: F401,F403
from .gadgets import (
    PolytopeInstance,
    QtInstance,
    build_nonsingularity_gadget,
    build_qt_instance,
    build_stability_gadget,
    caratheodory_reduce,
    check_determinantal_identity,
    recover_clique_number,
    select_perturbation,
    threshold_ladder,
)
from .graph import Graph, adjacency_matrix, max_clique_exact, motzkin_straus_value, parse_dimacs, write_dimacs
from .matrix import (
    CharPoly,
    RatMatrix,
    SimplexPoint,
    char_poly,
    eigs_numeric,
    is_hurwitz,
    mat_determinant,
    mat_inverse,
    solve_linear,
    svals_numeric,
)
from .oracles import (
    SingularityCertificate,
    StabilityVerdict,
    find_singular_combination,
    polytope_hurwitz_check,
    qt_decide,
    simplex_quadratic_extrema_exact,
    simplex_quadratic_max_exact,
    verify_singularity_certificate,
)
from .rational import Surd

__version__ = "0.1.0"
