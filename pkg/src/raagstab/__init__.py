"""Right-angled Artin groups: normal forms, element classes, square complexes,
coset enumeration and a certified stability / Morse decision procedure."""
from .errors import BudgetExceeded, HypothesisError, InputError
from .graph import (
    DefiningGraph, JoinCover, ValidationReport, complete_graph, cycle_graph, is_join_cover,
    join_cover, link, parse_graph, path_graph, star, validate_graph,
)
from .words import (
    are_equal, canonical_form, cyclic_reduce, format_word, inverse, is_cyclically_reduced,
    is_normal_form, multiply, normalize, parse_word, shuffle_class, support,
)
from .elements import ElementClass, StarFactorization, classify, growth_probe, star_distance, star_length
from .complexes import (
    IsometryReport, LabeledComplex, check_local_isometry, complete_squares_step, fold,
    loop_trace, parse_complex, purely_loxodromic_scan, rose, saturate, to_text, trace_word,
)
from .cosets import CosetResult, CosetTable, compact, enumerate_cosets, table_csv, validate_table
from .deciders import (
    BudgetExhausted, EllipticWitness, MorseCertificate, PureComplex, StabilityCertificate,
    TrivialSubgroup, certificate_from_json, certificate_to_json, decide_stability,
    semidecide_morse, verify_certificate,
)
from .geometry import L2GConstants, is_quasigeodesic_star, l2g_constants, stability_probe

__version__ = "0.1.0"
