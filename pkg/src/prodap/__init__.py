"""Exact-arithmetic toolkit for arithmetic progressions inside product sets.

Given a finite set B, the product set B.B = {b*b' : b, b' in B} can carry an
arithmetic progression; this package builds such instances, reduces the
progression to a canonical coprime form, ties progression terms to a bipartite
representation graph, and runs exact audits of the cycle, irregularity,
coverage, and rationalization mechanics that govern how long the progression
can be.
"""

from .apcore import APDescriptor, ReductionStep, ReductionTrace, ap_terms, gcd_bound_audit, reduce_ap
from .construct import ConstructionResult, cover_set, coverage_check, floor_n_log_n, split_factor
from .cyclelab import (
    CyclePoly,
    EvenCycle,
    bondy_simonovits_bound,
    cycle_bound_audit,
    cycle_identity_check,
    cycle_poly,
    divisibility_audit,
    enumerate_even_cycles,
    find_even_cycle,
    symmetric_coefficients,
)
from .errors import (
    CapacityError,
    DomainError,
    FalsificationError,
    FieldMismatchError,
    InputError,
    ProdapError,
    RepresentationError,
    ShapeError,
    UnsupportedExtensionError,
)
from .exactnum import PrimeTable, QuadElem, factorize, is_prime, ord_p, primes_in
from .harness import (
    InstanceFile,
    absolutize,
    concavity_demo,
    integerize,
    pipeline,
    scaling_study,
    study_csv,
)
from .irregular import (
    IrregularityReport,
    PrimeWindow,
    classify_edges,
    forest_check,
    hit_count,
    irregularity_report,
    prime_window,
    select_independent_irregulars,
)
from .prodset import (
    APSearchResult,
    ProductSet,
    RepGraph,
    build_rep_graph,
    contains_ap,
    longest_ap,
    product_set,
)
from .rationalize import (
    QuadInstance,
    four_cycle_exists_audit,
    four_cycle_r,
    make_quad_instance,
    path_parity_value,
    rationalize_components,
    scale_by_sqrt_d,
)

__version__ = "0.1.0"
