"""Representability of integers by sums of triangular numbers.

Sieves for fixed coefficient forms, exact solution counts for positive
definite quadratic forms, escalation trees computing minimal witness sets,
and a catalog of sieve-verified exclusion rules.
"""

from .errors import (
    CacheFormatError,
    SetSpecError,
    SieveMemoryError,
    TrirepError,
    TruantBoundError,
)
from .escalation import (
    EscalationNode,
    EscalationTree,
    KnownLeaf,
    ProvisionalLeaf,
    TreeConfig,
    Truant,
    build_tree,
    child_forms,
    smallest_missing,
    stuck_report,
    witness_form,
)
from .forms import (
    RepTable,
    TriangularForm,
    count_reps,
    count_reps_table,
    find_representation,
    is_triangular,
    represented_up_to,
    represents,
    triangular,
    triangular_index,
)
from .quadratic import (
    TABLE1_ROWS,
    DiagonalForm,
    EquivalenceRow,
    TernaryQuadraticForm,
    count_odd_solutions,
    count_solutions,
    density_check_125,
    inclusion_exclusion_odd,
    shift_identity_check,
    table1_check,
)
from .rules import (
    ExclusionRule,
    KnownLeafRule,
    LIOUVILLE_TRIPLES,
    OddPowerClass,
    ResidueClassSet,
    Shift,
    SquareRequirement,
    Table3Report,
    builtin_catalog,
    known_leaf,
    rule_excluded,
    rules_for_form,
    table3_scan,
    verify_rule,
)
from .targets import (
    ExplicitList,
    FormImage,
    ResidueUnion,
    TargetSet,
    all_positive_integers,
    odd_integers,
)

__version__ = "0.1.0"
