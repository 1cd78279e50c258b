"""Pattern and formula avoidance in combinatorics on words.

Words are tuples of small non-negative integers. The package provides
morphisms and their fixed points (`words`), avoidance formulas and
occurrence search (`formulas`), repetition thresholds and free-word
enumeration (`freeness`), and mechanically checkable reports tying
those pieces together (`verify`), plus a command line in `cli`.
"""

from wordav.catalog import (
    BASIS_3,
    MORPHISMS,
    b4_factors,
    basis_formula,
    image_family,
    named_morphism,
)
from wordav.formulas import (
    EMPTY_BOUNDS,
    Assignment,
    CorpusSource,
    FamilySource,
    Formula,
    FormulaError,
    FragmentWitness,
    SearchBudgetExceeded,
    UnboundedSearchError,
    VarBounds,
    WordSource,
    as_occurrence_source,
    circular_formula,
    divides,
    find_occurrence,
    occurs_with_new_suffix,
    parse_formula,
    parse_formula_or_circular,
    reverse_formula,
    variable_name,
)
from wordav.freeness import (
    EnumerationReport,
    FreenessSpec,
    Repetition,
    count_free_words,
    enumerate_free_words,
    find_forbidden_repetition,
    last_position_check,
    lemma_length_bound,
    maximal_free_words,
    parse_freeness_spec,
)
from wordav.verify import (
    BacktrackReport,
    CheckReport,
    backtrack_avoidance,
    check_synchronization,
    combine_verdicts,
    exit_code,
    explore_conjecture,
    probe_fixed_point,
    render_json,
    render_text,
    verify_conjugacy_avoidance,
    verify_formula_exclusion,
    verify_image_freeness,
    verify_paper,
)
from wordav.words import (
    CompletenessError,
    ConjugacyClass,
    FactorFamily,
    FactorSet,
    WordFactors,
    ImageFactors,
    MorphicFactors,
    Morphism,
    StabilizationError,
    Word,
    apply_morphism,
    conjugates,
    contained_conjugacy_classes,
    factor_set,
    fixed_point_prefix,
    load_morphism,
    load_words,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "BASIS_3",
    "BacktrackReport",
    "CheckReport",
    "CompletenessError",
    "ConjugacyClass",
    "CorpusSource",
    "EMPTY_BOUNDS",
    "EnumerationReport",
    "FactorFamily",
    "FactorSet",
    "FamilySource",
    "Formula",
    "FormulaError",
    "FragmentWitness",
    "FreenessSpec",
    "ImageFactors",
    "MORPHISMS",
    "MorphicFactors",
    "Morphism",
    "Repetition",
    "SearchBudgetExceeded",
    "StabilizationError",
    "UnboundedSearchError",
    "VarBounds",
    "Word",
    "WordFactors",
    "WordSource",
    "apply_morphism",
    "as_occurrence_source",
    "b4_factors",
    "backtrack_avoidance",
    "basis_formula",
    "check_synchronization",
    "circular_formula",
    "combine_verdicts",
    "conjugates",
    "contained_conjugacy_classes",
    "count_free_words",
    "divides",
    "enumerate_free_words",
    "exit_code",
    "explore_conjecture",
    "factor_set",
    "find_forbidden_repetition",
    "find_occurrence",
    "fixed_point_prefix",
    "image_family",
    "last_position_check",
    "lemma_length_bound",
    "load_morphism",
    "load_words",
    "maximal_free_words",
    "named_morphism",
    "occurs_with_new_suffix",
    "parse_formula",
    "parse_formula_or_circular",
    "parse_freeness_spec",
    "probe_fixed_point",
    "render_json",
    "render_text",
    "reverse_formula",
    "variable_name",
    "verify_conjugacy_avoidance",
    "verify_formula_exclusion",
    "verify_image_freeness",
    "verify_paper",
]
