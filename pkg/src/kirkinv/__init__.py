"""Higher-order Kirk invariants of link maps in the 4-sphere."""

__version__ = "0.1.0"

from .ring import Poly, Residue, indeterminacy, residue, sequences  # noqa: E402
from .words import Word, magnus_expand, normal_form, parse_word, positive_normalize, rf_equal  # noqa: E402
from .invariants import (  # noqa: E402
    LinkMapPresentation,
    Singularity,
    basing_change,
    e_invariant,
    k_multiset,
    k_sequence,
    kappa_tilde,
    kirk_classical,
    rebase_component,
    s_invariant,
    sigma_covering,
)
from .wirtinger import (  # noqa: E402
    CrossSection,
    DiagramSpec,
    check_wirtinger_consistency,
    conjugator_words,
    presentation_from_cross_section,
)

__all__ = [
    "__version__",
    "Poly",
    "Residue",
    "indeterminacy",
    "residue",
    "sequences",
    "Word",
    "magnus_expand",
    "normal_form",
    "parse_word",
    "positive_normalize",
    "rf_equal",
    "LinkMapPresentation",
    "Singularity",
    "basing_change",
    "e_invariant",
    "k_multiset",
    "k_sequence",
    "kappa_tilde",
    "kirk_classical",
    "rebase_component",
    "s_invariant",
    "sigma_covering",
    "CrossSection",
    "DiagramSpec",
    "check_wirtinger_consistency",
    "conjugator_words",
    "presentation_from_cross_section",
]
