"""Class-diagram restructuring by graph rewriting.

Three rules move duplicated attributes up an inheritance forest: pull-up into
a common superclass, extraction of an intermediate subclass, and extraction
of a new root class.  :func:`normalize` runs them to a fixed point,
:func:`explore` enumerates every rewriting order up to isomorphism, and
:func:`check_confluence` decides whether all orders agree.
"""

from .canonical import canonical_key, isomorphic
from .diagram import (
    ClassDiagram,
    DiagramError,
    Entity,
    Generalization,
    Property,
    TypeRef,
    UnknownEntityError,
    ValidationError,
    ValidationReport,
    Violation,
    build,
    direct_subclasses,
    flattened_attributes,
    fresh_entity_name,
    root_entities,
    semantic_signature,
    validate,
)
from .engine import (
    ConfluenceReport,
    IncompleteExplorationError,
    Limits,
    StateSpace,
    Trace,
    check_confluence,
    explore,
    normalize,
)
from .rules import (
    CandidateKind,
    ExtractCandidate,
    Mode,
    Policy,
    PullUpMatch,
    Rule,
    StaleMatchError,
    Step,
    TieHandling,
    applicable_steps,
    apply_extract,
    apply_pullup,
    apply_step,
    find_extract_candidates,
    find_pullup_matches,
    maximal_candidates,
)

__version__ = "0.1.0"
