"""Action-term vocabulary for synthesis procedures.

Eight action terms describe the steps of a ceramics synthesis; ``NOT_ACTION``
is the tag carried by every unannotated token.  For flowchart analysis the
``MIXING`` term is refined into dispersion and solution variants, giving the
ten-term vocabulary used for adjacency matrices.
"""

from enum import Enum


class ActionTerm(str, Enum):
    STARTING = "Starting"
    MIXING = "Mixing"
    PURIFICATION = "Purification"
    HEATING = "Heating"
    COOLING = "Cooling"
    SHAPING = "Shaping"
    REACTION = "Reaction"
    MISCELLANEOUS = "Miscellaneous"
    NOT_ACTION = "NotAction"


class RefinedActionTerm(str, Enum):
    STARTING = "Starting"
    MIXING = "Mixing"
    DISPERSION_MIXING = "DispersionMixing"
    SOLUTION_MIXING = "SolutionMixing"
    PURIFICATION = "Purification"
    HEATING = "Heating"
    COOLING = "Cooling"
    SHAPING = "Shaping"
    REACTION = "Reaction"
    MISCELLANEOUS = "Miscellaneous"
    # Kept so refined tag lists stay aligned with tokens; never a flowchart axis.
    NOT_ACTION = "NotAction"


class SynthesisType(str, Enum):
    SOLID_STATE = "SolidState"
    SOL_GEL = "SolGel"
    HYDROTHERMAL = "Hydrothermal"
    PRECIPITATION = "Precipitation"
    UNKNOWN = "Unknown"


# The eight annotatable terms, in the order used for keyboard shortcuts,
# report rows, and the softmax head (NOT_ACTION appended last as class 8).
ACTION_TERMS: tuple[ActionTerm, ...] = (
    ActionTerm.STARTING,
    ActionTerm.MIXING,
    ActionTerm.PURIFICATION,
    ActionTerm.HEATING,
    ActionTerm.COOLING,
    ActionTerm.SHAPING,
    ActionTerm.REACTION,
    ActionTerm.MISCELLANEOUS,
)

# Class order of the tagger's softmax head.
CLASS_ORDER: tuple[ActionTerm, ...] = ACTION_TERMS + (ActionTerm.NOT_ACTION,)

CLASS_INDEX: dict[ActionTerm, int] = {t: i for i, t in enumerate(CLASS_ORDER)}

# Frozen axis order of flowchart adjacency matrices.  This order is part of
# the flowchart CSV file format and must never change.
REFINED_ORDER: tuple[RefinedActionTerm, ...] = (
    RefinedActionTerm.STARTING,
    RefinedActionTerm.MIXING,
    RefinedActionTerm.DISPERSION_MIXING,
    RefinedActionTerm.SOLUTION_MIXING,
    RefinedActionTerm.PURIFICATION,
    RefinedActionTerm.HEATING,
    RefinedActionTerm.COOLING,
    RefinedActionTerm.SHAPING,
    RefinedActionTerm.REACTION,
    RefinedActionTerm.MISCELLANEOUS,
)

REFINED_INDEX: dict[RefinedActionTerm, int] = {t: i for i, t in enumerate(REFINED_ORDER)}

TAG_NAMES: frozenset[str] = frozenset(t.value for t in ActionTerm)


def parse_tag(name: str) -> ActionTerm:
    """Resolve a tag string from a dataset record; raises ValueError if unknown."""
    try:
        return ActionTerm(name)
    except ValueError:
        raise ValueError(f"unknown action term {name!r}") from None


def parse_synthesis_type(name: str) -> SynthesisType:
    """Resolve a synthesis-type string, tolerating common lowercase aliases."""
    aliases = {
        "solid-state": SynthesisType.SOLID_STATE,
        "solid_state": SynthesisType.SOLID_STATE,
        "solidstate": SynthesisType.SOLID_STATE,
        "sol-gel": SynthesisType.SOL_GEL,
        "sol_gel": SynthesisType.SOL_GEL,
        "solgel": SynthesisType.SOL_GEL,
        "hydrothermal": SynthesisType.HYDROTHERMAL,
        "solvothermal": SynthesisType.HYDROTHERMAL,
        "precipitation": SynthesisType.PRECIPITATION,
        "unknown": SynthesisType.UNKNOWN,
    }
    try:
        return SynthesisType(name)
    except ValueError:
        key = name.strip().lower()
        if key in aliases:
            return aliases[key]
        raise ValueError(f"unknown synthesis type {name!r}") from None


# Short functional definitions of each term, served to the annotation UI as
# help text and shipped in the docs.  Keyboard keys 1-8 follow ACTION_TERMS.
TERM_DEFINITIONS: dict[ActionTerm, str] = {
    ActionTerm.STARTING: (
        "Marks the beginning of a synthesis route, usually by naming the "
        "material being prepared, synthesized, or obtained."
    ),
    ActionTerm.MIXING: (
        "Combines two or more materials, in solid or liquid form, into one "
        "substance: mixing, milling, adding, dissolving, neutralizing."
    ),
    ActionTerm.PURIFICATION: (
        "Separates phases of a sample or removes unwanted components, "
        "including washing, filtering, collecting, and drying."
    ),
    ActionTerm.HEATING: (
        "Raises or holds a high temperature to form a phase or drive a "
        "reaction (annealing, calcining, sintering), as opposed to drying."
    ),
    ActionTerm.COOLING: (
        "Lowers the temperature of a sample at any rate, from slow furnace "
        "cooling to quenching."
    ),
    ActionTerm.SHAPING: (
        "Compresses or forms the sample into a specific shape, such as "
        "pressing into pellets."
    ),
    ActionTerm.REACTION: (
        "Lets a transformation proceed without external intervention, e.g. "
        "keeping or maintaining conditions, or leaving a sample to react."
    ),
    ActionTerm.MISCELLANEOUS: (
        "An action performed on the sample that carries procedural "
        "information but fits no other category (placing, sealing, "
        "transferring, wrapping)."
    ),
}
