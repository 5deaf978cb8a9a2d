"""Synthesis-action tagging, agreement, and flowchart analysis toolkit."""

from .actions import (ACTION_TERMS, CLASS_ORDER, REFINED_ORDER, ActionTerm,
                      RefinedActionTerm, SynthesisType, parse_synthesis_type,
                      parse_tag)
from .dataset import (AnnotatedSentence, AnnotatedToken, dataset_stats,
                      load_dataset, save_dataset, split_dataset)

__version__ = "0.1.0"

__all__ = [
    "ACTION_TERMS",
    "CLASS_ORDER",
    "REFINED_ORDER",
    "ActionTerm",
    "AnnotatedSentence",
    "AnnotatedToken",
    "RefinedActionTerm",
    "SynthesisType",
    "__version__",
    "dataset_stats",
    "load_dataset",
    "parse_synthesis_type",
    "parse_tag",
    "save_dataset",
    "split_dataset",
]
