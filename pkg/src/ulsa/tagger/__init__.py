from .baselines import (
    AUXILIARIES,
    LookupTable,
    PosLexicon,
    baseline_all_tokens,
    baseline_verbs_only,
)
from .bilstm import (
    BilstmConfig,
    TaggerModel,
    gradient_check,
    predict,
    sentence_scores,
    train_bilstm,
)
from .checkpoint import load_checkpoint, save_checkpoint
from .evaluate import EvalReport, Metrics, evaluate, f1_score, token_accuracy

__all__ = [
    "AUXILIARIES",
    "LookupTable",
    "PosLexicon",
    "baseline_all_tokens",
    "baseline_verbs_only",
    "BilstmConfig",
    "TaggerModel",
    "gradient_check",
    "predict",
    "sentence_scores",
    "train_bilstm",
    "load_checkpoint",
    "save_checkpoint",
    "EvalReport",
    "Metrics",
    "evaluate",
    "f1_score",
    "token_accuracy",
]
