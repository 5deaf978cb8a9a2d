from ..dataset import DatasetStats, dataset_stats
from .agreement import fleiss_kappa, per_term_tables
from .pca import PcaResult, pca_fit, symmetric_eigh
from .plots import label_colors, scatter_svg, write_svg
from .projection import ProjectedToken, majority_predicted_labels, project_embeddings_2d
from .regression import LineFit, fit_line, fit_line_per_class


def dataset_histograms(ds) -> dict[str, dict[int, int]]:
    """The figure-ready histograms: sentences per paragraph (all and
    synthesis-only), tokens per sentence, and action tokens per sentence."""
    stats = dataset_stats(ds)
    return {
        "sentences_per_paragraph": stats.sentences_per_paragraph,
        "synthesis_sentences_per_paragraph": stats.synthesis_sentences_per_paragraph,
        "tokens_per_sentence": stats.tokens_per_sentence,
        "action_tokens_per_sentence": stats.action_tokens_per_sentence,
    }


__all__ = [
    "DatasetStats",
    "dataset_stats",
    "dataset_histograms",
    "fleiss_kappa",
    "per_term_tables",
    "PcaResult",
    "pca_fit",
    "symmetric_eigh",
    "label_colors",
    "scatter_svg",
    "write_svg",
    "ProjectedToken",
    "majority_predicted_labels",
    "project_embeddings_2d",
    "LineFit",
    "fit_line",
    "fit_line_per_class",
]
