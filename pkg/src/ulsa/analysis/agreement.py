"""Fleiss' kappa for fixed-size annotator panels.

kappa = (P_bar - Pe_bar) / (1 - Pe_bar), where P_bar is the mean
pairwise item agreement and Pe_bar the chance agreement from squared
category marginals.  Perfect agreement returns exactly 1.0 without touching
the denominator.
"""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateChance


def fleiss_kappa(table) -> float:
    """Agreement over an items x categories count table.

    Every row must sum to the same number of annotators n >= 2 and there
    must be >= 2 category columns.
    """
    counts = np.asarray(table, dtype=np.float64)
    if counts.ndim != 2:
        raise ValueError(f"expected items x categories table, got shape {counts.shape}")
    items, categories = counts.shape
    if items < 1:
        raise ValueError("agreement table has no items")
    if categories < 2:
        raise ValueError("agreement table needs >= 2 categories")
    if np.any(counts < 0) or np.any(counts != np.round(counts)):
        raise ValueError("agreement table entries must be nonnegative integers")
    row_sums = counts.sum(axis=1)
    n = row_sums[0]
    if n < 2:
        raise ValueError("need >= 2 annotators per item")
    if np.any(row_sums != n):
        raise ValueError("every item must be rated by the same number of annotators")

    item_agreement = (np.sum(counts**2, axis=1) - n) / (n * (n - 1.0))
    p_bar = float(item_agreement.mean())
    if p_bar == 1.0:
        return 1.0
    marginals = counts.sum(axis=0) / (items * n)
    pe_bar = float(np.sum(marginals**2))
    if pe_bar == 1.0:
        raise DegenerateChance(
            "chance agreement is 1 with imperfect agreement; kappa undefined"
        )
    return (p_bar - pe_bar) / (1.0 - pe_bar)


def per_term_tables(tag_rows: list[list[str]], terms: list[str]) -> dict[str, np.ndarray]:
    """Binary-agreement tables (term vs. not-term), one per action term.

    ``tag_rows[i]`` holds the tags all annotators gave token i.  This is the
    layout behind the per-term agreement report: each term is scored as its
    own two-category kappa.
    """
    tables: dict[str, np.ndarray] = {}
    n_items = len(tag_rows)
    for term in terms:
        table = np.zeros((n_items, 2), dtype=np.int64)
        for i, row in enumerate(tag_rows):
            hits = sum(1 for tag in row if tag == term)
            table[i, 0] = hits
            table[i, 1] = len(row) - hits
        tables[term] = table
    return tables
