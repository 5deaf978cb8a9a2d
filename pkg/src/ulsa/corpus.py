"""Normalization and segmentation of raw synthesis text.

Turns paragraph text into sentences and normalized tokens: quantities become
``<NUM>``, chemical formulas become ``<CHEM>``, everything else is lowercased.
All functions here are pure and deterministic, so paragraphs can be processed
in parallel without shared state.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .actions import SynthesisType

NUM_KEYWORD = "<NUM>"
CHEM_KEYWORD = "<CHEM>"
UNK_KEYWORD = "<UNK>"
KEYWORDS = (NUM_KEYWORD, CHEM_KEYWORD, UNK_KEYWORD)


@dataclass(frozen=True)
class RawParagraph:
    id: str
    text: str
    synthesis_type: SynthesisType = SynthesisType.UNKNOWN

    def __post_init__(self):
        if not self.text:
            raise ValueError("paragraph text must be non-empty")


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    sentence_index: int
    token_index: int


@dataclass(frozen=True)
class TokenizedSentence:
    text: str
    tokens: tuple[Token, ...]


def _read_terms(name: str) -> frozenset[str]:
    text = (resources.files("ulsa.resources") / name).read_text(encoding="utf-8")
    return _parse_terms(text)


def _parse_terms(text: str) -> frozenset[str]:
    terms = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            terms.add(line.lower())
    return frozenset(terms)


def load_term_file(path) -> frozenset[str]:
    """Load a one-term-per-line UTF-8 list (``#`` comments allowed)."""
    with open(path, encoding="utf-8") as fh:
        return _parse_terms(fh.read())


DEFAULT_CONNECTIVES = _read_terms("connectives.txt")
DEFAULT_ABBREVIATIONS = _read_terms("abbreviations.txt")
_ENGLISH_WORDS = _read_terms("english_words.txt")

# All 118 element symbols, two-letter symbols first so the regex prefers the
# longest match ("Na" before "N").
ELEMENT_SYMBOLS = (
    "H He Li Be B C N O F Ne Na Mg Al Si P S Cl Ar K Ca Sc Ti V Cr Mn Fe Co "
    "Ni Cu Zn Ga Ge As Se Br Kr Rb Sr Y Zr Nb Mo Tc Ru Rh Pd Ag Cd In Sn Sb "
    "Te I Xe Cs Ba La Ce Pr Nd Pm Sm Eu Gd Tb Dy Ho Er Tm Yb Lu Hf Ta W Re "
    "Os Ir Pt Au Hg Tl Pb Bi Po At Rn Fr Ra Ac Th Pa U Np Pu Am Cm Bk Cf Es "
    "Fm Md No Lr Rf Db Sg Bh Hs Mt Ds Rg Cn Nh Fl Mc Lv Ts Og"
).split()

_ELEMENT_ALT = "|".join(sorted(ELEMENT_SYMBOLS, key=len, reverse=True))
_FORMULA_RE = re.compile(
    rf"^(?:(?:{_ELEMENT_ALT})\d*(?:\.\d+)?|[()\[\]]\d*|·)+$"
)

# Quantities: a number, optionally a range or fraction, optionally a short
# fused unit ("900K", "2h", "10-12", "5mol%").
_NUM_RE = re.compile(
    r"^[+-]?\d+(?:[.,]\d+)*"
    r"(?:[-–—/]\d+(?:[.,]\d+)*)?"
    r"(?:[a-zA-Zμ°%Å]{1,6})?$"
)

_SENT_BOUNDARY_RE = re.compile(r"[.!?]+(?=\s)")
_LEADING_PUNCT = "([{\"'“‘«"
_TRAILING_PUNCT = ")]}\"'”’»,;:!?"


def split_sentences(
    paragraph: RawParagraph,
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS,
) -> list[str]:
    """Split paragraph text into sentences.

    A boundary is sentence-final punctuation followed by whitespace and an
    uppercase or digit start; candidates right after a guarded abbreviation
    ("e.g.", "Fig.", "wt.") do not split.  The stripped sentences cover the
    paragraph: every character lands in exactly one sentence or in
    inter-sentence whitespace.
    """
    text = paragraph.text
    starts = [0]
    for match in _SENT_BOUNDARY_RE.finditer(text):
        end = match.end()
        rest = text[end:].lstrip()
        if not rest or not (rest[0].isupper() or rest[0].isdigit()):
            continue
        if "." in match.group():
            word = text[:end].rsplit(None, 1)[-1]
            word = word.lstrip(_LEADING_PUNCT)
            if word.lower() in abbreviations:
                continue
        starts.append(end)
    sentences = []
    for i, start in enumerate(starts):
        end = starts[i + 1] if i + 1 < len(starts) else len(text)
        chunk = text[start:end].strip()
        if chunk:
            sentences.append(chunk)
    return sentences


def tokenize(
    sentence: str,
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS,
    sentence_index: int = 0,
) -> TokenizedSentence:
    """Whitespace- and punctuation-aware split into normalized tokens.

    Surrounding punctuation becomes its own token; hyphenated phrases
    ("ball-milled"), decimals, slashes, and guarded abbreviations stay
    intact.
    """
    if not sentence.strip():
        raise ValueError("cannot tokenize an empty sentence")
    surfaces: list[str] = []
    for chunk in sentence.split():
        surfaces.extend(_split_chunk(chunk, abbreviations))
    tokens = tuple(
        Token(
            surface=s,
            normalized=normalize_token(s),
            sentence_index=sentence_index,
            token_index=i,
        )
        for i, s in enumerate(surfaces)
    )
    return TokenizedSentence(text=" ".join(surfaces), tokens=tokens)


def _split_chunk(chunk: str, abbreviations: frozenset[str]) -> list[str]:
    lead: list[str] = []
    trail: list[str] = []
    while chunk and chunk[0] in _LEADING_PUNCT:
        lead.append(chunk[0])
        chunk = chunk[1:]
    while chunk:
        if chunk[-1] in _TRAILING_PUNCT:
            trail.append(chunk[-1])
            chunk = chunk[:-1]
        elif chunk.endswith(".") and chunk.lower() not in abbreviations and not _NUM_RE.match(chunk):
            trail.append(".")
            chunk = chunk[:-1]
        else:
            break
    middle = [chunk] if chunk else []
    return lead + middle + list(reversed(trail))


def normalize_token(surface: str) -> str:
    """Map a token surface to its normalized form.

    Quantities (pure numbers, ranges, numbers with fused units) become
    ``<NUM>``; chemical formulas become ``<CHEM>``; anything else is
    lowercased.  Idempotent: keywords pass through unchanged.
    """
    if not surface:
        raise ValueError("cannot normalize an empty token")
    if surface in KEYWORDS:
        return surface
    if _NUM_RE.match(surface):
        return NUM_KEYWORD
    if is_chemical_formula(surface):
        return CHEM_KEYWORD
    return surface.lower()


def is_chemical_formula(surface: str) -> bool:
    """True when the token reads as element symbols with optional
    stoichiometry and is not an ordinary English word.

    A bare single-letter symbol ("B", "C") without digits never counts; a
    bare two-letter symbol ("Fe") does.
    """
    if not _FORMULA_RE.match(surface):
        return False
    if surface.lower() in _ENGLISH_WORDS:
        return False
    if any(ch.isdigit() or ch in "()[]" for ch in surface):
        return True
    return len(surface) >= 2


def strip_connectives(
    tokens: list[Token] | tuple[Token, ...],
    connectives: frozenset[str] = DEFAULT_CONNECTIVES,
) -> list[Token]:
    """Drop consequence adverbs ("therefore", "next", ...) before embedding
    training, preserving the order of the survivors."""
    return [t for t in tokens if t.normalized not in connectives]


def apply_vocab(tokens: list[Token] | tuple[Token, ...], vocab) -> list[Token]:
    """Replace the normalized form of out-of-vocabulary tokens with ``<UNK>``.

    ``vocab`` only needs to support ``in``; the ``<NUM>``/``<CHEM>`` keywords
    always survive.
    """
    out = []
    for t in tokens:
        if t.normalized in KEYWORDS or t.normalized in vocab:
            out.append(t)
        else:
            out.append(
                Token(
                    surface=t.surface,
                    normalized=UNK_KEYWORD,
                    sentence_index=t.sentence_index,
                    token_index=t.token_index,
                )
            )
    return out


def paragraph_to_sentences(
    paragraph: RawParagraph,
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS,
) -> list[TokenizedSentence]:
    """Segment and tokenize a paragraph in one pass."""
    return [
        tokenize(s, abbreviations, sentence_index=i)
        for i, s in enumerate(split_sentences(paragraph, abbreviations))
    ]
