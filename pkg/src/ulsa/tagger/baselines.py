"""Lookup-table baseline taggers.

Baseline 1 matches every token against a term → action table; baseline 2
additionally requires the token to look like a verb, which trades recall for
precision (nominal uses such as "heating rate" stop matching).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from ..actions import ActionTerm, parse_tag
from ..corpus import TokenizedSentence, normalize_token
from ..errors import ParseError

_VOWELS = frozenset("aeiou")

#: Auxiliary forms that license an out-of-lexicon -ed/-ing token as a verb.
AUXILIARIES = frozenset(
    {"was", "were", "is", "are", "been", "be", "being", "has", "have", "had"}
)


def _resource_text(name: str) -> str:
    return resources.files("ulsa.resources").joinpath(name).read_text(encoding="utf-8")


@dataclass(frozen=True)
class LookupTable:
    """Lowercased term → ActionTerm map; NotAction never appears as a value."""

    mapping: dict[str, ActionTerm]

    def __post_init__(self):
        for term, tag in self.mapping.items():
            if term != term.lower():
                raise ParseError(f"lookup term not lowercased: {term!r}")
            if tag is ActionTerm.NOT_ACTION:
                raise ParseError(f"lookup term {term!r} maps to NotAction")

    def __len__(self) -> int:
        return len(self.mapping)

    def get(self, term: str) -> ActionTerm | None:
        return self.mapping.get(term)

    @classmethod
    def from_text(cls, text: str) -> "LookupTable":
        mapping: dict[str, ActionTerm] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError(f"lookup table line {lineno}: expected term<TAB>action")
            term, tag_name = parts[0].strip().lower(), parts[1].strip()
            tag = parse_tag(tag_name)
            if tag is ActionTerm.NOT_ACTION:
                raise ParseError(f"lookup table line {lineno}: NotAction is not allowed")
            mapping[term] = tag
        return cls(mapping)

    @classmethod
    def load(cls, path=None) -> "LookupTable":
        if path is None:
            return cls.from_text(_resource_text("lookup_table.tsv"))
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())


def _inflections(base: str) -> set[str]:
    """Naive -s/-ed inflections of a base verb (the -ing form is handled by
    context rules instead, so bare gerunds/nominals don't count as verbs)."""
    forms = {base}
    if base.endswith(("s", "x", "z", "ch", "sh", "o")):
        forms.add(base + "es")
    elif base.endswith("y") and len(base) > 1 and base[-2] not in _VOWELS:
        forms.add(base[:-1] + "ies")
    else:
        forms.add(base + "s")
    if base.endswith("e"):
        forms.add(base + "d")
    elif base.endswith("y") and len(base) > 1 and base[-2] not in _VOWELS:
        forms.add(base[:-1] + "ied")
    elif _doubles_final(base):
        forms.add(base + base[-1] + "ed")
    else:
        forms.add(base + "ed")
    return forms


def _doubles_final(base: str) -> bool:
    return (
        3 <= len(base) <= 4
        and base[-1] not in _VOWELS
        and base[-1] not in "wxy"
        and base[-2] in _VOWELS
        and base[-3] not in _VOWELS
        and base[-3].isalpha()
    )


_ING_RE = re.compile(r"[a-z-]+ing$")
_ED_RE = re.compile(r"[a-z-]+ed$")


@dataclass(frozen=True)
class PosLexicon:
    """Verb/Other classifier: a form lexicon plus two context rules.

    A token is a verb when its lowercased surface is in the lexicon, or when
    it ends in -ed/-ing and directly follows an auxiliary ("was stirred",
    "is heating").  Bare -ing tokens without an auxiliary are treated as
    nominal ("heating rate") — the known recall/precision trade of the
    verbs-only baseline.
    """

    forms: frozenset[str]

    @classmethod
    def from_text(cls, text: str) -> "PosLexicon":
        forms: set[str] = set()
        section = None
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("[") and line.endswith("]"):
                section = line[1:-1].lower()
                continue
            word = line.lower()
            if section == "base":
                forms |= _inflections(word)
            else:
                forms.add(word)
        return cls(frozenset(forms))

    @classmethod
    def load(cls, path=None) -> "PosLexicon":
        if path is None:
            return cls.from_text(_resource_text("verbs.txt"))
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def is_verb(self, token: str, prev: str | None = None) -> bool:
        t = token.lower()
        if t in self.forms:
            return True
        if prev is not None and prev.lower() in AUXILIARIES:
            if _ING_RE.match(t) or _ED_RE.match(t):
                return True
        return False


def _surfaces(sentence: TokenizedSentence | list[str]) -> list[str]:
    if isinstance(sentence, TokenizedSentence):
        return [t.surface for t in sentence.tokens]
    return list(sentence)


def baseline_all_tokens(
    sentence: TokenizedSentence | list[str], table: LookupTable
) -> list[ActionTerm]:
    """Tag = table[normalized token] when present, NotAction otherwise."""
    return [
        table.get(normalize_token(s)) or ActionTerm.NOT_ACTION
        for s in _surfaces(sentence)
    ]


def baseline_verbs_only(
    sentence: TokenizedSentence | list[str],
    table: LookupTable,
    pos: PosLexicon,
) -> list[ActionTerm]:
    """Lookup restricted to verb tokens; everything else is NotAction."""
    surfaces = _surfaces(sentence)
    tags = []
    prev = None
    for surface in surfaces:
        if pos.is_verb(surface, prev):
            tags.append(table.get(normalize_token(surface)) or ActionTerm.NOT_ACTION)
        else:
            tags.append(ActionTerm.NOT_ACTION)
        prev = surface
    return tags
