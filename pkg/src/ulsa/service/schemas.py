"""Request/response models for the annotation HTTP API."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..actions import TAG_NAMES


class AnnotationPair(BaseModel):
    model_config = ConfigDict(extra="forbid")

    tag: str
    token: str = Field(min_length=1)

    @field_validator("tag")
    @classmethod
    def _known_tag(cls, v: str) -> str:
        if v not in TAG_NAMES:
            raise ValueError(f"unknown action term {v!r}")
        return v


class SentenceSummary(BaseModel):
    id: int
    sentence: str
    annotations: list[AnnotationPair]
    is_synthesis: bool
    paragraph_id: str = ""
    synthesis_type: str | None = None
    annotators: list[str] = Field(default_factory=list)


class SentenceDetail(SentenceSummary):
    annotator_tags: dict[str, list[str]] = Field(default_factory=dict)
    annotator_is_synthesis: dict[str, bool] = Field(default_factory=dict)


class AnnotationSubmission(BaseModel):
    """One dataset record plus the submitting annotator and sentence id."""

    model_config = ConfigDict(extra="forbid")

    id: int
    annotator_id: str = Field(min_length=1)
    annotations: list[AnnotationPair]
    sentence: str = Field(min_length=1)
    is_synthesis: bool = True

    def record(self) -> dict:
        return {
            "annotations": [{"tag": a.tag, "token": a.token} for a in self.annotations],
            "sentence": self.sentence,
            "is_synthesis": self.is_synthesis,
        }


class SubmissionResult(BaseModel):
    status: str
    id: int
    annotator_id: str


class AgreementReport(BaseModel):
    annotators: list[str]
    n_sentences: int
    n_tokens: int
    sentence_classification: float | None
    action_terms: float | None
    per_term: dict[str, float | None]
    note: str | None = None


class TermInfo(BaseModel):
    name: str
    key: int
    definition: str


class SchemaInfo(BaseModel):
    terms: list[TermInfo]
    not_action: str
    refined_terms: list[str]
    synthesis_types: list[str]
