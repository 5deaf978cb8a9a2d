"""HTTP API for browsing, annotating, and exporting the dataset.

Thin layer over AnnotationStore; all validation and statistics live in the
core package so the browser UI never recomputes them.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..actions import ACTION_TERMS, REFINED_ORDER, SynthesisType, TERM_DEFINITIONS, ActionTerm
from ..errors import SchemaError
from .schemas import (
    AgreementReport,
    AnnotationSubmission,
    SchemaInfo,
    SentenceDetail,
    SentenceSummary,
    SubmissionResult,
    TermInfo,
)
from .store import AnnotationStore


def create_app(store: AnnotationStore, static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="ULSA annotation API")

    @app.get("/api/sentences", response_model=list[SentenceSummary])
    def list_sentences():
        return store.summaries()

    @app.get("/api/sentences/{sentence_id}", response_model=SentenceDetail)
    def get_sentence(sentence_id: int):
        try:
            return store.detail(sentence_id)
        except KeyError:
            raise HTTPException(404, f"no sentence with id {sentence_id}") from None

    @app.post("/api/annotations", response_model=SubmissionResult)
    def post_annotation(submission: AnnotationSubmission):
        try:
            store.submit(submission.id, submission.annotator_id, submission.record())
        except KeyError:
            raise HTTPException(404, f"no sentence with id {submission.id}") from None
        except SchemaError as exc:
            raise HTTPException(422, str(exc)) from None
        return SubmissionResult(
            status="ok", id=submission.id, annotator_id=submission.annotator_id
        )

    @app.get("/api/agreement", response_model=AgreementReport)
    def get_agreement(annotators: str = Query(...)):
        ids = [a.strip() for a in annotators.split(",") if a.strip()]
        try:
            return store.agreement(ids)
        except ValueError as exc:
            raise HTTPException(422, str(exc)) from None

    @app.get("/api/schema", response_model=SchemaInfo)
    def get_schema():
        return SchemaInfo(
            terms=[
                TermInfo(name=t.value, key=i + 1, definition=TERM_DEFINITIONS[t])
                for i, t in enumerate(ACTION_TERMS)
            ],
            not_action=ActionTerm.NOT_ACTION.value,
            refined_terms=[t.value for t in REFINED_ORDER],
            synthesis_types=[t.value for t in SynthesisType],
        )

    @app.get("/api/export")
    def get_export(annotator: str | None = None):
        return JSONResponse(store.export(annotator))

    if static_dir and os.path.isdir(static_dir):
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
