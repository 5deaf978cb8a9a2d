from .app import create_app
from .store import AnnotationStore

__all__ = ["create_app", "AnnotationStore"]
