from .app import create_app
from .redaction import RedactionPolicy

__all__ = ["create_app", "RedactionPolicy"]
