from .app import DEFAULT_PORT, create_app

__all__ = ["create_app", "DEFAULT_PORT"]
