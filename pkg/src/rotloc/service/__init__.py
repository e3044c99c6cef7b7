"""FastAPI service wrapping the core library.

``handlers`` holds the request -> report functions; ``app`` binds them to
HTTP routes.  The CLI calls the handlers in-process by default and speaks
HTTP only when pointed at a remote server, so both surfaces share one code
path.
"""

from .app import app, create_app

__all__ = ["app", "create_app"]
