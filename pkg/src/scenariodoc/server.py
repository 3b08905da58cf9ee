"""Read-only HTTP API over a bundle directory.

Routes: GET /api/manifest, GET /api/search?q=&limit=, and
GET /api/doc/{api}/{view}. Responses are JSON with CORS enabled so the
browser UI can live anywhere. No endpoint mutates bundles.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .bundle import VIEWS, BundleStore, NotFoundError


def create_app(bundle_dir: str | Path,
               frontend_dir: str | Path | None = None) -> FastAPI:
    store = BundleStore(bundle_dir)
    app = FastAPI(title="scenariodoc", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    @app.get("/api/manifest")
    def manifest() -> dict:
        return store.manifest

    @app.get("/api/search")
    def search(q: str = "", limit: int = 10) -> dict:
        return {"query": q, "results": store.search_apis(q, limit)}

    @app.get("/api/doc/{api}/{view}")
    def documentation(api: str, view: str):
        if view not in VIEWS:
            return JSONResponse(
                status_code=404,
                content={
                    "error": "not_found",
                    "api": api,
                    "message": f"unknown view '{view}', expected one of {list(VIEWS)}",
                },
            )
        try:
            return store.get_documentation(api, view)
        except NotFoundError as exc:
            return JSONResponse(status_code=404, content=exc.payload)

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True),
                  name="frontend")
    return app


def serve(bundle_dir: str | Path, host: str = "127.0.0.1", port: int = 8080,
          frontend_dir: str | Path | None = None) -> None:
    import uvicorn

    uvicorn.run(create_app(bundle_dir, frontend_dir), host=host, port=port)
