"""HTTP prediction service.

Small JSON API over a trained model: health and class listing plus a
predict endpoint that accepts raw strokes in any coordinate range and
returns ranked labels.  The request body is parsed by hand so malformed
input maps to 400, geometry the pipeline rejects maps to 422, and
anything unexpected maps to 500; every response carries the payload
schema version.
"""

from __future__ import annotations

import json
import math

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .dataset import SCHEMA_VERSION
from .errors import DimensionError, DomainError, StructureError
from .ink import InkCharacter
from .pipeline import extract
from .svm import SvmModel, vote_ranking


class _BadRequest(Exception):
    pass


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse({"schema_version": SCHEMA_VERSION, "error": message},
                        status_code=status)


def _parse_strokes(body: object) -> InkCharacter:
    if not isinstance(body, dict):
        raise _BadRequest("body must be a JSON object")
    strokes = body.get("strokes")
    if not isinstance(strokes, list) or not strokes:
        raise _BadRequest("'strokes' must be a non-empty array of stroke arrays")
    parsed = []
    for si, stroke in enumerate(strokes):
        if not isinstance(stroke, list) or not stroke:
            raise _BadRequest(f"stroke {si} must be a non-empty array of points")
        points = []
        for pi, point in enumerate(stroke):
            if (not isinstance(point, list) or len(point) != 2
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                               for v in point)):
                raise _BadRequest(f"stroke {si} point {pi} must be [x, y] numbers")
            x, y = float(point[0]), float(point[1])
            if not (math.isfinite(x) and math.isfinite(y)):
                raise _BadRequest(f"stroke {si} point {pi} is not finite")
            points.append((x, y))
        parsed.append(points)
    return InkCharacter.from_point_lists(parsed)


def _parse_top_k(body: dict, n_classes: int) -> int:
    top_k = body.get("top_k", 1)
    if isinstance(top_k, bool) or not isinstance(top_k, int) or top_k < 1:
        raise _BadRequest("'top_k' must be a positive integer")
    return min(top_k, n_classes)


def create_app(model: SvmModel) -> FastAPI:
    app = FastAPI(title="strokekit", docs_url=None, redoc_url=None)
    # the browser demo is served from a different origin; the API carries
    # no credentials and mutates nothing, so any origin may call it
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(Exception)
    async def _internal(request: Request, exc: Exception):
        return _error(500, f"internal error: {exc}")

    @app.get("/health")
    async def health():
        return {"schema_version": SCHEMA_VERSION, "status": "ok",
                "model_kind": model.feature_kind.value,
                "n_classes": model.n_classes}

    @app.get("/classes")
    async def classes():
        table = [{"class_id": cid, "label": model.class_labels.get(cid, str(cid))}
                 for cid in range(1, model.n_classes + 1)]
        return {"schema_version": SCHEMA_VERSION, "classes": table}

    @app.post("/predict")
    async def predict(request: Request):
        raw = await request.body()
        try:
            body = json.loads(raw)
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            return _error(400, f"malformed JSON: {e}")
        try:
            character = _parse_strokes(body)
            top_k = _parse_top_k(body, model.n_classes)
        except _BadRequest as e:
            return _error(400, str(e))
        try:
            fv = extract(character, model.feature_kind)
        except (DomainError, DimensionError, StructureError) as e:
            return _error(422, f"cannot featurize ink: {e}")
        ranked = vote_ranking(model, fv.values)[:top_k]
        predictions = [{"class_id": cid,
                        "label": model.class_labels.get(cid, str(cid)),
                        "votes": int(votes)}
                       for cid, votes in ranked]
        return {"schema_version": SCHEMA_VERSION, "predictions": predictions,
                "feature_dim": fv.dim}

    return app
