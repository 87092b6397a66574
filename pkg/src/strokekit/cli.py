"""Command line front end: data generation, extraction, training,
evaluation, prediction, invariance checks, and the HTTP service.

Exit codes: 0 success, 1 usage problems, 2 bad data or files, 3 internal
failures.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import dataset, pipeline
from .errors import (DataFormatError, DimensionError, DomainError, IntegrityError,
                     ModelIntegrityError, StructureError, TrainingError,
                     UsageError, VersionError)
from .features.base import SPATIAL_KINDS, TEMPORAL_KINDS, FeatureKind
from .svm import KernelConfig, default_kernel, evaluate_accuracy, train_multiclass, vote_ranking

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3

INVARIANT_TOL = 1e-9
CHANGE_MIN = 1e-6

_DATA_ERRORS = (DataFormatError, VersionError, IntegrityError, StructureError,
                DomainError, DimensionError, TrainingError, ModelIntegrityError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _feature_kind(value: str) -> FeatureKind:
    try:
        return FeatureKind(value)
    except ValueError:
        raise UsageError(f"unknown feature kind {value!r}; expected one of "
                         f"{', '.join(k.value for k in FeatureKind)}") from None


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read config {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise DataFormatError(f"{path}: not valid JSON (line {e.lineno}: {e.msg})") from None
    if not isinstance(cfg, dict):
        raise DataFormatError(f"{path}: config must be a JSON object")
    return cfg


def _setting(flag_value, config: dict, key: str, default):
    if flag_value is not None:
        return flag_value
    return config.get(key, default)


def _cmd_generate(args) -> int:
    cfg = _load_config(args.config)
    chars = dataset.generate_synthetic(
        args.classes, args.per_class, args.seed,
        warp_sigma=float(_setting(None, cfg, "warp_sigma", 0.06)),
        jitter_sigma=float(_setting(None, cfg, "jitter_sigma", 0.004)))
    dataset.save_ink(chars, args.output, metadata={
        "source": "synthetic", "classes": str(args.classes),
        "per_class": str(args.per_class), "seed": str(args.seed)})
    print(f"wrote {len(chars)} characters ({args.classes} classes) to {args.output}")
    return EXIT_OK


def _cmd_extract(args) -> int:
    cfg = _load_config(args.config)
    chars = dataset.load_ink(args.input)
    passes = int(_setting(None, cfg, "smoothing_passes", 1))
    labels, matrix = pipeline.extract_matrix(chars, args.feature, passes)
    dataset.save_features(args.output, args.feature, labels, matrix)
    print(f"wrote {matrix.shape[0]}x{matrix.shape[1]} {args.feature.value} "
          f"features to {args.output}")
    return EXIT_OK


def _kernel_from(args, cfg: dict, kind: FeatureKind) -> KernelConfig:
    base = default_kernel(kind)
    kcfg = cfg.get("kernel", {})
    scale = _setting(args.scale, kcfg, "scale", base.scale)
    box = _setting(args.box, kcfg, "box", base.box)
    return KernelConfig(scale=float(scale), box=float(box))


def _cmd_train(args) -> int:
    cfg = _load_config(args.config)
    kind, labels, matrix = dataset.load_features(args.features)
    if (labels < 1).any():
        raise DataFormatError(f"{args.features}: contains unlabeled rows; "
                              "training needs class labels >= 1")
    kernel = _kernel_from(args, cfg, kind)
    model = train_multiclass(
        matrix, labels, kernel, kind,
        tol=float(_setting(None, cfg, "tol", 1e-3)),
        max_sweeps=int(_setting(None, cfg, "max_sweeps", 200)),
        seed=args.seed)
    dataset.save_model(model, args.output)
    n_bin = len(model.binaries)
    n_conv = sum(b.converged for b in model.binaries.values())
    print(f"trained {n_bin} pairwise classifiers over {model.n_classes} classes "
          f"({n_conv} converged) -> {args.output}")
    return EXIT_OK


def _cmd_eval(args) -> int:
    model = dataset.load_model(args.model)
    kind, labels, matrix = dataset.load_features(args.features)
    if kind != model.feature_kind:
        raise UsageError(f"model expects {model.feature_kind.value} features, "
                         f"file holds {kind.value}")
    if (labels < 1).any():
        raise DataFormatError(f"{args.features}: contains unlabeled rows")
    accuracy, confusion = evaluate_accuracy(model, matrix, labels)
    print(f"accuracy: {100.0 * accuracy:.1f}")
    if args.confusion:
        np.savetxt(args.confusion, confusion, fmt="%d", delimiter=",")
        print(f"confusion matrix -> {args.confusion}")
    else:
        for row in confusion:
            print(",".join(str(int(v)) for v in row))
    return EXIT_OK


def _cmd_predict(args) -> int:
    model = dataset.load_model(args.model)
    chars = dataset.load_ink(args.input)
    for idx, c in enumerate(chars):
        fv = pipeline.extract(c, model.feature_kind)
        ranked = vote_ranking(model, fv.values)[:max(args.top_k, 1)]
        names = [model.class_labels.get(cls, str(cls)) for cls, _ in ranked]
        print(f"{idx}\t{' '.join(names)}")
    return EXIT_OK


def _cmd_invariance(args) -> int:
    chars = dataset.load_ink(args.input)
    if args.trials:
        chars = chars[:args.trials]
    if not chars:
        raise DataFormatError(f"{args.input}: no characters")
    kinds = list(FeatureKind) if args.feature is None else [args.feature]
    all_ok = True
    for kind in kinds:
        worst_dev = 0.0
        weakest_change = None
        checked = skipped = 0
        for c in chars:
            results = pipeline.variation_results(c, kind)
            if not results:
                skipped += 1
                continue
            checked += 1
            if kind in SPATIAL_KINDS:
                worst_dev = max(worst_dev, max(r.linf for r in results))
            else:
                changes = [r.l2 for r in results if r.reorders_matrix]
                if not changes:
                    skipped += 1
                    continue
                smallest = min(changes)
                if weakest_change is None or smallest < weakest_change:
                    weakest_change = smallest
        if kind in SPATIAL_KINDS:
            ok = worst_dev < INVARIANT_TOL
            print(f"{kind.value}: max deviation {worst_dev:.3e} over {checked} "
                  f"characters ({'invariant' if ok else 'NOT invariant'})")
        else:
            ok = weakest_change is not None and weakest_change > CHANGE_MIN
            shown = f"{weakest_change:.3e}" if weakest_change is not None else "n/a"
            print(f"{kind.value}: min change {shown} over {checked} characters "
                  f"({'order-sensitive' if ok else 'NOT order-sensitive'})")
        if skipped:
            print(f"{kind.value}: skipped {skipped} characters without usable "
                  "stroke variations")
        drift = pipeline.reresampled_deviation(chars[0], kind, seed=args.seed)
        print(f"{kind.value}: drift with independent re-resampling "
              f"(informational): {drift:.3e}")
        all_ok = all_ok and ok
    return EXIT_OK if all_ok else EXIT_DATA


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app
    host, _, port = args.bind.rpartition(":")
    if not host or not port.isdigit():
        raise UsageError(f"--bind must look like host:port, got {args.bind!r}")
    model = dataset.load_model(args.model)
    app = create_app(model)
    uvicorn.run(app, host=host, port=int(port), log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="strokekit",
                     description="Handwritten character features and classification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic labeled ink file")
    p.add_argument("--classes", type=int, default=96)
    p.add_argument("--per-class", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config")
    p.add_argument("--output", required=True)
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("extract", help="extract features from an ink file")
    p.add_argument("--input", required=True)
    p.add_argument("--feature", type=_feature_kind, required=True)
    p.add_argument("--config")
    p.add_argument("--output", required=True)
    p.set_defaults(fn=_cmd_extract)

    p = sub.add_parser("train", help="train a multiclass model on features")
    p.add_argument("--features", required=True)
    p.add_argument("--scale", type=float, help="kernel width override")
    p.add_argument("--box", type=float, help="regularization bound override")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config")
    p.add_argument("--output", required=True)
    p.set_defaults(fn=_cmd_train)

    p = sub.add_parser("eval", help="report model accuracy on labeled features")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--confusion", help="optional CSV path for the confusion matrix")
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("predict", help="classify characters from an ink file")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--top-k", type=int, default=1)
    p.set_defaults(fn=_cmd_predict)

    p = sub.add_parser("invariance", help="check stroke order/direction behavior")
    p.add_argument("--input", required=True)
    p.add_argument("--feature", type=_feature_kind,
                   help="restrict to one kind (default: all)")
    p.add_argument("--trials", type=int, help="cap the number of characters")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_invariance)

    p = sub.add_parser("serve", help="run the HTTP prediction service")
    p.add_argument("--model", required=True)
    p.add_argument("--bind", default="127.0.0.1:8077")
    p.set_defaults(fn=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except _DATA_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except Exception as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
