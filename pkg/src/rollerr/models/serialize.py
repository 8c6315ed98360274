"""Model save/load: a self-describing JSON container.

Floats serialize through Python's shortest round-trip repr, so a loaded
model predicts bit-identically to the one saved.
"""

from __future__ import annotations

import json

import numpy as np

from .mlp import MlpParams
from .normalizer import Normalizer
from .zoo import DynamicsModel, EnsembleModel, LinearModel, MlpModel, ZeroModel

FORMAT = "rollerr-model"
VERSION = 1


def _norm_to_dict(n: Normalizer):
    return {
        "state_mean": n.state_mean.tolist(),
        "state_std": n.state_std.tolist(),
        "target_mean": n.target_mean.tolist(),
        "target_std": n.target_std.tolist(),
        "action_lo": n.action_lo.tolist(),
        "action_hi": n.action_hi.tolist(),
    }


def _norm_from_dict(d):
    return Normalizer(**{k: np.asarray(v, dtype=np.float64) for k, v in d.items()})


def _model_to_dict(model: DynamicsModel):
    if isinstance(model, ZeroModel):
        return {"kind": "zero", "dim": model.state_dim,
                "persistence": model.persistence}
    if isinstance(model, LinearModel):
        return {"kind": "linear", "a_hat": model.a_hat.tolist(),
                "b_hat": model.b_hat.tolist()}
    if isinstance(model, MlpModel):
        return {
            "kind": "mlp",
            "formulation": model.formulation,
            "probabilistic": model.probabilistic,
            "normalizer": _norm_to_dict(model.normalizer),
            "layer_sizes": model.params.layer_sizes,
            "weights": [w.tolist() for w in model.params.weights],
            "biases": [b.tolist() for b in model.params.biases],
        }
    if isinstance(model, EnsembleModel):
        return {"kind": "ensemble",
                "members": [_model_to_dict(m) for m in model.members]}
    raise TypeError(f"cannot serialize {type(model).__name__}")


def _model_from_dict(d):
    kind = d["kind"]
    if kind == "zero":
        return ZeroModel(d["dim"], persistence=d["persistence"])
    if kind == "linear":
        return LinearModel(np.asarray(d["a_hat"]), np.asarray(d["b_hat"]))
    if kind == "mlp":
        params = MlpParams(
            [np.ascontiguousarray(w, dtype=np.float64) for w in d["weights"]],
            [np.ascontiguousarray(b, dtype=np.float64) for b in d["biases"]])
        return MlpModel(params, _norm_from_dict(d["normalizer"]),
                        formulation=d["formulation"],
                        probabilistic=d["probabilistic"])
    if kind == "ensemble":
        return EnsembleModel([_model_from_dict(m) for m in d["members"]])
    raise ValueError(f"unknown model kind: {kind!r}")


def save_model(model: DynamicsModel, path):
    doc = {"format": FORMAT, "version": VERSION, "model": _model_to_dict(model)}
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_model(path) -> DynamicsModel:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != FORMAT:
        raise ValueError(f"{path} is not a {FORMAT} file")
    return _model_from_dict(doc["model"])
