"""Fast learned stand-in for the energy oracle.

Closed-form ridge regression on a polynomial feature expansion: continuous
dials are min-max normalized, enums one-hot encoded, and the expansion takes
all monomials up to degree three over the combined vector, so per-location
and per-orientation response surfaces are representable (the heating load is
essentially H x degree-hours, a product of dials with location one-hots).
Two output heads (heating, cooling) share the feature matrix; the cooling
head is fit on cooling-enabled rows because predictions pin a disabled
system to exactly zero. Fitting solves the regularized least squares
problem in one shot; no iterative training, fully deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from .climate import PARAM_RANGES, DatasetRow, EnergyResult, SimulationParams
from .errors import IncompatibleModel, InvalidInput, TrainingFailed
from .physics import DEFAULT_RATING_BANDS

ARTIFACT_SCHEMA = "enerscape-surrogate/1"
EXPANSION = "cubic_full"

CONTINUOUS_DIMS = ["setpoint_heating", "setpoint_cooling", "window_u", "shgc", "wall_u"]
CATEGORICAL_DIMS = ["location", "orientation", "cooling_enabled", "shades_on"]


@dataclass(frozen=True)
class FeatureSpec:
    """Ordered description of the encoding; predictions must use the same one."""

    continuous: tuple[tuple[str, float, float], ...]  # (name, min, max)
    categorical: tuple[tuple[str, tuple, ...], ...]  # (name, values)
    expansion: str = EXPANSION

    @property
    def encoded_width(self) -> int:
        return len(self.continuous) + sum(len(values) for _, values in self.categorical)

    @property
    def feature_count(self) -> int:
        w = self.encoded_width
        return w + w * (w + 1) // 2 + w * (w + 1) * (w + 2) // 6

    def to_dict(self) -> dict:
        return {
            "continuous": [
                {"name": n, "min": lo, "max": hi} for n, lo, hi in self.continuous
            ],
            "categorical": [
                {"name": n, "values": list(values)} for n, values in self.categorical
            ],
            "expansion": self.expansion,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FeatureSpec":
        return cls(
            continuous=tuple(
                (d["name"], float(d["min"]), float(d["max"])) for d in data["continuous"]
            ),
            categorical=tuple(
                (d["name"], tuple(d["values"])) for d in data["categorical"]
            ),
            expansion=data["expansion"],
        )


def build_feature_spec(rows: Sequence[DatasetRow]) -> FeatureSpec:
    """Spec from the fixed dial ranges plus the enum values seen in the data."""
    continuous = tuple((name, *PARAM_RANGES[name]) for name in CONTINUOUS_DIMS)
    locations = tuple(sorted({r.params.location for r in rows}))
    orientations = tuple(sorted({r.params.orientation for r in rows}))
    categorical = (
        ("location", locations),
        ("orientation", orientations),
        ("cooling_enabled", (False, True)),
        ("shades_on", (False, True)),
    )
    return FeatureSpec(continuous=continuous, categorical=categorical)


def encode_params(
    spec: FeatureSpec, params: SimulationParams
) -> tuple[np.ndarray, list[str]]:
    """Normalized/one-hot vector plus the names of any clamped dials."""
    clamped = []
    values = []
    for name, lo, hi in spec.continuous:
        raw = float(getattr(params, name))
        if raw < lo or raw > hi:
            clamped.append(name)
            raw = min(max(raw, lo), hi)
        values.append((raw - lo) / (hi - lo))
    for name, allowed in spec.categorical:
        value = getattr(params, name)
        if value not in allowed:
            raise IncompatibleModel(
                f"{name}={value!r} not covered by the model's feature spec"
            )
        one_hot = [1.0 if value == v else 0.0 for v in allowed]
        values.extend(one_hot)
    return np.asarray(values, dtype=np.float64), clamped


@lru_cache(maxsize=8)
def _cubic_indices(width: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    triples = [
        (i, j, k)
        for i in range(width)
        for j in range(i, width)
        for k in range(j, width)
    ]
    arr = np.array(triples, dtype=np.intp)
    return arr[:, 0], arr[:, 1], arr[:, 2]


def expand_features(z: np.ndarray) -> np.ndarray:
    """All monomials of degree 1..3 over the encoded vector (no bias)."""
    z = np.atleast_2d(z)
    width = z.shape[1]
    iu, ju = np.triu_indices(width)
    quad = z[:, iu] * z[:, ju]
    i3, j3, k3 = _cubic_indices(width)
    cubic = z[:, i3] * z[:, j3] * z[:, k3]
    return np.concatenate([z, quad, cubic], axis=1)


def _design_matrix(
    spec: FeatureSpec, params_list: Sequence[SimulationParams]
) -> np.ndarray:
    encoded = np.stack([encode_params(spec, p)[0] for p in params_list])
    expanded = expand_features(encoded)
    bias = np.ones((expanded.shape[0], 1))
    return np.concatenate([bias, expanded], axis=1)


@dataclass
class SurrogateModel:
    feature_spec: FeatureSpec
    weights: np.ndarray  # (feature_count + 1, 2), bias row first; heads (heating, cooling)
    ridge_lambda: float
    train_metrics: dict
    rating_bands: list
    content_pack_hash: str = ""
    seed: int = 0
    version: str = "1"

    def predict_raw(self, params: SimulationParams) -> tuple[float, float, list[str]]:
        z, clamped = encode_params(self.feature_spec, params)
        x = np.concatenate([[1.0], expand_features(z)[0]])
        if x.shape[0] != self.weights.shape[0]:
            raise IncompatibleModel(
                f"feature width {x.shape[0]} does not match weights {self.weights.shape[0]}"
            )
        heating, cooling = (x @ self.weights).tolist()
        return heating, cooling, clamped


@dataclass(frozen=True)
class Prediction:
    energy: EnergyResult
    clamped: tuple[str, ...] = ()  # dial names that were outside training ranges


def _normal_equation_residual(x, y, ridge_lambda, weights) -> float:
    rhs = x.T @ y
    lhs = x.T @ (x @ weights) + ridge_lambda * weights
    return float(np.linalg.norm(lhs - rhs) / max(np.linalg.norm(rhs), 1e-12))


def _solve_ridge(x: np.ndarray, y: np.ndarray, ridge_lambda: float) -> np.ndarray:
    """Minimize ‖Xw − y‖² + λ‖w‖², verified against the normal equations.

    Uses the dual form when rows < features and the primal normal equations
    otherwise; falls back to the (slower, SVD-based) augmented least-squares
    system if the direct solve loses too much precision.
    """
    n_rows, n_features = x.shape
    weights = None
    try:
        if n_rows < n_features:
            gram = x @ x.T + ridge_lambda * np.eye(n_rows)
            weights = x.T @ np.linalg.solve(gram, y)
        else:
            gram = x.T @ x + ridge_lambda * np.eye(n_features)
            weights = np.linalg.solve(gram, x.T @ y)
    except np.linalg.LinAlgError:
        weights = None
    if weights is None or _normal_equation_residual(x, y, ridge_lambda, weights) > 1e-6:
        augmented_x = np.concatenate([x, np.sqrt(ridge_lambda) * np.eye(n_features)])
        augmented_y = np.concatenate([y, np.zeros((n_features, y.shape[1]))])
        weights, *_ = np.linalg.lstsq(augmented_x, augmented_y, rcond=None)
        if _normal_equation_residual(x, y, ridge_lambda, weights) > 1e-6:
            raise TrainingFailed("normal-equation residual check failed")
    return weights


def _targets(rows: Sequence[DatasetRow]) -> np.ndarray:
    return np.array([[r.result.heating, r.result.cooling] for r in rows])


def _deployed_predictions(
    x: np.ndarray, weights: np.ndarray, cooling_enabled: np.ndarray
) -> np.ndarray:
    """Raw head outputs mapped the way predict() serves them."""
    raw = x @ weights
    heating = np.maximum(raw[:, 0], 0.0)
    cooling = np.where(cooling_enabled, np.maximum(raw[:, 1], 0.0), 0.0)
    return np.stack([heating, cooling], axis=1)


def _head_metrics(predicted: np.ndarray, actual: np.ndarray) -> dict:
    err = predicted - actual
    rmse = np.sqrt(np.mean(err**2, axis=0))
    mae = np.mean(np.abs(err), axis=0)
    ss_res = np.sum(err**2, axis=0)
    ss_tot = np.sum((actual - actual.mean(axis=0)) ** 2, axis=0)
    r2 = 1.0 - ss_res / np.where(ss_tot > 0, ss_tot, np.inf)
    return {
        "rmse": {"heating": float(rmse[0]), "cooling": float(rmse[1]),
                 "combined": float(np.sqrt(np.mean(err**2)))},
        "mae": {"heating": float(mae[0]), "cooling": float(mae[1])},
        "r2": {"heating": float(r2[0]), "cooling": float(r2[1])},
    }


def _fit_heads(
    x: np.ndarray, y: np.ndarray, cooling_enabled: np.ndarray, ridge_lambda: float
) -> np.ndarray:
    """Heating on all rows; cooling on enabled rows only (disabled rows are
    pinned to zero downstream, so they would only drag the head toward zero)."""
    w_heating = _solve_ridge(x, y[:, 0:1], ridge_lambda)
    if cooling_enabled.any():
        w_cooling = _solve_ridge(x[cooling_enabled], y[cooling_enabled, 1:2], ridge_lambda)
    else:
        w_cooling = np.zeros_like(w_heating)
    return np.concatenate([w_heating, w_cooling], axis=1)


def fit(
    rows: Sequence[DatasetRow],
    ridge_lambda: float,
    seed: int,
    rating_bands=DEFAULT_RATING_BANDS,
    content_pack_hash: str = "",
) -> SurrogateModel:
    """Closed-form ridge fit with held-out metrics from a seeded 80/20 split.

    Metrics come from a model fit on the 80 % split and scored on the rest
    with the deployed clamping; the returned model is then refit on all rows.
    """
    if len(rows) < 50:
        raise InvalidInput(f"dataset has {len(rows)} rows; need at least 50")
    if ridge_lambda <= 0:
        raise InvalidInput("ridge_lambda must be > 0")
    spec = build_feature_spec(rows)
    x = _design_matrix(spec, [r.params for r in rows])
    y = _targets(rows)
    cooling_enabled = np.array([r.params.cooling_enabled for r in rows], dtype=bool)

    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(rows))
    n_holdout = max(1, len(rows) // 5)
    holdout, train = perm[:n_holdout], perm[n_holdout:]
    w_split = _fit_heads(x[train], y[train], cooling_enabled[train], ridge_lambda)
    predicted = _deployed_predictions(x[holdout], w_split, cooling_enabled[holdout])
    metrics = _head_metrics(predicted, y[holdout])
    metrics["n_train"] = int(len(train))
    metrics["n_holdout"] = int(n_holdout)

    weights = _fit_heads(x, y, cooling_enabled, ridge_lambda)
    return SurrogateModel(
        feature_spec=spec,
        weights=weights,
        ridge_lambda=float(ridge_lambda),
        train_metrics=metrics,
        rating_bands=[list(b) for b in rating_bands],
        content_pack_hash=content_pack_hash,
        seed=int(seed),
    )


def predict(model: SurrogateModel, params: SimulationParams) -> Prediction:
    """Clamped-input, clamped-at-zero prediction with the oracle's derived fields.

    Cooling is pinned to exactly zero when the dial is off, matching the
    oracle's branch so both modes show the same gadget for a disabled system.
    """
    heating, cooling, clamped = model.predict_raw(params)
    heating = max(0.0, heating)
    cooling = max(0.0, cooling) if params.cooling_enabled else 0.0
    bands = [(label, upper) for label, upper in model.rating_bands]
    return Prediction(
        energy=EnergyResult.from_loads(heating, cooling, bands),
        clamped=tuple(clamped),
    )


def evaluate(model: SurrogateModel, rows: Sequence[DatasetRow]) -> dict:
    """Regression metrics plus the fraction of rows landing in the oracle's band."""
    if not rows:
        raise InvalidInput("cannot evaluate on an empty dataset")
    x = _design_matrix(model.feature_spec, [r.params for r in rows])
    cooling_enabled = np.array([r.params.cooling_enabled for r in rows], dtype=bool)
    predicted = _deployed_predictions(x, model.weights, cooling_enabled)
    metrics = _head_metrics(predicted, _targets(rows))
    bands = [(label, upper) for label, upper in model.rating_bands]
    agree = 0
    for i, row in enumerate(rows):
        result = EnergyResult.from_loads(predicted[i, 0], predicted[i, 1], bands)
        if result.rating == row.result.rating:
            agree += 1
    metrics["rating_band_agreement"] = agree / len(rows)
    metrics["n_rows"] = len(rows)
    return metrics


def save_model(model: SurrogateModel, path: str | Path) -> None:
    payload = {
        "schema": ARTIFACT_SCHEMA,
        "version": model.version,
        "ridge_lambda": model.ridge_lambda,
        "seed": model.seed,
        "content_pack_hash": model.content_pack_hash,
        "feature_spec": model.feature_spec.to_dict(),
        "rating_bands": model.rating_bands,
        "train_metrics": model.train_metrics,
        "weights": {
            "heating": model.weights[:, 0].tolist(),
            "cooling": model.weights[:, 1].tolist(),
        },
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> SurrogateModel:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise IncompatibleModel(f"cannot read model artifact: {exc}") from exc
    if payload.get("schema") != ARTIFACT_SCHEMA:
        raise IncompatibleModel(f"unsupported artifact schema {payload.get('schema')!r}")
    spec = FeatureSpec.from_dict(payload["feature_spec"])
    heating = np.asarray(payload["weights"]["heating"], dtype=np.float64)
    cooling = np.asarray(payload["weights"]["cooling"], dtype=np.float64)
    weights = np.stack([heating, cooling], axis=1)
    if weights.shape[0] != spec.feature_count + 1:
        raise IncompatibleModel(
            f"weight count {weights.shape[0]} != feature count {spec.feature_count} + 1"
        )
    bands = [(b[0], float(b[1]) if b[1] is not None else None) for b in payload["rating_bands"]]
    return SurrogateModel(
        feature_spec=spec,
        weights=weights,
        ridge_lambda=float(payload["ridge_lambda"]),
        train_metrics=payload["train_metrics"],
        rating_bands=bands,
        content_pack_hash=payload.get("content_pack_hash", ""),
        seed=int(payload.get("seed", 0)),
        version=str(payload.get("version", "1")),
    )
