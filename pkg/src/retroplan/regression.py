"""Bare-home baseline model.

Ordinary least squares of monthly consumption on dwelling volume with
categorical controls for property type, built form, and age band; k-fold
cross validation; and the rescale that removes the stock-average presence
of upgrades so the prediction refers to the bare state.

The fit works in kWh/month; records carry kWh/year. The single conversion
site is :func:`monthly_consumption`.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from scipy import stats
from scipy.linalg import solve_triangular

from . import formulas as fml
from .errors import ClampWarning, ConfigError, DataError, ModelFormatError, RankDeficientError
from .params import DEFAULT_PARAMS, GroupPresence, HOUSE_PRESENCE, OTHER_PRESENCE, ParamSet
from .records import AgeBand, BuiltForm, DwellingRecord, PropertyType

MODEL_VERSION = "1"
MONTHS_PER_YEAR = 12.0

# Reference levels dropped from the dummy encoding to avoid collinearity
# with the intercept.
REFERENCE_LEVELS = (PropertyType.HOUSE, BuiltForm.DETACHED, AgeBand.PRE_1900)


class Basis(Enum):
    IDEAL_GAS = "ideal_gas"  # demand linear in volume
    VAN_DER_WAALS = "van_der_waals"  # adds 1/V and 1/V^2 terms


def monthly_consumption(annual_kwh: float) -> float:
    """kWh/year -> kWh/month; the only unit conversion in the model."""
    return annual_kwh / MONTHS_PER_YEAR


@dataclass(frozen=True)
class DesignSpec:
    """Deterministic feature layout: basis terms of volume, then one dummy
    column per non-reference category level, family by family."""

    basis: Basis = Basis.IDEAL_GAS

    @property
    def basis_columns(self) -> tuple:
        if self.basis is Basis.IDEAL_GAS:
            return ("volume",)
        return ("volume", "volume_inv", "volume_inv_sq")

    @property
    def dummy_columns(self) -> tuple:
        cols = [p.value for p in PropertyType if p is not PropertyType.HOUSE]
        cols += [b.value for b in BuiltForm if b is not BuiltForm.DETACHED]
        cols += [a.value for a in AgeBand if a is not AgeBand.PRE_1900]
        return tuple(cols)

    @property
    def columns(self) -> tuple:
        return self.basis_columns + self.dummy_columns

    @property
    def width(self) -> int:
        return len(self.columns)


def encode(record: DwellingRecord, spec: DesignSpec = DesignSpec()) -> np.ndarray:
    """Feature vector for one record: volume basis terms then dummies.
    Reference-level records encode to all-zero dummies."""
    if record.volume is None:
        raise DataError(f"record {record.id} has no volume; impute heights first")
    x = np.zeros(spec.width)
    v = float(record.volume)
    if spec.basis is Basis.IDEAL_GAS:
        x[0] = v
        offset = 1
    else:
        x[0], x[1], x[2] = v, 1.0 / v, 1.0 / (v * v)
        offset = 3
    dummies = spec.dummy_columns
    for value in (record.property_type.value, record.built_form.value, record.age_band.value):
        if value in (ref.value for ref in REFERENCE_LEVELS):
            continue
        try:
            x[offset + dummies.index(value)] = 1.0
        except ValueError:
            raise DataError(f"category {value!r} not in the design's families") from None
    return x


def design_matrix(records: Sequence[DwellingRecord], spec: DesignSpec = DesignSpec()):
    """(X, y) with X the raw feature matrix (no intercept column) and y in
    kWh/month."""
    X = np.vstack([encode(r, spec) for r in records])
    y = np.array([monthly_consumption(r.annual_consumption) for r in records])
    return X, y


@dataclass(frozen=True, eq=False)
class RegressionFit:
    """OLS result: intercept first, then one coefficient per design column."""

    columns: tuple  # without the intercept
    coef: np.ndarray  # length = len(columns) + 1, [0] is the intercept
    stderr: np.ndarray
    t_values: np.ndarray
    p_values: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    residual_variance: float  # unbiased, (kWh/month)^2
    n_obs: int
    spec: DesignSpec = field(default_factory=DesignSpec)

    @property
    def intercept(self) -> float:
        return float(self.coef[0])

    def coefficient(self, column: str) -> float:
        return float(self.coef[1 + self.columns.index(column)])


_RANK_TOL = 1e-10  # relative tolerance on R's diagonal for rank decisions


def fit_ols(X: np.ndarray, y: np.ndarray, columns: Optional[Sequence[str]] = None,
            spec: DesignSpec = DesignSpec()) -> RegressionFit:
    """Least-squares fit of y on [1, X] via QR factorisation.

    Raises RankDeficientError naming the collinear columns (for instance a
    dummy family fitted without a dropped reference level).
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, p_raw = X.shape
    names = tuple(columns) if columns is not None else tuple(f"x{i}" for i in range(p_raw))
    if len(names) != p_raw:
        raise ValueError("column names do not match the design width")
    A = np.hstack([np.ones((n, 1)), X])
    p = p_raw + 1
    if n <= p:
        raise DataError(f"need more observations ({n}) than parameters ({p})")

    Q, R = np.linalg.qr(A)
    diag = np.abs(np.diag(R))
    bad = diag < _RANK_TOL * diag.max()
    if bad.any():
        all_names = ("intercept",) + names
        raise RankDeficientError([all_names[i] for i in np.flatnonzero(bad)])

    beta = solve_triangular(R, Q.T @ y)
    residuals = y - A @ beta
    dof = n - p
    ssr = float(residuals @ residuals)
    sigma2 = ssr / dof
    r_inv = solve_triangular(R, np.eye(p))
    cov = sigma2 * (r_inv @ r_inv.T)
    stderr = np.sqrt(np.diag(cov))
    with np.errstate(divide="ignore", invalid="ignore"):
        t_values = np.where(stderr > 0, beta / stderr, np.inf)
    p_values = 2.0 * stats.t.sf(np.abs(t_values), dof)
    t_crit = stats.t.ppf(0.975, dof)
    return RegressionFit(
        columns=names,
        coef=beta,
        stderr=stderr,
        t_values=t_values,
        p_values=p_values,
        ci_low=beta - t_crit * stderr,
        ci_high=beta + t_crit * stderr,
        residual_variance=sigma2,
        n_obs=n,
        spec=spec,
    )


def fit_records(records: Sequence[DwellingRecord], spec: DesignSpec = DesignSpec()) -> RegressionFit:
    X, y = design_matrix(records, spec)
    return fit_ols(X, y, columns=spec.columns, spec=spec)


@dataclass(frozen=True)
class CvReport:
    k: int
    fold_rmse: tuple  # kWh/month per held-out fold
    seed: int

    @property
    def mean_rmse(self) -> float:
        return float(np.mean(self.fold_rmse))

    @property
    def std_rmse(self) -> float:
        return float(np.std(self.fold_rmse))  # across folds


def cross_validate(records: Sequence[DwellingRecord], k: int = 10, seed: int = 0,
                   spec: DesignSpec = DesignSpec()) -> CvReport:
    """k-fold CV: seeded shuffle, contiguous folds whose sizes differ by at
    most one, fit on k-1 folds, RMSE on the held-out fold."""
    X, y = design_matrix(records, spec)
    return cross_validate_matrix(X, y, k=k, seed=seed, columns=spec.columns)


def cross_validate_matrix(X: np.ndarray, y: np.ndarray, k: int = 10, seed: int = 0,
                          columns: Optional[Sequence[str]] = None) -> CvReport:
    n = len(y)
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > n:
        raise DataError(f"cannot form {k} folds from {n} records")
    order = np.random.default_rng(np.uint64(seed)).permutation(n)
    folds = np.array_split(order, k)
    rmse = []
    for i, test_idx in enumerate(folds):
        train_idx = np.concatenate([f for j, f in enumerate(folds) if j != i])
        fit = fit_ols(X[train_idx], y[train_idx], columns=columns)
        pred = fit.coef[0] + X[test_idx] @ fit.coef[1:]
        rmse.append(float(np.sqrt(np.mean((y[test_idx] - pred) ** 2))))
    return CvReport(k=k, fold_rmse=tuple(rmse), seed=seed)


def predict_ebar(fit: RegressionFit, record: DwellingRecord) -> float:
    """Predicted consumption, kWh/month, before the bare rescale.

    Negative predictions (possible for small new-build flats) are clamped
    to zero with a ClampWarning.
    """
    x = encode(record, fit.spec)
    if len(x) != len(fit.columns):
        raise DataError("record encoding does not match the fitted design")
    value = float(fit.coef[0] + x @ fit.coef[1:])
    if value < 0:
        warnings.warn(f"negative predicted demand {value:.1f} kWh/month clamped to 0",
                      ClampWarning, stacklevel=2)
        return 0.0
    return value


@dataclass(frozen=True)
class RescaleParams:
    """Everything the bare rescale needs: demand fractions, window and roof
    constants, and per-group stock-average presence of upgrades."""

    alpha_windows: float = 0.12
    alpha_lighting: float = 0.03
    alpha_insulation: float = 0.06
    led_power_ratio: float = 0.25
    u_single: float = 5.74
    u_double: float = 2.7
    kr_over_lr: float = 1.06
    kappa_i: float = 0.03
    house: GroupPresence = field(default_factory=lambda: HOUSE_PRESENCE)
    other: GroupPresence = field(default_factory=lambda: OTHER_PRESENCE)

    @classmethod
    def from_params(cls, params: ParamSet = DEFAULT_PARAMS,
                    house: GroupPresence = HOUSE_PRESENCE,
                    other: GroupPresence = OTHER_PRESENCE) -> "RescaleParams":
        f, t = params.fractions, params.thermal
        return cls(alpha_windows=f.alpha_windows, alpha_lighting=f.alpha_lighting,
                   alpha_insulation=f.alpha_insulation, led_power_ratio=f.led_power_ratio,
                   u_single=t.u_single, u_double=t.u_double,
                   kr_over_lr=t.kr_over_lr, kappa_i=t.kappa_i,
                   house=house, other=other)


def rescale_bracket(group: str, params: RescaleParams) -> float:
    """The (< 1) multiplier the stock-average upgrades apply to bare demand."""
    presence = _presence(group, params)
    include_insulation = presence.loft_cm is not None
    loft_m = (presence.loft_cm or 0.0) / 100.0
    return fml.rescale_bracket(presence.glazed_fraction, presence.led_fraction, loft_m,
                               params.alpha_windows, params.alpha_lighting,
                               params.alpha_insulation, params.led_power_ratio,
                               params.u_single, params.u_double,
                               params.kappa_i, params.kr_over_lr, include_insulation)


def rescale_to_bare(ebar: float, group: str, params: RescaleParams):
    """Rescale a fitted consumption up to its bare reference.

    ``group`` is "house" or "other" (the insulation presence term only
    applies to houses). Returns (value, factor); factor is the exact
    reciprocal of the bracket multiplier.
    """
    bracket = rescale_bracket(group, params)
    if bracket <= 0:
        raise ConfigError(f"degenerate rescale parameters: bracket {bracket:.4f} <= 0")
    factor = 1.0 / bracket
    return ebar * factor, factor


def _presence(group: str, params: RescaleParams) -> GroupPresence:
    key = group.casefold()
    if key == "house":
        return params.house
    if key == "other":
        return params.other
    raise ValueError(f"unknown rescale group: {group!r} (expected 'house' or 'other')")


def group_for(property_type: PropertyType) -> str:
    return "house" if property_type is PropertyType.HOUSE else "other"


@dataclass(frozen=True, eq=False)
class BareHomeModel:
    """Fitted baseline plus everything needed to serve it: encoding spec,
    rescale parameters, per-type mean floor heights for volume imputation,
    CV report, and training-data provenance."""

    fit: RegressionFit
    rescale: RescaleParams
    height_means: dict  # property type value -> mean height, m
    cv: Optional[CvReport] = None
    provenance: str = ""

    def predict_bare_annual(self, record: DwellingRecord, group: Optional[str] = None):
        """kWh/year in the bare state: predict, rescale, and convert."""
        ebar = predict_ebar(self.fit, record)
        g = group if group is not None else group_for(record.property_type)
        e0_month, factor = rescale_to_bare(ebar, g, self.rescale)
        return e0_month * MONTHS_PER_YEAR, factor


def _canonical_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _checksum(payload: dict) -> str:
    return hashlib.sha256(_canonical_json(payload).encode()).hexdigest()


def model_to_dict(model: BareHomeModel) -> dict:
    fit = model.fit
    payload = {
        "model_version": MODEL_VERSION,
        "basis": fit.spec.basis.value,
        "columns": ["intercept"] + list(fit.columns),
        "coef": [float(v) for v in fit.coef],
        "stderr": [float(v) for v in fit.stderr],
        "t_values": [float(v) for v in fit.t_values],
        "p_values": [float(v) for v in fit.p_values],
        "ci_low": [float(v) for v in fit.ci_low],
        "ci_high": [float(v) for v in fit.ci_high],
        "residual_variance": float(fit.residual_variance),
        "n_obs": int(fit.n_obs),
        "rescale": dataclasses.asdict(model.rescale),
        "height_means": {k: float(v) for k, v in sorted(model.height_means.items())},
        "cv": None if model.cv is None else {
            "k": model.cv.k, "fold_rmse": list(model.cv.fold_rmse), "seed": model.cv.seed},
        "provenance": model.provenance,
    }
    payload["checksum"] = _checksum({k: v for k, v in payload.items() if k != "checksum"})
    return payload


def save_model(model: BareHomeModel, path: Union[str, Path]) -> None:
    Path(path).write_text(_canonical_json(model_to_dict(model)) + "\n")


def model_from_dict(payload: dict) -> BareHomeModel:
    version = payload.get("model_version")
    if version != MODEL_VERSION:
        raise ModelFormatError(f"unsupported model version {version!r} (expected {MODEL_VERSION!r})")
    body = {k: v for k, v in payload.items() if k != "checksum"}
    if _checksum(body) != payload.get("checksum"):
        raise ModelFormatError("model checksum mismatch: artifact corrupted or edited")
    spec = DesignSpec(basis=Basis(payload["basis"]))
    columns = tuple(payload["columns"][1:])
    if columns != spec.columns:
        raise ModelFormatError("model columns do not match its declared design")
    fit = RegressionFit(
        columns=columns,
        coef=np.array(payload["coef"]),
        stderr=np.array(payload["stderr"]),
        t_values=np.array(payload["t_values"]),
        p_values=np.array(payload["p_values"]),
        ci_low=np.array(payload["ci_low"]),
        ci_high=np.array(payload["ci_high"]),
        residual_variance=payload["residual_variance"],
        n_obs=payload["n_obs"],
        spec=spec,
    )
    r = dict(payload["rescale"])
    r["house"] = GroupPresence(**r["house"])
    r["other"] = GroupPresence(**r["other"])
    cv = payload.get("cv")
    return BareHomeModel(
        fit=fit,
        rescale=RescaleParams(**r),
        height_means=dict(payload["height_means"]),
        cv=None if cv is None else CvReport(k=cv["k"], fold_rmse=tuple(cv["fold_rmse"]), seed=cv["seed"]),
        provenance=payload.get("provenance", ""),
    )


def load_model(path: Union[str, Path]) -> BareHomeModel:
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"unreadable model artifact: {exc}") from exc
    return model_from_dict(payload)


def training_provenance(records: Sequence[DwellingRecord]) -> str:
    """Stable hash of the training inputs, stored in the artifact."""
    h = hashlib.sha256()
    for r in records:
        h.update(f"{r.id}|{r.volume}|{r.annual_consumption}|{r.property_type.value}"
                 f"|{r.built_form.value}|{r.age_band.value}\n".encode())
    return h.hexdigest()


def fit_report_table(fit: RegressionFit) -> str:
    """Human-readable coefficient table (Coef., Std.Err., t, P>|t|, CI)."""
    rows = [f"{'':<22}{'Coef.':>12}{'Std.Err.':>12}{'t':>12}{'P>|t|':>8}{'[0.025':>12}{'0.975]':>12}"]
    names = ("intercept",) + fit.columns
    for i, name in enumerate(names):
        rows.append(f"{name:<22}{fit.coef[i]:>12.2f}{fit.stderr[i]:>12.2f}"
                    f"{fit.t_values[i]:>12.2f}{fit.p_values[i]:>8.2f}"
                    f"{fit.ci_low[i]:>12.2f}{fit.ci_high[i]:>12.2f}")
    rows.append(f"n_obs = {fit.n_obs}; residual std = {math.sqrt(fit.residual_variance):.2f} kWh/month")
    return "\n".join(rows)
