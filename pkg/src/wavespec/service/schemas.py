"""Pydantic request/response models of the wavespec HTTP service.

These are the wire contract: the CLI builds the same models and either
dispatches them in-process or posts them to a remote server.
"""

from __future__ import annotations

from pydantic import BaseModel, Field, model_validator

from ..estimation import DEFAULT_ML_MAX_N, METHOD_ALIASES
from ..model import WaveParams
from ..sampling import DEFAULT_TAIL_THRESHOLD


class ThetaModel(BaseModel):
    alpha: float = Field(gt=0)
    omega_p: float = Field(gt=0)
    gamma: float = Field(ge=1)
    r: float = Field(gt=1)
    sigma1: float = Field(default=0.07, gt=0)
    sigma2: float = Field(default=0.09, gt=0)
    s: float = Field(default=4.0, gt=0)
    smoothing: float | None = Field(default=None, gt=0)

    def to_params(self) -> WaveParams:
        return WaveParams(
            alpha=self.alpha, omega_p=self.omega_p, gamma=self.gamma, r=self.r,
            sigma1=self.sigma1, sigma2=self.sigma2, s=self.s,
            smoothing=self.smoothing,
        )

    @classmethod
    def from_params(cls, params: WaveParams) -> "ThetaModel":
        return cls(
            alpha=params.alpha, omega_p=params.omega_p, gamma=params.gamma,
            r=params.r, sigma1=params.sigma1, sigma2=params.sigma2, s=params.s,
            smoothing=params.smoothing,
        )


class QuadratureModel(BaseModel):
    """Quadrature overrides; omitted fields resolve to their defaults."""

    m: int | None = Field(default=None, ge=2)
    k_folds: int | None = Field(default=None, ge=0)
    tail_threshold: float = Field(default=DEFAULT_TAIL_THRESHOLD, gt=0)


class QuadratureResolved(BaseModel):
    m: int
    k_folds: int
    tail_threshold: float


class SelectionModel(BaseModel):
    """Band of the frequency selection; null omega_max means unbounded."""

    omega_min: float = Field(default=0.0, ge=0)
    omega_max: float | None = Field(default=None, gt=0)
    dropped: list[str] = ["zero", "nyquist"]


class EmbeddingModel(BaseModel):
    circulant_size: int
    min_eigenvalue: float
    clipped: bool


class _RecordLength(BaseModel):
    """Shared n/duration resolution: exactly one must be given."""

    delta: float = Field(gt=0)
    n: int | None = Field(default=None, ge=2)
    duration: float | None = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _resolve_length(self):
        if (self.n is None) == (self.duration is None):
            raise ValueError("exactly one of n and duration must be set")
        if self.n is None:
            self.n = int(round(self.duration / self.delta))
            if self.n < 2:
                raise ValueError("duration too short for the sampling interval")
        return self


class SimulateRequest(_RecordLength):
    theta: ThetaModel
    reps: int = Field(default=1, ge=1)
    seed: int = 0
    quadrature: QuadratureModel = QuadratureModel()


class SimulateResponse(BaseModel):
    elevations: list[list[float]]
    delta: float
    n: int
    seed: int
    theta: ThetaModel
    quadrature: QuadratureResolved
    embedding: EmbeddingModel


class FitRequest(BaseModel):
    elevations: list[float] = Field(min_length=2)
    delta: float = Field(gt=0)
    method: str = "debiased_whittle"
    differenced: bool = False
    segment_len: int | None = Field(default=None, ge=2)
    omega_min: float = Field(default=0.0, ge=0)
    omega_max: float | None = Field(default=None, gt=0)
    quadrature: QuadratureModel = QuadratureModel()
    init: ThetaModel | None = None
    ml_max_n: int = Field(default=DEFAULT_ML_MAX_N, ge=2)
    seed: int | None = None

    @model_validator(mode="after")
    def _check_method(self):
        if self.method not in METHOD_ALIASES:
            raise ValueError(
                f"unknown method {self.method!r}; choose from {sorted(set(METHOD_ALIASES))}"
            )
        return self


class FitResponse(BaseModel):
    method: str
    differenced: bool
    segment_len: int | None
    theta_hat: ThetaModel
    init: ThetaModel
    init_fallback: bool
    objective: float
    converged: bool
    iterations: int
    selection: SelectionModel
    quadrature: QuadratureResolved
    delta: float
    n: int
    seed: int | None = None


class CiRequest(BaseModel):
    fit: FitResponse
    level: float = Field(default=0.95, gt=0, lt=1)


class CiResponse(BaseModel):
    theta_hat: ThetaModel
    level: float
    z: float
    se: dict[str, float]
    intervals: dict[str, list[float]]
    clipped_lower: dict[str, bool]
    var_theta: list[list[float]]
    hessian_expect: list[list[float]]
    score_var: list[list[float]]
    pinv_used: bool


class DiagnoseRequest(BaseModel):
    elevations: list[float] = Field(min_length=2)
    delta: float = Field(gt=0)
    theta: ThetaModel
    kind: str = "qq"
    differenced: bool = False
    omega_min: float = Field(default=0.0, ge=0)
    omega_max: float | None = Field(default=None, gt=0)
    quadrature: QuadratureModel = QuadratureModel()

    @model_validator(mode="after")
    def _check_kind(self):
        if self.kind not in ("qq", "corr", "overlay"):
            raise ValueError("kind must be one of qq, corr, overlay")
        return self


class QqPayload(BaseModel):
    empirical: list[float]
    reference: list[float]
    ks_statistic: float


class OverlayPayload(BaseModel):
    omega: list[float]
    periodogram: list[float]
    expected_periodogram: list[float]
    periodogram_db: list[float]
    expected_periodogram_db: list[float]


class CorrPayload(BaseModel):
    omega: list[float]
    matrix: list[list[float]]


class DiagnoseResponse(BaseModel):
    kind: str
    qq: QqPayload | None = None
    overlay: OverlayPayload | None = None
    corr: CorrPayload | None = None


class BenchmarkRequest(_RecordLength):
    alphas: list[float] = [0.7]
    omega_ps: list[float] = [0.7]
    gammas: list[float] = [3.3]
    rs: list[float] = [4.0]
    methods: list[str] = ["ls", "bls", "dw"]
    differenced: bool = False
    segment_len: int | None = Field(default=None, ge=2)
    reps: int = Field(default=10, ge=1)
    seed: int = 0
    omega_min: float = Field(default=0.0, ge=0)
    omega_max: float | None = Field(default=None, gt=0)
    workers: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _check_methods(self):
        for name in self.methods:
            if name not in METHOD_ALIASES:
                raise ValueError(f"unknown method {name!r}")
        return self


class BenchmarkRowModel(BaseModel):
    method: str
    parameter: str
    bias_pct: float
    sd_pct: float
    rmse_pct: float


class BenchmarkResponse(BaseModel):
    rows: list[BenchmarkRowModel]
    reps: int
    n_configs: int
    failures: int
    wall_time_s: float


class HealthResponse(BaseModel):
    status: str
    version: str
