'''Schema of an experiment: the family, numerical policy, task options and output location.'''

import GapLab.constants as cn # type: ignore
from GapLab.dynamics import BaseDynamics # type: ignore
from GapLab.errors import InvalidInputError # type: ignore
from GapLab.operators import JacobiFamily, CMVFamily, makePreset # type: ignore
from GapLab.trig_poly import TrigPoly # type: ignore
from GapLab import utils # type: ignore

import json
import numpy as np # type: ignore
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator # type: ignore
from typing import List, Literal, Optional, Union

PROJECTION_CMV = "cmv_triple"
PROJECTION_JACOBI = "jacobi_triple"
PROJECTION_QUAD = "jacobi_quad"
PROJECTION_G_RANGE = "g_range"
PROJECTION_CONJUGACY = "local_conjugacy"
PROJECTION_KINDS = [PROJECTION_CMV, PROJECTION_JACOBI, PROJECTION_QUAD, PROJECTION_G_RANGE,
      PROJECTION_CONJUGACY]


class _StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class FamilyConfig(_StrictModel):
    """Either a preset name or explicit sampling functions in TrigPoly JSON."""
    preset: Optional[str] = None
    kind: Optional[Literal["jacobi", "cmv"]] = None
    base: Literal["rotation", "skew"] = cn.TORUS_ROTATION
    alpha: float = cn.D_ALPHA
    lam: float = cn.D_LAMBDA
    a: Optional[dict] = None
    b: Optional[dict] = None
    h: Optional[dict] = None
    v_re: Optional[dict] = None
    v_im: Optional[dict] = None

    @field_validator("alpha")
    @classmethod
    def _checkAlpha(cls, value:float)->float:
        if not (0 < value < 1):
            raise ValueError(f"alpha must lie in (0,1), got {value}")
        return value

    @model_validator(mode="after")
    def _checkSource(self)->'FamilyConfig':
        if self.preset is None:
            if self.kind is None:
                raise ValueError("family needs either 'preset' or 'kind'")
        elif not self.preset in cn.PRESETS:
            raise ValueError(f"unknown preset {self.preset}; must be one of {cn.PRESETS}")
        return self

    @property
    def family_kind(self)->str:
        if self.preset is not None:
            return cn.JACOBI if self.preset in cn.JACOBI_PRESETS else cn.CMV
        return str(self.kind)

    def makeFamily(self)->Union[JacobiFamily, CMVFamily]:
        if self.preset is not None:
            return makePreset(self.preset, lam=self.lam, alpha=self.alpha)
        base = BaseDynamics(self.base, self.alpha)
        ##
        def poly(dct, default):
            return TrigPoly.fromDct(dct) if dct is not None else TrigPoly.constant(default)
        ##
        if self.kind == cn.JACOBI:
            return JacobiFamily(poly(self.a, 1.0), poly(self.b, 0.0), base=base, description="explicit")
        if (self.v_re is not None) or (self.v_im is not None):
            return CMVFamily(v_re=poly(self.v_re, 0.0), v_im=poly(self.v_im, 0.0), base=base,
                  description="explicit")
        return CMVFamily(lam=self.lam, h=poly(self.h, 0.0), base=base, description="explicit")


class NumericsConfig(_StrictModel):
    N: int = Field(default=cn.D_N, ge=1)
    samples: int = Field(default=cn.D_SAMPLES, ge=1)
    omega0: float = 0.0
    boundary: Optional[Literal["dirichlet", "unitary"]] = None
    boundary_phase: float = 0.0
    tol: float = Field(default=cn.D_TOL, gt=0)
    rho_tol: float = Field(default=cn.D_RHO_TOL, gt=0)
    n_rot: int = Field(default=cn.D_N_ROT, ge=1000)
    burn_in: int = Field(default=cn.D_BURN_IN, ge=0)
    n_lyapunov: int = Field(default=cn.D_N_LYAPUNOV, ge=1000)
    grid: int = Field(default=cn.D_UH_GRID, ge=64)
    n_max: int = Field(default=cn.D_UH_N_MAX, ge=8)
    epsilons: List[float] = Field(default_factory=lambda: list(cn.D_EPSILONS))
    k_max: int = Field(default=cn.D_K_MAX, ge=1)
    min_width: float = Field(default=cn.D_MIN_WIDTH, gt=0)
    density_threshold: Optional[float] = None
    label_tol: float = Field(default=cn.D_LABEL_TOL, gt=0)
    seed: int = cn.D_SEED
    E_min: float = cn.D_E_MIN
    E_max: float = cn.D_E_MAX
    E_points: int = Field(default=cn.D_E_POINTS, ge=2)

    def parameterGrid(self, family_kind:str)->np.ndarray:
        """Energies in [E_min, E_max] for Jacobi; angles 2 pi j/E_points for CMV."""
        if family_kind == cn.CMV:
            return np.arange(self.E_points)*2*np.pi/self.E_points
        return utils.linearGrid(self.E_min, self.E_max, self.E_points)


class OptionsConfig(_StrictModel):
    """Task-specific parameters; each task reads the fields it needs."""
    k: int = 1
    perturbation: Optional[dict] = None
    t_max: float = 1.0
    steps: int = Field(default=20, ge=1)
    delta_min: float = 0.01
    delta_max: float = 0.1
    delta_steps: int = Field(default=10, ge=2)
    slope_delta: Optional[float] = None
    slope_step: Optional[float] = None
    slope_tol: float = cn.D_SLOPE_TOL
    is_classify: bool = False
    projection: str = PROJECTION_CMV
    theta: float = 0.3
    phi: float = 0.7
    t: float = 0.5
    v: float = 0.4
    v2: float = 0.6
    scales: List[float] = Field(default_factory=lambda: [1.0, 1.0, 1.0, 1.0])
    num_trial: int = Field(default=100, ge=1)
    perturbation_size: float = Field(default=1e-3, gt=0)
    probe_grid: int = Field(default=cn.D_PROBE_GRID, ge=256)
    conjugacy_grid: int = Field(default=cn.D_CONJUGACY_GRID, ge=64)
    bump_size: float = Field(default=cn.D_BUMP_SIZE, gt=0)
    conjugacy_class: Optional[Literal["jacobi", "cmv"]] = None
    alphas: List[float] = Field(default_factory=list)
    bins: int = Field(default=100, ge=1)

    @field_validator("alphas")
    @classmethod
    def _checkAlphas(cls, value:List[float])->List[float]:
        if not all([0 < a < 1 for a in value]):
            raise ValueError(f"alphas must lie in (0,1), got {value}")
        return value

    @field_validator("projection")
    @classmethod
    def _checkProjection(cls, value:str)->str:
        if not value in PROJECTION_KINDS:
            raise ValueError(f"unknown projection {value}; must be one of {PROJECTION_KINDS}")
        return value

    def makePerturbation(self)->TrigPoly:
        if self.perturbation is None:
            return TrigPoly.cosine(1.0)
        return TrigPoly.fromDct(self.perturbation)

    def tGrid(self)->List[float]:
        return [float(t) for t in utils.linearGrid(0.0, self.t_max, self.steps + 1)]

    def deltaGrid(self)->List[float]:
        return [float(d) for d in utils.linearGrid(self.delta_min, self.delta_max, self.delta_steps)]


class ExperimentConfig(_StrictModel):
    task: str
    family: FamilyConfig = Field(default_factory=lambda: FamilyConfig(preset=cn.PRESET_AMO))
    numerics: NumericsConfig = Field(default_factory=NumericsConfig)
    options: OptionsConfig = Field(default_factory=OptionsConfig)
    out_dir: Optional[str] = None

    @field_validator("task")
    @classmethod
    def _checkTask(cls, value:str)->str:
        if not value in cn.TASKS:
            raise ValueError(f"unknown task {value}; must be one of {cn.TASKS}")
        return value

    @model_validator(mode="after")
    def _checkBoundary(self)->'ExperimentConfig':
        boundary = self.numerics.boundary
        if (boundary is not None) and (boundary != self.boundary):
            raise ValueError(f"boundary {boundary} does not apply to a {self.family.family_kind} family")
        return self

    @property
    def boundary(self)->str:
        """Truncation boundary: Dirichlet cuts for Jacobi, unitary cuts for CMV."""
        if self.family.family_kind == cn.JACOBI:
            return cn.BOUNDARY_DIRICHLET
        return cn.BOUNDARY_UNITARY

    def echo(self)->dict:
        """Every setting with defaults filled in. The output location is not part of the echo."""
        return self.model_dump(mode="json", exclude={"out_dir"})

    @property
    def config_hash(self)->str:
        return utils.hashDct(self.echo())

    @classmethod
    def fromFile(cls, path:str)->'ExperimentConfig':
        with open(path, "r", encoding="utf-8") as fd:
            text = fd.read()
        return cls.fromJSON(text)

    @classmethod
    def fromJSON(cls, text:str)->'ExperimentConfig':
        try:
            dct = json.loads(text)
        except json.JSONDecodeError as exp:
            raise InvalidInputError(f"Config is not valid JSON: {exp}")
        return cls.model_validate(dct)
