'''Resonance tongues of one-parameter families: boundary tracing, slopes and smoothness.'''

import GapLab.constants as cn # type: ignore
from GapLab.cocycle import rotationNumber # type: ignore
from GapLab.dynamics import BaseDynamics # type: ignore
from GapLab.errors import ComputationalError, InvalidInputError, PreconditionError, GapLabWarning # type: ignore
from GapLab.gaps import gapReport # type: ignore
from GapLab.hyperbolicity import classifyRegime # type: ignore
from GapLab.operators import JacobiFamily, CMVFamily, cocycleMap # type: ignore
from GapLab.spectrum import truncatedSpectrum # type: ignore
from GapLab.trig_poly import TrigPoly # type: ignore
from GapLab import utils # type: ignore

import collections
from joblib import Parallel, delayed # type: ignore
import numpy as np # type: ignore
import pandas as pd # type: ignore
from typing import List, Optional, Tuple, Union
import warnings

JACOBI_COUPLING = "jacobi_coupling"
CMV_COUPLING = "cmv_coupling"
PROBE_POINTS = 5
PREDICTION_TOL = 1e-12

SlopeReport = collections.namedtuple('SlopeReport',
      ['k', 'delta0', 'slope_plus', 'slope_minus', 'transversal', 'h_hat_k', 'stencil'])
OpeningCriterion = collections.namedtuple('OpeningCriterion', ['h_hat_k', 'predicted_transversal'])
SmoothnessReport = collections.namedtuple('SmoothnessReport',
      ['max_residual', 'flagged', 'num_window', 'num_skipped'])
TraceSettings = collections.namedtuple('TraceSettings',
      ['E_bracket', 'tol', 'rho_tol', 'n_rot', 'burn_in', 'is_classify', 'fallback_N'])


def defaultSettings()->TraceSettings:
    return TraceSettings(E_bracket=None, tol=cn.D_TOL, rho_tol=cn.D_RHO_TOL, n_rot=cn.D_N_ROT,
          burn_in=cn.D_BURN_IN, is_classify=False, fallback_N=cn.D_FALLBACK_N)


class Family1P(object):

    def __init__(self, kind:str, perturbation:TrigPoly, base:Optional[BaseDynamics]=None,
            a:Optional[TrigPoly]=None, lam:Optional[float]=None):
        """Coupling families: b_delta = delta*b (Jacobi) or v_delta = lam*exp(i delta h) (CMV).

        Args:
            kind (str): JACOBI_COUPLING or CMV_COUPLING
            perturbation (TrigPoly): b or h
            base (BaseDynamics): defaults to the golden-mean rotation
            a (TrigPoly): Jacobi off-diagonal, defaults to 1
            lam (float): CMV modulus, defaults to cn.D_LAMBDA
        """
        if not kind in [JACOBI_COUPLING, CMV_COUPLING]:
            raise InvalidInputError(f"Unknown one-parameter family kind {kind}.")
        if base is None:
            base = BaseDynamics()
        self.kind = kind
        self.perturbation = perturbation
        self.base = base
        self.a = a if a is not None else TrigPoly.constant(1.0)
        self.lam = lam if lam is not None else cn.D_LAMBDA

    @property
    def alpha(self)->float:
        return self.base.alpha

    @property
    def is_jacobi(self)->bool:
        return self.kind == JACOBI_COUPLING

    def familyAt(self, delta:float)->Union[JacobiFamily, CMVFamily]:
        if self.is_jacobi:
            return JacobiFamily(self.a, float(delta)*self.perturbation, base=self.base,
                  description=f"coupling delta={delta}")
        return CMVFamily(lam=self.lam, h=float(delta)*self.perturbation, base=self.base,
              description=f"coupling delta={delta}")

    def defaultBracket(self, delta:float)->Tuple[float, float]:
        """Energies enclosing the spectrum (Jacobi) or the open angle range (0, 2 pi) (CMV)."""
        if self.is_jacobi:
            bound = 2*self.a.maximum() + abs(delta)*max(abs(self.perturbation.maximum()),
                  abs(self.perturbation.minimum())) + 0.1
            return (-bound, bound)
        return (1e-9, 2*np.pi - 1e-9)

    def doubleRotation(self, delta:float, parameter:float, settings:TraceSettings):
        """2 rho at energy (angle) parameter and the convergence flag."""
        result = rotationNumber(cocycleMap(self.familyAt(delta), parameter), n=settings.n_rot,
              burn_in=settings.burn_in)
        return 2*result.rho, result.verdict == cn.CONVERGED

    def targetLabel(self, k:int)->float:
        """Value of 2 rho inside tongue k."""
        return float(utils.frac(k*self.alpha))

    def idsLabel(self, k:int)->float:
        """IDS value on the gap of tongue k: 1 - frac(k alpha) for Jacobi, frac(k alpha) for CMV."""
        if self.is_jacobi:
            return float(utils.frac(-k*self.alpha))
        return self.targetLabel(k)


class TongueCurve(object):

    def __init__(self, k:int, delta_grid, E_minus, E_plus, regimes:Optional[List[str]]=None,
            family:Optional[Family1P]=None, settings:Optional[TraceSettings]=None,
            num_fallback:int=0):
        """Boundaries E_k^-(delta) <= E_k^+(delta) of tongue k."""
        self.k = k
        self.delta_grid = np.asarray(delta_grid, dtype=float)
        self.E_minus = np.asarray(E_minus, dtype=float)
        self.E_plus = np.asarray(E_plus, dtype=float)
        if regimes is None:
            regimes = [None]*len(self.delta_grid)
        self.regimes = list(regimes)
        self.family = family
        if settings is None:
            settings = defaultSettings()
        self.settings = settings
        self.num_fallback = num_fallback
        if np.any(np.diff(self.delta_grid) <= 0):
            raise InvalidInputError("delta_grid must be strictly increasing.")

    @property
    def widths(self)->np.ndarray:
        return self.E_plus - self.E_minus

    @property
    def tol(self)->float:
        return self.settings.tol

    def boundaryAt(self, delta:float)->Tuple[float, float]:
        """(E_minus, E_plus) at delta, retracing when delta is not on the grid."""
        idx_arr = np.nonzero(np.abs(self.delta_grid - delta) < 1e-12)[0]
        if len(idx_arr) > 0:
            idx = int(idx_arr[0])
            return float(self.E_minus[idx]), float(self.E_plus[idx])
        if self.family is None:
            raise InvalidInputError(f"delta={delta} is not on the curve and no family is attached.")
        column = _traceColumn(self.family, self.k, float(delta), self.settings)
        return column[0], column[1]

    def toDataFrame(self)->pd.DataFrame:
        return pd.DataFrame({"delta": self.delta_grid, "E_minus": self.E_minus, "E_plus": self.E_plus,
              "width": self.widths, "regime": self.regimes})


############ Tracing
def _checkMonotone(family:Family1P, delta:float, bracket, settings:TraceSettings):
    probe_arr = np.linspace(bracket[0], bracket[1], PROBE_POINTS)
    value_arr = np.array([family.doubleRotation(delta, p, settings)[0] for p in probe_arr])
    step_arr = np.diff(value_arr)
    slack = 2*settings.rho_tol + 1e-9
    if family.is_jacobi:
        is_monotone = np.all(step_arr <= slack)
    else:
        is_monotone = np.all(step_arr >= -slack)
    if not is_monotone:
        raise PreconditionError(f"Rotation number is not monotone on {bracket} at delta={delta}: {value_arr}.")

def _traceColumn(family:Family1P, k:int, delta:float, settings:TraceSettings):
    """Bisection for the two boundaries of tongue k at one delta.

    Returns:
        E_minus, E_plus, regime, is_fallback
    """
    bracket = settings.E_bracket if settings.E_bracket is not None else family.defaultBracket(delta)
    _checkMonotone(family, delta, bracket, settings)
    target = family.targetLabel(k)
    # Jacobi: 2 rho decreases in E; CMV: increases in theta
    sign = -1 if family.is_jacobi else 1
    fallback:dict = {}
    ##
    def offset(parameter):
        """Signed distance of 2 rho from the target, oriented so it increases with parameter."""
        if not "spectrum" in fallback:
            value, is_converged = family.doubleRotation(delta, parameter, settings)
            if is_converged:
                return sign*(value - target), settings.rho_tol
            warnings.warn(f"Rotation number inconclusive at delta={delta}, E={parameter}; "
                  f"switching to eigenvalue counting.", GapLabWarning)
            fallback["spectrum"] = truncatedSpectrum(family.familyAt(delta), N=settings.fallback_N)
        spectrum = fallback["spectrum"]
        ids = spectrum.ids(parameter)
        value = 1 - ids if family.is_jacobi else ids
        return sign*(value - target), 2*spectrum.omega_samples/len(spectrum)
    ##
    low, high = bracket
    inside = None
    # Phase 1: a point inside the tongue or a collapse
    while high - low >= settings.tol:
        middle = 0.5*(low + high)
        value, value_tol = offset(middle)
        if abs(value) <= value_tol:
            inside = middle
            break
        if value < 0:
            low = middle
        else:
            high = middle
    if inside is None:
        E_minus = E_plus = 0.5*(low + high)
    else:
        # Phase 2: each edge separately
        left, right = low, inside
        while right - left >= settings.tol:
            middle = 0.5*(left + right)
            value, value_tol = offset(middle)
            if abs(value) <= value_tol:
                right = middle
            else:
                left = middle
        E_minus = 0.5*(left + right)
        left, right = inside, high
        while right - left >= settings.tol:
            middle = 0.5*(left + right)
            value, value_tol = offset(middle)
            if abs(value) <= value_tol:
                left = middle
            else:
                right = middle
        E_plus = 0.5*(left + right)
    regime = None
    if settings.is_classify:
        cocycle = cocycleMap(family.familyAt(delta), 0.5*(E_minus + E_plus))
        regime = classifyRegime(cocycle).regime
    return E_minus, E_plus, regime, "spectrum" in fallback

def traceTongue(family:Family1P, k:int, delta_grid:List[float],
        E_bracket:Optional[Tuple[float, float]]=None, tol:float=cn.D_TOL,
        rho_tol:float=cn.D_RHO_TOL, n_rot:int=cn.D_N_ROT, burn_in:int=cn.D_BURN_IN,
        is_classify:bool=True, fallback_N:int=cn.D_FALLBACK_N,
        workers:int=cn.D_WORKERS)->TongueCurve:
    """Boundaries of tongue k by rotation-number bisection, one delta column per task.

    Args:
        family (Family1P)
        k (int): tongue label
        delta_grid (list): increasing couplings
        E_bracket (tuple): search interval; defaults to family.defaultBracket
        tol (float): bisection tolerance in E (theta)
        rho_tol (float): plateau tolerance on 2 rho
        n_rot (int), burn_in (int): rotation-number iterates
        is_classify (bool): record the regime at the tongue midpoint of each column
        fallback_N (int): truncation size of the eigenvalue-counting fallback
        workers (int): joblib workers

    Returns:
        TongueCurve
    """
    settings = TraceSettings(E_bracket=E_bracket, tol=tol, rho_tol=rho_tol, n_rot=n_rot,
          burn_in=burn_in, is_classify=is_classify, fallback_N=fallback_N)
    columns = Parallel(n_jobs=workers)(delayed(_traceColumn)(family, k, float(d), settings)
          for d in delta_grid)
    E_minus = [c[0] for c in columns]
    E_plus = [c[1] for c in columns]
    regimes = [c[2] for c in columns] if is_classify else None
    return TongueCurve(k, delta_grid, E_minus, E_plus, regimes=regimes, family=family,
          settings=settings, num_fallback=sum([c[3] for c in columns]))

############ Slopes and criteria
def transversalitySlopes(curve:TongueCurve, delta0:float, step:float,
        slope_tol:float=cn.D_SLOPE_TOL)->SlopeReport:
    """Finite-difference slopes of both boundaries at delta0. Central differences when
    delta0 - step lies in the traced range, otherwise the one-sided second-order stencil.

    Args:
        curve (TongueCurve)
        delta0 (float)
        step (float)
        slope_tol (float): slopes further apart than this are transversal

    Returns:
        SlopeReport
    """
    if step <= 0:
        raise InvalidInputError(f"step must be positive, got {step}.")
    if 3*curve.tol/step >= slope_tol:
        raise ComputationalError(f"Bisection tolerance {curve.tol} cannot resolve slopes to {slope_tol} "
              f"at step {step}; use a smaller tol.")
    if delta0 - step >= curve.delta_grid[0] - 1e-12:
        stencil = "central"
        lower = curve.boundaryAt(delta0 - step)
        upper = curve.boundaryAt(delta0 + step)
        slopes = [(upper[i] - lower[i])/(2*step) for i in range(2)]
    else:
        stencil = "one_sided"
        f0, f1, f2 = [curve.boundaryAt(delta0 + j*step) for j in range(3)]
        slopes = [(-3*f0[i] + 4*f1[i] - f2[i])/(2*step) for i in range(2)]
    slope_minus, slope_plus = slopes
    h_hat_k = None
    if curve.family is not None:
        h_hat_k = curve.family.perturbation.fourierCoefficient(curve.k)
    return SlopeReport(k=curve.k, delta0=delta0, slope_plus=slope_plus, slope_minus=slope_minus,
          transversal=bool(abs(slope_plus - slope_minus) > slope_tol), h_hat_k=h_hat_k, stencil=stencil)

def openingCriterionCMV(h:TrigPoly, k:int)->OpeningCriterion:
    """The CMV tongue k opens transversally at delta=0 iff the k-th Fourier coefficient of h is non-zero."""
    h_hat_k = h.fourierCoefficient(k)
    return OpeningCriterion(h_hat_k=h_hat_k, predicted_transversal=bool(abs(h_hat_k) > PREDICTION_TOL))

def boundarySmoothnessProbe(curve:TongueCurve, window:int=cn.D_SMOOTHNESS_WINDOW,
        tol:Optional[float]=None)->SmoothnessReport:
    """Cubic fits on sliding windows of 2*window+1 points. Windows with a residual above
    10*tol inside Subcritical segments are flagged as candidate regime transitions.

    Returns:
        SmoothnessReport: flagged holds (delta_center, side, residual)
    """
    if tol is None:
        tol = curve.tol
    size = 2*window + 1
    if len(curve.delta_grid) < size:
        raise InvalidInputError(f"Curve needs at least {size} points, has {len(curve.delta_grid)}.")
    max_residual = 0.0
    flagged:list = []
    num_skipped = 0
    num_window = len(curve.delta_grid) - size + 1
    for start in range(num_window):
        section = slice(start, start + size)
        # Unclassified columns (None) are probed
        if any([(r is not None) and (r != cn.SUBCRITICAL) for r in curve.regimes[section]]):
            num_skipped += 1
            continue
        x_arr = curve.delta_grid[section]
        center = float(x_arr[window])
        for side, y_arr in [("minus", curve.E_minus[section]), ("plus", curve.E_plus[section])]:
            coef_arr = np.polyfit(x_arr - center, y_arr, 3)
            residual = float(np.max(np.abs(np.polyval(coef_arr, x_arr - center) - y_arr)))
            max_residual = max(max_residual, residual)
            if residual > 10*tol:
                flagged.append((center, side, residual))
    return SmoothnessReport(max_residual=max_residual, flagged=flagged, num_window=num_window,
          num_skipped=num_skipped)

def widthRatios(source:Union[TongueCurve, Family1P], k:Optional[int]=None,
        deltas:Optional[List[float]]=None, **kwargs)->pd.DataFrame:
    """Tongue width over delta; a ratio tending to a positive constant as delta -> 0 marks
    linear opening.

    Args:
        source: a traced curve, or a family traced at deltas for label k
        kwargs: passed to traceTongue

    Returns:
        pd.DataFrame: delta, width, ratio
    """
    if isinstance(source, TongueCurve):
        curve = source
    else:
        if (k is None) or (deltas is None):
            raise InvalidInputError("Tracing width ratios needs k and deltas.")
        curve = traceTongue(source, k, sorted(deltas), is_classify=False, **kwargs)
    df = curve.toDataFrame()[["delta", "width"]].copy()
    df["ratio"] = df["width"]/df["delta"]
    return df

def tonguesGapConsistency(curve:TongueCurve, N:int=cn.D_N, omega_samples:int=cn.D_SAMPLES,
        tolerance:float=cn.D_LABEL_TOL, k_max:int=cn.D_K_MAX)->pd.DataFrame:
    """For columns whose width exceeds 10*tol, looks for a truncated-spectrum gap carrying the
    tongue's IDS label.

    Returns:
        pd.DataFrame: delta, width, gap_found, label_value, residual
    """
    if curve.family is None:
        raise InvalidInputError("Gap consistency needs the curve's family.")
    family = curve.family
    label = family.idsLabel(curve.k)
    rows = []
    for delta, width in zip(curve.delta_grid, curve.widths):
        if width <= 10*curve.tol:
            continue
        spectrum = truncatedSpectrum(family.familyAt(delta), N=N, omega_samples=omega_samples)
        min_width = min(cn.D_MIN_WIDTH, 0.5*width)
        report = gapReport(spectrum, family.alpha, k_max=k_max, min_width=min_width)
        distances = [float(utils.circularDistance(g.label_value, label)) for g in report.gaps]
        if len(distances) > 0 and min(distances) < tolerance:
            idx = int(np.argmin(distances))
            rows.append(dict(delta=delta, width=width, gap_found=True,
                  label_value=report.gaps[idx].label_value, residual=distances[idx]))
        else:
            rows.append(dict(delta=delta, width=width, gap_found=False, label_value=np.nan,
                  residual=np.nan))
    return pd.DataFrame(rows, columns=["delta", "width", "gap_found", "label_value", "residual"])
