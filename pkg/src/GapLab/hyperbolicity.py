'''Uniform-hyperbolicity certificates and the subcritical/critical/supercritical trichotomy.'''

import GapLab.constants as cn # type: ignore
from GapLab.cocycle import CocycleMap, lyapunovExponent # type: ignore
from GapLab.errors import InvalidInputError # type: ignore
from GapLab.matrices import su11StackToSl2r # type: ignore

import collections
import numpy as np # type: ignore
from typing import List, Optional, Tuple

CONE_HALF_WIDTHS = [np.pi/4, np.pi/8, np.pi/16]
FIRST_ITERATE = 8


class UHCertificate(collections.namedtuple('UHCertificate',
        ['verdict', 'n_star', 'growth_rate', 'min_norm_ratio', 'cone_half_width', 'elliptic_fraction',
        'cone_rate'])):
    """Outcome of the grid cone test. n_star is None unless the verdict is UH.

    growth_rate is the smallest per-step norm growth min_w |A^{n_star}(w)|^{1/n_star}. cone_rate is
    the guaranteed per-step expansion of every cone vector, and
    min_norm_ratio = growth_rate/cone_rate.
    """

    def __bool__(self)->bool:
        return self.verdict == cn.UH

    def toDct(self)->dict:
        return dict(self._asdict())


class RegimeLabel(collections.namedtuple('RegimeLabel',
        ['regime', 'lyapunov_on_circle', 'lyapunov_strip', 'threshold', 'n'])):

    def toDct(self)->dict:
        dct = dict(self._asdict())
        dct['lyapunov_strip'] = [list(p) for p in self.lyapunov_strip]
        return dct


def _realStack(cocycle:CocycleMap, point_arr:np.ndarray)->np.ndarray:
    arr = cocycle.evaluateArray(point_arr)
    if cocycle.kind == cn.SU11:
        return su11StackToSl2r(arr)
    return np.real(arr)

def batchProduct(cocycle:CocycleMap, start_arr:np.ndarray, n:int)->Tuple[np.ndarray, np.ndarray]:
    """Products A^n(w) for every w in start_arr, as real matrices with per-point log-scales.

    Returns:
        product_arr (np.ndarray): shape (num_point, 2, 2), renormalized to unit Frobenius norm
        log_scale_arr (np.ndarray): the products are product_arr*exp(log_scale_arr)
    """
    num_point = len(start_arr)
    product_arr = np.broadcast_to(np.identity(2), (num_point, 2, 2)).copy()
    log_scale_arr = np.zeros(num_point)
    point_arr = np.array(start_arr, dtype=float)
    for _ in range(n):
        product_arr = _realStack(cocycle, point_arr) @ product_arr
        norm_arr = np.sqrt(np.sum(product_arr**2, axis=(1, 2)))
        product_arr = product_arr/norm_arr[:, None, None]
        log_scale_arr += np.log(norm_arr)
        point_arr = cocycle.base.stepArray(point_arr)
    return product_arr, log_scale_arr

def _backwardPoints(cocycle:CocycleMap, point_arr:np.ndarray, n:int)->np.ndarray:
    if cocycle.base.kind == cn.TORUS_ROTATION:
        return np.mod(point_arr - n*cocycle.base.alpha, 1.0)
    for _ in range(n):
        point_arr = cocycle.base.inverseStepArray(point_arr)
    return point_arr

def _leadingAngle(product_arr:np.ndarray)->np.ndarray:
    """Angle in [0, pi) of the leading left singular vector."""
    u_arr, _, _ = np.linalg.svd(product_arr)
    return np.mod(np.arctan2(u_arr[:, 1, 0], u_arr[:, 0, 0]), np.pi)

def _projectiveOffset(angle_arr:np.ndarray, center_arr:np.ndarray)->np.ndarray:
    """Signed difference of projective angles in [-pi/2, pi/2)."""
    return np.mod(angle_arr - center_arr + np.pi/2, np.pi) - np.pi/2

def _imageAngle(product_arr:np.ndarray, angle_arr:np.ndarray)->np.ndarray:
    x_arr = product_arr[:, 0, 0]*np.cos(angle_arr) + product_arr[:, 0, 1]*np.sin(angle_arr)
    y_arr = product_arr[:, 1, 0]*np.cos(angle_arr) + product_arr[:, 1, 1]*np.sin(angle_arr)
    return np.arctan2(y_arr, x_arr)

def _minArcExpansion(product_arr:np.ndarray, center_arr:np.ndarray, half_width:float)->np.ndarray:
    """Minimum of |P x|^2 over unit x with angle in [center - half_width, center + half_width].
    Uses |P x(t)|^2 = m + R cos(2t - phi0)."""
    gram_arr = np.transpose(product_arr, (0, 2, 1)) @ product_arr
    g11, g12, g22 = gram_arr[:, 0, 0], gram_arr[:, 0, 1], gram_arr[:, 1, 1]
    mean_arr = 0.5*(g11 + g22)
    amplitude_arr = np.sqrt((0.5*(g11 - g22))**2 + g12**2)
    phi0_arr = np.arctan2(g12, 0.5*(g11 - g22))
    low_arr = 2*(center_arr - half_width) - phi0_arr
    high_arr = 2*(center_arr + half_width) - phi0_arr
    endpoint_arr = np.minimum(mean_arr + amplitude_arr*np.cos(low_arr),
          mean_arr + amplitude_arr*np.cos(high_arr))
    has_trough_arr = np.mod(np.pi - low_arr, 2*np.pi) <= 4*half_width
    return np.where(has_trough_arr, mean_arr - amplitude_arr, endpoint_arr)

def _coneTest(product_arr, log_scale_arr, center_arr, target_arr, half_width, n):
    """Log expansion per step over the cone field, or None if the cone is not mapped inside."""
    for offset in [-half_width, 0.0, half_width]:
        image_arr = _imageAngle(product_arr, center_arr + offset)
        if np.any(np.abs(_projectiveOffset(image_arr, target_arr)) >= half_width):
            return None
    min_sq_arr = _minArcExpansion(product_arr, center_arr, half_width)
    if np.any(min_sq_arr <= 0):
        return None
    log_expansion_arr = (0.5*np.log(min_sq_arr) + log_scale_arr)/n
    return float(np.min(log_expansion_arr))

def certifyUniformHyperbolicity(cocycle:CocycleMap, grid:int=cn.D_UH_GRID,
        n_max:int=cn.D_UH_N_MAX, min_expansion:float=cn.D_UH_MIN_EXPANSION,
        elliptic_fraction:float=cn.D_UH_ELLIPTIC_FRACTION)->UHCertificate:
    """Grid cone-field test for uniform hyperbolicity.

    For n = 8, 16, ... up to n_max the cone at w is centered on the leading left singular
    direction of A^n(T^{-n}w). The test passes when A^n(w) maps every cone strictly inside the
    cone at T^n w while expanding every vector in it by at least min_expansion^n.

    Args:
        cocycle (CocycleMap)
        grid (int): number of base points j/grid (>= 64)
        n_max (int): largest iterate tried
        min_expansion (float): required per-step expansion, > 1
        elliptic_fraction (float): share of elliptic (w, n) pairs that makes the verdict NotUH

    Returns:
        UHCertificate
    """
    if grid < 64:
        raise InvalidInputError(f"UH certification needs grid >= 64, got {grid}.")
    if min_expansion <= 1:
        raise InvalidInputError(f"min_expansion must exceed 1, got {min_expansion}.")
    point_arr = cocycle.base.gridArray(grid)
    num_elliptic = 0
    num_total = 0
    n = FIRST_ITERATE
    while n <= n_max:
        product_arr, log_scale_arr = batchProduct(cocycle, point_arr, n)
        back_arr, _ = batchProduct(cocycle, _backwardPoints(cocycle, point_arr, n), n)
        center_arr = _leadingAngle(back_arr)
        target_arr = _leadingAngle(product_arr)
        for half_width in CONE_HALF_WIDTHS:
            log_rate = _coneTest(product_arr, log_scale_arr, center_arr, target_arr, half_width, n)
            if (log_rate is not None) and (log_rate >= np.log(min_expansion)):
                norm_arr = np.linalg.norm(product_arr, 2, axis=(1, 2))
                log_norm_arr = (np.log(norm_arr) + log_scale_arr)/n
                growth_rate = float(np.exp(np.min(log_norm_arr)))
                return UHCertificate(verdict=cn.UH, n_star=n, growth_rate=growth_rate,
                      min_norm_ratio=float(np.exp(np.min(log_norm_arr) - log_rate)),
                      cone_half_width=half_width, elliptic_fraction=None,
                      cone_rate=float(np.exp(log_rate)))
        # Elliptic when |tr A^n| < 2 at true scale
        with np.errstate(over="ignore"):
            trace_arr = np.abs(product_arr[:, 0, 0] + product_arr[:, 1, 1])*np.exp(log_scale_arr)
        num_elliptic += int(np.sum(trace_arr < 2))
        num_total += grid
        n *= 2
    fraction = num_elliptic/num_total if num_total > 0 else 0.0
    verdict = cn.NOT_UH if fraction >= elliptic_fraction else cn.INCONCLUSIVE
    return UHCertificate(verdict=verdict, n_star=None, growth_rate=None, min_norm_ratio=None,
          cone_half_width=None, elliptic_fraction=fraction, cone_rate=None)

def classifyRegime(cocycle:CocycleMap, epsilons:Optional[List[float]]=None,
        n:int=cn.D_N_LYAPUNOV, omega_samples:int=cn.D_LYAPUNOV_SAMPLES,
        threshold:Optional[float]=None)->RegimeLabel:
    """Supercritical when L(0) exceeds the threshold, Subcritical when L(eps) stays below it
    for every tested eps, Critical otherwise.

    Args:
        cocycle (CocycleMap): its matrix_fn must accept a positive epsilon
        epsilons (list): strip widths; defaults to cn.D_EPSILONS
        n (int): iterate count
        omega_samples (int): starting phases
        threshold (float): defaults to cn.D_REGIME_SCALE/n

    Returns:
        RegimeLabel
    """
    if epsilons is None:
        epsilons = list(cn.D_EPSILONS)
    if any([e <= 0 for e in epsilons]):
        raise InvalidInputError(f"Strip widths must be positive, got {epsilons}.")
    if threshold is None:
        threshold = cn.D_REGIME_SCALE/n
    on_circle = lyapunovExponent(cocycle, n=n, omega_samples=omega_samples)
    strip = [(float(e), lyapunovExponent(cocycle, n=n, omega_samples=omega_samples, epsilon=e))
          for e in sorted(epsilons)]
    if on_circle > threshold:
        regime = cn.SUPERCRITICAL
    elif all([l <= threshold for _, l in strip]):
        regime = cn.SUBCRITICAL
    else:
        regime = cn.CRITICAL
    return RegimeLabel(regime=regime, lyapunov_on_circle=on_circle, lyapunov_strip=strip,
          threshold=threshold, n=n)
