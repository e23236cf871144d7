'''Triple products in the Szego class S_theta, their local inverse and the range of the free part.'''

import GapLab.constants as cn # type: ignore
from GapLab.errors import InvalidInputError, OutOfRangeError # type: ignore
from GapLab.matrices import Mat2H # type: ignore

import collections
import numpy as np # type: ignore
import pandas as pd # type: ignore
from scipy import ndimage # type: ignore
from typing import Optional

CMVTripleParams = collections.namedtuple('CMVTripleParams', ['phi1', 'v2', 'phi3'])
GRangeProbe = collections.namedtuple('GRangeProbe',
      ['points', 'radius_df', 'min_radius_sum', 'min_sum_phi1', 'has_hole', 'lam',
      'normalization_mismatch'])
NEWTON_STEP = 1e-7


class CMVConstants(collections.namedtuple('CMVConstants', ['theta', 'phi', 'v', 'v_last'])):
    """Class parameter theta, the middle phase phi and the outer moduli v (first) and v_last."""

    def __new__(cls, theta:float, phi:float, v:float, v_last:Optional[float]=None):
        if v_last is None:
            v_last = v
        for name, value in [("v", v), ("v_last", v_last)]:
            if not (0 <= value < 1):
                raise InvalidInputError(f"{name} must lie in [0,1), got {value}.")
        return super().__new__(cls, float(theta), float(phi), float(v), float(v_last))

    @property
    def cube(self)->Mat2H:
        """S^3 for the constant class element S(theta, phi, v)."""
        mat = SzegoClassElem(self.theta, self.phi, self.v).toMat2H()
        return mat @ mat @ mat

    @property
    def seed(self)->CMVTripleParams:
        return CMVTripleParams(phi1=self.phi, v2=self.v, phi3=self.phi)


class SzegoClassElem(collections.namedtuple('SzegoClassElem', ['theta', 'phi', 'v'])):
    """(1/sqrt(1-v^2)) [[e^{i theta}, v e^{-i phi}], [v e^{i phi}, e^{-i theta}]]"""

    def toMat2H(self)->Mat2H:
        return Mat2H.fromParameters(self.theta, self.phi, self.v)

    @classmethod
    def fromMat2H(cls, mat:Mat2H, theta:float, tol:float=cn.DET_TOL)->'SzegoClassElem':
        """Recovers (phi, v) from a matrix whose upper-left argument is theta."""
        error = classError(mat, theta)
        if error > tol:
            raise InvalidInputError(f"Matrix is not in the class with theta={theta}: error {error}.")
        v = abs(mat.b)/abs(mat.a)
        phi = float(-np.angle(mat.b)) if v > 0 else 0.0
        return cls(theta, phi, v)


def classError(mat:Mat2H, theta:float)->float:
    """Deviation of arg(a) from theta, as an angle."""
    return float(abs(np.angle(mat.a*np.exp(-1j*theta))))

def _checkParams(params:CMVTripleParams):
    if not (0 <= params.v2 < 1):
        raise InvalidInputError(f"v2 must lie in [0,1), got {params.v2}.")
    if not np.all(np.isfinite(list(params))):
        raise InvalidInputError(f"Parameters must be finite: {params}.")

def cmvFactors(params:CMVTripleParams, consts:CMVConstants):
    """The class elements (A1, A2, A3)."""
    return (SzegoClassElem(consts.theta, params.phi1, consts.v),
          SzegoClassElem(consts.theta, consts.phi, params.v2),
          SzegoClassElem(consts.theta, params.phi3, consts.v_last))

def cmvTripleProductDirect(params:CMVTripleParams, consts:CMVConstants)->Mat2H:
    """A3 A2 A1 by matrix multiplication."""
    _checkParams(params)
    elem1, elem2, elem3 = [e.toMat2H() for e in cmvFactors(params, consts)]
    return elem3 @ elem2 @ elem1

def cmvTripleProduct(params:CMVTripleParams, consts:CMVConstants)->Mat2H:
    """A3 A2 A1 from the closed forms of its entries.

    Args:
        params (CMVTripleParams): (phi1, v2, phi3)
        consts (CMVConstants): (theta, phi, v, v_last)

    Returns:
        Mat2H
    """
    _checkParams(params)
    theta, phi = consts.theta, consts.phi
    v1, v2, v3 = consts.v, params.v2, consts.v_last
    phi1, phi3 = params.phi1, params.phi3
    a = np.exp(3j*theta) + freePart(params, consts)
    b = v1*np.exp(1j*(2*theta - phi1)) + v2*np.exp(-1j*phi) \
          + v1*v2*v3*np.exp(1j*(phi - phi1 - phi3)) + v3*np.exp(-1j*(2*theta + phi3))
    scale = 1/(np.sqrt(1 - v1**2)*np.sqrt(1 - v2**2)*np.sqrt(1 - v3**2))
    return Mat2H(scale*a, scale*b)

def freePart(params:CMVTripleParams, consts:CMVConstants)->complex:
    """g(phi1, phi3): the unnormalized upper-left entry minus e^{3 i theta}."""
    theta, phi = consts.theta, consts.phi
    v1, v2, v3 = consts.v, params.v2, consts.v_last
    phi1, phi3 = params.phi1, params.phi3
    return v1*v2*np.exp(1j*(theta + phi1 - phi)) + v2*v3*np.exp(1j*(theta + phi - phi3)) \
          + v1*v3*np.exp(1j*(phi1 - theta - phi3))

def normalizationMismatch(v2:float, consts:CMVConstants)->float:
    """Relative disagreement of the prefactor 1/(sqrt(1-v2)(1-v^2)) with the true
    1/(sqrt(1-v^2) sqrt(1-v2^2) sqrt(1-v_last^2))."""
    printed = 1/(np.sqrt(1 - v2)*(1 - consts.v**2))
    true = 1/(np.sqrt(1 - consts.v**2)*np.sqrt(1 - v2**2)*np.sqrt(1 - consts.v_last**2))
    return float(abs(printed/true - 1))

############ Inverse
def _residual(x:np.ndarray, target:Mat2H, consts:CMVConstants)->np.ndarray:
    mat = cmvTripleProduct(CMVTripleParams(*x), consts)
    delta_b = mat.b - target.b
    return np.array([delta_b.real, delta_b.imag, np.angle(mat.a*np.conj(target.a))])

def _jacobian(x:np.ndarray, target:Mat2H, consts:CMVConstants)->np.ndarray:
    columns = []
    for idx in range(3):
        step = np.zeros(3)
        step[idx] = NEWTON_STEP
        columns.append((_residual(x + step, target, consts)
              - _residual(x - step, target, consts))/(2*NEWTON_STEP))
    return np.column_stack(columns)

def _distance(mat:Mat2H, other:Mat2H)->float:
    return max(abs(mat.a - other.a), abs(mat.b - other.b))

def cmvTripleInverse(target:Mat2H, consts:CMVConstants, radius:float=cn.D_NBHD_RADIUS,
        max_step:int=cn.D_NEWTON_STEPS, damping:float=cn.D_NEWTON_DAMPING,
        tol:float=1e-9)->CMVTripleParams:
    """Parameters (phi1, v2, phi3) whose triple product equals target, by damped Newton
    iteration seeded at (phi, v, phi).

    Args:
        target (Mat2H): within radius (max entry distance) of S^3
        consts (CMVConstants)
        radius (float): neighborhood of S^3 where the inverse is attempted
        max_step (int): Newton iterations
        damping (float): step factor applied while the residual increases
        tol (float): required max entry distance of the reconstruction

    Returns:
        CMVTripleParams
    """
    distance = _distance(target, consts.cube)
    if distance > radius:
        raise OutOfRangeError(f"Target is {distance} from S^3, outside the radius {radius}.")
    x = np.array(consts.seed, dtype=float)
    residual = _residual(x, target, consts)
    for _ in range(max_step):
        if np.max(np.abs(residual)) < 1e-15:
            break
        try:
            delta = np.linalg.solve(_jacobian(x, target, consts), -residual)
        except np.linalg.LinAlgError:
            raise OutOfRangeError(f"Singular Newton system at {x} for target {target}.")
        factor = 1.0
        norm = np.linalg.norm(residual)
        while factor > 1e-6:
            candidate = x + factor*delta
            if 0 <= candidate[1] < 1:
                new_residual = _residual(candidate, target, consts)
                if np.linalg.norm(new_residual) < norm:
                    break
            factor *= damping
        else:
            break
        x, residual = candidate, new_residual
    params = CMVTripleParams(*[float(c) for c in x])
    if not (0 <= params.v2 < 1):
        raise OutOfRangeError(f"Newton iteration left v2 in [0,1): {params}.")
    error = _distance(cmvTripleProduct(params, consts), target)
    if error >= tol:
        raise OutOfRangeError(f"Newton iteration did not reach the target (error {error}); "
              f"target lies outside the attained region.")
    return params

############ Range of the free part
def gRangeProbe(consts:CMVConstants, v2:float, grid:int=cn.D_PROBE_GRID)->GRangeProbe:
    """Samples g(phi1, phi3) = freePart over a grid and reports the radius diagnostics.
    With lam = v/v2, the phi3-orbit for fixed phi1 is a circle of radius
    v v2 r(psi), r(psi) = sqrt(1 + lam^2 + 2 lam cos psi), psi = phi1 - 2 theta - phi.

    Args:
        consts (CMVConstants)
        v2 (float): in (0, 1)
        grid (int): samples per angle (>= 256)

    Returns:
        GRangeProbe
    """
    if grid < 256:
        raise InvalidInputError(f"Range probe needs grid >= 256, got {grid}.")
    if not (0 < v2 < 1):
        raise InvalidInputError(f"v2 must lie in (0,1), got {v2}.")
    angle_arr = 2*np.pi*np.arange(grid)/grid
    phi1_arr, phi3_arr = np.meshgrid(angle_arr, angle_arr, indexing="ij")
    points = freePart(CMVTripleParams(phi1_arr, v2, phi3_arr), consts).ravel()
    lam = consts.v/v2
    radius_arr = radiusFunction(angle_arr, lam)
    opposite_arr = radiusFunction(angle_arr + np.pi, lam)
    sum_arr = radius_arr + opposite_arr
    radius_df = pd.DataFrame({"phi1": angle_arr, "r": radius_arr, "r_opposite": opposite_arr,
          "sum": sum_arr})
    idx = int(np.argmin(sum_arr))
    return GRangeProbe(points=points, radius_df=radius_df, min_radius_sum=float(sum_arr[idx]),
          min_sum_phi1=float(angle_arr[idx]), has_hole=hasHole(points, grid//8), lam=lam,
          normalization_mismatch=normalizationMismatch(v2, consts))

def radiusFunction(phi1, lam:float):
    return np.sqrt(1 + lam**2 + 2*lam*np.cos(phi1))

def hasHole(points:np.ndarray, num_pixel:int)->bool:
    """Rasterizes a planar point cloud and reports whether its closure encloses empty pixels."""
    x_arr, y_arr = np.real(points), np.imag(points)
    x_min, x_max, y_min, y_max = x_arr.min(), x_arr.max(), y_arr.min(), y_arr.max()
    span = max(x_max - x_min, y_max - y_min, 1e-15)
    col_arr = np.minimum(((x_arr - x_min)/span*num_pixel).astype(int), num_pixel - 1)
    row_arr = np.minimum(((y_arr - y_min)/span*num_pixel).astype(int), num_pixel - 1)
    image = np.zeros((num_pixel, num_pixel), dtype=bool)
    image[row_arr, col_arr] = True
    image = ndimage.binary_dilation(image)
    filled = ndimage.binary_fill_holes(image)
    return bool(np.any(filled & ~image))
