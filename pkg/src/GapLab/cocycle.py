'''Cocycle maps over a base dynamics: iteration, fibered rotation number and Lyapunov exponent.'''

import GapLab.constants as cn # type: ignore
from GapLab.dynamics import BaseDynamics, TorusPoint # type: ignore
from GapLab.errors import InvalidInputError, GapLabWarning # type: ignore
from GapLab.matrices import Mat2, Mat2H, sl2rRotationData, stackInverse # type: ignore
from GapLab import utils # type: ignore

import collections
from numba import njit # type: ignore
import numpy as np # type: ignore
from typing import Callable, Optional, Union
import warnings

TWO_PI = 2*np.pi

RotationResult = collections.namedtuple('RotationResult',
      ['rho', 'stderr', 'is_converged', 'verdict', 'num_iteration', 'block_arr'])
SweepRow = collections.namedtuple('SweepRow', ['E', 'rho', 'rho_stderr', 'rho_verdict', 'lyapunov'])


class IterateResult(collections.namedtuple('IterateResult', ['matrix_arr', 'log_scale', 'kind'])):
    """Product A^n(w) = matrix_arr * exp(log_scale)."""

    def toMat(self)->Union[Mat2, Mat2H]:
        """Structured matrix; only available when no renormalization happened."""
        if self.log_scale != 0:
            raise InvalidInputError(f"Product was renormalized by exp({self.log_scale}).")
        if self.kind == cn.SU11:
            return Mat2H.fromArray(self.matrix_arr)
        return Mat2.fromArray(self.matrix_arr)

    @property
    def log_norm(self)->float:
        return float(np.log(np.linalg.norm(self.matrix_arr, 2)) + self.log_scale)


class CocycleMap(object):

    def __init__(self, base:BaseDynamics, matrix_fn:Callable, kind:str=cn.SL2R,
            is_homotopy_const:bool=True, branch_center:float=0.0, description:str=""):
        """Matrix valued map over a base.

        Args:
            base (BaseDynamics): the base map T
            matrix_fn (Callable): (orbit_arr, epsilon) -> array of shape (n, 2, 2).
                orbit_arr is a BaseDynamics orbit array; epsilon is the imaginary phase shift
            kind (str): cn.SL2R or cn.SU11
            is_homotopy_const (bool): map is homotopic to a constant
            branch_center (float): angle (radians) around which arg(a) of the SU(1,1) form
                is taken when lifting the projective dynamics
            description (str): free text carried into outputs
        """
        if not kind in [cn.SL2R, cn.SU11]:
            raise InvalidInputError(f"Unknown cocycle kind {kind}.")
        self.base = base
        self.matrix_fn = matrix_fn
        self.kind = kind
        self.is_homotopy_const = is_homotopy_const
        self.branch_center = branch_center
        self.description = description

    @classmethod
    def constant(cls, base:BaseDynamics, mat:Union[Mat2, Mat2H], **kwargs)->'CocycleMap':
        arr = mat.toArray()
        kind = cn.SU11 if isinstance(mat, Mat2H) else cn.SL2R
        ##
        def matrixFn(orbit_arr, epsilon=0.0):
            return np.broadcast_to(arr, (len(orbit_arr), 2, 2)).copy()
        ##
        if isinstance(mat, Mat2H):
            kwargs.setdefault("branch_center", float(np.angle(mat.a)))
        else:
            a_arr, _ = sl2rRotationData(arr[None, :, :])
            kwargs.setdefault("branch_center", float(np.angle(a_arr[0])))
        return cls(base, matrixFn, kind=kind, **kwargs)

    def evaluateArray(self, orbit_arr:np.ndarray, epsilon:float=0.0)->np.ndarray:
        return np.asarray(self.matrix_fn(orbit_arr, epsilon))

    def evaluate(self, omega)->Union[Mat2, Mat2H]:
        """Structured value A(w)."""
        point = self.base.makePoint(omega)
        orbit_arr = self.base.orbitArray(point, 1)
        arr = self.evaluateArray(orbit_arr)[0]
        if self.kind == cn.SU11:
            return Mat2H.fromArray(arr)
        return Mat2.fromArray(arr)

    def checkStructure(self, num_point:int=cn.D_TRIG_GRID)->float:
        """Largest structural-invariant violation over a uniform grid."""
        arr = self.evaluateArray(self.base.gridArray(num_point))
        det_arr = arr[:, 0, 0]*arr[:, 1, 1] - arr[:, 0, 1]*arr[:, 1, 0]
        error = float(np.max(np.abs(det_arr - 1)))
        if self.kind == cn.SU11:
            shape_err = np.max(np.abs(arr[:, 1, 1] - np.conj(arr[:, 0, 0])))
            error = max(error, float(shape_err))
        else:
            error = max(error, float(np.max(np.abs(np.imag(arr)))))
        return error

    def rotationData(self, orbit_arr:np.ndarray):
        """Lifted argument of a and the ratio b/a of the SU(1,1) form along an orbit."""
        arr = self.evaluateArray(orbit_arr)
        if self.kind == cn.SU11:
            a_arr, b_arr = arr[:, 0, 0], arr[:, 0, 1]
        else:
            a_arr, b_arr = sl2rRotationData(np.real(arr))
        arg_arr = self.branch_center + np.angle(a_arr*np.exp(-1j*self.branch_center))
        return arg_arr, b_arr/a_arr

    def conjugate(self, conjugator_fn:Callable)->'CocycleMap':
        """The cocycle Z(Tw) A(w) Z(w)^{-1} for a matrix map Z with the signature of matrix_fn."""
        ##
        def matrixFn(orbit_arr, epsilon=0.0):
            z_arr = np.asarray(conjugator_fn(orbit_arr, epsilon))
            z_next_arr = np.asarray(conjugator_fn(self.base.stepArray(orbit_arr), epsilon))
            return z_next_arr @ self.evaluateArray(orbit_arr, epsilon) @ stackInverse(z_arr)
        ##
        return CocycleMap(self.base, matrixFn, kind=self.kind,
              is_homotopy_const=self.is_homotopy_const, branch_center=self.branch_center,
              description=self.description + " (conjugated)")


############ Kernels
@njit
def _liftIncrements(arg_arr, ratio_re_arr, ratio_im_arr, psi0):
    """Per-step advance (in turns) of the projective orbit on the unit circle.
    The circle point e^{i psi} moves to e^{i psi} q/conj(q) with q = a(1 + (b/a) e^{-i psi})."""
    num = arg_arr.shape[0]
    inc_arr = np.empty(num)
    psi = psi0
    for idx in range(num):
        cos_psi = np.cos(psi)
        sin_psi = np.sin(psi)
        x = 1.0 + ratio_re_arr[idx]*cos_psi + ratio_im_arr[idx]*sin_psi
        y = ratio_im_arr[idx]*cos_psi - ratio_re_arr[idx]*sin_psi
        step = arg_arr[idx] + np.arctan2(y, x)
        inc_arr[idx] = step
        psi = psi + 2.0*step
        psi = psi - 2.0*np.pi*np.floor(psi/(2.0*np.pi))
    return inc_arr/(2.0*np.pi)

@njit
def _renormalizedProduct(mat_arr, overflow_norm):
    """Ordered product mat_arr[n-1] ... mat_arr[0] with a separate log-scale."""
    p00 = 1.0 + 0.0j
    p01 = 0.0j
    p10 = 0.0j
    p11 = 1.0 + 0.0j
    log_scale = 0.0
    for idx in range(mat_arr.shape[0]):
        m = mat_arr[idx]
        q00 = m[0, 0]*p00 + m[0, 1]*p10
        q01 = m[0, 0]*p01 + m[0, 1]*p11
        q10 = m[1, 0]*p00 + m[1, 1]*p10
        q11 = m[1, 0]*p01 + m[1, 1]*p11
        norm = np.sqrt(abs(q00)**2 + abs(q01)**2 + abs(q10)**2 + abs(q11)**2)
        if norm > overflow_norm:
            q00 /= norm
            q01 /= norm
            q10 /= norm
            q11 /= norm
            log_scale += np.log(norm)
        p00, p01, p10, p11 = q00, q01, q10, q11
    result = np.empty((2, 2), dtype=np.complex128)
    result[0, 0] = p00
    result[0, 1] = p01
    result[1, 0] = p10
    result[1, 1] = p11
    return result, log_scale

@njit
def _logNorm(mat_arr):
    """log of the spectral norm of the ordered product, renormalizing every step."""
    p00 = 1.0 + 0.0j
    p01 = 0.0j
    p10 = 0.0j
    p11 = 1.0 + 0.0j
    log_scale = 0.0
    for idx in range(mat_arr.shape[0]):
        m = mat_arr[idx]
        q00 = m[0, 0]*p00 + m[0, 1]*p10
        q01 = m[0, 0]*p01 + m[0, 1]*p11
        q10 = m[1, 0]*p00 + m[1, 1]*p10
        q11 = m[1, 0]*p01 + m[1, 1]*p11
        norm = np.sqrt(abs(q00)**2 + abs(q01)**2 + abs(q10)**2 + abs(q11)**2)
        p00 = q00/norm
        p01 = q01/norm
        p10 = q10/norm
        p11 = q11/norm
        log_scale += np.log(norm)
    frobenius_sq = abs(p00)**2 + abs(p01)**2 + abs(p10)**2 + abs(p11)**2
    det_abs = abs(p00*p11 - p01*p10)
    disc = max(frobenius_sq**2 - 4.0*det_abs**2, 0.0)
    spectral_sq = 0.5*(frobenius_sq + np.sqrt(disc))
    return 0.5*np.log(spectral_sq) + log_scale


############ Operations
def iterate(cocycle:CocycleMap, omega, n:int)->IterateResult:
    """A^n(w) = A(T^{n-1}w) ... A(w) for n > 0; identity for n = 0;
    A^{-1}(T^n w) ... A^{-1}(T^{-1}w) for n < 0.

    Args:
        cocycle (CocycleMap)
        omega: base point
        n (int): iterate count, any sign

    Returns:
        IterateResult
    """
    point = cocycle.base.makePoint(omega)
    if n == 0:
        return IterateResult(matrix_arr=np.identity(2), log_scale=0.0, kind=cocycle.kind)
    if n > 0:
        mat_arr = cocycle.evaluateArray(cocycle.base.orbitArray(point, n))
    else:
        # Points T^{-1}w, T^{-2}w, ..., T^{n}w in the order they are applied
        orbit_arr = cocycle.base.orbitArray(point, -n, start=n)[::-1]
        mat_arr = stackInverse(cocycle.evaluateArray(orbit_arr))
    product_arr, log_scale = _renormalizedProduct(np.ascontiguousarray(mat_arr, dtype=np.complex128),
          cn.OVERFLOW_NORM)
    if cocycle.kind == cn.SL2R:
        product_arr = np.real(product_arr)
    return IterateResult(matrix_arr=product_arr, log_scale=float(log_scale), kind=cocycle.kind)

def liftIncrements(cocycle:CocycleMap, omega0, n:int, start:int=0, psi0:float=0.0)->np.ndarray:
    """Per-step rotation increments (turns) along the orbit T^{start}w, ..., T^{start+n-1}w."""
    orbit_arr = cocycle.base.orbitArray(omega0, n, start=start)
    arg_arr, ratio_arr = cocycle.rotationData(orbit_arr)
    return _liftIncrements(np.ascontiguousarray(arg_arr, dtype=float),
          np.ascontiguousarray(ratio_arr.real), np.ascontiguousarray(ratio_arr.imag), psi0)

def smoothWeights(n:int)->np.ndarray:
    """Bump weights exp(-1/(t(1-t))) on (0,1), normalized to sum 1."""
    t_arr = np.arange(1, n + 1)/(n + 1)
    weight_arr = np.exp(-1/(t_arr*(1 - t_arr)))
    return weight_arr/np.sum(weight_arr)

def rotationNumber(cocycle:CocycleMap, omega0=0.0, n:int=cn.D_N_ROT,
        burn_in:int=cn.D_BURN_IN, num_block:int=cn.D_NUM_BLOCK,
        is_weighted:bool=True)->RotationResult:
    """Fibered rotation number in [0, 1) from the lifted projective dynamics.

    Args:
        cocycle (CocycleMap): must be homotopic to a constant
        omega0: starting base point
        n (int): number of averaged iterates (>= 1000)
        burn_in (int): iterates discarded before averaging
        num_block (int): blocks for the standard error
        is_weighted (bool): use the smooth-weight average for the estimate

    Returns:
        RotationResult: verdict is Inconclusive when the two half-sample averages disagree;
            rho then holds the partial estimate
    """
    if not cocycle.is_homotopy_const:
        raise InvalidInputError("Rotation number needs a cocycle homotopic to a constant.")
    if n < 1000:
        raise InvalidInputError(f"Rotation number needs n >= 1000, got {n}.")
    inc_arr = liftIncrements(cocycle, omega0, n + burn_in)[burn_in:]
    if is_weighted:
        raw_rho = float(np.dot(smoothWeights(n), inc_arr))
    else:
        raw_rho = float(np.mean(inc_arr))
    block_size = n//num_block
    block_arr = np.mean(inc_arr[:block_size*num_block].reshape(num_block, block_size), axis=1)
    stderr = float(np.std(block_arr, ddof=1)/np.sqrt(num_block))
    half = num_block//2
    disagreement = abs(np.mean(block_arr[:half]) - np.mean(block_arr[half:]))
    is_converged = bool(disagreement <= cn.D_CONVERGENCE_SIGMA*stderr + 1e-12)
    if not is_converged:
        warnings.warn(f"Rotation number for {cocycle.description} did not converge: "
              f"half-sample disagreement {disagreement} vs stderr {stderr}.", GapLabWarning)
    rho = utils.frac(raw_rho)
    # Folds values just below an integer (e.g. -1e-12) back to 0
    if 1 - rho < 1e-9:
        rho = 0.0
    verdict = cn.CONVERGED if is_converged else cn.INCONCLUSIVE
    return RotationResult(rho=rho, stderr=stderr, is_converged=is_converged, verdict=verdict,
          num_iteration=n, block_arr=block_arr)

def lyapunovExponent(cocycle:CocycleMap, n:int=cn.D_N_LYAPUNOV,
        omega_samples:int=cn.D_LYAPUNOV_SAMPLES, epsilon:float=0.0)->float:
    """Average of (1/n) log||A^n(w)|| over equidistributed starting phases.

    Args:
        cocycle (CocycleMap)
        n (int): iterate count (>= 1000)
        omega_samples (int): number of starting phases j/omega_samples
        epsilon (float): imaginary phase shift; 0 evaluates on the circle

    Returns:
        float
    """
    if n < 1000:
        raise InvalidInputError(f"Lyapunov exponent needs n >= 1000, got {n}.")
    start_arr = cocycle.base.gridArray(omega_samples)
    values:list = []
    for start in start_arr:
        orbit_arr = cocycle.base.orbitArray(start, n)
        mat_arr = np.ascontiguousarray(cocycle.evaluateArray(orbit_arr, epsilon), dtype=np.complex128)
        values.append(_logNorm(mat_arr)/n)
    return float(np.mean(values))
