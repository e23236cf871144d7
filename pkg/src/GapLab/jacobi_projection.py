'''Factorizations in the Jacobi class J = {(1/a)[[t, -1], [a^2, 0]]}.'''

import GapLab.constants as cn # type: ignore
from GapLab.errors import (InvalidInputError, SingularInputError, PreconditionError,  # type: ignore
      OutOfRangeError, ComputationalError)
from GapLab.matrices import Mat2 # type: ignore

import collections
import numpy as np # type: ignore
from scipy import optimize # type: ignore
from typing import List, Optional, Sequence

JacobiTripleParams = collections.namedtuple('JacobiTripleParams', ['t1', 't2', 't3'])
QuadFactorization = collections.namedtuple('QuadFactorization',
      ['E1', 'E2', 'E3', 'E4', 'phi', 'scale', 'roots'])


class JacobiClassElem(collections.namedtuple('JacobiClassElem', ['a', 't'])):

    def toMat2(self)->Mat2:
        if self.a <= 0:
            raise InvalidInputError(f"Jacobi class needs a > 0, got {self.a}.")
        return Mat2(self.t/self.a, -1/self.a, self.a, 0.0)

    @classmethod
    def fromMat2(cls, mat:Mat2, tol:float=cn.DET_TOL)->'JacobiClassElem':
        error = shapeError(mat)
        if (error > tol) or (mat.m21 <= 0):
            raise InvalidInputError(f"Matrix does not have the Jacobi shape: {mat}.")
        return cls(mat.m21, mat.m11*mat.m21)


def shapeError(mat:Mat2)->float:
    """max(|m22|, |m12 m21 + 1|); zero exactly on the Jacobi class."""
    return float(max(abs(mat.m22), abs(mat.m12*mat.m21 + 1)))

def _checkScales(scales:Sequence[float]):
    for a in scales:
        if not (a > 0) or not np.isfinite(a):
            raise InvalidInputError(f"Off-diagonal scales must be positive, got {list(scales)}.")

def jacobiTripleProduct(params:JacobiTripleParams, a1:float, a2:float, a3:float)->Mat2:
    """A3 A2 A1 with A_j = (1/a_j)[[t_j, -1], [a_j^2, 0]]."""
    _checkScales([a1, a2, a3])
    mats = [JacobiClassElem(a, t).toMat2() for a, t in zip([a1, a2, a3], params)]
    return mats[2] @ mats[1] @ mats[0]

def jacobiTripleInverse(target:Mat2, a1:float, a2:float, a3:float,
        singular_tol:float=cn.D_SINGULAR_TOL)->JacobiTripleParams:
    """Closed-form (t1, t2, t3) with A3 A2 A1 = target = [[p, q], [r, s]].

    Args:
        target (Mat2): unit determinant, |s| > singular_tol
        a1, a2, a3 (float): positive off-diagonal scales

    Returns:
        JacobiTripleParams
    """
    _checkScales([a1, a2, a3])
    if abs(target.det - 1) >= cn.DET_TOL:
        raise InvalidInputError(f"Target must have unit determinant, got {target.det}.")
    q, r, s = target.m12, target.m21, target.m22
    if abs(s) <= singular_tol:
        raise SingularInputError(f"Lower-right entry s={s} is on the excluded set s = 0.")
    params = JacobiTripleParams(t1=-(r + a1*a3/a2)/s, t2=-a1*a2*s/a3, t3=(a3**2*q - a2*a3/a1)/s)
    error = np.max(np.abs(jacobiTripleProduct(params, a1, a2, a3).toArray() - target.toArray()))
    if error >= 1e-10*max(1.0, target.norm()):
        raise ComputationalError(f"Triple reconstruction is off by {error} for {target}.")
    return params

def _quadProduct(Es:Sequence[float], scales:Sequence[float])->np.ndarray:
    result = np.identity(2)
    for E, a in zip(Es, scales):
        result = JacobiClassElem(a, E).toMat2().toArray() @ result
    return result

def jacobiQuadFactorize(target:Mat2, a1:float, a2:float, a3:float, a4:float,
        scale:Optional[float]=None, radius:float=cn.D_CASE1_RADIUS,
        num_scan:int=cn.D_CASE1_SCAN)->QuadFactorization:
    """(E1, E2, E3, E4) with A4 A3 A2 A1 = target for target near the identity.
    E3 = scale*phi where phi solves (scale*phi)^2 = |n| on [-1, 1] with the sign of n, and
    E2 = n/E3. Hence |E2| = |E3|, with E2 = E3 for n > 0 and E2 = -E3 for n < 0.

    Args:
        target (Mat2): I + [[p, q], [r, s]]
        a1, a2, a3, a4 (float): positive scales
        scale (float): defaults to ||target - I||^{1/2}
        radius (float): largest allowed ||target - I||
        num_scan (int): scan points for bracketing roots

    Returns:
        QuadFactorization
    """
    _checkScales([a1, a2, a3, a4])
    if abs(target.det - 1) >= cn.DET_TOL:
        raise InvalidInputError(f"Target must have unit determinant, got {target.det}.")
    offset_arr = target.toArray() - np.identity(2)
    distance = float(np.linalg.norm(offset_arr, 2))
    if distance >= radius:
        raise PreconditionError(f"||target - I|| = {distance} is not below {radius}.")
    _, q, r, s = offset_arr.ravel()
    n = a2**2 - (a1*a2*a3/a4)*(1 + s)
    if scale is None:
        scale = np.sqrt(distance)
    roots:List[float] = []
    if abs(n) < 1e-15:
        E3, E2, phi = 0.0, 0.0, 0.0
    else:
        if scale <= 0:
            raise OutOfRangeError(f"Scale must be positive when n={n} is non-zero.")
        ##
        def balance(x):
            return (scale*x)**2 - abs(n)
        ##
        grid_arr = np.linspace(-1, 1, num_scan)
        value_arr = balance(grid_arr)
        for idx in range(num_scan - 1):
            if value_arr[idx] == 0:
                roots.append(float(grid_arr[idx]))
            elif value_arr[idx]*value_arr[idx + 1] < 0:
                roots.append(float(optimize.brentq(balance, grid_arr[idx], grid_arr[idx + 1], xtol=1e-15)))
        if value_arr[-1] == 0:
            roots.append(float(grid_arr[-1]))
        primary = [x for x in roots if np.sign(x) == np.sign(n)]
        if len(primary) == 0:
            raise OutOfRangeError(f"No root of the balance equation in [-1, 1] for n={n}, scale={scale}.")
        phi = primary[0]
        E3 = scale*phi
        E2 = n/E3
    E1 = -(r + (a1*a4/(a2*a3))*E3)/(1 + s)
    E4 = (a4**2*q - (a3*a4/(a1*a2))*E2)/(1 + s)
    Es = [E1, E2, E3, E4]
    error = float(np.max(np.abs(_quadProduct(Es, [a1, a2, a3, a4]) - target.toArray())))
    if error >= 1e-8:
        raise ComputationalError(f"Quadruple reconstruction is off by {error}.")
    return QuadFactorization(E1=E1, E2=E2, E3=E3, E4=E4, phi=phi, scale=float(scale), roots=roots)
