'''Local conjugacies that project a perturbed cocycle back into its matrix class.

A constant class-valued cocycle A is perturbed to B on an arc K. Fibers T^j c with c in K
are regrouped into a product of m factors (m = 3 for the Szego class and the Jacobi class
with non-zero trace, m = 4 for the trace-zero Jacobi case) and factored back into the class.
This yields a class-valued Phi and a conjugacy Psi with Psi(Tw) B(w) Psi(w)^{-1} = Phi(w).
'''

import GapLab.constants as cn # type: ignore
from GapLab.cmv_projection import (CMVConstants, SzegoClassElem, cmvTripleInverse,  # type: ignore
      classError)
from GapLab.cocycle import CocycleMap # type: ignore
from GapLab.dynamics import TorusPoint # type: ignore
from GapLab.errors import InvalidInputError, OutOfRangeError, PreconditionError # type: ignore
from GapLab.jacobi_projection import (JacobiClassElem, jacobiTripleInverse,  # type: ignore
      jacobiQuadFactorize, shapeError)
from GapLab.matrices import Mat2, Mat2H # type: ignore
from GapLab import utils # type: ignore

import numpy as np # type: ignore
from scipy import linalg # type: ignore
from typing import Dict, List, Optional, Tuple

CASE_CMV = "cmv"
CASE_JACOBI_TRIPLE = "jacobi_triple"
CASE_JACOBI_QUAD = "jacobi_quad"
CONSTANT_TOL = 1e-12
TRACE_ZERO_TOL = 1e-10


def defaultArc(alpha:float, num_factor:int=3)->Tuple[float, float]:
    """[0, min(alpha, 1-alpha)/3), shortened so that K and T^j K are disjoint for j < num_factor."""
    length = min(alpha, 1 - alpha)/3
    for j in range(2, num_factor):
        length = min(length, float(utils.circularDistance(j*alpha, 0.0))/3)
    return (0.0, length)

def _bump(phase_arr:np.ndarray, support:Tuple[float, float])->np.ndarray:
    """Smooth bump with peak 1 on the arc support, zero outside."""
    start, end = support
    length = end - start
    if not (0 < length < 1):
        raise InvalidInputError(f"Bump support must have length in (0,1), got {length}.")
    u_arr = utils.frac(np.asarray(phase_arr, dtype=float) - start)/length
    inside_arr = (u_arr > 0) & (u_arr < 1)
    s_arr = np.where(inside_arr, 2*u_arr - 1, 0.0)
    with np.errstate(divide="ignore"):
        value_arr = np.where(inside_arr, np.exp(1 - 1/(1 - s_arr**2)), 0.0)
    return value_arr

def makeBumpPerturbation(cocycle:CocycleMap, arc:Tuple[float, float], size:float=cn.D_BUMP_SIZE,
        support:Optional[Tuple[float, float]]=None, seed:int=cn.D_SEED)->CocycleMap:
    """B(w) = expm(size*bump(w)*X) A(w) for a random unit Lie-algebra element X.

    Args:
        cocycle (CocycleMap): the unperturbed map A
        arc (tuple): the arc K as (start, end)
        size (float): perturbation size
        support (tuple): support of the bump; defaults to the middle half of K
        seed (int): seed of the Lie-algebra direction

    Returns:
        CocycleMap
    """
    start, end = arc
    if support is None:
        length = end - start
        support = (start + length/4, start + 3*length/4)
    rng = np.random.default_rng(seed)
    if cocycle.kind == cn.SU11:
        x = rng.normal()
        w = complex(rng.normal(), rng.normal())
        generator = np.array([[1j*x, w], [np.conj(w), -1j*x]])
    else:
        x, y, z = rng.normal(size=3)
        generator = np.array([[x, y], [z, -x]])
    generator = generator/np.linalg.norm(generator)
    ##
    def matrixFn(orbit_arr, epsilon=0.0):
        arr = cocycle.evaluateArray(orbit_arr, epsilon)
        arr = np.array(arr, dtype=np.result_type(arr, generator))
        phase_arr = orbit_arr[:, 0] if np.ndim(orbit_arr) == 2 else orbit_arr
        bump_arr = _bump(phase_arr, support)
        for idx in np.nonzero(bump_arr)[0]:
            arr[idx] = linalg.expm(size*bump_arr[idx]*generator) @ arr[idx]
        return arr
    ##
    return CocycleMap(cocycle.base, matrixFn, kind=cocycle.kind,
          is_homotopy_const=cocycle.is_homotopy_const, branch_center=cocycle.branch_center,
          description=cocycle.description + f" (bump {size})")

def conjugacyArc(original:CocycleMap)->Tuple[float, float]:
    """Default K for a constant class-valued cocycle: four factors for trace-zero Jacobi
    elements, three otherwise."""
    value_arr = original.evaluateArray(original.base.gridArray(1))[0]
    num_factor = 3
    if (original.kind == cn.SL2R) and (abs(np.real(value_arr[0, 0] + value_arr[1, 1])) < TRACE_ZERO_TOL):
        num_factor = 4
    return defaultArc(original.base.alpha, num_factor=num_factor)


class LocalConjugacy(object):

    def __init__(self, original:CocycleMap, perturbed:CocycleMap, arc:Tuple[float, float],
            grid:int=cn.D_CONJUGACY_GRID):
        """Projection of a perturbation supported in arc back into the class of original.

        Args:
            original (CocycleMap): constant class-valued cocycle A
            perturbed (CocycleMap): B, equal to A off the arc
            arc (tuple): (start, end) of K in the first coordinate
            grid (int): size of the tabulated grid
        """
        self.original = original
        self.perturbed = perturbed
        self.base = original.base
        self.arc = (float(arc[0]), float(arc[1]))
        self.arc_length = float(arc[1] - arc[0])
        if not (0 < self.arc_length < 1):
            raise InvalidInputError(f"Arc length must lie in (0,1), got {self.arc_length}.")
        self.grid = grid
        self.value_arr = original.evaluateArray(self.base.gridArray(1))[0]
        self._classify()
        self._checkDisjoint()
        self._checkSupport()
        self.factor_dct:Dict[tuple, List[np.ndarray]] = {}
        self._tabulate()

    ############ Setup
    def _classify(self):
        grid_value_arr = self.original.evaluateArray(self.base.gridArray(cn.D_TRIG_GRID))
        if np.max(np.abs(grid_value_arr - self.value_arr)) > CONSTANT_TOL:
            raise InvalidInputError("The unperturbed cocycle must be a constant class element.")
        if self.original.kind == cn.SU11:
            mat = Mat2H.fromArray(self.value_arr)
            elem = SzegoClassElem.fromMat2H(mat, float(np.angle(mat.a)))
            self.case = CASE_CMV
            self.consts = CMVConstants(elem.theta, elem.phi, elem.v)
            self.num_factor = 3
        else:
            elem = JacobiClassElem.fromMat2(Mat2.fromArray(self.value_arr))
            self.scale = elem.a
            if abs(elem.t) < TRACE_ZERO_TOL:
                self.case = CASE_JACOBI_QUAD
                self.num_factor = 4
            else:
                self.case = CASE_JACOBI_TRIPLE
                self.num_factor = 3
        self.class_elem = elem

    def _checkDisjoint(self):
        for j in range(1, self.num_factor):
            distance = float(utils.circularDistance(j*self.base.alpha, 0.0))
            if distance < self.arc_length:
                raise PreconditionError(f"K and T^{j}K intersect: arc length {self.arc_length} "
                      f"exceeds ||{j} alpha|| = {distance}.")

    def _checkSupport(self):
        point_arr = self.base.gridArray(self.grid)
        outside_arr = ~self.inArc(point_arr)
        difference_arr = np.abs(self.perturbed.evaluateArray(point_arr[outside_arr])
              - self.original.evaluateArray(point_arr[outside_arr]))
        if difference_arr.size > 0 and np.max(difference_arr) > CONSTANT_TOL:
            raise PreconditionError(f"Perturbation differs from the original off K by {np.max(difference_arr)}.")

    ############ Pointwise construction
    def inArc(self, point_arr)->np.ndarray:
        point_arr = np.asarray(point_arr, dtype=float)
        phase_arr = point_arr[..., 0] if point_arr.ndim == 2 else point_arr
        return utils.frac(phase_arr - self.arc[0]) < self.arc_length

    def _shift(self, point:TorusPoint, num:int)->TorusPoint:
        for _ in range(abs(num)):
            point = self.base.step(point) if num > 0 else self.base.inverseStep(point)
        return point

    def _value(self, cocycle:CocycleMap, point:TorusPoint)->np.ndarray:
        return cocycle.evaluateArray(self.base.orbitArray(point, 1))[0]

    def _pointInArc(self, point:TorusPoint)->bool:
        return bool(utils.frac(point[0] - self.arc[0]) < self.arc_length)

    def _jacobiFactor(self, parameter:float)->np.ndarray:
        return JacobiClassElem(self.scale, parameter).toMat2().toArray()

    def factors(self, center:TorusPoint)->List[np.ndarray]:
        """Class factors at T^{-1}c, c, ..., T^{m-2}c for a center c in K."""
        key = center.coords
        if key in self.factor_dct:
            return self.factor_dct[key]
        product_arr = np.identity(2)
        for j in range(-1, self.num_factor - 1):
            product_arr = self._value(self.perturbed, self._shift(center, j)) @ product_arr
        try:
            if self.case == CASE_CMV:
                params = cmvTripleInverse(Mat2H.fromArray(product_arr), self.consts)
                elems = [SzegoClassElem(self.consts.theta, params.phi1, self.consts.v),
                      SzegoClassElem(self.consts.theta, self.consts.phi, params.v2),
                      SzegoClassElem(self.consts.theta, params.phi3, self.consts.v)]
                result = [e.toMat2H().toArray() for e in elems]
            elif self.case == CASE_JACOBI_TRIPLE:
                params = jacobiTripleInverse(Mat2.fromArray(product_arr), *([self.scale]*3))
                result = [self._jacobiFactor(t) for t in params]
            else:
                quad = jacobiQuadFactorize(Mat2.fromArray(product_arr), *([self.scale]*4))
                result = [self._jacobiFactor(E) for E in [quad.E1, quad.E2, quad.E3, quad.E4]]
        except OutOfRangeError as exp:
            raise OutOfRangeError(f"Inverse failed at w={center.coords}: {exp}")
        self.factor_dct[key] = result
        return result

    def phi(self, omega)->np.ndarray:
        """Projected cocycle Phi(w)."""
        point = self.base.makePoint(omega)
        for j in range(-1, self.num_factor - 1):
            center = self._shift(point, -j)
            if self._pointInArc(center):
                return self.factors(center)[j + 1]
        return self._value(self.original, point)

    def psi(self, omega)->np.ndarray:
        """Conjugacy Psi(w): Psi(y) = Phi(T^{-1}y) Psi(T^{-1}y) B(T^{-1}y)^{-1} on
        K, ..., T^{m-2}K and the identity elsewhere."""
        point = self.base.makePoint(omega)
        for j in range(0, self.num_factor - 1):
            center = self._shift(point, -j)
            if self._pointInArc(center):
                factors = self.factors(center)
                result = np.identity(2, dtype=factors[0].dtype)
                for idx in range(j + 1):
                    x = self._shift(center, idx - 1)
                    result = factors[idx] @ result @ np.linalg.inv(self._value(self.perturbed, x))
                return result
        return np.identity(2, dtype=self.value_arr.dtype)

    ############ Grid tables
    def _tabulate(self):
        point_arr = self.base.gridArray(self.grid)
        self.phi_arr = np.array([self.phi(p) for p in point_arr])
        self.psi_arr = np.array([self.psi(p) for p in point_arr])
        residuals = []
        class_errors = []
        for point, phi_value, psi_value in zip(point_arr, self.phi_arr, self.psi_arr):
            point = self.base.makePoint(point)
            lhs = self.psi(self.base.step(point)) @ self._value(self.perturbed, point) \
                  @ np.linalg.inv(psi_value)
            residuals.append(np.max(np.abs(lhs - phi_value)))
            class_errors.append(self.classErrorOf(phi_value))
        self.max_residual = float(np.max(residuals))
        self.max_class_error = float(np.max(class_errors))
        mid_arr = (np.arange(self.grid) + 0.5)/self.grid
        interpolation_errors = [np.max(np.abs(self.interpolatePhi(w) - self.phi(w))) for w in mid_arr]
        self.interpolation_error = float(np.max(interpolation_errors))

    def classErrorOf(self, value_arr:np.ndarray)->float:
        """Distance of a Phi value from its class."""
        if self.case == CASE_CMV:
            mat = Mat2H.fromArray(value_arr, is_check=False)
            shape = max(abs(value_arr[1, 1] - np.conj(value_arr[0, 0])),
                  abs(value_arr[1, 0] - np.conj(value_arr[0, 1])))
            return max(classError(mat, self.consts.theta), float(shape))
        return shapeError(Mat2.fromArray(value_arr, is_check=False))

    def _interpolate(self, table_arr:np.ndarray, omega:float)->np.ndarray:
        position = utils.frac(float(omega))*self.grid
        idx = int(np.floor(position))
        weight = position - idx
        return (1 - weight)*table_arr[idx % self.grid] + weight*table_arr[(idx + 1) % self.grid]

    def interpolatePhi(self, omega:float)->np.ndarray:
        """Linear interpolation of the Phi table in the first coordinate."""
        return self._interpolate(self.phi_arr, omega)

    def interpolatePsi(self, omega:float)->np.ndarray:
        return self._interpolate(self.psi_arr, omega)

    def toDct(self)->dict:
        return utils.toJSONable(dict(case=self.case, arc=list(self.arc), grid=self.grid,
              phi=self.phi_arr, psi=self.psi_arr, max_residual=self.max_residual,
              max_class_error=self.max_class_error, interpolation_error=self.interpolation_error))


def buildLocalConjugacy(original:CocycleMap, perturbed:CocycleMap,
        arc:Optional[Tuple[float, float]]=None, grid:int=cn.D_CONJUGACY_GRID)->LocalConjugacy:
    """Builds Phi and Psi on a grid.

    Args:
        original (CocycleMap): constant Szego-class or Jacobi-class cocycle
        perturbed (CocycleMap): equal to original off the arc
        arc (tuple): K; defaults to defaultArc for the case
        grid (int): table size

    Returns:
        LocalConjugacy
    """
    if arc is None:
        arc = conjugacyArc(original)
    return LocalConjugacy(original, perturbed, arc, grid=grid)
