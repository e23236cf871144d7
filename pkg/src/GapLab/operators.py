'''Jacobi and extended CMV operator families and their transfer-matrix cocycles.'''

import GapLab.constants as cn # type: ignore
from GapLab.cocycle import CocycleMap # type: ignore
from GapLab.dynamics import BaseDynamics # type: ignore
from GapLab.errors import InvalidInputError # type: ignore
from GapLab.trig_poly import TrigPoly # type: ignore

import numpy as np # type: ignore
from typing import Optional, Tuple, Union


def _phases(orbit_arr:np.ndarray)->np.ndarray:
    """Input of 1-d sampling functions: the first coordinate of each orbit point."""
    orbit_arr = np.asarray(orbit_arr, dtype=float)
    if orbit_arr.ndim == 2:
        return orbit_arr[:, 0]
    return orbit_arr

def _sample(poly:TrigPoly, phase_arr:np.ndarray, epsilon:float=0.0):
    if epsilon == 0:
        return poly.evaluate(phase_arr)
    return poly.evaluateComplex(phase_arr, epsilon)


class JacobiFamily(object):

    def __init__(self, a:TrigPoly, b:TrigPoly, base:Optional[BaseDynamics]=None,
            description:str=""):
        """Jacobi matrices with a_n = a(T^n w) and b_n = b(T^n w).

        Args:
            a (TrigPoly): off-diagonal sampling function, strictly positive
            b (TrigPoly): diagonal sampling function
            base (BaseDynamics): defaults to the golden-mean rotation
            description (str)
        """
        if base is None:
            base = BaseDynamics()
        a_min = a.minimum(cn.D_FAMILY_GRID)
        if a_min <= 0:
            raise InvalidInputError(f"Off-diagonal sampling function must be positive; minimum is {a_min}.")
        self.a = a
        self.b = b
        self.base = base
        self.description = description

    @property
    def is_free(self)->bool:
        return (self.a == TrigPoly.constant(1.0)) and self.b.is_zero

    def offDiagonal(self, orbit_arr:np.ndarray, epsilon:float=0.0):
        return _sample(self.a, _phases(orbit_arr), epsilon)

    def diagonal(self, orbit_arr:np.ndarray, epsilon:float=0.0):
        return _sample(self.b, _phases(orbit_arr), epsilon)

    def withDiagonal(self, b:TrigPoly)->'JacobiFamily':
        return JacobiFamily(self.a, b, base=self.base, description=self.description)

    def toDct(self)->dict:
        return dict(kind=cn.JACOBI, a=self.a.toDct(), b=self.b.toDct(), base=self.base.toDct(),
              description=self.description, is_free=self.is_free)

    def __repr__(self)->str:
        return f"JacobiFamily(a={self.a}, b={self.b}, base={self.base})"


class CMVFamily(object):

    def __init__(self, lam:Optional[float]=None, h:Optional[TrigPoly]=None,
            base:Optional[BaseDynamics]=None, v_re:Optional[TrigPoly]=None,
            v_im:Optional[TrigPoly]=None, description:str=""):
        """Extended CMV matrices with Verblunsky coefficients alpha_n = v(T^n w).
        Either v = lam*exp(i h) or v = v_re + i v_im.

        Args:
            lam (float): modulus in [0, 1)
            h (TrigPoly): phase function; defaults to 0
            base (BaseDynamics): defaults to the golden-mean rotation
            v_re (TrigPoly), v_im (TrigPoly): general form
            description (str)
        """
        if base is None:
            base = BaseDynamics()
        self.base = base
        self.description = description
        if lam is not None:
            if (v_re is not None) or (v_im is not None):
                raise InvalidInputError("Give either (lam, h) or (v_re, v_im), not both.")
            if not (0 <= lam < 1):
                raise InvalidInputError(f"lambda must lie in [0,1), got {lam}.")
            self.lam:Optional[float] = float(lam)
            self.h:Optional[TrigPoly] = h if h is not None else TrigPoly.constant(0.0)
            self.v_re:Optional[TrigPoly] = None
            self.v_im:Optional[TrigPoly] = None
        else:
            if (v_re is None) and (v_im is None):
                raise InvalidInputError("CMVFamily needs lam or (v_re, v_im).")
            self.lam = None
            self.h = None
            self.v_re = v_re if v_re is not None else TrigPoly.constant(0.0)
            self.v_im = v_im if v_im is not None else TrigPoly.constant(0.0)
        grid_arr = base.gridArray(cn.D_FAMILY_GRID)
        v_max = float(np.max(np.abs(self.verblunsky(grid_arr))))
        if v_max >= 1:
            raise InvalidInputError(f"Verblunsky coefficients must satisfy sup|v| < 1, got {v_max}.")

    @property
    def is_free(self)->bool:
        if self.lam is not None:
            return self.lam == 0
        return self.v_re.is_zero and self.v_im.is_zero  # type: ignore

    def verblunskyPair(self, orbit_arr:np.ndarray, epsilon:float=0.0)->Tuple[np.ndarray, np.ndarray]:
        """v and the analytic continuation of conj(v) at phases w + i*epsilon."""
        phase_arr = _phases(orbit_arr)
        if self.lam is not None:
            h_arr = _sample(self.h, phase_arr, epsilon)  # type: ignore
            return self.lam*np.exp(1j*h_arr), self.lam*np.exp(-1j*h_arr)
        re_arr = _sample(self.v_re, phase_arr, epsilon)  # type: ignore
        im_arr = _sample(self.v_im, phase_arr, epsilon)  # type: ignore
        return re_arr + 1j*im_arr, re_arr - 1j*im_arr

    def verblunsky(self, orbit_arr:np.ndarray)->np.ndarray:
        v_arr, _ = self.verblunskyPair(orbit_arr)
        return np.asarray(v_arr, dtype=complex)

    def withPhase(self, h:TrigPoly)->'CMVFamily':
        if self.lam is None:
            raise InvalidInputError("Phase perturbations need the (lam, h) form.")
        return CMVFamily(lam=self.lam, h=h, base=self.base, description=self.description)

    def toDct(self)->dict:
        dct:dict = dict(kind=cn.CMV, base=self.base.toDct(), description=self.description,
              is_free=self.is_free)
        if self.lam is not None:
            dct.update(lam=self.lam, h=self.h.toDct())  # type: ignore
        else:
            dct.update(v_re=self.v_re.toDct(), v_im=self.v_im.toDct())  # type: ignore
        return dct

    def __repr__(self)->str:
        if self.lam is not None:
            return f"CMVFamily(lam={self.lam}, h={self.h}, base={self.base})"
        return f"CMVFamily(v_re={self.v_re}, v_im={self.v_im}, base={self.base})"


def jacobiCocycleMap(family:JacobiFamily, E:float)->CocycleMap:
    """A(w) = (1/a(w)) [[E - b(w), -1], [a(w)^2, 0]].

    Args:
        family (JacobiFamily)
        E (float): energy

    Returns:
        CocycleMap
    """
    E = float(E)
    ##
    def matrixFn(orbit_arr, epsilon=0.0):
        a_arr = np.atleast_1d(family.offDiagonal(orbit_arr, epsilon))
        b_arr = np.atleast_1d(family.diagonal(orbit_arr, epsilon))
        if (epsilon == 0) and np.any(a_arr <= 0):
            raise InvalidInputError(f"Off-diagonal must be positive; found {np.min(a_arr)} at E={E}.")
        dtype = complex if epsilon != 0 else float
        arr = np.zeros((len(a_arr), 2, 2), dtype=dtype)
        arr[:, 0, 0] = (E - b_arr)/a_arr
        arr[:, 0, 1] = -1/a_arr
        arr[:, 1, 0] = a_arr
        return arr
    ##
    return CocycleMap(family.base, matrixFn, kind=cn.SL2R, is_homotopy_const=True,
          branch_center=np.pi/2, description=f"Jacobi cocycle at E={E}")

def _halfAngle(z:Union[complex, None], theta:Optional[float])->float:
    if theta is None:
        if z is None:
            raise InvalidInputError("Give the spectral parameter as z or theta.")
        if abs(abs(z) - 1) > 1e-12:
            raise InvalidInputError(f"Spectral parameter must be unimodular, got |z|={abs(z)}.")
        theta = float(np.angle(z))
    return float(np.mod(theta, 2*np.pi))

def szegoCocycleMap(family:CMVFamily, z:Optional[complex]=None, theta:Optional[float]=None)->CocycleMap:
    """S(w) = (1/rho(w)) [[z^{1/2}, -conj(v(w)) z^{-1/2}], [-v(w) z^{1/2}, z^{-1/2}]]
    with z^{1/2} = exp(i theta/2), theta in [0, 2 pi).

    Args:
        family (CMVFamily)
        z (complex): unimodular spectral parameter
        theta (float): alternative to z; z = exp(i theta)

    Returns:
        CocycleMap: SU(1,1)-valued
    """
    theta = _halfAngle(z, theta)
    half = np.exp(0.5j*theta)
    ##
    def matrixFn(orbit_arr, epsilon=0.0):
        v_arr, v_bar_arr = family.verblunskyPair(orbit_arr, epsilon)
        v_arr = np.atleast_1d(v_arr)
        v_bar_arr = np.atleast_1d(v_bar_arr)
        if (epsilon == 0) and np.any(np.abs(v_arr) >= 1):
            raise InvalidInputError(f"Verblunsky coefficient outside the unit disk at theta={theta}.")
        rho_arr = np.sqrt(1 - v_arr*v_bar_arr + 0j)
        if epsilon == 0:
            rho_arr = np.real(rho_arr)
        arr = np.empty((len(v_arr), 2, 2), dtype=complex)
        arr[:, 0, 0] = half/rho_arr
        arr[:, 0, 1] = -v_bar_arr/(half*rho_arr)
        arr[:, 1, 0] = -v_arr*half/rho_arr
        arr[:, 1, 1] = 1/(half*rho_arr)
        return arr
    ##
    return CocycleMap(family.base, matrixFn, kind=cn.SU11, is_homotopy_const=True,
          branch_center=theta/2, description=f"Szego cocycle at theta={theta}")

def jacobiRecurrenceResidual(family:JacobiFamily, E:float, omega0=0.0, n:int=100,
        u0:float=1.0, u_minus:float=0.0)->float:
    """Runs the cocycle on [u_0, a_{-1} u_{-1}] and returns the largest relative residual of
    a_k u_{k+1} + b_k u_k + a_{k-1} u_{k-1} = E u_k for k = 0..n-1."""
    cocycle = jacobiCocycleMap(family, E)
    orbit_arr = family.base.orbitArray(omega0, n + 1, start=-1)
    a_arr = family.offDiagonal(orbit_arr)
    b_arr = family.diagonal(orbit_arr)
    mat_arr = cocycle.evaluateArray(orbit_arr[1:])
    u_arr = np.zeros(n + 2)
    u_arr[0], u_arr[1] = u_minus, u0
    vector = np.array([u0, a_arr[0]*u_minus])
    for idx in range(n):
        vector = mat_arr[idx] @ vector
        u_arr[idx + 2] = vector[0]
    residuals = []
    for k in range(n):
        # Position k of the recurrence is index k+1 in u_arr and a_arr
        lhs = a_arr[k + 1]*u_arr[k + 2] + b_arr[k + 1]*u_arr[k + 1] + a_arr[k]*u_arr[k]
        scale = max(1.0, abs(E*u_arr[k + 1]), abs(a_arr[k + 1]*u_arr[k + 2]))
        residuals.append(abs(lhs - E*u_arr[k + 1])/scale)
    return float(np.max(residuals)) if residuals else 0.0


############ Presets
def makeJacobiPreset(preset:str, lam:float=cn.D_LAMBDA, alpha:float=cn.D_ALPHA)->JacobiFamily:
    """free: a=1, b=0; amo: a=1, b=2 lam cos(2 pi w); skew_amo: amo on the skew-shift."""
    one = TrigPoly.constant(1.0)
    if preset == cn.PRESET_FREE:
        return JacobiFamily(one, TrigPoly.constant(0.0), BaseDynamics.makeTorusRotation(alpha),
              description=preset)
    if preset == cn.PRESET_AMO:
        return JacobiFamily(one, TrigPoly.cosine(2*lam), BaseDynamics.makeTorusRotation(alpha),
              description=f"{preset} lambda={lam}")
    if preset == cn.PRESET_SKEW_AMO:
        return JacobiFamily(one, TrigPoly.cosine(2*lam), BaseDynamics.makeSkewShift(alpha),
              description=f"{preset} lambda={lam}")
    raise InvalidInputError(f"Unknown Jacobi preset {preset}. Must be one of {cn.JACOBI_PRESETS}.")

def makeCMVPreset(preset:str, lam:float=cn.D_LAMBDA, alpha:float=cn.D_ALPHA)->CMVFamily:
    """cmv_free: v=0; cmv_constant: v=lam; cmv_cos: v=lam exp(i cos(2 pi w))."""
    base = BaseDynamics.makeTorusRotation(alpha)
    if preset == cn.PRESET_CMV_FREE:
        return CMVFamily(lam=0.0, base=base, description=preset)
    if preset == cn.PRESET_CMV_CONSTANT:
        return CMVFamily(lam=lam, base=base, description=f"{preset} lambda={lam}")
    if preset == cn.PRESET_CMV_COS:
        return CMVFamily(lam=lam, h=TrigPoly.cosine(1.0), base=base, description=f"{preset} lambda={lam}")
    raise InvalidInputError(f"Unknown CMV preset {preset}. Must be one of {cn.CMV_PRESETS}.")

def makePreset(preset:str, lam:float=cn.D_LAMBDA, alpha:float=cn.D_ALPHA)->Union[JacobiFamily, CMVFamily]:
    if preset in cn.JACOBI_PRESETS:
        return makeJacobiPreset(preset, lam=lam, alpha=alpha)
    if preset in cn.CMV_PRESETS:
        return makeCMVPreset(preset, lam=lam, alpha=alpha)
    raise InvalidInputError(f"Unknown preset {preset}. Must be one of {cn.PRESETS}.")

def familyKind(family:Union[JacobiFamily, CMVFamily])->str:
    if isinstance(family, JacobiFamily):
        return cn.JACOBI
    if isinstance(family, CMVFamily):
        return cn.CMV
    raise InvalidInputError(f"Not an operator family: {family!r}")

def cocycleMap(family:Union[JacobiFamily, CMVFamily], parameter:float)->CocycleMap:
    """Transfer cocycle at energy E (Jacobi) or angle theta (CMV)."""
    if isinstance(family, JacobiFamily):
        return jacobiCocycleMap(family, parameter)
    return szegoCocycleMap(family, theta=parameter)
