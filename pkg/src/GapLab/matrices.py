'''SL(2,R) and SU(1,1) fiber values and the conjugation between them.'''

import GapLab.constants as cn # type: ignore
from GapLab.errors import InvalidInputError # type: ignore

import numpy as np # type: ignore

# M = (1/(1+i)) [[1, -i], [1, i]]; det M = 1
CONJUGATOR_ARR = np.array([[1, -1j], [1, 1j]])/(1 + 1j)
CONJUGATOR_INV_ARR = np.array([[1j, 1j], [-1, 1]])/(1 + 1j)


class Mat2(object):

    def __init__(self, m11:float, m12:float, m21:float, m22:float, is_check:bool=True):
        """Real 2x2 matrix with unit determinant."""
        self.m11, self.m12, self.m21, self.m22 = float(m11), float(m12), float(m21), float(m22)
        if is_check:
            det = self.det
            if not np.isfinite(det) or abs(det - 1) >= cn.DET_TOL:
                raise InvalidInputError(f"Mat2 needs unit determinant, got det={det}.")

    @classmethod
    def fromArray(cls, arr:np.ndarray, is_check:bool=True)->'Mat2':
        arr = np.asarray(arr)
        if np.max(np.abs(np.imag(arr))) > cn.DET_TOL:
            raise InvalidInputError(f"Mat2 entries must be real, got {arr}.")
        arr = np.real(arr)
        return cls(arr[0, 0], arr[0, 1], arr[1, 0], arr[1, 1], is_check=is_check)

    @classmethod
    def identity(cls)->'Mat2':
        return cls(1, 0, 0, 1)

    @classmethod
    def rotation(cls, angle:float)->'Mat2':
        """Counterclockwise rotation by angle (radians)."""
        return cls(np.cos(angle), -np.sin(angle), np.sin(angle), np.cos(angle))

    @property
    def det(self)->float:
        return self.m11*self.m22 - self.m12*self.m21

    @property
    def trace(self)->float:
        return self.m11 + self.m22

    def toArray(self)->np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    def inverse(self)->'Mat2':
        return Mat2(self.m22, -self.m12, -self.m21, self.m11, is_check=False)

    def norm(self)->float:
        return float(np.linalg.norm(self.toArray(), 2))

    def __matmul__(self, other:'Mat2')->'Mat2':
        return Mat2.fromArray(self.toArray() @ other.toArray(), is_check=False)

    def isClose(self, other:'Mat2', tol:float=1e-10)->bool:
        return bool(np.max(np.abs(self.toArray() - other.toArray())) < tol)

    def __repr__(self)->str:
        return f"Mat2([[{self.m11}, {self.m12}], [{self.m21}, {self.m22}]])"


class Mat2H(object):

    def __init__(self, a:complex, b:complex, is_check:bool=True):
        """SU(1,1) matrix [[a, b], [conj(b), conj(a)]] with |a|^2 - |b|^2 = 1."""
        self.a, self.b = complex(a), complex(b)
        if is_check:
            excess = abs(self.a)**2 - abs(self.b)**2 - 1
            if not np.isfinite(excess) or abs(excess) >= cn.DET_TOL:
                raise InvalidInputError(f"Mat2H needs |a|^2-|b|^2 = 1, got excess {excess}.")

    @classmethod
    def fromArray(cls, arr:np.ndarray, is_check:bool=True)->'Mat2H':
        """Builds from a full 2x2 array after checking the [[a, b], [b*, a*]] shape."""
        arr = np.asarray(arr, dtype=complex)
        if is_check:
            shape_err = max(abs(arr[1, 1] - np.conj(arr[0, 0])), abs(arr[1, 0] - np.conj(arr[0, 1])))
            if shape_err >= cn.DET_TOL:
                raise InvalidInputError(f"Array does not have SU(1,1) shape: {arr}.")
        return cls(arr[0, 0], arr[0, 1], is_check=is_check)

    @classmethod
    def fromParameters(cls, theta:float, phi:float, v:float)->'Mat2H':
        """(1/sqrt(1-v^2)) [[e^{i theta}, v e^{-i phi}], [v e^{i phi}, e^{-i theta}]]"""
        if not (0 <= v < 1):
            raise InvalidInputError(f"v must lie in [0,1), got {v}.")
        scale = 1/np.sqrt(1 - v**2)
        return cls(scale*np.exp(1j*theta), scale*v*np.exp(-1j*phi))

    @classmethod
    def identity(cls)->'Mat2H':
        return cls(1, 0)

    @property
    def det(self)->float:
        return abs(self.a)**2 - abs(self.b)**2

    @property
    def trace(self)->float:
        return 2*self.a.real

    def toArray(self)->np.ndarray:
        return np.array([[self.a, self.b], [np.conj(self.b), np.conj(self.a)]])

    def inverse(self)->'Mat2H':
        return Mat2H(np.conj(self.a), -self.b, is_check=False)

    def norm(self)->float:
        return abs(self.a) + abs(self.b)

    def __matmul__(self, other:'Mat2H')->'Mat2H':
        a = self.a*other.a + self.b*np.conj(other.b)
        b = self.a*other.b + self.b*np.conj(other.a)
        return Mat2H(a, b, is_check=False)

    def isClose(self, other:'Mat2H', tol:float=1e-10)->bool:
        return (abs(self.a - other.a) < tol) and (abs(self.b - other.b) < tol)

    def __repr__(self)->str:
        return f"Mat2H(a={self.a}, b={self.b})"


def su11ToSl2r(mat:Mat2H)->Mat2:
    """M^{-1} m M for M = (1/(1+i))[[1,-i],[1,i]].

    Args:
        mat (Mat2H): must satisfy the SU(1,1) invariant

    Returns:
        Mat2
    """
    excess = mat.det - 1
    if abs(excess) >= cn.DET_TOL:
        raise InvalidInputError(f"Input violates the SU(1,1) invariant by {excess}.")
    arr = CONJUGATOR_INV_ARR @ mat.toArray() @ CONJUGATOR_ARR
    if np.max(np.abs(arr.imag)) >= cn.DET_TOL:
        raise InvalidInputError(f"Conjugated matrix is not real: {arr}.")
    return Mat2.fromArray(arr.real)

def sl2rToSu11(mat:Mat2)->Mat2H:
    """M A M^{-1}; inverse of su11ToSl2r."""
    return Mat2H.fromArray(CONJUGATOR_ARR @ mat.toArray() @ CONJUGATOR_INV_ARR)

def sl2rRotationData(arr:np.ndarray):
    """SU(1,1) entries (a, b) of a stack of real matrices, complex conjugated so that
    counterclockwise rotation of vectors has positive argument.

    Args:
        arr (np.ndarray): shape (n, 2, 2)

    Returns:
        a_arr, b_arr: complex arrays of shape (n,)
    """
    p, q, r, s = arr[:, 0, 0], arr[:, 0, 1], arr[:, 1, 0], arr[:, 1, 1]
    a_arr = 0.5*(p + s) + 0.5j*(r - q)
    b_arr = 0.5*(p - s) + 0.5j*(q + r)
    return a_arr, b_arr

def su11StackToSl2r(arr:np.ndarray)->np.ndarray:
    """su11ToSl2r applied to a stack of shape (n, 2, 2); returns the real parts."""
    return np.real(CONJUGATOR_INV_ARR @ np.asarray(arr, dtype=complex) @ CONJUGATOR_ARR)

def stackInverse(arr:np.ndarray)->np.ndarray:
    """Inverses of a stack of unit-determinant 2x2 matrices."""
    result = np.empty_like(arr)
    result[:, 0, 0] = arr[:, 1, 1]
    result[:, 1, 1] = arr[:, 0, 0]
    result[:, 0, 1] = -arr[:, 0, 1]
    result[:, 1, 0] = -arr[:, 1, 0]
    return result
