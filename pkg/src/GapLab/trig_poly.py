'''Real trigonometric polynomials used as sampling functions.'''

import GapLab.constants as cn # type: ignore
from GapLab.errors import InvalidInputError # type: ignore
from GapLab import utils # type: ignore

import json
import numpy as np # type: ignore
from typing import Dict, Optional, Union


class TrigPoly(object):

    def __init__(self, coeff_dct:Dict[int, complex], is_check:bool=True):
        """Real trigonometric polynomial p(w) = sum_k c_k exp(2 pi i k w).

        Args:
            coeff_dct (dict): key: frequency k; value: Fourier coefficient c_k
            is_check (bool): validate the reality condition c_{-k} = conj(c_k)
        """
        self.coeff_dct:Dict[int, complex] = {}
        for k, value in coeff_dct.items():
            if int(k) != k:
                raise InvalidInputError(f"Frequencies must be integers, got {k}.")
            value = complex(value)
            if value != 0:
                self.coeff_dct[int(k)] = value
        if len(self.coeff_dct) == 0:
            self.degree = 0
        else:
            self.degree = max([abs(k) for k in self.coeff_dct.keys()])
        self.is_checked = is_check
        if is_check:
            self._checkReality()

    def _checkReality(self):
        for k, value in self.coeff_dct.items():
            mirror = self.coeff_dct.get(-k, 0)
            if abs(mirror - np.conj(value)) > cn.REAL_TOL:
                raise InvalidInputError(
                      f"Coefficients violate reality at k={k}: c_k={value}, c_-k={mirror}.")

    ############ Constructors
    @classmethod
    def constant(cls, value:float)->'TrigPoly':
        return cls({0: float(value)})

    @classmethod
    def cosine(cls, amplitude:float=1.0, frequency:int=1)->'TrigPoly':
        """amplitude*cos(2 pi frequency w)"""
        if frequency == 0:
            return cls.constant(amplitude)
        return cls({frequency: 0.5*amplitude, -frequency: 0.5*amplitude})

    @classmethod
    def sine(cls, amplitude:float=1.0, frequency:int=1)->'TrigPoly':
        """amplitude*sin(2 pi frequency w)"""
        if frequency == 0:
            return cls.constant(0.0)
        return cls({frequency: -0.5j*amplitude, -frequency: 0.5j*amplitude})

    @classmethod
    def fromSamples(cls, sample_arr:np.ndarray, degree:int)->'TrigPoly':
        """Reconstructs a polynomial from values on the uniform grid j/len(sample_arr).

        Args:
            sample_arr (np.ndarray): real samples
            degree (int): highest frequency kept; must be below len/2
        """
        sample_arr = np.asarray(sample_arr, dtype=float)
        num_sample = len(sample_arr)
        if 2*degree >= num_sample:
            raise InvalidInputError(f"Need more than {2*degree} samples for degree {degree}.")
        fft_arr = np.fft.fft(sample_arr)/num_sample
        dct = {k: fft_arr[k % num_sample] for k in range(-degree, degree + 1)}
        # Symmetrize to remove rounding asymmetries
        dct = {k: 0.5*(v + np.conj(dct[-k])) for k, v in dct.items()}
        return cls({k: v for k, v in dct.items() if abs(v) > 1e-15})

    ############ Access
    def fourierCoefficient(self, k:int)->complex:
        """Stored c_k, or 0 when |k| exceeds the degree."""
        return self.coeff_dct.get(int(k), 0j)

    @property
    def is_zero(self)->bool:
        return len(self.coeff_dct) == 0

    def evaluate(self, omega)->Union[float, np.ndarray]:
        """Real value at phase(s) omega. Accepts a float or an array."""
        if not self.is_checked:
            self._checkReality()
            self.is_checked = True
        omega_arr = utils.frac(np.asarray(omega, dtype=float))
        result = np.zeros(np.shape(omega_arr), dtype=complex)
        for k, value in self.coeff_dct.items():
            result = result + value*np.exp(2j*np.pi*k*omega_arr)
        result = np.real(result)
        if np.ndim(result) == 0:
            return float(result)
        return result

    def evaluateComplex(self, omega, epsilon:float=0.0)->Union[complex, np.ndarray]:
        """Analytic continuation to the phase omega + i*epsilon."""
        omega_arr = utils.frac(np.asarray(omega, dtype=float))
        result = np.zeros(np.shape(omega_arr), dtype=complex)
        for k, value in self.coeff_dct.items():
            result = result + value*np.exp(-2*np.pi*k*epsilon)*np.exp(2j*np.pi*k*omega_arr)
        if np.ndim(result) == 0:
            return complex(result)
        return result

    def __call__(self, omega):
        return self.evaluate(omega)

    def minimum(self, num_point:int=cn.D_FAMILY_GRID)->float:
        return float(np.min(self.evaluate(np.arange(num_point)/num_point)))

    def maximum(self, num_point:int=cn.D_FAMILY_GRID)->float:
        return float(np.max(self.evaluate(np.arange(num_point)/num_point)))

    ############ Algebra
    def __add__(self, other)->'TrigPoly':
        if not isinstance(other, TrigPoly):
            other = TrigPoly.constant(other)
        dct = dict(self.coeff_dct)
        for k, value in other.coeff_dct.items():
            dct[k] = dct.get(k, 0) + value
        return TrigPoly(dct)

    __radd__ = __add__

    def __mul__(self, scale:float)->'TrigPoly':
        return TrigPoly({k: float(scale)*v for k, v in self.coeff_dct.items()})

    __rmul__ = __mul__

    def __neg__(self)->'TrigPoly':
        return self*(-1.0)

    def __sub__(self, other)->'TrigPoly':
        return self + (-other)

    def __eq__(self, other)->bool:
        return isinstance(other, TrigPoly) and (self.coeff_dct == other.coeff_dct)

    ############ Serialization
    def toDct(self)->dict:
        coeffs = [[k, self.coeff_dct[k].real, self.coeff_dct[k].imag]
              for k in sorted(self.coeff_dct.keys())]
        return dict(degree=self.degree, coeffs=coeffs)

    def toJSON(self)->str:
        return json.dumps(self.toDct())

    @classmethod
    def fromDct(cls, dct:dict)->'TrigPoly':
        if not "coeffs" in dct:
            raise InvalidInputError(f"TrigPoly JSON needs a 'coeffs' entry, got keys {list(dct.keys())}.")
        coeff_dct:dict = {}
        for entry in dct["coeffs"]:
            if len(entry) != 3:
                raise InvalidInputError(f"Coefficient entries are [k, re, im], got {entry}.")
            k, real, imag = entry
            coeff_dct[int(k)] = complex(real, imag)
        poly = cls(coeff_dct)
        degree = dct.get("degree", None)
        if (degree is not None) and (poly.degree > int(degree)):
            raise InvalidInputError(f"Declared degree {degree} is below the coefficient degree {poly.degree}.")
        return poly

    @classmethod
    def fromJSON(cls, json_str:str)->'TrigPoly':
        return cls.fromDct(json.loads(json_str))

    def __repr__(self)->str:
        return f"TrigPoly({self.coeff_dct})"
