'''Base dynamics: torus rotations and the skew-shift.'''

import GapLab.constants as cn # type: ignore
from GapLab.errors import InvalidInputError # type: ignore
from GapLab import utils # type: ignore

import numpy as np # type: ignore
from typing import List, Sequence, Union


class Frequency(object):

    def __init__(self, alpha:float=cn.D_ALPHA):
        """Rotation frequency.

        Args:
            alpha (float): frequency in (0, 1)
        """
        alpha = float(alpha)
        if not (0 < alpha < 1) or not np.isfinite(alpha):
            raise InvalidInputError(f"alpha must lie in (0,1), got {alpha}.")
        self.alpha = alpha

    def diophantineMargin(self, n_max:int)->float:
        """Minimum over 1 <= n <= n_max of the distance from n*alpha to the nearest integer."""
        if n_max < 1:
            raise InvalidInputError(f"n_max must be positive, got {n_max}.")
        ns = np.arange(1, n_max + 1)
        return float(np.min(utils.circularDistance(ns*self.alpha, 0.0)))

    def diophantineConstant(self, tau:float, n_max:int)->float:
        """kappa = min over 1 <= n <= n_max of n^tau * ||n alpha||."""
        ns = np.arange(1, n_max + 1)
        return float(np.min(ns**tau*utils.circularDistance(ns*self.alpha, 0.0)))

    def __eq__(self, other)->bool:
        return isinstance(other, Frequency) and (self.alpha == other.alpha)

    def __repr__(self)->str:
        return f"Frequency({self.alpha!r})"


class TorusPoint(object):

    def __init__(self, *coords:float):
        """A point of the 1- or 2-torus. Coordinates are reduced mod 1."""
        if len(coords) == 1 and isinstance(coords[0], (list, tuple, np.ndarray)):
            coords = tuple(coords[0])
        if not len(coords) in [1, 2]:
            raise InvalidInputError(f"A torus point has 1 or 2 coordinates, got {len(coords)}.")
        self.coords = tuple(utils.frac(float(c)) for c in coords)

    @property
    def dimension(self)->int:
        return len(self.coords)

    def toArray(self)->np.ndarray:
        return np.array(self.coords)

    def __getitem__(self, idx:int)->float:
        return self.coords[idx]

    def __eq__(self, other)->bool:
        return isinstance(other, TorusPoint) and (self.coords == other.coords)

    def __repr__(self)->str:
        return f"TorusPoint{self.coords}"


class BaseDynamics(object):

    def __init__(self, kind:str=cn.TORUS_ROTATION, frequency:Union[Frequency, float, None]=None):
        """The ergodic base map T.

        Args:
            kind (str): cn.TORUS_ROTATION (w -> w + alpha) or
                cn.SKEW_SHIFT ((w1, w2) -> (w1 + alpha, w1 + w2))
            frequency (Frequency): rotation frequency; a float is promoted
        """
        if not kind in cn.BASE_KINDS:
            raise InvalidInputError(f"Unknown base kind {kind}. Must be one of {cn.BASE_KINDS}.")
        if frequency is None:
            frequency = Frequency()
        if not isinstance(frequency, Frequency):
            frequency = Frequency(frequency)
        self.kind = kind
        self.frequency = frequency

    @classmethod
    def makeTorusRotation(cls, alpha:float=cn.D_ALPHA)->'BaseDynamics':
        return cls(cn.TORUS_ROTATION, Frequency(alpha))

    @classmethod
    def makeSkewShift(cls, alpha:float=cn.D_ALPHA)->'BaseDynamics':
        return cls(cn.SKEW_SHIFT, Frequency(alpha))

    @property
    def alpha(self)->float:
        return self.frequency.alpha

    @property
    def dimension(self)->int:
        return 1 if self.kind == cn.TORUS_ROTATION else 2

    def _check(self, omega:TorusPoint):
        if omega.dimension != self.dimension:
            raise InvalidInputError(
                  f"Point {omega} has dimension {omega.dimension}; base {self.kind} needs {self.dimension}.")

    def makePoint(self, omega)->TorusPoint:
        """Coerces a float, tuple or TorusPoint into a TorusPoint of this base."""
        if isinstance(omega, TorusPoint):
            point = omega
        elif np.ndim(omega) == 0:
            if self.dimension == 2:
                point = TorusPoint(float(omega), 0.0)
            else:
                point = TorusPoint(float(omega))
        else:
            point = TorusPoint(*[float(c) for c in omega])
        self._check(point)
        return point

    def step(self, omega:TorusPoint)->TorusPoint:
        """Applies T once."""
        self._check(omega)
        if self.kind == cn.TORUS_ROTATION:
            return TorusPoint(omega[0] + self.alpha)
        return TorusPoint(omega[0] + self.alpha, omega[0] + omega[1])

    def inverseStep(self, omega:TorusPoint)->TorusPoint:
        """Applies the inverse of T once."""
        self._check(omega)
        if self.kind == cn.TORUS_ROTATION:
            return TorusPoint(omega[0] - self.alpha)
        previous = utils.frac(omega[0] - self.alpha)
        return TorusPoint(previous, omega[1] - previous)

    def stepArray(self, point_arr:np.ndarray)->np.ndarray:
        """Applies T to every row of an orbit array."""
        point_arr = np.asarray(point_arr, dtype=float)
        if self.kind == cn.TORUS_ROTATION:
            return utils.frac(point_arr + self.alpha)
        first_arr = utils.frac(point_arr[:, 0] + self.alpha)
        second_arr = utils.frac(point_arr[:, 0] + point_arr[:, 1])
        return np.column_stack([first_arr, second_arr])

    def inverseStepArray(self, point_arr:np.ndarray)->np.ndarray:
        point_arr = np.asarray(point_arr, dtype=float)
        if self.kind == cn.TORUS_ROTATION:
            return utils.frac(point_arr - self.alpha)
        first_arr = utils.frac(point_arr[:, 0] - self.alpha)
        second_arr = utils.frac(point_arr[:, 1] - first_arr)
        return np.column_stack([first_arr, second_arr])

    def gridArray(self, num_point:int)->np.ndarray:
        """Uniform grid j/num_point in the first coordinate (second coordinate 0)."""
        first_arr = np.arange(num_point)/num_point
        if self.dimension == 1:
            return first_arr
        return np.column_stack([first_arr, np.zeros(num_point)])

    def orbit(self, omega0:TorusPoint, n:int)->List[TorusPoint]:
        """The sequence [w, Tw, ..., T^{n-1}w]."""
        if n < 0:
            raise InvalidInputError(f"Orbit length must be non-negative, got {n}.")
        self._check(omega0)
        arr = self.orbitArray(omega0, n)
        if self.dimension == 1:
            return [TorusPoint(float(x)) for x in arr]
        return [TorusPoint(float(x), float(y)) for x, y in arr]

    def orbitArray(self, omega0:Union[TorusPoint, Sequence[float], float], n:int, start:int=0)->np.ndarray:
        """Orbit points T^{start}w, ..., T^{start+n-1}w as an array.
        Shape (n,) for the rotation and (n, 2) for the skew-shift. start may be negative.

        Args:
            omega0: initial point
            n (int): number of points
            start (int): exponent of the first point
        """
        omega0 = self.makePoint(omega0)
        if n < 0:
            raise InvalidInputError(f"Orbit length must be non-negative, got {n}.")
        ks = np.arange(start, start + n, dtype=float)
        if self.kind == cn.TORUS_ROTATION:
            return utils.frac(omega0[0] + ks*self.alpha)
        # Skew-shift: move to T^{start}w, then w2 accumulates the first coordinates
        point = omega0
        for _ in range(abs(start)):
            point = self.step(point) if start > 0 else self.inverseStep(point)
        first_arr = utils.frac(point[0] + (ks - start)*self.alpha)
        increment_arr = np.concatenate([[0.0], np.cumsum(first_arr[:-1])]) if n > 0 else first_arr
        second_arr = utils.frac(point[1] + increment_arr)
        return np.column_stack([first_arr, second_arr]).reshape(n, 2)

    def phaseArray(self, omega0, n:int, start:int=0)->np.ndarray:
        """First coordinates of the orbit, the input of 1-d sampling functions."""
        arr = self.orbitArray(omega0, n, start=start)
        if arr.ndim == 2:
            return arr[:, 0]
        return arr

    def toDct(self)->dict:
        return dict(kind=self.kind, alpha=self.alpha)

    def __eq__(self, other)->bool:
        return isinstance(other, BaseDynamics) and (self.kind == other.kind) \
              and (self.frequency == other.frequency)

    def __repr__(self)->str:
        return f"BaseDynamics({self.kind!r}, {self.alpha!r})"
