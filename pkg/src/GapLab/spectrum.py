'''Truncated spectra and the integrated density of states.'''

import GapLab.constants as cn # type: ignore
from GapLab.errors import ComputationalError, InvalidInputError, GapLabWarning # type: ignore
from GapLab.operators import JacobiFamily, CMVFamily, familyKind # type: ignore

import collections
from joblib import Parallel, delayed # type: ignore
import numpy as np # type: ignore
import pandas as pd # type: ignore
from scipy import linalg # type: ignore
from typing import Optional, Union
import warnings

TWO_PI = 2*np.pi


class IDSTable(collections.namedtuple('IDSTable', ['grid', 'values'])):
    """IDS values on sorted evaluation points."""

    def toDataFrame(self)->pd.DataFrame:
        return pd.DataFrame({"x": self.grid, "ids": self.values})

    def evaluate(self, x:float)->float:
        """Value of the step function at x; x must lie inside the tabulated range."""
        if (x < self.grid[0]) or (x > self.grid[-1]):
            raise InvalidInputError(f"IDS table covers [{self.grid[0]}, {self.grid[-1]}], not {x}.")
        idx = int(np.searchsorted(self.grid, x, side="right")) - 1
        return float(self.values[max(idx, 0)])


class SpectrumApprox(object):

    def __init__(self, eigenvalues:np.ndarray, N:int, omega_samples:int, boundary:str,
            family_kind:str, family_info:Optional[dict]=None, edge_weights:Optional[np.ndarray]=None):
        """Pooled eigenvalues (Jacobi) or eigenangles in [0, 2 pi) (CMV), sorted ascending.

        Args:
            edge_weights (np.ndarray): eigenvector weight on the sites next to the cuts, one
                entry per eigenvalue; None when eigenvectors were not computed
        """
        if not boundary in cn.BOUNDARIES:
            raise InvalidInputError(f"Unknown boundary {boundary}.")
        value_arr = np.asarray(eigenvalues, dtype=float)
        order_arr = np.argsort(value_arr, kind="stable")
        self.eigenvalues = value_arr[order_arr]
        if edge_weights is None:
            self.edge_weights = None
        else:
            weight_arr = np.asarray(edge_weights, dtype=float)
            if len(weight_arr) != len(value_arr):
                raise InvalidInputError(f"{len(weight_arr)} edge weights for {len(value_arr)} eigenvalues.")
            self.edge_weights = weight_arr[order_arr]
        self.N = N
        self.omega_samples = omega_samples
        self.boundary = boundary
        self.family_kind = family_kind
        if family_info is None:
            family_info = {}
        self.family_info = family_info

    @property
    def bulk_eigenvalues(self)->np.ndarray:
        """Eigenvalues without the states localized at the truncation cuts."""
        if self.edge_weights is None:
            return self.eigenvalues
        return self.eigenvalues[self.edge_weights < cn.D_EDGE_WEIGHT]

    @property
    def num_edge_state(self)->int:
        return len(self.eigenvalues) - len(self.bulk_eigenvalues)

    @property
    def is_circular(self)->bool:
        return self.family_kind == cn.CMV

    @property
    def is_free(self)->bool:
        return bool(self.family_info.get("is_free", False))

    def __len__(self)->int:
        return len(self.eigenvalues)

    def ids(self, x):
        """Fraction of pooled eigenvalues (eigenangles) <= x."""
        return ids(self, x)

    def idsTable(self, grid:np.ndarray)->IDSTable:
        grid = np.sort(np.asarray(grid, dtype=float))
        return IDSTable(grid=grid, values=np.asarray(self.ids(grid)))

    def histogram(self, bins:int=100)->pd.DataFrame:
        """Counts per bin; 'value' is the bin center."""
        if self.is_circular:
            count_arr, edge_arr = np.histogram(self.eigenvalues, bins=bins, range=(0, TWO_PI))
        else:
            count_arr, edge_arr = np.histogram(self.eigenvalues, bins=bins)
        return pd.DataFrame({"value": 0.5*(edge_arr[:-1] + edge_arr[1:]), "count": count_arr})

    def toDct(self)->dict:
        return dict(family=self.family_info, N=self.N, omega_samples=self.omega_samples,
              boundary=self.boundary, num_edge_state=self.num_edge_state,
              eigenvalues=self.eigenvalues.tolist())

    def __repr__(self)->str:
        return f"SpectrumApprox({self.family_kind}, N={self.N}, omega_samples={self.omega_samples})"


def _checkSize(N:int):
    if N < 1:
        raise InvalidInputError(f"Truncation size must be positive, got {N}.")
    if N < cn.D_MIN_N:
        warnings.warn(f"Truncation size {N} is below the recommended {cn.D_MIN_N}.", GapLabWarning)

def _checkBoundary(boundary:str, expected:str):
    if boundary != expected:
        raise InvalidInputError(f"Boundary {boundary} does not apply; this truncation has {expected} cuts.")

def edgeWeights(vector_arr:np.ndarray)->np.ndarray:
    """Weight of each eigenvector (a column) on the D_EDGE_FRACTION*N sites next to either cut.
    Blocks shorter than D_MIN_N get zero weights."""
    N = vector_arr.shape[0]
    if N < cn.D_MIN_N:
        return np.zeros(vector_arr.shape[1])
    num_site = max(1, int(cn.D_EDGE_FRACTION*N))
    sq_arr = np.abs(vector_arr)**2
    return (np.sum(sq_arr[:num_site], axis=0) + np.sum(sq_arr[N - num_site:], axis=0))/np.sum(sq_arr, axis=0)

def _jacobiBlock(family:JacobiFamily, omega0, N:int, start:int):
    orbit_arr = family.base.orbitArray(omega0, N, start=start)
    diagonal_arr = np.asarray(family.diagonal(orbit_arr), dtype=float)
    off_arr = np.asarray(family.offDiagonal(orbit_arr), dtype=float)[:-1]
    try:
        value_arr, vector_arr = linalg.eigh_tridiagonal(diagonal_arr, off_arr)
        return value_arr, edgeWeights(vector_arr)
    except (linalg.LinAlgError, ValueError) as exp:
        raise ComputationalError(f"Tridiagonal eigen-solver failed for block starting at T^{start}w: {exp}")

def truncatedJacobiSpectrum(family:JacobiFamily, omega0=0.0, N:int=cn.D_N,
        omega_samples:int=cn.D_SAMPLES, workers:int=cn.D_WORKERS,
        boundary:str=cn.BOUNDARY_DIRICHLET)->SpectrumApprox:
    """Eigenvalues of N x N cut-off truncations pooled over omega_samples consecutive orbit
    blocks starting at T^{jN} w0.

    Args:
        family (JacobiFamily)
        omega0: starting point
        N (int): truncation size
        omega_samples (int): number of blocks
        workers (int): joblib workers
        boundary (str): only Dirichlet cuts apply to Jacobi truncations

    Returns:
        SpectrumApprox
    """
    _checkBoundary(boundary, cn.BOUNDARY_DIRICHLET)
    _checkSize(N)
    starts = [j*N for j in range(omega_samples)]
    blocks = Parallel(n_jobs=workers)(delayed(_jacobiBlock)(family, omega0, N, s) for s in starts)
    return SpectrumApprox(np.concatenate([b[0] for b in blocks]), N, omega_samples,
          boundary, cn.JACOBI, family_info=family.toDct(),
          edge_weights=np.concatenate([b[1] for b in blocks]))

def _theta(alpha_arr:np.ndarray, rho_arr:np.ndarray, idx:int)->np.ndarray:
    """Theta(alpha) = [[conj(alpha), rho], [rho, -alpha]]"""
    return np.array([[np.conj(alpha_arr[idx]), rho_arr[idx]], [rho_arr[idx], -alpha_arr[idx]]])

def cmvMatrix(alpha_arr:np.ndarray, boundary_coeff:complex=1.0)->np.ndarray:
    """N x N CMV matrix LM with the coefficient at the cut replaced by boundary_coeff.

    Args:
        alpha_arr (np.ndarray): alpha_0, ..., alpha_{N-1}
        boundary_coeff (complex): unimodular

    Returns:
        np.ndarray
    """
    N = len(alpha_arr)
    if N % 2 != 0:
        raise InvalidInputError(f"CMV truncation size must be even, got {N}.")
    if abs(abs(boundary_coeff) - 1) > cn.REAL_TOL:
        raise InvalidInputError(f"Boundary coefficient must be unimodular, got {boundary_coeff}.")
    rho_arr = np.sqrt(1 - np.abs(alpha_arr)**2)
    l_arr = np.zeros((N, N), dtype=complex)
    m_arr = np.zeros((N, N), dtype=complex)
    for j in range(0, N, 2):
        l_arr[j:j + 2, j:j + 2] = _theta(alpha_arr, rho_arr, j)
    for j in range(1, N - 1, 2):
        m_arr[j:j + 2, j:j + 2] = _theta(alpha_arr, rho_arr, j)
    # Decoupled block Theta(beta) = diag(conj(beta), -beta) split across the cut
    m_arr[0, 0] = -boundary_coeff
    m_arr[N - 1, N - 1] = np.conj(boundary_coeff)
    return l_arr @ m_arr

def _cmvBlock(family:CMVFamily, omega0, N:int, start:int, boundary_coeff:complex):
    orbit_arr = family.base.orbitArray(omega0, N, start=start)
    mat = cmvMatrix(family.verblunsky(orbit_arr), boundary_coeff=boundary_coeff)
    unitary_err = np.max(np.abs(mat.conj().T @ mat - np.identity(N)))
    if unitary_err > cn.UNITARY_TOL:
        raise ComputationalError(f"CMV truncation at T^{start}w is not unitary: error {unitary_err}.")
    try:
        eig_arr, vector_arr = np.linalg.eig(mat)
    except np.linalg.LinAlgError as exp:
        raise ComputationalError(f"CMV eigen-solver failed for block starting at T^{start}w: {exp}")
    modulus_err = np.max(np.abs(np.abs(eig_arr) - 1))
    if modulus_err > cn.UNITARY_TOL:
        raise ComputationalError(f"CMV eigenvalues leave the unit circle by {modulus_err}.")
    return np.mod(np.angle(eig_arr), TWO_PI), edgeWeights(vector_arr)

def truncatedCMVSpectrum(family:CMVFamily, omega0=0.0, N:int=512, omega_samples:int=cn.D_SAMPLES,
        boundary_coeff:complex=1.0, workers:int=cn.D_WORKERS,
        boundary:str=cn.BOUNDARY_UNITARY)->SpectrumApprox:
    """Eigenangles in [0, 2 pi) of unitary N x N CMV truncations pooled over orbit blocks.

    Args:
        family (CMVFamily)
        omega0: starting point
        N (int): even truncation size
        omega_samples (int): number of blocks
        boundary_coeff (complex): unimodular coefficient placed at the cut
        workers (int): joblib workers
        boundary (str): only unitary cuts apply to CMV truncations

    Returns:
        SpectrumApprox
    """
    _checkBoundary(boundary, cn.BOUNDARY_UNITARY)
    if N % 2 != 0:
        raise InvalidInputError(f"CMV truncation size must be even, got {N}.")
    _checkSize(N)
    starts = [j*N for j in range(omega_samples)]
    blocks = Parallel(n_jobs=workers)(delayed(_cmvBlock)(family, omega0, N, s, boundary_coeff)
          for s in starts)
    return SpectrumApprox(np.concatenate([b[0] for b in blocks]), N, omega_samples,
          boundary, cn.CMV, family_info=family.toDct(),
          edge_weights=np.concatenate([b[1] for b in blocks]))

def truncatedSpectrum(family:Union[JacobiFamily, CMVFamily], omega0=0.0, N:int=cn.D_N,
        omega_samples:int=cn.D_SAMPLES, workers:int=cn.D_WORKERS,
        boundary:Optional[str]=None)->SpectrumApprox:
    """Dispatches on the family kind; boundary, when given, must match it."""
    if familyKind(family) == cn.JACOBI:
        return truncatedJacobiSpectrum(family, omega0=omega0, N=N, omega_samples=omega_samples,  # type: ignore
              workers=workers, boundary=boundary or cn.BOUNDARY_DIRICHLET)
    return truncatedCMVSpectrum(family, omega0=omega0, N=N, omega_samples=omega_samples,  # type: ignore
          workers=workers, boundary=boundary or cn.BOUNDARY_UNITARY)

def ids(spectrum:SpectrumApprox, x):
    """Normalized eigenvalue counting function. CMV angles are measured from 0 counterclockwise.

    Args:
        spectrum (SpectrumApprox)
        x: float or array

    Returns:
        float or np.ndarray in [0, 1]
    """
    if len(spectrum) == 0:
        raise InvalidInputError("IDS of an empty spectrum.")
    count = np.searchsorted(spectrum.eigenvalues, x, side="right")
    result = np.asarray(count)/len(spectrum)
    if np.ndim(result) == 0:
        return float(result)
    return result
