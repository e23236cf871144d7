'''Gap detection, gap labelling and gap-opening experiments.'''

import GapLab.constants as cn # type: ignore
from GapLab.dynamics import Frequency # type: ignore
from GapLab.errors import InvalidInputError # type: ignore
from GapLab.operators import JacobiFamily, CMVFamily, familyKind, makePreset # type: ignore
from GapLab.spectrum import SpectrumApprox, IDSTable, truncatedSpectrum # type: ignore
from GapLab.trig_poly import TrigPoly # type: ignore
from GapLab import utils # type: ignore

import collections
from joblib import Parallel, delayed # type: ignore
import numpy as np # type: ignore
import pandas as pd # type: ignore
from typing import List, Optional, Tuple, Union

TWO_PI = 2*np.pi
OPENING_COLUMNS = ["t", "width", "label_value", "label_index", "residual"]
SWEEP_COLUMNS = ["alpha", "left", "right", "label_value", "label_index", "label_residual"]


class Gap(collections.namedtuple('Gap',
        ['left', 'right', 'label_value', 'label_index', 'label_residual'])):
    """Open spectral gap. For circular spectra right may exceed 2 pi when the arc contains 0."""

    @property
    def width(self)->float:
        return self.right - self.left

    @property
    def midpoint(self)->float:
        return 0.5*(self.left + self.right)

    def toDct(self)->dict:
        return utils.toJSONable(dict(self._asdict()))


class LabelSet(object):

    def __init__(self, alpha:Union[Frequency, float], k_max:int=cn.D_K_MAX):
        """Candidate labels frac(k alpha) for |k| <= k_max.

        Args:
            alpha: frequency
            k_max (int): largest |k|
        """
        if not isinstance(alpha, Frequency):
            alpha = Frequency(alpha)
        if k_max < 1:
            raise InvalidInputError(f"k_max must be positive, got {k_max}.")
        self.alpha = alpha
        self.k_max = k_max
        # Order fixes ties: smaller |k| first, then positive k
        self.ks = [0] + [s*k for k in range(1, k_max + 1) for s in [1, -1]]
        self.value_arr = utils.frac(np.array(self.ks, dtype=float)*alpha.alpha)

    @property
    def labels(self)->List[Tuple[int, float]]:
        """(k, frac(k alpha)) pairs with value in (0, 1), sorted by value."""
        pairs = [(k, float(v)) for k, v in zip(self.ks, self.value_arr) if v > 0]
        return sorted(pairs, key=lambda p: p[1])

    def nearest(self, value:float)->Tuple[int, float]:
        """Best label index and its circular distance to value."""
        distance_arr = utils.circularDistance(self.value_arr, value)
        idx = int(np.argmin(distance_arr))
        return self.ks[idx], float(distance_arr[idx])


class GapReport(object):

    def __init__(self, gaps:List[Gap], N:int, omega_samples:int, density_threshold:float,
            k_max:int, tolerance:float=cn.D_LABEL_TOL):
        self.gaps = gaps
        self.N = N
        self.omega_samples = omega_samples
        self.density_threshold = density_threshold
        self.k_max = k_max
        self.tolerance = tolerance

    @property
    def all_labelled(self)->bool:
        return all([g.label_residual < self.tolerance for g in self.gaps])

    def toDataFrame(self)->pd.DataFrame:
        return pd.DataFrame([g._asdict() for g in self.gaps],
              columns=['left', 'right', 'label_value', 'label_index', 'label_residual'])

    def toDct(self)->dict:
        return dict(gaps=[g.toDct() for g in self.gaps], N=self.N, omega_samples=self.omega_samples,
              density_threshold=self.density_threshold, k_max=self.k_max, tolerance=self.tolerance,
              all_labelled=self.all_labelled)


def _defaultThreshold(spectrum:SpectrumApprox)->float:
    return 2*spectrum.omega_samples/max(len(spectrum.bulk_eigenvalues), 1)

def _mergeIntervals(intervals:List[Tuple[int, int]])->List[Tuple[int, int]]:
    """Union of overlapping index windows, in order."""
    merged:list = []
    for start, end in sorted(intervals):
        if merged and (start < merged[-1][1]):
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged

def detectGaps(spectrum:SpectrumApprox, min_width:float=cn.D_MIN_WIDTH,
        density_threshold:Optional[float]=None)->List[Gap]:
    """Maximal intervals of width >= min_width holding at most density_threshold*count
    eigenvalues. Circular spectra yield arcs. States localized at the truncation cuts are
    dropped first; they sit inside the gaps and are not part of the spectrum.

    Args:
        spectrum (SpectrumApprox)
        min_width (float)
        density_threshold (float): defaults to 2*omega_samples/count, count being the
            number of bulk eigenvalues

    Returns:
        list-Gap: unlabelled gaps (label fields None), sorted by left endpoint
    """
    value_arr = spectrum.bulk_eigenvalues
    count = len(value_arr)
    if count < 2:
        return []
    if density_threshold is None:
        density_threshold = _defaultThreshold(spectrum)
    num_inside = int(np.floor(density_threshold*count))
    num_start = count
    if num_inside + 1 >= count:
        return []
    if spectrum.is_circular:
        value_arr = np.concatenate([value_arr, value_arr + TWO_PI])
    else:
        num_start = count - num_inside - 1
    if num_start <= 0:
        return []
    start_arr = np.arange(num_start)
    end_arr = start_arr + num_inside + 1
    width_arr = value_arr[end_arr] - value_arr[start_arr]
    windows = [(int(s), int(e)) for s, e, w in zip(start_arr, end_arr, width_arr) if w >= min_width]
    spacing = min_width/(num_inside + 1)
    gaps:list = []
    for start, end in _mergeIntervals(windows):
        # Move the edges through the densely spaced band tails
        while (start + 1 < end) and (value_arr[start + 1] - value_arr[start] < spacing):
            start += 1
        while (end - 1 > start) and (value_arr[end] - value_arr[end - 1] < spacing):
            end -= 1
        left, right = float(value_arr[start]), float(value_arr[end])
        if (right - left < min_width) or (end - start - 1 > num_inside):
            continue
        if spectrum.is_circular:
            if right - left >= TWO_PI:
                continue
            if (right >= TWO_PI) and spectrum.is_free:
                continue
            if left >= TWO_PI:
                left, right = left - TWO_PI, right - TWO_PI
        gaps.append(Gap(left=left, right=right, label_value=None, label_index=None,
              label_residual=None))
    # A circular arc can be reached from two starts
    unique_dct = {(round(g.left, 12), round(g.right, 12)): g for g in gaps}
    return sorted(unique_dct.values(), key=lambda g: g.left)

def labelGap(gap:Gap, ids_source:Union[SpectrumApprox, IDSTable], labels:LabelSet)->Gap:
    """Attaches the IDS value at the midpoint, the best label index and its residual."""
    midpoint = gap.midpoint
    if isinstance(ids_source, SpectrumApprox):
        if ids_source.is_circular:
            midpoint = float(np.mod(midpoint, TWO_PI))
        value = ids_source.ids(midpoint)
    else:
        value = ids_source.evaluate(midpoint)
    k, residual = labels.nearest(value)
    return gap._replace(label_value=float(value), label_index=k, label_residual=residual)

def gapReport(spectrum:SpectrumApprox, alpha:Union[Frequency, float], k_max:int=cn.D_K_MAX,
        min_width:float=cn.D_MIN_WIDTH, density_threshold:Optional[float]=None,
        tolerance:float=cn.D_LABEL_TOL)->GapReport:
    """Detects and labels every gap of a spectrum."""
    if density_threshold is None:
        density_threshold = _defaultThreshold(spectrum)
    labels = LabelSet(alpha, k_max=k_max)
    gaps = [labelGap(g, spectrum, labels)
          for g in detectGaps(spectrum, min_width=min_width, density_threshold=density_threshold)]
    return GapReport(gaps, spectrum.N, spectrum.omega_samples, density_threshold, k_max,
          tolerance=tolerance)

def verifyGapLabelling(report:GapReport, tolerance:Optional[float]=None)->Tuple[bool, pd.DataFrame]:
    """True iff every gap's label residual is below tolerance, with the per-gap table.

    Returns:
        bool
        pd.DataFrame: left, right, label_value, label_index, label_residual, is_labelled
    """
    if tolerance is None:
        tolerance = report.tolerance
    df = report.toDataFrame()
    df["is_labelled"] = df["label_residual"] < tolerance
    return bool(df["is_labelled"].all()), df

############ Gap opening
def _perturbed(family:Union[JacobiFamily, CMVFamily], perturbation:TrigPoly, t:float):
    if familyKind(family) == cn.JACOBI:
        return family.withDiagonal(family.b + t*perturbation)  # type: ignore
    return family.withPhase(family.h + t*perturbation)  # type: ignore

def _openingRow(family, perturbation:TrigPoly, k:int, t:float, N:int, omega_samples:int,
        min_width:float, k_max:int, tolerance:float)->dict:
    spectrum = truncatedSpectrum(_perturbed(family, perturbation, t), N=N, omega_samples=omega_samples)
    report = gapReport(spectrum, family.base.frequency, k_max=k_max, min_width=min_width)
    target = utils.frac(k*family.base.alpha)
    best:Optional[Gap] = None
    for gap in report.gaps:
        distance = float(utils.circularDistance(gap.label_value, target))
        if distance < tolerance:
            if (best is None) or (distance < utils.circularDistance(best.label_value, target)):
                best = gap
    if best is None:
        return dict(t=t, width=0.0, label_value=np.nan, label_index=pd.NA, residual=np.nan)
    return dict(t=t, width=best.width, label_value=best.label_value, label_index=best.label_index,
          residual=best.label_residual)

def gapOpeningExperiment(family:Union[JacobiFamily, CMVFamily], perturbation:TrigPoly, k:int,
        t_grid:List[float], N:int=cn.D_N, omega_samples:int=cn.D_SAMPLES,
        min_width:float=cn.D_MIN_WIDTH, k_max:int=cn.D_K_MAX, tolerance:float=cn.D_LABEL_TOL,
        workers:int=cn.D_WORKERS)->pd.DataFrame:
    """Width of the gap labelled frac(k alpha) along b + t p (Jacobi) or v exp(i t p) (CMV).

    Args:
        family: unperturbed family; CMV families need the (lam, h) form
        perturbation (TrigPoly)
        k (int): label index
        t_grid (list): must contain 0
        N (int), omega_samples (int): truncation
        min_width (float): smallest detected gap
        k_max (int): label range
        tolerance (float): label match tolerance
        workers (int): joblib workers

    Returns:
        pd.DataFrame: columns t, width, label_value, label_index, residual. A missing gap has width 0.
    """
    if not any([t == 0 for t in t_grid]):
        raise InvalidInputError("t_grid must include 0.")
    rows = Parallel(n_jobs=workers)(delayed(_openingRow)(family, perturbation, k, float(t), N,
          omega_samples, min_width, k_max, tolerance) for t in t_grid)
    df = pd.DataFrame(rows, columns=OPENING_COLUMNS)
    df["label_index"] = df["label_index"].astype("Int64")
    return df

############ Frequency sweep
def _sweepRows(preset:str, alpha:float, lam:float, N:int, omega_samples:int, min_width:float,
        k_max:int, tolerance:float)->List[dict]:
    spectrum = truncatedSpectrum(makePreset(preset, lam=lam, alpha=alpha), N=N, omega_samples=omega_samples)
    report = gapReport(spectrum, alpha, k_max=k_max, min_width=min_width, tolerance=tolerance)
    return [dict(alpha=alpha, **g._asdict()) for g in report.gaps]

def frequencySweep(preset:str, alphas:List[float], lam:float=cn.D_LAMBDA, N:int=cn.D_N,
        omega_samples:int=cn.D_SAMPLES, min_width:float=cn.D_MIN_WIDTH, k_max:int=cn.D_K_MAX,
        tolerance:float=cn.D_LABEL_TOL, workers:int=cn.D_WORKERS)->pd.DataFrame:
    """Labelled gaps of a preset family at each frequency, e.g. the rational approximants
    p/q of alpha that trace out a butterfly picture.

    Args:
        preset (str): family preset
        alphas (list): frequencies in (0, 1)
        lam (float): coupling of the preset

    Returns:
        pd.DataFrame: one row per gap; columns alpha, left, right, label_value, label_index,
            label_residual
    """
    if len(alphas) == 0:
        raise InvalidInputError("Frequency sweep needs at least one alpha.")
    row_lists = Parallel(n_jobs=workers)(delayed(_sweepRows)(preset, float(a), lam, N, omega_samples,
          min_width, k_max, tolerance) for a in alphas)
    df = pd.DataFrame([r for rows in row_lists for r in rows], columns=SWEEP_COLUMNS)
    df["label_index"] = df["label_index"].astype("Int64")
    return df
