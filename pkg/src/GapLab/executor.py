'''Executes the task described by an ExperimentConfig and writes its artifacts.'''

import GapLab.constants as cn # type: ignore
from GapLab.cmv_projection import (CMVConstants, CMVTripleParams, SzegoClassElem,  # type: ignore
      cmvTripleProduct, cmvTripleProductDirect, cmvTripleInverse, gRangeProbe)
from GapLab.cocycle import CocycleMap, SweepRow, rotationNumber, lyapunovExponent # type: ignore
from GapLab.errors import InvalidInputError, SingularInputError # type: ignore
from GapLab.experiment_config import ExperimentConfig # type: ignore
import GapLab.experiment_config as ec # type: ignore
from GapLab.gaps import gapReport, verifyGapLabelling, gapOpeningExperiment, frequencySweep # type: ignore
from GapLab.hyperbolicity import certifyUniformHyperbolicity, classifyRegime # type: ignore
from GapLab.jacobi_projection import (JacobiClassElem, JacobiTripleParams,  # type: ignore
      jacobiTripleProduct, jacobiTripleInverse, jacobiQuadFactorize)
from GapLab.local_conjugacy import buildLocalConjugacy, conjugacyArc, makeBumpPerturbation # type: ignore
from GapLab.manifest import ManifestMaker, ComparisonResult # type: ignore
from GapLab.matrices import Mat2 # type: ignore
from GapLab.operators import JacobiFamily, CMVFamily, cocycleMap, familyKind # type: ignore
from GapLab.report import Report # type: ignore
from GapLab.spectrum import SpectrumApprox, truncatedJacobiSpectrum, truncatedCMVSpectrum # type: ignore
from GapLab.tongues import (Family1P, JACOBI_COUPLING, CMV_COUPLING, traceTongue,  # type: ignore
      transversalitySlopes, openingCriterionCMV, widthRatios)
from GapLab import utils # type: ignore

import collections
from joblib import Parallel, delayed # type: ignore
import numpy as np # type: ignore
import os
import pandas as pd # type: ignore
from scipy import linalg # type: ignore
import time
from typing import List, Optional, Union

RunResult = collections.namedtuple('RunResult',
      ['out_dir', 'artifacts', 'config_hash', 'manifest_path', 'summary'])
JOHNSON_ETA = 0.01


############ Sweeps
def _sweepRow(family, parameter:float, n_rot:int, burn_in:int, n_lyapunov:int,
        omega_samples:int)->SweepRow:
    cocycle = cocycleMap(family, parameter)
    result = rotationNumber(cocycle, n=n_rot, burn_in=burn_in)
    lyapunov = lyapunovExponent(cocycle, n=n_lyapunov, omega_samples=omega_samples)
    return SweepRow(E=float(parameter), rho=result.rho, rho_stderr=result.stderr,
          rho_verdict=result.verdict, lyapunov=lyapunov)

def rotationSweep(family:Union[JacobiFamily, CMVFamily], grid:List[float], n_rot:int=cn.D_N_ROT,
        burn_in:int=cn.D_BURN_IN, n_lyapunov:int=cn.D_N_LYAPUNOV,
        omega_samples:int=cn.D_LYAPUNOV_SAMPLES, workers:int=cn.D_WORKERS)->pd.DataFrame:
    """Rotation number, its standard error and the Lyapunov exponent along an energy
    (Jacobi) or angle (CMV) grid.

    Returns:
        pd.DataFrame: columns E, rho, rho_stderr, rho_verdict, lyapunov
    """
    rows = Parallel(n_jobs=workers)(delayed(_sweepRow)(family, float(p), n_rot, burn_in,
          n_lyapunov, omega_samples) for p in grid)
    return pd.DataFrame(rows, columns=list(SweepRow._fields))

def _twoRho(family, parameter:float, n_rot:int, burn_in:int)->float:
    return 2*rotationNumber(cocycleMap(family, parameter), n=n_rot, burn_in=burn_in).rho

def dualityResiduals(family:Union[JacobiFamily, CMVFamily], grid:List[float],
        spectrum:SpectrumApprox, n_rot:int=cn.D_N_ROT, burn_in:int=cn.D_BURN_IN,
        workers:int=cn.D_WORKERS)->pd.DataFrame:
    """Compares 2 rho with 1 - k (Jacobi) or k (CMV) on a grid.

    Returns:
        pd.DataFrame: columns parameter, two_rho, ids, residual
    """
    two_rhos = Parallel(n_jobs=workers)(delayed(_twoRho)(family, float(p), n_rot, burn_in)
          for p in grid)
    ids_arr = np.asarray(spectrum.ids(np.asarray(grid, dtype=float)), dtype=float)
    two_rho_arr = np.array(two_rhos)
    if familyKind(family) == cn.JACOBI:
        residual_arr = np.abs(two_rho_arr - (1 - ids_arr))
    else:
        residual_arr = np.abs(two_rho_arr - ids_arr)
    return pd.DataFrame({"parameter": np.asarray(grid, dtype=float), "two_rho": two_rho_arr,
          "ids": ids_arr, "residual": residual_arr})

def _certify(family, parameter:float, grid:int, n_max:int):
    return certifyUniformHyperbolicity(cocycleMap(family, parameter), grid=grid, n_max=n_max)

def johnsonConsistency(family:Union[JacobiFamily, CMVFamily], grid:List[float],
        spectrum:SpectrumApprox, eta:float=JOHNSON_ETA, density_threshold:Optional[float]=None,
        uh_grid:int=cn.D_UH_GRID, n_max:int=cn.D_UH_N_MAX, workers:int=cn.D_WORKERS):
    """UH verdicts against the share of pooled eigenvalues in [x - eta, x + eta].
    A point is in the spectrum when that share exceeds density_threshold.

    Returns:
        pd.DataFrame: parameter, verdict, density, in_spectrum, agrees
        dict: agreement_rate, inconclusive_rate, num_conflict
    """
    if density_threshold is None:
        density_threshold = 2*spectrum.omega_samples/len(spectrum)
    certificates = Parallel(n_jobs=workers)(delayed(_certify)(family, float(p), uh_grid, n_max)
          for p in grid)
    grid_arr = np.asarray(grid, dtype=float)
    density_arr = np.asarray(spectrum.ids(grid_arr + eta)) - np.asarray(spectrum.ids(grid_arr - eta))
    verdicts = [c.verdict for c in certificates]
    in_spectrum_arr = density_arr > density_threshold
    agrees = [((v == cn.UH) and not s) or ((v == cn.NOT_UH) and s)
          for v, s in zip(verdicts, in_spectrum_arr)]
    df = pd.DataFrame({"parameter": grid_arr, "verdict": verdicts, "density": density_arr,
          "in_spectrum": in_spectrum_arr, "agrees": agrees})
    num_point = len(df)
    summary = dict(agreement_rate=float(np.mean(agrees)) if num_point > 0 else 1.0,
          inconclusive_rate=float(np.mean([v == cn.INCONCLUSIVE for v in verdicts])) if num_point > 0 else 0.0,
          num_conflict=int(np.sum([(v == cn.UH) and s for v, s in zip(verdicts, in_spectrum_arr)])),
          eta=eta, density_threshold=density_threshold)
    return df, summary

def _classifyRow(family, parameter:float, epsilons:List[float], n:int, omega_samples:int)->dict:
    label = classifyRegime(cocycleMap(family, parameter), epsilons=epsilons, n=n,
          omega_samples=omega_samples)
    row = dict(parameter=parameter, regime=label.regime, lyapunov_on_circle=label.lyapunov_on_circle,
          threshold=label.threshold)
    for epsilon, value in label.lyapunov_strip:
        row[f"lyapunov_{epsilon:g}"] = value
    return row


############ Executor
class Executor(object):
    """Runs one ExperimentConfig."""

    def __init__(self, config:ExperimentConfig, workers:int=cn.D_WORKERS, out_dir:Optional[str]=None):
        """
        Args:
            config (ExperimentConfig)
            workers (int): joblib workers; artifacts do not depend on it
            out_dir (str): overrides config.out_dir; a temporary directory when both are None
        """
        if workers < 1:
            raise InvalidInputError(f"workers must be positive, got {workers}.")
        self.config = config
        self.workers = workers
        if out_dir is None:
            out_dir = config.out_dir
        self.out_dir = utils.makeRunDir(out_dir, config.task)
        self.family = config.family.makeFamily()
        self.family_kind = familyKind(self.family)
        self.report = Report(self.out_dir, config.config_hash,
              metadata=dict(task=config.task, family=self.family.toDct()))

    @property
    def numerics(self)->ec.NumericsConfig:
        return self.config.numerics

    @property
    def options(self)->ec.OptionsConfig:
        return self.config.options

    @property
    def parameter_name(self)->str:
        return "E" if self.family_kind == cn.JACOBI else "theta"

    @property
    def grid(self)->List[float]:
        return [float(p) for p in self.numerics.parameterGrid(self.family_kind)]

    def execute(self)->RunResult:
        """Runs the task, writes the artifacts and the manifest."""
        start = time.perf_counter()
        method_dct = {
              cn.TASK_SPECTRUM: self.executeSpectrum,
              cn.TASK_IDS: self.executeIDS,
              cn.TASK_ROTATION: self.executeRotation,
              cn.TASK_UH: self.executeUH,
              cn.TASK_CLASSIFY: self.executeClassify,
              cn.TASK_GAPS: self.executeGaps,
              cn.TASK_OPEN: self.executeOpen,
              cn.TASK_PROJECT: self.executeProject,
              cn.TASK_TONGUES: self.executeTongues,
              }
        summary = method_dct[self.config.task]()
        wall_time = time.perf_counter() - start
        maker = ManifestMaker(self.out_dir)
        manifest_path = maker.make(self.config.echo(), self.config.config_hash,
              self.report.artifacts, wall_time, seeds=dict(seed=self.numerics.seed))
        return RunResult(out_dir=self.out_dir, artifacts=list(self.report.artifacts),
              config_hash=self.config.config_hash, manifest_path=manifest_path, summary=summary)

    ############ Tasks
    def makeSpectrum(self)->SpectrumApprox:
        boundary = self.numerics.boundary or self.config.boundary
        if self.family_kind == cn.JACOBI:
            return truncatedJacobiSpectrum(self.family, omega0=self.numerics.omega0,  # type: ignore
                  N=self.numerics.N, omega_samples=self.numerics.samples, workers=self.workers,
                  boundary=boundary)
        return truncatedCMVSpectrum(self.family, omega0=self.numerics.omega0, N=self.numerics.N,  # type: ignore
              omega_samples=self.numerics.samples,
              boundary_coeff=np.exp(1j*self.numerics.boundary_phase), workers=self.workers,
              boundary=boundary)

    def executeSpectrum(self)->dict:
        spectrum = self.makeSpectrum()
        self.report.addJSON("spectrum", spectrum.toDct())
        self.report.addCSV("histogram", spectrum.histogram(bins=self.options.bins))
        return dict(num_eigenvalue=len(spectrum), minimum=float(spectrum.eigenvalues[0]),
              maximum=float(spectrum.eigenvalues[-1]))

    def executeIDS(self)->dict:
        spectrum = self.makeSpectrum()
        df = spectrum.idsTable(np.array(self.grid)).toDataFrame()
        df.columns = [self.parameter_name, "ids"]
        self.report.addCSV("ids", df)
        return dict(num_point=len(df))

    def executeRotation(self)->dict:
        df = rotationSweep(self.family, self.grid, n_rot=self.numerics.n_rot,
              burn_in=self.numerics.burn_in, n_lyapunov=self.numerics.n_lyapunov,
              omega_samples=self.numerics.samples, workers=self.workers)
        if self.family_kind == cn.CMV:
            df = df.rename(columns={"E": "theta"})
        self.report.addCSV("rotation", df.drop(columns=["rho_verdict"]))
        spectrum = self.makeSpectrum()
        duality_df = dualityResiduals(self.family, self.grid, spectrum, n_rot=self.numerics.n_rot,
              burn_in=self.numerics.burn_in, workers=self.workers)
        self.report.addCSV("duality", duality_df)
        return dict(max_duality_residual=float(duality_df["residual"].max()),
              num_inconclusive=int((df["rho_verdict"] == cn.INCONCLUSIVE).sum()))

    def executeUH(self)->dict:
        spectrum = self.makeSpectrum()
        df, summary = johnsonConsistency(self.family, self.grid, spectrum,
              density_threshold=self.numerics.density_threshold, uh_grid=self.numerics.grid,
              n_max=self.numerics.n_max, workers=self.workers)
        self.report.addCSV("uh", df)
        self.report.addJSON("johnson", summary)
        return summary

    def executeClassify(self)->dict:
        rows = Parallel(n_jobs=self.workers)(delayed(_classifyRow)(self.family, p,
              list(self.numerics.epsilons), self.numerics.n_lyapunov, self.numerics.samples)
              for p in self.grid)
        df = pd.DataFrame(rows)
        self.report.addCSV("classify", df)
        return {r: int(np.sum(df["regime"] == r)) for r in cn.REGIMES}

    def executeGaps(self)->dict:
        spectrum = self.makeSpectrum()
        report = gapReport(spectrum, self.family.base.frequency, k_max=self.numerics.k_max,
              min_width=self.numerics.min_width, density_threshold=self.numerics.density_threshold,
              tolerance=self.numerics.label_tol)
        is_labelled, df = verifyGapLabelling(report)
        dct = report.toDct()
        dct["table"] = df.to_markdown(index=False, floatfmt=".6g")
        self.report.addJSON("gaps", dct)
        self.report.addCSV("gaps", df)
        summary = dict(num_gap=len(report.gaps), all_labelled=is_labelled)
        if len(self.options.alphas) > 0:
            if self.config.family.preset is None:
                raise InvalidInputError("A frequency sweep needs a family preset.")
            sweep_df = frequencySweep(self.config.family.preset, self.options.alphas,
                  lam=self.config.family.lam, N=self.numerics.N, omega_samples=self.numerics.samples,
                  min_width=self.numerics.min_width, k_max=self.numerics.k_max,
                  tolerance=self.numerics.label_tol, workers=self.workers)
            self.report.addCSV("frequency_sweep", sweep_df)
            summary["num_sweep_gap"] = len(sweep_df)
        return summary

    def executeOpen(self)->dict:
        df = gapOpeningExperiment(self.family, self.options.makePerturbation(), self.options.k,
              self.options.tGrid(), N=self.numerics.N, omega_samples=self.numerics.samples,
              min_width=self.numerics.min_width, k_max=self.numerics.k_max,
              tolerance=self.numerics.label_tol, workers=self.workers)
        self.report.addCSV("opening", df)
        return dict(max_width=float(df["width"].max()))

    ############ Projection
    def executeProject(self)->dict:
        projection_dct = {
              ec.PROJECTION_CMV: self._projectCMV,
              ec.PROJECTION_JACOBI: self._projectJacobi,
              ec.PROJECTION_QUAD: self._projectQuad,
              ec.PROJECTION_G_RANGE: self._projectGRange,
              ec.PROJECTION_CONJUGACY: self._projectConjugacy,
              }
        return projection_dct[self.options.projection]()

    def _rng(self):
        return np.random.default_rng(self.numerics.seed)

    def _writeTrials(self, rows:List[dict])->dict:
        df = pd.DataFrame(rows)
        self.report.addCSV("projection", df)
        summary = {f"max_{c}": float(df[c].max()) for c in df.columns if c != "trial"}
        summary["num_trial"] = len(df)
        self.report.addJSON("projection", summary)
        return summary

    def _projectCMV(self)->dict:
        opts = self.options
        consts = CMVConstants(opts.theta, opts.phi, opts.v)
        rng = self._rng()
        rows = []
        for trial in range(opts.num_trial):
            offset_arr = opts.perturbation_size*rng.uniform(-1, 1, size=3)
            params = CMVTripleParams(opts.phi + offset_arr[0], opts.v + offset_arr[1],
                  opts.phi + offset_arr[2])
            target = cmvTripleProduct(params, consts)
            direct = cmvTripleProductDirect(params, consts)
            recovered = cmvTripleInverse(target, consts)
            product = cmvTripleProduct(recovered, consts)
            rows.append(dict(trial=trial,
                  closed_form_error=max(abs(target.a - direct.a), abs(target.b - direct.b)),
                  reconstruction_error=max(abs(product.a - target.a), abs(product.b - target.b)),
                  parameter_error=float(np.max(np.abs(np.array(recovered) - np.array(params))))))
        return self._writeTrials(rows)

    def _projectJacobi(self)->dict:
        a1, a2, a3 = self.options.scales[:3]
        rng = self._rng()
        rows = []
        num_singular = 0
        for trial in range(self.options.num_trial):
            target = jacobiTripleProduct(JacobiTripleParams(*rng.normal(size=3)), a1, a2, a3)
            try:
                params = jacobiTripleInverse(target, a1, a2, a3)
            except SingularInputError:
                num_singular += 1
                continue
            error = np.max(np.abs(jacobiTripleProduct(params, a1, a2, a3).toArray() - target.toArray()))
            rows.append(dict(trial=trial, reconstruction_error=float(error)))
        summary = self._writeTrials(rows)
        summary["num_singular"] = num_singular
        return summary

    def _projectQuad(self)->dict:
        if len(self.options.scales) < 4:
            raise InvalidInputError(f"Quadruple factorization needs 4 scales, got {self.options.scales}.")
        a1, a2, a3, a4 = self.options.scales[:4]
        rng = self._rng()
        rows = []
        for trial in range(self.options.num_trial):
            x, y, z = rng.normal(size=3)
            generator = np.array([[x, y], [z, -x]])
            generator = self.options.perturbation_size*generator/np.linalg.norm(generator, 2)
            target = Mat2.fromArray(linalg.expm(generator))
            result = jacobiQuadFactorize(target, a1, a2, a3, a4)
            product = np.identity(2)
            for E, a in zip([result.E1, result.E2, result.E3, result.E4], [a1, a2, a3, a4]):
                product = JacobiClassElem(a, E).toMat2().toArray() @ product
            rows.append(dict(trial=trial, reconstruction_error=float(np.max(np.abs(product - target.toArray()))),
                  num_root=len(result.roots)))
        return self._writeTrials(rows)

    def _projectGRange(self)->dict:
        opts = self.options
        probe = gRangeProbe(CMVConstants(opts.theta, opts.phi, opts.v), opts.v2, grid=opts.probe_grid)
        self.report.addCSV("radius", probe.radius_df)
        summary = dict(has_hole=probe.has_hole, lam=probe.lam, min_radius_sum=probe.min_radius_sum,
              min_sum_phi1=probe.min_sum_phi1, normalization_mismatch=probe.normalization_mismatch)
        self.report.addJSON("g_range", summary)
        return summary

    def _projectConjugacy(self)->dict:
        opts = self.options
        base = self.family.base
        # The class defaults to the kind of the configured family
        if (opts.conjugacy_class or self.family_kind) == cn.CMV:
            mat = SzegoClassElem(opts.theta, opts.phi, opts.v).toMat2H()
        else:
            mat = JacobiClassElem(opts.scales[0], opts.t).toMat2()
        original = CocycleMap.constant(base, mat, description="class element")
        arc = conjugacyArc(original)
        perturbed = makeBumpPerturbation(original, arc, size=opts.bump_size, seed=self.numerics.seed)
        conjugacy = buildLocalConjugacy(original, perturbed, arc=arc,
              grid=opts.conjugacy_grid)
        self.report.addJSON("conjugacy", conjugacy.toDct())
        return dict(case=conjugacy.case, max_residual=conjugacy.max_residual,
              max_class_error=conjugacy.max_class_error,
              interpolation_error=conjugacy.interpolation_error)

    ############ Tongues
    def makeFamily1P(self)->Family1P:
        perturbation = self.options.makePerturbation()
        if self.family_kind == cn.JACOBI:
            return Family1P(JACOBI_COUPLING, perturbation, base=self.family.base,
                  a=self.family.a)  # type: ignore
        if self.family.lam is None:  # type: ignore
            raise InvalidInputError("Tongues of a CMV family need the (lam, h) form.")
        return Family1P(CMV_COUPLING, perturbation, base=self.family.base,
              lam=self.family.lam)  # type: ignore

    def executeTongues(self)->dict:
        opts = self.options
        family = self.makeFamily1P()
        curve = traceTongue(family, opts.k, opts.deltaGrid(), tol=self.numerics.tol,
              rho_tol=self.numerics.rho_tol, n_rot=self.numerics.n_rot,
              burn_in=self.numerics.burn_in, is_classify=opts.is_classify, workers=self.workers)
        df = curve.toDataFrame()
        df["regime"] = df["regime"].fillna("")
        self.report.addCSV("tongue", df)
        summary:dict = dict(k=opts.k, num_fallback=curve.num_fallback,
              max_width=float(np.max(curve.widths)))
        summary["width_ratios"] = widthRatios(curve).to_dict(orient="list")
        if opts.slope_delta is not None:
            step = opts.slope_step if opts.slope_step is not None else \
                  float(curve.delta_grid[1] - curve.delta_grid[0])
            slopes = transversalitySlopes(curve, opts.slope_delta, step, slope_tol=opts.slope_tol)
            summary["slopes"] = dict(slopes._asdict())
        if family.kind == CMV_COUPLING:
            criterion = openingCriterionCMV(family.perturbation, opts.k)
            summary["opening_criterion"] = dict(criterion._asdict())
        summary = utils.toJSONable(summary)
        self.report.addJSON("tongue", summary)
        return summary


############ Reproduce
def reproduce(manifest_path:str, workers:int=cn.D_WORKERS)->ComparisonResult:
    """Reruns the config of a manifest in a temporary directory and compares artifacts."""
    manifest = ManifestMaker.read(manifest_path)
    config = ExperimentConfig.model_validate(manifest["config"])
    if config.config_hash != manifest["config_hash"]:
        return ComparisonResult([(cn.MANIFEST_FILE, "config does not match its recorded hash")])
    maker = ManifestMaker(os.path.dirname(os.path.abspath(manifest_path)))
    temp_dir = maker.makeTempDir()
    try:
        result = Executor(config, workers=workers, out_dir=temp_dir).execute()
        comparison = maker.compare(temp_dir, result.artifacts)
    finally:
        maker.cleanUp()
    return comparison
