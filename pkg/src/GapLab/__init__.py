__version__ = "0.1.0"
from GapLab.dynamics import Frequency, TorusPoint, BaseDynamics # type:ignore
from GapLab.trig_poly import TrigPoly # type:ignore
from GapLab.matrices import Mat2, Mat2H, su11ToSl2r, sl2rToSu11 # type:ignore
from GapLab.cocycle import CocycleMap, iterate, rotationNumber, lyapunovExponent # type:ignore
from GapLab.hyperbolicity import certifyUniformHyperbolicity, classifyRegime # type:ignore
from GapLab.operators import (JacobiFamily, CMVFamily, jacobiCocycleMap, szegoCocycleMap,  # type:ignore
      makePreset)
from GapLab.spectrum import truncatedJacobiSpectrum, truncatedCMVSpectrum, ids # type:ignore
from GapLab.gaps import (detectGaps, labelGap, gapReport, verifyGapLabelling,  # type:ignore
      gapOpeningExperiment, frequencySweep)
from GapLab.cmv_projection import cmvTripleProduct, cmvTripleInverse, gRangeProbe # type:ignore
from GapLab.jacobi_projection import jacobiTripleInverse, jacobiQuadFactorize # type:ignore
from GapLab.local_conjugacy import buildLocalConjugacy # type:ignore
from GapLab.tongues import (Family1P, traceTongue, transversalitySlopes,  # type:ignore
      openingCriterionCMV, boundarySmoothnessProbe)
from GapLab.experiment_config import ExperimentConfig # type:ignore
from GapLab.executor import Executor, reproduce # type:ignore
import GapLab.constants as cn # type:ignore
# Constructor alias in the style of makePreset
makeExecutor = Executor # type:ignore
