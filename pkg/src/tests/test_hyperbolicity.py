import GapLab.constants as cn # type: ignore
from GapLab.cocycle import CocycleMap # type: ignore
from GapLab.dynamics import BaseDynamics # type: ignore
from GapLab.errors import InvalidInputError # type: ignore
from GapLab.hyperbolicity import (certifyUniformHyperbolicity, classifyRegime,  # type: ignore
      batchProduct)
from GapLab.matrices import Mat2, Mat2H # type: ignore
from GapLab.operators import jacobiCocycleMap, szegoCocycleMap, makePreset # type: ignore

import numpy as np # type: ignore
import unittest


IGNORE_TEST = False
IS_PLOT = False


#############################
# Tests
#############################
class TestCertifyUniformHyperbolicity(unittest.TestCase):

    def setUp(self):
        self.base = BaseDynamics.makeTorusRotation()

    def testHyperbolicConstant(self):
        if IGNORE_TEST:
            return
        cocycle = CocycleMap.constant(self.base, Mat2(2.0, 0.0, 0.0, 0.5))
        certificate = certifyUniformHyperbolicity(cocycle, n_max=64)
        self.assertTrue(certificate)
        self.assertEqual(certificate.n_star, 8)
        self.assertAlmostEqual(certificate.growth_rate, 2.0, delta=0.05)
        self.assertLessEqual(certificate.cone_rate, certificate.growth_rate)
        self.assertAlmostEqual(certificate.min_norm_ratio, certificate.growth_rate/certificate.cone_rate)
        self.assertIsNone(certificate.elliptic_fraction)

    def testEllipticConstant(self):
        if IGNORE_TEST:
            return
        # Free Jacobi cocycle at E = 1 has order 6, so no power of 2 is the identity
        cocycle = jacobiCocycleMap(makePreset(cn.PRESET_FREE), 1.0)
        certificate = certifyUniformHyperbolicity(cocycle, n_max=64)
        self.assertFalse(certificate)
        self.assertEqual(certificate.verdict, cn.NOT_UH)
        self.assertAlmostEqual(certificate.elliptic_fraction, 1.0)

    def testOutsideSpectrum(self):
        if IGNORE_TEST:
            return
        cocycle = jacobiCocycleMap(makePreset(cn.PRESET_FREE), 3.0)
        self.assertEqual(certifyUniformHyperbolicity(cocycle, n_max=64).verdict, cn.UH)
        cmv = makePreset(cn.PRESET_CMV_CONSTANT, lam=0.5)
        # The constant-coefficient CMV spectrum avoids a neighborhood of theta = 0
        szego = szegoCocycleMap(cmv, theta=0.0)
        self.assertEqual(certifyUniformHyperbolicity(szego, n_max=64).verdict, cn.UH)

    def testInvalid(self):
        if IGNORE_TEST:
            return
        cocycle = CocycleMap.constant(self.base, Mat2.identity())
        with self.assertRaises(InvalidInputError):
            certifyUniformHyperbolicity(cocycle, grid=10)
        with self.assertRaises(InvalidInputError):
            certifyUniformHyperbolicity(cocycle, min_expansion=1.0)

    def testBatchProduct(self):
        if IGNORE_TEST:
            return
        cocycle = CocycleMap.constant(self.base, Mat2H.fromParameters(0.2, 0.1, 0.3))
        product_arr, log_scale_arr = batchProduct(cocycle, self.base.gridArray(4), 5)
        self.assertEqual(product_arr.shape, (4, 2, 2))
        det_arr = np.linalg.det(product_arr)*np.exp(2*log_scale_arr)
        self.assertTrue(np.allclose(det_arr, 1.0))


class TestClassifyRegime(unittest.TestCase):

    def testSupercritical(self):
        if IGNORE_TEST:
            return
        cocycle = jacobiCocycleMap(makePreset(cn.PRESET_AMO, lam=2.0), 0.0)
        label = classifyRegime(cocycle, n=2000, omega_samples=4)
        self.assertEqual(label.regime, cn.SUPERCRITICAL)
        self.assertGreater(label.lyapunov_on_circle, 0.6)

    def testSubcritical(self):
        if IGNORE_TEST:
            return
        cocycle = jacobiCocycleMap(makePreset(cn.PRESET_FREE), 0.5)
        label = classifyRegime(cocycle, n=2000, omega_samples=4)
        self.assertEqual(label.regime, cn.SUBCRITICAL)
        self.assertEqual(len(label.lyapunov_strip), len(cn.D_EPSILONS))
        self.assertAlmostEqual(label.threshold, cn.D_REGIME_SCALE/2000)
        dct = label.toDct()
        self.assertEqual(dct["regime"], cn.SUBCRITICAL)

    def testInvalid(self):
        if IGNORE_TEST:
            return
        cocycle = jacobiCocycleMap(makePreset(cn.PRESET_FREE), 0.5)
        with self.assertRaises(InvalidInputError):
            classifyRegime(cocycle, epsilons=[0.0, 0.1])


if __name__ == '__main__':
    unittest.main()
