import GapLab.constants as cn # type: ignore
from GapLab.errors import ComputationalError, InvalidInputError # type: ignore
from GapLab.operators import JacobiFamily, CMVFamily # type: ignore
from GapLab.tongues import (Family1P, TongueCurve, TraceSettings, JACOBI_COUPLING,  # type: ignore
      CMV_COUPLING, traceTongue, transversalitySlopes, openingCriterionCMV,
      boundarySmoothnessProbe, widthRatios, tonguesGapConsistency, defaultSettings)
from GapLab.trig_poly import TrigPoly # type: ignore

import numpy as np # type: ignore
import unittest
import warnings


IGNORE_TEST = False
IS_PLOT = False
ALPHA = cn.GOLDEN_ALPHA
DELTA_GRID = np.linspace(0, 0.1, 11)
TRACE_KWARGS = dict(tol=1e-6, rho_tol=1e-6, n_rot=20000, burn_in=100, is_classify=False)


def makeLinearCurve(slope_minus=-2.0, slope_plus=3.0, **kwargs):
    return TongueCurve(1, DELTA_GRID, 1 + slope_minus*DELTA_GRID, 1 + slope_plus*DELTA_GRID, **kwargs)


#############################
# Tests
#############################
class TestFamily1P(unittest.TestCase):

    def setUp(self):
        self.jacobi = Family1P(JACOBI_COUPLING, TrigPoly.cosine())
        self.cmv = Family1P(CMV_COUPLING, TrigPoly.cosine(), lam=0.5)

    def testConstructor(self):
        if IGNORE_TEST:
            return
        self.assertTrue(self.jacobi.is_jacobi)
        self.assertFalse(self.cmv.is_jacobi)
        self.assertEqual(self.jacobi.alpha, ALPHA)
        with self.assertRaises(InvalidInputError):
            Family1P("unknown", TrigPoly.cosine())

    def testFamilyAt(self):
        if IGNORE_TEST:
            return
        family = self.jacobi.familyAt(0.5)
        self.assertTrue(isinstance(family, JacobiFamily))
        self.assertEqual(family.b, TrigPoly.cosine(0.5))
        family = self.cmv.familyAt(0.2)
        self.assertTrue(isinstance(family, CMVFamily))
        self.assertEqual(family.lam, 0.5)
        self.assertEqual(family.h, TrigPoly.cosine(0.2))

    def testLabels(self):
        if IGNORE_TEST:
            return
        self.assertAlmostEqual(self.jacobi.targetLabel(1), ALPHA)
        self.assertAlmostEqual(self.jacobi.idsLabel(1), 1 - ALPHA)
        self.assertAlmostEqual(self.cmv.idsLabel(1), ALPHA)
        self.assertAlmostEqual(self.cmv.targetLabel(-1), 1 - ALPHA)

    def testDefaultBracket(self):
        if IGNORE_TEST:
            return
        low, high = self.jacobi.defaultBracket(1.0)
        self.assertAlmostEqual(high, 3.1)
        self.assertAlmostEqual(low, -3.1)
        low, high = self.cmv.defaultBracket(1.0)
        self.assertTrue(0 < low < high < 2*np.pi)


class TestTongueCurve(unittest.TestCase):

    def testConstructor(self):
        if IGNORE_TEST:
            return
        curve = makeLinearCurve()
        self.assertTrue(np.allclose(curve.widths, 5*DELTA_GRID))
        self.assertEqual(curve.tol, defaultSettings().tol)
        self.assertEqual(curve.regimes, [None]*11)
        df = curve.toDataFrame()
        self.assertEqual(list(df.columns), ["delta", "E_minus", "E_plus", "width", "regime"])
        with self.assertRaises(InvalidInputError):
            TongueCurve(1, [0.1, 0.0], [0, 0], [0, 0])

    def testBoundaryAt(self):
        if IGNORE_TEST:
            return
        curve = makeLinearCurve()
        E_minus, E_plus = curve.boundaryAt(0.05)
        self.assertAlmostEqual(E_minus, 0.9)
        self.assertAlmostEqual(E_plus, 1.15)
        with self.assertRaises(InvalidInputError):
            curve.boundaryAt(0.055)


class TestSlopes(unittest.TestCase):

    def testCentral(self):
        if IGNORE_TEST:
            return
        report = transversalitySlopes(makeLinearCurve(), 0.05, 0.01)
        self.assertEqual(report.stencil, "central")
        self.assertAlmostEqual(report.slope_minus, -2.0)
        self.assertAlmostEqual(report.slope_plus, 3.0)
        self.assertTrue(report.transversal)
        self.assertIsNone(report.h_hat_k)

    def testOneSided(self):
        if IGNORE_TEST:
            return
        report = transversalitySlopes(makeLinearCurve(), 0.0, 0.01)
        self.assertEqual(report.stencil, "one_sided")
        self.assertAlmostEqual(report.slope_minus, -2.0)
        self.assertAlmostEqual(report.slope_plus, 3.0)

    def testTangential(self):
        if IGNORE_TEST:
            return
        curve = TongueCurve(2, DELTA_GRID, 1 - DELTA_GRID**2, 1 + DELTA_GRID**2)
        report = transversalitySlopes(curve, 0.0, 0.01)
        self.assertFalse(report.transversal)

    def testInvalid(self):
        if IGNORE_TEST:
            return
        with self.assertRaises(InvalidInputError):
            transversalitySlopes(makeLinearCurve(), 0.05, 0.0)
        settings = defaultSettings()._replace(tol=1e-3)
        with self.assertRaises(ComputationalError):
            transversalitySlopes(makeLinearCurve(settings=settings), 0.05, 0.01)

    def testOpeningCriterion(self):
        if IGNORE_TEST:
            return
        criterion = openingCriterionCMV(TrigPoly.cosine(), 1)
        self.assertEqual(criterion.h_hat_k, 0.5)
        self.assertTrue(criterion.predicted_transversal)
        self.assertFalse(openingCriterionCMV(TrigPoly.cosine(), 2).predicted_transversal)


class TestSmoothness(unittest.TestCase):

    def testSmooth(self):
        if IGNORE_TEST:
            return
        curve = TongueCurve(1, DELTA_GRID, DELTA_GRID**3, 1 + DELTA_GRID**2)
        report = boundarySmoothnessProbe(curve)
        self.assertEqual(report.num_window, 5)
        self.assertEqual(report.flagged, [])
        self.assertLess(report.max_residual, 1e-10)

    def testKink(self):
        if IGNORE_TEST:
            return
        curve = TongueCurve(1, DELTA_GRID, DELTA_GRID**3, 1 + np.abs(DELTA_GRID - 0.05))
        report = boundarySmoothnessProbe(curve)
        self.assertGreater(len(report.flagged), 0)
        self.assertTrue(all([f[1] == "plus" for f in report.flagged]))

    def testSkipsOtherRegimes(self):
        if IGNORE_TEST:
            return
        curve = TongueCurve(1, DELTA_GRID, DELTA_GRID**3, 1 + np.abs(DELTA_GRID - 0.05),
              regimes=[cn.SUPERCRITICAL]*11)
        report = boundarySmoothnessProbe(curve)
        self.assertEqual(report.num_skipped, 5)
        self.assertEqual(report.flagged, [])

    def testTooShort(self):
        if IGNORE_TEST:
            return
        curve = TongueCurve(1, [0.0, 0.1], [0, 0], [0, 0])
        with self.assertRaises(InvalidInputError):
            boundarySmoothnessProbe(curve)


class TestWidthRatios(unittest.TestCase):

    def testCurve(self):
        if IGNORE_TEST:
            return
        df = widthRatios(makeLinearCurve())
        self.assertEqual(list(df.columns), ["delta", "width", "ratio"])
        self.assertTrue(np.allclose(df["ratio"].values[1:], 5.0))

    def testFamilyNeedsDeltas(self):
        if IGNORE_TEST:
            return
        with self.assertRaises(InvalidInputError):
            widthRatios(Family1P(JACOBI_COUPLING, TrigPoly.cosine()), k=1)


class TestTraceTongue(unittest.TestCase):

    def setUp(self):
        warnings.simplefilter("ignore")

    def tearDown(self):
        warnings.resetwarnings()

    def testJacobiGap(self):
        if IGNORE_TEST:
            return
        # Coupling 1 is the almost Mathieu operator with lambda = 0.5
        family = Family1P(JACOBI_COUPLING, TrigPoly.cosine())
        curve = traceTongue(family, 1, [1.0], **TRACE_KWARGS)
        self.assertGreater(curve.widths[0], cn.D_MIN_WIDTH)
        df = tonguesGapConsistency(curve, N=1000, omega_samples=2)
        self.assertEqual(len(df), 1)
        self.assertTrue(df["gap_found"].iloc[0])

    def testCMVCollapsed(self):
        if IGNORE_TEST:
            return
        family = Family1P(CMV_COUPLING, TrigPoly.cosine(), lam=0.5)
        curve = traceTongue(family, 1, [0.0], **TRACE_KWARGS)
        self.assertLess(curve.widths[0], 1e-4)
        self.assertTrue(0 < curve.E_minus[0] < 2*np.pi)

    def testCMVOpening(self):
        if IGNORE_TEST:
            return
        family = Family1P(CMV_COUPLING, TrigPoly.cosine(), lam=0.5)
        curve = traceTongue(family, 1, [0.0, 0.05, 0.1], workers=2, **TRACE_KWARGS)
        self.assertTrue(np.all(curve.E_minus <= curve.E_plus))
        self.assertGreater(curve.widths[2], curve.widths[0])
        report = transversalitySlopes(curve, 0.0, 0.05)
        self.assertEqual(report.stencil, "one_sided")
        self.assertEqual(report.h_hat_k, 0.5)
        self.assertTrue(report.transversal)


if __name__ == '__main__':
    unittest.main()
