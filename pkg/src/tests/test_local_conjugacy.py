import GapLab.constants as cn # type: ignore
from GapLab.cocycle import CocycleMap # type: ignore
from GapLab.dynamics import BaseDynamics # type: ignore
from GapLab.errors import InvalidInputError, PreconditionError # type: ignore
from GapLab.local_conjugacy import (buildLocalConjugacy, makeBumpPerturbation,  # type: ignore
      defaultArc, conjugacyArc, CASE_CMV, CASE_JACOBI_TRIPLE, CASE_JACOBI_QUAD)
from GapLab.matrices import Mat2, Mat2H # type: ignore
from GapLab.operators import jacobiCocycleMap, makePreset # type: ignore
from GapLab import utils # type: ignore

import numpy as np # type: ignore
import unittest


IGNORE_TEST = False
IS_PLOT = False
GRID = 256
ALPHA = cn.GOLDEN_ALPHA


#############################
# Tests
#############################
class TestArc(unittest.TestCase):

    def testDefaultArc(self):
        if IGNORE_TEST:
            return
        start, end = defaultArc(ALPHA)
        self.assertEqual(start, 0.0)
        self.assertAlmostEqual(end, utils.circularDistance(2*ALPHA, 0.0)/3)
        _, end = defaultArc(ALPHA, num_factor=4)
        self.assertAlmostEqual(end, utils.circularDistance(3*ALPHA, 0.0)/3)

    def testConjugacyArc(self):
        if IGNORE_TEST:
            return
        base = BaseDynamics.makeTorusRotation()
        trace_zero = CocycleMap.constant(base, Mat2(0.0, -1.0, 1.0, 0.0))
        self.assertEqual(conjugacyArc(trace_zero), defaultArc(ALPHA, num_factor=4))
        szego = CocycleMap.constant(base, Mat2H.fromParameters(0.3, 0.7, 0.4))
        self.assertEqual(conjugacyArc(szego), defaultArc(ALPHA))


class TestLocalConjugacy(unittest.TestCase):

    def setUp(self):
        self.base = BaseDynamics.makeTorusRotation()

    def _check(self, original, case):
        arc = conjugacyArc(original)
        perturbed = makeBumpPerturbation(original, arc, size=1e-3)
        conjugacy = buildLocalConjugacy(original, perturbed, grid=GRID)
        self.assertEqual(conjugacy.case, case)
        self.assertLess(conjugacy.max_residual, 1e-7)
        self.assertLess(conjugacy.max_class_error, 1e-8)
        # Phi equals the original far from the arc
        far = 0.5*(arc[1] + 1.0)
        self.assertTrue(np.allclose(conjugacy.phi(far), original.evaluateArray(np.array([far]))[0]))
        dct = conjugacy.toDct()
        self.assertEqual(len(dct["phi"]), GRID)
        return conjugacy

    def testSzego(self):
        if IGNORE_TEST:
            return
        original = CocycleMap.constant(self.base, Mat2H.fromParameters(0.3, 0.7, 0.4))
        conjugacy = self._check(original, CASE_CMV)
        self.assertEqual(conjugacy.num_factor, 3)

    def testJacobiTriple(self):
        if IGNORE_TEST:
            return
        original = CocycleMap.constant(self.base, Mat2(0.5, -1.0, 1.0, 0.0))
        conjugacy = self._check(original, CASE_JACOBI_TRIPLE)
        self.assertEqual(conjugacy.num_factor, 3)

    def testJacobiQuad(self):
        if IGNORE_TEST:
            return
        original = CocycleMap.constant(self.base, Mat2(0.0, -1.0, 1.0, 0.0))
        conjugacy = self._check(original, CASE_JACOBI_QUAD)
        self.assertEqual(conjugacy.num_factor, 4)

    def testUnperturbed(self):
        if IGNORE_TEST:
            return
        original = CocycleMap.constant(self.base, Mat2(0.5, -1.0, 1.0, 0.0))
        conjugacy = buildLocalConjugacy(original, original, grid=GRID)
        self.assertLess(np.max(np.abs(conjugacy.phi_arr - original.evaluateArray(self.base.gridArray(GRID)))),
              1e-9)

    def testInvalid(self):
        if IGNORE_TEST:
            return
        amo = jacobiCocycleMap(makePreset(cn.PRESET_AMO), 0.3)
        with self.assertRaises(InvalidInputError):
            buildLocalConjugacy(amo, amo, grid=GRID)
        original = CocycleMap.constant(self.base, Mat2(0.5, -1.0, 1.0, 0.0))
        with self.assertRaises(PreconditionError):
            buildLocalConjugacy(original, original, arc=(0.0, 0.3), grid=GRID)
        arc = conjugacyArc(original)
        perturbed = makeBumpPerturbation(original, arc, support=(0.5, 0.6))
        with self.assertRaises(PreconditionError):
            buildLocalConjugacy(original, perturbed, arc=arc, grid=GRID)


if __name__ == '__main__':
    unittest.main()
