import GapLab.constants as cn # type: ignore
from GapLab.errors import InvalidInputError, GapLabWarning # type: ignore
from GapLab.operators import makePreset # type: ignore
from GapLab.spectrum import (truncatedJacobiSpectrum, truncatedCMVSpectrum,  # type: ignore
      truncatedSpectrum, cmvMatrix, ids, SpectrumApprox)

import numpy as np # type: ignore
import unittest
import warnings


IGNORE_TEST = False
IS_PLOT = False
TWO_PI = 2*np.pi


#############################
# Tests
#############################
class TestJacobiSpectrum(unittest.TestCase):

    def setUp(self):
        self.amo = makePreset(cn.PRESET_AMO)

    def testFreeEigenvalues(self):
        if IGNORE_TEST:
            return
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", GapLabWarning)
            spectrum = truncatedJacobiSpectrum(makePreset(cn.PRESET_FREE), N=5, omega_samples=1)
        expected_arr = np.sort(2*np.cos(np.pi*np.arange(1, 6)/6))
        self.assertTrue(np.allclose(spectrum.eigenvalues, expected_arr))
        self.assertEqual(spectrum.boundary, cn.BOUNDARY_DIRICHLET)
        self.assertTrue(spectrum.is_free)

    def testSmallTruncationWarns(self):
        if IGNORE_TEST:
            return
        with self.assertWarns(GapLabWarning):
            truncatedJacobiSpectrum(self.amo, N=8, omega_samples=1)
        with self.assertRaises(InvalidInputError):
            truncatedJacobiSpectrum(self.amo, N=0)

    def testPooling(self):
        if IGNORE_TEST:
            return
        spectrum = truncatedJacobiSpectrum(self.amo, N=100, omega_samples=3, workers=2)
        self.assertEqual(len(spectrum), 300)
        self.assertTrue(np.all(np.diff(spectrum.eigenvalues) >= 0))
        # |E| <= 2 + 2 lambda
        self.assertLess(np.max(np.abs(spectrum.eigenvalues)), 3.0 + 1e-10)
        serial = truncatedJacobiSpectrum(self.amo, N=100, omega_samples=3, workers=1)
        self.assertTrue(np.allclose(spectrum.eigenvalues, serial.eigenvalues))

    def testEdgeStates(self):
        if IGNORE_TEST:
            return
        spectrum = truncatedJacobiSpectrum(makePreset(cn.PRESET_FREE), N=200, omega_samples=1)
        self.assertEqual(spectrum.num_edge_state, 0)
        self.assertTrue(np.allclose(spectrum.bulk_eigenvalues, spectrum.eigenvalues))
        spectrum = truncatedJacobiSpectrum(self.amo, N=400, omega_samples=2)
        self.assertEqual(len(spectrum.edge_weights), 800)
        self.assertTrue(np.all((spectrum.edge_weights >= 0) & (spectrum.edge_weights <= 1 + 1e-10)))
        self.assertGreater(spectrum.num_edge_state, 0)
        self.assertLess(spectrum.num_edge_state, 80)
        self.assertEqual(len(spectrum.bulk_eigenvalues), 800 - spectrum.num_edge_state)
        self.assertEqual(spectrum.toDct()["num_edge_state"], spectrum.num_edge_state)

    def testBoundary(self):
        if IGNORE_TEST:
            return
        spectrum = truncatedSpectrum(self.amo, N=32, omega_samples=1, boundary=cn.BOUNDARY_DIRICHLET)
        self.assertEqual(spectrum.boundary, cn.BOUNDARY_DIRICHLET)
        with self.assertRaises(InvalidInputError):
            truncatedSpectrum(self.amo, N=32, omega_samples=1, boundary=cn.BOUNDARY_UNITARY)
        with self.assertRaises(InvalidInputError):
            truncatedCMVSpectrum(makePreset(cn.PRESET_CMV_FREE), N=32, omega_samples=1,
                  boundary=cn.BOUNDARY_DIRICHLET)

    def testEdgeWeightsGiven(self):
        if IGNORE_TEST:
            return
        spectrum = SpectrumApprox(np.array([1.0, 0.0, 2.0]), 3, 1, cn.BOUNDARY_DIRICHLET, cn.JACOBI,
              edge_weights=np.array([0.9, 0.1, 0.2]))
        self.assertTrue(np.allclose(spectrum.edge_weights, [0.1, 0.9, 0.2]))
        self.assertTrue(np.allclose(spectrum.bulk_eigenvalues, [0.0, 2.0]))
        spectrum = SpectrumApprox(np.array([1.0, 0.0]), 2, 1, cn.BOUNDARY_DIRICHLET, cn.JACOBI)
        self.assertTrue(np.allclose(spectrum.bulk_eigenvalues, [0.0, 1.0]))
        with self.assertRaises(InvalidInputError):
            SpectrumApprox(np.array([1.0, 0.0]), 2, 1, cn.BOUNDARY_DIRICHLET, cn.JACOBI,
                  edge_weights=np.array([0.1]))

    def testIDS(self):
        if IGNORE_TEST:
            return
        spectrum = truncatedJacobiSpectrum(self.amo, N=200, omega_samples=2)
        self.assertEqual(ids(spectrum, -10.0), 0.0)
        self.assertEqual(spectrum.ids(10.0), 1.0)
        # Symmetric spectrum
        self.assertLess(abs(spectrum.ids(0.0) - 0.5), 0.02)
        grid = np.linspace(-3, 3, 50)
        table = spectrum.idsTable(grid)
        self.assertTrue(np.all(np.diff(table.values) >= 0))
        self.assertEqual(table.evaluate(3.0), 1.0)
        with self.assertRaises(InvalidInputError):
            table.evaluate(5.0)
        self.assertEqual(list(table.toDataFrame().columns), ["x", "ids"])

    def testHistogram(self):
        if IGNORE_TEST:
            return
        spectrum = truncatedJacobiSpectrum(self.amo, N=100, omega_samples=2)
        df = spectrum.histogram(bins=20)
        self.assertEqual(len(df), 20)
        self.assertEqual(df["count"].sum(), len(spectrum))

    def testEmpty(self):
        if IGNORE_TEST:
            return
        spectrum = SpectrumApprox(np.array([]), 1, 1, cn.BOUNDARY_DIRICHLET, cn.JACOBI)
        with self.assertRaises(InvalidInputError):
            ids(spectrum, 0.0)


class TestCMVSpectrum(unittest.TestCase):

    def testCMVMatrix(self):
        if IGNORE_TEST:
            return
        alpha_arr = 0.4*np.exp(1j*np.arange(6))
        mat = cmvMatrix(alpha_arr)
        self.assertTrue(np.allclose(mat.conj().T @ mat, np.identity(6)))
        mat = cmvMatrix(alpha_arr, boundary_coeff=np.exp(0.7j))
        self.assertTrue(np.allclose(mat.conj().T @ mat, np.identity(6)))
        with self.assertRaises(InvalidInputError):
            cmvMatrix(alpha_arr[:5])
        with self.assertRaises(InvalidInputError):
            cmvMatrix(alpha_arr, boundary_coeff=0.5)

    def testFreeSpacing(self):
        if IGNORE_TEST:
            return
        N = 16
        spectrum = truncatedCMVSpectrum(makePreset(cn.PRESET_CMV_FREE), N=N, omega_samples=1)
        angle_arr = spectrum.eigenvalues
        self.assertEqual(len(angle_arr), N)
        self.assertTrue(np.all((angle_arr >= 0) & (angle_arr < TWO_PI)))
        spacing_arr = np.diff(np.concatenate([angle_arr, [angle_arr[0] + TWO_PI]]))
        self.assertLessEqual(np.max(spacing_arr), TWO_PI/N + 1e-9)

    def testPooled(self):
        if IGNORE_TEST:
            return
        family = makePreset(cn.PRESET_CMV_COS)
        spectrum = truncatedSpectrum(family, N=64, omega_samples=2)
        self.assertEqual(len(spectrum), 128)
        self.assertTrue(spectrum.is_circular)
        self.assertEqual(spectrum.boundary, cn.BOUNDARY_UNITARY)
        self.assertEqual(spectrum.ids(TWO_PI), 1.0)
        with self.assertRaises(InvalidInputError):
            truncatedCMVSpectrum(family, N=65)


if __name__ == '__main__':
    unittest.main()
