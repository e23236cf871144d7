from GapLab.matrices import Mat2, Mat2H, su11ToSl2r, sl2rToSu11, stackInverse # type: ignore
from GapLab.errors import InvalidInputError # type: ignore

import numpy as np # type: ignore
import unittest


IGNORE_TEST = False
IS_PLOT = False


#############################
# Tests
#############################
class TestMat2(unittest.TestCase):

    def setUp(self):
        self.mat = Mat2(2.0, 1.0, 1.0, 1.0)

    def testConstructor(self):
        if IGNORE_TEST:
            return
        self.assertAlmostEqual(self.mat.det, 1.0)
        self.assertEqual(self.mat.trace, 3.0)
        with self.assertRaises(InvalidInputError):
            Mat2(1, 2, 3, 4)
        with self.assertRaises(InvalidInputError):
            Mat2.fromArray(np.array([[1, 1j], [0, 1]]))

    def testInverse(self):
        if IGNORE_TEST:
            return
        self.assertTrue((self.mat @ self.mat.inverse()).isClose(Mat2.identity()))
        rotation = Mat2.rotation(0.3)
        self.assertTrue((rotation @ Mat2.rotation(-0.3)).isClose(Mat2.identity()))
        self.assertAlmostEqual(rotation.norm(), 1.0)

    def testStackInverse(self):
        if IGNORE_TEST:
            return
        arr = np.array([self.mat.toArray(), Mat2.rotation(1.0).toArray()])
        product_arr = arr @ stackInverse(arr)
        self.assertTrue(np.allclose(product_arr, np.identity(2)))


class TestMat2H(unittest.TestCase):

    def setUp(self):
        self.mat = Mat2H.fromParameters(0.3, 0.7, 0.4)

    def testConstructor(self):
        if IGNORE_TEST:
            return
        self.assertAlmostEqual(self.mat.det, 1.0)
        with self.assertRaises(InvalidInputError):
            Mat2H(2.0, 0.0)
        with self.assertRaises(InvalidInputError):
            Mat2H.fromParameters(0.0, 0.0, 1.0)
        with self.assertRaises(InvalidInputError):
            Mat2H.fromArray(np.array([[1, 0], [0, 2]]))

    def testProduct(self):
        if IGNORE_TEST:
            return
        other = Mat2H.fromParameters(1.1, -0.2, 0.8)
        product = self.mat @ other
        self.assertAlmostEqual(product.det, 1.0)
        self.assertTrue(np.allclose(product.toArray(), self.mat.toArray() @ other.toArray()))
        self.assertTrue((self.mat @ self.mat.inverse()).isClose(Mat2H.identity()))


class TestConjugation(unittest.TestCase):

    def testRoundTrip(self):
        if IGNORE_TEST:
            return
        rng = np.random.default_rng(1)
        for _ in range(20):
            theta, phi = rng.uniform(0, 2*np.pi, 2)
            mat = Mat2H.fromParameters(theta, phi, rng.uniform(0, 0.9))
            real = su11ToSl2r(mat)
            self.assertAlmostEqual(real.det, 1.0, places=10)
            self.assertAlmostEqual(real.trace, mat.trace, places=10)
            self.assertTrue(sl2rToSu11(real).isClose(mat))

    def testInvalid(self):
        if IGNORE_TEST:
            return
        with self.assertRaises(InvalidInputError):
            su11ToSl2r(Mat2H(2.0, 0.0, is_check=False))


if __name__ == '__main__':
    unittest.main()
