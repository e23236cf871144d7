import GapLab.constants as cn # type: ignore
from GapLab.errors import InvalidInputError # type: ignore
import GapLab.experiment_config as ec # type: ignore
from GapLab.experiment_config import ExperimentConfig, FamilyConfig, NumericsConfig, OptionsConfig # type: ignore
from GapLab.operators import JacobiFamily, CMVFamily # type: ignore
from GapLab.trig_poly import TrigPoly # type: ignore

import json
import numpy as np # type: ignore
import os
from pydantic import ValidationError # type: ignore
import tempfile
import unittest


IGNORE_TEST = False
IS_PLOT = False
CONFIG_DCT = dict(task=cn.TASK_IDS, family=dict(preset=cn.PRESET_FREE),
      numerics=dict(N=16, samples=1, E_points=5))


#############################
# Tests
#############################
class TestExperimentConfig(unittest.TestCase):

    def testDefaults(self):
        if IGNORE_TEST:
            return
        config = ExperimentConfig(task=cn.TASK_GAPS)
        self.assertEqual(config.family.preset, cn.PRESET_AMO)
        self.assertEqual(config.numerics.N, cn.D_N)
        self.assertEqual(config.numerics.epsilons, cn.D_EPSILONS)
        self.assertEqual(config.options.projection, ec.PROJECTION_CMV)
        echo = config.echo()
        self.assertFalse("out_dir" in echo)
        self.assertEqual(echo["numerics"]["min_width"], cn.D_MIN_WIDTH)

    def testHash(self):
        if IGNORE_TEST:
            return
        config = ExperimentConfig.model_validate(CONFIG_DCT)
        other = ExperimentConfig.model_validate(dict(CONFIG_DCT, out_dir="somewhere"))
        self.assertEqual(config.config_hash, other.config_hash)
        self.assertEqual(len(config.config_hash), 64)
        # Spelling out a default does not change the hash
        dct = json.loads(json.dumps(CONFIG_DCT))
        dct["numerics"]["seed"] = cn.D_SEED
        self.assertEqual(ExperimentConfig.model_validate(dct).config_hash, config.config_hash)
        dct["numerics"]["N"] = 32
        self.assertNotEqual(ExperimentConfig.model_validate(dct).config_hash, config.config_hash)

    def testInvalid(self):
        if IGNORE_TEST:
            return
        with self.assertRaises(ValidationError):
            ExperimentConfig.model_validate(dict(CONFIG_DCT, unknown_key=1))
        with self.assertRaises(ValidationError):
            ExperimentConfig(task="unknown")
        with self.assertRaises(ValidationError):
            FamilyConfig(preset=cn.PRESET_FREE, alpha=1.5)
        with self.assertRaises(ValidationError):
            FamilyConfig(preset="unknown")
        with self.assertRaises(ValidationError):
            FamilyConfig()
        with self.assertRaises(ValidationError):
            OptionsConfig(projection="unknown")
        with self.assertRaises(ValidationError):
            NumericsConfig(N=0)

    def testFromJSON(self):
        if IGNORE_TEST:
            return
        config = ExperimentConfig.fromJSON(json.dumps(CONFIG_DCT))
        self.assertEqual(config.task, cn.TASK_IDS)
        with self.assertRaises(InvalidInputError):
            ExperimentConfig.fromJSON("{not json")
        with tempfile.TemporaryDirectory() as temp_dir:
            path = os.path.join(temp_dir, "config.json")
            with open(path, "w") as fd:
                fd.write(json.dumps(CONFIG_DCT))
            self.assertEqual(ExperimentConfig.fromFile(path).config_hash, config.config_hash)


class TestFamilyConfig(unittest.TestCase):

    def testPreset(self):
        if IGNORE_TEST:
            return
        config = FamilyConfig(preset=cn.PRESET_CMV_CONSTANT)
        self.assertEqual(config.family_kind, cn.CMV)
        self.assertTrue(isinstance(config.makeFamily(), CMVFamily))
        self.assertEqual(FamilyConfig(preset=cn.PRESET_AMO).family_kind, cn.JACOBI)

    def testExplicit(self):
        if IGNORE_TEST:
            return
        config = FamilyConfig(kind=cn.JACOBI, b=TrigPoly.cosine(2.0).toDct())
        family = config.makeFamily()
        self.assertTrue(isinstance(family, JacobiFamily))
        self.assertEqual(family.b, TrigPoly.cosine(2.0))
        self.assertEqual(family.a, TrigPoly.constant(1.0))
        config = FamilyConfig(kind=cn.CMV, lam=0.3)
        family = config.makeFamily()
        self.assertTrue(isinstance(family, CMVFamily))
        self.assertEqual(family.lam, 0.3)


class TestGrids(unittest.TestCase):

    def testParameterGrid(self):
        if IGNORE_TEST:
            return
        numerics = NumericsConfig(E_min=-1.0, E_max=1.0, E_points=5)
        self.assertTrue(np.allclose(numerics.parameterGrid(cn.JACOBI), [-1, -0.5, 0, 0.5, 1]))
        self.assertEqual(numerics.parameterGrid(cn.JACOBI)[2], 0.0)
        grid = numerics.parameterGrid(cn.CMV)
        self.assertEqual(len(grid), 5)
        self.assertEqual(grid[0], 0.0)
        self.assertLess(grid[-1], 2*np.pi)

    def testOptionGrids(self):
        if IGNORE_TEST:
            return
        options = OptionsConfig(t_max=1.0, steps=4, delta_min=0.0, delta_max=0.1, delta_steps=11)
        self.assertEqual(options.tGrid(), [0.0, 0.25, 0.5, 0.75, 1.0])
        self.assertEqual(len(options.deltaGrid()), 11)
        self.assertEqual(options.deltaGrid()[5], 0.05)
        self.assertEqual(options.makePerturbation(), TrigPoly.cosine(1.0))


if __name__ == '__main__':
    unittest.main()
