import GapLab.constants as cn # type: ignore
from GapLab import cli # type: ignore
import GapLab.experiment_config as ec # type: ignore

import contextlib
import io
import json
import os
import shutil
import tempfile
import unittest


IGNORE_TEST = False
IS_PLOT = False
SMALL_ARGS = ["--preset", cn.PRESET_FREE, "--N", "16", "--samples", "1"]


def runMain(argv):
    stdout = io.StringIO()
    stderr = io.StringIO()
    with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
        exit_code = cli.main(argv)
    return exit_code, stdout.getvalue(), stderr.getvalue()


#############################
# Tests
#############################
class TestCLI(unittest.TestCase):

    def setUp(self):
        self.out_dir = tempfile.mkdtemp()

    def tearDown(self):
        self.remove()

    def remove(self):
        if os.path.exists(self.out_dir):
            shutil.rmtree(self.out_dir)

    def _writeConfig(self, dct):
        path = os.path.join(self.out_dir, "config.json")
        with open(path, "w") as fd:
            fd.write(json.dumps(dct))
        return path

    def testParser(self):
        if IGNORE_TEST:
            return
        args = cli.makeParser().parse_args([cn.TASK_GAPS, "--k", "2", "--tmax", "0.5"])
        self.assertEqual(args.command, cn.TASK_GAPS)
        self.assertEqual(args.k, 2)
        self.assertEqual(args.t_max, 0.5)
        self.assertEqual(args.workers, cn.D_WORKERS)
        config = cli.makeConfig(args)
        self.assertEqual(config.options.k, 2)
        self.assertEqual(config.family.preset, cn.PRESET_AMO)

    def testFlagsOverrideConfig(self):
        if IGNORE_TEST:
            return
        path = self._writeConfig(dict(task=cn.TASK_SPECTRUM, numerics=dict(N=64, seed=3)))
        args = cli.makeParser().parse_args([cn.TASK_IDS, "--config", path, "--N", "32"])
        config = cli.makeConfig(args)
        self.assertEqual(config.task, cn.TASK_IDS)
        self.assertEqual(config.numerics.N, 32)
        self.assertEqual(config.numerics.seed, 3)

    def testRunIDS(self):
        if IGNORE_TEST:
            return
        run_dir = os.path.join(self.out_dir, "run")
        exit_code, stdout, _ = runMain([cn.TASK_IDS, "--out", run_dir] + SMALL_ARGS)
        self.assertEqual(exit_code, cn.EXIT_SUCCESS)
        line = json.loads(stdout)
        self.assertEqual(line["task"], cn.TASK_IDS)
        self.assertEqual(line["artifacts"], ["ids.csv"])
        self.assertTrue(os.path.isfile(os.path.join(run_dir, cn.MANIFEST_FILE)))
        exit_code, stdout, _ = runMain([cn.REPRODUCE, line["manifest"]])
        self.assertEqual(exit_code, cn.EXIT_SUCCESS)
        self.assertTrue(json.loads(stdout)["identical"])

    def testRunFromConfig(self):
        if IGNORE_TEST:
            return
        path = self._writeConfig(dict(task=cn.TASK_IDS, family=dict(preset=cn.PRESET_FREE),
              numerics=dict(N=16, samples=1, E_points=3)))
        exit_code, stdout, _ = runMain([cn.RUN, "--config", path, "--out",
              os.path.join(self.out_dir, "run")])
        self.assertEqual(exit_code, cn.EXIT_SUCCESS)
        self.assertEqual(json.loads(stdout)["summary"]["num_point"], 3)

    def testInvalidConfig(self):
        if IGNORE_TEST:
            return
        path = self._writeConfig(dict(task=cn.TASK_IDS, bogus=1))
        exit_code, stdout, stderr = runMain([cn.RUN, "--config", path])
        self.assertEqual(exit_code, cn.EXIT_PRECONDITION)
        self.assertEqual(stdout, "")
        error = json.loads(stderr)
        self.assertEqual(error["exit_code"], cn.EXIT_PRECONDITION)
        self.assertEqual(error["error"], "ValidationError")

    def testBoundaryMismatch(self):
        if IGNORE_TEST:
            return
        exit_code, _, stderr = runMain([cn.TASK_IDS, "--boundary", cn.BOUNDARY_UNITARY] + SMALL_ARGS)
        self.assertEqual(exit_code, cn.EXIT_PRECONDITION)
        error = json.loads(stderr)
        self.assertEqual(error["error"], "ValidationError")
        self.assertTrue("boundary unitary" in error["message"])

    def testBoundaryReachesTruncation(self):
        if IGNORE_TEST:
            return
        run_dir = os.path.join(self.out_dir, "run")
        exit_code, _, _ = runMain([cn.TASK_SPECTRUM, "--boundary", cn.BOUNDARY_DIRICHLET,
              "--out", run_dir] + SMALL_ARGS)
        self.assertEqual(exit_code, cn.EXIT_SUCCESS)
        with open(os.path.join(run_dir, "spectrum.json")) as fd:
            self.assertEqual(json.load(fd)["boundary"], cn.BOUNDARY_DIRICHLET)
        with open(os.path.join(run_dir, cn.MANIFEST_FILE)) as fd:
            manifest = json.load(fd)
        self.assertEqual(manifest["config"]["numerics"]["boundary"], cn.BOUNDARY_DIRICHLET)

    def testTonguesFlags(self):
        if IGNORE_TEST:
            return
        args = cli.makeParser().parse_args([cn.TASK_TONGUES, "--family", cn.PRESET_FREE, "--k", "1",
              "--dmin", "0", "--dmax", "1", "--steps", "50"])
        config = cli.makeConfig(args)
        self.assertEqual(config.family.preset, cn.PRESET_FREE)
        self.assertEqual(config.options.delta_min, 0.0)
        self.assertEqual(config.options.delta_max, 1.0)
        self.assertEqual(config.options.delta_steps, 50)
        self.assertEqual(config.options.steps, 20)
        delta_grid = config.options.deltaGrid()
        self.assertEqual(len(delta_grid), 50)
        self.assertEqual(delta_grid[-1], 1.0)

    def testOpenSteps(self):
        if IGNORE_TEST:
            return
        args = cli.makeParser().parse_args([cn.TASK_OPEN, "--k", "1", "--tmax", "1.0", "--steps", "4"])
        config = cli.makeConfig(args)
        self.assertEqual(config.options.steps, 4)
        self.assertEqual(config.options.delta_steps, 10)
        self.assertEqual(len(config.options.tGrid()), 5)

    def testProjectFlags(self):
        if IGNORE_TEST:
            return
        args = cli.makeParser().parse_args([cn.TASK_PROJECT, "--class", cn.CMV, "--theta", "0.7",
              "--bump-size", "1e-3"])
        config = cli.makeConfig(args)
        self.assertEqual(config.options.projection, ec.PROJECTION_CONJUGACY)
        self.assertEqual(config.options.conjugacy_class, cn.CMV)
        self.assertEqual(config.options.theta, 0.7)
        self.assertEqual(config.options.bump_size, 1e-3)
        args = cli.makeParser().parse_args([cn.TASK_PROJECT, "--projection", ec.PROJECTION_G_RANGE])
        self.assertEqual(cli.makeConfig(args).options.projection, ec.PROJECTION_G_RANGE)

    def testRunProjectCMVClass(self):
        if IGNORE_TEST:
            return
        path = self._writeConfig(dict(task=cn.TASK_PROJECT, options=dict(conjugacy_grid=256)))
        exit_code, stdout, _ = runMain([cn.TASK_PROJECT, "--config", path, "--class", cn.CMV,
              "--theta", "0.7", "--bump-size", "1e-3", "--out", os.path.join(self.out_dir, "run")])
        self.assertEqual(exit_code, cn.EXIT_SUCCESS)
        summary = json.loads(stdout)["summary"]
        self.assertLess(summary["max_residual"], 1e-7)
        self.assertLess(summary["max_class_error"], 1e-8)

    def testMissingManifest(self):
        if IGNORE_TEST:
            return
        exit_code, _, stderr = runMain([cn.REPRODUCE, os.path.join(self.out_dir, "none.json")])
        self.assertEqual(exit_code, cn.EXIT_PRECONDITION)
        self.assertEqual(json.loads(stderr)["error"], "InvalidInputError")


if __name__ == '__main__':
    unittest.main()
