import GapLab.constants as cn # type: ignore
from GapLab.errors import InvalidInputError # type: ignore
from GapLab.report import Report # type: ignore

import json
import numpy as np # type: ignore
import os
import pandas as pd # type: ignore
import shutil
import tempfile
import unittest


IGNORE_TEST = False
IS_PLOT = False
CONFIG_HASH = "ab"*32
DF = pd.DataFrame({"E": [0.0, 0.5, 1.0/3], "ids": [0.5, 0.75, 0.625]})


#############################
# Tests
#############################
class TestReport(unittest.TestCase):

    def setUp(self):
        self.out_dir = tempfile.mkdtemp()
        self.report = Report(self.out_dir, CONFIG_HASH, metadata=dict(task=cn.TASK_IDS))

    def tearDown(self):
        self.remove()

    def remove(self):
        if os.path.exists(self.out_dir):
            shutil.rmtree(self.out_dir)

    def testAddCSV(self):
        if IGNORE_TEST:
            return
        path = self.report.addCSV("ids", DF)
        self.assertEqual(os.path.basename(path), "ids.csv")
        with open(path, "r") as fd:
            lines = fd.read().split("\n")
        self.assertEqual(lines[0], cn.HASH_PREFIX + CONFIG_HASH)
        self.assertEqual(lines[1], "E,ids")
        self.assertEqual(Report.readHash(path), CONFIG_HASH)
        df = Report.readCSV(path)
        self.assertEqual(list(df.columns), ["E", "ids"])
        # %.15g keeps 1/3 to 15 significant digits
        self.assertAlmostEqual(df["E"].iloc[2], 1.0/3, places=14)
        self.assertEqual(self.report.artifacts, ["ids.csv"])

    def testAddJSON(self):
        if IGNORE_TEST:
            return
        path = self.report.addJSON("summary", dict(value=np.float64(1.5), count=np.int64(3),
              z=1 + 2j))
        with open(path, "r") as fd:
            dct = json.load(fd)
        self.assertEqual(dct["config_hash"], CONFIG_HASH)
        self.assertEqual(dct["task"], cn.TASK_IDS)
        self.assertEqual(dct["value"], 1.5)
        self.assertEqual(dct["count"], 3)
        self.assertEqual(dct["z"], [1.0, 2.0])

    def testInvalidNames(self):
        if IGNORE_TEST:
            return
        self.report.addCSV("ids", DF)
        with self.assertRaises(InvalidInputError):
            self.report.addCSV("ids.csv", DF)
        with self.assertRaises(InvalidInputError):
            self.report.addJSON(os.path.join("sub", "summary"), {})

    def testReadHashMissing(self):
        if IGNORE_TEST:
            return
        path = os.path.join(self.out_dir, "plain.csv")
        DF.to_csv(path, index=False)
        with self.assertRaises(InvalidInputError):
            Report.readHash(path)


if __name__ == '__main__':
    unittest.main()
