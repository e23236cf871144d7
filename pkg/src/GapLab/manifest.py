'''Creates the run manifest and compares a rerun against it.'''

import GapLab # type: ignore
import GapLab.constants as cn # type: ignore
from GapLab.errors import InvalidInputError # type: ignore
from GapLab import utils # type: ignore

import json
import numpy as np # type: ignore
import os
import pandas as pd # type: ignore
import platform
import pydantic # type: ignore
import scipy # type: ignore
import shutil
import tempfile
from typing import List, Optional, Tuple


class ComparisonResult(object):
    """Outcome of comparing rerun artifacts with the digests of a manifest.

    Attributes:
        mismatches (list): (artifact, reason) pairs
    """
    def __init__(self, mismatches:List[Tuple[str, str]]):
        self.mismatches = mismatches

    def __bool__(self)->bool:
        return len(self.mismatches) == 0

    def summary(self)->str:
        if self:
            return "all artifacts identical"
        return "\n".join([f"{name}: {reason}" for name, reason in self.mismatches])

    def __repr__(self)->str:
        return str(self.mismatches)


class ManifestMaker(object):

    def __init__(self, out_dir:str):
        """
        Args:
            out_dir (str): run directory holding the artifacts and the manifest
        """
        self.out_dir = out_dir
        self.manifest_path = os.path.join(out_dir, cn.MANIFEST_FILE)
        self.temp_dir:Optional[str] = None

    @staticmethod
    def versions()->dict:
        return dict(GapLab=GapLab.__version__, numpy=np.__version__, scipy=scipy.__version__,
              pandas=pd.__version__, pydantic=pydantic.VERSION, python=platform.python_version())

    def digests(self, artifacts:List[str], directory:Optional[str]=None)->dict:
        if directory is None:
            directory = self.out_dir
        dct = {}
        for name in sorted(artifacts):
            with open(os.path.join(directory, name), "rb") as fd:
                dct[name] = utils.hashBytes(fd.read())
        return dct

    def make(self, config_echo:dict, config_hash:str, artifacts:List[str], wall_time:float,
            seeds:Optional[dict]=None)->str:
        """Writes manifest.json.

        Args:
            config_echo (dict): config with all defaults materialized
            config_hash (str)
            artifacts (list-str): file names relative to out_dir
            wall_time (float): seconds
            seeds (dict): random seeds used by the run

        Returns:
            str: path to the manifest
        """
        if seeds is None:
            seeds = {}
        manifest = dict(config=config_echo, config_hash=config_hash, versions=self.versions(),
              wall_time=wall_time, seeds=seeds, artifacts=self.digests(artifacts))
        with open(self.manifest_path, "w", encoding="utf-8", newline="\n") as fd:
            fd.write(utils.canonicalJSON(manifest) + "\n")
        return self.manifest_path

    @staticmethod
    def read(manifest_path:str)->dict:
        if not os.path.isfile(manifest_path):
            raise InvalidInputError(f"Manifest {manifest_path} does not exist.")
        with open(manifest_path, "r", encoding="utf-8") as fd:
            try:
                manifest = json.load(fd)
            except json.JSONDecodeError as exp:
                raise InvalidInputError(f"Manifest {manifest_path} is not valid JSON: {exp}")
        for key in ["config", "config_hash", "artifacts"]:
            if not key in manifest:
                raise InvalidInputError(f"Manifest {manifest_path} lacks '{key}'.")
        return manifest

    def makeTempDir(self)->str:
        self.temp_dir = tempfile.mkdtemp()
        return self.temp_dir

    def compare(self, rerun_dir:str, rerun_artifacts:List[str])->ComparisonResult:
        """Byte comparison (by SHA-256) of rerun artifacts against this manifest."""
        manifest = self.read(self.manifest_path)
        expected = manifest["artifacts"]
        actual = self.digests(rerun_artifacts, directory=rerun_dir)
        mismatches = []
        for name in sorted(set(expected.keys()) | set(actual.keys())):
            if not name in actual:
                mismatches.append((name, "missing from rerun"))
            elif not name in expected:
                mismatches.append((name, "not in manifest"))
            elif expected[name] != actual[name]:
                mismatches.append((name, f"digest {expected[name][:12]} != {actual[name][:12]}"))
        return ComparisonResult(mismatches)

    def cleanUp(self):
        if self.temp_dir and os.path.exists(self.temp_dir):
            shutil.rmtree(self.temp_dir)
            self.temp_dir = None
