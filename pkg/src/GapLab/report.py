'''Writes the CSV and JSON artifacts of a run, each stamped with the config hash.'''

import GapLab.constants as cn # type: ignore
from GapLab.errors import InvalidInputError # type: ignore
from GapLab import utils # type: ignore

import os
import pandas as pd # type: ignore
from typing import List, Optional


class Report(object):

    def __init__(self, out_dir:str, config_hash:str, metadata:Optional[dict]=None):
        """Artifact writer for one run.

        Args:
            out_dir (str): directory receiving the artifacts; created if missing
            config_hash (str): hash embedded in every artifact
            metadata (Optional[dict]): extra fields merged into every JSON artifact
        """
        self.out_dir = out_dir
        self.config_hash = config_hash
        if metadata is None:
            metadata = {}
        self.metadata = metadata
        self.artifacts:List[str] = []
        os.makedirs(out_dir, exist_ok=True)

    def _path(self, name:str, ext:str)->str:
        if os.path.basename(name) != name:
            raise InvalidInputError(f"Artifact name must not contain a directory: {name}")
        filename = name if name.endswith(ext) else name + ext
        if filename in self.artifacts:
            raise InvalidInputError(f"Artifact {filename} was already written in this run.")
        self.artifacts.append(filename)
        return os.path.join(self.out_dir, filename)

    def addCSV(self, name:str, df:pd.DataFrame)->str:
        """Writes df after a '# config_hash' comment line.

        Returns:
            str: path of the file
        """
        path = self._path(name, cn.CSV_EXT)
        body = df.to_csv(index=False, float_format=cn.FLOAT_FORMAT, lineterminator="\n")
        with open(path, "w", encoding="utf-8", newline="\n") as fd:
            fd.write(cn.HASH_PREFIX + self.config_hash + "\n")
            fd.write(body)
        return path

    def addJSON(self, name:str, dct:dict)->str:
        path = self._path(name, cn.JSON_EXT)
        content = dict(self.metadata)
        content.update(utils.toJSONable(dct))
        content["config_hash"] = self.config_hash
        with open(path, "w", encoding="utf-8", newline="\n") as fd:
            fd.write(utils.canonicalJSON(content) + "\n")
        return path

    @staticmethod
    def readCSV(path:str)->pd.DataFrame:
        """Reads an artifact CSV, skipping the hash line."""
        return pd.read_csv(path, comment="#")

    @staticmethod
    def readHash(path:str)->str:
        with open(path, "r", encoding="utf-8") as fd:
            line = fd.readline().strip()
        if not line.startswith(cn.HASH_PREFIX.strip()):
            raise InvalidInputError(f"{path} does not start with a config hash line.")
        return line[len(cn.HASH_PREFIX.strip()):].strip()

    def __repr__(self)->str:
        return f"Report({self.out_dir}, artifacts={self.artifacts})"
