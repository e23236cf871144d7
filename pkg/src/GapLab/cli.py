'''Command line interface: gaplab <task> [--config PATH] [--out DIR] [--workers N].'''

import GapLab.constants as cn # type: ignore
from GapLab.errors import GapLabError # type: ignore
from GapLab.executor import Executor, reproduce # type: ignore
import GapLab.experiment_config as ec # type: ignore
from GapLab.experiment_config import ExperimentConfig # type: ignore
from GapLab import utils # type: ignore

import argparse
import json
from pydantic import ValidationError # type: ignore
import sys
from typing import List, Optional

# Command line flags that map onto config entries
NUMERICS_FLAGS = ["N", "samples", "boundary"]
OPTIONS_FLAGS = ["k", "t_max", "delta_min", "delta_max", "projection", "conjugacy_class", "theta",
      "bump_size"]


def makeParser()->argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaplab",
          description="Spectra, gap labels, cocycles and resonance tongues of Jacobi and CMV operators.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    ##
    def addCommon(subparser, is_config_required:bool=False):
        subparser.add_argument("--config", required=is_config_required, default=None,
              help="Experiment config JSON.")
        subparser.add_argument("--out", default=None, help="Output directory.")
        subparser.add_argument("--workers", type=int, default=cn.D_WORKERS,
              help="Parallel workers; artifacts do not depend on it.")
    ##
    for task in cn.TASKS:
        subparser = subparsers.add_parser(task, help=f"Run the {task} task.")
        addCommon(subparser)
        subparser.add_argument("--preset", "--family", dest="preset", default=None, choices=cn.PRESETS,
              help="Family preset.")
        subparser.add_argument("--N", type=int, default=None, help="Truncation size.")
        subparser.add_argument("--samples", type=int, default=None, help="Number of pooled phases.")
        subparser.add_argument("--boundary", default=None, choices=cn.BOUNDARIES,
              help="Truncation boundary; must match the family kind.")
        subparser.add_argument("--k", type=int, default=None, help="Gap or tongue label.")
        subparser.add_argument("--tmax", dest="t_max", type=float, default=None,
              help="Largest perturbation size of the open task.")
        subparser.add_argument("--steps", type=int, default=None,
              help="Perturbation steps of the open task; delta steps of the tongues task.")
        subparser.add_argument("--dmin", dest="delta_min", type=float, default=None,
              help="Smallest coupling of the tongues task.")
        subparser.add_argument("--dmax", dest="delta_max", type=float, default=None,
              help="Largest coupling of the tongues task.")
        subparser.add_argument("--projection", default=None, choices=ec.PROJECTION_KINDS,
              help="Projection of the project task.")
        subparser.add_argument("--class", dest="conjugacy_class", default=None, choices=[cn.JACOBI, cn.CMV],
              help="Matrix class of the local conjugacy; implies --projection local_conjugacy.")
        subparser.add_argument("--theta", type=float, default=None, help="Angle of the project task.")
        subparser.add_argument("--bump-size", dest="bump_size", type=float, default=None,
              help="Bump perturbation size of the project task.")
    run_parser = subparsers.add_parser(cn.RUN, help="Run the task named in a config.")
    addCommon(run_parser, is_config_required=True)
    reproduce_parser = subparsers.add_parser(cn.REPRODUCE, help="Rerun a manifest and compare artifacts.")
    reproduce_parser.add_argument("manifest", help="Path to manifest.json.")
    reproduce_parser.add_argument("--workers", type=int, default=cn.D_WORKERS)
    return parser

def _loadConfigDct(path:Optional[str])->dict:
    if path is None:
        return {}
    with open(path, "r", encoding="utf-8") as fd:
        return json.load(fd)

def makeConfig(args:argparse.Namespace)->ExperimentConfig:
    """Config file contents overridden by the command and its flags."""
    dct = _loadConfigDct(args.config)
    if args.command != cn.RUN:
        dct["task"] = args.command
        if args.preset is not None:
            dct["family"] = dict(dct.get("family", {}), preset=args.preset)
            dct["family"].pop("kind", None)
        flag_dct = {name: getattr(args, name) for name in NUMERICS_FLAGS + OPTIONS_FLAGS}
        if (flag_dct["conjugacy_class"] is not None) and (flag_dct["projection"] is None):
            flag_dct["projection"] = ec.PROJECTION_CONJUGACY
        steps_name = "delta_steps" if args.command == cn.TASK_TONGUES else "steps"
        flag_dct[steps_name] = args.steps
        for name, value in flag_dct.items():
            if value is None:
                continue
            section = "numerics" if name in NUMERICS_FLAGS else "options"
            dct[section] = dict(dct.get(section, {}), **{name: value})
    if args.out is not None:
        dct["out_dir"] = args.out
    return ExperimentConfig.model_validate(dct)

def _writeError(exp:Exception, exit_code:int)->int:
    dct = dict(error=type(exp).__name__, message=str(exp), exit_code=exit_code)
    sys.stderr.write(json.dumps(dct, sort_keys=True) + "\n")
    return exit_code

def main(argv:Optional[List[str]]=None)->int:
    args = makeParser().parse_args(argv)
    try:
        if args.command == cn.REPRODUCE:
            comparison = reproduce(args.manifest, workers=args.workers)
            sys.stdout.write(json.dumps(dict(identical=bool(comparison),
                  mismatches=comparison.mismatches), sort_keys=True) + "\n")
            if not comparison:
                sys.stderr.write(comparison.summary() + "\n")
                return cn.EXIT_MISMATCH
            return cn.EXIT_SUCCESS
        config = makeConfig(args)
        result = Executor(config, workers=args.workers).execute()
    except ValidationError as exp:
        return _writeError(exp, cn.EXIT_PRECONDITION)
    except GapLabError as exp:
        return _writeError(exp, exp.exit_code)
    except (ValueError, OSError) as exp:
        return _writeError(exp, cn.EXIT_PRECONDITION)
    except RuntimeError as exp:
        return _writeError(exp, cn.EXIT_COMPUTATIONAL)
    line = dict(task=config.task, out_dir=result.out_dir, config_hash=result.config_hash,
          artifacts=result.artifacts, manifest=result.manifest_path, summary=result.summary)
    sys.stdout.write(json.dumps(utils.toJSONable(line), sort_keys=True) + "\n")
    return cn.EXIT_SUCCESS


if __name__ == '__main__':
    sys.exit(main())
