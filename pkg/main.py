"""
Command-line front end of the inquisitive logic workbench.

Every verb is a thin adapter over the library: it loads the JSON inputs,
calls one operation and prints one JSON object per line on stdout.
Diagnostics go to stderr through the workbench logger.

Exit codes: 0 computed, 1 property refuted or countermodel found, 2 usage
or input error.
"""
import argparse
import copy
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from algebra import (AlgebraError, FiniteAlgebra, birkhoff_reduce, eval_core, is_core_generated,
                     is_well_connected, refuting_valuation, validate_dep_algebra, validate_inq_algebra)
from duality import DualityError, algebra_to_frame, dual_algebra, flavour_for, semantic_verdicts
from formula import FormulaError, atoms, axiom_instances, build_corpus, dnf, is_standard, parse, size, to_text
from logger_config import setup_logger
from team import Frame, Model, TeamError, countermodel_search, eval_classical, eval_team, frame_valid, model_valid


EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INPUT = 2

DEFAULT_CONFIG: Dict[str, Dict[str, Any]] = {
    "search": {"max_worlds": 3, "dedup_iso": True, "jobs": 1, "deterministic": True},
    "corpus": {"seed": 7, "atoms": ["p", "q"], "random_formulas": 110, "max_depth": 3},
    "logging": {"log_file": None, "log_level": "INFO"},
}

INPUT_ERRORS = (FormulaError, TeamError, AlgebraError, DualityError, OSError, ValueError, KeyError)


def render(record: Dict) -> str:
    """One JSON line, keys sorted."""
    return json.dumps(record, sort_keys=True, ensure_ascii=False)


def emit(record: Dict) -> None:
    print(render(record))


def read_json(path: str) -> Dict:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def parse_team(frame: Frame, text: Optional[str]) -> List[int]:
    """World names separated by commas; all worlds when omitted."""
    if text is None:
        return list(range(frame.size))
    names = [name.strip() for name in text.split(",") if name.strip()]
    return [frame.index(name) for name in names]


def parse_valuation(algebra: FiniteAlgebra, text: str) -> Dict[str, int]:
    """Pairs atom=element separated by commas."""
    valuation = {}
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise ValueError(f"valuation entry {item!r} is not of the form atom=element")
        atom, label = item.split("=", 1)
        valuation[atom.strip()] = algebra.index(label.strip())
    return valuation


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Finite-model workbench for inquisitive and dependence logics"
    )
    parser.add_argument("--config", default="config.json", help="Path to configuration file")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--formula", help="Formula in ASCII syntax")
    common.add_argument("--flavour", choices=["inq", "dep"], default=None,
                        help="Algebra flavour (default inq, dep for formulas with the tensor)")
    common.add_argument("--classical", action="store_true", help="Classical team semantics")
    common.add_argument("--max-worlds", type=int, default=None, help="Largest frame size to search")
    common.add_argument("--dedup-iso", action=argparse.BooleanOptionalAction, default=None,
                        help="Skip isomorphic frames during search")
    common.add_argument("--jobs", type=int, default=None, help="Worker processes for the search")
    common.add_argument("--seed", type=int, default=None, help="Corpus seed")
    common.add_argument("--deterministic", action=argparse.BooleanOptionalAction, default=None,
                        help="Use the configured seed when --seed is absent")
    common.add_argument("--model", help="Model JSON file")
    common.add_argument("--frame", help="Frame JSON file")
    common.add_argument("--algebra", help="Algebra JSON file")
    common.add_argument("--team", help="Comma-separated world names (default: all worlds)")
    common.add_argument("--valuation", help="Core valuation atom=element,...")

    verbs = parser.add_subparsers(dest="verb", required=True)
    verbs.add_parser("parse", parents=[common], help="Parse and pretty-print a formula")
    verbs.add_parser("dnf", parents=[common], help="Standard disjuncts of a formula")
    verbs.add_parser("eval", parents=[common], help="Team support, or algebraic interpretation")
    verbs.add_parser("valid-team", parents=[common], help="Validity on a model or frame")
    verbs.add_parser("valid-alg", parents=[common], help="Validity on an algebra")
    verbs.add_parser("countermodel", parents=[common], help="Search for a countermodel")
    verbs.add_parser("check-algebra", parents=[common], help="Validate algebra laws")
    verbs.add_parser("dualize", parents=[common], help="Dual algebra of a frame")
    verbs.add_parser("dualize-back", parents=[common], help="Frame of an algebra")
    verbs.add_parser("cross-check", parents=[common], help="Team verdict against algebraic verdict")
    verbs.add_parser("reduce", parents=[common], help="Finite well-connected refuting algebra")
    axiom = verbs.add_parser("axiom", parents=[common], help="Instantiate an axiom schema")
    axiom.add_argument("--schema", required=True, help="A1..A15 or DN")
    axiom.add_argument("--args", nargs="+", default=[], help="One formula per slot")
    verbs.add_parser("corpus", parents=[common], help="Emit the seeded formula corpus")
    return parser


class Workbench:
    """Configured command dispatcher."""

    def __init__(self, config_path: str = "config.json"):
        """
        Initialize the workbench.

        Args:
            config_path: Path to configuration file
        """
        self.config, found = self._load_config(config_path)
        self.logger = setup_logger(
            self.config['logging']['log_file'],
            self.config['logging']['log_level']
        )
        if not found:
            self.logger.warning(f"Config file {config_path} not found, using defaults")

    def _load_config(self, config_path: str):
        """Load configuration from JSON file, filling missing keys with defaults."""
        config = copy.deepcopy(DEFAULT_CONFIG)
        path = Path(config_path)
        if not path.exists():
            return config, False
        with open(path, 'r', encoding='utf-8') as f:
            loaded = json.load(f)
        for section, values in loaded.items():
            config.setdefault(section, {}).update(values)
        return config, True

    def _setting(self, flag: Any, section: str, key: str) -> Any:
        return self.config[section][key] if flag is None else flag

    def _formula(self, args: argparse.Namespace):
        if args.formula is None:
            raise ValueError("--formula is required")
        return parse(args.formula)

    def _model(self, args: argparse.Namespace) -> Model:
        if args.model is None:
            raise ValueError("--model is required")
        return Model.from_dict(read_json(args.model))

    def _algebra(self, args: argparse.Namespace) -> FiniteAlgebra:
        if args.algebra is None:
            raise ValueError("--algebra is required")
        return FiniteAlgebra.from_dict(read_json(args.algebra))

    def run(self, args: argparse.Namespace) -> int:
        """Dispatch one verb and return its exit code."""
        handler = getattr(self, "cmd_" + args.verb.replace("-", "_"))
        self.logger.debug(f"Running {args.verb}")
        try:
            return handler(args)
        except INPUT_ERRORS as e:
            self.logger.error(f"{args.verb}: {type(e).__name__}: {e}")
            return EXIT_INPUT

    def cmd_parse(self, args: argparse.Namespace) -> int:
        phi = self._formula(args)
        emit({"formula": to_text(phi), "atoms": atoms(phi), "size": size(phi), "standard": is_standard(phi)})
        return EXIT_OK

    def cmd_dnf(self, args: argparse.Namespace) -> int:
        emit({"dnf": [to_text(alpha) for alpha in dnf(self._formula(args))]})
        return EXIT_OK

    def cmd_eval(self, args: argparse.Namespace) -> int:
        phi = self._formula(args)
        if args.algebra is not None:
            algebra = self._algebra(args)
            mu = parse_valuation(algebra, args.valuation or "")
            emit({"value": algebra.label(eval_core(algebra, mu, phi))})
            return EXIT_OK
        model = self._model(args)
        team = parse_team(model.frame, args.team)
        evaluate = eval_classical if args.classical else eval_team
        emit({"supports": evaluate(model, team, phi)})
        return EXIT_OK

    def cmd_valid_team(self, args: argparse.Namespace) -> int:
        phi = self._formula(args)
        if args.frame is not None:
            valid = frame_valid(Frame.from_dict(read_json(args.frame)), phi)
        else:
            valid = model_valid(self._model(args), phi)
        emit({"valid": valid})
        return EXIT_OK if valid else EXIT_REFUTED

    def cmd_valid_alg(self, args: argparse.Namespace) -> int:
        algebra = self._algebra(args)
        mu = refuting_valuation(algebra, self._formula(args))
        refutation = None if mu is None else {p: algebra.label(v) for p, v in mu.items()}
        emit({"valid": mu is None, "refuting_valuation": refutation})
        return EXIT_OK if mu is None else EXIT_REFUTED

    def cmd_countermodel(self, args: argparse.Namespace) -> int:
        phi = self._formula(args)
        max_worlds = self._setting(args.max_worlds, "search", "max_worlds")
        hit = countermodel_search(
            phi, max_worlds,
            classical=args.classical,
            dedup=self._setting(args.dedup_iso, "search", "dedup_iso"),
            jobs=self._setting(args.jobs, "search", "jobs"),
        )
        if hit is None:
            emit({"countermodel": None, "valid_up_to": max_worlds})
            return EXIT_OK
        model, team = hit
        emit({"countermodel": model.to_dict(), "team": model.frame.names(team)})
        return EXIT_REFUTED

    def cmd_check_algebra(self, args: argparse.Namespace) -> int:
        algebra = self._algebra(args)
        validate = validate_dep_algebra if args.flavour == "dep" else validate_inq_algebra
        report = validate(algebra)
        emit({
            "check": report.to_dict(),
            "core_generated": is_core_generated(algebra),
            "well_connected": is_well_connected(algebra),
        })
        return EXIT_OK if report else EXIT_REFUTED

    def cmd_dualize(self, args: argparse.Namespace) -> int:
        if args.frame is None:
            raise ValueError("--frame is required")
        frame = Frame.from_dict(read_json(args.frame))
        emit(dual_algebra(frame, args.flavour or "inq").to_dict())
        return EXIT_OK

    def cmd_dualize_back(self, args: argparse.Namespace) -> int:
        emit(algebra_to_frame(self._algebra(args)).to_dict())
        return EXIT_OK

    def cmd_cross_check(self, args: argparse.Namespace) -> int:
        team_verdict, algebra_verdict = semantic_verdicts(self._model(args), self._formula(args), args.flavour)
        agree = team_verdict == algebra_verdict
        emit({"team": team_verdict, "algebra": algebra_verdict, "agree": agree})
        return EXIT_OK if agree else EXIT_REFUTED

    def cmd_reduce(self, args: argparse.Namespace) -> int:
        phi = self._formula(args)
        reduced = birkhoff_reduce(self._algebra(args), phi, flavour_for(phi, args.flavour))
        emit(reduced.to_dict())
        return EXIT_OK

    def cmd_axiom(self, args: argparse.Namespace) -> int:
        emit({"axiom": to_text(axiom_instances(args.schema, args.args))})
        return EXIT_OK

    def cmd_corpus(self, args: argparse.Namespace) -> int:
        settings = self.config["corpus"]
        seed = args.seed
        if seed is None and self._setting(args.deterministic, "search", "deterministic"):
            seed = settings["seed"]
        corpus = build_corpus(settings["atoms"], settings["random_formulas"], settings["max_depth"], seed)
        for phi in corpus:
            emit({"formula": to_text(phi)})
        return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point."""
    args = build_parser().parse_args(argv)
    try:
        workbench = Workbench(args.config)
    except (OSError, ValueError) as e:
        logging.getLogger("InqWorkbench").error(f"Failed to load config from {args.config}: {e}")
        return EXIT_INPUT
    return workbench.run(args)


if __name__ == "__main__":
    sys.exit(main())
