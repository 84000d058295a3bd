import csv
import json
import logging
import math
import os
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime

import numpy as np

from src.algorithms.bounds import (
    ALLOCATION_CAP,
    bound_sweep,
    derive_constants,
    lemma6_worst_case,
    random_lemma6_instance,
    sum_rate_upper_bound,
)
from src.algorithms.curves import RateCurve, snr_db_grid
from src.algorithms.entropy import estimate_entropy_knn, polar_stats
from src.algorithms.inequalities import (
    CLOSED_FORM_GAUSSIAN,
    SUITE_SEEDS,
    SUITE_TRIALS,
    InequalityCase,
    lemma2_check,
    random_lemma2_case,
    rotation_identity_gap,
    run_suite,
    sine_bound_margin,
)
from src.algorithms.maxent import hmax, hmax_asymptote, solve_maxent
from src.algorithms.schemes import COOPERATIVE, SINGLE_USER, Scheme, prelog_fit, scheme_sum_rate, sim_sweep
from src.models.channel_config import parse_config
from src.models.errors import LabError, MissingConfigError
from src.models.fading import ChannelConfig, FadingModel
from src.models.laws import Gaussian2Law
from src.models.streams import default_seed, make_stream

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("maxent", "constants", "verify", "bound", "sim", "report")
EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
RUN_LOG = "run_log.json"
DOMINANCE_SE = 3.0

CANONICAL_CONFIGS = {
    "gaussian-iid": ChannelConfig(FadingModel.gaussian_iid(1.0, 0.1), FadingModel.gaussian_iid(1.0, 0.1)),
    "ring-phase": ChannelConfig(FadingModel.ring_phase(1.0, 0.1), FadingModel.ring_phase(1.0, 0.1)),
}

# reduced sizes for the report battery
REPORT_TRIALS = {1: 10, 2: 10, 3: 3, 4: 5, 5: 5, 6: 25}
REPORT_SIM_DRAWS = 20_000


@dataclass
class RunConfig:
    subcommand: str
    config_path: str = None
    seed: int = field(default_factory=default_seed)
    output_path: str = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise LabError(f"unknown subcommand {self.subcommand!r}, expected one of {', '.join(SUBCOMMANDS)}")
        if not 0 <= self.seed < 2 ** 64:
            raise LabError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def option(self, name, default=None):
        value = self.options.get(name)
        return default if value is None else value


class ExperimentController:
    def __init__(self, run_config):
        self.run_config = run_config
        self.rows = []
        self.summary = ""
        self.violation = None
        self.elapsed = 0.0

    def run(self):
        handler = {
            "maxent": self._run_maxent,
            "constants": self._run_constants,
            "verify": self._run_verify,
            "bound": self._run_bound,
            "sim": self._run_sim,
            "report": self._run_report,
        }[self.run_config.subcommand]

        start_time = time.time()
        try:
            handler()
        except LabError as exc:
            print(f"error: {exc}", file=sys.stderr)
            exit_code = EXIT_USAGE
        else:
            self._write_csv()
            exit_code = EXIT_OK if self.violation is None else EXIT_VIOLATION
            if self.violation is not None:
                print(f"violation: {self.violation}", file=sys.stderr)
            self._print_summary(exit_code)
        self.elapsed = time.time() - start_time
        self._log_run_result(exit_code)
        return exit_code

    # --- subcommands ---------------------------------------------------------------

    def _run_maxent(self):
        for gamma in self.run_config.option("gamma", [1.0]):
            solution = solve_maxent(gamma)
            residuals = solution.residuals()
            self.rows.append({
                "gamma": gamma, "alpha": solution.alpha, "c": solution.c, "h_max": solution.h_max,
                "asymptote": hmax_asymptote(gamma),
                "normalization_residual": residuals.normalization,
                "constraint_residual": residuals.constraint,
            })
        self.summary = f"maxent: {len(self.rows)} solutions"

    def _run_constants(self):
        constants = derive_constants()
        self.rows.append({
            "version": constants.version, "m_half": constants.m_half,
            "gamma": constants.gamma, "gamma_prime": constants.gamma_prime,
        })
        self.summary = f"constants v{constants.version}: gamma = {constants.gamma:.6f}"

    def _run_verify(self):
        lemma = self.run_config.option("lemma")
        if lemma is None:
            raise LabError("verify needs --lemma")
        trials = self.run_config.option("trials", SUITE_TRIALS.get(lemma, 0))
        if trials < 1:
            raise LabError(f"trials must be >= 1, got {trials}")
        stream = make_stream(self.run_config.seed)
        for trial, reports in enumerate(run_suite(lemma, trials, stream)):
            for report in reports:
                row = {"lemma": lemma, "trial": trial, **report.as_row()}
                self.rows.append(row)
                if not report.passed and self.violation is None:
                    self.violation = row
        failed = sum(1 for row in self.rows if not row["pass"])
        self.summary = f"verify lemma {lemma}: {len(self.rows) - failed}/{len(self.rows)} reports passed"

    def _load_config(self):
        if self.run_config.config_path is None:
            raise MissingConfigError(f"{self.run_config.subcommand} needs --config")
        return parse_config(self.run_config.config_path)

    def _snr_grid(self):
        return snr_db_grid(self.run_config.option("snr_db_start", 0.0),
                           self.run_config.option("snr_db_stop", 120.0),
                           self.run_config.option("snr_db_step", 10.0))

    def _run_bound(self):
        config = self._load_config()
        db, snr = self._snr_grid()
        sweep = bound_sweep(config, snr)
        for snr_db, report in zip(db, sweep.reports):
            self.rows.append({
                "snr_db": float(snr_db), "snr": report.snr, "term_log_a": report.term_log_a,
                "term_log_h": report.term_log_h, "term_constants": report.term_constants,
                "total": report.total, "ratio": report.ratio,
            })
        self.summary = f"bound: prelog slope {sweep.slope:.6f} over {len(db)} points"

    def _run_sim(self):
        config = self._load_config()
        scheme = Scheme(self.run_config.option("scheme", COOPERATIVE), self.run_config.option("power_split", 0.5))
        db, snr = self._snr_grid()
        n_mc = self.run_config.option("mc", 100_000)
        results, curve = sim_sweep(scheme, config, snr, n_mc, make_stream(self.run_config.seed),
                                   workers=self.run_config.option("workers", 1),
                                   progress=self.run_config.option("progress", False))
        for snr_db, result in zip(db, results):
            row = {
                "snr_db": float(snr_db), "snr": result.snr, "scheme": scheme.tag,
                "rate_y": result.rate_y, "rate_z": result.rate_z, "sum_rate": result.sum_rate,
                "std_error": result.std_error, "n_mc": result.n_mc, "skipped": result.skipped,
            }
            total = sum_rate_upper_bound(config.with_snr(result.snr)).total
            row["bound_total"] = total
            if result.sum_rate - DOMINANCE_SE * result.std_error > total and self.violation is None:
                self.violation = row
            self.rows.append(row)
        if curve.decades >= 3 and len(db) >= 4:
            slope, _ = prelog_fit(curve)
            self.summary = f"sim {scheme.tag}: prelog slope {slope:.4f} over {len(db)} points"
        else:
            self.summary = f"sim {scheme.tag}: {len(db)} points"

    def _run_report(self):
        stream = make_stream(self.run_config.seed)
        checks = [
            self._check_asymptote,
            self._check_bound_slopes,
            self._check_lemma6_cap,
            self._check_lemma3_gaussian,
            self._check_suites,
            self._check_identities,
            self._check_knn_calibration,
            self._check_prelog_hierarchy,
        ]
        for check, child in zip(checks, stream.spawn(len(checks))):
            for name, value, threshold, passed in check(child):
                row = {"check": name, "value": value, "threshold": threshold, "pass": bool(passed)}
                self.rows.append(row)
                if not passed and self.violation is None:
                    self.violation = row
        failed = sum(1 for row in self.rows if not row["pass"])
        self.summary = f"report: {len(self.rows) - failed}/{len(self.rows)} checks passed"

    # --- report battery ------------------------------------------------------------

    def _check_asymptote(self, stream):
        gaps = [abs(hmax(g) - hmax_asymptote(g)) for g in (10.0, 20.0, 40.0)]
        yield "asymptote-decreasing", gaps[0] - gaps[-1], 0.0, gaps[0] > gaps[1] > gaps[2]
        yield "asymptote-gap-40", gaps[-1], 0.1, gaps[-1] < 0.1

    def _check_bound_slopes(self, stream):
        _, snr = snr_db_grid(60.0, 120.0, 10.0)
        for name, config in self._report_configs():
            slope = bound_sweep(config, snr).slope
            yield f"bound-prelog-{name}", slope, 2.0 / 3.0, abs(slope - 2.0 / 3.0) <= 1e-3

    def _check_lemma6_cap(self, stream):
        worst = max(lemma6_worst_case(*random_lemma6_instance(child)).delta
                    for child in stream.spawn(REPORT_TRIALS[6]))
        yield "lemma6-cap", worst, ALLOCATION_CAP, worst <= ALLOCATION_CAP + 1e-6

    def _check_lemma3_gaussian(self, stream):
        sample_stream, estimate_stream = stream.spawn(2)
        samples = Gaussian2Law.isotropic(1.0).sample(sample_stream, 100_000)
        report = polar_stats(samples, stream=estimate_stream)
        radial = report.h_r.value + report.e_log_r
        yield "lemma3-radial-gaussian", radial, 1.0, abs(radial - 1.0) <= 0.02
        yield "lemma3-gap-gaussian", report.lemma3_gap, -3.0 * report.combined_se, \
            abs(report.lemma3_gap) <= 3.0 * report.combined_se

    def _check_suites(self, stream):
        for lemma in sorted(SUITE_SEEDS):
            if lemma == 6:
                continue
            reports = [r for trial in run_suite(lemma, REPORT_TRIALS[lemma], make_stream(SUITE_SEEDS[lemma]))
                       for r in trial]
            passed = sum(r.passed for r in reports)
            yield f"suite-lemma{lemma}", passed / len(reports), 1.0, passed == len(reports)
        closed = [lemma2_check(random_lemma2_case(child, mode=CLOSED_FORM_GAUSSIAN))
                  for child in stream.spawn(REPORT_TRIALS[2])]
        worst = min(r.gap for r in closed)
        yield "suite-lemma2-closed-form", worst, -1e-9, worst >= -1e-9

    def _check_identities(self, stream):
        worst = 0.0
        for child in stream.spawn(100):
            var = 10.0 ** child.uniform(-1.0, 1.0, 2)
            case = InequalityCase(x_law=Gaussian2Law.from_matrix(np.diag(var)), noise_var=float(child.uniform(0.1, 2.0)))
            theta1, theta2 = child.uniform(-math.pi, math.pi, 2)
            if abs(math.sin(theta2 - theta1)) < 1e-6:
                continue
            worst = max(worst, rotation_identity_gap(theta1, theta2, case))
        yield "rotation-identity", worst, 1e-9, worst <= 1e-9
        margin = float(np.min(sine_bound_margin(np.linspace(-math.pi, math.pi, 1_000_000, endpoint=False))))
        yield "sine-bound-margin", margin, -1e-12, margin >= -1e-12

    def _check_knn_calibration(self, stream):
        s1, s2, s3 = stream.spawn(3)
        one = estimate_entropy_knn(s1.normal(size=100_000), stream=s1).value
        exact_one = 0.5 * math.log(2 * math.pi * math.e)
        yield "knn-gaussian-1d", one - exact_one, 0.02, abs(one - exact_one) <= 0.02
        two = estimate_entropy_knn(s2.normal(size=(100_000, 2)), stream=s2).value
        yield "knn-gaussian-2d", two - 2 * exact_one, 0.03, abs(two - 2 * exact_one) <= 0.03
        uniform = estimate_entropy_knn(s3.uniform(0.0, 2.0, 100_000), stream=s3).value
        yield "knn-uniform-1d", uniform - math.log(2.0), 0.02, abs(uniform - math.log(2.0)) <= 0.02

    def _check_prelog_hierarchy(self, stream):
        _, snr = snr_db_grid(20.0, 100.0, 20.0)
        config = CANONICAL_CONFIGS["gaussian-iid"]
        for tag, target in ((COOPERATIVE, 1.0), (SINGLE_USER, 0.5)):
            results, _ = sim_sweep(Scheme(tag), config, snr, REPORT_SIM_DRAWS, stream.spawn(1)[0])
            slope, _ = prelog_fit(RateCurve(tuple(snr), tuple(r.sum_rate for r in results)))
            yield f"prelog-{tag}", slope, target, abs(slope - target) <= 0.05
        bounds = bound_sweep(config, snr)
        top = scheme_sum_rate(Scheme(COOPERATIVE), config, float(snr[-1]), REPORT_SIM_DRAWS, stream.spawn(1)[0])
        margin = bounds.reports[-1].total - top.sum_rate
        yield "bound-dominance", margin, 0.0, margin >= -DOMINANCE_SE * top.std_error

    def _report_configs(self):
        if self.run_config.config_path is not None:
            return [("config", self._load_config())]
        return list(CANONICAL_CONFIGS.items())

    # --- output --------------------------------------------------------------------

    def _write_csv(self):
        if not self.rows:
            return
        header = list(self.rows[0])
        for row in self.rows[1:]:
            header.extend(key for key in row if key not in header)
        output_path = self.run_config.output_path
        if output_path is None:
            self._write_rows(sys.stdout, header)
            return
        with open(output_path, 'w', newline='') as file:
            self._write_rows(file, header)

    def _write_rows(self, file, header):
        writer = csv.DictWriter(file, fieldnames=header, lineterminator='\n')
        writer.writeheader()
        writer.writerows(self.rows)

    def _print_summary(self, exit_code):
        out = sys.stdout if self.run_config.output_path is not None else sys.stderr
        print(f"{self.summary} (exit {exit_code})", file=out)

    def _log_run_result(self, exit_code):
        output_path = self.run_config.output_path
        if output_path is not None:
            results_dir = os.path.dirname(os.path.abspath(output_path))
        else:
            results_dir = os.path.join(os.getcwd(), "results")
        os.makedirs(results_dir, exist_ok=True)

        result = {
            "subcommand": self.run_config.subcommand,
            "seed": self.run_config.seed,
            "config": self.run_config.config_path,
            "options": {key: value for key, value in self.run_config.options.items() if value is not None},
            "exit_code": exit_code,
            "rows": len(self.rows),
            "execution_time": self.elapsed,
            "timestamp": datetime.now().strftime("%Y-%m-%d %H:%M:%S"),
        }

        json_file = os.path.join(results_dir, RUN_LOG)
        if os.path.exists(json_file):
            with open(json_file, "r") as file:
                data = json.load(file)
        else:
            data = []

        data.append(result)

        with open(json_file, "w") as file:
            json.dump(data, file, indent=4)


def run(run_config):
    return ExperimentController(run_config).run()
