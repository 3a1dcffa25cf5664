#!/usr/bin/env python3
"""
🔬 Cross Validation
Date: 03/09/2025
Description: Runs every evaluation path over a parameter × time grid, records the
largest pairwise deviation per criterion and writes a JSON report.
"""

import json
import math
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from rich.console import Console
from rich.table import Table

from core.brodygraefe import (
    closed_form_params,
    closed_form_probabilities,
    probabilities_density_trace,
    pt_limit_probabilities,
)
from core.gmetric import (
    kappa_from_tau,
    kappa_from_tau_p,
    probabilities_broken,
    probabilities_g_pipeline,
    probabilities_unbroken,
)
from core.model import classify_regime
from models.errors import (
    DegenerateSechError,
    ExceptionalPointError,
    InvalidParamsError,
    NhoscError,
    UnsupportedChiError,
)
from models.oscillation import OscillationParams, ProbabilityQuad, RegimeKind
from models.run_config import (
    DEFAULT_VALIDATION_POINTS,
    DEFAULT_VALIDATION_SEED,
    DEFAULT_VALIDATION_TIMES,
)
from utils.logger import setup_logger
from utils.units import UnitsMode, km_to_inverse_gev
from .invariants import INVARIANT_TOLERANCES, check_invariants
from .oracle import IntegrationConfig, probabilities_rk4

logger = setup_logger('cross_validation')

PAIR_TOLERANCES = {
    'closed_form_vs_trace': 1e-9,
    'closed_form_vs_rk4': 1e-8,
    'trace_vs_rk4': 1e-8,
    'pt_limit_vs_closed_form': 1e-12,
    'g_unbroken_closed_vs_pipeline': 1e-12,
    'g_broken_closed_vs_pipeline': 1e-11,
    'conservation_trace': 1e-10,
    'conservation_closed_form': 1e-10,
}

CLOSED_FORM_CRITERIA = ('closed_form_vs_trace', 'closed_form_vs_rk4',
                        'pt_limit_vs_closed_form', 'conservation_closed_form')
G_METRIC_CRITERIA = ('g_unbroken_closed_vs_pipeline', 'g_broken_closed_vs_pipeline')
FAULT_SIZE = 1e-3
VALIDATION_MAX_KM = 300.0


@dataclass
class CriterionResult:
    """Largest deviation seen for one method pair or conservation check"""
    name: str
    tolerance: float
    max_abs_dev: float = 0.0
    worst_point: Optional[Dict[str, Any]] = None
    samples: int = 0

    @property
    def passed(self) -> bool:
        return self.max_abs_dev <= self.tolerance

    def record(self, deviation: float, point: Dict[str, Any]) -> None:
        self.samples += 1
        if deviation > self.max_abs_dev or self.worst_point is None:
            self.max_abs_dev = max(self.max_abs_dev, deviation)
            self.worst_point = point

    def to_dict(self) -> Dict[str, Any]:
        return {
            'max_abs_dev': self.max_abs_dev,
            'worst_point': self.worst_point,
            'tolerance': self.tolerance,
            'samples': self.samples,
            'pass': self.passed,
        }


@dataclass
class ValidationReport:
    """Per-criterion deviations plus the skipped and failed points of a run.

    `criteria` holds the method-pair comparisons, `invariants` the structural
    checks filled in by check_invariants.
    """
    criteria: Dict[str, CriterionResult] = field(default_factory=lambda: {
        name: CriterionResult(name, tol) for name, tol in PAIR_TOLERANCES.items()
    })
    invariants: Dict[str, CriterionResult] = field(default_factory=dict)
    skips: List[Dict[str, Any]] = field(default_factory=list)
    failures: List[Dict[str, Any]] = field(default_factory=list)
    points: int = 0
    times: int = 0
    fault_injected: bool = False

    @property
    def all_criteria(self) -> Dict[str, CriterionResult]:
        return {**self.criteria, **self.invariants}

    @property
    def max_abs_dev(self) -> Dict[str, float]:
        return {name: c.max_abs_dev for name, c in self.all_criteria.items()}

    @property
    def worst_point(self) -> Dict[str, Optional[Dict[str, Any]]]:
        return {name: c.worst_point for name, c in self.all_criteria.items()}

    @property
    def passed(self) -> Dict[str, bool]:
        return {name: c.passed for name, c in self.all_criteria.items()}

    @property
    def all_passed(self) -> bool:
        return all(self.passed.values()) and not self.failures

    def failed_criteria(self) -> List[str]:
        return [name for name, ok in self.passed.items() if not ok]

    def record(self, name: str, deviation: float, point: Dict[str, Any]) -> None:
        self.criteria[name].record(deviation, point)

    def record_invariant(self, name: str, deviation: float, point: Dict[str, Any]) -> None:
        if name not in self.invariants:
            self.invariants[name] = CriterionResult(name, INVARIANT_TOLERANCES[name])
        self.invariants[name].record(deviation, point)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'summary': {
                'points': self.points,
                'times': self.times,
                'skipped': len(self.skips),
                'failed': len(self.failures),
                'fault_injected': self.fault_injected,
                'pass': self.all_passed,
                'generated_at': datetime.now().isoformat(),
            },
            'criteria': {name: c.to_dict() for name, c in self.criteria.items()},
            'invariants': {name: c.to_dict() for name, c in self.invariants.items()},
            'skips': self.skips,
            'failures': self.failures,
        }

    def to_frame(self) -> pd.DataFrame:
        """One row per criterion: section, name, samples, deviation, tolerance, pass"""
        rows = [
            (section, name, c.samples, c.max_abs_dev, c.tolerance, c.passed)
            for section, group in (('cross-validation', self.criteria), ('invariant', self.invariants))
            for name, c in group.items()
        ]
        return pd.DataFrame(rows, columns=['section', 'criterion', 'samples',
                                           'max_abs_dev', 'tolerance', 'pass'])

    def write(self, output_path: Path) -> None:
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, 'w', encoding='utf-8') as f:
            json.dump(self.to_dict(), f, indent=2, ensure_ascii=False)
        logger.info(f"Validation report saved to: {output_path}")

    def summary(self) -> Table:
        table = Table(title="nhosc cross-validation")
        table.add_column("criterion")
        table.add_column("samples", justify="right")
        table.add_column("max |Δ|", justify="right")
        table.add_column("tolerance", justify="right")
        table.add_column("status")
        for index, group in enumerate((self.criteria, self.invariants)):
            if index and group:
                table.add_section()
            for name, c in group.items():
                status = "[green]✅ pass[/green]" if c.passed else "[red]❌ fail[/red]"
                table.add_row(name, str(c.samples), f"{c.max_abs_dev:.3e}", f"{c.tolerance:.0e}", status)
        return table

    def print_summary(self, console: Optional[Console] = None) -> None:
        console = console or Console()
        console.print(self.summary())
        if self.skips:
            console.print(f"⏭️  {len(self.skips)} closed-form evaluations skipped")
        for failure in self.failures:
            console.print(f"[red]❌ {failure['stage']}: {failure['error']}[/red]")


def _conservation_deviation(quad: ProbabilityQuad) -> float:
    return max(abs(quad.sum_a - 1.0), abs(quad.sum_b - 1.0))


def _with_fault(quad: ProbabilityQuad) -> ProbabilityQuad:
    return ProbabilityQuad(quad.p_aa, quad.p_ab + FAULT_SIZE, quad.p_ba, quad.p_bb)


def _g_metric_closed(p: OscillationParams, kind: RegimeKind, t: float) -> ProbabilityQuad:
    if kind is RegimeKind.UNBROKEN:
        return probabilities_unbroken(p, t)
    return probabilities_broken(p, t)


class _GridRun:
    """Accumulates one cross_validate call"""

    def __init__(self, report: ValidationReport):
        self.report = report

    def attempt(self, stage: str, point: Dict[str, Any], compute: Callable[[], Any]) -> Any:
        try:
            return compute()
        except NhoscError as e:
            logger.error(f"{stage} failed at t = {point.get('t')}: {e}")
            self.report.failures.append({**point, 'stage': stage, 'error': f"{type(e).__name__}: {e}"})
            return None

    def skip(self, point: Dict[str, Any], criteria: Sequence[str], reason: str) -> None:
        logger.debug(f"skipping {', '.join(criteria)}: {reason}")
        self.report.skips.append({**point, 'criteria': list(criteria), 'reason': reason})


def cross_validate(p_grid: Sequence[OscillationParams], t_grid: Sequence[float],
                   cfg: IntegrationConfig = IntegrationConfig(),
                   inject_fault: bool = False) -> ValidationReport:
    """Compare closed forms, trace pipeline, RK4 and G-metric paths over the grid.

    Per-point errors are recorded as failures; the sweep always completes.
    """
    if not p_grid or not t_grid:
        raise InvalidParamsError("validation grid is empty")
    times = sorted(float(t) for t in t_grid)
    if times[0] < 0:
        raise InvalidParamsError("validation times must be non-negative")

    report = ValidationReport(points=len(p_grid), times=len(times), fault_injected=inject_fault)
    run = _GridRun(report)

    for p in p_grid:
        base = {'params': p.to_dict()}

        rk4 = run.attempt('rk4', base, lambda: probabilities_rk4(p, p.theta, times, cfg))

        cf = None
        try:
            cf = closed_form_params(p)
        except (UnsupportedChiError, ExceptionalPointError, DegenerateSechError) as e:
            run.skip(base, CLOSED_FORM_CRITERIA, f"{type(e).__name__}: {e}")

        g_kind = None
        if p.is_pt_symmetric():
            g_kind = classify_regime(p).kind
            if g_kind is RegimeKind.EXCEPTIONAL:
                run.skip(base, G_METRIC_CRITERIA, "exceptional point")
                g_kind = None

        g_name = None
        if g_kind is not None:
            g_name = G_METRIC_CRITERIA[0] if g_kind is RegimeKind.UNBROKEN else G_METRIC_CRITERIA[1]

        for index, t in enumerate(times):
            point = {**base, 't': t}

            trace = run.attempt('trace', point, lambda: probabilities_density_trace(p, t))
            if trace is not None:
                report.record('conservation_trace', _conservation_deviation(trace), point)
                if rk4 is not None:
                    report.record('trace_vs_rk4', trace.max_abs_diff(rk4[index]), point)

            if cf is not None:
                closed = run.attempt('closed_form', point, lambda: closed_form_probabilities(cf, t))
                if closed is not None:
                    if inject_fault:
                        closed = _with_fault(closed)
                    report.record('conservation_closed_form', _conservation_deviation(closed), point)
                    if trace is not None:
                        report.record('closed_form_vs_trace', closed.max_abs_diff(trace), point)
                    if rk4 is not None:
                        report.record('closed_form_vs_rk4', closed.max_abs_diff(rk4[index]), point)
                    if p.is_pt_symmetric():
                        pt = run.attempt('pt_limit', point, lambda: pt_limit_probabilities(cf, t))
                        if pt is not None:
                            report.record('pt_limit_vs_closed_form', pt.max_abs_diff(closed), point)

            if g_kind is not None:
                g_closed = run.attempt('g_closed', point, lambda: _g_metric_closed(p, g_kind, t))
                g_pipeline = run.attempt('g_pipeline', point, lambda: probabilities_g_pipeline(p, t))
                if g_closed is not None and g_pipeline is not None:
                    report.record(g_name, g_closed.max_abs_diff(g_pipeline), point)

    status = "passed" if report.all_passed else f"failed: {', '.join(report.failed_criteria()) or 'errors'}"
    logger.info(f"cross-validation over {len(p_grid)} × {len(times)} points {status}")
    return report


def _random_params(rng: np.random.Generator, kind: int) -> OscillationParams:
    """One draw in eV²; kind cycles PT-symmetric / general χ = 0 / χ ≠ 0"""
    dm2 = rng.uniform(1e-3, 4e-3)

    if kind == 0:
        sigma = rng.uniform(-0.3, 0.3) * dm2
        phi = rng.uniform(0.2, math.pi - 0.2)
        gain = rng.uniform(0.0, 1.5) * (dm2 + sigma)
        return OscillationParams.from_user_units(
            energy_GeV=1.0, dm2_eV2=dm2, theta=math.pi / 4,
            kappa_eV2=gain / math.sin(phi), sigma_eV2=sigma, phi=phi)

    chi = rng.uniform(0.1, 2 * math.pi - 0.1) if kind == 2 else 0.0
    return OscillationParams.from_user_units(
        energy_GeV=rng.uniform(0.5, 2.0),
        dm2_eV2=dm2,
        theta=rng.uniform(0.1, math.pi / 2 - 0.1),
        kappa_eV2=rng.uniform(0.0, 1.5) * dm2,
        sigma_eV2=rng.uniform(-0.05, 0.3) * dm2,
        phi=rng.uniform(0.0, 2 * math.pi),
        chi=chi,
    )


def figure_validation_points() -> List[OscillationParams]:
    """Hermitian, exceptional, and the unbroken / broken G-metric figure points"""
    dm2 = 2.5e-3
    return [
        OscillationParams.from_user_units(1.0, dm2, math.pi / 4),
        OscillationParams.from_user_units(1.0, dm2, 0.6),
        OscillationParams.from_user_units(1.0, dm2, math.pi / 4, kappa_eV2=5e-3, phi=math.pi / 6),
        OscillationParams.from_user_units(1.0, dm2, math.pi / 4,
                                          kappa_eV2=kappa_from_tau(dm2, 0.0, math.pi / 6),
                                          phi=math.pi / 2),
        OscillationParams.from_user_units(1.0, dm2, math.pi / 4,
                                          kappa_eV2=kappa_from_tau_p(dm2, 0.0, 0.5),
                                          phi=math.pi / 2),
    ]


def default_validation_grid(points: int = DEFAULT_VALIDATION_POINTS,
                            times: int = DEFAULT_VALIDATION_TIMES,
                            seed: int = DEFAULT_VALIDATION_SEED,
                            max_km: float = VALIDATION_MAX_KM,
                            mode: UnitsMode = UnitsMode.EXACT
                            ) -> Tuple[List[OscillationParams], List[float]]:
    """Figure points plus `points` random draws; `times` baselines in [0, max_km]"""
    if points < 1:
        raise InvalidParamsError(f"points must be at least 1, got {points}")
    if times < 1:
        raise InvalidParamsError(f"times must be at least 1, got {times}")

    rng = np.random.default_rng(seed)
    p_grid = figure_validation_points() + [_random_params(rng, i % 3) for i in range(points)]
    baselines = np.linspace(0.0, max_km, times) if times > 1 else np.array([max_km])
    t_grid = [km_to_inverse_gev(float(L), mode) for L in baselines]
    return p_grid, t_grid


def run_validation(p_grid: Sequence[OscillationParams], t_grid: Sequence[float],
                   cfg: IntegrationConfig = IntegrationConfig(),
                   inject_fault: bool = False,
                   draws: int = DEFAULT_VALIDATION_POINTS,
                   seed: Optional[int] = DEFAULT_VALIDATION_SEED) -> ValidationReport:
    """Method cross-validation followed by the invariant checks"""
    report = cross_validate(p_grid, t_grid, cfg, inject_fault=inject_fault)
    check_invariants(report, p_grid, t_grid, draws, seed)
    return report


__all__ = [
    'PAIR_TOLERANCES',
    'FAULT_SIZE',
    'CriterionResult',
    'ValidationReport',
    'G_METRIC_CRITERIA',
    'cross_validate',
    'run_validation',
    'figure_validation_points',
    'default_validation_grid',
]
