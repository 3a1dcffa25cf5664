#!/usr/bin/env python3
"""
📈 Scans - Phase maps and probability sweeps
Date: 03/09/2025
Description: Library side of the nhosc command line. Builds the κ–σ regime grid,
edge-detects its boundary, sweeps probabilities over L or L/E with any
evaluation method and writes the results as CSV or JSON.
"""

import json
import math
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, TextIO

import numpy as np
import pandas as pd

from core.brodygraefe import (
    ClosedFormParams,
    closed_form_params,
    closed_form_probabilities,
    probabilities_closed_form_LE,
    probabilities_density_trace,
    probabilities_from_hamiltonian,
)
from core.gmetric import (
    kappa_from_tau,
    kappa_from_tau_p,
    probabilities_broken,
    probabilities_unbroken,
)
from core.model import build_hamiltonian, classify_regime
from models.errors import ConfigError, NhoscError, NotPTSymmetricError, WrongRegimeError
from models.oscillation import OscillationParams, ProbabilityQuad, RegimeKind
from models.run_config import (
    PHASE_MAP_COLUMNS,
    SCAN_ROW_COLUMNS,
    Method,
    OutputFormat,
    RunConfig,
    ScanRow,
    ScanVariable,
    UserParams,
)
from utils.logger import setup_logger
from utils.units import EV2_PER_GEV2, ev2_to_gev2, km_to_inverse_gev
from .oracle import IntegrationConfig, probabilities_rk4

logger = setup_logger('scans')

CSV_FLOAT_FORMAT = "%.17g"
NON_PT_LABEL = "non-pt"

Evaluator = Callable[[Dict[str, float]], ProbabilityQuad]


def resolve_params(user: UserParams, energy: Optional[float] = None) -> OscillationParams:
    """User units → OscillationParams, solving κ from τ or τ′ when given"""
    given = [name for name in ('kappa', 'tau', 'tau_p') if getattr(user, name) is not None]
    if len(given) > 1:
        raise ConfigError(f"give only one of kappa, tau, tau_p (got {', '.join(given)})")

    kappa = user.kappa or 0.0
    if user.tau is not None:
        kappa = kappa_from_tau(user.dm2, user.sigma, user.tau, user.phi)
    elif user.tau_p is not None:
        kappa = kappa_from_tau_p(user.dm2, user.sigma, user.tau_p, user.phi)

    return OscillationParams.from_user_units(
        energy_GeV=user.energy if energy is None else energy,
        dm2_eV2=user.dm2,
        theta=user.theta,
        kappa_eV2=kappa,
        sigma_eV2=user.sigma,
        phi=user.phi,
        chi=user.chi,
        mbar2_eV2=user.mbar2,
    )


def regime_label(p: OscillationParams) -> str:
    if not p.is_pt_symmetric():
        return NON_PT_LABEL
    return classify_regime(p).kind.value


# Phase map

def phase_map(cfg: RunConfig) -> pd.DataFrame:
    """Regime and discriminant (eV⁴) on a samples × samples κ–σ grid (eV²)"""
    if cfg.scan.variable is not ScanVariable.KAPPA_SIGMA:
        raise ConfigError("phase-map needs scan = kappa-sigma")
    cfg.scan.validate()

    samples = cfg.scan.samples
    base = resolve_params(cfg.params)
    if not base.is_pt_symmetric():
        raise NotPTSymmetricError("the regime map is defined for θ = π/4 and χ = 0")

    rows = []
    for kappa in np.linspace(*cfg.scan.kappa_range, samples):
        for sigma in np.linspace(*cfg.scan.sigma_range, samples):
            p = base.with_changes(kappa=ev2_to_gev2(float(kappa)), sigma=ev2_to_gev2(float(sigma)))
            regime = classify_regime(p)
            rows.append((float(kappa), float(sigma), regime.kind.value,
                         regime.discriminant * EV2_PER_GEV2 ** 2))

    logger.info(f"phase map: {samples}×{samples} grid")
    return pd.DataFrame(rows, columns=PHASE_MAP_COLUMNS)


def regime_boundary(grid: pd.DataFrame) -> pd.DataFrame:
    """Edge-detect the unbroken/broken boundary of a phase-map grid.

    For each κ the sign changes along σ give the boundary σ (cell midpoint).
    Entering the broken wedge from below is the 'lower' branch, leaving it the
    'upper' one. Exceptional cells are dropped before differencing.
    """
    edges = []
    for kappa, column in grid.groupby('kappa', sort=True):
        column = column[column['regime'] != RegimeKind.EXCEPTIONAL.value].sort_values('sigma')
        regimes = column['regime'].to_numpy()
        sigmas = column['sigma'].to_numpy()
        for i in np.flatnonzero(regimes[1:] != regimes[:-1]):
            branch = 'lower' if regimes[i + 1] == RegimeKind.BROKEN.value else 'upper'
            edges.append((float(kappa), 0.5 * (sigmas[i] + sigmas[i + 1]), branch))
    return pd.DataFrame(edges, columns=['kappa', 'sigma', 'branch'])


# Probability sweeps

def scan_points(cfg: RunConfig) -> List[Dict[str, float]]:
    """x, L (km), E (GeV) and t (GeV⁻¹) for every sample"""
    scan = cfg.scan
    points = []
    for x in np.linspace(scan.start, scan.stop, scan.samples):
        x = float(x)
        if scan.variable is ScanVariable.L:
            L, E = x, cfg.params.energy
        elif scan.vary_energy:
            L, E = scan.baseline_km, scan.baseline_km / x
        else:
            E = cfg.params.energy
            L = x * E
        points.append({'x': x, 'L': L, 'E': E, 't': km_to_inverse_gev(L, cfg.units_mode)})
    return points


def _angles(user: UserParams):
    if user.alpha is None or user.beta is None:
        raise ConfigError("alpha and beta must be given together")
    given = [name for name in ('kappa', 'tau', 'tau_p') if getattr(user, name) is not None]
    if given:
        raise ConfigError(f"alpha / beta cannot be combined with {', '.join(given)}")
    return user.alpha, user.beta


class ProbabilitySweep:
    """One probability-vs-L or L/E run of a RunConfig"""

    def __init__(self, cfg: RunConfig):
        if cfg.scan.variable is ScanVariable.KAPPA_SIGMA:
            raise ConfigError("probability sweeps need scan = L or LE")
        cfg.validate()
        self.cfg = cfg
        self.user = cfg.params
        self.points = scan_points(cfg)
        self.logger = setup_logger('probability_sweep')
        self.integration = IntegrationConfig(steps_per_period=cfg.steps_per_period)

    # Pointwise evaluators take a scan point {'x', 'L', 'E', 't'}

    def _closed_form_for(self, E: float) -> ClosedFormParams:
        if self.user.uses_angles():
            alpha, beta = _angles(self.user)
            return ClosedFormParams.from_angles(
                alpha, beta, self.user.theta, ev2_to_gev2(self.user.dm2),
                ev2_to_gev2(self.user.sigma), E, ev2_to_gev2(self.user.mbar2))
        return closed_form_params(resolve_params(self.user, E))

    def _hamiltonian_for(self, E: float):
        if self.user.uses_angles():
            return self._closed_form_for(E).effective_hamiltonian()
        return build_hamiltonian(resolve_params(self.user, E))

    def _label_for(self, E: float) -> str:
        if self.user.uses_angles():
            return NON_PT_LABEL
        return regime_label(resolve_params(self.user, E))

    def _g_metric(self, E: float) -> Evaluator:
        p = resolve_params(self.user, E)
        if not p.is_pt_symmetric():
            raise NotPTSymmetricError("g-metric needs θ = π/4 and χ = 0")
        kind = classify_regime(p).kind
        if kind is RegimeKind.UNBROKEN:
            return lambda point: probabilities_unbroken(p, point['t'])
        if kind is RegimeKind.BROKEN:
            static = self.cfg.static_metric
            return lambda point: probabilities_broken(p, point['t'], static_metric=static)
        raise WrongRegimeError("g-metric closed forms are singular at the exceptional point")

    def _density_analytic(self, E: float) -> Evaluator:
        cf = self._closed_form_for(E)
        if not self.cfg.appendix_verbatim:
            return lambda point: closed_form_probabilities(cf, point['t'])

        user, mode = self.user, self.cfg.units_mode
        return lambda point: probabilities_closed_form_LE(
            user.dm2, user.sigma, user.theta, cf.alpha, cf.beta,
            point['L'], point['E'], mode, appendix_verbatim=True)

    def _density_trace(self, E: float) -> Evaluator:
        states, theta = self.cfg.initial_states, self.user.theta
        if self.user.uses_angles():
            H = self._hamiltonian_for(E)
            return lambda point: probabilities_from_hamiltonian(H, theta, point['t'], states)
        p = resolve_params(self.user, E)
        return lambda point: probabilities_density_trace(p, point['t'], states)

    def _evaluator(self, E: float) -> Evaluator:
        method = self.cfg.method
        if method is Method.G_METRIC:
            return self._g_metric(E)
        if method is Method.DENSITY_ANALYTIC:
            return self._density_analytic(E)
        if method is Method.DENSITY_TRACE:
            return self._density_trace(E)
        raise ConfigError(f"no pointwise evaluator for {method.value}")

    def _rk4_rows(self) -> List[ScanRow]:
        """One RK4 integration per energy; fixed-E sweeps integrate along the whole grid"""
        groups: Dict[float, List[Dict[str, float]]] = {}
        for point in self.points:
            groups.setdefault(point['E'], []).append(point)

        rows: Dict[float, ScanRow] = {}
        for E, points in groups.items():
            label = self._label_for(E)
            H = self._hamiltonian_for(E)
            try:
                quads = probabilities_rk4(H, self.user.theta, [pt['t'] for pt in points],
                                          self.integration, self.cfg.initial_states)
                for point, quad in zip(points, quads):
                    rows[point['x']] = ScanRow.from_quad(point['x'], quad, label)
            except ArithmeticError as e:
                self.logger.error(f"RK4 failed at E = {E:g} GeV: {e}")
                for point in points:
                    rows[point['x']] = ScanRow.failed(point['x'], label, f"{type(e).__name__}: {e}")
        return [rows[point['x']] for point in self.points]

    def run(self) -> List[ScanRow]:
        """ScanRows ordered by x.

        Configuration and regime errors raise; numerical failures at single
        points become rows with NaN probabilities and the error column set.
        """
        if self.cfg.method is Method.DENSITY_RK4:
            rows = self._rk4_rows()
        else:
            rows = []
            cache: Dict[float, Any] = {}
            for point in self.points:
                E = point['E']
                if E not in cache:
                    cache[E] = (self._label_for(E), self._evaluator(E))
                label, evaluate = cache[E]
                try:
                    rows.append(ScanRow.from_quad(point['x'], evaluate(point), label))
                except NhoscError as e:
                    if not isinstance(e, ArithmeticError):
                        raise
                    self.logger.warning(f"x = {point['x']:g}: {e}")
                    rows.append(ScanRow.failed(point['x'], label, f"{type(e).__name__}: {e}"))

        failed = sum(1 for row in rows if row.error)
        self.logger.info(f"{self.cfg.method.value} sweep: {len(rows)} rows, {failed} failed")
        return rows


def probability_sweep(cfg: RunConfig) -> List[ScanRow]:
    return ProbabilitySweep(cfg).run()


def rows_to_frame(rows: List[ScanRow]) -> pd.DataFrame:
    return pd.DataFrame([asdict(row) for row in rows], columns=SCAN_ROW_COLUMNS)


# Output

def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def write_table(frame: pd.DataFrame, output_path: Optional[Path] = None,
                output_format: OutputFormat = OutputFormat.CSV,
                metadata: Optional[Dict[str, Any]] = None,
                stream: Optional[TextIO] = None) -> None:
    """CSV (17 significant digits, header row) or JSON records to a file or stdout"""
    if output_format is OutputFormat.CSV:
        text = frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    else:
        records = [{key: _json_safe(value) for key, value in record.items()}
                   for record in frame.to_dict(orient='records')]
        document = {'config': metadata or {}, 'rows': records}
        text = json.dumps(document, indent=2, ensure_ascii=False) + "\n"

    if output_path is None:
        (stream or sys.stdout).write(text)
        return

    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    logger.info(f"Wrote {len(frame)} rows to {output_path}")


__all__ = [
    'resolve_params',
    'regime_label',
    'phase_map',
    'regime_boundary',
    'scan_points',
    'ProbabilitySweep',
    'probability_sweep',
    'rows_to_frame',
    'write_table',
]
