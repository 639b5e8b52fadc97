import csv
import io
import logging
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from app.models.sop import SchemeKind, SopMethod
from app.models.sweep import Axis, CompareRow, GainRow, Method, SweepRow, SweepSpec
from app.services.analytic_service import AnalyticService
from app.services.quadrature import DEFAULT_BUDGET
from app.services.custom_errors import ComparisonFailed, CustomError, SweepError, ValidationError
from app.services.montecarlo_service import DEFAULT_BLOCK_SIZE, MonteCarloService
from constants import (COMPARE_HEADER, CSV_HEADER, DEFAULT_METHODS, DEFAULT_SCHEMES, GAIN_HEADER,
                       GAMMA_T_GRID_DB, PRESETS, SIGNIFICANT_DIGITS, Z_THRESHOLD)

logger = logging.getLogger(__name__)

# preset series fields as they appear in output file suffixes
_SERIES_LABELS = {'backhaul_prob': 's', 'n_transmitters': 'N', 'primary_outage_threshold': 'phi'}


def format_number(value):
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, int):
        return str(value)
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return f"{value:.{SIGNIFICANT_DIGITS}g}"


def _analytic_point(config, scheme, method, rel_tol, budget):
    sop_method = SopMethod.ASYMPTOTIC if method is Method.ASYMPTOTIC else SopMethod.EXACT_CLOSED_FORM
    return AnalyticService.sop(config, scheme, sop_method, rel_tol=rel_tol, budget=budget).value


def _guarded_analytic_point(task):
    axis_value, config, scheme, method, rel_tol, budget = task
    try:
        return _analytic_point(config, scheme, method, rel_tol, budget)
    except CustomError as e:
        raise SweepError(e, axis_value, scheme.value, method.value)


class SweepService:
    @staticmethod
    def build_spec(config, sweep, settings) -> SweepSpec:
        """
        SweepSpec from a base SystemConfig and parsed sweep fields. `settings`
        is a Flask-style config mapping supplying the SOP_* defaults. Without
        `values` the sweep is the single point of the base configuration.
        """
        axis = Axis.parse(sweep.get('axis', Axis.GAMMA_T_DB))
        values = sweep.get('values')
        if values is None:
            values = [getattr(config, axis.config_field)]
        return SweepSpec(axis=axis, axis_values=tuple(values), fixed=config,
                         schemes=tuple(sweep.get('schemes') or DEFAULT_SCHEMES),
                         methods=tuple(sweep.get('methods') or DEFAULT_METHODS),
                         trials=sweep.get('trials', settings['SOP_TRIALS']),
                         seed=sweep.get('seed', settings['SOP_SEED']),
                         rel_tol=sweep.get('rel_tol', settings['SOP_REL_TOL']),
                         workers=sweep.get('workers', settings['SOP_WORKERS']),
                         quad_budget=sweep.get('quad_budget', settings['SOP_QUAD_BUDGET']))

    @staticmethod
    def tasks(spec: SweepSpec):
        """(axis_value, config, scheme, method) in output order: axis, scheme, method"""
        for axis_value in spec.axis_values:
            config = spec.config_at(axis_value)
            for scheme in spec.schemes:
                for method in spec.methods:
                    yield axis_value, config, scheme, method

    @staticmethod
    def run_sweep(spec: SweepSpec, block_size: int = DEFAULT_BLOCK_SIZE) -> list:
        """
        Evaluate every (axis value, scheme, method) of the sweep. Analytic
        points are spread over a process pool; simulations parallelise
        internally. Rows come back in deterministic order.
        """
        tasks = list(SweepService.tasks(spec))
        logger.info(f"Sweep over {spec.axis.value}: {len(spec.axis_values)} points, "
                    f"schemes={[s.value for s in spec.schemes]}, methods={[m.value for m in spec.methods]}")
        results = {}

        analytic = [(i, t) for i, t in enumerate(tasks) if t[3] is not Method.MC]
        if analytic:
            payload = [(t[0], t[1], t[2], t[3], spec.rel_tol, spec.quad_budget) for _, t in analytic]
            try:
                if spec.workers > 1 and len(payload) > 1:
                    with ProcessPoolExecutor(max_workers=min(spec.workers, len(payload))) as pool:
                        values = list(pool.map(_guarded_analytic_point, payload))
                else:
                    values = [_guarded_analytic_point(task) for task in payload]
            except SweepError as e:
                logger.error(e.message)
                raise
            for (index, _), value in zip(analytic, values):
                results[index] = value

        for index, (axis_value, config, scheme, method) in enumerate(tasks):
            if method is not Method.MC:
                continue
            try:
                results[index] = MonteCarloService.simulate_sop(config, scheme, spec.trials, spec.seed,
                                                                workers=spec.workers, block_size=block_size)
            except CustomError as e:
                error = SweepError(e, axis_value, scheme.value, method.value)
                logger.error(error.message)
                raise error

        rows = []
        for index, (axis_value, _, scheme, method) in enumerate(tasks):
            result = results[index]
            if method is Method.MC:
                rows.append(SweepRow(spec.axis.value, axis_value, scheme.value, method.value,
                                     result.estimate, result.std_error, result.trials))
            else:
                rows.append(SweepRow(spec.axis.value, axis_value, scheme.value, method.value, result))
        logger.info(f"Sweep over {spec.axis.value} finished with {len(rows)} rows")
        return rows

    @staticmethod
    def compare_report(spec: SweepSpec, block_size: int = DEFAULT_BLOCK_SIZE) -> list:
        """Analytic / asymptotic values against Monte Carlo at a single configuration"""
        if len(spec.axis_values) != 1:
            raise ValidationError("compare needs exactly one configuration point")
        if Method.MC not in spec.methods:
            raise ValidationError("compare needs the mc method")
        reference = [m for m in spec.methods if m is not Method.MC]
        if not reference:
            raise ValidationError("compare needs analytic or asymptotic next to mc")

        rows = SweepService.run_sweep(spec, block_size=block_size)
        by_key = {(r.scheme, r.method): r for r in rows}
        report = []
        for scheme in spec.schemes:
            mc = by_key[(scheme.value, Method.MC.value)]
            for method in reference:
                value = by_key[(scheme.value, method.value)].sop
                diff = value - mc.sop
                if mc.std_error > 0:
                    z = diff / mc.std_error
                else:
                    z = 0.0 if diff == 0 else math.copysign(math.inf, diff)
                passed = abs(z) <= Z_THRESHOLD
                if not passed:
                    logger.warning(f"{scheme.value}/{method.value}: analytic {value:.6g} vs mc {mc.sop:.6g} "
                                   f"(z={z:.3g})")
                report.append(CompareRow(scheme.value, method.value, value, mc.sop, mc.std_error, z, passed))
        logger.info(f"Compare report: {sum(r.passed for r in report)}/{len(report)} rows within |z| <= {Z_THRESHOLD}")
        return report

    @staticmethod
    def ensure_passed(report):
        failed = [r for r in report if not r.passed]
        if failed:
            raise ComparisonFailed(
                f"{len(failed)} of {len(report)} comparisons exceed |z| > {Z_THRESHOLD}",
                payload={"failed": [r.to_dict() for r in failed]})
        return True

    @staticmethod
    def knowledge_gain(rows) -> list:
        """Blind minus known Monte Carlo SOP per axis value and base scheme"""
        mc = {(r.axis_value, r.scheme): r for r in rows if r.method == Method.MC.value}
        gains = []
        for (axis_value, scheme_name), known in mc.items():
            scheme = SchemeKind(scheme_name)
            if scheme.is_blind:
                continue
            blind = mc.get((axis_value, f"{scheme.base}_blind"))
            if blind is None:
                continue
            gains.append(GainRow(known.axis, axis_value, scheme.base, known.sop, blind.sop,
                                 blind.sop - known.sop, math.hypot(known.std_error, blind.std_error)))
        return gains

    @staticmethod
    def preset(name):
        """(series field, series values, fixed overrides) of a named figure preset"""
        if name not in PRESETS:
            raise ValidationError(f"unknown preset {name!r}, expected one of {', '.join(sorted(PRESETS))}")
        return PRESETS[name]

    @staticmethod
    def preset_specs(name, base_config, schemes, methods, trials, seed, rel_tol, workers,
                     axis_values=GAMMA_T_GRID_DB, quad_budget=DEFAULT_BUDGET):
        """
        [(suffix, SweepSpec)] for a named figure preset, one per parameter
        series. The preset's fixed overrides are expected in base_config
        already; the series field is substituted here.
        """
        field, series, _ = SweepService.preset(name)
        specs = []
        for value in series:
            config = base_config.with_overrides(**{field: value})
            spec = SweepSpec(axis=Axis.GAMMA_T_DB, axis_values=tuple(axis_values), fixed=config,
                             schemes=schemes, methods=methods, trials=trials, seed=seed,
                             rel_tol=rel_tol, workers=workers, quad_budget=quad_budget)
            specs.append((f"{_SERIES_LABELS[field]}-{format_number(value)}", spec))
        return specs

    @staticmethod
    def to_csv(rows, header=CSV_HEADER) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            values = row.to_dict()
            if 'passed' in values:
                values['pass'] = values.pop('passed')
            writer.writerow(format_number(values[column]) if not isinstance(values[column], str) else values[column]
                            for column in header)
        return buffer.getvalue()

    @staticmethod
    def write_atomic(path, text):
        """Write through a temporary file in the target directory, then rename"""
        path = Path(path)
        directory = path.parent if str(path.parent) else Path('.')
        directory.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix='.tmp')
        try:
            with os.fdopen(fd, 'w', newline='') as handle:
                handle.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return path

    @staticmethod
    def gnuplot_script(spec: SweepSpec, csv_paths) -> str:
        """
        Plot script over one or more sweep CSVs written side by side: log-scale
        SOP, one curve per (scheme, method, series file).
        """
        if isinstance(csv_paths, (str, Path)):
            csv_paths = [csv_paths]
        csv_paths = [Path(p) for p in csv_paths]
        lines = [
            "set terminal pngcairo size 900,600",
            f"set output '{csv_paths[0].with_suffix('.png').name}'",
            "set datafile separator ','",
            "set logscale y",
            f"set xlabel '{spec.axis.value}'",
            "set ylabel 'secrecy outage probability'",
            "set key outside right",
        ]
        curves = []
        for path in csv_paths:
            series = f" {path.stem}" if len(csv_paths) > 1 else ''
            for scheme in spec.schemes:
                for method in spec.methods:
                    style = 'points pt 7' if method is Method.MC else 'lines'
                    condition = f'strcol(3) eq "{scheme.value}" && strcol(4) eq "{method.value}"'
                    curves.append(f"'{path.name}' every ::1 using 2:({condition} ? $5 : 1/0) "
                                  f"with {style} title '{scheme.value} {method.value}{series}'")
        lines.append("plot " + ", \\\n     ".join(curves))
        return "\n".join(lines) + "\n"


__all__ = ['SweepService', 'format_number']
