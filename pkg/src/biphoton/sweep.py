"""Parameter sweeps over source configurations."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .config import SweepSpec, build_config, check_units
from .errors import BiphotonError
from .observables import report


@dataclass(frozen=True)
class ReportRow:
    """One grid point. ``error`` is empty, or the error class name with no observable values."""

    axis_values: tuple[float, ...]
    observables: dict = field(default_factory=dict)
    error: str = ""


def evaluate_point(doc, observables, eta_domain):
    try:
        check_units(doc)
        rep = report(build_config(doc), eta_domain)
    except BiphotonError as exc:
        return {}, type(exc).__name__
    values = rep.values()
    return {name: values[name] for name in observables}, ""


def _evaluate(args):
    return evaluate_point(*args)


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[ReportRow]:
    """Evaluate every grid point in row-major order.

    Unnormalizable or invalid points are recorded with their error name rather
    than dropped. ``jobs > 1`` spreads points over worker processes; row
    order and values do not depend on it.
    """
    points = list(spec.points())
    tasks = [(doc, spec.observables, spec.eta_domain) for _, doc in points]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_evaluate, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_evaluate(t) for t in tasks]
    return [ReportRow(axes, values, error) for (axes, _), (values, error) in zip(points, results)]
