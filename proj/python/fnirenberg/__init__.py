"""Existence certificates and reduced bubble flows for the fractional Nirenberg problem."""

import json

from ._core import (  # noqa: F401
    FnirError,
    __version__,
    build_constants,
    canonical_expression,
    critical_points,
    eigenvalues,
    evaluate,
    fit_flatness,
    geodesic_distance,
    green_kernel,
    lanczos_gamma,
    moment_integral,
    radial_integral,
    smallest_eigenvalue,
    stereographic,
    stereographic_inv,
    subset_sum_closed_form,
)
from . import _core


def certify(problem):
    """Run the certificate pipeline. `problem` is a dict or JSON string; returns (report, exit_code)."""
    text = problem if isinstance(problem, str) else json.dumps(problem)
    report, code = _core.certify_json(text)
    return json.loads(report), code


def flow(problem, initial):
    """Integrate the reduced dynamics from `initial` bubbles; returns the report dict."""
    p = problem if isinstance(problem, str) else json.dumps(problem)
    i = initial if isinstance(initial, str) else json.dumps(initial)
    return json.loads(_core.flow_json(p, i))
