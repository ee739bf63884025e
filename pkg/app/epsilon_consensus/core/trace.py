import csv
import math
import re
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from .defaults import CSV_DIGITS
from .exceptions import TraceFormatError, ValidationError
from .graph import CommGraph
from ..models.records import SaddlePoint, TraceRecord
from ..problem.instance import ProblemInstance

Trace = List[TraceRecord]

SCALAR_COLUMNS = ('consensus_error', 'objective_gap', 'delta', 'residual',
                  'step_used', 'eps_used')
OPTIONAL_COLUMNS = {'objective_gap', 'delta', 'residual'}
_BLOCK_COLUMN = re.compile(r'^([xv])_(\d+)(?:_c(\d+))?$')


def residual(x: np.ndarray, x1: np.ndarray, x_star: np.ndarray) -> float:
    """
    e(k) = ||x - 1 kron x*|| / ||x1 - 1 kron x*|| over the stacked vector

    x_star may be a full (N, d) block array or a single d-block.
    """
    x = np.asarray(x, dtype=float)
    x1 = np.asarray(x1, dtype=float)
    target = np.broadcast_to(np.asarray(x_star, dtype=float), x1.shape)
    denominator = np.linalg.norm(x1 - target)
    if denominator == 0:
        raise ValidationError("Residual is undefined when the initial state equals x*")
    return float(np.linalg.norm(x - target) / denominator)


def consensus_errors(g: CommGraph, xs: np.ndarray) -> np.ndarray:
    """||L x(k)|| for a (K, N, d) stack of primal states"""
    lx = g.apply_laplacian(np.moveaxis(xs, 0, 1))
    return np.sqrt(np.sum(lx ** 2, axis=(0, 2)))


def build_trace(g: CommGraph, prob: ProblemInstance, xs: np.ndarray, vs: np.ndarray,
                steps_used: np.ndarray, eps_used: np.ndarray,
                reference: Optional[SaddlePoint] = None) -> Trace:
    """Turn stored states into TraceRecords, computing all diagnostics at once"""
    count = xs.shape[0]
    errors = consensus_errors(g, xs)
    gaps = deltas = residuals = [None] * count

    if reference is not None:
        from .reference import delta_series

        gaps = (prob.total_value(xs) - reference.f_star).tolist()
        deltas = delta_series(g, prob, xs, reference).tolist()
        target = np.broadcast_to(reference.x_star, xs.shape[1:])
        denominator = np.linalg.norm(xs[0] - target)
        if denominator > 0:
            distances = np.sqrt(np.sum((xs - target) ** 2, axis=(1, 2)))
            residuals = (distances / denominator).tolist()

    return [
        TraceRecord(
            k=idx + 1,
            x=xs[idx],
            v=vs[idx],
            consensus_error=float(errors[idx]),
            objective_gap=gaps[idx],
            delta=deltas[idx],
            residual=residuals[idx],
            step_used=float(steps_used[idx]),
            eps_used=float(eps_used[idx]),
        )
        for idx in range(count)
    ]


def _tail(trace: Trace, tail_fraction: float) -> Trace:
    if not 0 < tail_fraction <= 1:
        raise ValidationError(f"tail_fraction must be in (0, 1], got {tail_fraction}")
    size = math.ceil(tail_fraction * len(trace))
    if size == 0:
        raise ValidationError("Tail of an empty trace is empty")
    return trace[-size:]


def tail_min_delta(trace: Trace, tail_fraction: float) -> float:
    """min of delta over the last tail_fraction of the records"""
    tail = _tail(trace, tail_fraction)
    if any(record.delta is None for record in tail):
        raise ValidationError("Trace records carry no delta; run with a reference saddle point")
    return min(record.delta for record in tail)


def first_crossing(trace: Trace, x_star, tol: float) -> Optional[int]:
    """First k with max_i |x_i(k) - x*| <= tol and consensus_error <= tol"""
    for record in trace:
        target = np.broadcast_to(np.asarray(x_star, dtype=float), record.x.shape)
        if np.max(np.abs(record.x - target)) <= tol and record.consensus_error <= tol:
            return record.k
    return None


def overshoot(trace: Trace, horizon: int = 100) -> float:
    """max over k <= horizon of max_i |x_i(k)|"""
    early = [np.max(np.abs(record.x)) for record in trace if record.k <= horizon]
    if not early:
        raise ValidationError(f"Trace has no records with k <= {horizon}")
    return float(max(early))


def subgradient_bound(trace: Trace, prob: ProblemInstance) -> float:
    """Largest eps-subgradient norm ||g_i(k)|| seen along a trace"""
    bound = 0.0
    for record in trace:
        eps = 0.0 if math.isnan(record.eps_used) else record.eps_used
        norms = np.linalg.norm(prob.subgradients(record.x, eps), axis=1)
        bound = max(bound, float(np.max(norms)))
    return bound


def summarize(trace: Trace) -> Dict[str, Optional[float]]:
    """Final residual, final consensus error and number of steps"""
    if not trace:
        raise ValidationError("Cannot summarize an empty trace")
    last = trace[-1]
    return {
        'iterations': len(trace) - 1,
        'final_residual': last.residual,
        'final_consensus_error': last.consensus_error,
    }


def _block_columns(prefix: str, node_count: int, dimension: int) -> List[str]:
    if dimension == 1:
        return [f"{prefix}_{i}" for i in range(1, node_count + 1)]
    return [f"{prefix}_{i}_c{c}" for i in range(1, node_count + 1) for c in range(dimension)]


def trace_columns(node_count: int, dimension: int = 1) -> List[str]:
    """Header row of a trace file"""
    return (['k'] + _block_columns('x', node_count, dimension)
            + _block_columns('v', node_count, dimension) + list(SCALAR_COLUMNS))


def _cell(value: Optional[float]) -> str:
    if value is None:
        return ''
    return format(float(value), f'.{CSV_DIGITS}g')


def write_csv(trace: Trace, path: Union[str, Path],
              node_count: Optional[int] = None, dimension: Optional[int] = None) -> None:
    """
    Write a trace as comma separated text with 17 significant digits

    The block layout is taken from the first record; node_count and dimension
    are only needed to give an empty trace a full header.
    """
    if trace:
        node_count, dimension = trace[0].x.shape
    columns = trace_columns(node_count or 0, dimension or 1)

    with open(path, 'w', newline='', encoding='utf-8') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(columns)
        for record in trace:
            row = [str(record.k)]
            row += [_cell(value) for value in record.x.ravel()]
            row += [_cell(value) for value in record.v.ravel()]
            row += [_cell(getattr(record, name)) for name in SCALAR_COLUMNS]
            writer.writerow(row)


def _parse_header(header: Sequence[str]) -> Dict[str, List[str]]:
    missing = [name for name in ('k',) + SCALAR_COLUMNS if name not in header]
    if missing:
        raise TraceFormatError(f"Trace file is missing columns: {', '.join(missing)}")

    blocks: Dict[str, List[str]] = {'x': [], 'v': []}
    for name in header:
        match = _BLOCK_COLUMN.match(name)
        if match:
            blocks[match.group(1)].append(name)
        elif name != 'k' and name not in SCALAR_COLUMNS:
            raise TraceFormatError(f"Unexpected column '{name}'")

    if [c[1:] for c in blocks['x']] != [c[1:] for c in blocks['v']]:
        raise TraceFormatError("x and v columns do not match")
    return blocks


def _infer_layout(columns: List[str]) -> tuple:
    agents = sorted({int(_BLOCK_COLUMN.match(c).group(2)) for c in columns})
    node_count = len(agents)
    dimension = len(columns) // node_count if node_count else 1
    if agents != list(range(1, node_count + 1)) or columns != _block_columns('x', node_count, dimension):
        raise TraceFormatError("Block columns are not x_1..x_N in order")
    return node_count, dimension


def _number(text: str, column: str, line: int, optional: bool = False) -> Optional[float]:
    if text == '':
        if optional:
            return None
        raise TraceFormatError(f"Line {line}: empty cell in column '{column}'")
    try:
        return float(text)
    except ValueError:
        raise TraceFormatError(f"Line {line}: non-numeric value {text!r} in column '{column}'")


def read_csv(path: Union[str, Path]) -> Trace:
    """Read a trace written by write_csv()"""
    try:
        with open(path, newline='', encoding='utf-8') as handle:
            rows = list(csv.reader(handle))
    except OSError as e:
        raise TraceFormatError(f"Cannot read trace file {path}: {e}")

    if not rows:
        raise TraceFormatError(f"Trace file {path} has no header row")
    header = rows[0]
    blocks = _parse_header(header)
    node_count, dimension = _infer_layout(blocks['x'])
    position = {name: idx for idx, name in enumerate(header)}

    trace: Trace = []
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise TraceFormatError(f"Line {line}: expected {len(header)} cells, got {len(row)}")
        k = _number(row[position['k']], 'k', line)
        if not float(k).is_integer():
            raise TraceFormatError(f"Line {line}: k must be an integer, got {k}")

        x = np.array([_number(row[position[c]], c, line) for c in blocks['x']])
        v = np.array([_number(row[position[c]], c, line) for c in blocks['v']])
        scalars = {
            name: _number(row[position[name]], name, line, optional=name in OPTIONAL_COLUMNS)
            for name in SCALAR_COLUMNS
        }
        trace.append(TraceRecord(
            k=int(k),
            x=x.reshape(node_count, dimension),
            v=v.reshape(node_count, dimension),
            **scalars,
        ))
    return trace


def write_residual_comparison(trace_a: Trace, trace_b: Trace, path: Union[str, Path]) -> None:
    """Joined residual columns k, residual_a, residual_b over the common k range"""
    by_k = {record.k: record.residual for record in trace_b}
    with open(path, 'w', newline='', encoding='utf-8') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(['k', 'residual_a', 'residual_b'])
        for record in trace_a:
            if record.k in by_k:
                writer.writerow([str(record.k), _cell(record.residual), _cell(by_k[record.k])])
